"""Command line driver.

Exit codes: 0 all asserted identities hold, 1 an identity failed,
2 input error (diagnostics printed to stderr).
"""

from __future__ import annotations

import os
import sys

import click

from .chern import chern_report
from .correspondence import decompose_superconnection, induce, same_induced
from .dsl import endform_to_json, form_to_json, parse_spec
from .errors import SuperconnError, TruncationError
from .quillen import sc_curvature
from .report import (chern_report_json, chern_report_text, emit, endform_text,
                     render_profile_figure, superform_degree_profile)
from .verify import VERIFY_NAMES, run_verify


def _load_model(path, theta_cap):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(2)
    model, diags = parse_spec(text)
    for d in diags:
        click.echo(f"{path}: {d}", err=True)
    if model is None:
        sys.exit(2)
    if theta_cap is not None:
        model.theta_cap = theta_cap
    return model


def _seed(seed):
    env = os.environ.get("SUPERCONN_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            click.echo("error: SUPERCONN_SEED must be an integer", err=True)
            sys.exit(2)
    return seed


def _guard(fn):
    try:
        return fn()
    except TruncationError as e:
        click.echo(f"error: theta budget exceeded; need theta_cap >= {e.needed}, "
                   f"have {e.cap} (raise with --theta-cap)", err=True)
        sys.exit(2)
    except SuperconnError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(2)


fmt_option = click.option("--format", "fmt", type=click.Choice(["json", "text"]),
                          default="text", show_default=True)
cap_option = click.option("--theta-cap", type=int, default=None,
                          help="Override the model's theta truncation budget.")
trials_option = click.option("--trials", type=int, default=20, show_default=True)
seed_option = click.option("--seed", type=int, default=0, show_default=True,
                           help="Randomness seed; SUPERCONN_SEED overrides.")


@click.group()
def main():
    """Exact symbolic superconnection calculus on polynomial charts."""


@main.command("induce")
@click.argument("spec_file", type=click.Path())
@fmt_option
@cap_option
def induce_cmd(spec_file, fmt, theta_cap):
    """Induce a Quillen superconnection from the graded connection data."""
    model = _load_model(spec_file, theta_cap)
    D = _guard(lambda: induce(model.graded_connection()))
    names = model.coord_names
    payload = {"omegaE": endform_to_json(D.omegaE, names),
               "P": endform_to_json(D.P, names)}
    text = "omegaE:\n" + endform_text(D.omegaE, names) + \
           "\nP:\n" + endform_text(D.P, names)
    click.echo(emit(payload, text, fmt))


@main.command()
@click.argument("spec_file", type=click.Path())
@fmt_option
@cap_option
def decompose(spec_file, fmt, theta_cap):
    """Decompose the model's superconnection as induced + N."""
    model = _load_model(spec_file, theta_cap)
    D = _guard(model.superconnection)
    C, N = _guard(lambda: decompose_superconnection(D))
    names = model.coord_names
    payload = {"N": endform_to_json(N.matrix, names),
               "K0": [endform_to_json(v, names) for v in C.K0.values],
               "gamma_flat": True, "K1_zero": True}
    text = "N:\n" + endform_text(N.matrix, names) + "\n" + "\n".join(
        f"K0[{k + 1}]:\n" + endform_text(v, names)
        for k, v in enumerate(C.K0.values))
    click.echo(emit(payload, text, fmt))


@main.command()
@click.argument("spec_file", type=click.Path())
@fmt_option
@cap_option
def curvature(spec_file, fmt, theta_cap):
    """Curvature of the model's superconnection."""
    model = _load_model(spec_file, theta_cap)
    D = _guard(model.superconnection)
    R = _guard(lambda: sc_curvature(D))
    names = model.coord_names
    click.echo(emit({"curvature": endform_to_json(R, names)},
                    endform_text(R, names), fmt))


@main.command()
@click.argument("spec_file", type=click.Path())
@click.option("--k", type=int, default=1, show_default=True)
@click.option("--figure", type=click.Path(), default=None,
              help="Also render the superform degree profile to this file.")
@fmt_option
@cap_option
def chern(spec_file, k, figure, fmt, theta_cap):
    """Chern superform report for the graded connection."""
    model = _load_model(spec_file, theta_cap)
    C = _guard(model.graded_connection)
    report = _guard(lambda: chern_report(C, k))
    names = model.coord_names
    if figure:
        render_profile_figure(
            [(f"k={k}", superform_degree_profile(report.superform))],
            figure, title=f"Chern superform terms, k={k}")
    click.echo(emit(chern_report_json(report, names),
                    chern_report_text(report, names), fmt))
    if not report.closedness_witness.is_zero():
        sys.exit(1)


@main.command("same-induced")
@click.argument("spec_file", type=click.Path())
@click.argument("other_file", type=click.Path())
@fmt_option
@cap_option
def same_induced_cmd(spec_file, other_file, fmt, theta_cap):
    """Whether two models' graded connections induce the same superconnection."""
    m1 = _load_model(spec_file, theta_cap)
    m2 = _load_model(other_file, theta_cap)
    result = _guard(lambda: same_induced(m1.graded_connection(),
                                         m2.graded_connection()))
    click.echo(emit({"same_induced": result}, str(result).lower(), fmt))
    if not result:
        sys.exit(1)


@main.command()
@click.argument("check", type=click.Choice(VERIFY_NAMES + ["all"]))
@click.argument("spec_file", type=click.Path())
@fmt_option
@cap_option
@trials_option
@seed_option
def verify(check, spec_file, fmt, theta_cap, trials, seed):
    """Verify the named identity (or all) on the model, exactly."""
    model = _load_model(spec_file, theta_cap)
    results = _guard(lambda: run_verify(model, [check], seed=_seed(seed),
                                        trials=trials))
    payload = [{"check": n, "passed": ok, "detail": d} for n, ok, d in results]
    text = "\n".join(f"{'PASS' if ok else 'FAIL'} {n}: {d}"
                     for n, ok, d in results)
    click.echo(emit(payload, text, fmt))
    if not all(ok for _, ok, _ in results):
        sys.exit(1)


@main.command()
@click.argument("spec_file", type=click.Path())
@fmt_option
@cap_option
@trials_option
@seed_option
def run(spec_file, fmt, theta_cap, trials, seed):
    """Execute the [run] commands listed in the spec file."""
    model = _load_model(spec_file, theta_cap)
    failed = False
    for command in model.commands:
        parts = command.split()
        if not parts:
            continue
        if parts[0] == "verify" and len(parts) == 2 and \
                parts[1] in VERIFY_NAMES + ["all"]:
            results = _guard(lambda: run_verify(model, [parts[1]],
                                                seed=_seed(seed), trials=trials))
            for n, ok, d in results:
                click.echo(f"{'PASS' if ok else 'FAIL'} {n}: {d}")
                failed = failed or not ok
        elif parts[0] == "chern" and len(parts) == 2 and parts[1].startswith("k="):
            k = int(parts[1][2:])
            C = _guard(model.graded_connection)
            report = _guard(lambda: chern_report(C, k))
            click.echo(chern_report_text(report, model.coord_names))
            failed = failed or not report.closedness_witness.is_zero()
        else:
            click.echo(f"error: unknown command {command!r}", err=True)
            sys.exit(2)
    if failed:
        sys.exit(1)


if __name__ == "__main__":
    main()
