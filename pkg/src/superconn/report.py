"""Rendering helpers: text tables, JSON payloads, and the report figure."""

from __future__ import annotations

import json

from .dsl import endform_to_json, form_to_json, superform_to_json


def superform_degree_profile(s):
    """Term counts of a SuperForm keyed by (xi-degree, theta-degree)."""
    profile = {}
    for (xi, th), f in s.terms.items():
        key = (len(xi), sum(th))
        profile[key] = profile.get(key, 0) + len(f.terms)
    return profile


def render_profile_figure(profiles, path, title="superform degree profile"):
    """Bar chart of term counts per bidegree; one group per labeled profile.

    profiles is a list of (label, profile) pairs as produced by
    superform_degree_profile.  Writes the figure to path.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    keys = sorted({k for _, p in profiles for k in p})
    if not keys:
        keys = [(0, 0)]
    fig, ax = plt.subplots(figsize=(max(4, len(keys) * 0.9), 3.2))
    width = 0.8 / max(1, len(profiles))
    for i, (label, profile) in enumerate(profiles):
        xs = [j + i * width for j in range(len(keys))]
        ys = [profile.get(k, 0) for k in keys]
        ax.bar(xs, ys, width=width, label=label)
    ax.set_xticks([j + 0.4 - width / 2 for j in range(len(keys))])
    ax.set_xticklabels([f"xi{a} th{b}" for a, b in keys])
    ax.set_ylabel("terms")
    ax.set_title(title)
    if len(profiles) > 1:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def chern_report_json(report, names):
    return {
        "k": report.k,
        "superform": superform_to_json(report.superform, names),
        "closedness_witness": superform_to_json(report.closedness_witness, names),
        "closed": report.closedness_witness.is_zero(),
        "kappa": form_to_json(report.kappa_projection, names),
        "classical": form_to_json(report.classical_comparison, names),
    }


def chern_report_text(report, names):
    lines = [f"k = {report.k}",
             f"chern superform: {report.superform.to_str(names)}",
             f"closed: {report.closedness_witness.is_zero()}",
             f"kappa projection: {report.kappa_projection.to_str(names)}",
             f"classical comparison: {report.classical_comparison.to_str(names)}"]
    return "\n".join(lines)


def endform_text(W, names):
    return "\n".join("  ".join(f.to_str(names) for f in row) for row in W.entries)


def emit(payload, text, fmt):
    """Return the delimited output for the chosen format."""
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=True)
    return text
