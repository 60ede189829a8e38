"""Seeded verification of the main identities for a parsed model.

Each check returns (name, passed, detail).  The checks are exact; randomness
only chooses the probe inputs, never a tolerance.
"""

from __future__ import annotations

import random

from .bundles import EndForm
from .cartan import (ESuperForm, GradedConnection, K0Tensor, K1Tensor,
                     covariant_sform_d, curvature_2sform, endsuper_apply,
                     sform_d, sform_mul, super_trace)
from .chern import chern_match, chern_superform, is_closed, kappa, transgression
from .correspondence import (NTensor, curvature_relation,
                             decompose_superconnection, induce,
                             induce_matches_insertion, with_N)
from .errors import SuperconnError
from .exterior import ext_d
from .quillen import sc_apply, sc_curvature, sc_curvature_bruteforce
from .sampling import (random_K0, random_K1, random_homogeneous_form,
                       random_section, random_superconnection, random_superform)

VERIFY_NAMES = ["leibniz", "decomposition", "curvature-relation", "bianchi",
                "transgression", "chern-match"]


def check_leibniz(model, rng, trials):
    """Quillen Leibniz rule for the induced superconnection, plus the
    superform-route consistency of the induction itself."""
    C = model.graded_connection()
    D = induce(C)
    m, rank = model.m, model.rank
    for i in range(trials):
        s = random_section(rank, m, rng)
        a = random_homogeneous_form(m, rng.randint(0, m), rng)
        deg = a.degree()
        lhs = sc_apply(D, s.wedge_left(a))
        rhs = s.wedge_left(ext_d(a)) + sc_apply(D, s).wedge_left(a).scale((-1) ** deg)
        if not (lhs - rhs).is_zero():
            return False, f"Leibniz failed on trial {i + 1}"
        if not induce_matches_insertion(C, s):
            return False, f"induction route mismatch on trial {i + 1}"
    return True, f"{trials} trials"


def check_decomposition(model, rng, trials):
    """Round trip decompose/induce on the model's superconnection and on
    random ones, including pure-N cases."""
    try:
        D0 = model.superconnection()
        targets = [D0]
    except SuperconnError as e:
        return False, str(e)
    for _ in range(trials):
        targets.append(random_superconnection(model.rank, model.m, rng))
    for i, D in enumerate(targets):
        C, N = decompose_superconnection(D)
        back = with_N(induce(C), N)
        if not ((back.P - D.P).is_zero() and (back.omegaE - D.omegaE).is_zero()):
            return False, f"round trip failed on target {i}"
    return True, f"{len(targets)} superconnections"


def check_curvature_relation(model, rng, trials):
    """R^D = (1/2) R(d,d) + nn_d N + N^2 for the model data, and oracle
    equivalence of the closed-form curvature."""
    C = model.graded_connection()
    N = NTensor(model.N) if model.N is not None else NTensor.zero(model.rank, model.m)
    lhs, rhs = curvature_relation(C, N)
    if not (lhs - rhs).is_zero():
        return False, "curvature relation failed on the model data"
    for i in range(trials):
        D = random_superconnection(model.rank, model.m, rng)
        if not (sc_curvature(D) - sc_curvature_bruteforce(D)).is_zero():
            return False, f"curvature oracle mismatch on trial {i + 1}"
    return True, "model data plus oracle trials"


def check_bianchi(model, rng, trials):
    """[d^nn, R] = 0: the covariant differential commutes with the curvature
    action on random E-valued superforms."""
    C = model.graded_connection()
    if C.theta_cap < 4:
        return False, "needs theta cap >= 4"
    R = curvature_2sform(C)
    m, rank = model.m, model.rank
    for i in range(trials):
        S = ESuperForm(rank, [random_superform(m, rng, C.theta_cap, max_theta=1,
                                               max_terms=2, max_poly_degree=1)
                              for _ in range(rank.n)])
        lhs = covariant_sform_d(C, endsuper_apply(R, S))
        rhs = endsuper_apply(R, covariant_sform_d(C, S))
        if not (lhs - rhs).is_zero():
            return False, f"Bianchi failed on trial {i + 1}"
    return True, f"{trials} trials"


def check_transgression(model, rng, trials):
    """chern(C1) - chern(C0) = d(eta) against random partners of the model
    connection, for k = 1 and, budget permitting, k = 2."""
    C0 = model.graded_connection()
    ks = [1] + ([2] if C0.theta_cap >= 4 else [])
    m, rank = model.m, model.rank
    for i in range(max(1, trials // 4)):
        C1 = GradedConnection(C0.G, C0.omegaE,
                              random_K0(rank, m, rng), random_K1(rank, m, rng),
                              theta_cap=C0.theta_cap)
        for k in ks:
            eta = transgression(C0, C1, k)
            diff = chern_superform(C1, k) - chern_superform(C0, k)
            if not (diff - sform_d(eta)).is_zero():
                return False, f"transgression failed, k={k}, trial {i + 1}"
            if not is_closed(chern_superform(C0, k)):
                return False, f"Chern superform not closed, k={k}"
    return True, f"k in {ks}"


def check_chern_match(model, rng, trials):
    """Classical/superform Chern comparison on the K-stripped connection."""
    C = model.graded_connection()
    stripped = GradedConnection(C.G, C.omegaE,
                                K0Tensor.zero(model.rank, model.m),
                                K1Tensor.zero(model.rank, model.m),
                                theta_cap=C.theta_cap)
    ks = [1] + ([2] if C.theta_cap >= 4 else [])
    for k in ks:
        a, b = chern_match(stripped, k)
        if not (a - b).is_zero():
            return False, f"chern match failed at k={k}"
    return True, f"k in {ks} on the K-stripped connection"


CHECKS = {
    "leibniz": check_leibniz,
    "decomposition": check_decomposition,
    "curvature-relation": check_curvature_relation,
    "bianchi": check_bianchi,
    "transgression": check_transgression,
    "chern-match": check_chern_match,
}


def run_verify(model, names, seed=0, trials=20):
    """Run the named checks (or all) in declaration order; returns a list of
    (name, passed, detail)."""
    if names == ["all"]:
        names = VERIFY_NAMES
    results = []
    for name in names:
        rng = random.Random(seed)
        try:
            ok, detail = CHECKS[name](model, rng, trials)
        except SuperconnError as e:
            ok, detail = False, f"{type(e).__name__}: {e}"
        results.append((name, ok, detail))
    return results
