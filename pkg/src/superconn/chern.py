"""Chern superforms, transgression, and the projection to ordinary forms.

Chern forms here are unnormalized supertraces of curvature powers; no
1/(2 pi i)^k k! factors, since exactness of the identities is the point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bundles import EndForm
from .cartan import (EndSuperForm, GradedConnection, SuperForm,
                     connection_superform, curvature_2sform, endsuper_compose,
                     endsuper_power, sform_d, super_trace)
from .coeffs import Poly
from .errors import DimensionError, ParityError, TruncationError
from .exterior import Christoffel, Form, ext_d
from .quillen import SuperconnectionD, classical_chern


@dataclass
class ChernReport:
    k: int
    superform: SuperForm
    closedness_witness: SuperForm
    kappa_projection: Form
    classical_comparison: Form


def chern_superform(C, k):
    """Str(R^k) for the curvature 2-superform of C; a closed even 2k-superform."""
    if k < 1:
        raise ValueError("k must be positive")
    if C.theta_cap < 2 * k:
        raise TruncationError(2 * k, C.theta_cap)
    R = curvature_2sform(C)
    return super_trace(endsuper_power(R, k))


def is_closed(s, allow_param=False):
    return sform_d(s, allow_param=allow_param).is_zero()


def kappa(s):
    """Project to ordinary forms: xi^k -> dx^k, theta -> 0, coefficients to
    their degree-0 part.  Intertwines the two differentials."""
    m = s.m
    terms = {}
    for (xi, th), f in s.terms.items():
        if any(th):
            continue
        p = f.function_part()
        if p.is_zero():
            continue
        if xi in terms:
            terms[xi] = terms[xi] + p
        else:
            terms[xi] = p
    return Form(m, terms)


def _scale_tensor_values(values0, values1):
    """Interpolate tensor values linearly in the parameter t."""
    t = None
    out = []
    for a, b in zip(values0, values1):
        if t is None:
            t = Poly.param(a.m)
        diff = b - a
        out.append(a + EndForm(a.rank, [[f.poly_mul(t) for f in row]
                                        for row in diff.entries]))
    return out


def _integrate_form(f):
    terms = {}
    for idx, p in f.terms.items():
        q = p.integrate_unit()
        if not q.is_zero():
            terms[idx] = q
    return Form(f.m, terms)


def transgression(C0, C1, k):
    """A primitive eta with chern(C1, k) - chern(C0, k) = d(eta).

    Interpolates the connection line C_t, integrates
    k * Str(Pdot . R_t^{k-1}) over t in [0, 1] with exact polynomial
    t-dependence.
    """
    if C0.m != C1.m or C0.rank != C1.rank:
        raise DimensionError("transgression requires matching chart and rank")
    if C0.G.gamma != C1.G.gamma or not (C0.omegaE - C1.omegaE).is_zero():
        raise DimensionError("transgression requires shared gamma and base connection")
    cap = max(C0.theta_cap, C1.theta_cap)
    if cap < 2 * k:
        raise TruncationError(2 * k, cap)
    from .cartan import K0Tensor, K1Tensor
    k0_t = K0Tensor.__new__(K0Tensor)
    k0_t.values = _scale_tensor_values(C0.K0.values, C1.K0.values)
    k1_t = K1Tensor.__new__(K1Tensor)
    k1_t.values = _scale_tensor_values(C0.K1.values, C1.K1.values)
    Ct = GradedConnection.__new__(GradedConnection)
    Ct.m, Ct.rank, Ct.G = C0.m, C0.rank, C0.G
    Ct.omegaE, Ct.K0, Ct.K1, Ct.theta_cap = C0.omegaE, k0_t, k1_t, cap
    Pdot = connection_superform(C1) - connection_superform(C0)
    if Pdot.is_zero():
        return SuperForm.zero(C0.m, cap)
    Rt = curvature_2sform(Ct, allow_param=True)
    Rpow = EndSuperForm.identity(C0.rank, C0.m, cap)
    for _ in range(k - 1):
        Rpow = endsuper_compose(Rpow, Rt)
    integrand = super_trace(endsuper_compose(Pdot, Rpow)).scale(k)
    return integrand.map_coeffs(_integrate_form)


def chern_match(C, k):
    """Both pipelines for the class comparison, under the K = 0 hypothesis.

    Returns (kappa of the Chern superform, classical Chern form of the plain
    base-connection superconnection); the two are equal exactly.
    """
    for v in C.K0.values + C.K1.values:
        if not v.is_zero():
            raise ParityError("chern_match requires K0 = K1 = 0")
    super_side = kappa(chern_superform(C, k))
    D = SuperconnectionD(C.rank, C.omegaE, EndForm.zero(C.rank, C.m))
    classical_side = classical_chern(D, k)
    return super_side, classical_side


def supertangent_chern(m, k, omega=None, dual=False):
    """Chern form of the rank (m|m) bundle TM + T*M with a block connection.

    omega is an optional m x m matrix of 1-forms for the tangent block; the
    cotangent block carries the dual connection -omega^T.  With dual=True the
    roles are swapped (the dual bundle), which flips ch_k by (-1)^k.  With no
    omega the chart-flat connection is used and every class vanishes.
    """
    from .bundles import SuperRank
    rank = SuperRank(m, m)
    mat = EndForm.zero(rank, m)
    if omega is not None:
        for i in range(m):
            for j in range(m):
                f = omega[i][j]
                minus_t = -omega[j][i]
                if not dual:
                    mat.entries[i][j] = f
                    mat.entries[m + i][m + j] = minus_t
                else:
                    mat.entries[i][j] = minus_t
                    mat.entries[m + i][m + j] = f
    D = SuperconnectionD(rank, mat, EndForm.zero(rank, m))
    return classical_chern(D, k)


def chern_report(C, k):
    """Assemble the full report for one k."""
    s = chern_superform(C, k)
    witness = sform_d(s)
    proj = kappa(s)
    from .correspondence import induce
    classical = classical_chern(induce(C), k)
    return ChernReport(k, s, witness, proj, classical)
