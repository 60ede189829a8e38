"""The dictionary between graded connections and Quillen superconnections.

A graded connection induces a superconnection through three maps: take its
covariant graded differential, restrict to sections, and insert the exterior
differential's derivation.  In closed form the induced tensor is
P = antisym_K0(K0) + tilde_K1(K1, gamma).  Conversely every superconnection
decomposes as an induced one plus an algebraic End(1) 0-form N, the one term
no graded connection can produce.
"""

from __future__ import annotations

from fractions import Fraction

from .bundles import EndForm, ESection, end_compose, end_d, end_apply
from .cartan import (ESuperForm, GradedConnection, K0Tensor, K1Tensor,
                     covariant_sform_d, graded_curvature, insert_derivation)
from .coeffs import Poly
from .derivations import DerivationSpec
from .errors import ConsistencyError, DimensionError, ParityError
from .exterior import Christoffel, Form, VectorField, interior, wedge
from .quillen import SuperconnectionD, sc_apply, sc_curvature


class NTensor:
    """An End(1)-valued function: the purely algebraic part of a superconnection."""

    __slots__ = ("rank", "m", "matrix")

    def __init__(self, matrix):
        for i in range(matrix.rank.n):
            for j in range(matrix.rank.n):
                f = matrix.entries[i][j]
                if f.is_zero():
                    continue
                if matrix.rank.end_parity(i, j) != 1:
                    raise ParityError("N must be purely odd on the bundle")
                if f.degrees() != [0]:
                    raise ParityError("N entries must be functions")
        self.rank = matrix.rank
        self.m = matrix.m
        self.matrix = matrix

    @classmethod
    def zero(cls, rank, m):
        return cls(EndForm.zero(rank, m))

    def is_zero(self):
        return self.matrix.is_zero()


def ext_d_derivation(m):
    """The exterior differential as a flat-basis derivation: A_k = dx^k."""
    return DerivationSpec(1, [Form.dx(m, k) for k in range(1, m + 1)],
                          [Form.zero(m)] * m)


def antisym_K0(K0):
    """sum_k dx^k ^ K0(d_k): the antisymmetrization entering the induced tensor."""
    values = K0.values
    m = values[0].m
    out = EndForm.zero(values[0].rank, m)
    for k in range(1, m + 1):
        out = out + values[k - 1].wedge_left(Form.dx(m, k))
    return out


def tilde_K1(K1, G):
    """sum_{k,q,r} dx^k ^ gamma^r_{kq} dx^q ^ K1(d_r).

    This is the K1 contribution of inserting the exterior differential into
    the induced connection 1-superform; it vanishes for flat gamma.
    """
    values = K1.values
    m = values[0].m
    out = EndForm.zero(values[0].rank, m)
    if G.is_flat():
        return out
    for k in range(1, m + 1):
        for r in range(1, m + 1):
            gform = Form(m, {(q,): G.symbol(r, k, q) for q in range(1, m + 1)
                             if not G.symbol(r, k, q).is_zero()})
            two = wedge(Form.dx(m, k), gform)
            if not two.is_zero():
                out = out + values[r - 1].wedge_left(two)
    return out


def induce(C):
    """The Quillen superconnection induced by a graded connection."""
    P = antisym_K0(C.K0) + tilde_K1(C.K1, C.G)
    return SuperconnectionD(C.rank, C.omegaE, P)


def induce_matches_insertion(C, s):
    """Check on one section that the closed form agrees with the superform
    route: insert the exterior differential into the covariant graded
    differential of the embedded section."""
    D = induce(C)
    direct = sc_apply(D, s)
    S = ESuperForm.from_section(s, C.theta_cap)
    dS = covariant_sform_d(C, S)
    d_ext = ext_d_derivation(C.m)
    routed = ESection(s.rank, [insert_derivation(d_ext, e) for e in dS.entries])
    return (direct - routed).is_zero()


def decompose_superconnection(D):
    """Write D as induce(C) + N with the canonical flat-reference section.

    N is the form-degree-0 piece of P (necessarily End(1)); each form-degree-j
    piece P_j with j >= 1 is absorbed into K0(d_k) = (1/j) i_k P_j, which
    antisym_K0 maps back to P_j by the Euler identity.  K1 = 0 and gamma flat.
    """
    rank, m = D.rank, D.m
    N = NTensor(D.P.degree_part(0))
    k0_values = [EndForm.zero(rank, m) for _ in range(m)]
    degrees = [d for d in D.P.form_degrees() if d >= 1]
    for j in degrees:
        Pj = D.P.degree_part(j)
        for k in range(1, m + 1):
            e_k = VectorField.basis(m, k)
            contracted = EndForm(rank, [[interior(e_k, f).scale(Fraction(1, j))
                                         for f in row] for row in Pj.entries])
            k0_values[k - 1] = k0_values[k - 1] + contracted
    C = GradedConnection(Christoffel.flat(m), D.omegaE,
                         K0Tensor(k0_values), K1Tensor.zero(rank, m))
    if not (induce(C).P + N.matrix - D.P).is_zero():
        raise ConsistencyError("decomposition failed to round-trip")
    return C, N


def with_N(D, N):
    """The superconnection D + N (adds the algebraic tensor to P)."""
    return SuperconnectionD(D.rank, D.omegaE, D.P + N.matrix)


def same_induced(C1, C2):
    """Whether two graded connections over the same (gamma, omegaE) induce the
    same superconnection; decided through the closed-form difference."""
    if C1.m != C2.m or C1.rank != C2.rank:
        raise DimensionError("unsupported comparison: different chart or rank")
    if C1.G.gamma != C2.G.gamma or not (C1.omegaE - C2.omegaE).is_zero():
        raise DimensionError("unsupported comparison: different gamma or base connection")
    dk0 = K0Tensor([a - b for a, b in zip(C1.K0.values, C2.K0.values)])
    d_anti = antisym_K0(dk0)
    dk1 = K1Tensor([a - b for a, b in zip(C1.K1.values, C2.K1.values)])
    d_tilde = tilde_K1(dk1, C1.G)
    return d_anti.is_zero() and d_tilde.is_zero()


def nn_d_of_N(C, N):
    """The covariant derivative of N along the exterior differential.

    For the induced superconnection with odd matrix A = omegaE + P, the graded
    commutator [D, N] = dN + A.N + N.A since both operators are odd.
    """
    A = induce(C).full_matrix()
    return end_d(N.matrix) + end_compose(A, N.matrix) + end_compose(N.matrix, A)


def curvature_relation(C, N):
    """Both sides of R^{D} = (1/2) R(d,d) + nn_d N + N^2 for D = induce(C) + N."""
    D = with_N(induce(C), N)
    lhs = sc_curvature(D)
    d_ext = ext_d_derivation(C.m)
    half = graded_curvature(C, d_ext, d_ext).scale(Fraction(1, 2))
    rhs = half + nn_d_of_N(C, N) + end_compose(N.matrix, N.matrix)
    return lhs, rhs
