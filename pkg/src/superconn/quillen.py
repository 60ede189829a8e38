"""Quillen superconnections: application, curvature, classical Chern forms."""

from __future__ import annotations

from .bundles import (ESection, EndForm, SuperRank, dnablaE, end_apply,
                      end_compose, end_d, end_power, supertrace)
from .coeffs import Poly
from .errors import ParityError, RankError
from .exterior import Form


class SuperconnectionD:
    """D = d + omegaE + P on the trivial bundle chart x R^{p|q}.

    omegaE is the block-diagonal degree-preserving base connection (1-form
    entries); P collects the odd-total-degree End-valued forms.
    """

    __slots__ = ("rank", "m", "omegaE", "P")

    def __init__(self, rank, omegaE, P):
        if omegaE.rank != rank or P.rank != rank:
            raise RankError("component rank mismatch")
        if not omegaE.is_block_diagonal():
            raise ParityError("base connection matrix must be block-diagonal")
        for row in omegaE.entries:
            for f in row:
                if not f.is_zero() and f.degrees() != [1]:
                    raise ParityError("base connection entries must be 1-forms")
        P.check_total_parity(1, "superconnection tensor P")
        self.rank = rank
        self.m = omegaE.m
        self.omegaE = omegaE
        self.P = P

    @classmethod
    def trivial(cls, rank, m):
        return cls(rank, EndForm.zero(rank, m), EndForm.zero(rank, m))

    def full_matrix(self):
        """omegaE + P, the complete odd operator matrix."""
        return self.omegaE + self.P


class DegreeOneData:
    """The four tensors of a total-degree-1 superconnection.

    t1[k] / t2[k] are the even 1-form blocks evaluated on the k-th coordinate
    field (p x p and q x q Poly matrices); t3 (p x q) and t4 (q x p) are the
    odd 0-form blocks E1 -> E0 and E0 -> E1.
    """

    __slots__ = ("rank", "m", "t1", "t2", "t3", "t4")

    def __init__(self, rank, m, t1, t2, t3, t4):
        self.rank = rank
        self.m = m
        self.t1 = t1
        self.t2 = t2
        self.t3 = t3
        self.t4 = t4

    def to_superconnection(self):
        rank, m = self.rank, self.m
        p, q = rank.p, rank.q
        P = EndForm.zero(rank, m)
        for k in range(1, m + 1):
            for i in range(p):
                for j in range(p):
                    poly = self.t1[k - 1][i][j]
                    if not poly.is_zero():
                        P.entries[i][j] = P.entries[i][j] + Form(m, {(k,): poly})
            for i in range(q):
                for j in range(q):
                    poly = self.t2[k - 1][i][j]
                    if not poly.is_zero():
                        P.entries[p + i][p + j] = P.entries[p + i][p + j] + Form(m, {(k,): poly})
        for i in range(p):
            for j in range(q):
                poly = self.t3[i][j]
                if not poly.is_zero():
                    P.entries[i][p + j] = P.entries[i][p + j] + Form.from_poly(poly)
        for i in range(q):
            for j in range(p):
                poly = self.t4[i][j]
                if not poly.is_zero():
                    P.entries[p + i][j] = P.entries[p + i][j] + Form.from_poly(poly)
        return SuperconnectionD(rank, EndForm.zero(rank, m), P)


def sc_apply(D, s):
    """Apply the superconnection to a section."""
    if D.rank != s.rank:
        raise RankError("rank mismatch")
    return dnablaE(D.omegaE, s) + end_apply(D.P, s)


def sc_curvature(D):
    """Closed-form curvature R = d(omega + P) + (omega + P)^2.

    Valid because omega + P has odd total degree, which makes the cross terms
    between the entrywise differential and the matrix action cancel.
    """
    A = D.full_matrix()
    return end_d(A) + end_compose(A, A)


def sc_curvature_bruteforce(D, check_linearity=True):
    """Extract D^2 entry by entry from basis sections; oracle for sc_curvature.

    Optionally confirms on x-multiples that D^2 is Omega(M)-linear before
    trusting the extraction.
    """
    rank, m = D.rank, D.m
    cols = []
    for j in range(rank.n):
        ej = ESection.basis(rank, m, j)
        cols.append(sc_apply(D, sc_apply(D, ej)))
    R = EndForm(rank, [[cols[j].entries[i] for j in range(rank.n)] for i in range(rank.n)])
    if check_linearity:
        from .errors import ConsistencyError
        x1 = Form.from_poly(Poly.coord(m, 1))
        for j in range(rank.n):
            s = ESection.basis(rank, m, j).wedge_left(x1)
            lhs = sc_apply(D, sc_apply(D, s))
            rhs = end_apply(R, s)
            if not (lhs - rhs).is_zero():
                raise ConsistencyError("D^2 is not Omega(M)-linear; sign bug")
    return R


def classical_chern(D, k):
    """Str(R^k) for the closed-form curvature; unnormalized Chern form."""
    if k < 1:
        raise ValueError("k must be positive")
    R = sc_curvature(D)
    return supertrace(end_power(R, k))
