"""Supervector bundles over the chart: sections, End-valued forms, supertrace.

The bundle is trivial, E = chart x R^{p|q}; slots 1..p are even, the rest odd.
Koszul signs use total degrees: moving an End entry of parity eps past a form
of degree a costs (-1)^{eps*a}.
"""

from __future__ import annotations

from .coeffs import Poly
from .errors import DimensionError, ParityError, RankError
from .exterior import Form, ext_d, wedge


class SuperRank:
    """Ranks (p|q) of the even and odd summands."""

    __slots__ = ("p", "q")

    def __init__(self, p, q):
        if p < 0 or q < 0 or p + q < 1:
            raise RankError(f"bad rank ({p}|{q})")
        self.p = p
        self.q = q

    @property
    def n(self):
        return self.p + self.q

    def parity(self, i):
        """Parity of slot i (0-based)."""
        return 0 if i < self.p else 1

    def end_parity(self, i, j):
        return (self.parity(i) + self.parity(j)) % 2

    def __eq__(self, other):
        return isinstance(other, SuperRank) and (self.p, self.q) == (other.p, other.q)

    def __repr__(self):
        return f"SuperRank({self.p}|{self.q})"


def _check_rank(a, b):
    if a.rank != b.rank:
        raise RankError(f"rank mismatch: {a.rank} vs {b.rank}")


class ESection:
    """An element of Omega(M; E): one Form per bundle slot."""

    __slots__ = ("rank", "m", "entries")

    def __init__(self, rank, entries):
        entries = list(entries)
        if len(entries) != rank.n:
            raise RankError("one entry per bundle slot required")
        self.rank = rank
        self.m = entries[0].m
        self.entries = entries

    @classmethod
    def zero(cls, rank, m):
        return cls(rank, [Form.zero(m) for _ in range(rank.n)])

    @classmethod
    def basis(cls, rank, m, j):
        """The constant basis section e_j (0-based slot)."""
        entries = [Form.zero(m) for _ in range(rank.n)]
        entries[j] = Form.const(m, 1)
        return cls(rank, entries)

    def __add__(self, other):
        _check_rank(self, other)
        return ESection(self.rank, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        _check_rank(self, other)
        return ESection(self.rank, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return ESection(self.rank, [-a for a in self.entries])

    def scale(self, c):
        return ESection(self.rank, [a.scale(c) for a in self.entries])

    def wedge_left(self, alpha):
        """alpha ^ s, the left module action of Omega(M)."""
        return ESection(self.rank, [wedge(alpha, a) for a in self.entries])

    def is_zero(self):
        return all(a.is_zero() for a in self.entries)

    def __eq__(self, other):
        return (isinstance(other, ESection) and self.rank == other.rank
                and self.entries == other.entries)

    def __repr__(self):
        return f"ESection({[f.to_str() for f in self.entries]})"


class EndForm:
    """An element of Omega(M; End(E)): a matrix of Forms, row index first."""

    __slots__ = ("rank", "m", "entries")

    def __init__(self, rank, entries):
        entries = [list(row) for row in entries]
        n = rank.n
        if len(entries) != n or any(len(row) != n for row in entries):
            raise RankError("entry matrix must be (p+q) x (p+q)")
        self.rank = rank
        self.m = entries[0][0].m
        self.entries = entries

    @classmethod
    def zero(cls, rank, m):
        z = Form.zero(m)
        return cls(rank, [[z for _ in range(rank.n)] for _ in range(rank.n)])

    @classmethod
    def identity(cls, rank, m):
        return cls(rank, [[Form.const(m, 1 if i == j else 0) for j in range(rank.n)]
                          for i in range(rank.n)])

    def __add__(self, other):
        _check_rank(self, other)
        return EndForm(self.rank, [[a + b for a, b in zip(r1, r2)]
                                   for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other):
        _check_rank(self, other)
        return EndForm(self.rank, [[a - b for a, b in zip(r1, r2)]
                                   for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self):
        return EndForm(self.rank, [[-a for a in row] for row in self.entries])

    def scale(self, c):
        return EndForm(self.rank, [[a.scale(c) for a in row] for row in self.entries])

    def wedge_left(self, alpha):
        return EndForm(self.rank, [[wedge(alpha, a) for a in row] for row in self.entries])

    def is_zero(self):
        return all(a.is_zero() for row in self.entries for a in row)

    def __eq__(self, other):
        return (isinstance(other, EndForm) and self.rank == other.rank
                and self.entries == other.entries)

    def form_degrees(self):
        ds = set()
        for row in self.entries:
            for f in row:
                ds.update(f.degrees())
        return sorted(ds)

    def degree_part(self, d):
        return EndForm(self.rank, [[f.homogeneous_part(d) for f in row]
                                   for row in self.entries])

    def total_parity_part(self, parity):
        """The piece whose form degree + End parity is congruent to parity."""
        out = EndForm.zero(self.rank, self.m)
        for i in range(self.rank.n):
            for j in range(self.rank.n):
                eps = self.rank.end_parity(i, j)
                f = self.entries[i][j]
                keep = {idx: p for idx, p in f.terms.items()
                        if (len(idx) + eps) % 2 == parity % 2}
                out.entries[i][j] = Form(self.m, keep)
        return out

    def is_block_diagonal(self):
        p = self.rank.p
        for i in range(self.rank.n):
            for j in range(self.rank.n):
                if (i < p) != (j < p) and not self.entries[i][j].is_zero():
                    return False
        return True

    def check_total_parity(self, parity, what="tensor"):
        if not (self - self.total_parity_part(parity)).is_zero():
            raise ParityError(f"{what} must have pure total parity {parity % 2}")

    def __repr__(self):
        return f"EndForm({[[f.to_str() for f in row] for row in self.entries]})"


def end_apply(W, s):
    """Apply an End-valued form to a section, with total-degree Koszul signs."""
    _check_rank(W, s)
    n = W.rank.n
    out = []
    for i in range(n):
        acc = Form.zero(W.m)
        for j in range(n):
            wij = W.entries[i][j]
            if wij.is_zero():
                continue
            eps = W.rank.end_parity(i, j)
            for d, piece in s.entries[j].graded_pieces():
                sign = (-1) ** (eps * d)
                acc = acc + wedge(wij, piece).scale(sign)
        out.append(acc)
    return ESection(s.rank, out)


def end_compose(W1, W2):
    """Matrix product with wedge entries, signed so composition matches
    successive application."""
    _check_rank(W1, W2)
    n = W1.rank.n
    rows = []
    for i in range(n):
        row = []
        for k in range(n):
            acc = Form.zero(W1.m)
            for j in range(n):
                a = W1.entries[i][j]
                b = W2.entries[j][k]
                if a.is_zero() or b.is_zero():
                    continue
                eps = W1.rank.end_parity(i, j)
                for d, piece in b.graded_pieces():
                    acc = acc + wedge(a, piece).scale((-1) ** (eps * d))
            row.append(acc)
        rows.append(row)
    return EndForm(W1.rank, rows)


def end_power(W, k):
    out = EndForm.identity(W.rank, W.m)
    for _ in range(k):
        out = end_compose(out, W)
    return out


def end_d(W, allow_param=False):
    """Entrywise exterior differential of an End-valued form."""
    return EndForm(W.rank, [[ext_d(f, allow_param=allow_param) for f in row]
                            for row in W.entries])


def end_commutator(W1, W2):
    """Graded commutator for pieces of pure total parity."""
    p1 = _pure_total_parity(W1)
    p2 = _pure_total_parity(W2)
    sign = (-1) ** (p1 * p2)
    return end_compose(W1, W2) - end_compose(W2, W1).scale(sign)


def _pure_total_parity(W):
    pars = set()
    for i in range(W.rank.n):
        for j in range(W.rank.n):
            eps = W.rank.end_parity(i, j)
            for d in W.entries[i][j].degrees():
                pars.add((d + eps) % 2)
    if len(pars) > 1:
        raise ParityError("mixed total parity where a homogeneous operator was expected")
    return pars.pop() if pars else 0


def dnablaE(omega, s):
    """The covariant differential d^nabla on sections, from a 1-form matrix."""
    _check_rank(omega, s)
    for row in omega.entries:
        for f in row:
            if not f.is_zero() and f.degrees() != [1]:
                raise ParityError("connection matrix entries must be 1-forms")
    d_part = ESection(s.rank, [ext_d(f) for f in s.entries])
    return d_part + end_apply(omega, s)


def supertrace(W):
    """Str(W) = sum of even-even diagonal minus odd-odd diagonal."""
    acc = Form.zero(W.m)
    for i in range(W.rank.n):
        f = W.entries[i][i]
        acc = acc + (f if i < W.rank.p else -f)
    return acc
