"""The Cartan-Koszul supermanifold: superforms and graded connections.

Superforms live in generators xi^k (bidegree (1,0), dual to the flat
covariant derivative along x_k) and theta^k (bidegree (1,1), dual to the
interior product i_k).  The product sign rule is bigraded-commutative,
(-1)^(k1*k2 + p1*p2) on bidegrees (k, p): xi's anticommute among themselves
and with theta's, theta's commute among themselves, and an odd form
coefficient anticommutes with every theta.

Coefficients are stored on the left of the generator monomial.  The paper's
right-module convention is absorbed into the insertion sign: pairing a
derivation with beta*theta^k contributes (-1)^{deg beta} B_k ^ beta, which is
exactly what makes <delta; d(alpha)> = delta(alpha) come out exact.
"""

from __future__ import annotations

from .bundles import ESection, EndForm, SuperRank, _check_rank
from .coeffs import Poly
from .derivations import DerivationSpec, apply_derivation, der_bracket
from .errors import (ConsistencyError, DimensionError, ParityError, RankError,
                     TruncationError)
from .exterior import Christoffel, Form, VectorField, interior, sort_indices, wedge

DEFAULT_THETA_CAP = 6


class SuperForm:
    """An element of Omega(M, Omega(M)) on the chart, theta-truncated.

    terms maps (xi_indices, theta_exponents) to Form coefficients; xi indices
    are strictly increasing tuples, theta exponents a length-m vector.
    """

    __slots__ = ("m", "theta_cap", "terms")

    def __init__(self, m, theta_cap=DEFAULT_THETA_CAP, terms=None):
        self.m = m
        self.theta_cap = theta_cap
        clean = {}
        if terms:
            for (xi, th), f in terms.items():
                xi = tuple(xi)
                th = tuple(th)
                if len(th) != m:
                    raise DimensionError("theta exponent vector has wrong length")
                if sum(th) > theta_cap:
                    raise TruncationError(sum(th), theta_cap)
                if f.is_zero():
                    continue
                key = (xi, th)
                if key in clean:
                    s = clean[key] + f
                    if s.is_zero():
                        del clean[key]
                    else:
                        clean[key] = s
                else:
                    clean[key] = f
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, m, theta_cap=DEFAULT_THETA_CAP):
        return cls(m, theta_cap)

    @classmethod
    def from_form(cls, f, theta_cap=DEFAULT_THETA_CAP):
        """Embed a superfunction (ordinary form) as a 0-superform."""
        th = tuple([0] * f.m)
        return cls(f.m, theta_cap, {((), th): f})

    @classmethod
    def monomial(cls, coeff, xi=(), theta=(), theta_cap=DEFAULT_THETA_CAP):
        m = coeff.m
        th = list(theta) if theta else [0] * m
        return cls(m, theta_cap, {(tuple(xi), tuple(th)): coeff})

    @classmethod
    def xi(cls, m, k, theta_cap=DEFAULT_THETA_CAP):
        return cls.monomial(Form.const(m, 1), xi=(k,), theta_cap=theta_cap)

    @classmethod
    def theta(cls, m, k, theta_cap=DEFAULT_THETA_CAP):
        th = [0] * m
        th[k - 1] = 1
        return cls.monomial(Form.const(m, 1), theta=th, theta_cap=theta_cap)

    # -- structure ----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def has_param(self):
        return any(f.has_param() for f in self.terms.values())

    def zdegrees(self):
        return sorted({len(xi) + sum(th) for (xi, th) in self.terms})

    def zdegree_part(self, z):
        return SuperForm(self.m, self.theta_cap,
                         {k: f for k, f in self.terms.items() if len(k[0]) + sum(k[1]) == z})

    def atoms(self):
        """Yield (coeff_piece, xi, th, zdeg, parity) over homogeneous atoms.

        Each atom has a single coefficient form degree d; its superform
        Z-degree is |xi| + |th| and its Z_2 parity (d + |th|) mod 2.
        """
        for (xi, th), f in self.terms.items():
            z = len(xi) + sum(th)
            for d, piece in f.graded_pieces():
                yield piece, xi, th, z, (d + sum(th)) % 2

    # -- arithmetic ---------------------------------------------------------

    def _budget(self, other):
        if self.m != other.m:
            raise DimensionError("chart dimension mismatch")
        return max(self.theta_cap, other.theta_cap)

    def __add__(self, other):
        cap = self._budget(other)
        terms = dict(self.terms)
        for k, f in other.terms.items():
            s = terms.get(k)
            s = f if s is None else s + f
            if s.is_zero():
                terms.pop(k, None)
            else:
                terms[k] = s
        out = SuperForm(self.m, cap)
        out.terms = terms
        return out

    def __neg__(self):
        out = SuperForm(self.m, self.theta_cap)
        out.terms = {k: -f for k, f in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        out = SuperForm(self.m, self.theta_cap)
        out.terms = {k: f.scale(c) for k, f in self.terms.items()}
        out.terms = {k: f for k, f in out.terms.items() if not f.is_zero()}
        return out

    def map_coeffs(self, fn):
        terms = {}
        for k, f in self.terms.items():
            g = fn(f)
            if not g.is_zero():
                terms[k] = g
        out = SuperForm(self.m, self.theta_cap)
        out.terms = terms
        return out

    def __eq__(self, other):
        return (isinstance(other, SuperForm) and self.m == other.m
                and self.terms == other.terms)

    def to_str(self, names=None):
        if not self.terms:
            return "0"
        parts = []
        for (xi, th) in sorted(self.terms, key=lambda k: (len(k[0]) + sum(k[1]), k)):
            f = self.terms[(xi, th)]
            gens = [f"xi{k}" for k in xi]
            for k, e in enumerate(th, start=1):
                if e == 1:
                    gens.append(f"th{k}")
                elif e > 1:
                    gens.append(f"th{k}^{e}")
            body = f.to_str(names)
            if gens:
                tail = "*".join(gens)
                body = f"({body})*{tail}" if body != "1" else tail
            parts.append(body)
        return " + ".join(parts)

    def __repr__(self):
        return f"SuperForm({self.to_str()})"


def sform_mul(a, b):
    """Bigraded-commutative product of superforms."""
    cap = a._budget(b)
    out = SuperForm(a.m, cap)
    for (I, ta), alpha in a.terms.items():
        na = sum(ta)
        for (J, tb), beta in b.terms.items():
            if na + sum(tb) > cap:
                raise TruncationError(na + sum(tb), cap)
            sxi, xi = sort_indices(I + J)
            if sxi == 0:
                continue
            th = tuple(x + y for x, y in zip(ta, tb))
            # theta^a crossing xi^J costs (-1)^{|a||J|}
            base_sign = sxi * ((-1) ** (na * len(J)))
            for d, piece in beta.graded_pieces():
                # coefficient of the right factor crossing theta^a
                sign = base_sign * ((-1) ** (na * d))
                coeff = wedge(alpha, piece).scale(sign)
                if coeff.is_zero():
                    continue
                out = out + SuperForm(a.m, cap, {(xi, th): coeff})
    return out


def form_times(alpha, S):
    """Left multiplication of a superform by an ordinary form."""
    return sform_mul(SuperForm.from_form(alpha, S.theta_cap), S)


def graded_d_of_superfunction(alpha, theta_cap=DEFAULT_THETA_CAP):
    """d(alpha) = sum_k (d_k alpha) xi^k + sum_k (-1)^(deg-1) (i_k alpha) theta^k."""
    m = alpha.m
    out = SuperForm.zero(m, theta_cap)
    for k in range(1, m + 1):
        dk = Form(m, {idx: p.partial(k) for idx, p in alpha.terms.items()
                      if not p.partial(k).is_zero()})
        if not dk.is_zero():
            out = out + SuperForm.monomial(dk, xi=(k,), theta_cap=theta_cap)
        acc = Form.zero(m)
        for d, piece in alpha.graded_pieces():
            ins = interior(VectorField.basis(m, k), piece)
            acc = acc + ins.scale((-1) ** (d - 1))
        if not acc.is_zero():
            th = [0] * m
            th[k - 1] = 1
            out = out + SuperForm.monomial(acc, theta=th, theta_cap=theta_cap)
    return out


def sform_d(S, allow_param=False):
    """The graded differential, a bidegree-(1,0) derivation with d(xi)=d(theta)=0."""
    from .errors import ParameterError
    if not allow_param and S.has_param():
        raise ParameterError("graded differential applied to a t-dependent superform")
    out = SuperForm.zero(S.m, S.theta_cap)
    for (xi, th), f in S.terms.items():
        tail = SuperForm(S.m, S.theta_cap, {(xi, th): Form.const(S.m, 1)})
        out = out + sform_mul(graded_d_of_superfunction(f, S.theta_cap), tail)
    return out


def insert_derivation(d, S):
    """Left insertion of a derivation into a 1-superform, first slot.

    <delta; beta xi^k> = A_k ^ beta and <delta; beta theta^k> =
    (-1)^{deg beta} B_k ^ beta; these signs make <delta; d alpha> = delta(alpha).
    """
    m = S.m
    out = Form.zero(m)
    for (xi, th), f in S.terms.items():
        z = len(xi) + sum(th)
        if z != 1:
            raise DimensionError("insertion defined on 1-superforms only")
        if xi:
            out = out + wedge(d.A[xi[0] - 1], f)
        else:
            k = th.index(1) + 1
            for deg, piece in f.graded_pieces():
                out = out + wedge(d.B[k - 1], piece).scale((-1) ** deg)
    return out


# ---------------------------------------------------------------------------
# vector- and End-valued superforms


class ESuperForm:
    """E-valued superform: one SuperForm per bundle slot."""

    __slots__ = ("rank", "m", "entries")

    def __init__(self, rank, entries):
        entries = list(entries)
        if len(entries) != rank.n:
            raise RankError("one entry per bundle slot required")
        self.rank = rank
        self.m = entries[0].m
        self.entries = entries

    @classmethod
    def zero(cls, rank, m, theta_cap=DEFAULT_THETA_CAP):
        return cls(rank, [SuperForm.zero(m, theta_cap) for _ in range(rank.n)])

    @classmethod
    def from_section(cls, s, theta_cap=DEFAULT_THETA_CAP):
        return cls(s.rank, [SuperForm.from_form(f, theta_cap) for f in s.entries])

    @classmethod
    def basis(cls, rank, m, j, theta_cap=DEFAULT_THETA_CAP):
        entries = [SuperForm.zero(m, theta_cap) for _ in range(rank.n)]
        entries[j] = SuperForm.from_form(Form.const(m, 1), theta_cap)
        return cls(rank, entries)

    def __add__(self, other):
        _check_rank(self, other)
        return ESuperForm(self.rank, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        _check_rank(self, other)
        return ESuperForm(self.rank, [a - b for a, b in zip(self.entries, other.entries)])

    def scale(self, c):
        return ESuperForm(self.rank, [a.scale(c) for a in self.entries])

    def is_zero(self):
        return all(a.is_zero() for a in self.entries)

    def __eq__(self, other):
        return (isinstance(other, ESuperForm) and self.rank == other.rank
                and self.entries == other.entries)


class EndSuperForm:
    """End(E)-valued superform: a matrix of SuperForms."""

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
    def zero(cls, rank, m, theta_cap=DEFAULT_THETA_CAP):
        z = SuperForm.zero(m, theta_cap)
        return cls(rank, [[z for _ in range(rank.n)] for _ in range(rank.n)])

    @classmethod
    def identity(cls, rank, m, theta_cap=DEFAULT_THETA_CAP):
        return cls(rank, [[SuperForm.from_form(Form.const(m, 1 if i == j else 0), theta_cap)
                           for j in range(rank.n)] for i in range(rank.n)])

    def __add__(self, other):
        _check_rank(self, other)
        return EndSuperForm(self.rank, [[a + b for a, b in zip(r1, r2)]
                                        for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other):
        _check_rank(self, other)
        return EndSuperForm(self.rank, [[a - b for a, b in zip(r1, r2)]
                                        for r1, r2 in zip(self.entries, other.entries)])

    def scale(self, c):
        return EndSuperForm(self.rank, [[a.scale(c) for a in row] for row in self.entries])

    def is_zero(self):
        return all(a.is_zero() for row in self.entries for a in row)

    def __eq__(self, other):
        return (isinstance(other, EndSuperForm) and self.rank == other.rank
                and self.entries == other.entries)


def endsuper_apply(W, S):
    """Apply an End-valued superform, Koszul-signed by End parity and atom parity."""
    _check_rank(W, S)
    n = W.rank.n
    out = []
    for i in range(n):
        acc = SuperForm.zero(W.m, S.entries[0].theta_cap)
        for j in range(n):
            wij = W.entries[i][j]
            if wij.is_zero():
                continue
            eps = W.rank.end_parity(i, j)
            for piece, xi, th, z, par in S.entries[j].atoms():
                atom = SuperForm.monomial(piece, xi, th, S.entries[j].theta_cap)
                acc = acc + sform_mul(wij, atom).scale((-1) ** (eps * par))
        out.append(acc)
    return ESuperForm(S.rank, out)


def endsuper_compose(W1, W2):
    _check_rank(W1, W2)
    n = W1.rank.n
    rows = []
    for i in range(n):
        row = []
        for k in range(n):
            acc = SuperForm.zero(W1.m, W1.entries[0][0].theta_cap)
            for j in range(n):
                a = W1.entries[i][j]
                b = W2.entries[j][k]
                if a.is_zero() or b.is_zero():
                    continue
                eps = W1.rank.end_parity(i, j)
                for piece, xi, th, z, par in b.atoms():
                    atom = SuperForm.monomial(piece, xi, th, b.theta_cap)
                    acc = acc + sform_mul(a, atom).scale((-1) ** (eps * par))
            row.append(acc)
        rows.append(row)
    return EndSuperForm(W1.rank, rows)


def endsuper_power(W, k):
    out = EndSuperForm.identity(W.rank, W.m, W.entries[0][0].theta_cap)
    for _ in range(k):
        out = endsuper_compose(out, W)
    return out


def super_trace(W):
    """Supertrace of an EndSuperForm, valued in superforms."""
    acc = SuperForm.zero(W.m, W.entries[0][0].theta_cap)
    for i in range(W.rank.n):
        f = W.entries[i][i]
        acc = acc + (f if i < W.rank.p else -f)
    return acc


# ---------------------------------------------------------------------------
# graded connections


class K0Tensor:
    """Values of K0 at the coordinate fields: m EndForms of even total degree."""

    __slots__ = ("values",)

    def __init__(self, values):
        values = list(values)
        for v in values:
            v.check_total_parity(0, "K0 value")
        self.values = values

    @classmethod
    def zero(cls, rank, m):
        return cls([EndForm.zero(rank, m) for _ in range(m)])


class K1Tensor:
    """Values of K1 at the coordinate fields: m EndForms of odd total degree."""

    __slots__ = ("values",)

    def __init__(self, values):
        values = list(values)
        for v in values:
            v.check_total_parity(1, "K1 value")
        self.values = values

    @classmethod
    def zero(cls, rank, m):
        return cls([EndForm.zero(rank, m) for _ in range(m)])


class GradedConnection:
    """A graded connection given by (gamma, omegaE, K0, K1)."""

    __slots__ = ("m", "rank", "G", "omegaE", "K0", "K1", "theta_cap")

    def __init__(self, G, omegaE, K0, K1, theta_cap=DEFAULT_THETA_CAP):
        self.m = G.m
        self.rank = omegaE.rank
        if not omegaE.is_block_diagonal():
            raise ParityError("compatible base connection must be block-diagonal")
        for row in omegaE.entries:
            for f in row:
                if not f.is_zero() and f.degrees() != [1]:
                    raise ParityError("base connection entries must be 1-forms")
        if len(K0.values) != self.m or len(K1.values) != self.m:
            raise DimensionError("K tensors need one value per coordinate")
        self.G = G
        self.omegaE = omegaE
        self.K0 = K0
        self.K1 = K1
        self.theta_cap = theta_cap

    @classmethod
    def trivial(cls, rank, m, theta_cap=DEFAULT_THETA_CAP):
        return cls(Christoffel.flat(m), EndForm.zero(rank, m),
                   K0Tensor.zero(rank, m), K1Tensor.zero(rank, m), theta_cap)

    def omega_at(self, k):
        """omegaE contracted with the k-th coordinate field; 0-form entries."""
        e_k = VectorField.basis(self.m, k)
        return EndForm(self.rank, [[interior(e_k, f) for f in row]
                                   for row in self.omegaE.entries])

    def covariant_coefficient(self, k):
        """The EndForm acting together with the flat derivative along x_k.

        omegaE(d_k) + K0(d_k) plus the flat-basis correction
        sum_{r,q} gamma^r_{kq} dx^q ^ K1(d_r) coming from re-expressing the
        user connection's covariant derivative in the flat frame.
        """
        M = self.omega_at(k) + self.K0.values[k - 1]
        if not self.G.is_flat():
            for r in range(1, self.m + 1):
                gform = Form(self.m, {(q,): self.G.symbol(r, k, q)
                                      for q in range(1, self.m + 1)
                                      if not self.G.symbol(r, k, q).is_zero()})
                if not gform.is_zero():
                    M = M + self.K1.values[r - 1].wedge_left(gform)
        return M


def nn_apply(C, d, s):
    """Evaluate the graded connection along a derivation on a section."""
    if C.rank != s.rank:
        raise RankError("rank mismatch")
    m = C.m
    n = C.rank.n
    op = EndForm.zero(C.rank, m)
    for k in range(1, m + 1):
        Ak = d.A[k - 1]
        if not Ak.is_zero():
            op = op + C.covariant_coefficient(k).wedge_left(Ak)
        Bk = d.B[k - 1]
        if not Bk.is_zero():
            op = op + C.K1.values[k - 1].wedge_left(Bk)
    par = d.parity()
    out = []
    for i in range(n):
        acc = apply_derivation(d, s.entries[i])
        for j in range(n):
            oij = op.entries[i][j]
            if oij.is_zero():
                continue
            for deg, piece in s.entries[j].graded_pieces():
                acc = acc + wedge(piece, oij).scale((-1) ** (par * deg))
        out.append(acc)
    return ESection(s.rank, out)


def connection_superform(C):
    """The bidegree-(1,0) End-valued superform P with d^nn = d + P."""
    m, rank, cap = C.m, C.rank, C.theta_cap
    entries = [[SuperForm.zero(m, cap) for _ in range(rank.n)] for _ in range(rank.n)]
    for k in range(1, m + 1):
        Mk = C.covariant_coefficient(k)
        K1k = C.K1.values[k - 1]
        th = [0] * m
        th[k - 1] = 1
        for i in range(rank.n):
            for j in range(rank.n):
                f = Mk.entries[i][j]
                if not f.is_zero():
                    entries[i][j] = entries[i][j] + SuperForm.monomial(f, xi=(k,), theta_cap=cap)
                g = K1k.entries[i][j]
                for deg, piece in g.graded_pieces():
                    entries[i][j] = entries[i][j] + SuperForm.monomial(
                        piece.scale((-1) ** deg), theta=th, theta_cap=cap)
    return EndSuperForm(rank, entries)


def covariant_sform_d(C, S, allow_param=False):
    """The covariant graded differential d^nn = d + P on E-valued superforms."""
    if C.rank != S.rank:
        raise RankError("rank mismatch")
    P = connection_superform(C)
    out = []
    for i in range(C.rank.n):
        acc = sform_d(S.entries[i], allow_param=allow_param)
        for j in range(C.rank.n):
            pij = P.entries[i][j]
            if pij.is_zero():
                continue
            for piece, xi, th, z, par in S.entries[j].atoms():
                atom = SuperForm.monomial(piece, xi, th, S.entries[j].theta_cap)
                acc = acc + sform_mul(atom, pij).scale((-1) ** z)
        out.append(acc)
    return ESuperForm(S.rank, out)


def graded_curvature(C, d1, d2):
    """R(d1, d2) = [nn_{d1}, nn_{d2}] - nn_{[d1,d2]}, extracted as an EndForm."""
    m, rank = C.m, C.rank
    sign = (-1) ** (d1.parity() * d2.parity())
    br = der_bracket(d1, d2)

    def op(s):
        a = nn_apply(C, d1, nn_apply(C, d2, s))
        b = nn_apply(C, d2, nn_apply(C, d1, s))
        c = nn_apply(C, br, s)
        return a - b.scale(sign) - c

    cols = [op(ESection.basis(rank, m, j)) for j in range(rank.n)]
    R = EndForm(rank, [[cols[j].entries[i] for j in range(rank.n)] for i in range(rank.n)])
    # the operator must be Omega(M)-linear; probe with an even and an odd multiple
    opar = (d1.degree + d2.degree) % 2
    for alpha, apar in ((Form.from_poly(Poly.coord(m, 1)), 0), (Form.dx(m, 1), 1)):
        for j in range(rank.n):
            s = ESection.basis(rank, m, j).wedge_left(alpha)
            want = op(s)
            got = _end_apply_left(R, s, opar)
            if not (want - got).is_zero():
                raise ConsistencyError("graded curvature is not Omega(M)-linear")
    return R


def _end_apply_left(R, s, opar):
    """Apply R to s written with coefficients on the left of basis sections."""
    n = R.rank.n
    out = []
    for i in range(n):
        acc = Form.zero(R.m)
        for j in range(n):
            rij = R.entries[i][j]
            if rij.is_zero():
                continue
            for deg, piece in s.entries[j].graded_pieces():
                acc = acc + wedge(piece, rij).scale((-1) ** (opar * deg))
        out.append(acc)
    return ESection(s.rank, out)


def curvature_2sform(C, allow_param=False):
    """The End-valued 2-superform with (d^nn)^2 = R . s, with a linearity check."""
    m, rank, cap = C.m, C.rank, C.theta_cap
    if cap < 2:
        raise TruncationError(2, cap)

    def sq(S):
        return covariant_sform_d(C, covariant_sform_d(C, S, allow_param=allow_param),
                                 allow_param=allow_param)

    cols = [sq(ESuperForm.basis(rank, m, j, cap)) for j in range(rank.n)]
    R = EndSuperForm(rank, [[cols[j].entries[i] for j in range(rank.n)]
                            for i in range(rank.n)])
    # probe Omega(M, Omega(M))-linearity with a few superform multiples
    probes = [SuperForm.from_form(Form.dx(m, 1), cap), SuperForm.xi(m, 1, cap)]
    if cap >= 3:
        probes.append(SuperForm.theta(m, 1, cap))
    for lam in probes:
        for j in range(rank.n):
            S = ESuperForm.basis(rank, m, j, cap)
            S = ESuperForm(rank, [sform_mul(lam, e) for e in S.entries])
            want = sq(S)
            got = ESuperForm(rank, [sform_mul(lam, e) for e in
                                    endsuper_apply(R, ESuperForm.basis(rank, m, j, cap)).entries])
            if not (want - got).is_zero():
                raise ConsistencyError("(d^nn)^2 is not superform-linear")
    return R
