"""Differential forms on a polynomial chart and their basic derivations.

Forms are stored as maps from strictly increasing index tuples to polynomial
coefficients, so equality is a dictionary comparison.  Index tuples are
1-based throughout, matching the coordinate numbering of the DSL.
"""

from __future__ import annotations

from fractions import Fraction

from .coeffs import Poly
from .errors import DimensionError, HomogeneityError, ParameterError


def sort_indices(indices):
    """Sort an index tuple, returning (sign, sorted_tuple) or (0, None) on repeats."""
    idx = list(indices)
    sign = 1
    # insertion sort; the tuples are tiny
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return 0, None
    return sign, tuple(idx)


class Form:
    """A Z-graded differential form with Poly coefficients."""

    __slots__ = ("m", "terms")

    def __init__(self, m, terms=None):
        self.m = m
        clean = {}
        if terms:
            for idx, p in terms.items():
                idx = tuple(idx)
                if any(not 1 <= i <= m for i in idx):
                    raise DimensionError(f"form index {idx} out of range for m={m}")
                if list(idx) != sorted(set(idx)):
                    raise DimensionError(f"form indices must be strictly increasing: {idx}")
                if p.m != m:
                    raise DimensionError("coefficient chart dimension mismatch")
                if p.is_zero():
                    continue
                if idx in clean:
                    s = clean[idx] + p
                    if s.is_zero():
                        del clean[idx]
                    else:
                        clean[idx] = s
                else:
                    clean[idx] = p
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, m):
        return cls(m)

    @classmethod
    def from_poly(cls, p):
        return cls(p.m, {(): p})

    @classmethod
    def const(cls, m, c):
        return cls.from_poly(Poly.const(m, c))

    @classmethod
    def dx(cls, m, *indices):
        """The basis form dx^{i1} ^ ... ^ dx^{ik} (canonicalized)."""
        sign, idx = sort_indices(indices)
        if sign == 0:
            return cls(m)
        return cls(m, {idx: Poly.const(m, sign)})

    # -- structure ----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def has_param(self):
        return any(p.has_param() for p in self.terms.values())

    def degrees(self):
        return sorted({len(i) for i in self.terms})

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def degree(self):
        """Degree of a homogeneous form; 0 for the zero form."""
        ds = self.degrees()
        if len(ds) > 1:
            raise HomogeneityError(f"form has mixed degrees {ds}")
        return ds[0] if ds else 0

    def homogeneous_part(self, d):
        return Form(self.m, {i: p for i, p in self.terms.items() if len(i) == d})

    def graded_pieces(self):
        """Yield (degree, homogeneous Form) for each nonzero degree piece."""
        for d in self.degrees():
            yield d, self.homogeneous_part(d)

    def function_part(self):
        """The degree-0 coefficient as a Poly."""
        return self.terms.get((), Poly.zero(self.m))

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other):
        if self.m != other.m:
            raise DimensionError(f"chart dimension mismatch: {self.m} vs {other.m}")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for i, p in other.terms.items():
            s = terms.get(i)
            s = p if s is None else s + p
            if s.is_zero():
                terms.pop(i, None)
            else:
                terms[i] = s
        out = Form(self.m)
        out.terms = terms
        return out

    def __neg__(self):
        out = Form(self.m)
        out.terms = {i: -p for i, p in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        out = Form(self.m)
        if c != 0:
            out.terms = {i: p.scale(c) for i, p in self.terms.items()}
        return out

    def poly_mul(self, q):
        out = Form(self.m)
        terms = {}
        for i, p in self.terms.items():
            r = p * q
            if not r.is_zero():
                terms[i] = r
        out.terms = terms
        return out

    def __eq__(self, other):
        return isinstance(other, Form) and self.m == other.m and self.terms == other.terms

    def __hash__(self):
        return hash((self.m, frozenset((i, hash(p)) for i, p in self.terms.items())))

    def to_str(self, names=None):
        if not self.terms:
            return "0"
        parts = []
        for idx in sorted(self.terms, key=lambda i: (len(i), i)):
            p = self.terms[idx]
            body = p.to_str(names)
            if idx:
                dxs = f"dx({','.join(map(str, idx))})"
                if body == "1":
                    body = dxs
                elif body == "-1":
                    body = f"-{dxs}"
                else:
                    body = f"({body})*{dxs}" if (" + " in body or " - " in body) else f"{body}*{dxs}"
            parts.append(body)
        return " + ".join(parts)

    def __repr__(self):
        return f"Form({self.to_str()})"


class VectorField:
    """A vector field with Poly components along the coordinate frame."""

    __slots__ = ("m", "components")

    def __init__(self, components):
        components = list(components)
        if not components:
            raise DimensionError("empty component list")
        self.m = components[0].m
        for c in components:
            if c.m != self.m:
                raise DimensionError("component chart dimension mismatch")
        if len(components) != self.m:
            raise DimensionError("need one component per coordinate")
        self.components = components

    @classmethod
    def basis(cls, m, k):
        """The coordinate field along x_k."""
        comps = [Poly.const(m, 1 if j == k else 0) for j in range(1, m + 1)]
        return cls(comps)


class VectorForm:
    """A vector-valued form: m Form components, all homogeneous of one degree."""

    __slots__ = ("m", "degree", "components")

    def __init__(self, degree, components):
        components = list(components)
        if not components:
            raise DimensionError("empty component list")
        self.m = components[0].m
        if len(components) != self.m:
            raise DimensionError("need one component per coordinate frame vector")
        for c in components:
            if c.m != self.m:
                raise DimensionError("component chart dimension mismatch")
            if not c.is_zero() and c.degree() != degree:
                raise HomogeneityError(
                    f"component of degree {c.degrees()} in a degree-{degree} vector form")
        self.degree = degree
        self.components = components


class Christoffel:
    """Connection symbols gamma[r][p][q] with nabla_{d_p} d_q = gamma^r_{pq} d_r."""

    __slots__ = ("m", "gamma")

    def __init__(self, m, gamma=None):
        self.m = m
        if gamma is None:
            z = Poly.zero(m)
            gamma = [[[z for _ in range(m)] for _ in range(m)] for _ in range(m)]
        self.gamma = gamma

    @classmethod
    def flat(cls, m):
        return cls(m)

    @classmethod
    def from_entries(cls, m, entries):
        """entries maps (r, p, q) 1-based to Poly."""
        g = cls(m)
        gamma = [[[Poly.zero(m) for _ in range(m)] for _ in range(m)] for _ in range(m)]
        for (r, p, q), poly in entries.items():
            gamma[r - 1][p - 1][q - 1] = poly
        g.gamma = gamma
        return g

    def symbol(self, r, p, q):
        """gamma^r_{pq}, 1-based indices."""
        return self.gamma[r - 1][p - 1][q - 1]

    def is_flat(self):
        return all(p.is_zero() for plane in self.gamma for row in plane for p in row)


# ---------------------------------------------------------------------------
# operations


def wedge(a, b):
    """Exterior product; graded-commutative for homogeneous arguments."""
    a._check(b)
    out = Form(a.m)
    terms = {}
    for i1, p1 in a.terms.items():
        for i2, p2 in b.terms.items():
            sign, idx = sort_indices(i1 + i2)
            if sign == 0:
                continue
            p = (p1 * p2).scale(sign)
            if p.is_zero():
                continue
            s = terms.get(idx)
            s = p if s is None else s + p
            if s.is_zero():
                terms.pop(idx, None)
            else:
                terms[idx] = s
    out.terms = terms
    return out


def wedge_all(forms):
    it = iter(forms)
    out = next(it)
    for f in it:
        out = wedge(out, f)
    return out


def ext_d(a, allow_param=False):
    """Exterior differential.  t is inert; by default its presence is an error."""
    if not allow_param and a.has_param():
        raise ParameterError("ext_d applied to a form containing the parameter t")
    out = Form(a.m)
    for idx, p in a.terms.items():
        for i in range(1, a.m + 1):
            dp = p.partial(i)
            if dp.is_zero():
                continue
            sign, nidx = sort_indices((i,) + idx)
            if sign == 0:
                continue
            piece = Form(a.m, {nidx: dp.scale(sign)})
            out = out + piece
    return out


def interior(X, a):
    """Interior product i_X; an antiderivation of degree -1."""
    if X.m != a.m:
        raise DimensionError("chart dimension mismatch")
    out = Form(a.m)
    for idx, p in a.terms.items():
        for r, i in enumerate(idx):
            comp = X.components[i - 1]
            if comp.is_zero():
                continue
            nidx = idx[:r] + idx[r + 1:]
            coeff = (p * comp).scale((-1) ** r)
            if coeff.is_zero():
                continue
            out = out + Form(a.m, {nidx: coeff})
    return out


def nabla_form(G, X, a):
    """Covariant derivative of a form along X, acting through the dual rule.

    On functions this is X(f); on dx^j it is -gamma^j_{pq} X^p dx^q, the
    action induced on T*M by the connection gamma on TM.
    """
    m = a.m
    out = Form(m)
    # derivative of the coefficients
    for idx, p in a.terms.items():
        dp = Poly.zero(m)
        for k in range(1, m + 1):
            dp = dp + p.partial(k) * X.components[k - 1]
        if not dp.is_zero():
            out = out + Form(m, {idx: dp})
    if G.is_flat():
        return out
    # connection action on each dx slot
    for idx, p in a.terms.items():
        for r, j in enumerate(idx):
            for q in range(1, m + 1):
                coeff = Poly.zero(m)
                for k in range(1, m + 1):
                    coeff = coeff + G.symbol(j, k, q) * X.components[k - 1]
                if coeff.is_zero():
                    continue
                replaced = idx[:r] + (q,) + idx[r + 1:]
                sign, nidx = sort_indices(replaced)
                if sign == 0:
                    continue
                out = out + Form(m, {nidx: (p * coeff).scale(-sign)})
    return out


def nabla_K(G, K, a):
    """The derivation nabla_K = sum_j K^j ^ nabla_{d_j}, of degree K.degree."""
    m = a.m
    out = Form(m)
    for j in range(1, m + 1):
        comp = K.components[j - 1]
        if comp.is_zero():
            continue
        out = out + wedge(comp, nabla_form(G, VectorField.basis(m, j), a))
    return out


def alg_insertion(L, a):
    """The algebraic derivation i_L = sum_j L^j ^ i_{d_j}; kills functions."""
    m = a.m
    out = Form(m)
    for j in range(1, m + 1):
        comp = L.components[j - 1]
        if comp.is_zero():
            continue
        out = out + wedge(comp, interior(VectorField.basis(m, j), a))
    return out
