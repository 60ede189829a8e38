"""Exact scalar arithmetic: rationals and multivariate polynomials.

A :class:`Poly` is an element of Q[x_1, ..., x_m, t] in canonical form: a map
from exponent vectors to nonzero rational coefficients.  The last exponent slot
is reserved for the homotopy parameter t, which only the transgression code is
allowed to use; everything else treats a t-dependent input as an error at the
point where it matters (see :func:`superconn.exterior.ext_d`).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DimensionError

# The base field restricted to exact rationals.  fractions.Fraction already
# guarantees reduced form, positive denominator and canonical zero.
Ratio = Fraction


class Poly:
    """Multivariate polynomial over Q in m chart coordinates plus t.

    terms maps exponent tuples of length m+1 (coordinates, then t) to nonzero
    Fractions.  Two polynomials are equal iff their term maps are equal.
    """

    __slots__ = ("m", "terms")

    def __init__(self, m, terms=None):
        if m < 1:
            raise DimensionError("chart dimension must be positive")
        self.m = m
        clean = {}
        if terms:
            for exps, c in terms.items():
                c = Fraction(c)
                if c == 0:
                    continue
                exps = tuple(int(e) for e in exps)
                if len(exps) != m + 1 or any(e < 0 for e in exps):
                    raise DimensionError(f"bad exponent vector {exps} for m={m}")
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if clean[exps] == 0:
                    del clean[exps]
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, m):
        return cls(m)

    @classmethod
    def const(cls, m, c):
        c = Fraction(c)
        if c == 0:
            return cls(m)
        return cls(m, {tuple([0] * (m + 1)): c})

    @classmethod
    def coord(cls, m, i, power=1):
        """The monomial x_i^power, with 1 <= i <= m."""
        if not 1 <= i <= m:
            raise DimensionError(f"coordinate index {i} out of range 1..{m}")
        exps = [0] * (m + 1)
        exps[i - 1] = power
        return cls(m, {tuple(exps): Fraction(1)})

    @classmethod
    def param(cls, m, power=1):
        """The monomial t^power."""
        exps = [0] * (m + 1)
        exps[m] = power
        return cls(m, {tuple(exps): Fraction(1)})

    # -- predicates ---------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def has_param(self):
        return any(e[self.m] > 0 for e in self.terms)

    def constant_value(self):
        """The rational value if the polynomial is constant, else None."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1:
            (exps, c), = self.terms.items()
            if all(e == 0 for e in exps):
                return c
        return None

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other):
        if self.m != other.m:
            raise DimensionError(f"chart dimension mismatch: {self.m} vs {other.m}")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, Fraction(0)) + c
            if s == 0:
                terms.pop(e, None)
            else:
                terms[e] = s
        out = Poly(self.m)
        out.terms = terms
        return out

    def __neg__(self):
        out = Poly(self.m)
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    terms.pop(e, None)
                else:
                    terms[e] = s
        out = Poly(self.m)
        out.terms = terms
        return out

    __rmul__ = __mul__

    def scale(self, c):
        c = Fraction(c)
        out = Poly(self.m)
        if c != 0:
            out.terms = {e: c * v for e, v in self.terms.items()}
        return out

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        out = Poly.const(self.m, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, Poly) and self.m == other.m and self.terms == other.terms

    def __hash__(self):
        return hash((self.m, frozenset(self.terms.items())))

    # -- calculus -----------------------------------------------------------

    def partial(self, i):
        """Exact partial derivative with respect to x_i (1-based)."""
        if not 1 <= i <= self.m:
            raise DimensionError(f"coordinate index {i} out of range 1..{self.m}")
        terms = {}
        for e, c in self.terms.items():
            k = e[i - 1]
            if k == 0:
                continue
            e2 = list(e)
            e2[i - 1] = k - 1
            terms[tuple(e2)] = c * k
        out = Poly(self.m)
        out.terms = terms
        return out

    def integrate_unit(self):
        """Definite integral over t in [0, 1]; the result carries no t."""
        terms = {}
        for e, c in self.terms.items():
            k = e[self.m]
            e2 = list(e)
            e2[self.m] = 0
            e2 = tuple(e2)
            s = terms.get(e2, Fraction(0)) + c / (k + 1)
            if s == 0:
                terms.pop(e2, None)
            else:
                terms[e2] = s
        out = Poly(self.m)
        out.terms = terms
        return out

    # -- printing -----------------------------------------------------------

    def to_str(self, names=None):
        """Canonical string in graded-lex order, e.g. ``3/2*x^2*y - 1``."""
        if not self.terms:
            return "0"
        if names is None:
            names = [f"x{i}" for i in range(1, self.m + 1)]
        names = list(names) + ["t"]

        def key(e):
            return (-sum(e), tuple(-x for x in e))

        parts = []
        for e in sorted(self.terms, key=key):
            c = self.terms[e]
            factors = []
            for nm, p in zip(names, e):
                if p == 1:
                    factors.append(nm)
                elif p > 1:
                    factors.append(f"{nm}^{p}")
            if not factors:
                body = str(abs(c))
            else:
                body = "*".join(factors)
                if abs(c) != 1:
                    body = f"{abs(c)}*{body}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        sign0, body0 = parts[0]
        text = ("-" if sign0 == "-" else "") + body0
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Poly({self.to_str()})"
