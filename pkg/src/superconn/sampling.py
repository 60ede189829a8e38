"""Random generators for property tests and the CLI verification commands.

All draws are driven by an explicit random.Random instance so runs are
reproducible from a single seed.  Coefficients are small rationals and the
polynomial degree is kept low; identities under test are exact, so size only
affects speed, not confidence per trial.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .bundles import EndForm, ESection, SuperRank
from .cartan import (DEFAULT_THETA_CAP, GradedConnection, K0Tensor, K1Tensor,
                     SuperForm)
from .coeffs import Poly
from .derivations import DerivationSpec
from .exterior import Christoffel, Form, VectorField
from .quillen import SuperconnectionD


def random_ratio(rng, zero_ok=True):
    num = rng.randint(-3, 3)
    if num == 0 and not zero_ok:
        num = rng.choice([-2, -1, 1, 2])
    den = rng.choice([1, 1, 2, 3])
    return Fraction(num, den)


def random_poly(m, rng, max_degree=3, max_terms=2):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        exps = [0] * (m + 1)
        for _ in range(rng.randint(0, max_degree)):
            exps[rng.randrange(m)] += 1
        c = random_ratio(rng)
        if c:
            key = tuple(exps)
            terms[key] = terms.get(key, 0) + c
    p = Poly.zero(m)
    for key, c in terms.items():
        if c:
            p = p + Poly(m, {key: Fraction(c)})
    return p


def random_homogeneous_form(m, deg, rng, max_poly_degree=3, density=None):
    """A random form of pure degree deg (possibly zero)."""
    idxs = list(itertools.combinations(range(1, m + 1), deg))
    terms = {}
    picks = density if density is not None else rng.randint(1, min(2, len(idxs)))
    for _ in range(picks):
        idx = rng.choice(idxs)
        p = random_poly(m, rng, max_degree=max_poly_degree)
        if not p.is_zero():
            terms[idx] = terms.get(idx, Poly.zero(m)) + p
    return Form(m, terms)


def random_form(m, rng, max_degree=3, max_poly_degree=3):
    out = Form.zero(m)
    for deg in range(min(max_degree, m) + 1):
        if rng.random() < 0.6:
            out = out + random_homogeneous_form(m, deg, rng, max_poly_degree)
    return out


def random_vector_field(m, rng, max_poly_degree=2):
    return VectorField([random_poly(m, rng, max_degree=max_poly_degree)
                        for _ in range(m)])


def random_christoffel(m, rng, max_poly_degree=1, density=3):
    entries = {}
    for _ in range(density):
        r = rng.randint(1, m)
        p = rng.randint(1, m)
        q = rng.randint(1, m)
        poly = random_poly(m, rng, max_degree=max_poly_degree, max_terms=1)
        if not poly.is_zero():
            entries[(r, p, q)] = entries.get((r, p, q), Poly.zero(m)) + poly
    return Christoffel.from_entries(m, entries)


def random_derivation(m, degree, rng, max_poly_degree=2):
    """A random flat-basis derivation of the given degree (-1 <= degree <= m)."""
    A = [Form.zero(m) for _ in range(m)]
    B = [Form.zero(m) for _ in range(m)]
    for k in range(m):
        if 0 <= degree <= m and rng.random() < 0.8:
            A[k] = random_homogeneous_form(m, degree, rng, max_poly_degree)
        if 0 <= degree + 1 <= m and rng.random() < 0.8:
            B[k] = random_homogeneous_form(m, degree + 1, rng, max_poly_degree)
    return DerivationSpec(degree, A, B)


def random_omegaE(rank, m, rng, max_poly_degree=1):
    """A random block-diagonal matrix of 1-forms."""
    omega = EndForm.zero(rank, m)
    p = rank.p
    for i in range(rank.n):
        for j in range(rank.n):
            if (i < p) == (j < p) and rng.random() < 0.7:
                omega.entries[i][j] = random_homogeneous_form(m, 1, rng, max_poly_degree)
    return omega


def random_section(rank, m, rng, max_degree=2, max_poly_degree=2):
    return ESection(rank, [random_form(m, rng, max_degree, max_poly_degree)
                           for _ in range(rank.n)])


def _random_parity_endform(rank, m, rng, total_parity, max_form_degree, max_poly_degree):
    """An EndForm of pure total parity: entry (i,j) gets only form degrees d
    with (d + end_parity) congruent to total_parity."""
    out = EndForm.zero(rank, m)
    for i in range(rank.n):
        for j in range(rank.n):
            eps = rank.end_parity(i, j)
            f = Form.zero(m)
            for d in range(min(max_form_degree, m) + 1):
                if (d + eps) % 2 == total_parity % 2 and rng.random() < 0.5:
                    f = f + random_homogeneous_form(m, d, rng, max_poly_degree)
            out.entries[i][j] = f
    return out


def random_K0(rank, m, rng, max_form_degree=2, max_poly_degree=1):
    return K0Tensor([_random_parity_endform(rank, m, rng, 0, max_form_degree,
                                            max_poly_degree) for _ in range(m)])


def random_K1(rank, m, rng, max_form_degree=2, max_poly_degree=1):
    return K1Tensor([_random_parity_endform(rank, m, rng, 1, max_form_degree,
                                            max_poly_degree) for _ in range(m)])


def random_graded_connection(rank, m, rng, theta_cap=DEFAULT_THETA_CAP,
                             flat=False, max_poly_degree=1):
    G = Christoffel.flat(m) if flat else random_christoffel(m, rng, max_poly_degree)
    return GradedConnection(G, random_omegaE(rank, m, rng, max_poly_degree),
                            random_K0(rank, m, rng, 2, max_poly_degree),
                            random_K1(rank, m, rng, 2, max_poly_degree),
                            theta_cap=theta_cap)


def random_ntensor(rank, m, rng, max_poly_degree=1):
    """A random End(1) matrix of 0-forms (functions in the off blocks)."""
    out = EndForm.zero(rank, m)
    for i in range(rank.n):
        for j in range(rank.n):
            if rank.end_parity(i, j) == 1 and rng.random() < 0.8:
                p = random_poly(m, rng, max_degree=max_poly_degree)
                out.entries[i][j] = Form.from_poly(p)
    return out


def random_superconnection(rank, m, rng, max_form_degree=2, max_poly_degree=1):
    omega = random_omegaE(rank, m, rng, max_poly_degree)
    P = _random_parity_endform(rank, m, rng, 1, max_form_degree, max_poly_degree)
    return SuperconnectionD(rank, omega, P)


def random_superform(m, rng, theta_cap=DEFAULT_THETA_CAP, max_theta=2,
                     max_terms=3, max_poly_degree=2):
    out = SuperForm.zero(m, theta_cap)
    for _ in range(rng.randint(1, max_terms)):
        nxi = rng.randint(0, m)
        xi = tuple(sorted(rng.sample(range(1, m + 1), nxi)))
        th = [0] * m
        budget = min(max_theta, theta_cap)
        for _ in range(rng.randint(0, budget)):
            th[rng.randrange(m)] += 1
        deg = rng.randint(0, m)
        coeff = random_homogeneous_form(m, deg, rng, max_poly_degree)
        out = out + SuperForm.monomial(coeff, xi, th, theta_cap)
    return out


def random_endsuperform(rank, m, rng, theta_cap=DEFAULT_THETA_CAP, max_theta=1,
                        max_poly_degree=1):
    from .cartan import EndSuperForm
    out = EndSuperForm.zero(rank, m, theta_cap)
    for i in range(rank.n):
        for j in range(rank.n):
            if rng.random() < 0.7:
                out.entries[i][j] = random_superform(
                    m, rng, theta_cap, max_theta, max_terms=2,
                    max_poly_degree=max_poly_degree)
    return out
