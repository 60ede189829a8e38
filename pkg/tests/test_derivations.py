import pytest

from superconn.coeffs import Poly
from superconn.derivations import (DerivationSpec, GeneratorAction,
                                   apply_derivation, d_as_derivation,
                                   decompose_derivation, der_bracket,
                                   lie_derivative, operator_order_check,
                                   reconstruct_action, spec_from_action)
from superconn.exterior import (Christoffel, Form, VectorField, ext_d,
                                interior, wedge)
from superconn.sampling import (random_christoffel, random_derivation,
                                random_form, random_vector_field)


class TestApply:
    def test_degree_shift(self, rng):
        m = 2
        for deg in (-1, 0, 1):
            d = random_derivation(m, deg, rng)
            for p in range(0, m + 1):
                from superconn.sampling import random_homogeneous_form
                a = random_homogeneous_form(m, p, rng)
                out = apply_derivation(d, a)
                if not out.is_zero():
                    assert out.degrees() == [p + deg]

    def test_derivation_rule(self, rng):
        m = 2
        for deg in (-1, 0, 1):
            for _ in range(10):
                d = random_derivation(m, deg, rng)
                from superconn.sampling import random_homogeneous_form
                p = rng.randrange(0, m + 1)
                a = random_homogeneous_form(m, p, rng)
                b = random_form(m, rng)
                lhs = apply_derivation(d, wedge(a, b))
                rhs = wedge(apply_derivation(d, a), b) + \
                    wedge(a, apply_derivation(d, b)).scale((-1) ** (deg * p))
                assert (lhs - rhs).is_zero()


class TestDecomposition:
    def test_round_trip_many(self, rng):
        m = 3
        gammas = [Christoffel.flat(m)] + \
            [random_christoffel(m, rng) for _ in range(2)]
        for G in gammas:
            for deg in (-1, 0, 1, 2):
                for _ in range(8):
                    d = random_derivation(m, deg, rng)
                    act = GeneratorAction.of(d)
                    K, L = decompose_derivation(act, G)
                    back = reconstruct_action(K, L, G)
                    for a, b in zip(act.on_coords, back.on_coords):
                        assert (a - b).is_zero()
                    for a, b in zip(act.on_differentials, back.on_differentials):
                        assert (a - b).is_zero()

    def test_action_determines_derivation(self, rng):
        m = 2
        d = random_derivation(m, 0, rng)
        d2 = spec_from_action(GeneratorAction.of(d))
        a = random_form(m, rng)
        assert (apply_derivation(d, a) - apply_derivation(d2, a)).is_zero()


class TestLieDerivative:
    def test_cartan_formula(self, rng):
        m = 2
        for _ in range(10):
            X = random_vector_field(m, rng)
            G = random_christoffel(m, rng)
            lx = lie_derivative(X, G)
            a = random_form(m, rng)
            lhs = apply_derivation(lx, a)
            rhs = interior(X, ext_d(a)) + ext_d(interior(X, a))
            assert (lhs - rhs).is_zero()

    def test_gamma_independent(self, rng):
        m = 2
        X = random_vector_field(m, rng)
        l1 = lie_derivative(X, Christoffel.flat(m))
        l2 = lie_derivative(X, random_christoffel(m, rng))
        for a, b in zip(l1.A + l1.B, l2.A + l2.B):
            assert (a - b).is_zero()


class TestExteriorAsDerivation:
    def test_matches_ext_d(self, rng):
        m = 2
        for G in [Christoffel.flat(m)] + [random_christoffel(m, rng) for _ in range(3)]:
            d = d_as_derivation(G)
            for _ in range(10):
                a = random_form(m, rng)
                assert (apply_derivation(d, a) - ext_d(a)).is_zero()


class TestBracket:
    def test_graded_antisymmetry(self, rng):
        m = 2
        d1 = random_derivation(m, 0, rng)
        d2 = random_derivation(m, 1, rng)
        br12 = der_bracket(d1, d2)
        br21 = der_bracket(d2, d1)
        sign = (-1) ** (d1.parity() * d2.parity())
        a = random_form(m, rng)
        lhs = apply_derivation(br12, a)
        rhs = apply_derivation(br21, a).scale(-sign)
        assert (lhs - rhs).is_zero()

    def test_bracket_is_derivation_of_sum_degree(self, rng):
        m = 3
        d1 = random_derivation(m, 1, rng)
        d2 = random_derivation(m, -1, rng)
        br = der_bracket(d1, d2)
        assert br.degree == 0


class TestOperatorOrder:
    def test_multiplication_is_order_zero(self, rng):
        m = 2
        from superconn.sampling import random_homogeneous_form
        f = random_homogeneous_form(m, 2, rng)

        def op(v):
            return wedge(f, v)
        assert operator_order_check(op, 0, 0, trials=5, rng=rng, m=m)

    def test_ext_d_is_order_one(self, rng):
        assert operator_order_check(ext_d, 1, 1, trials=5, rng=rng, m=2)

    def test_ext_d_is_not_order_zero(self, rng):
        assert not operator_order_check(ext_d, 1, 0, trials=5, rng=rng, m=2)
