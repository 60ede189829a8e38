import pytest

from superconn.coeffs import Poly
from superconn.errors import DimensionError, HomogeneityError, ParameterError
from superconn.exterior import (Christoffel, Form, VectorField, ext_d,
                                interior, nabla_form, sort_indices, wedge)
from superconn.sampling import (random_christoffel, random_form,
                                random_homogeneous_form, random_vector_field)


class TestSortIndices:
    def test_identity(self):
        assert sort_indices((1, 2, 3)) == (1, (1, 2, 3))

    def test_swap(self):
        assert sort_indices((2, 1)) == (-1, (1, 2))

    def test_repeat_kills(self):
        assert sort_indices((1, 1)) == (0, None)


class TestForm:
    def test_canonical_equality(self):
        m = 2
        a = Form.dx(m, 2, 1)
        b = Form.dx(m, 1, 2).scale(-1)
        assert a == b

    def test_mixed_degree_rejected_as_homogeneous(self):
        f = Form.dx(2, 1) + Form.const(2, 1)
        with pytest.raises(HomogeneityError):
            f.degree()

    def test_out_of_range_index(self):
        with pytest.raises(DimensionError):
            Form(2, {(3,): Poly.const(2, 1)})


class TestWedge:
    def test_graded_commutativity(self, rng):
        for m in (2, 3):
            for _ in range(20):
                p = rng.randrange(0, m + 1)
                q = rng.randrange(0, m + 1)
                a = random_homogeneous_form(m, p, rng)
                b = random_homogeneous_form(m, q, rng)
                assert (wedge(a, b) - wedge(b, a).scale((-1) ** (p * q))).is_zero()

    def test_associativity(self, rng):
        m = 3
        for _ in range(20):
            a, b, c = (random_form(m, rng) for _ in range(3))
            assert (wedge(wedge(a, b), c) - wedge(a, wedge(b, c))).is_zero()


class TestExteriorDifferential:
    def test_d_squared_zero(self, rng):
        for m in (2, 3):
            for _ in range(20):
                a = random_form(m, rng)
                assert ext_d(ext_d(a)).is_zero()

    def test_antiderivation(self, rng):
        m = 3
        for _ in range(20):
            p = rng.randrange(0, m + 1)
            a = random_homogeneous_form(m, p, rng)
            b = random_form(m, rng)
            lhs = ext_d(wedge(a, b))
            rhs = wedge(ext_d(a), b) + wedge(a, ext_d(b)).scale((-1) ** p)
            assert (lhs - rhs).is_zero()

    def test_rejects_parameter(self):
        f = Form.from_poly(Poly.param(2))
        with pytest.raises(ParameterError):
            ext_d(f)
        assert ext_d(f, allow_param=True).is_zero()


class TestInterior:
    def test_antiderivation(self, rng):
        m = 3
        X = random_vector_field(m, rng)
        for _ in range(15):
            p = rng.randrange(0, m + 1)
            a = random_homogeneous_form(m, p, rng)
            b = random_form(m, rng)
            lhs = interior(X, wedge(a, b))
            rhs = wedge(interior(X, a), b) + wedge(a, interior(X, b)).scale((-1) ** p)
            assert (lhs - rhs).is_zero()

    def test_squares_to_zero(self, rng):
        m = 3
        for _ in range(15):
            X = random_vector_field(m, rng)
            a = random_form(m, rng)
            assert interior(X, interior(X, a)).is_zero()


class TestNablaForm:
    def test_flat_reduces_to_directional(self, rng):
        m = 2
        G = Christoffel.flat(m)
        X = VectorField.basis(m, 1)
        a = random_form(m, rng)
        got = nabla_form(G, X, a)
        want = Form(m, {idx: p.partial(1) for idx, p in a.terms.items()
                        if not p.partial(1).is_zero()})
        assert (got - want).is_zero()

    def test_dual_rule_on_dx(self):
        m = 2
        G = Christoffel.from_entries(m, {(1, 1, 2): Poly.const(m, 1)})
        got = nabla_form(G, VectorField.basis(m, 1), Form.dx(m, 1))
        assert (got + Form.dx(m, 2)).is_zero()

    def test_derivation_property(self, rng):
        m = 2
        for _ in range(10):
            G = random_christoffel(m, rng)
            X = random_vector_field(m, rng)
            a = random_form(m, rng)
            b = random_form(m, rng)
            lhs = nabla_form(G, X, wedge(a, b))
            rhs = wedge(nabla_form(G, X, a), b) + wedge(a, nabla_form(G, X, b))
            assert (lhs - rhs).is_zero()
