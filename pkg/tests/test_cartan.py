import pytest

from superconn.bundles import EndForm, ESection, SuperRank
from superconn.cartan import (DEFAULT_THETA_CAP, ESuperForm, GradedConnection,
                              K0Tensor, K1Tensor, SuperForm,
                              covariant_sform_d, curvature_2sform,
                              endsuper_apply, graded_curvature,
                              graded_d_of_superfunction, insert_derivation,
                              nn_apply, sform_d, sform_mul, super_trace)
from superconn.coeffs import Poly
from superconn.correspondence import ext_d_derivation
from superconn.derivations import (DerivationSpec, apply_derivation,
                                   der_bracket, flat_nabla)
from superconn.errors import TruncationError
from superconn.exterior import Christoffel, Form, ext_d, wedge
from superconn.quillen import SuperconnectionD, sc_curvature
from superconn.sampling import (random_derivation, random_form,
                                random_graded_connection,
                                random_homogeneous_form, random_section,
                                random_superform)


def xi(m, k):
    return SuperForm.xi(m, k)


def theta(m, k):
    return SuperForm.theta(m, k)


class TestProduct:
    def test_xi_squares_to_zero(self):
        m = 2
        assert sform_mul(xi(m, 1), xi(m, 1)).is_zero()

    def test_theta_squares_nonzero(self):
        m = 2
        sq = sform_mul(theta(m, 1), theta(m, 1))
        assert not sq.is_zero()
        assert sq.terms[((), (2, 0))] == Form.const(m, 1)

    def test_xi_anticommute(self):
        m = 2
        a = sform_mul(xi(m, 1), xi(m, 2))
        b = sform_mul(xi(m, 2), xi(m, 1))
        assert (a + b).is_zero()

    def test_bigraded_sign(self, rng):
        m = 2
        for _ in range(20):
            a = random_superform(m, rng, max_theta=1, max_terms=1)
            b = random_superform(m, rng, max_theta=1, max_terms=1)
            if len(a.terms) != 1 or len(b.terms) != 1:
                continue
            ((ia, ta), fa), = a.terms.items()
            ((ib, tb), fb), = b.terms.items()
            if not (fa.is_homogeneous() and fb.is_homogeneous()):
                continue
            k1 = len(ia) + sum(ta)
            k2 = len(ib) + sum(tb)
            p1 = (sum(ta) + fa.degree()) % 2
            p2 = (sum(tb) + fb.degree()) % 2
            sign = (-1) ** (k1 * k2 + p1 * p2)
            assert (sform_mul(a, b) - sform_mul(b, a).scale(sign)).is_zero()

    def test_associativity(self, rng):
        m = 2
        for _ in range(10):
            a, b, c = (random_superform(m, rng, max_theta=1, max_terms=2)
                       for _ in range(3))
            lhs = sform_mul(sform_mul(a, b), c)
            rhs = sform_mul(a, sform_mul(b, c))
            assert (lhs - rhs).is_zero()

    def test_truncation_overflow(self):
        m = 2
        t = SuperForm.theta(m, 1, theta_cap=2)
        sq = sform_mul(t, t)
        with pytest.raises(TruncationError):
            sform_mul(sq, t)


class TestDifferential:
    def test_on_coordinate(self):
        m = 2
        x = Form.from_poly(Poly.coord(m, 1))
        assert graded_d_of_superfunction(x) == xi(m, 1)

    def test_on_dx(self):
        m = 2
        assert graded_d_of_superfunction(Form.dx(m, 1)) == theta(m, 1)

    def test_squares_to_zero(self, rng):
        m = 2
        for _ in range(20):
            s = random_superform(m, rng, max_theta=2)
            assert sform_d(sform_d(s)).is_zero()

    def test_derivation_rule(self, rng):
        m = 2
        for _ in range(15):
            a = random_superform(m, rng, max_theta=1, max_terms=1)
            if len(a.terms) != 1:
                continue
            ((ia, ta), fa), = a.terms.items()
            if not fa.is_homogeneous():
                continue
            za = len(ia) + sum(ta)
            b = random_superform(m, rng, max_theta=1, max_terms=2)
            lhs = sform_d(sform_mul(a, b))
            rhs = sform_mul(sform_d(a), b) + \
                sform_mul(a, sform_d(b)).scale((-1) ** za)
            assert (lhs - rhs).is_zero()


class TestPairing:
    def test_exterior_derivation(self, rng):
        m = 2
        d = ext_d_derivation(m)
        for _ in range(10):
            a = random_form(m, rng)
            got = insert_derivation(d, graded_d_of_superfunction(a))
            assert (got - ext_d(a)).is_zero()

    def test_any_derivation(self, rng):
        m = 2
        for deg in (-1, 0, 1):
            for _ in range(8):
                d = random_derivation(m, deg, rng)
                a = random_form(m, rng)
                got = insert_derivation(d, graded_d_of_superfunction(a))
                want = apply_derivation(d, a)
                assert (got - want).is_zero()

    def test_covariant_pairing_matches_nn(self, rng):
        m = 2
        rank = SuperRank(1, 1)
        for _ in range(6):
            C = random_graded_connection(rank, m, rng, theta_cap=4)
            s = random_section(rank, m, rng)
            S = ESuperForm.from_section(s, C.theta_cap)
            dS = covariant_sform_d(C, S)
            for deg in (-1, 0, 1):
                d = random_derivation(m, deg, rng)
                routed = ESection(rank, [insert_derivation(d, e)
                                         for e in dS.entries])
                direct = nn_apply(C, d, s)
                assert (routed - direct).is_zero()


class TestNNApply:
    def test_flat_coordinate_derivative(self, rng):
        m = 2
        rank = SuperRank(1, 1)
        C = GradedConnection.trivial(rank, m)
        d = DerivationSpec(0, [Form.const(m, 1), Form.zero(m)],
                           [Form.zero(m)] * m)
        s = random_section(rank, m, rng)
        got = nn_apply(C, d, s)
        want = ESection(rank, [flat_nabla(1, f) for f in s.entries])
        assert (got - want).is_zero()

    def test_insertion_routes_through_K1(self):
        m = 2
        rank = SuperRank(1, 1)
        K1v = [EndForm.zero(rank, m) for _ in range(m)]
        K1v[0].entries[0][1] = Form.const(m, 7)
        C = GradedConnection(Christoffel.flat(m), EndForm.zero(rank, m),
                             K0Tensor.zero(rank, m), K1Tensor(K1v))
        d = DerivationSpec(-1, [Form.zero(m)] * m,
                           [Form.const(m, 1), Form.zero(m)])
        s = ESection.basis(rank, m, 1)
        got = nn_apply(C, d, s)
        assert got.entries[0] == Form.const(m, 7)
        assert got.entries[1].is_zero()

    def test_leibniz(self, rng):
        m = 2
        rank = SuperRank(1, 1)
        for _ in range(10):
            C = random_graded_connection(rank, m, rng, theta_cap=4)
            deg = rng.choice([-1, 0, 1])
            d = random_derivation(m, deg, rng)
            s = random_section(rank, m, rng)
            adeg = rng.randrange(0, m + 1)
            a = random_homogeneous_form(m, adeg, rng)
            lhs = nn_apply(C, d, s.wedge_left(a))
            rhs = s.wedge_left(apply_derivation(d, a)) + \
                nn_apply(C, d, s).wedge_left(a).scale((-1) ** (deg * adeg))
            assert (lhs - rhs).is_zero()


class TestGradedCurvature:
    def test_flat_trivial_vanishes(self, rng):
        m = 2
        rank = SuperRank(1, 1)
        C = GradedConnection.trivial(rank, m)
        for deg1 in (-1, 0, 1):
            for deg2 in (-1, 0, 1):
                d1 = random_derivation(m, deg1, rng)
                d2 = random_derivation(m, deg2, rng)
                assert graded_curvature(C, d1, d2).is_zero()

    def test_odd_diagonal_is_twice_square(self, rng):
        m = 2
        rank = SuperRank(1, 1)
        C = random_graded_connection(rank, m, rng, theta_cap=4)
        # the exterior differential is odd and squares to zero, so the
        # bracket term drops and R(d,d) is twice the double application
        d = ext_d_derivation(m)
        R = graded_curvature(C, d, d)
        for j in range(rank.n):
            e = ESection.basis(rank, m, j)
            twice = nn_apply(C, d, nn_apply(C, d, e)).scale(2)
            col = ESection(rank, [R.entries[i][j] for i in range(rank.n)])
            assert (twice - col).is_zero()

    def test_classical_comparison(self):
        m = 2
        rank = SuperRank(1, 1)
        omega = EndForm.zero(rank, m)
        omega.entries[0][0] = Form(m, {(2,): Poly.coord(m, 1)})
        C = GradedConnection(Christoffel.flat(m), omega,
                             K0Tensor.zero(rank, m), K1Tensor.zero(rank, m))
        zero = Form.zero(m)
        one = Form.const(m, 1)
        d1 = DerivationSpec(0, [one, zero], [zero, zero])
        d2 = DerivationSpec(0, [zero, one], [zero, zero])
        R = graded_curvature(C, d1, d2)
        assert R.entries[0][0] == Form.const(m, 1)
        assert R.entries[1][1].is_zero()


class TestCurvature2Superform:
    def test_flat_vanishes(self):
        C = GradedConnection.trivial(SuperRank(1, 1), 2, theta_cap=4)
        assert curvature_2sform(C).is_zero()

    def test_classical_embedding(self):
        m = 2
        rank = SuperRank(1, 1)
        omega = EndForm.zero(rank, m)
        omega.entries[0][0] = Form(m, {(2,): Poly.coord(m, 1)})
        C = GradedConnection(Christoffel.flat(m), omega,
                             K0Tensor.zero(rank, m), K1Tensor.zero(rank, m),
                             theta_cap=4)
        R = curvature_2sform(C)
        expect = sform_mul(xi(m, 1), xi(m, 2))
        assert (R.entries[0][0] - expect).is_zero()
        assert R.entries[1][1].is_zero()
        assert R.entries[0][1].is_zero() and R.entries[1][0].is_zero()

    def test_supertrace_even(self, rng):
        m = 2
        rank = SuperRank(1, 1)
        C = random_graded_connection(rank, m, rng, theta_cap=4)
        tr = super_trace(curvature_2sform(C))
        for piece, xi_, th, z, par in tr.atoms():
            assert par % 2 == 0

    def test_square_of_covariant_d_acts_as_curvature(self, rng):
        m = 2
        rank = SuperRank(1, 1)
        C = random_graded_connection(rank, m, rng, theta_cap=6)
        R = curvature_2sform(C)
        s = random_section(rank, m, rng)
        S = ESuperForm.from_section(s, C.theta_cap)
        sq = covariant_sform_d(C, covariant_sform_d(C, S))
        assert (sq - endsuper_apply(R, S)).is_zero()


class TestBianchi:
    def test_covariant_d_commutes_with_curvature(self, rng):
        m = 2
        rank = SuperRank(1, 1)
        for _ in range(5):
            C = random_graded_connection(rank, m, rng, theta_cap=6)
            R = curvature_2sform(C)
            S = ESuperForm(rank, [random_superform(m, rng, 6, max_theta=1,
                                                   max_terms=2,
                                                   max_poly_degree=1)
                                  for _ in range(rank.n)])
            lhs = covariant_sform_d(C, endsuper_apply(R, S))
            rhs = endsuper_apply(R, covariant_sform_d(C, S))
            assert (lhs - rhs).is_zero()
