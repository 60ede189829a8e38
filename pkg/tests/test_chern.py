import pytest

from superconn.bundles import EndForm, SuperRank
from superconn.cartan import (ESuperForm, GradedConnection, K0Tensor,
                              K1Tensor, SuperForm, covariant_sform_d,
                              endsuper_apply, sform_d, sform_mul, super_trace)
from superconn.chern import (chern_match, chern_superform, is_closed, kappa,
                             supertangent_chern, transgression)
from superconn.coeffs import Poly
from superconn.errors import DimensionError, ParityError, TruncationError
from superconn.exterior import Christoffel, Form, ext_d
from superconn.quillen import SuperconnectionD, classical_chern
from superconn.sampling import (random_K0, random_K1,
                                random_graded_connection,
                                random_homogeneous_form, random_omegaE,
                                random_superform)


class TestChernSuperform:
    def test_flat_vanishes(self):
        C = GradedConnection.trivial(SuperRank(1, 1), 2, theta_cap=4)
        assert chern_superform(C, 1).is_zero()

    def test_classical_embedding(self):
        m = 2
        rank = SuperRank(1, 1)
        omega = EndForm.zero(rank, m)
        omega.entries[0][0] = Form(m, {(2,): Poly.coord(m, 1)})
        C = GradedConnection(Christoffel.flat(m), omega,
                             K0Tensor.zero(rank, m), K1Tensor.zero(rank, m),
                             theta_cap=4)
        ch = chern_superform(C, 1)
        assert (ch - sform_mul(SuperForm.xi(m, 1), SuperForm.xi(m, 2))).is_zero()

    def test_budget_guard(self):
        C = GradedConnection.trivial(SuperRank(1, 1), 2, theta_cap=2)
        with pytest.raises(TruncationError):
            chern_superform(C, 2)

    def test_closed(self, rng):
        m = 2
        rank = SuperRank(1, 1)
        for _ in range(4):
            C = random_graded_connection(rank, m, rng, theta_cap=4)
            for k in (1, 2):
                assert is_closed(chern_superform(C, k))


class TestIsClosed:
    def test_constant(self):
        assert is_closed(SuperForm.from_form(Form.const(2, 5)))

    def test_open_superform(self):
        m = 2
        y_xi1 = SuperForm.monomial(Form.from_poly(Poly.coord(m, 2)), xi=(1,))
        assert not is_closed(y_xi1)


class TestKappa:
    def test_generators(self):
        m = 2
        s = sform_mul(SuperForm.xi(m, 1), SuperForm.xi(m, 2))
        assert kappa(s) == Form.dx(m, 1, 2)
        assert kappa(SuperForm.theta(m, 1)).is_zero()

    def test_superfunction_projects_to_degree_zero(self):
        m = 2
        a = Form.from_poly(Poly.coord(m, 1)) + Form.dx(m, 2)
        assert kappa(SuperForm.from_form(a)) == Form.from_poly(Poly.coord(m, 1))

    def test_intertwines_differentials(self, rng):
        m = 2
        for _ in range(20):
            s = random_superform(m, rng, max_theta=2)
            assert (kappa(sform_d(s)) - ext_d(kappa(s))).is_zero()


class TestTransgression:
    def test_equal_endpoints(self, rng):
        m = 2
        rank = SuperRank(1, 1)
        C = random_graded_connection(rank, m, rng, theta_cap=4)
        assert transgression(C, C, 1).is_zero()

    def test_primitive_identity(self, rng):
        m = 2
        rank = SuperRank(1, 1)
        for k in (1, 2):
            for _ in range(3):
                C0 = random_graded_connection(rank, m, rng, theta_cap=4)
                C1 = GradedConnection(C0.G, C0.omegaE,
                                      random_K0(rank, m, rng),
                                      random_K1(rank, m, rng), theta_cap=4)
                eta = transgression(C0, C1, k)
                diff = chern_superform(C1, k) - chern_superform(C0, k)
                assert (diff - sform_d(eta)).is_zero()

    def test_rejects_mismatched_background(self, rng):
        m = 2
        rank = SuperRank(1, 1)
        C0 = random_graded_connection(rank, m, rng, flat=True, theta_cap=4)
        C1 = random_graded_connection(rank, m, rng, flat=False, theta_cap=4)
        if C0.G.gamma != C1.G.gamma:
            with pytest.raises(DimensionError):
                transgression(C0, C1, 1)


class TestChernMatch:
    def test_flat(self):
        C = GradedConnection.trivial(SuperRank(1, 1), 2, theta_cap=4)
        a, b = chern_match(C, 1)
        assert a.is_zero() and b.is_zero()

    def test_single_curved_block(self):
        m = 2
        rank = SuperRank(1, 1)
        omega = EndForm.zero(rank, m)
        omega.entries[0][0] = Form(m, {(2,): Poly.coord(m, 1)})
        C = GradedConnection(Christoffel.flat(m), omega,
                             K0Tensor.zero(rank, m), K1Tensor.zero(rank, m),
                             theta_cap=4)
        a, b = chern_match(C, 1)
        assert a == Form.dx(m, 1, 2)
        assert (a - b).is_zero()

    def test_two_block_difference(self):
        m = 2
        rank = SuperRank(1, 1)
        omega = EndForm.zero(rank, m)
        omega.entries[0][0] = Form(m, {(2,): Poly.coord(m, 1)})
        omega.entries[1][1] = Form(m, {(2,): Poly.coord(m, 1).scale(3)})
        C = GradedConnection(Christoffel.flat(m), omega,
                             K0Tensor.zero(rank, m), K1Tensor.zero(rank, m),
                             theta_cap=4)
        a, b = chern_match(C, 1)
        # tr R0 - tr R1 = (1 - 3) dx^dy
        assert a == Form.dx(m, 1, 2).scale(-2)
        assert (a - b).is_zero()

    def test_rejects_nonzero_K(self, rng):
        m = 2
        rank = SuperRank(1, 1)
        C = random_graded_connection(rank, m, rng, theta_cap=4)
        if any(not v.is_zero() for v in C.K0.values + C.K1.values):
            with pytest.raises(ParityError):
                chern_match(C, 1)


class TestSupertangent:
    def test_flat_classes_vanish(self):
        for m in (2, 3):
            for k in (1, 2):
                assert supertangent_chern(m, k).is_zero()

    def test_duality_sign(self, rng):
        m = 2
        omega = [[random_homogeneous_form(m, 1, rng) for _ in range(m)]
                 for _ in range(m)]
        for k in (1, 2):
            a = supertangent_chern(m, k, omega)
            b = supertangent_chern(m, k, omega, dual=True)
            assert (a - b.scale((-1) ** k)).is_zero()


class TestSupertraceCommutator:
    def test_str_of_covariant_commutator_is_d_of_str(self, rng):
        m = 2
        rank = SuperRank(1, 1)
        from superconn.bundles import ESection
        for _ in range(5):
            C = random_graded_connection(rank, m, rng, theta_cap=6)
            for kpar in (0, 1):
                for ppar in (0, 1):
                    Q = _random_bidegree_endsuperform(rank, m, rng, kpar, ppar)
                    DQ = _end_covariant_d(C, Q, kpar)
                    lhs = super_trace(DQ)
                    rhs = sform_d(super_trace(Q))
                    assert (lhs - rhs).is_zero()


def _random_bidegree_endsuperform(rank, m, rng, kpar, ppar):
    """An EndSuperForm whose atoms all have superform degree congruent to
    kpar and Koszul parity (form degree + theta degree + End parity)
    congruent to ppar."""
    from superconn.cartan import EndSuperForm
    out = EndSuperForm.zero(rank, m, 6)
    for i in range(rank.n):
        for j in range(rank.n):
            eps = rank.end_parity(i, j)
            acc = SuperForm.zero(m, 6)
            for _ in range(3):
                nxi = rng.randint(0, m)
                xi = tuple(sorted(rng.sample(range(1, m + 1), nxi)))
                nth = rng.randint(0, 1)
                th = [0] * m
                if nth:
                    th[rng.randrange(m)] += 1
                deg = rng.randint(0, m)
                if (nxi + nth) % 2 != kpar % 2:
                    continue
                if (deg + nth + eps) % 2 != ppar % 2:
                    continue
                coeff = random_homogeneous_form(m, deg, rng, 1)
                acc = acc + SuperForm.monomial(coeff, xi, th, 6)
            out.entries[i][j] = acc
    return out


def _end_covariant_d(C, Q, kpar):
    """[d^nn, Q] as an EndSuperForm, extracted on basis sections.

    The covariant differential has bidegree (1, 0), so the commutator sign
    is set by the superform degree of Q alone."""
    from superconn.cartan import EndSuperForm
    rank, m = C.rank, C.m
    sign = (-1) ** (kpar % 2)
    cols = []
    for j in range(rank.n):
        e = ESuperForm.basis(rank, m, j, C.theta_cap)
        col = covariant_sform_d(C, endsuper_apply(Q, e)) - \
            endsuper_apply(Q, covariant_sform_d(C, e)).scale(sign)
        cols.append(col)
    return EndSuperForm(rank, [[cols[j].entries[i] for j in range(rank.n)]
                               for i in range(rank.n)])
