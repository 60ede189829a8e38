import pytest

from superconn.bundles import (EndForm, ESection, SuperRank, dnablaE,
                               end_apply, end_commutator, end_compose, end_d,
                               end_power, supertrace)
from superconn.errors import ParityError, RankError
from superconn.exterior import Form, ext_d, wedge
from superconn.sampling import (random_omegaE, random_section,
                                _random_parity_endform)


def random_endform(rank, m, rng, parity):
    return _random_parity_endform(rank, m, rng, parity, 2, 1)


class TestStructure:
    def test_rank_mismatch(self, rng):
        a = ESection.zero(SuperRank(1, 1), 2)
        W = EndForm.zero(SuperRank(2, 1), 2)
        with pytest.raises(RankError):
            end_apply(W, a)

    def test_total_parity_check(self, rng):
        rank = SuperRank(1, 1)
        W = random_endform(rank, 2, rng, 1)
        W.check_total_parity(1)
        if not W.is_zero():
            with pytest.raises(ParityError):
                W.check_total_parity(0)


class TestComposition:
    def test_compose_matches_double_apply(self, rng):
        rank = SuperRank(1, 1)
        m = 2
        for p1 in (0, 1):
            for p2 in (0, 1):
                for _ in range(5):
                    W1 = random_endform(rank, m, rng, p1)
                    W2 = random_endform(rank, m, rng, p2)
                    s = random_section(rank, m, rng)
                    lhs = end_apply(end_compose(W1, W2), s)
                    rhs = end_apply(W1, end_apply(W2, s))
                    assert (lhs - rhs).is_zero()

    def test_associativity(self, rng):
        rank = SuperRank(2, 1)
        m = 2
        Ws = [random_endform(rank, m, rng, rng.randrange(2)) for _ in range(3)]
        lhs = end_compose(end_compose(Ws[0], Ws[1]), Ws[2])
        rhs = end_compose(Ws[0], end_compose(Ws[1], Ws[2]))
        assert (lhs - rhs).is_zero()

    def test_identity(self, rng):
        rank = SuperRank(1, 1)
        m = 2
        W = random_endform(rank, m, rng, 1)
        I = EndForm.identity(rank, m)
        assert (end_compose(I, W) - W).is_zero()
        assert (end_compose(W, I) - W).is_zero()


class TestSupertrace:
    def test_kills_graded_commutators(self, rng):
        rank = SuperRank(1, 1)
        m = 2
        for p1 in (0, 1):
            for p2 in (0, 1):
                for _ in range(5):
                    W1 = random_endform(rank, m, rng, p1)
                    W2 = random_endform(rank, m, rng, p2)
                    assert supertrace(end_commutator(W1, W2)).is_zero()

    def test_block_signs(self):
        rank = SuperRank(1, 1)
        m = 2
        W = EndForm.zero(rank, m)
        W.entries[0][0] = Form.const(m, 3)
        W.entries[1][1] = Form.const(m, 5)
        assert supertrace(W) == Form.const(m, -2)


class TestCovariantDifferential:
    def test_flat_is_entrywise_d(self, rng):
        rank = SuperRank(1, 1)
        m = 2
        s = random_section(rank, m, rng)
        got = dnablaE(EndForm.zero(rank, m), s)
        want = ESection(rank, [ext_d(f) for f in s.entries])
        assert (got - want).is_zero()

    def test_leibniz(self, rng):
        rank = SuperRank(1, 1)
        m = 2
        from superconn.sampling import random_homogeneous_form
        omega = random_omegaE(rank, m, rng)
        for _ in range(10):
            s = random_section(rank, m, rng)
            deg = rng.randrange(0, m + 1)
            a = random_homogeneous_form(m, deg, rng)
            lhs = dnablaE(omega, s.wedge_left(a))
            rhs = s.wedge_left(ext_d(a)) + \
                dnablaE(omega, s).wedge_left(a).scale((-1) ** deg)
            assert (lhs - rhs).is_zero()

    def test_power(self, rng):
        rank = SuperRank(1, 1)
        m = 2
        W = random_endform(rank, m, rng, 0)
        assert (end_power(W, 2) - end_compose(W, W)).is_zero()
        assert (end_d(W) - EndForm(rank, [[ext_d(f) for f in row]
                                          for row in W.entries])).is_zero()
