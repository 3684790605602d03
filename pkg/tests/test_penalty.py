import numpy as np
import pytest

from aoisched.penalty import PenaltyTable
from aoisched.timing import SamplingCalendar, TimingState


def scalar_table(*dynamics, sigma=1.0):
    return PenaltyTable([[[a]] for a in dynamics], [[[sigma]] for _ in dynamics])


class TestAgePenalty:
    def test_age_one_is_free(self):
        table = scalar_table(1.7)
        assert table.g(0, 1) == 0.0

    def test_random_walk_counts_periods(self):
        # A = 1: every stale period adds one unit of noise variance
        table = scalar_table(1.0)
        assert table.g(0, 4) == pytest.approx(3.0)

    def test_unstable_scalar_partial_sum(self):
        table = scalar_table(1.5)
        assert table.g(0, 3) == pytest.approx(2.25 + 5.0625)

    def test_age_below_one_rejected(self):
        table = scalar_table(1.0)
        with pytest.raises(ValueError):
            table.g(0, 0)

    @pytest.mark.parametrize("a", [0.5, 0.9, 1.25, 1.5, -1.2])
    def test_scalar_closed_form(self, a):
        sigma = 0.7
        table = scalar_table(a, sigma=sigma)
        for delta in range(1, 40):
            a2 = a * a
            expected = sigma * (a2**delta - a2) / (a2 - 1.0)
            assert table.g(0, delta) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("a", [1.0, -1.0])
    def test_marginal_case_is_linear(self, a):
        sigma = 2.0
        table = scalar_table(a, sigma=sigma)
        for delta in range(1, 30):
            assert table.g(0, delta) == pytest.approx(sigma * (delta - 1), rel=1e-12)

    def test_monotone_in_age(self):
        for a in (0.3, 1.0, 1.4):
            table = scalar_table(a)
            values = [table.g(0, d) for d in range(1, 60)]
            assert all(b >= x for x, b in zip(values, values[1:]))

    def test_matrix_case_matches_direct_sum(self):
        a = np.array([[1.1, 0.3], [0.0, 0.8]])
        sigma = np.array([[1.0, 0.2], [0.2, 0.5]])
        table = PenaltyTable([a], [sigma])
        for delta in (1, 2, 5, 9):
            expected = sum(
                float(np.trace(np.linalg.matrix_power(a.T, r) @ np.linalg.matrix_power(a, r) @ sigma))
                for r in range(1, delta)
            )
            assert table.g(0, delta) == pytest.approx(expected, rel=1e-12)

    def test_memoization_is_cheap_after_warmup(self):
        table = scalar_table(1.25)
        table.ensure(0, 500)
        sums = table.partial_sums(0)
        assert len(sums) >= 500
        assert table.g(0, 500) == sums[499]


class TestStateCost:
    def test_all_fresh_costs_nothing(self):
        table = scalar_table(1.0, 1.25, 1.5)
        cals = [SamplingCalendar(1, 0)] * 3
        s = TimingState(t=5, t_g=(5, 5, 5), t_r=(4, 4, 4), t_u=(4, 4, 4))
        assert table.state_cost(s, cals) == 0.0

    def test_reference_mixture(self):
        table = scalar_table(1.0, 1.25, 1.5)
        cals = [SamplingCalendar(1, 0)] * 3
        s = TimingState(t=6, t_g=(6, 6, 6), t_r=(4, 4, 4), t_u=(4, 4, 4))
        # all ages are 2: 1 + 1.5625 + 2.25
        assert table.state_cost(s, cals) == pytest.approx(4.8125)

    def test_single_subsystem_reduces_to_g(self):
        table = scalar_table(1.3)
        cals = [SamplingCalendar(2, 1)]
        s = TimingState(t=9, t_g=(9,), t_r=(5,), t_u=(5,))
        assert table.state_cost(s, cals) == table.g(0, cals[0].aoi(9, 5))

    def test_additive_over_subsystems(self):
        table = scalar_table(1.0, 1.5)
        cals = [SamplingCalendar(3, 0), SamplingCalendar(2, 1)]
        s = TimingState(t=10, t_g=(9, 9), t_r=(6, 7), t_u=(6, 7))
        parts = [
            scalar_table(1.0).state_cost(
                TimingState(t=10, t_g=(9,), t_r=(6,), t_u=(6,)), cals[:1]
            ),
            scalar_table(1.5).state_cost(
                TimingState(t=10, t_g=(9,), t_r=(7,), t_u=(7,)), cals[1:]
            ),
        ]
        assert table.state_cost(s, cals) == pytest.approx(sum(parts))
