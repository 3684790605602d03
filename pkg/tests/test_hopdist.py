import numpy as np
import pytest

from aoisched.hopdist import HopChain, mean_age, pmf, pmf_closed, pmf_oracle


class TestChainValidation:
    def test_rejects_probability_one(self):
        with pytest.raises(ValueError):
            HopChain([0.5, 1.0])

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            HopChain([-0.1])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            HopChain([])


class TestClosedForms:
    def test_single_hop_geometric(self):
        assert pmf_closed(HopChain([0.5]), 2) == pytest.approx(0.125)

    def test_two_hops(self):
        # brute-force convolution over age splits gives 0.28125
        assert pmf_closed(HopChain([0.5, 0.25]), 1) == pytest.approx(0.28125)

    def test_three_hops_at_zero(self):
        # age 0 requires first-try success on every hop
        chain = HopChain([0.5, 0.25, 0.125])
        assert pmf_closed(chain, 0) == pytest.approx(0.328125)

    def test_four_hops_unsupported(self):
        with pytest.raises(ValueError, match="pmf_oracle"):
            pmf_closed(HopChain([0.1, 0.2, 0.3, 0.4]), 1)

    def test_near_equal_probabilities_guarded(self):
        with pytest.raises(ValueError, match="pmf_oracle"):
            pmf_closed(HopChain([0.3, 0.3 + 1e-9]), 1)

    def test_hop_order_invariance(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            ps = rng.uniform(0.05, 0.9, size=3)
            if min(np.diff(np.sort(ps))) < 0.05:
                continue
            for age in (0, 1, 5, 17):
                reference = pmf_closed(HopChain(ps), age)
                for perm in ((1, 0, 2), (2, 1, 0), (1, 2, 0)):
                    permuted = HopChain(ps[list(perm)])
                    assert pmf_closed(permuted, age) == pytest.approx(reference, abs=1e-12)


class TestOracle:
    def test_matches_closed_single_hop(self):
        chain = HopChain([0.37])
        for age in range(30):
            assert pmf_oracle(chain, age) == pmf_closed(chain, age)

    def test_equal_probability_limit(self):
        # two equal hops: negative binomial with r = 2
        p = 0.4
        chain = HopChain([p, p])
        for age in range(25):
            expected = (1 - p) ** 2 * (age + 1) * p**age
            assert pmf_oracle(chain, age) == pytest.approx(expected, abs=1e-13)

    def test_agrees_with_closed_forms(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            n = int(rng.integers(2, 4))
            while True:
                ps = rng.uniform(0.02, 0.9, size=n)
                if n == 2 or min(np.diff(np.sort(ps))) >= 0.05:
                    if n == 3 or abs(ps[0] - ps[1]) >= 0.05:
                        break
            chain = HopChain(ps)
            for age in range(0, 40, 7):
                assert pmf_oracle(chain, age) == pytest.approx(
                    pmf_closed(chain, age), abs=1e-12
                )

    def test_normalization(self):
        chain = HopChain([0.6, 0.3, 0.45])
        from aoisched.hopdist import _pmf_series

        series = _pmf_series(chain, 400)
        assert np.all(series >= 0)
        partial = np.cumsum(series)
        assert np.all(partial <= 1.0 + 1e-12)
        assert partial[-1] > 1.0 - 1e-9


class TestMeanAge:
    def test_single_hop(self):
        assert mean_age(HopChain([0.5])) == pytest.approx(1.0, abs=1e-9)

    def test_two_hops_sum_of_means(self):
        assert mean_age(HopChain([0.5, 0.25])) == pytest.approx(4.0 / 3.0, abs=1e-9)

    def test_lossless_chain(self):
        assert mean_age(HopChain([0.0, 0.0])) == 0.0

    def test_matches_geometric_identity(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            ps = rng.uniform(0.0, 0.85, size=int(rng.integers(1, 5)))
            expected = sum(p / (1 - p) for p in ps)
            assert mean_age(HopChain(ps)) == pytest.approx(expected, abs=1e-8)

    def test_tail_tol_validated(self):
        with pytest.raises(ValueError):
            mean_age(HopChain([0.5]), tail_tol=0.0)


class TestDispatch:
    def test_prefers_closed_form(self):
        chain = HopChain([0.5, 0.25])
        assert pmf(chain, 3) == pmf_closed(chain, 3)

    def test_falls_back_to_oracle(self):
        chain = HopChain([0.3, 0.3])
        assert pmf(chain, 3) == pmf_oracle(chain, 3)
        long_chain = HopChain([0.1, 0.2, 0.3, 0.4])
        assert pmf(long_chain, 3) == pmf_oracle(long_chain, 3)
