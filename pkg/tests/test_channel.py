import numpy as np
import pytest

from aoisched.channel import LossProcess

from oracles import rectified_gaussian_mean


def make_process(n=2, mean=0.3, std=0.2, coherence=30, seed=123, rep=0):
    return LossProcess.seeded(n, mean, std, coherence, seed, rep)


class TestConstruction:
    def test_negative_std_rejected(self):
        with pytest.raises(ValueError):
            make_process(std=-0.1)

    def test_coherence_positive(self):
        with pytest.raises(ValueError):
            make_process(coherence=0)


class TestFading:
    def test_zero_std_pins_probability_to_mean(self):
        proc = make_process(std=0.0)
        for t in range(100):
            proc.redraw_if_boundary(t)
            assert np.all(proc.observe() == 0.3)

    def test_block_constancy(self):
        proc = make_process(coherence=7, seed=5)
        trace = []
        for t in range(70):
            proc.redraw_if_boundary(t)
            trace.append(proc.observe())
        trace = np.array(trace)
        for t in range(70):
            assert np.array_equal(trace[t], trace[7 * (t // 7)])

    def test_observation_within_block_identical(self):
        proc = make_process(coherence=10)
        proc.redraw_if_boundary(0)
        a = proc.observe()
        proc.redraw_if_boundary(3)  # not a boundary
        b = proc.observe()
        assert np.array_equal(a, b)

    def test_observation_vector_length(self):
        proc = make_process(n=5)
        proc.redraw_if_boundary(0)
        assert proc.observe().shape == (5,)

    def test_probabilities_stay_in_unit_interval(self):
        proc = make_process(mean=0.5, std=3.0, coherence=1, seed=9)
        for t in range(2000):
            proc.redraw_if_boundary(t)
            p = proc.observe()
            assert np.all(p >= 0.0) and np.all(p <= 1.0)

    def test_strongly_negative_mean_clamps_to_zero(self):
        proc = make_process(mean=-1.0, std=0.01, coherence=1)
        for t in range(100):
            proc.redraw_if_boundary(t)
            assert np.all(proc.observe() == 0.0)

    def test_rectified_mean_matches_quadrature(self):
        # empirical mean of clamped draws against numerical integration
        proc = make_process(n=1, mean=0.3, std=0.2, coherence=1, seed=77)
        draws = np.empty(10**6)
        for t in range(draws.size):
            proc.redraw_if_boundary(t)
            draws[t] = proc.observe()[0]
        expected = rectified_gaussian_mean(0.3, 0.2)
        assert abs(draws.mean() - expected) < 0.005

    def test_link_independence(self):
        proc = make_process(n=2, coherence=1, seed=31)
        draws = np.empty((10**4, 2))
        for t in range(draws.shape[0]):
            proc.redraw_if_boundary(t)
            draws[t] = proc.observe()
        corr = np.corrcoef(draws[:, 0], draws[:, 1])[0, 1]
        assert abs(corr) < 0.02


class TestOutcomes:
    def test_certain_delivery(self):
        proc = make_process(mean=0.0, std=0.0)
        proc.redraw_if_boundary(0)
        assert all(proc.transmit(0) == 1 for _ in range(200))

    def test_certain_loss(self):
        proc = make_process(mean=1.0, std=0.0)
        proc.redraw_if_boundary(0)
        assert all(proc.transmit(0) == 0 for _ in range(200))

    def test_success_fraction(self):
        proc = make_process(mean=0.3, std=0.0, seed=11)
        proc.redraw_if_boundary(0)
        n = 10**6
        successes = sum(proc.transmit(0) for _ in range(n))
        assert abs(successes / n - 0.7) < 0.002

    def test_draw_all_covers_every_link(self):
        proc = make_process(n=4, mean=0.0, std=0.0)
        proc.redraw_if_boundary(0)
        assert proc.draw_all() == [1, 1, 1, 1]


class TestReproducibility:
    def test_identical_seeds_identical_trajectories(self):
        a = make_process(seed=42, rep=3)
        b = make_process(seed=42, rep=3)
        for t in range(200):
            a.redraw_if_boundary(t)
            b.redraw_if_boundary(t)
            assert np.array_equal(a.observe(), b.observe())
            assert a.draw_all() == b.draw_all()

    def test_repetitions_differ(self):
        a = make_process(seed=42, rep=0, coherence=1)
        b = make_process(seed=42, rep=1, coherence=1)
        a.redraw_if_boundary(0)
        b.redraw_if_boundary(0)
        assert not np.array_equal(a.observe(), b.observe())
