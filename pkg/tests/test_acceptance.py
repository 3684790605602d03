"""Acceptance suite: every release criterion at its stated tolerance.

Run with ``pytest -s tests/test_acceptance.py`` to see one PASS/FAIL line per
criterion.  Criteria 2-4 share one 20-repetition x 5000-slot sweep of the
reference scenario (several minutes on one core).  The optional H = 9
complexity check is enabled with ``AOISCHED_ACCEPT_H9=1``.
"""

import os
from contextlib import contextmanager

import numpy as np
import pytest

from aoisched.config import ExperimentSpec
from aoisched.control import PlantModel, estimate, solve_riccati, stale_error
from aoisched.hopdist import HopChain, _pmf_series, pmf_closed, pmf_oracle
from aoisched.penalty import PenaltyTable
from aoisched.runner import run_sweep
from aoisched.scheduler import fh_decide, worst_case_nodes
from aoisched.sim import SimConfig, aggregate, run
from aoisched.timing import SamplingCalendar, TimingState

from helpers import reference_config
from oracles import best_policy_cost

SWEEP_HORIZONS = (1, 2, 3, 5)
SWEEP_REPS = 20
SWEEP_SLOTS = 5000
MASTER_SEED = 230476


@contextmanager
def criterion(number, description):
    try:
        yield
    except Exception:
        print(f"\nFAIL criterion {number}: {description}")
        raise
    print(f"\nPASS criterion {number}: {description}")


@pytest.fixture(scope="module")
def reference_sweep():
    """Common-random-number sweep over H of the reference scenario."""
    base = reference_config(
        slots=SWEEP_SLOTS, repetitions=SWEEP_REPS, seed=MASTER_SEED
    )
    spec = ExperimentSpec(
        name="acceptance",
        base=base,
        horizons=list(SWEEP_HORIZONS),
        policies=["fh"],
    )
    return run_sweep(spec, write_files=False)


def test_criterion_1_worst_case_node_table():
    with criterion(1, "worst-case node counts match ((N+1)^(H+1)-1)/N exactly"):
        assert [worst_case_nodes(3, h) for h in (1, 5, 9, 10)] == [
            5,
            1365,
            349525,
            1398101,
        ]
        # the search itself never exceeds the bound (also asserted in-code)
        rng = np.random.default_rng(0)
        cals = [SamplingCalendar(3, o) for o in (0, 1, 2)]
        table = PenaltyTable([[[1.0]], [[1.25]], [[1.5]]], [[[1.0]]] * 3)
        for _ in range(20):
            t = int(rng.integers(9, 40))
            t_g = tuple(
                cals[i].offset + cals[i].period * cals[i].sampling_index(t)
                for i in range(3)
            )
            t_r = tuple(min(g, t - 1) - int(rng.integers(0, 5)) for g in t_g)
            t_u = tuple(r - int(rng.integers(0, 5)) for r in t_r)
            s = TimingState(t=t, t_g=t_g, t_r=t_r, t_u=t_u)
            h = int(rng.integers(1, 7))
            d = fh_decide(s, cals, table, rng.random(3), h)
            assert d.nodes_expanded <= worst_case_nodes(3, h)


def test_criterion_2_pruned_tree_sizes(reference_sweep):
    with criterion(2, "mean expanded nodes per decision: H=1 in [3.5, 5.0], H=5 in [300, 1000]"):
        nodes_h1 = reference_sweep.aggregates[("fh", 1)].nodes_mean
        nodes_h5 = reference_sweep.aggregates[("fh", 5)].nodes_mean
        assert 3.5 <= nodes_h1 <= 5.0, f"H=1 mean nodes {nodes_h1}"
        assert 3e2 <= nodes_h5 <= 1e3, f"H=5 mean nodes {nodes_h5}"


@pytest.mark.skipif(
    not os.environ.get("AOISCHED_ACCEPT_H9"),
    reason="H=9 complexity check is opt-in (set AOISCHED_ACCEPT_H9=1)",
)
def test_criterion_2b_h9_reduction():
    with criterion(2, "H=9 search stays at least 60% below the worst case"):
        cfg = reference_config(slots=300, repetitions=1, seed=MASTER_SEED, horizon=9)
        result = run(cfg, 0)
        assert result.nodes_mean <= 0.4 * worst_case_nodes(3, 9)


def test_criterion_3_mse_improves_with_horizon(reference_sweep):
    with criterion(3, "network MSE drops >= 15% from H=1 to H=2, with diminishing returns to H=5"):
        mse = {
            h: reference_sweep.aggregates[("fh", h)].mse_avg_mean
            for h in SWEEP_HORIZONS
        }
        assert mse[2] < mse[1], f"no improvement: {mse}"
        assert mse[1] - mse[2] >= 0.15 * mse[1], f"drop too small: {mse}"
        assert mse[2] - mse[5] < mse[1] - mse[2], f"returns not diminishing: {mse}"


def test_criterion_4_age_and_mse_orderings(reference_sweep):
    with criterion(4, "for H>=3 mean age orders 3<2<1 while loop 3 keeps the largest MSE"):
        for h in (3, 5):
            agg = reference_sweep.aggregates[("fh", h)]
            aoi = agg.aoi_mean
            assert aoi[2] < aoi[1] < aoi[0], f"H={h} age ordering {aoi}"
            mse = agg.mse_mean
            assert mse[2] > mse[1] and mse[2] > mse[0], f"H={h} MSE ordering {mse}"


def test_criterion_5_oracle_equivalence():
    with criterion(5, "finite-horizon search equals policy enumeration on 200 small instances"):
        rng = np.random.default_rng(424242)
        checked = 0
        while checked < 200:
            n = int(rng.integers(1, 3))
            cals = [SamplingCalendar(1, 0) for _ in range(n)]
            dynamics = [float(rng.uniform(0.7, 1.6)) for _ in range(n)]
            sigmas = [float(rng.uniform(0.5, 2.0)) for _ in range(n)]
            table = PenaltyTable([[[a]] for a in dynamics], [[[s]] for s in sigmas])
            t = 10
            t_r = tuple(t - 1 - int(rng.integers(0, 3)) for _ in range(n))
            t_u = tuple(r - int(rng.integers(0, 3)) for r in t_r)
            state = TimingState(t=t, t_g=(t,) * n, t_r=t_r, t_u=t_u)
            p = [int(rng.integers(0, 17)) / 16.0 for _ in range(n)]
            horizon = int(rng.integers(1, 4))
            decision = fh_decide(state, cals, table, p, horizon)
            cost, action = best_policy_cost(state, cals, table, p, horizon)
            assert abs(decision.predicted_cost - cost) <= 1e-9, (
                f"cost mismatch {decision.predicted_cost} vs {cost} "
                f"(n={n}, p={p}, H={horizon})"
            )
            assert decision.action == action, (
                f"action mismatch {decision.action} vs {action} "
                f"(n={n}, p={p}, H={horizon})"
            )
            checked += 1


def test_criterion_6_penalty_identity():
    with criterion(6, "Monte-Carlo age-error mean matches the penalty within 2%"):
        n_samples = 10**5
        rng = np.random.default_rng(7)
        for a in (1.0, 1.25, 1.5):
            model = PlantModel(A=[[a]], B=[[1.0]], Sigma=[[1.0]], Q=[[1.0]], R=[[0.0]])
            table = PenaltyTable([[[a]]], [[[1.0]]])
            for delta in (2, 3, 5):
                # batch of realizations in the columns; the estimator sees the
                # payload and the applied inputs, the plant adds fresh noise
                x = rng.standard_normal((1, n_samples))
                payload = x.copy()
                inputs = []
                for _ in range(delta):
                    u = 0.3 * rng.standard_normal((1, n_samples))
                    w = rng.standard_normal((1, n_samples))
                    x = model.A @ x + model.B @ u + w
                    inputs.append(u)
                x_hat = estimate(model, payload, delta, inputs[::-1])
                err = stale_error(x, w, x_hat)
                mean_sq = float(np.mean(err**2))
                g = table.g(0, delta)
                assert abs(mean_sq - g) < 0.02 * g, (
                    f"A={a} delta={delta}: {mean_sq} vs penalty {g}"
                )


def test_criterion_7_riccati_deadbeat():
    with criterion(7, "Q=1, R=0 yields the deadbeat gain L = A to 1e-9"):
        for a in (1.0, 1.25, 1.5):
            _P, L = solve_riccati([[a]], [[1.0]], [[1.0]], [[0.0]])
            assert abs(L[0, 0] - a) <= 1e-9


def test_criterion_8_hop_age_pmfs():
    with criterion(8, "closed-form hop-age pmfs match the convolution oracle to 1e-12"):
        rng = np.random.default_rng(99)
        checked = 0
        while checked < 1000:
            n = 2 if checked % 2 == 0 else 3
            ps = rng.uniform(0.01, 0.95, size=n)
            if n >= 2 and np.min(np.diff(np.sort(ps))) < 0.05:
                continue
            chain = HopChain(ps)
            series = _pmf_series(chain, 50)
            for age in range(51):
                assert abs(pmf_closed(chain, age) - series[age]) < 1e-12
            checked += 1
        # normalization: the partial sums approach one
        for losses in ([0.5], [0.5, 0.25], [0.6, 0.3, 0.45]):
            series = _pmf_series(HopChain(losses), 600)
            partial = np.cumsum(series)
            assert np.all(partial <= 1.0 + 1e-12)
            assert partial[-1] > 1.0 - 1e-9
        # equal-loss limit of the two-hop form
        p = 0.4
        chain = HopChain([p, p])
        for age in range(40):
            expected = (1 - p) ** 2 * (age + 1) * p**age
            assert abs(pmf_oracle(chain, age) - expected) < 1e-12


def test_criterion_9_determinism(tmp_path):
    with criterion(9, "identical config and seed give byte-identical CSVs"):
        base = reference_config(slots=300, repetitions=3, seed=2024)
        spec = ExperimentSpec(
            name="determinism", base=base, horizons=[1, 2], policies=["fh", "max_aoi"]
        )
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        files_a = run_sweep(spec, threads=1, out_dir=out_a).files
        files_b = run_sweep(spec, threads=2, out_dir=out_b).files
        assert [f.name for f in files_a] == [f.name for f in files_b]
        for fa, fb in zip(files_a, files_b):
            assert fa.read_bytes() == fb.read_bytes(), f"{fa.name} differs"
