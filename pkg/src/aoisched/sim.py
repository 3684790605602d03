"""Slot-by-slot simulation of the shared link and its control loops.

Per-slot pipeline, matching the timing semantics in :mod:`aoisched.timing`:

1. enter the slot: the previous slot's transmission outcome lands
   (reception), sampling events refresh sensor buffers (generation) and hand
   received packets to the controllers (utilization);
2. at each sampling event the plant advances one period, the controller
   re-estimates the state from its freshest utilized packet and computes the
   period's input;
3. per-slot metrics are recorded;
4. the scheduler observes the state and current loss probabilities and picks
   at most one sub-system, whose transmission outcome is drawn.

The per-slot squared error is the realized estimation-error component
attributable to information age, evaluated at the slot's age: at a sampling
event it is ``|e - w_prev|^2`` (the raw error minus the period's fresh,
inherently unpredictable noise), and on the remaining slots of the period,
where the information is one period older, it is ``|A e|^2`` (the error the
next period would inherit).  Its conditional mean given the age is exactly
the age penalty ``g(age)`` at every slot, cold start included, which makes
the reported MSE directly comparable to the scheduler's cost predictions.

Repetitions are independent: every randomness source derives from
``(master seed, repetition, purpose, index)``, see :mod:`aoisched.seeds`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from . import control, seeds, timing
from .channel import LossProcess
from .control import DIVERGENCE_GUARD, PlantModel
from .penalty import PenaltyTable
from .scheduler import make_policy
from .timing import SamplingCalendar, TimingState


@dataclass(eq=False)
class SubsystemSpec:
    """Raw per-sub-system parameters (matrices as nested row-major lists)."""

    A: list
    B: list
    Sigma: list
    Q: list
    R: list
    period: int

    def model(self) -> PlantModel:
        return PlantModel(A=self.A, B=self.B, Sigma=self.Sigma, Q=self.Q, R=self.R)


@dataclass(eq=False)
class SimConfig:
    """One simulation scenario: sub-systems, channel, policy, durations."""

    subsystems: List[SubsystemSpec]
    slots: int
    repetitions: int
    horizon: int
    policy: str
    loss_mean: float
    loss_std: float
    coherence: int
    seed: int

    def __post_init__(self):
        if not self.subsystems:
            raise ValueError("need at least one subsystem")
        for name, value in (
            ("slots", self.slots),
            ("repetitions", self.repetitions),
            ("horizon", self.horizon),
            ("coherence", self.coherence),
        ):
            if value < 1:
                raise ValueError(f"{name} must be >= 1, got {value}")


@dataclass
class RunResult:
    """Finalized metrics of one repetition."""

    repetition: int
    policy: str
    horizon: int
    slots: int
    mse: List[float]
    aoi: List[float]
    tx: List[int]
    success: List[int]
    nodes_mean: float
    diverged: bool = False
    diverged_slot: Optional[int] = None
    err_trace: Optional[np.ndarray] = None
    aoi_trace: Optional[np.ndarray] = None

    @property
    def mse_avg(self) -> float:
        return sum(self.mse) / len(self.mse)

    @property
    def aoi_avg(self) -> float:
        return sum(self.aoi) / len(self.aoi)


class MetricsAccumulator:
    """Per-slot sums of squared error, age, and bookkeeping counters."""

    def __init__(self, n: int, trace_slots: Optional[int] = None):
        self.n = n
        self.err_sum = [0.0] * n
        self.aoi_sum = [0] * n
        self.tx = [0] * n
        self.success = [0] * n
        self.nodes_sum = 0
        self.slots = 0
        self._trace = trace_slots is not None
        if self._trace:
            self.err_trace = np.zeros((n, trace_slots))
            self.aoi_trace = np.zeros((n, trace_slots), dtype=int)

    def record_slot(self, errors: Sequence[float], ages: Sequence[int], nodes: int) -> None:
        t = self.slots
        for i in range(self.n):
            self.err_sum[i] += errors[i]
            self.aoi_sum[i] += ages[i]
        self.nodes_sum += nodes
        if self._trace:
            for i in range(self.n):
                self.err_trace[i, t] = errors[i]
                self.aoi_trace[i, t] = ages[i]
        self.slots += 1

    def finalize(
        self,
        repetition: int,
        policy: str,
        horizon: int,
        diverged: bool = False,
        diverged_slot: Optional[int] = None,
    ) -> RunResult:
        slots = max(self.slots, 1)
        return RunResult(
            repetition=repetition,
            policy=policy,
            horizon=horizon,
            slots=self.slots,
            mse=[s / slots for s in self.err_sum],
            aoi=[s / slots for s in self.aoi_sum],
            tx=list(self.tx),
            success=list(self.success),
            nodes_mean=self.nodes_sum / slots,
            diverged=diverged,
            diverged_slot=diverged_slot,
            err_trace=self.err_trace[:, : self.slots] if self._trace else None,
            aoi_trace=self.aoi_trace[:, : self.slots] if self._trace else None,
        )


def run(
    cfg: SimConfig,
    repetition: int,
    policy: Optional[str] = None,
    horizon: Optional[int] = None,
    collect_traces: bool = False,
) -> RunResult:
    """Execute one repetition and return its metrics.

    ``policy``/``horizon`` override the config's values, so sweeps can fan
    out over them while all randomness stays tied to the repetition alone.
    """
    policy_id = policy if policy is not None else cfg.policy
    h = horizon if horizon is not None else cfg.horizon
    n = len(cfg.subsystems)
    models = [spec.model() for spec in cfg.subsystems]
    calendars = []
    for i, spec in enumerate(cfg.subsystems):
        rng = seeds.stream(cfg.seed, repetition, seeds.OFFSET, i)
        calendars.append(SamplingCalendar(spec.period, int(rng.integers(spec.period))))
    penalty = PenaltyTable.from_models(models)
    chan = LossProcess.seeded(
        n, cfg.loss_mean, cfg.loss_std, cfg.coherence, cfg.seed, repetition
    )
    noise_rngs = [seeds.stream(cfg.seed, repetition, seeds.PLANT_NOISE, i) for i in range(n)]
    pol = make_policy(policy_id, h, rng=seeds.stream(cfg.seed, repetition, seeds.POLICY))

    state = timing.TimingState.cold(calendars)
    x: List[Optional[np.ndarray]] = [None] * n
    u_hist: List[List[np.ndarray]] = [[] for _ in range(n)]
    sensor_payload: List[Optional[np.ndarray]] = [None] * n
    received: List[Optional[tuple]] = [None] * n  # (generation slot, payload)
    utilized: List[Optional[tuple]] = [None] * n
    err_at_event = [0.0] * n  # |e - w_prev|^2, valid while the age is unchanged
    err_aged = [0.0] * n  # |A e|^2, valid after the intra-period age step

    metrics = MetricsAccumulator(n, trace_slots=cfg.slots if collect_traces else None)
    scheduled_prev: Optional[int] = None
    gamma_prev = False
    diverged = False
    diverged_slot: Optional[int] = None

    for t in range(cfg.slots):
        state = timing.advance(state, calendars, scheduled_prev, gamma_prev)

        for i in range(n):
            cal = calendars[i]
            if not cal.contains(t):
                continue
            model = models[i]
            k = cal.sampling_index(t)
            if k == 0:
                w = model.draw_noise(noise_rngs[i])
                x[i] = w
            else:
                w = model.draw_noise(noise_rngs[i])
                x[i] = model.A @ x[i] + model.B @ u_hist[i][k - 1] + w
            if not np.all(np.isfinite(x[i])) or np.max(np.abs(x[i])) > DIVERGENCE_GUARD:
                diverged = True
                diverged_slot = t
                break
            sensor_payload[i] = x[i].copy()
            if received[i] is not None:
                # at a sampling event t_u == t_r, so the latest received
                # packet is exactly the utilized one
                utilized[i] = received[i]
            if utilized[i] is None:
                x_hat = np.zeros(model.n)
                u_k = np.zeros(model.m)
            else:
                gen_slot, payload = utilized[i]
                delta = cal.aoi(t, gen_slot)
                u_recent = [u_hist[i][k - q] for q in range(1, delta + 1)]
                x_hat = control.estimate(model, payload, delta, u_recent)
                u_k = control.control_input(model, x_hat)
            e_raw = x[i] - x_hat
            e_stale = control.stale_error(x[i], w, x_hat)
            e_aged = model.A @ e_raw
            err_at_event[i] = float(e_stale @ e_stale)
            err_aged[i] = float(e_aged @ e_aged)
            u_hist[i].append(u_k)
        if diverged:
            break

        errors = [
            err_at_event[i] if calendars[i].contains(t) else err_aged[i] for i in range(n)
        ]
        ages = [calendars[i].aoi(t, state.t_u[i]) for i in range(n)]
        chan.redraw_if_boundary(t)
        decision = pol.decide(state, calendars, penalty, chan.observe())
        gammas = chan.draw_all()
        a = decision.action
        if a is None:
            scheduled_prev, gamma_prev = None, False
        else:
            metrics.tx[a] += 1
            got = bool(gammas[a])
            if got:
                metrics.success[a] += 1
                received[a] = (state.t_g[a], sensor_payload[a])
            scheduled_prev, gamma_prev = a, got
        metrics.record_slot(errors, ages, decision.nodes_expanded)

    return metrics.finalize(repetition, policy_id, h, diverged, diverged_slot)


@dataclass
class Aggregate:
    """Across-repetition means with normal-approximation 95% confidence intervals."""

    runs: int
    diverged_runs: int
    mse_mean: np.ndarray
    mse_ci: np.ndarray
    aoi_mean: np.ndarray
    aoi_ci: np.ndarray
    mse_avg_mean: float
    mse_avg_ci: float
    aoi_avg_mean: float
    aoi_avg_ci: float
    nodes_mean: float
    nodes_ci: float


def _mean_ci(values: np.ndarray) -> tuple:
    mean = values.mean(axis=0)
    if values.shape[0] < 2:
        return mean, np.full_like(np.asarray(mean, dtype=float), np.nan)
    stderr = values.std(axis=0, ddof=1) / math.sqrt(values.shape[0])
    return mean, 1.96 * stderr


def aggregate(results: Sequence[RunResult]) -> Aggregate:
    """Summarize repetitions; diverged runs are counted but excluded from means."""
    if len(results) < 2:
        raise ValueError("confidence intervals need at least 2 runs")
    valid = [r for r in results if not r.diverged]
    diverged_runs = len(results) - len(valid)
    if not valid:
        n = len(results[0].mse)
        nanv = np.full(n, np.nan)
        return Aggregate(
            runs=len(results), diverged_runs=diverged_runs,
            mse_mean=nanv, mse_ci=nanv.copy(), aoi_mean=nanv.copy(), aoi_ci=nanv.copy(),
            mse_avg_mean=float("nan"), mse_avg_ci=float("nan"),
            aoi_avg_mean=float("nan"), aoi_avg_ci=float("nan"),
            nodes_mean=float("nan"), nodes_ci=float("nan"),
        )
    mse = np.array([r.mse for r in valid])
    aoi = np.array([r.aoi for r in valid])
    mse_avg = np.array([r.mse_avg for r in valid])
    aoi_avg = np.array([r.aoi_avg for r in valid])
    nodes = np.array([r.nodes_mean for r in valid])
    mse_mean, mse_ci = _mean_ci(mse)
    aoi_mean, aoi_ci = _mean_ci(aoi)
    mse_avg_mean, mse_avg_ci = _mean_ci(mse_avg)
    aoi_avg_mean, aoi_avg_ci = _mean_ci(aoi_avg)
    nodes_mean, nodes_ci = _mean_ci(nodes)
    return Aggregate(
        runs=len(results),
        diverged_runs=diverged_runs,
        mse_mean=mse_mean,
        mse_ci=mse_ci,
        aoi_mean=aoi_mean,
        aoi_ci=aoi_ci,
        mse_avg_mean=float(mse_avg_mean),
        mse_avg_ci=float(mse_avg_ci),
        aoi_avg_mean=float(aoi_avg_mean),
        aoi_avg_ci=float(aoi_avg_ci),
        nodes_mean=float(nodes_mean),
        nodes_ci=float(nodes_ci),
    )
