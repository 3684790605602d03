"""Finite-horizon optimal scheduling by leveled tree search, plus baselines.

Every slot the scheduler rebuilds, from the current network state, the tree
of states reachable within the next H slots.  Scheduling sub-system i
branches on the transmission outcome (success with probability ``1 - p_i``),
idling has a single certain child; only sub-systems holding an undelivered
packet may be scheduled.  States inside a level are deduplicated on their
timestamp triple (in particular, every action's failure branch collapses
into the shared no-update state), turning the tree into a leveled DAG; this
is sound because the cost-to-go depends only on (state, level).  Backward
induction then assigns each node the state cost plus the best
probability-weighted child cost, and the root's minimizing action is
executed.

Ties in the minimization prefer the lowest sub-system index, idle last, so
runs are reproducible.  The observed loss probabilities are held frozen over
the horizon: the scheduler knows nothing about the fading process.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .penalty import PenaltyTable
from .timing import SamplingCalendar, TimingState, admissible_actions

POLICY_IDS = ("fh", "greedy", "round_robin", "random", "max_aoi")


def worst_case_nodes(n_subsystems: int, horizon: int) -> int:
    """Size of the full (N+1)-ary level tree: ((N+1)^(H+1) - 1) / N."""
    return ((n_subsystems + 1) ** (horizon + 1) - 1) // n_subsystems


@dataclass
class SchedulerDecision:
    """Outcome of one slot's scheduling decision."""

    action: Optional[int]
    predicted_cost: float
    nodes_expanded: int


@dataclass
class DecisionTree:
    """Leveled DAG produced by one finite-horizon expansion.

    ``states[l]`` lists the deduplicated timestamp triples at level ``l``
    (occurring at slot ``base_slot + l``); ``edges[l][j]`` lists node j's
    actions as ``(action, ((prob, child_index), ...))``; ``children[l][j]``
    holds node j's distinct next states (the shared no-update child first);
    ``cost_to_go`` and ``best_action`` are filled by backward induction, with
    leaves carrying the bare state cost and no action.

    Deduplication never changes costs (the cost-to-go depends only on state
    and level), so two size measures coexist: ``distinct_states`` counts the
    DAG as stored, while ``nodes_expanded`` counts the search tree as
    branched, i.e. each node contributes one plus the tree counts of its
    distinct children.  The latter is what the worst-case bound
    ``worst_case_nodes`` caps.
    """

    base_slot: int
    states: List[list]
    edges: List[list]
    children: List[list]
    cost_to_go: List[List[float]]
    best_action: List[List[Optional[int]]]
    nodes_expanded: int = 0

    @property
    def distinct_states(self) -> int:
        return sum(len(level) for level in self.states)


def expand_tree(
    state: TimingState,
    calendars: Sequence[SamplingCalendar],
    penalty: PenaltyTable,
    p: Sequence[float],
    horizon: int,
) -> DecisionTree:
    """Build and solve the H-stage tree rooted at ``state``."""
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    n = len(calendars)
    if len(p) != n or len(state.t_g) != n:
        raise ValueError("state, calendars and loss vector disagree on sub-system count")
    for i in range(n):
        if state.t_u[i] >= state.t:
            raise ValueError("utilization timestamps must precede the current slot")

    base = state.t
    ids = range(n)
    periods = [c.period for c in calendars]
    offsets = [c.offset for c in calendars]
    p = [float(v) for v in p]

    # ages only grow along the horizon; pre-grow tables so the cost loop is
    # plain list indexing
    for i in ids:
        penalty.ensure(i, calendars[i].aoi(base + horizon, state.t_u[i]))
    sums = [penalty.partial_sums(i) for i in ids]

    states: List[list] = [[(state.t_g, state.t_r, state.t_u)]]
    edges: List[list] = []
    children: List[list] = []
    cur = states[0]
    for level in range(horizon):
        t1 = base + level + 1
        samp = [t1 >= offsets[i] and (t1 - offsets[i]) % periods[i] == 0 for i in ids]
        index: dict = {}
        nxt: list = []
        lvl_edges: list = []
        lvl_children: list = []
        for tg, tr, tu in cur:
            ntg = tuple(t1 if samp[i] else tg[i] for i in ids)
            ntu_fail = tuple(tr[i] if samp[i] else tu[i] for i in ids)
            fail = (ntg, tr, ntu_fail)
            fi = index.get(fail)
            if fi is None:
                fi = len(nxt)
                index[fail] = fi
                nxt.append(fail)
            acts = []
            kids = [fi]
            for i in ids:
                if tg[i] > tr[i]:
                    pi = p[i]
                    if pi >= 1.0:
                        # success impossible: scheduling i collapses to the no-update child
                        acts.append((i, ((1.0, fi),)))
                        continue
                    ntr = tr[:i] + (tg[i],) + tr[i + 1 :]
                    ntu = tuple(ntr[j] if samp[j] else tu[j] for j in ids)
                    succ = (ntg, ntr, ntu)
                    si = index.get(succ)
                    if si is None:
                        si = len(nxt)
                        index[succ] = si
                        nxt.append(succ)
                    kids.append(si)
                    if pi <= 0.0:
                        acts.append((i, ((1.0, si),)))
                    else:
                        acts.append((i, ((1.0 - pi, si), (pi, fi))))
            acts.append((None, ((1.0, fi),)))
            lvl_edges.append(acts)
            lvl_children.append(tuple(kids))
        edges.append(lvl_edges)
        children.append(lvl_children)
        states.append(nxt)
        cur = nxt

    # backward induction; cost of a node is computed exactly once
    cost_to_go: List[List[float]] = [[] for _ in range(horizon + 1)]
    best_action: List[List[Optional[int]]] = [[] for _ in range(horizon + 1)]

    def level_costs(level_states: list, t_slot: int) -> List[float]:
        out = []
        for _tg, _tr, tu in level_states:
            c = 0.0
            for i in ids:
                d = (t_slot - tu[i] + periods[i] - 1) // periods[i]
                c += sums[i][d - 1]
            out.append(c)
        return out

    cost_to_go[horizon] = level_costs(states[horizon], base + horizon)
    best_action[horizon] = [None] * len(states[horizon])
    tree_cnt = [1] * len(states[horizon])
    for level in range(horizon - 1, -1, -1):
        here = level_costs(states[level], base + level)
        nxt_costs = cost_to_go[level + 1]
        nxt_cnt = tree_cnt
        tree_cnt = []
        lvl_best: List[Optional[int]] = []
        for j, acts in enumerate(edges[level]):
            best_v = None
            best_a: Optional[int] = None
            for a, kids in acts:
                if len(kids) == 1:
                    v = nxt_costs[kids[0][1]]
                else:
                    (p1, i1), (p2, i2) = kids
                    v = p1 * nxt_costs[i1] + p2 * nxt_costs[i2]
                if best_v is None or v < best_v:
                    best_v = v
                    best_a = a
            here[j] += best_v
            lvl_best.append(best_a)
            tree_cnt.append(1 + sum(nxt_cnt[c] for c in children[level][j]))
        cost_to_go[level] = here
        best_action[level] = lvl_best

    return DecisionTree(
        base_slot=base,
        states=states,
        edges=edges,
        children=children,
        cost_to_go=cost_to_go,
        best_action=best_action,
        nodes_expanded=tree_cnt[0],
    )


def fh_decide(
    state: TimingState,
    calendars: Sequence[SamplingCalendar],
    penalty: PenaltyTable,
    p: Sequence[float],
    horizon: int,
) -> SchedulerDecision:
    """Level-0 optimal action of the H-stage problem rooted at ``state``.

    ``predicted_cost`` is the full H-stage expected cost, including the
    root's (action-independent) state cost.
    """
    tree = expand_tree(state, calendars, penalty, p, horizon)
    nodes = tree.nodes_expanded
    assert nodes <= worst_case_nodes(len(calendars), horizon)
    return SchedulerDecision(
        action=tree.best_action[0][0],
        predicted_cost=tree.cost_to_go[0][0],
        nodes_expanded=nodes,
    )


class FiniteHorizonPolicy:
    """The optimal H-slot lookahead scheduler."""

    def __init__(self, horizon: int):
        if horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {horizon}")
        self.horizon = horizon

    def decide(self, state, calendars, penalty, p) -> SchedulerDecision:
        return fh_decide(state, calendars, penalty, p, self.horizon)


class GreedyPolicy(FiniteHorizonPolicy):
    """One-slot lookahead (the H = 1 special case)."""

    def __init__(self):
        super().__init__(1)


class RoundRobinPolicy:
    """Cycle over sub-systems, skipping those with nothing new to send."""

    def __init__(self):
        self._last = -1

    def decide(self, state, calendars, penalty, p) -> SchedulerDecision:
        candidates = admissible_actions(state)[:-1]
        if not candidates:
            return SchedulerDecision(None, float("nan"), 0)
        n = len(state.t_g)
        eligible = set(candidates)
        for step in range(1, n + 1):
            i = (self._last + step) % n
            if i in eligible:
                self._last = i
                return SchedulerDecision(i, float("nan"), 0)
        raise AssertionError("unreachable")


class RandomPolicy:
    """Uniform choice among sub-systems with a new packet; idle only when forced."""

    def __init__(self, rng: np.random.Generator):
        self._rng = rng

    def decide(self, state, calendars, penalty, p) -> SchedulerDecision:
        candidates = admissible_actions(state)[:-1]
        if not candidates:
            return SchedulerDecision(None, float("nan"), 0)
        i = candidates[int(self._rng.integers(len(candidates)))]
        return SchedulerDecision(i, float("nan"), 0)


class MaxAgePolicy:
    """Serve the eligible sub-system with the largest current age."""

    def decide(self, state, calendars, penalty, p) -> SchedulerDecision:
        candidates = admissible_actions(state)[:-1]
        if not candidates:
            return SchedulerDecision(None, float("nan"), 0)
        best = max(candidates, key=lambda i: (calendars[i].aoi(state.t, state.t_u[i]), -i))
        return SchedulerDecision(best, float("nan"), 0)


def make_policy(policy_id: str, horizon: int, rng: Optional[np.random.Generator] = None):
    """Instantiate a policy by id (one of ``POLICY_IDS``)."""
    if policy_id == "fh":
        return FiniteHorizonPolicy(horizon)
    if policy_id == "greedy":
        return GreedyPolicy()
    if policy_id == "round_robin":
        return RoundRobinPolicy()
    if policy_id == "random":
        if rng is None:
            raise ValueError("random policy needs an RNG stream")
        return RandomPolicy(rng)
    if policy_id == "max_aoi":
        return MaxAgePolicy()
    raise ValueError(f"unknown policy {policy_id!r}; valid ids: {', '.join(POLICY_IDS)}")
