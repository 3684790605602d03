"""Scheduling of networked control loops over a shared lossy wireless link.

Heterogeneous control loops compete for one transmission slot per time step.
The scheduler minimizes the total age penalty (expected remote-estimation
MSE as a function of information age) over a finite lookahead horizon, by
backward induction on the tree of reachable network states.

Modules:

timing     sampling calendars, timestamp state, age of information
channel    block-fading Bernoulli loss with seeded, reproducible draws
control    plants, Riccati gains, remote estimation, LQG cost
penalty    age-to-MSE penalty tables and the network state cost
scheduler  finite-horizon tree search and baseline policies
sim        slot-level simulation runs and across-run aggregation
hopdist    age pmf over tandem chains of lossy hops
config     TOML experiment files
runner     sweeps, CSV and plot-data emission
seeds      RNG stream derivation (common random numbers)
cli        command line: run / decide / hopdist / validate
"""

from .channel import LossProcess
from .config import ConfigError, ExperimentSpec, default_config_path, load_config
from .control import (
    LqgAccumulator,
    PlantModel,
    PlantState,
    RiccatiError,
    control_input,
    estimate,
    estimation_error,
    plant_step,
    solve_riccati,
    stale_error,
)
from .hopdist import HopChain, mean_age, pmf, pmf_closed, pmf_oracle
from .penalty import PenaltyTable
from .runner import run_sweep
from .scheduler import (
    POLICY_IDS,
    DecisionTree,
    SchedulerDecision,
    expand_tree,
    fh_decide,
    make_policy,
    worst_case_nodes,
)
from .sim import Aggregate, RunResult, SimConfig, SubsystemSpec, aggregate, run
from .timing import (
    SamplingCalendar,
    TimingState,
    admissible_actions,
    advance,
    advance_generation,
    record_reception,
    utilize,
)

__version__ = "0.1.0"
