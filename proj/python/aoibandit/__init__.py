"""Scheduling of inaccurate sources over an unreliable channel.

Slot dynamics, the four bandit schedulers, paired Monte Carlo regret
experiments, and closed-form regret bound evaluators. The heavy lifting lives
in the compiled extension; this package re-exports its surface.
"""

from aoibandit._core import (
    ArmQuality,
    DegenerateGapError,
    EgBound,
    InstanceConstants,
    LowerBoundResult,
    MonteCarloResult,
    PolicyConfig,
    PolicyKind,
    RegretSeries,
    SlotOutcome,
    SourceParams,
    SweepAxis,
    SweepRow,
    SystemConfig,
    TeSchedule,
    TrialResult,
    bernoulli_kl,
    eg_upper_bound,
    empirical_mu,
    epsilon_schedule,
    etc_te_schedule,
    etc_upper_bound,
    instance_constants,
    lower_bound,
    monte_carlo,
    mu,
    optimal_source,
    run_oracle,
    run_trial,
    sweep,
    ucb_index,
    validate,
)

__all__ = [
    "ArmQuality",
    "DegenerateGapError",
    "EgBound",
    "InstanceConstants",
    "LowerBoundResult",
    "MonteCarloResult",
    "PolicyConfig",
    "PolicyKind",
    "RegretSeries",
    "SlotOutcome",
    "SourceParams",
    "SweepAxis",
    "SweepRow",
    "SystemConfig",
    "TeSchedule",
    "TrialResult",
    "bernoulli_kl",
    "eg_upper_bound",
    "empirical_mu",
    "epsilon_schedule",
    "etc_te_schedule",
    "etc_upper_bound",
    "instance_constants",
    "lower_bound",
    "monte_carlo",
    "mu",
    "optimal_source",
    "run_oracle",
    "run_trial",
    "sweep",
    "ucb_index",
    "validate",
]

__version__ = "0.1.0"
