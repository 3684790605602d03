"""Shared scenario builders for the test suite."""

from aoisched import SimConfig, SubsystemSpec


def scalar_subsystem(a, period=3, sigma=1.0, q=1.0, r=0.0):
    return SubsystemSpec(
        A=[[a]], B=[[1.0]], Sigma=[[sigma]], Q=[[q]], R=[[r]], period=period
    )


def reference_config(
    slots=2000,
    repetitions=2,
    seed=7,
    policy="fh",
    horizon=1,
    loss_mean=0.3,
    loss_std=0.2,
    coherence=30,
    periods=(3, 3, 3),
):
    """The three-loop reference scenario (A = 1.0, 1.25, 1.5; deadbeat gains)."""
    subs = [scalar_subsystem(a, period=d) for a, d in zip((1.0, 1.25, 1.5), periods)]
    return SimConfig(
        subsystems=subs,
        slots=slots,
        repetitions=repetitions,
        horizon=horizon,
        policy=policy,
        loss_mean=loss_mean,
        loss_std=loss_std,
        coherence=coherence,
        seed=seed,
    )
