"""Scheduling policies head to head on one short scenario.

Same channel realization, same plants, same sampling offsets for everyone
(common random numbers): the only difference is who gets the slot.
"""

from aoisched import SimConfig, SubsystemSpec, run

subsystems = [
    SubsystemSpec(A=[[a]], B=[[1.0]], Sigma=[[1.0]], Q=[[1.0]], R=[[0.0]], period=3)
    for a in (1.0, 1.25, 1.5)
]
cfg = SimConfig(
    subsystems=subsystems,
    slots=4000,
    repetitions=1,
    horizon=3,
    policy="fh",
    loss_mean=0.3,
    loss_std=0.2,
    coherence=30,
    seed=11,
)

print("policy        network MSE   network age   per-loop tx shares")
for policy in ("fh", "greedy", "max_aoi", "round_robin", "random"):
    result = run(cfg, 0, policy=policy)
    total_tx = max(sum(result.tx), 1)
    shares = "/".join(f"{tx / total_tx:.2f}" for tx in result.tx)
    flag = "  (diverged!)" if result.diverged else ""
    print(
        f"{policy:<12} {result.mse_avg:12.3f} {result.aoi_avg:13.3f}   {shares}{flag}"
    )

print()
print("the lookahead scheduler shifts slots toward the unstable loop instead")
print("of sharing them evenly, which is where the MSE advantage comes from.")
