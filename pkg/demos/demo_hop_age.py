"""Age distributions across chains of lossy hops.

Each hop retransmits until success, adding a geometric number of slots.
The chain age is the sum; its pmf has closed forms for up to three hops and
a convolution oracle for everything else (including equal loss rates, where
the closed forms are singular).
"""

import numpy as np

from aoisched import HopChain, mean_age, pmf_closed, pmf_oracle

one = HopChain([0.5])
two = HopChain([0.5, 0.25])
three = HopChain([0.5, 0.25, 0.125])

print("age    1 hop (p=0.5)   2 hops (+0.25)   3 hops (+0.125)")
for age in range(8):
    print(
        f"{age:3d} {pmf_closed(one, age):14.6f} {pmf_closed(two, age):16.6f} "
        f"{pmf_closed(three, age):17.6f}"
    )

print()
for chain, label in ((one, "1 hop"), (two, "2 hops"), (three, "3 hops")):
    identity = sum(p / (1 - p) for p in chain.losses)
    print(f"mean age {label}: truncated sum {mean_age(chain):.6f}, "
          f"per-hop identity {identity:.6f}")

print()
print("equal loss rates break the closed form's denominators; the oracle")
print("handles them (two hops at p=0.4 follow a negative binomial):")
p = 0.4
for age in range(5):
    analytic = (1 - p) ** 2 * (age + 1) * p**age
    print(f"  age {age}: oracle {pmf_oracle(HopChain([p, p]), age):.6f}   "
          f"analytic {analytic:.6f}")

print()
print("hop order never matters (convolution is commutative):")
for perm in ([0.5, 0.25, 0.125], [0.125, 0.5, 0.25], [0.25, 0.125, 0.5]):
    print(f"  {perm}: pmf(4) = {pmf_closed(HopChain(perm), 4):.12f}")
