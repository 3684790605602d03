"""The age penalty g: how fast stale information hurts each control loop.

g(age) is the expected squared estimation error attributable to information
age.  Age 1 (the freshest achievable packet) costs nothing; every further
period compounds by the squared dynamics, so the A = 1.5 loop's penalty
explodes while the random walk grows linearly.
"""

from aoisched import PenaltyTable

dynamics = (1.0, 1.25, 1.5)
table = PenaltyTable([[[a]] for a in dynamics], [[[1.0]] for _ in dynamics])

ages = list(range(1, 11))
print("age " + "".join(f"   A={a:<8}" for a in dynamics))
for age in ages:
    row = "".join(f"{table.g(i, age):11.3f} " for i in range(3))
    print(f"{age:3d} {row}")

print()
print("closed form (scalar A != 1): g(age) = Sigma * (A^(2*age) - A^2) / (A^2 - 1)")
a, sigma = 1.5, 1.0
for age in (3, 6, 9):
    closed = sigma * (a ** (2 * age) - a**2) / (a**2 - 1)
    print(f"  A=1.5, age={age}: table {table.g(2, age):12.4f}   closed {closed:12.4f}")

print()
print("the state cost the scheduler minimizes is the sum of these penalties")
print("over all loops at their current ages.")
