"""The exact Poisson-binomial oracle against the total-variation bounds.

For independent Bernoulli summands the exact distance d_TV(P_W, Po(lam)) is
computable by convolution, and must land between the matched lower and
upper bounds (which bracket it within a factor of 32).  The law of small
numbers is visible directly: splitting the same mean across more, rarer
events drives the distance to zero like 1/n.
"""

import numpy as np

from poientropy import (
    exact_distribution,
    tv_lower_barbour_hall,
    tv_to_poisson,
    tv_upper_barbour_hall,
    tv_upper_lecam,
)

lam = 2.0
print(f"=== Binomial(n, {lam:g}/n) vs Po({lam:g}) as n grows ===")
print(f"{'n':>5} {'lower':>12} {'exact d_TV':>12} {'upper':>12} {'lecam':>12}")
for n in (10, 20, 40, 80, 160, 320):
    probs = [lam / n] * n
    pmf = exact_distribution(probs)
    sum_p2 = float(np.sum(np.square(probs)))
    exact = tv_to_poisson(pmf, lam)
    lower = tv_lower_barbour_hall(lam, sum_p2)
    upper = tv_upper_barbour_hall(lam, sum_p2)
    print(f"{n:>5} {lower:>12.3e} {exact:>12.3e} {upper:>12.3e} "
          f"{tv_upper_lecam(sum_p2):>12.3e}")
    assert lower <= exact <= upper

print()
print("=== heterogeneous random systems: the sandwich never breaks ===")
rng = np.random.default_rng(0)
worst_ratio = 0.0
for trial in range(200):
    probs = rng.uniform(0, 0.2, rng.integers(10, 150))
    pmf = exact_distribution(probs)
    lam = float(np.sum(probs))
    sum_p2 = float(np.sum(probs**2))
    exact = tv_to_poisson(pmf, lam)
    lower = tv_lower_barbour_hall(lam, sum_p2)
    upper = tv_upper_barbour_hall(lam, sum_p2)
    assert lower <= exact <= upper
    worst_ratio = max(worst_ratio, upper / lower)
print(f"200 random systems contained; worst upper/lower ratio {worst_ratio:.2f} "
      "(theory: <= 32)")
