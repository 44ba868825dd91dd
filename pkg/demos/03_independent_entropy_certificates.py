"""Certified entropy enclosures for independent Bernoulli sums.

The arithmetic system p_i = 2 a i has closed-form moments, so systems of
size 1e8 or 1e12 are handled without materialising anything.  On a small
system the certificate is compared against the exact entropy gap from the
oracle: the claimed enclosure always contains the truth.
"""

import numpy as np

from poientropy import (
    MomentSummary,
    arithmetic_moments,
    best_independent_bound,
    entropy_bound_independent,
    entropy_bound_independent_sharp,
    exact_distribution,
    pmf_entropy,
    poisson_entropy,
)

print("=== arithmetic system, a=1e-10, n=1e8 (never materialised) ===")
moments = arithmetic_moments(1e-10, 10**8)
print(f"  lam = {moments.lam:,.2f}, theta = {moments.theta:.6f}")
plain = entropy_bound_independent(moments)
sharp = entropy_bound_independent_sharp(moments)
print(f"  plain rule:  0 <= H(Z) - H(W) <= {plain.epsilon:.4f} nats")
print(f"  sharp rule:  0 <= H(Z) - H(W) <= {sharp.epsilon:.4f} nats")
best = best_independent_bound(moments)
print(f"  best: H(W) = {best.point_estimate:.3f} nats "
      f"+- {best.epsilon / 2:.3f} ({best.relative_error:.2%} relative)")

print()
print("=== certificate vs exact gap on simulable systems ===")
rng = np.random.default_rng(1)
print(f"{'n':>5} {'H(Z)-H(W) exact':>18} {'certificate':>14} {'slack factor':>13}")
for n in (50, 100, 200, 400):
    probs = rng.uniform(0, 0.08, n)
    moments = MomentSummary.from_probs(probs)
    h_z = poisson_entropy(moments.lam).nats
    h_w = pmf_entropy(exact_distribution(probs)).nats
    gap = h_z - h_w
    report = best_independent_bound(moments)
    print(f"{n:>5} {gap:>18.3e} {report.epsilon:>14.3e} "
          f"{report.epsilon / gap:>13.1f}x")
    assert 0.0 <= gap <= report.epsilon
