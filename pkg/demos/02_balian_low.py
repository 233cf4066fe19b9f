"""Tour: frame-bound degradation approaching the critical density (Balian-Low).

The Gaussian generates a Gabor frame exactly when alpha*beta < 1.  As the
density climbs toward 1 the optimal lower frame bound decays to zero, and at
the critical density the frame collapses: the lower bound vanishes and the
canonical dual stops existing.

Run:  python3 demos/02_balian_low.py
"""

from adelic_gabor import (
    Gaussian,
    GroupSelector,
    NotAFrameError,
    RectLattice,
    balian_low_scan,
    canonical_dual,
)

densities = [0.5, 0.8, 0.9, 0.95, 0.99, 1.0]
rows = balian_low_scan(
    Gaussian(), densities, GroupSelector.adele(), (1, 2), grid_density=24, compute_duals=False
)

print(f"{'density':>8s} {'lower bound':>14s} {'refined':>14s}  note")
for r in rows:
    print(f"{r.density:8.3f} {r.lower_bound:14.6e} {r.refined_lower_bound:14.6e}  {r.note}")

print("\nAt the critical density the canonical dual does not exist:")
try:
    canonical_dual(Gaussian(), RectLattice(1.0, 1.0), tol=1e-8)
except NotAFrameError as exc:
    print(f"  NotAFrameError: {exc}")
