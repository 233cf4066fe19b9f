"""Tour: canonical dual windows and Wexler-Raz duality across the three groups.

The Wexler-Raz criterion says h is a dual window of g on the lattice
alpha*Z x beta*Z exactly when <h, pi(lam°) g> = alpha*beta*delta_{lam°,0} over
the adjoint lattice.  On R x Q_p and on the adeles the adjoint lattice picks
up non-integer rational indices whose inner products vanish *exactly* because
the default local window 1_{Z_p} kills every shift with negative valuation.

Run:  python3 demos/01_duality_tour.py
"""

from adelic_gabor import (
    AdelicTFLattice,
    Gaussian,
    GroupSelector,
    RectLattice,
    SeparableWindow,
    canonical_dual,
    wexler_raz_check,
)

alpha = beta = 2**-0.5  # density 1/2: a proper Gabor frame
g = Gaussian()
print(f"Gaussian window, alpha = beta = 2^-1/2 (density {alpha * beta:.6f})")

h = canonical_dual(g, RectLattice(alpha, beta), tol=1e-10)
print(f"canonical dual computed: {len(h.terms)} Gaussian atoms\n")

for group in (GroupSelector.real(), GroupSelector.real_x_qp(2), GroupSelector.adele()):
    lat = AdelicTFLattice.create(group, alpha, beta)
    rep = wexler_raz_check(
        SeparableWindow(g, {}, group), SeparableWindow(h, {}, group), lat, (3, 5), 1e-8
    )
    exact_rows = sum(1 for r in rep.rows if r.exact_zero)
    print(f"  group={group.variant:6s}  verdict={rep.verdict:8s} "
          f"max residual={rep.max_residual:.3e}  exactly-zero rows={exact_rows}/{len(rep.rows)}")

print("\nThe residual is a float artifact of the real factor only; every row "
      "with a fractional index is zero by exact p-adic arithmetic.")
