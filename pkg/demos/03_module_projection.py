"""Tour: the l1 Heisenberg module and the projection criterion.

The lattice inner products A<f, g>(lam) = <f, pi(lam) g> form a twisted
convolution algebra.  For the canonical *tight* window gamma at density
alpha*beta < 1, the scaled sequence A<gamma, gamma> is a self-adjoint
idempotent ("the module projection"); at the critical density the frame, and
with it the projection, disappears.

Run:  python3 demos/03_module_projection.py
"""

from adelic_gabor import Box, Gaussian, GroupSelector, projection_check

ADELE = GroupSelector.adele()

print("Box window at the integer lattice (an orthonormal basis):")
rep = projection_check(Box(1.0), 1.0, 1.0, ADELE, trunc=(3, 4), tol=1e-10)
print(f"  verdict={rep.verdict}  idempotency={rep.idempotency_residual:.3e} "
      f"self-adjointness={rep.self_adjointness_residual:.3e}  tail={rep.tail_bound:.3e}\n")

print("Tight Gaussian at density 1/2 (alpha = beta = 2^-1/2):")
rep = projection_check(Gaussian(), 2**-0.5, 2**-0.5, ADELE, trunc=(3, 5), tol=1e-6)
print(f"  verdict={rep.verdict}  idempotency={rep.idempotency_residual:.3e} "
      f"self-adjointness={rep.self_adjointness_residual:.3e}  tail={rep.tail_bound:.3e}\n")

print("Gaussian at the critical density 1:")
rep = projection_check(Gaussian(), 1.0, 1.0, ADELE, trunc=(3, 4), tol=1e-6)
print(f"  verdict={rep.verdict}  ({rep.frame_verdict})")
