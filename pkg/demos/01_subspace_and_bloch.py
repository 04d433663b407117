"""Walk through the two-dimensional picture of Grover search.

Everything lives in the plane spanned by |R> (unmarked, north pole) and |T>
(marked, south pole).  The standard iterate turns the state by a fixed angle
about the y axis, so after an integer number of steps it usually misses the
south pole by a little.
"""

import math

from d2p import solver
from d2p import subspace as ss

lam = 1 / 16
psi0 = ss.initial_state(lam)
print("initial amplitudes (a_R, a_T):", psi0.a_R.real, psi0.a_T.real)
print("initial Bloch vector:", ss.bloch_coords(psi0))

# Standard Grover: oracle and diffusion phases both pi.  Each step moves the
# polar angle by 2*theta, with theta = 2 asin(sqrt(lam)).
k = solver.k_prime_opt(lam)
for i, p in enumerate(ss.trajectory(lam, math.pi, math.pi, math.pi, k)):
    polar = math.degrees(math.acos(max(-1.0, min(1.0, p.z))))
    print(f"step {i}: z = {p.z:+.6f}  y = {p.y:+.1e}  polar angle {polar:7.3f} deg")

print(f"standard success after {k} steps: {solver.std_success(lam):.10f}")

# Two consecutive iterates combine into one SU(2) rotation; its angle and
# axis come from a closed form, and powers of it are cheap.
d = ss.pair_iterate_decomposition(math.pi, math.pi, lam)
print(f"pair rotation: phi = {d.phi:.6f}, axis = {d.axis.round(6)}")
