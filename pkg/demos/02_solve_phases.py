"""Find the two diffusion phases that make the search succeed with certainty.

The oracle stays fixed (phase pi).  Alternating two diffusion phases theta1,
theta2 for k_opt queries lands exactly on the marked state.
"""

import numpy as np

from d2p import solver

print(f"{'lambda':>12} {'k_opt':>5} {'k_std':>5} {'theta1':>10} {'theta2':>10} "
      f"{'theta0':>8} {'p_std':>9} {'p_two':>14}")
for lam in np.geomspace(2.0**-14, 0.25, 12):
    plan = solver.query_plan(lam)
    s = solver.solve(lam)
    print(
        f"{lam:12.6g} {plan.k_opt:5d} {plan.k_prime_opt:5d} {s.theta1:10.6f} {s.theta2:10.6f} "
        f"{plan.theta0:8.5f} {solver.std_success(lam):9.6f} {s.success:14.12f}"
    )

# For small lambda the phases approach (theta0, -theta0), where theta0 is the
# phase of the exact search that may also tune the oracle.
#
# The closed-form conditions for even and odd query counts vanish at every
# solution the numerical solver returns:
scheds = [solver.solve(lam) for lam in np.geomspace(2.0**-14, 0.25, 50)]
print("closed-form discrepancies:", solver.printed_equation_report(scheds))

# More queries than k_opt also work:
s = solver.solve(1 / 16, 5)
print("lambda=1/16 with k=5:", round(s.theta1, 6), round(s.theta2, 6), s.success)
