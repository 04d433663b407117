"""Deterministic amplitude amplification from an arbitrary starting state.

Only the overlap of the starting state with the marked set matters; the
phases are the same ones used for plain search at that marked fraction.
"""

import math

import numpy as np

from d2p import solver
from d2p import statevector as sv

rng = np.random.default_rng(2024)
n, marked, overlap = 6, (4, 17, 50), 0.03

v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
mask = np.zeros(2**n, dtype=bool)
mask[list(marked)] = True
v[mask] *= math.sqrt(overlap) / np.linalg.norm(v[mask])
v[~mask] *= math.sqrt(1 - overlap) / np.linalg.norm(v[~mask])
print("initial success probability:", sv.success_probability(v, marked))

sched = solver.solve(overlap)
out = sv.amplify(v, marked, sched)
print(f"after {sched.k} queries:", sv.success_probability(out, marked))

# Relative amplitudes inside the marked set are those of the starting state.
print(np.round(out[list(marked)] / v[list(marked)], 6))
