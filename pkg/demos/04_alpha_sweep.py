"""How many queries are needed when the fixed oracle phase is not pi.

Prints the plateaus of the minimal query count over oracle phases in (0, 2 pi)
at lambda = 1/16 and writes the table to alpha_sweep.csv.  Takes about
20 seconds on one core; pass a worker count as the first argument to split it.
"""

import sys
from itertools import groupby

from d2p import experiments as ex

workers = int(sys.argv[1]) if len(sys.argv) > 1 else 1
grid = ex.default_alpha_grid(721)
recs = ex.sweep_alpha(1 / 16, grid, workers=workers)

for k, group in groupby(recs, key=lambda r: r.k):
    group = list(group)
    label = "no schedule up to the cap" if k is None else f"k = {k}"
    print(f"alpha {group[0].alpha:.4f} .. {group[-1].alpha:.4f}: {label}")

ex.export(recs, "alpha_sweep.csv")
print("wrote alpha_sweep.csv")
