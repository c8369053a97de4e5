"""
Random lattices against the density bound
=========================================

Sparse random generators are discretized onto Z_64^4 and tested with the
catalog of identifiers.  No identifiable record should have density above
sqrt(2), up to a 5% discretization slack.
"""

import collections
import sys

from opident import experiments as ex
from opident.lattice import SQRT2

samples = int(sys.argv[1]) if len(sys.argv) > 1 else 200
records = ex.run_density_sweep(samples, 64, seed=7)

ident = [r for r in records if r.identifiable]
print(f"{len(records)} records, {len(ident)} identifiable, {sum(r.D2 > SQRT2 for r in records)} with D2 > sqrt(2)")
print("largest identifiable D2:", max((r.D2 for r in ident), default=None))
print("violations:", len(ex.density_violations(records)))
print("winning identifiers:", collections.Counter(r.identifier for r in ident).most_common(4))

# histogram of D2 split by outcome
bins = [0, 0.25, 0.5, 1, SQRT2, 2, 4, float("inf")]
for lo, hi in zip(bins, bins[1:]):
    inside = [r for r in records if lo <= r.D2 < hi]
    print(f"  D2 in [{lo:.2f}, {hi:.2f}): {len(inside):3d} total, {sum(r.identifiable for r in inside):3d} identifiable")
