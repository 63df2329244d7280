"""External agreement metrics, and why chance correction matters.

All five scores reduce to the four pair-confusion counts (except NMI,
which works on the contingency table): pairs grouped together in both
partitions, split in both, or mixed. RI rewards agreement of any kind,
so it looks flattering under imbalance; ARI recenters it at zero for
random labelings.
"""

import numpy as np

from mvclust import pair_counts, score_all

truth = np.array([0, 0, 0, 0, 1, 1, 1, 1])
good = np.array([1, 1, 1, 1, 0, 0, 0, 0])   # same split, swapped names
off = np.array([0, 0, 0, 1, 1, 1, 1, 1])    # one sample moved

print("relabeled but identical partition:")
print("  ", score_all(truth, good))
print("one sample moved across the boundary:")
print("  ", score_all(truth, off))

counts = pair_counts(truth, off)
print(f"\npair confusion for the second case: together/together={counts.a} "
      f"apart/apart={counts.d} disagreements={counts.b + counts.c} "
      f"of {counts.total} pairs")

rng = np.random.default_rng(0)
labels = rng.integers(0, 2, size=200)
shuffled = rng.integers(0, 2, size=200)
r = score_all(labels, shuffled)
print(f"\nindependent random labelings, n=200: RI {r['ri']:.3f} but "
      f"ARI {r['ari']:+.3f} and NMI {r['nmi']:.3f}")
print("RI sits near 0.5 by construction; the corrected scores stay at zero")

many = rng.integers(0, 20, size=200)
few = (many >= 10).astype(int)
r = score_all(many, few)
print(f"\ncoarse versus fine partition of the same data: RI {r['ri']:.3f} "
      f"ARI {r['ari']:.3f} NMI {r['nmi']:.3f}")
print("metrics disagree on how bad a resolution mismatch is; report several")

sym = score_all(few, many)
assert all(abs(r[k] - sym[k]) < 1e-12 for k in r)
print("\nevery score is symmetric in its two arguments")
