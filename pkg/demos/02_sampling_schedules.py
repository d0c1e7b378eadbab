"""Compare the three undersampling schedules.

Run:  python demos/02_sampling_schedules.py
"""

import numpy as np

from lrhankel import MaskSpec, make_mask

N, RATE = 255, 0.25

for pattern in ("poisson_gap", "uniform_random", "truncation"):
    mask = make_mask(MaskSpec(N, RATE, pattern, seed=1))
    gaps = np.diff(mask.indices)
    print(f"{pattern:15s} M={mask.m:3d}  first 12 indices: {mask.indices[:12]}")
    print(f"{'':15s} mean gap {gaps.mean():.2f}, max gap {gaps.max()}")

# Poisson-gap sampling is denser at early times, where a decaying signal
# carries most of its energy.
early, late = [], []
for seed in range(200):
    idx = make_mask(MaskSpec(N, RATE, "poisson_gap", seed)).indices
    gaps = np.diff(idx)
    starts = idx[:-1]
    early.extend(gaps[starts <= N // 4].tolist())
    late.extend(gaps[starts >= 3 * N // 4].tolist())
print(f"\npoisson gap: mean gap in first quarter {np.mean(early):.2f}, "
      f"in last quarter {np.mean(late):.2f}")
