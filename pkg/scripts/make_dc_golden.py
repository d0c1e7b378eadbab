"""Regenerate the shared data-consistency golden vectors.

The file golden/dc_golden.npz pins the exact behavior of the
data-consistency blend so an independent implementation (see dhmf/)
can verify bit-level agreement without importing this package.

Run from the repository root:  python scripts/make_dc_golden.py
"""

from pathlib import Path

import numpy as np

from lrhankel import SamplingMask, data_consistency

N, M, CASES = 64, 16, 1000


def main() -> None:
    rng = np.random.default_rng(20240502)
    x_tilde = np.empty((CASES, N), dtype=complex)
    y = np.empty((CASES, M), dtype=complex)
    mask_idx = np.empty((CASES, M), dtype=np.int64)
    lam = np.empty(CASES)
    expected = np.empty((CASES, N), dtype=complex)

    for i in range(CASES):
        x_tilde[i] = rng.normal(size=N) + 1j * rng.normal(size=N)
        y[i] = rng.normal(size=M) + 1j * rng.normal(size=M)
        mask_idx[i] = np.sort(rng.choice(np.arange(1, N + 1), size=M, replace=False))
        lam[i] = 10 ** rng.uniform(-1, 3)
        mask = SamplingMask(N, mask_idx[i], "uniform_random")
        expected[i] = data_consistency(x_tilde[i], y[i], mask, lam[i])

    out = Path(__file__).resolve().parent.parent / "golden" / "dc_golden.npz"
    out.parent.mkdir(exist_ok=True)
    np.savez(out, x_tilde=x_tilde, y=y, mask_idx=mask_idx, lam=lam, expected=expected)
    print(f"wrote {CASES} cases to {out}")


if __name__ == "__main__":
    main()
