"""Hankel lift of a vector, its averaging inverse, and anti-diagonal weights.

The lift arranges a length-N vector into an N1 x N2 matrix that is constant
along anti-diagonals (N1 + N2 = N + 1).  For a noiseless sum of J damped
complex exponentials the lifted matrix has rank exactly J, which is what
every solver in this package exploits.  The inverse maps an arbitrary
matrix back to a vector by averaging each anti-diagonal; on exact Hankel
matrices it inverts the lift, on general matrices it is the vectorized
orthogonal projection onto the Hankel subspace.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import hankel as _hankel


@dataclass(frozen=True)
class HankelShape:
    """Row/column split of the Hankel lift: n1 + n2 = N + 1."""

    n1: int
    n2: int

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError(f"Hankel shape must be positive, got {self.n1}x{self.n2}")

    @property
    def n(self) -> int:
        """Length of the vectors this shape lifts."""
        return self.n1 + self.n2 - 1


def default_shape(n: int) -> HankelShape:
    """Near-square split for a length-n vector (n = 255 gives 128 x 128).

    A near-square matrix maximizes the feasible rank min(n1, n2).
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    n1 = n // 2 + 1
    return HankelShape(n1, n + 1 - n1)


def hankelize(x: np.ndarray, shape: HankelShape | None = None) -> np.ndarray:
    """Lift a length-N vector to the (n1 x n2) Hankel matrix X[i, j] = x[i+j].

    Raises ValueError if the shape does not satisfy n1 + n2 = N + 1.
    """
    x = np.asarray(x)
    if x.ndim != 1:
        raise ValueError(f"expected a vector, got shape {x.shape}")
    if shape is None:
        shape = default_shape(len(x))
    if shape.n != len(x):
        raise ValueError(
            f"shape {shape.n1}x{shape.n2} needs a vector of length {shape.n}, got {len(x)}"
        )
    return _hankel(x[: shape.n1], x[shape.n1 - 1 :])


def antidiag_counts(shape: HankelShape) -> np.ndarray:
    """Number of matrix entries on each of the N anti-diagonals.

    Equals min(g, n1, n2, N + 1 - g) for the g-th anti-diagonal (1-based).
    """
    g = np.arange(1, shape.n + 1)
    return np.minimum.reduce(
        [g, np.full(shape.n, shape.n1), np.full(shape.n, shape.n2), shape.n + 1 - g]
    ).astype(float)


@lru_cache(maxsize=32)
def _flat_antidiag_index(n1: int, n2: int):
    idx = np.add.outer(np.arange(n1), np.arange(n2)).ravel()
    counts = np.bincount(idx, minlength=n1 + n2 - 1).astype(float)
    return idx, counts


def dehankelize(X: np.ndarray) -> np.ndarray:
    """Map any matrix back to a vector by anti-diagonal averaging.

    Inverts :func:`hankelize` exactly on Hankel input; on general input it
    returns the vector whose lift is the nearest (least-squares) Hankel
    matrix, which is what the solver x-updates rely on.
    """
    X = np.asarray(X)
    if X.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {X.shape}")
    n1, n2 = X.shape
    idx, counts = _flat_antidiag_index(n1, n2)
    flat = X.ravel()
    if np.iscomplexobj(X):
        sums = np.bincount(idx, weights=flat.real, minlength=n1 + n2 - 1) + 1j * np.bincount(
            idx, weights=flat.imag, minlength=n1 + n2 - 1
        )
    else:
        sums = np.bincount(idx, weights=flat, minlength=n1 + n2 - 1)
    return sums / counts
