"""Undersampling masks and the measurement operator.

A mask is a sorted set of 1-based indices Omega within {1..N}; applying it
keeps x at those positions.  Three schedules are provided: the sinusoidal
Poisson-gap scheme (denser sampling at early times, where a decaying signal
carries most of its energy), uniform random, and plain truncation.  All
schedules are deterministic per seed and always include index 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PATTERNS = ("poisson_gap", "uniform_random", "truncation")


@dataclass(frozen=True)
class SamplingMask:
    """Sorted unique 1-based sample positions out of a length-n grid."""

    n: int
    indices: np.ndarray
    pattern: str

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        if idx.ndim != 1:
            raise ValueError("indices must be a vector")
        if len(idx) > 0:
            if idx[0] < 1 or idx[-1] > self.n or np.any(np.diff(idx) <= 0):
                raise ValueError("indices must be strictly increasing within [1, n]")
        if len(idx) > self.n:
            raise ValueError("more indices than grid points")
        object.__setattr__(self, "indices", idx)

    @property
    def m(self) -> int:
        return len(self.indices)

    @property
    def zero_based(self) -> np.ndarray:
        return self.indices - 1


@dataclass(frozen=True)
class MaskSpec:
    n: int
    rate: float
    pattern: str = "poisson_gap"
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.rate <= 1.0:
            raise ValueError(f"rate must be in (0, 1], got {self.rate}")
        if self.pattern not in PATTERNS:
            raise ValueError(f"unknown pattern {self.pattern!r}, expected one of {PATTERNS}")
        if self.n < 1:
            raise ValueError(f"need n >= 1, got {self.n}")


def _target_m(spec: MaskSpec) -> int:
    m = int(math.floor(spec.rate * spec.n + 0.5))  # round, ties up
    if m < 1:
        raise ValueError(f"rate {spec.rate} with n {spec.n} yields no samples")
    return m


def _poisson_draw(rng: np.random.Generator, lam: float) -> int:
    """Inverse-CDF Poisson draw from one uniform; monotone in lam for a
    fixed uniform, which makes the gap schedule monotone under bisection."""
    u = rng.random()
    p = math.exp(-lam)
    cdf = p
    k = 0
    while u > cdf and k < 100000:
        k += 1
        p *= lam / k
        cdf += p
    return k


def poisson_gap_mask(spec: MaskSpec) -> SamplingMask:
    """Gap schedule with Poisson-distributed gaps whose mean follows
    lam * sin(pi * position / (2n)), bisecting lam until exactly M points
    fit in [1, n].

    The sine weight rises with position, so gaps are short early and long
    late.  Bisection reuses the same uniform stream per candidate lam; if
    the integer-valued point count jumps over M, the stream is re-derived
    from a sub-seed and bisection restarts.
    """
    m = _target_m(spec)
    n = spec.n
    if m == n:
        return SamplingMask(n, np.arange(1, n + 1), "poisson_gap")
    if m == 1:
        return SamplingMask(n, np.array([1]), "poisson_gap")

    def schedule(lam: float, subseed: int) -> list[int]:
        rng = np.random.default_rng([spec.seed, subseed])
        idx = []
        pos = 1
        while pos <= n:
            idx.append(pos)
            rate = lam * math.sin(math.pi * pos / (2 * n)) + 1e-3
            pos += 1 + _poisson_draw(rng, rate)
        return idx

    for subseed in range(64):
        lo, hi = 0.0, 4.0 * n / m
        while len(schedule(hi, subseed)) > m:
            hi *= 2.0
        hit = None
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            count = len(schedule(mid, subseed))
            if count == m:
                hit = mid
                break
            if count > m:
                lo = mid
            else:
                hi = mid
        if hit is not None:
            return SamplingMask(n, np.array(schedule(hit, subseed)), "poisson_gap")
    raise RuntimeError(f"poisson gap schedule could not hit M={m} for n={n}")


def uniform_mask(spec: MaskSpec) -> SamplingMask:
    """M positions drawn uniformly without replacement; index 1 kept."""
    m = _target_m(spec)
    if m == spec.n:
        return SamplingMask(spec.n, np.arange(1, spec.n + 1), "uniform_random")
    rng = np.random.default_rng([spec.seed, 0])
    rest = rng.choice(np.arange(2, spec.n + 1), size=m - 1, replace=False)
    return SamplingMask(spec.n, np.sort(np.concatenate([[1], rest])), "uniform_random")


def truncation_mask(spec: MaskSpec) -> SamplingMask:
    """The first M positions; the seed is ignored (no randomness)."""
    m = _target_m(spec)
    return SamplingMask(spec.n, np.arange(1, m + 1), "truncation")


_BUILDERS = {
    "poisson_gap": poisson_gap_mask,
    "uniform_random": uniform_mask,
    "truncation": truncation_mask,
}


def make_mask(spec: MaskSpec) -> SamplingMask:
    """Build the mask named by spec.pattern."""
    return _BUILDERS[spec.pattern](spec)


def undersample(x: np.ndarray, mask: SamplingMask) -> np.ndarray:
    """Keep x at the mask positions (y = x restricted to Omega)."""
    x = np.asarray(x)
    if len(x) != mask.n:
        raise ValueError(f"mask is for length {mask.n}, signal has {len(x)}")
    return x[mask.zero_based]


def zero_fill(y: np.ndarray, mask: SamplingMask) -> np.ndarray:
    """Embed measurements back onto the full grid with zeros elsewhere."""
    y = np.asarray(y)
    if len(y) != mask.m:
        raise ValueError(f"mask has {mask.m} positions, measurements have {len(y)}")
    out = np.zeros(mask.n, dtype=complex)
    out[mask.zero_based] = y
    return out
