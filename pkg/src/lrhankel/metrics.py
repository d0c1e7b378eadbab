"""Quantitative evaluation: reconstruction error, spectra, peak analysis,
singular-value diagnostics, and subspace parameter retrieval.

Spectra follow the plain unnormalized forward DFT, so array bin k holds
normalized frequency k/N and Parseval reads ||F x||^2 = N ||x||^2.  All
peak machinery works on magnitude spectra, which is robust to the unknown
phase processing of displayed spectra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hankel import HankelShape, default_shape, hankelize
from .signals import TWO_PI, ExponentialModel

#: Default matching radius (bins) for associating reconstructed peaks
#: with ideal peaks, and default half-width (bins) of the per-peak
#: correlation window.  Chosen so the broadest tabulated synthetic peak
#: (damping 50 at N = 255) is fully windowed.
D_MAX_DEFAULT = 3.0
WINDOW_W_DEFAULT = 10


def rlne(x_hat: np.ndarray, x: np.ndarray) -> float:
    """Relative l2 reconstruction error ||x - x_hat||_2 / ||x||_2."""
    x_hat = np.asarray(x_hat)
    x = np.asarray(x)
    if x_hat.shape != x.shape:
        raise ValueError(f"length mismatch {x_hat.shape} vs {x.shape}")
    ref = np.linalg.norm(x)
    if ref == 0:
        raise ValueError("reference signal has zero norm")
    return float(np.linalg.norm(x - x_hat) / ref)


def pearson(a: np.ndarray, b: np.ndarray) -> float:
    """Pearson linear correlation of two real vectors."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or len(a) < 2:
        raise ValueError("need two equal-length vectors with at least 2 entries")
    da = a - a.mean()
    db = b - b.mean()
    na = np.linalg.norm(da)
    nb = np.linalg.norm(db)
    if na == 0 or nb == 0:
        raise ValueError("correlation is undefined for a constant input")
    return float(np.dot(da, db) / (na * nb))


def spectrum(x: np.ndarray) -> np.ndarray:
    """Unnormalized forward DFT; bin k corresponds to frequency k/N."""
    x = np.asarray(x)
    if x.ndim != 1 or len(x) < 2:
        raise ValueError("need a vector of length >= 2")
    return np.fft.fft(x)


def hankel_diagnostics(x: np.ndarray, shape: HankelShape | None = None):
    """Singular values (descending) of the lifted signal and their sum.

    Returns (singular_values, nuclear_norm).
    """
    x = np.asarray(x)
    if shape is None:
        shape = default_shape(len(x))
    sv = np.linalg.svd(hankelize(x, shape), compute_uv=False)
    return sv, float(sv.sum())


# ---------------------------------------------------------------------------
# peak analysis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PeakSet:
    """Detected spectral peaks: bin index (0-based), magnitude, and the
    parabolically interpolated frequency estimate."""

    n_bins: int
    bins: np.ndarray
    magnitudes: np.ndarray
    frequencies: np.ndarray

    def __post_init__(self):
        bins = np.asarray(self.bins, dtype=np.int64)
        if len(bins) > 1 and np.any(np.diff(bins) <= 0):
            raise ValueError("peak bins must be unique and sorted")
        object.__setattr__(self, "bins", bins)
        object.__setattr__(self, "magnitudes", np.asarray(self.magnitudes, dtype=float))
        object.__setattr__(self, "frequencies", np.asarray(self.frequencies, dtype=float))

    def __len__(self) -> int:
        return len(self.bins)


@dataclass(frozen=True)
class PeakMatching:
    """Greedy assignment of reconstructed peaks to ideal peaks.

    ``pairs`` holds (truth_index, recon_index, bin_distance); ``missing``
    lists truth peaks with no reconstruction within the matching radius.
    """

    pairs: tuple[tuple[int, int, float], ...]
    missing: tuple[int, ...]


def detect_peaks(s: np.ndarray, floor: float) -> PeakSet:
    """Circular local maxima of the magnitude spectrum above ``floor``,
    with 3-point parabolic interpolation of the peak position."""
    if not floor > 0:
        raise ValueError(f"floor must be positive, got {floor}")
    mag = np.abs(np.asarray(s))
    n = len(mag)
    left = np.roll(mag, 1)
    right = np.roll(mag, -1)
    hits = np.flatnonzero((mag > left) & (mag > right) & (mag > floor))

    freqs = []
    for k in hits:
        alpha, beta, gamma = mag[(k - 1) % n], mag[k], mag[(k + 1) % n]
        denom = alpha - 2.0 * beta + gamma
        delta = 0.5 * (alpha - gamma) / denom if denom != 0 else 0.0
        freqs.append(((k + delta) / n) % 1.0)
    return PeakSet(n, hits, mag[hits], np.array(freqs))


def _circular_bin_distance(b1: int, b2: int, n: int) -> float:
    d = abs(b1 - b2)
    return float(min(d, n - d))


def match_peaks(
    recon: PeakSet, truth: PeakSet, d_max: float = D_MAX_DEFAULT
) -> PeakMatching:
    """Greedily pair each ideal peak with the nearest reconstructed peak
    (circular bin distance), closest pairs first; ideal peaks farther than
    ``d_max`` from every remaining reconstructed peak are missing."""
    if not d_max > 0:
        raise ValueError(f"d_max must be positive, got {d_max}")
    n = truth.n_bins
    candidates = [
        (_circular_bin_distance(int(tb), int(rb), n), ti, ri)
        for ti, tb in enumerate(truth.bins)
        for ri, rb in enumerate(recon.bins)
    ]
    candidates.sort()
    used_t, used_r = set(), set()
    pairs = []
    for dist, ti, ri in candidates:
        if dist > d_max:
            break
        if ti in used_t or ri in used_r:
            continue
        pairs.append((ti, ri, dist))
        used_t.add(ti)
        used_r.add(ri)
    missing = tuple(ti for ti in range(len(truth)) if ti not in used_t)
    return PeakMatching(tuple(pairs), missing)


def peak_correlation(
    recon_spectrum: np.ndarray,
    truth_spectrum: np.ndarray,
    truth_peaks: PeakSet,
    window_w: int = WINDOW_W_DEFAULT,
) -> np.ndarray:
    """Pearson correlation of the two magnitude spectra over a window of
    +-window_w bins around each ideal peak (clamped at the edges)."""
    if window_w < 1:
        raise ValueError(f"window_w must be >= 1, got {window_w}")
    rmag = np.abs(np.asarray(recon_spectrum))
    tmag = np.abs(np.asarray(truth_spectrum))
    if rmag.shape != tmag.shape:
        raise ValueError("spectra must have equal length")
    n = len(tmag)
    out = []
    for b in truth_peaks.bins:
        lo = max(0, int(b) - window_w)
        hi = min(n, int(b) + window_w + 1)
        out.append(pearson(rmag[lo:hi], tmag[lo:hi]))
    return np.array(out)


# ---------------------------------------------------------------------------
# parameter retrieval and scoring
# ---------------------------------------------------------------------------


def esprit(
    x: np.ndarray, j: int, shape: HankelShape | None = None, dt: float = 1.0
) -> ExponentialModel:
    """Recover a j-component exponential model from a signal by the
    rotational-invariance subspace method.

    Lifts the signal to a Hankel matrix, takes the rank-j left singular
    subspace, solves the shift-invariance least-squares problem for the
    signal poles, and fits complex amplitudes by Vandermonde least squares
    (the time index starts at n = 1, so the pole powers start at 1 too).
    Poles on or outside the unit circle are reported with infinite
    damping rather than rejected.
    """
    x = np.asarray(x, dtype=complex)
    if not np.all(np.isfinite(x)):
        raise ValueError("signal must be finite")
    if shape is None:
        shape = default_shape(len(x))
    if j < 1 or j > min(shape.n1, shape.n2) - 1:
        raise ValueError(f"model order {j} infeasible for shape {shape.n1}x{shape.n2}")

    U, sv, _ = np.linalg.svd(hankelize(x, shape), full_matrices=False)
    if sv[0] == 0 or sv[j - 1] / sv[0] < 1e-12:
        raise ValueError(f"signal subspace is rank deficient for model order {j}")
    Us = U[:, :j]
    psi, *_ = np.linalg.lstsq(Us[:-1], Us[1:], rcond=None)
    z = np.linalg.eigvals(psi)

    freqs = np.mod(np.angle(z) / TWO_PI, 1.0)
    freqs[freqs >= 1.0] = 0.0
    mod_z = np.abs(z)
    dampings = np.where(mod_z < 1.0, -dt / np.log(np.maximum(mod_z, 1e-300)), np.inf)
    # clamp exploding poles to the unit circle before the amplitude fit
    z_fit = np.where(mod_z > 1.0, z / mod_z, z)

    powers = np.arange(1, len(x) + 1)
    V = z_fit[None, :] ** powers[:, None]
    c, *_ = np.linalg.lstsq(V, x, rcond=None)
    amplitudes = np.abs(c)
    phases = np.mod(np.angle(c), TWO_PI)
    phases[phases >= TWO_PI] = 0.0

    if np.any(amplitudes <= 0):
        raise ValueError("degenerate amplitude fit (zero coefficient)")
    return ExponentialModel.from_arrays(amplitudes, phases, dampings, freqs, dt)


@dataclass(frozen=True)
class ParameterErrors:
    """Per-component absolute errors between an estimated and a true model,
    aligned to the true model's (frequency-ascending) component order.
    Phase differences are wrapped to (-pi, pi] and frequency differences
    circularly to [-0.5, 0.5) before taking magnitudes."""

    amplitude: np.ndarray
    damping: np.ndarray
    phase: np.ndarray
    frequency: np.ndarray

    def as_array(self) -> np.ndarray:
        """Stack as columns (amplitude, damping, phase, frequency)."""
        return np.column_stack([self.amplitude, self.damping, self.phase, self.frequency])


def _wrap_phase(d: np.ndarray) -> np.ndarray:
    return np.abs((d + math.pi) % TWO_PI - math.pi)


def _wrap_freq(d: np.ndarray) -> np.ndarray:
    return np.abs((d + 0.5) % 1.0 - 0.5)


def parameter_errors(est: ExponentialModel, truth: ExponentialModel) -> ParameterErrors:
    """Match estimated components to true ones (strongest estimate first,
    nearest circular frequency) and report absolute parameter errors."""
    if est.j != truth.j:
        raise ValueError(f"component count mismatch: {est.j} vs {truth.j}")
    j = truth.j
    tf = truth.frequencies
    order = np.argsort(-est.amplitudes)
    assignment = np.full(j, -1)
    taken = np.zeros(j, dtype=bool)
    for ei in order:
        d = _wrap_freq(est.frequencies[ei] - tf)
        d[taken] = np.inf
        ti = int(np.argmin(d))
        assignment[ti] = ei
        taken[ti] = True

    ea = est.amplitudes[assignment]
    ed = est.dampings[assignment]
    ep = est.phases[assignment]
    ef = est.frequencies[assignment]
    return ParameterErrors(
        amplitude=np.abs(ea - truth.amplitudes),
        damping=np.abs(ed - truth.dampings),
        phase=_wrap_phase(ep - truth.phases),
        frequency=_wrap_freq(ef - truth.frequencies),
    )
