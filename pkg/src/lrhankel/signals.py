"""Synthetic damped-exponential signals: models, generation, and corruption.

A signal is a sum of J complex exponentials

    x[n] = sum_j A_j exp(i phi_j) exp(-n dt / tau_j) exp(i 2 pi f_j n dt)

sampled at n = 1..N (the time index starts at one).  Signals are plain
1-D complex128 numpy arrays; models are small frozen dataclasses kept in
canonical order (components sorted by frequency ascending).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ExponentialComponent:
    """One damped complex exponential: amplitude, phase, damping, frequency.

    amplitude > 0, phase in [0, 2pi), damping > 0 (time constant in
    samples; +inf means undamped), frequency in [0, 1) cycles/sample.
    """

    amplitude: float
    phase: float
    damping: float
    frequency: float

    def __post_init__(self):
        if not self.amplitude > 0:
            raise ValueError(f"amplitude must be positive, got {self.amplitude}")
        if not 0.0 <= self.phase < TWO_PI:
            raise ValueError(f"phase must be in [0, 2pi), got {self.phase}")
        if not self.damping > 0:
            raise ValueError(f"damping must be positive, got {self.damping}")
        if not 0.0 <= self.frequency < 1.0:
            raise ValueError(f"frequency must be in [0, 1), got {self.frequency}")


@dataclass(frozen=True)
class ExponentialModel:
    """Ordered collection of components plus the sampling interval dt.

    Components are stored sorted by frequency ascending; this canonical
    order makes model comparison and parameter-error scoring well defined.
    """

    components: tuple[ExponentialComponent, ...]
    dt: float = 1.0

    def __post_init__(self):
        if len(self.components) < 1:
            raise ValueError("model needs at least one component")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        ordered = tuple(sorted(self.components, key=lambda c: c.frequency))
        object.__setattr__(self, "components", ordered)

    @classmethod
    def from_arrays(cls, amplitudes, phases, dampings, frequencies, dt: float = 1.0):
        comps = tuple(
            ExponentialComponent(float(a), float(p), float(d), float(f))
            for a, p, d, f in zip(amplitudes, phases, dampings, frequencies, strict=True)
        )
        return cls(comps, dt)

    @property
    def j(self) -> int:
        return len(self.components)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([c.amplitude for c in self.components])

    @property
    def phases(self) -> np.ndarray:
        return np.array([c.phase for c in self.components])

    @property
    def dampings(self) -> np.ndarray:
        return np.array([c.damping for c in self.components])

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([c.frequency for c in self.components])

    def normalized(self) -> "ExponentialModel":
        """Copy with amplitudes rescaled so the strongest component is 1."""
        peak = float(self.amplitudes.max())
        comps = tuple(
            ExponentialComponent(c.amplitude / peak, c.phase, c.damping, c.frequency)
            for c in self.components
        )
        return ExponentialModel(comps, self.dt)


@dataclass(frozen=True)
class GeneratorSpec:
    """Uniform parameter ranges for random models.

    Defaults are the standard 1-D synthetic recipe: J in [1, 10],
    amplitude in [0.05, 1], frequency in [0, 1), damping in [10, 179.2]
    samples, phase in [0, 2pi), N = 255 points.
    """

    j_range: tuple[int, int] = (1, 10)
    amplitude_range: tuple[float, float] = (0.05, 1.0)
    frequency_range: tuple[float, float] = (0.0, 1.0)
    damping_range: tuple[float, float] = (10.0, 179.2)
    phase_range: tuple[float, float] = (0.0, TWO_PI)
    n_points: int = 255

    def __post_init__(self):
        if self.j_range[0] > self.j_range[1] or self.j_range[0] < 1:
            raise ValueError(f"bad j_range {self.j_range}")
        for name in ("amplitude_range", "frequency_range", "damping_range", "phase_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"empty {name} ({lo}, {hi})")
        if not self.amplitude_range[0] > 0:
            raise ValueError("amplitudes must be positive")
        if not (0.0 <= self.frequency_range[0] and self.frequency_range[1] <= 1.0):
            raise ValueError("frequency range must lie in [0, 1)")
        if not self.damping_range[0] > 0:
            raise ValueError("dampings must be positive")
        if not (0.0 <= self.phase_range[0] and self.phase_range[1] <= TWO_PI):
            raise ValueError("phase range must lie in [0, 2pi)")
        if self.n_points < 2:
            raise ValueError(f"need n_points >= 2, got {self.n_points}")


def synthesize(model: ExponentialModel, n_points: int) -> np.ndarray:
    """Evaluate the model at n = 1..n_points, returning a complex128 vector."""
    if n_points < 2:
        raise ValueError(f"need n_points >= 2, got {n_points}")
    n = np.arange(1, n_points + 1) * model.dt
    # poles z_j = exp(-dt/tau_j + i 2 pi f_j dt); x[n] = sum_j c_j z_j^n
    rates = -1.0 / model.dampings + 2j * np.pi * model.frequencies
    coeffs = model.amplitudes * np.exp(1j * model.phases)
    return np.exp(np.outer(n, rates)) @ coeffs


def random_model(spec: GeneratorSpec, seed) -> ExponentialModel:
    """Draw a model with every parameter uniform over its range in `spec`.

    The draw order is fixed (J, then amplitudes, frequencies, dampings,
    phases as arrays) so a seed fully determines the model.
    """
    rng = np.random.default_rng(seed)
    j = int(rng.integers(spec.j_range[0], spec.j_range[1] + 1))
    amps = rng.uniform(*spec.amplitude_range, size=j)
    freqs = rng.uniform(*spec.frequency_range, size=j)
    damps = rng.uniform(*spec.damping_range, size=j)
    phases = rng.uniform(*spec.phase_range, size=j)
    return ExponentialModel.from_arrays(amps, phases, damps, freqs)


def add_noise(x: np.ndarray, sigma: float, seed) -> np.ndarray:
    """Add zero-mean Gaussian noise with std `sigma` independently to the
    real and imaginary part of every sample."""
    if sigma < 0:
        raise ValueError(f"sigma must be nonnegative, got {sigma}")
    x = np.asarray(x, dtype=complex)
    if sigma == 0:
        return x.copy()
    rng = np.random.default_rng(seed)
    return x + sigma * (rng.normal(size=x.shape) + 1j * rng.normal(size=x.shape))


def corrupt_outliers(x: np.ndarray, rate: float, scale_c: float, seed) -> np.ndarray:
    """Add outliers to a uniformly random floor(rate*N)-subset of samples.

    Each corrupted sample receives an additive term whose real part is
    uniform on [-c*mean(Re x), c*mean(Re x)] and whose imaginary part is
    drawn analogously from the imaginary mean.
    """
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"rate must be in [0, 1], got {rate}")
    if not scale_c > 0:
        raise ValueError(f"scale_c must be positive, got {scale_c}")
    x = np.asarray(x, dtype=complex)
    k = int(math.floor(rate * len(x)))
    out = x.copy()
    if k == 0:
        return out
    rng = np.random.default_rng(seed)
    pos = rng.choice(len(x), size=k, replace=False)
    bound_re = scale_c * float(np.mean(x.real))
    bound_im = scale_c * float(np.mean(x.imag))
    out[pos] += rng.uniform(-1.0, 1.0, size=k) * bound_re + 1j * (
        rng.uniform(-1.0, 1.0, size=k) * bound_im
    )
    return out
