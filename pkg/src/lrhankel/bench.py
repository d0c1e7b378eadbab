"""Experiment orchestration: Monte-Carlo error grids, single-case reports,
dataset generation, and cross-method rank scoring.

Every trial derives its random streams from (base seed, J, rate, trial
index), so results are independent of execution order and identical under
trial-level parallelism.  Set the environment variable LRHANKEL_WORKERS to
run trials of a grid cell concurrently (default 1).
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .datafiles import DatasetManifest, SignalRecord, generator_digest, write_signal_file
from .metrics import (
    D_MAX_DEFAULT,
    WINDOW_W_DEFAULT,
    detect_peaks,
    hankel_diagnostics,
    match_peaks,
    peak_correlation,
    rlne,
    spectrum,
)
from .sampling import MaskSpec, SamplingMask, make_mask, undersample
from .signals import ExponentialModel, GeneratorSpec, add_noise, random_model, synthesize
from .solvers import (
    CsConfig,
    ReconResult,
    SolverConfig,
    cs_ist_reconstruct,
    lrhm_reconstruct,
    lrhmf_reconstruct,
    zero_fill_reconstruct,
)

METHODS = ("lrhm", "lrhmf", "cs", "zero_fill")

#: Mean-RLNE levels used to classify grid cells as solvable (Fig.-5-style
#: red/white boundaries).
RLNE_THRESHOLDS = (0.1, 0.2)


def _method_fn(name: str):
    try:
        return {
            "lrhm": lrhm_reconstruct,
            "lrhmf": lrhmf_reconstruct,
            "cs": cs_ist_reconstruct,
            "zero_fill": zero_fill_reconstruct,
        }[name]
    except KeyError:
        raise ValueError(f"unknown method {name!r}, expected one of {METHODS}") from None


def default_config(method: str, noise_sigma: float = 0.0):
    if method == "lrhm":
        return SolverConfig.for_lrhm()
    if method == "lrhmf":
        return SolverConfig()
    if method == "cs":
        return CsConfig(noise_sigma=noise_sigma)
    return None


@dataclass(frozen=True)
class ExperimentSpec:
    """A Monte-Carlo grid: methods x J values x sampling rates x trials.

    Per trial a fresh model, mask, and noise realization are drawn; all
    methods see the same draw.  ``normalize_amplitudes`` rescales each drawn
    model so its strongest component has amplitude 1, which fixes the
    noise-to-signal ratio the error tables assume.
    """

    methods: tuple = ("lrhmf",)
    j_values: tuple = (5,)
    rates: tuple = (0.25,)
    trials: int = 50
    noise_sigma: float = 0.05
    base_seed: int = 0
    n_points: int = 255
    pattern: str = "poisson_gap"
    generator: GeneratorSpec | None = None
    solver_overrides: dict = field(default_factory=dict)
    normalize_amplitudes: bool = True

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for r in self.rates:
            if not 0.0 < r <= 1.0:
                raise ValueError(f"rate {r} outside (0, 1]")
        for m in self.methods:
            _method_fn(m)

    def gen_spec(self, j: int) -> GeneratorSpec:
        base = self.generator if self.generator is not None else GeneratorSpec()
        return GeneratorSpec(
            j_range=(j, j),
            amplitude_range=base.amplitude_range,
            frequency_range=base.frequency_range,
            damping_range=base.damping_range,
            phase_range=base.phase_range,
            n_points=self.n_points,
        )


def trial_seeds(base_seed: int, j: int, rate: float, trial: int):
    """Deterministic (model, mask, noise) integer seeds for one trial."""
    rate_key = int(round(rate * 10**6))
    ss = np.random.SeedSequence([int(base_seed), int(j), rate_key, int(trial)])
    model_ss, mask_ss, noise_ss = ss.spawn(3)
    return (
        model_ss,
        int(mask_ss.generate_state(1)[0]),
        int(noise_ss.generate_state(1)[0]),
    )


def draw_trial(spec: ExperimentSpec, j: int, rate: float, trial: int):
    """Draw one (model, clean signal, mask, measurements) tuple."""
    model_seed, mask_seed, noise_seed = trial_seeds(spec.base_seed, j, rate, trial)
    model = random_model(spec.gen_spec(j), model_seed)
    if spec.normalize_amplitudes:
        model = model.normalized()
    x = synthesize(model, spec.n_points)
    mask = make_mask(MaskSpec(spec.n_points, rate, spec.pattern, mask_seed))
    y = undersample(add_noise(x, spec.noise_sigma, noise_seed), mask)
    return model, x, mask, y


def reconstruct_with(method: str, y, mask, cfg=None, truth=None, noise_sigma=0.0) -> ReconResult:
    """Run one named method with its default or overridden config."""
    fn = _method_fn(method)
    if cfg is None:
        cfg = default_config(method, noise_sigma)
    if method == "zero_fill":
        return fn(y, mask, truth=truth)
    return fn(y, mask, cfg, truth=truth)


@dataclass
class GridCell:
    method: str
    j: int
    rate: float
    trials: int
    mean_rlne: float
    std_rlne: float
    failed: int


@dataclass
class GridResult:
    """All cells of a grid run plus per-trial errors and soft-check notes."""

    spec: ExperimentSpec
    cells: list
    per_trial: dict
    failures: list
    warnings: list

    def cell(self, method: str, j: int, rate: float) -> GridCell:
        for c in self.cells:
            if c.method == method and c.j == j and np.isclose(c.rate, rate):
                return c
        raise KeyError((method, j, rate))

    def to_csv(self) -> str:
        lines = ["method,J,rate,trials,mean_rlne,std_rlne"]
        for c in self.cells:
            lines.append(
                f"{c.method},{c.j},{c.rate:.10g},{c.trials},"
                f"{c.mean_rlne:.10g},{c.std_rlne:.10g}"
            )
        return "\n".join(lines) + "\n"

    def threshold_report(self) -> dict:
        """Largest solvable J per (method, rate) at each RLNE threshold."""
        out = {}
        for method in self.spec.methods:
            out[method] = {}
            for rate in self.spec.rates:
                entry = {}
                for thr in RLNE_THRESHOLDS:
                    ok = [c.j for c in self.cells
                          if c.method == method and np.isclose(c.rate, rate)
                          and c.mean_rlne < thr]
                    entry[f"max_j_below_{thr:g}"] = max(ok) if ok else None
                out[method][f"{rate:.10g}"] = entry
        return out

    def to_json(self) -> str:
        payload = {
            "spec": {
                "methods": list(self.spec.methods),
                "j_values": [int(j) for j in self.spec.j_values],
                "rates": [float(r) for r in self.spec.rates],
                "trials": self.spec.trials,
                "noise_sigma": self.spec.noise_sigma,
                "base_seed": self.spec.base_seed,
                "n_points": self.spec.n_points,
                "pattern": self.spec.pattern,
                "normalize_amplitudes": self.spec.normalize_amplitudes,
            },
            "cells": [
                {
                    "method": c.method,
                    "j": c.j,
                    "rate": c.rate,
                    "trials": c.trials,
                    "mean_rlne": c.mean_rlne,
                    "std_rlne": c.std_rlne,
                    "failed": c.failed,
                    **{f"below_{t:g}": bool(c.mean_rlne < t) for t in RLNE_THRESHOLDS},
                }
                for c in self.cells
            ],
            "thresholds": self.threshold_report(),
            "per_trial": {
                f"{m}/{j}/{r:.10g}": [float(v) for v in vals]
                for (m, j, r), vals in self.per_trial.items()
            },
            "failures": self.failures,
            "warnings": self.warnings,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("LRHANKEL_WORKERS", "1")))
    except ValueError:
        return 1


def run_grid(spec: ExperimentSpec) -> GridResult:
    """Mean/std RLNE per (method, J, rate) over `spec.trials` fresh draws.

    Solver exceptions are recorded per trial, not fatal; a cell with no
    successful trial raises.  Output is bit-reproducible for a fixed spec,
    with or without worker threads.
    """
    per_trial: dict = {}
    failures: list = []

    def one_trial(j, rate, t):
        model, x, mask, y = draw_trial(spec, j, rate, t)
        out = {}
        for method in spec.methods:
            cfg = spec.solver_overrides.get(method)
            try:
                res = reconstruct_with(method, y, mask, cfg, noise_sigma=spec.noise_sigma)
                out[method] = rlne(res.x_hat, x)
            except Exception as exc:  # recorded, not fatal
                out[method] = (exc.__class__.__name__, str(exc))
        return out

    workers = _workers()
    for j in spec.j_values:
        for rate in spec.rates:
            if workers > 1:
                with ThreadPoolExecutor(max_workers=workers) as pool:
                    trial_outs = list(pool.map(lambda t: one_trial(j, rate, t),
                                               range(spec.trials)))
            else:
                trial_outs = [one_trial(j, rate, t) for t in range(spec.trials)]
            for method in spec.methods:
                vals, failed = [], 0
                for t, out in enumerate(trial_outs):
                    v = out[method]
                    if isinstance(v, tuple):
                        failed += 1
                        failures.append(
                            {"method": method, "j": int(j), "rate": float(rate),
                             "trial": t, "error": f"{v[0]}: {v[1]}"}
                        )
                    else:
                        vals.append(v)
                if not vals:
                    raise RuntimeError(f"every trial failed for {method} J={j} rate={rate}")
                per_trial[(method, int(j), float(rate))] = np.array(vals)

    cells = []
    for method in spec.methods:
        for j in spec.j_values:
            for rate in spec.rates:
                vals = per_trial[(method, int(j), float(rate))]
                cells.append(
                    GridCell(method, int(j), float(rate), len(vals),
                             float(vals.mean()), float(vals.std()),
                             spec.trials - len(vals))
                )

    warnings = _soft_monotonicity(spec, cells)
    return GridResult(spec, cells, per_trial, failures, warnings)


def _soft_monotonicity(spec: ExperimentSpec, cells, slack: float = 0.01):
    """Sanity notes (never fatal): with enough trials, mean RLNE should not
    increase with the sampling rate at fixed J, nor decrease with J at a
    fixed rate."""
    notes = []
    if spec.trials < 50:
        return notes
    by_key = {(c.method, c.j, c.rate): c.mean_rlne for c in cells}
    for method in spec.methods:
        for j in spec.j_values:
            rates = sorted(spec.rates)
            for lo, hi in zip(rates, rates[1:]):
                if by_key[(method, j, hi)] > by_key[(method, j, lo)] + slack:
                    notes.append(
                        f"{method} J={j}: mean RLNE rose from rate {lo:g} to {hi:g}"
                    )
        for rate in spec.rates:
            js = sorted(spec.j_values)
            for lo, hi in zip(js, js[1:]):
                if by_key[(method, hi, rate)] < by_key[(method, lo, rate)] - slack:
                    notes.append(
                        f"{method} rate={rate:g}: mean RLNE fell from J={lo} to J={hi}"
                    )
    return notes


def run_case(
    x: np.ndarray,
    mask: SamplingMask,
    method: str,
    cfg=None,
    noise_sigma: float = 0.0,
    noise_seed: int = 0,
    truth_model: ExponentialModel | None = None,
    peak_floor: float | None = None,
) -> tuple:
    """One reconstruction with a full diagnostic report.

    Returns (ReconResult, report dict).  The report carries the error,
    iteration history, Hankel singular values, and peak detection/matching
    against the clean signal's spectrum.
    """
    y = undersample(add_noise(x, noise_sigma, noise_seed), mask)
    if cfg is None and method in ("lrhm", "lrhmf"):
        base = default_config(method)
        cfg = SolverConfig(
            lam=base.lam, beta=base.beta, step_tau=base.step_tau, rank=base.rank,
            max_iters=base.max_iters, tol=base.tol, feas_tol=base.feas_tol,
            track_nuclear=True,
        )
    res = reconstruct_with(method, y, mask, cfg, truth=x, noise_sigma=noise_sigma)

    s_truth = spectrum(x)
    s_recon = spectrum(res.x_hat)
    if peak_floor is None:
        peak_floor = max(
            0.05 * float(np.max(np.abs(s_truth))),
            3.0 * noise_sigma * np.sqrt(len(x)),
        )
    truth_peaks = detect_peaks(s_truth, peak_floor)
    recon_peaks = detect_peaks(s_recon, peak_floor)
    matching = match_peaks(recon_peaks, truth_peaks, D_MAX_DEFAULT)
    correlations = (
        peak_correlation(s_recon, s_truth, truth_peaks, WINDOW_W_DEFAULT)
        if len(truth_peaks)
        else np.array([])
    )
    sv, nuc = hankel_diagnostics(res.x_hat)

    report = {
        "method": method,
        "rlne": rlne(res.x_hat, x),
        "iterations": res.iterations,
        "converged": res.converged,
        "history": {k: [float(v) for v in arr] for k, arr in res.history.items()},
        "peak_floor": float(peak_floor),
        "truth_peaks": [int(b) for b in truth_peaks.bins],
        "recon_peaks": [int(b) for b in recon_peaks.bins],
        "matched_pairs": [
            {"truth": int(ti), "recon": int(ri), "distance": float(d)}
            for ti, ri, d in matching.pairs
        ],
        "missing_peaks": [int(i) for i in matching.missing],
        "peak_correlations": [float(c) for c in correlations],
        "hankel_singular_values": [float(v) for v in sv],
        "hankel_nuclear_norm": nuc,
    }
    if truth_model is not None:
        report["truth_model"] = {
            "amplitudes": truth_model.amplitudes.tolist(),
            "phases": truth_model.phases.tolist(),
            "dampings": truth_model.dampings.tolist(),
            "frequencies": truth_model.frequencies.tolist(),
        }
    return res, report


def make_dataset(
    gen: GeneratorSpec,
    rate: float,
    pattern: str,
    noise_sigma: float,
    count: int,
    out_stem,
    split: float = 0.9,
    base_seed: int = 0,
    normalize_amplitudes: bool = True,
) -> DatasetManifest:
    """Generate `count` (y, mask, x) records and write train/validation
    files plus a manifest recording every seed.

    Files: <stem>_train.bin, <stem>_val.bin, <stem>_manifest.json.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if not 0.0 < split <= 1.0:
        raise ValueError(f"split must be in (0, 1], got {split}")

    records, seeds = [], []
    for q in range(count):
        ss = np.random.SeedSequence([int(base_seed), q])
        model_ss, mask_ss, noise_ss = ss.spawn(3)
        mask_seed = int(mask_ss.generate_state(1)[0])
        noise_seed = int(noise_ss.generate_state(1)[0])
        model = random_model(gen, model_ss)
        if normalize_amplitudes:
            model = model.normalized()
        x = synthesize(model, gen.n_points)
        mask = make_mask(MaskSpec(gen.n_points, rate, pattern, mask_seed))
        y = undersample(add_noise(x, noise_sigma, noise_seed), mask)
        records.append(SignalRecord(x, y, mask, model))
        seeds.append(
            {"model_entropy": [int(base_seed), q], "mask": mask_seed, "noise": noise_seed}
        )

    n_train = int(count * split)
    n_val = count - n_train
    stem = str(out_stem)
    if n_train:
        write_signal_file(stem + "_train.bin", records[:n_train])
    if n_val:
        write_signal_file(stem + "_val.bin", records[n_train:])

    manifest = DatasetManifest(
        format_version=1,
        count=count,
        n=gen.n_points,
        m=records[0].mask.m,
        dt=1.0,
        rate=rate,
        pattern=pattern,
        noise_sigma=noise_sigma,
        split=split,
        n_train=n_train,
        n_val=n_val,
        base_seed=base_seed,
        normalize_amplitudes=normalize_amplitudes,
        generator={
            "j_range": list(gen.j_range),
            "amplitude_range": list(gen.amplitude_range),
            "frequency_range": list(gen.frequency_range),
            "damping_range": list(gen.damping_range),
            "phase_range": list(gen.phase_range),
            "n_points": gen.n_points,
        },
        generator_digest=generator_digest(gen),
        record_seeds=seeds,
    )
    manifest.save(stem + "_manifest.json")
    return manifest


PARAMETER_NAMES = ("amplitude", "damping", "phase", "frequency")


def score_methods(errors: dict) -> dict:
    """Rank methods per trial and parameter by absolute error.

    ``errors`` maps method name to an (n_trials, 4) array with columns
    (amplitude, damping, phase, frequency).  The most accurate method on a
    trial scores 4, the next 3, and so on; ties go to the lexicographically
    smaller method name.  Returns
    {method: {parameter: {"mean": .., "std": ..}}}.
    """
    if len(errors) < 2:
        raise ValueError("need at least two methods to score")
    methods = sorted(errors)
    tables = {m: np.asarray(errors[m], dtype=float) for m in methods}
    n_trials = len(tables[methods[0]])
    for m in methods:
        if tables[m].shape != (n_trials, len(PARAMETER_NAMES)):
            raise ValueError(f"errors[{m!r}] must have shape ({n_trials}, 4)")

    scores = {m: np.zeros((n_trials, len(PARAMETER_NAMES))) for m in methods}
    for t in range(n_trials):
        for p in range(len(PARAMETER_NAMES)):
            ranked = sorted(methods, key=lambda m: (tables[m][t, p], m))
            for pos, m in enumerate(ranked):
                scores[m][t, p] = 4 - pos
    return {
        m: {
            name: {"mean": float(scores[m][:, p].mean()), "std": float(scores[m][:, p].std())}
            for p, name in enumerate(PARAMETER_NAMES)
        }
        for m in methods
    }


def score_table_csv(table: dict) -> str:
    lines = ["method,parameter,mean_score,std_score"]
    for method in sorted(table):
        for name in PARAMETER_NAMES:
            cell = table[method][name]
            lines.append(f"{method},{name},{cell['mean']:.10g},{cell['std']:.10g}")
    return "\n".join(lines) + "\n"


def write_text(path, text: str) -> None:
    Path(path).write_text(text)
