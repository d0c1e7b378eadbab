"""Command-line driver.

Subcommands: generate, sample, reconstruct, evaluate, grid, dataset, score.
Exit codes: 0 success, 2 usage error, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bench
from .datafiles import SignalRecord, read_signal_file, write_signal_file
from .metrics import (
    detect_peaks,
    esprit,
    match_peaks,
    parameter_errors,
    peak_correlation,
    rlne,
    spectrum,
)
from .sampling import MaskSpec, SamplingMask, make_mask, undersample
from .signals import GeneratorSpec, add_noise, random_model, synthesize
from .solvers import CsConfig, SolverConfig


def _add_solver_flags(p: argparse.ArgumentParser):
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="data-consistency weight (default 10^2.5)")
    p.add_argument("--beta", type=float, default=None, help="ADMM penalty")
    p.add_argument("--tau", type=float, default=None, help="multiplier step size")
    p.add_argument("--rank", type=int, default=None, help="factor rank R")
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)


def _solver_config(args, method: str):
    base = bench.default_config(method, getattr(args, "sigma", 0.0) or 0.0)
    if method in ("lrhm", "lrhmf"):
        overrides = {
            k: v
            for k, v in [
                ("lam", args.lam), ("beta", args.beta), ("step_tau", args.tau),
                ("rank", args.rank), ("max_iters", args.max_iters), ("tol", args.tol),
            ]
            if v is not None
        }
        if not overrides:
            return None
        fields = dict(
            lam=base.lam, beta=base.beta, step_tau=base.step_tau, rank=base.rank,
            max_iters=base.max_iters, tol=base.tol, feas_tol=base.feas_tol,
        )
        fields.update(overrides)
        return SolverConfig(**fields)
    if method == "cs":
        if args.max_iters is not None or args.tol is not None:
            return CsConfig(
                noise_sigma=getattr(args, "sigma", 0.0) or 0.0,
                max_iters=args.max_iters or 500,
                tol=args.tol or 1e-6,
            )
        return None
    return None


def _cmd_generate(args) -> int:
    spec = GeneratorSpec(
        j_range=(args.j, args.j) if args.j else (1, 10),
        n_points=args.n,
    )
    model = random_model(spec, args.seed)
    if args.normalize:
        model = model.normalized()
    x = synthesize(model, args.n)
    mask = SamplingMask(args.n, np.array([], dtype=np.int64), "truncation")
    write_signal_file(args.out, [SignalRecord(x, np.array([]), mask, model)])
    print(f"wrote 1 record (J={model.j}, N={args.n}) to {args.out}")
    return 0


def _cmd_sample(args) -> int:
    records, header = read_signal_file(args.input)
    mask = make_mask(MaskSpec(header.n, args.rate, args.pattern, args.seed))
    out_records = []
    for i, rec in enumerate(records):
        noisy = add_noise(rec.x, args.sigma, [args.seed, i])
        out_records.append(SignalRecord(rec.x, undersample(noisy, mask), mask, rec.model))
    write_signal_file(args.out, out_records, header.dt)
    print(f"sampled {len(out_records)} record(s) at rate {args.rate:g} "
          f"({mask.m}/{header.n} points) -> {args.out}")
    return 0


def _cmd_reconstruct(args) -> int:
    records, header = read_signal_file(args.input, pattern=args.pattern)
    cfg = _solver_config(args, args.method)
    out_records, reports = [], []
    for rec in records:
        res = bench.reconstruct_with(args.method, rec.y, rec.mask, cfg,
                                     truth=rec.x if args.with_truth else None)
        out_records.append(SignalRecord(res.x_hat, rec.y, rec.mask, rec.model))
        report = {
            "method": args.method,
            "iterations": res.iterations,
            "converged": res.converged,
        }
        if args.with_truth:
            report["rlne"] = rlne(res.x_hat, rec.x)
        reports.append(report)
    write_signal_file(args.out, out_records, header.dt)
    if args.report:
        Path(args.report).write_text(json.dumps(reports, indent=2) + "\n")
    print(f"reconstructed {len(out_records)} record(s) with {args.method} -> {args.out}")
    if args.with_truth:
        errs = [r["rlne"] for r in reports]
        print(f"mean RLNE vs stored reference: {np.mean(errs):.6g}")
    return 0


def _cmd_evaluate(args) -> int:
    recon_records, _ = read_signal_file(args.input)
    truth_records, _ = read_signal_file(args.truth)
    if len(recon_records) != len(truth_records):
        raise ValueError("record count mismatch between input and truth files")
    rows = []
    for rec, tru in zip(recon_records, truth_records):
        s_t = spectrum(tru.x)
        s_r = spectrum(rec.x)
        floor = max(0.05 * float(np.max(np.abs(s_t))), 3.0 * args.sigma * np.sqrt(len(tru.x)))
        t_peaks = detect_peaks(s_t, floor)
        r_peaks = detect_peaks(s_r, floor)
        matching = match_peaks(r_peaks, t_peaks)
        row = {
            "rlne": rlne(rec.x, tru.x),
            "truth_peaks": len(t_peaks),
            "matched": len(matching.pairs),
            "missing": len(matching.missing),
        }
        if len(t_peaks):
            row["peak_correlations"] = [float(c) for c in
                                        peak_correlation(s_r, s_t, t_peaks)]
        if args.esprit and tru.model is not None:
            est = esprit(rec.x, tru.model.j)
            err = parameter_errors(est, tru.model)
            row["parameter_errors"] = {
                "amplitude": err.amplitude.tolist(),
                "damping": err.damping.tolist(),
                "phase": err.phase.tolist(),
                "frequency": err.frequency.tolist(),
            }
        rows.append(row)
    text = json.dumps(rows, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_grid(args) -> int:
    spec = bench.ExperimentSpec(
        methods=tuple(args.methods.split(",")),
        j_values=tuple(int(v) for v in args.j.split(",")),
        rates=tuple(float(v) for v in args.rate.split(",")),
        trials=args.trials,
        noise_sigma=args.sigma,
        base_seed=args.seed,
        n_points=args.n,
        pattern=args.pattern,
    )
    result = bench.run_grid(spec)
    out = Path(args.out)
    if args.format == "csv":
        bench.write_text(out, result.to_csv())
        bench.write_text(out.with_suffix(".json"), result.to_json())
    else:
        bench.write_text(out, result.to_json())
        bench.write_text(out.with_suffix(".csv"), result.to_csv())
    for c in result.cells:
        print(f"{c.method} J={c.j} rate={c.rate:g}: "
              f"mean RLNE {c.mean_rlne:.4f} +- {c.std_rlne:.4f} over {c.trials} trials")
    for note in result.warnings:
        print(f"warning: {note}", file=sys.stderr)
    return 0


def _cmd_dataset(args) -> int:
    gen = GeneratorSpec(j_range=(args.j_min, args.j_max), n_points=args.n)
    manifest = bench.make_dataset(
        gen, args.rate, args.pattern, args.sigma, args.count, args.out,
        split=args.split, base_seed=args.seed,
    )
    print(f"wrote {manifest.n_train} train + {manifest.n_val} validation records "
          f"(N={manifest.n}, M={manifest.m}) to {args.out}_*.bin")
    return 0


def _cmd_score(args) -> int:
    methods = tuple(args.methods.split(","))
    spec = bench.ExperimentSpec(
        methods=methods, j_values=(args.j,), rates=(args.rate,), trials=args.trials,
        noise_sigma=args.sigma, base_seed=args.seed, n_points=args.n,
        pattern=args.pattern,
    )
    errors = {m: [] for m in methods}
    for t in range(args.trials):
        model, x, mask, y = bench.draw_trial(spec, args.j, args.rate, t)
        for method in methods:
            res = bench.reconstruct_with(method, y, mask, noise_sigma=args.sigma)
            est = esprit(res.x_hat, model.j)
            err = parameter_errors(est, model)
            errors[method].append(err.as_array().mean(axis=0))
    table = bench.score_methods({m: np.array(v) for m, v in errors.items()})
    text = bench.score_table_csv(table)
    if args.out:
        bench.write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lrhankel",
        description="Low-rank Hankel reconstruction of undersampled exponential signals",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="synthesize a random exponential signal")
    p.add_argument("--j", type=int, default=None, help="number of components (default random 1..10)")
    p.add_argument("--n", type=int, default=255)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--normalize", action="store_true",
                   help="rescale so the strongest component has amplitude 1")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_generate)

    p = sub.add_parser("sample", help="undersample (and optionally add noise to) a signal file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--pattern", choices=("poisson_gap", "uniform_random", "truncation"),
                   default="poisson_gap")
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_sample)

    p = sub.add_parser("reconstruct", help="reconstruct records of a sampled signal file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--method", choices=bench.METHODS, required=True)
    p.add_argument("--pattern", default="poisson_gap")
    p.add_argument("--sigma", type=float, default=0.0,
                   help="noise level assumed by the cs threshold floor")
    p.add_argument("--with-truth", action="store_true",
                   help="report RLNE against the stored reference signal")
    p.add_argument("--report", default=None, help="write a JSON report here")
    p.add_argument("--out", required=True)
    _add_solver_flags(p)
    p.set_defaults(fn=_cmd_reconstruct)

    p = sub.add_parser("evaluate", help="score a reconstruction file against a truth file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--esprit", action="store_true",
                   help="also retrieve exponential parameters and their errors")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_evaluate)

    p = sub.add_parser("grid", help="Monte-Carlo RLNE grid over J and sampling rate")
    p.add_argument("--methods", default="lrhmf")
    p.add_argument("--j", default="5", help="comma-separated J values")
    p.add_argument("--rate", default="0.25", help="comma-separated sampling rates")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--sigma", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=255)
    p.add_argument("--pattern", default="poisson_gap")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_grid)

    p = sub.add_parser("dataset", help="generate a training dataset with manifest")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--split", type=float, default=0.9)
    p.add_argument("--j-min", type=int, default=1)
    p.add_argument("--j-max", type=int, default=10)
    p.add_argument("--n", type=int, default=255)
    p.add_argument("--rate", type=float, default=0.25)
    p.add_argument("--pattern", default="poisson_gap")
    p.add_argument("--sigma", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output stem for _train.bin/_val.bin/_manifest.json")
    p.set_defaults(fn=_cmd_dataset)

    p = sub.add_parser("score", help="rank methods by exponential-parameter accuracy")
    p.add_argument("--methods", default="lrhm,lrhmf,cs,zero_fill")
    p.add_argument("--j", type=int, default=4)
    p.add_argument("--rate", type=float, default=0.25)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--sigma", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=255)
    p.add_argument("--pattern", default="poisson_gap")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_score)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
