"""Command-line entry point: ``python -m fastdpp <command> ...``.

Commands
--------
sample        draw from a projection DPP, L-ensemble or marginal kernel read from a matrix file
bench         time both projection samplers over a grid of (n, m); CSV on stdout
pipeline      Gaussian kernel -> range finder -> sample; JSON sample on stdout
validate      goodness-of-fit suites against the brute-force oracle; JSON report
thinning-exp  success rate of thinning i.i.d. pools of increasing size; CSV

Sample indices in JSON output are 1-based. Exit status is 0 on success,
1 when a validation test fails and 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import bench, mixture, oracle, projection, thinning
from .errors import DPPError
from .linalg import read_matrix

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
ALPHA = 1e-3


def _int_list(text):
    try:
        return [int(float(x)) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _on_off(text):
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return text == "on"


def _sample_json(trace, seed):
    return {
        "indices": [int(i) + 1 for i in sorted(int(i) for i in trace.indices)],
        "proposals": trace.total_proposals,
        "seed": seed,
    }


def cmd_sample(args, out):
    if args.projection:
        Q = read_matrix(args.projection)
        rng = np.random.default_rng(args.seed)
        if args.algorithm == "standard":
            traces = [projection.sample_standard(Q, rng) for _ in range(args.count)]
        else:
            prep = projection.prepare(Q, cache=args.cache)
            traces = projection.sample_repeated(prep, args.count, rng)
    else:
        if args.lensemble:
            dpp = mixture.kernel_from_lensemble(read_matrix(args.lensemble), size=args.size)
        else:
            dpp = mixture.mixture_from_kernel(read_matrix(args.kernel), size=args.size)
        rng = np.random.default_rng(args.seed)
        traces = [mixture.sample_dpp(dpp, rng, args.algorithm, args.cache)
                  for _ in range(args.count)]
    if args.count == 1:
        payload = _sample_json(traces[0], args.seed)
    else:
        payload = {"samples": [_sample_json(t, args.seed)["indices"] for t in traces],
                   "proposals": [t.total_proposals for t in traces],
                   "seed": args.seed}
    out.write(json.dumps(payload) + "\n")
    return EXIT_OK


def _algorithms(choice):
    return bench.ALGORITHMS if choice == "both" else (choice,)


def cmd_bench(args, out):
    cfg = bench.BenchConfig(args.n, args.m, args.reps, args.seed, _algorithms(args.algorithm),
                            args.include_preprocessing, args.cache)
    out.write(bench.run_benchmark(cfg).to_csv())
    return EXIT_OK


def cmd_pipeline(args, out):
    points = read_matrix(args.points) if args.points else None
    cfg = bench.PipelineConfig(m=args.m, sigma=args.sigma, gamma=args.gamma,
                               column_factor=args.column_factor, points=points, n=args.n,
                               d=args.d, algorithm=args.algorithm, cache=args.cache)
    res = bench.run_pipeline(cfg, args.seed)
    out.write(json.dumps({"indices": sorted(int(i) + 1 for i in res.indices),
                          "proposals": res.proposals, "seed": args.seed}) + "\n")
    fh = open(args.timings, "w") if args.timings else sys.stderr
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["phase", "seconds"])
        for phase, sec in res.timings.items():
            w.writerow([phase, repr(sec)])
    finally:
        if args.timings:
            fh.close()
    return EXIT_OK


def _record(results, name, stat, p):
    results.append({"test": name, "statistic": stat, "p_value": p, "passed": bool(p > ALPHA)})


def validation_suite(suite: str, samples: int, seed: int) -> list[dict]:
    """Run one named GOF suite; each entry carries its test name, statistic and p-value."""
    rng = np.random.default_rng(seed)
    results: list[dict] = []
    if suite in ("exactness", "all"):
        for n, m in [(5, 2), (6, 2), (6, 3), (8, 2), (8, 3)]:
            Q = bench.random_basis(n, m, rng)
            law = oracle.projection_pmf(Q)
            prep = projection.prepare(Q)
            rej = [t.indices for t in projection.sample_repeated(prep, samples, rng)]
            std = [projection.sample_standard(Q, rng).indices for _ in range(samples)]
            _record(results, f"rejection n={n} m={m}", *oracle.law_gof(law, rej))
            _record(results, f"standard n={n} m={m}", *oracle.law_gof(law, std))
    if suite in ("lensemble", "all"):
        for n in (3, 4, 4):
            V = rng.standard_normal((n, n))
            L = V @ V.T / n
            dpp = mixture.kernel_from_lensemble(L)
            draws = [mixture.sample_dpp(dpp, rng).indices for _ in range(samples)]
            _record(results, f"l-ensemble n={n}", *oracle.law_gof(oracle.lensemble_pmf(L), draws))
    if suite in ("fixed-size", "all"):
        for lam, m in [((1.0, 2.0, 3.0), 2), ((0.5, 1.0, 2.0, 4.0, 0.3, 1.5), 3)]:
            draws = [mixture.sample_fixed_size_subset(lam, m, rng) for _ in range(samples)]
            _record(results, f"fixed-size n={len(lam)} m={m}",
                    *oracle.law_gof(oracle.fixed_size_pmf(lam, m), draws))
    if suite in ("proposals", "all"):
        for m in (5, 20):
            prep = projection.prepare(bench.random_basis(4 * m, m, rng))
            R = np.array([t.proposals_per_step for t in
                          projection.sample_repeated(prep, min(samples, 10_000), rng)])
            for t in range(1, m):
                _record(results, f"proposals m={m} step={t + 1}",
                        *oracle.geometric_gof(R[:, t], (m - t) / m))
    if not results:
        raise ValueError(f"unknown suite {suite!r}")
    return results


def cmd_validate(args, out):
    results = validation_suite(args.suite, args.samples, args.seed)
    ok = all(r["passed"] for r in results)
    out.write(json.dumps({"suite": args.suite, "samples": args.samples, "alpha": ALPHA,
                          "passed": ok, "results": results}, indent=1) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_thinning(args, out):
    rng = np.random.default_rng(args.seed)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["m", "size", "label", "trials", "success_rate", "stderr"])
    for m in args.m:
        n = args.n or 10 * m
        if args.stratified:
            if n % m:
                raise ValueError(f"--n {n} must be a multiple of m={m} for --stratified")
            Q = thinning.stratified_basis(thinning.StratifiedSpec(n, m))
        else:
            Q = bench.random_basis(n, m, rng)
        mlogm = m * math.log(m) if m > 1 else 1.0
        sizes = {int(math.ceil(c * mlogm)): f"{c:g}*m*ln(m)" for c in args.factors}
        for delta in args.delta:
            sizes[thinning.thinning_pool_size(m, delta)] = f"bound(delta={delta:g})"
        for size in sorted(sizes):
            rate = thinning.thinning_success_rate(Q, size, args.trials, rng)
            se = math.sqrt(rate * (1 - rate) / args.trials)
            w.writerow([m, size, sizes[size], args.trials, repr(rate), repr(se)])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fastdpp", description="Exact DPP sampling tools.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", help="sample a DPP given in matrix text format")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--projection", metavar="FILE", help="orthonormal n x m basis Q")
    src.add_argument("--lensemble", metavar="FILE", help="PSD n x n matrix L")
    src.add_argument("--kernel", metavar="FILE", help="marginal kernel K with 0 <= K <= I")
    s.add_argument("--size", type=int, default=None, help="fixed sample size (L/K sources)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--algorithm", choices=["standard", "rejection"], default="rejection")
    s.add_argument("--cache", type=_on_off, default=False, metavar="{on,off}")
    s.add_argument("--count", type=int, default=1)
    s.set_defaults(func=cmd_sample)

    b = sub.add_parser("bench", help="median runtimes of both samplers (CSV)")
    b.add_argument("--n", type=_int_list, required=True)
    b.add_argument("--m", type=_int_list, required=True)
    b.add_argument("--reps", type=int, default=100)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--algorithm", choices=["standard", "rejection", "both"], default="both")
    b.add_argument("--include-preprocessing", action="store_true")
    b.add_argument("--cache", type=_on_off, default=False, metavar="{on,off}")
    b.set_defaults(func=cmd_bench)

    pl = sub.add_parser("pipeline", help="Gaussian kernel -> range finder -> sample")
    pl.add_argument("--points", metavar="FILE", help="n x d data in matrix text format")
    pl.add_argument("--n", type=int, default=500, help="number of generated points")
    pl.add_argument("--d", type=int, default=2)
    pl.add_argument("--m", type=int, required=True)
    pl.add_argument("--sigma", type=float, default=1.0)
    pl.add_argument("--gamma", type=float, default=1.0)
    pl.add_argument("--column-factor", type=int, default=5)
    pl.add_argument("--seed", type=int, default=0)
    pl.add_argument("--algorithm", choices=["standard", "rejection"], default="rejection")
    pl.add_argument("--cache", type=_on_off, default=False, metavar="{on,off}")
    pl.add_argument("--timings", metavar="FILE", help="timings CSV path (default: stderr)")
    pl.set_defaults(func=cmd_pipeline)

    v = sub.add_parser("validate", help="oracle goodness-of-fit suites (JSON)")
    v.add_argument("--suite", choices=["exactness", "lensemble", "fixed-size", "proposals", "all"],
                   default="exactness")
    v.add_argument("--samples", type=int, default=200_000)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_validate)

    t = sub.add_parser("thinning-exp", help="thinning success rate vs pool size (CSV)")
    t.add_argument("--m", type=_int_list, default=[10, 20])
    t.add_argument("--n", type=int, default=None, help="ground set size (default 10 m)")
    t.add_argument("--delta", type=_float_list, default=[0.1, 0.25])
    t.add_argument("--factors", type=_float_list, default=[0.5, 1.0, 1.5, 2.0, 3.0])
    t.add_argument("--trials", type=int, default=1000)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--stratified", action="store_true")
    t.set_defaults(func=cmd_thinning)
    return p


def cli_main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args, out)
    except (DPPError, ValueError, OSError) as exc:
        print(f"fastdpp {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(cli_main())
