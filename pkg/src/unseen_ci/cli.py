"""Command-line interface: interval computation, worst-case analysis,
coverage simulation, region construction, and experiment sweeps.

Single results are printed as one JSON object; sweeps are written as CSV.
Floats are emitted in shortest round-trip form, so identical argv (seed
included) produces byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import sci, simulate
from .distributions import from_counts, read_counts_csv
from .rnorm_ci import CiConfig, ci_unbounded, rot_bonferroni
from .bounded_k import ci_bounded
from .utils import rows_to_csv
from .worstcase import find_m_alpha


class UsageError(Exception):
    """Flag combination that argparse alone cannot reject."""


def _bundled_counts_path() -> Path:
    return Path(resources.files("unseen_ci").joinpath("data/synthetic_counts.csv"))


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload) + "\n")


def _cmd_ci(args) -> int:
    cfg = CiConfig(args.n, args.alpha, args.k)
    res = ci_bounded(cfg) if args.k is not None else ci_unbounded(cfg)
    _emit({"n": cfg.n, "alpha": cfg.alpha, "k": cfg.k, "upper": res.upper,
           "r_star": res.r_star, "e_value": res.e_value, "method": res.method})
    return 0


def _cmd_rot(args) -> int:
    upper = rot_bonferroni(args.n, args.k, args.alpha)
    _emit({"n": args.n, "k": args.k, "alpha": args.alpha, "upper": upper,
           "method": "rot_bonferroni"})
    return 0


def _cmd_worst_case(args) -> int:
    wc = find_m_alpha(args.n, args.alpha)
    _emit({"n": args.n, "alpha": args.alpha, "m_alpha": wc.m_alpha,
           "exceedance_at_m": wc.exceedance_at_m,
           "exceedance_at_m_plus_1": wc.exceedance_at_m_plus_1,
           "quantile": 1.0 / wc.m_alpha})
    return 0


def _dist_params(args) -> dict:
    out = {}
    for key in ("s", "a", "b", "l", "r"):
        val = getattr(args, key, None)
        if val is not None:
            out[key] = val
    return out


def _cmd_simulate(args) -> int:
    counts_rows = None
    if args.dist == "file":
        if not args.counts:
            raise UsageError("--dist file requires --counts")
        counts_rows = read_counts_csv(args.counts)
    elif args.dist != "worstcase" and args.k is None:
        raise UsageError(f"--dist {args.dist} requires --k")
    pmf = simulate.benchmark_pmf(args.dist, args.k or 0, args.n, args.alpha,
                                 params=_dist_params(args), counts_rows=counts_rows)
    if args.method == "ours":
        threshold = ci_unbounded(CiConfig(args.n, args.alpha)).upper
    else:
        threshold = rot_bonferroni(args.n, len(pmf), args.alpha)
    rep = simulate.coverage(pmf, CiConfig(args.n, args.alpha), threshold,
                            args.reps, args.seed, args.workers)
    _emit({"dist": args.dist, "k": len(pmf), "n": args.n, "alpha": args.alpha,
           "method": args.method, "threshold": rep.threshold, "reps": rep.reps,
           "seed": rep.seed, "non_coverage": rep.non_coverage,
           "coverage_rate": rep.coverage_rate, "mean_m_max": rep.mean_m_max,
           "quantile_1_minus_alpha": rep.quantile_1_minus_alpha})
    return 0


def _cmd_sci(args) -> int:
    rows = read_counts_csv(args.counts)
    labels: list[str] = []
    ids: dict[str, int] = {}
    counts: dict[int, int] = {}
    for label, cnt in rows:
        if cnt != int(cnt) or cnt < 0:
            raise UsageError(f"sample counts must be nonnegative integers, got {cnt!r}")
        if label not in ids:
            ids[label] = len(ids)
            labels.append(label)
        counts[ids[label]] = counts.get(ids[label], 0) + int(cnt)
    if len(ids) > args.k:
        raise UsageError(f"{len(ids)} distinct labels exceed alphabet size k={args.k}")
    total = sum(counts.values())
    if total != args.n:
        raise UsageError(f"counts sum to {total}, but --n is {args.n}")
    from .distributions import SampleCounts

    sample_counts = SampleCounts(counts, args.n)
    c_used: float | None
    method = args.method
    if method == "ours":
        if args.c == "auto":
            c_used = sci.choose_c(args.n, args.k, args.alpha)
            if c_used is None:
                method = "bonferroni"  # no feasible split; fall back
        else:
            try:
                c_used = float(args.c)
            except ValueError:
                raise UsageError(f"--c must be a float or 'auto', got {args.c!r}")
            if not 0.0 <= c_used <= 1.0:
                raise UsageError("--c must lie in [0, 1]")
    if method == "ours":
        region = sci.build_region(sample_counts, args.k, args.alpha, c_used,
                                  binomial=args.binomial)
    else:
        region = sci.build_region_bonferroni(sample_counts, args.k, args.alpha,
                                             binomial=args.binomial)
    all_labels = tuple(labels) + tuple(str(j) for j in range(len(labels), args.k))
    _emit({"n": args.n, "k": args.k, "alpha": args.alpha,
           "c": region.c if method == "ours" else None, "method": method,
           "binomial": args.binomial, "log_volume": sci.log_volume(region)})
    body = rows_to_csv(sci.REGION_HEADER,
                       sci.region_rows(region, sample_counts, all_labels))
    sys.stdout.write(body)
    return 0


_EXPERIMENT_DEFAULT_REPS = {"fig1": 2000, "fig2": 2000, "fig3": 500,
                            "fig4": 200, "coverage": 10000}


def _cmd_experiment(args) -> int:
    reps = args.reps if args.reps is not None else _EXPERIMENT_DEFAULT_REPS[args.name]
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    def save(name: str, header, rows) -> None:
        path = out_dir / name
        path.write_text(rows_to_csv(header, rows), encoding="utf-8")
        written.append(str(path))

    if args.name == "fig1":
        header, rows = simulate.run_fig1(simulate.BENCHMARKS, 1000, 0.05,
                                         (100, 1000, 10000), reps, args.seed,
                                         args.workers)
        save("fig1.csv", header, rows)
    elif args.name == "fig2":
        counts_path = args.counts or _bundled_counts_path()
        header, rows = simulate.run_fig2(read_counts_csv(counts_path),
                                         (20, 40, 80, 160), 0.05, reps,
                                         args.seed, args.workers)
        save("fig2.csv", header, rows)
    elif args.name == "fig3":
        header, rows = sci.run_fig3(("zipf", "uniform"), (2000, 20000), 1000,
                                    0.05, reps, args.seed, args.workers)
        save("fig3.csv", header, rows)
    elif args.name == "fig4":
        c_grid = (0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 0.999)
        header, rows = sci.run_fig4(("zipf", "uniform"), (1000, 20000), c_grid,
                                    1000, 0.05, reps, args.seed, args.workers)
        save("fig4.csv", header, rows)
    else:
        header, rows = simulate.run_coverage_suite(1000, 0.05, 10000, reps,
                                                   args.seed, args.workers)
        save("coverage.csv", header, rows)
        header, rows = simulate.run_tightness(1000, 0.05, reps, args.seed,
                                              args.workers)
        save("tightness.csv", header, rows)
    _emit({"experiment": args.name, "reps": reps, "seed": args.seed,
           "workers": args.workers, "written": written})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unseen-ci",
        description="Confidence intervals for the probabilities of unobserved events.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ci", help="one-sided CI for the largest missing probability")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--k", type=int, default=None,
                   help="alphabet size; omitted means unbounded")
    p.set_defaults(func=_cmd_ci)

    p = sub.add_parser("rot", help="multiplicity-corrected rule-of-three bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.set_defaults(func=_cmd_rot)

    p = sub.add_parser("worst-case", help="hardest uniform alphabet size")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.set_defaults(func=_cmd_worst_case)

    p = sub.add_parser("simulate", help="Monte Carlo non-coverage of a CI")
    p.add_argument("--dist", required=True,
                   choices=list(simulate.BENCHMARKS) + ["file"])
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--s", type=float, default=None, help="power-law skew")
    p.add_argument("--a", type=float, default=None, help="geometric/beta parameter")
    p.add_argument("--b", type=float, default=None, help="beta parameter")
    p.add_argument("--l", type=int, default=None, help="negative-binomial failures")
    p.add_argument("--r", type=float, default=None, help="negative-binomial ratio")
    p.add_argument("--counts", default=None, help="label,count CSV for --dist file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--reps", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--method", choices=("ours", "rot"), default="ours")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sci", help="simultaneous confidence region from sample counts")
    p.add_argument("--counts", required=True, help="label,count CSV of the sample")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--c", default="auto", help="budget split in [0,1], or 'auto'")
    p.add_argument("--method", choices=("ours", "bonferroni"), default="ours")
    p.add_argument("--binomial", choices=("wald", "exact"), default="wald")
    p.set_defaults(func=_cmd_sci)

    p = sub.add_parser("experiment", help="run an experiment sweep, writing CSV files")
    p.add_argument("name", choices=("fig1", "fig2", "fig3", "fig4", "coverage"))
    p.add_argument("--out", default="results")
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--counts", default=None, help="count CSV for fig2")
    p.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
