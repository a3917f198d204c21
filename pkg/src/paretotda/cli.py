"""Command-line interface: sample, analyze, trials, bench.

sample   draw a Pareto-set sample of a benchmark problem to CSV files
analyze  run the structure tests on decision/objective CSVs -> JSON report
trials   repeat sample+analyze and tabulate verdict counts per problem
bench    measure build/reduction costs across sample sizes and dimensions

Verdicts (even violations) exit 0; only operational failures exit
nonzero, with a JSON error object on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional

import numpy as np

from .persistence import rips_persistence, write_diagram_csv
from .pointset import load_point_cloud, pairwise_distances, save_point_cloud
from .problems import PROBLEMS, get_problem, sample_pareto
from .report import report_to_json
from .rips import SimplexCountError, build_filtration, simplex_count_profile
from .simplicity import AnalysisConfig, analyze


def _add_analysis_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=0.05, help="band significance level")
    p.add_argument("--bootstrap", type=int, default=100, help="bootstrap replicates B")
    p.add_argument("--maxdim", type=int, default=2, help="complex dimension cap")
    p.add_argument("--delta", type=float, default=None, help="override the diameter estimate")
    p.add_argument("--delta-max", type=float, default=None, help="filtration diameter cap")
    p.add_argument("--pair-dim", default=None, help="S2 pair dimension (int, 'top' or 'all')")
    p.add_argument("--subsets", default="full", help="objective subsets: full, all, or a size k")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", type=float, default=1e-9, help="strict positivity threshold")
    p.add_argument("--s2-simplex-budget", type=int, default=1500)
    p.add_argument("--s2-pair-budget", type=int, default=20_000)


def _config_from(args) -> AnalysisConfig:
    pair_dim = args.pair_dim
    if pair_dim is not None and pair_dim not in ("top", "all"):
        pair_dim = int(pair_dim)
    subsets = args.subsets
    if subsets not in ("full", "all"):
        subsets = int(subsets)
    return AnalysisConfig(
        maxdim=args.maxdim,
        alpha=args.alpha,
        bootstrap=args.bootstrap,
        seed=args.seed,
        delta=args.delta,
        delta_max=args.delta_max,
        pair_dim=pair_dim,
        subsets=subsets,
        run_s2=getattr(args, "_run_s2", None),
        eps=args.eps,
        s2_simplex_budget=args.s2_simplex_budget,
        s2_pair_budget=args.s2_pair_budget,
    )


def cmd_sample(args) -> int:
    spec = get_problem(args.problem)
    pc = sample_pareto(spec, args.n, seed=args.seed, oversample=args.oversample)
    x_path = f"{args.out_prefix}_x.csv"
    f_path = f"{args.out_prefix}_f.csv"
    save_point_cloud(pc, x_path, f_path)
    print(f"wrote {pc.n_points} rows to {x_path} and {f_path}")
    return 0


def _summary_lines(report) -> List[str]:
    lines = []
    for sub in report.results.values():
        label = (
            "full problem"
            if sub.subset is None or len(sub.subset) == (report.n_objectives or 0)
            else "f" + ",f".join(str(i + 1) for i in sub.subset)
        )
        if sub.status != "ok":
            lines.append(f"{label}: {sub.status} ({sub.n_points} points)")
            continue
        parts = [f"delta={sub.delta_used:.4g}"]
        if sub.estimate is not None and not sub.estimate.consistent:
            parts.append("WARNING: inconsistent lifetime interval")
        parts.append(f"S1 {'VIOLATED ' + str(sub.s1.reasons) if sub.s1.violated else 'ok'}")
        if sub.s2 is not None:
            parts.append(
                f"S2 {'VIOLATED' if sub.s2.violated else 'ok'}"
                f" ({sub.s2.pairs_checked} pairs)"
            )
        lines.append(f"{label}: " + "; ".join(parts))
    return lines


def cmd_analyze(args) -> int:
    if args.s2 and args.f_csv is None:
        raise ValueError("S2 requires objectives: pass the objective CSV")
    pc = load_point_cloud(args.x_csv, args.f_csv)
    args._run_s2 = True if args.s2 else (False if args.no_s2 else None)
    config = _config_from(args)
    report = analyze(pc, config)
    with open(args.report, "w", encoding="utf-8") as fh:
        fh.write(report_to_json(report))
        fh.write("\n")
    full = report.full
    if args.diagram_csv and full.diagram is not None:
        write_diagram_csv(full.diagram, args.diagram_csv)
    if args.svg and full.diagram is not None:
        from .plotting import plot_persistence_diagram

        plot_persistence_diagram(
            full.diagram, args.svg, band=full.band, title=args.x_csv
        )
    for line in _summary_lines(report):
        print(line)
    print(f"report written to {args.report}")
    return 0


def _one_trial(packed):
    problem, trial, seed, cfg_dict = packed
    spec = get_problem(problem)
    try:
        pc = sample_pareto(spec, cfg_dict.pop("_n"), seed=seed)
        config = AnalysisConfig(**cfg_dict)
        t0 = time.perf_counter()
        report = analyze(pc, config)
        wall = time.perf_counter() - t0
        full = report.full
        return {
            "problem": problem,
            "trial": trial,
            "seed": seed,
            "status": "ok",
            "delta": full.delta_used,
            "s1_unsatisfied": int(full.s1.violated),
            "s2_unsatisfied": int(full.s2.violated) if full.s2 else "",
            "betti0": full.s1.betti[0],
            "wall_s": round(wall, 3),
        }
    except Exception as exc:  # pragma: no cover - defensive per-trial isolation
        return {
            "problem": problem,
            "trial": trial,
            "seed": seed,
            "status": f"error: {exc}",
            "delta": "",
            "s1_unsatisfied": "",
            "s2_unsatisfied": "",
            "betti0": "",
            "wall_s": "",
        }


_TRIAL_FIELDS = [
    "problem",
    "trial",
    "seed",
    "status",
    "delta",
    "s1_unsatisfied",
    "s2_unsatisfied",
    "betti0",
    "wall_s",
]


def cmd_trials(args) -> int:
    args._run_s2 = None
    config = _config_from(args)
    jobs = []
    for trial in range(args.trials):
        cfg = dict(config.__dict__)
        cfg["seed"] = args.base_seed + trial
        cfg["_n"] = args.n
        jobs.append((args.problem, trial, args.base_seed + trial, cfg))
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_one_trial, jobs))
    else:
        rows = [_one_trial(j) for j in jobs]
    rows.sort(key=lambda r: r["trial"])

    ok = [r for r in rows if r["status"] == "ok"]
    agg = {
        "problem": args.problem,
        "trial": "aggregate",
        "seed": "",
        "status": f"{len(ok)}/{len(rows)} ok",
        "delta": round(float(np.mean([r["delta"] for r in ok])), 6) if ok else "",
        "s1_unsatisfied": sum(r["s1_unsatisfied"] for r in ok),
        "s2_unsatisfied": sum(r["s2_unsatisfied"] or 0 for r in ok),
        "betti0": "",
        "wall_s": "",
    }
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=_TRIAL_FIELDS)
        writer.writeheader()
        for r in rows + [agg]:
            writer.writerow(r)
    print(f"{args.problem}: trials={len(rows)}")
    print(f"  Average delta:    {agg['delta']}")
    print(f"  S1 unsatisfied:   {agg['s1_unsatisfied']}")
    print(f"  S2 unsatisfied:   {agg['s2_unsatisfied']}")
    print(f"table written to {args.out}")
    return 0


def cmd_bench(args) -> int:
    spec = get_problem(args.problem)
    n_list = [int(v) for v in args.n_list.split(",")]
    maxdim_list = [int(v) for v in args.maxdim_list.split(",")]
    rows = []
    for n in n_list:
        pc = sample_pareto(spec, n, seed=args.seed)
        t0 = time.perf_counter()
        dm = pairwise_distances(pc)
        t_dist = time.perf_counter() - t0
        for maxdim in maxdim_list:
            row = {
                "problem": args.problem,
                "n": n,
                "maxdim": maxdim,
                "status": "OK",
                "t_distance_s": round(t_dist, 4),
                "t_build_s": "",
                "t_persistence_s": "",
                "t_total_s": "",
                "simplices_total": "",
                "approx_bytes": "",
            }
            for d in range(max(maxdim_list) + 1):
                row[f"simplices_dim{d}"] = ""
            try:
                t0 = time.perf_counter()
                filt = build_filtration(dm, maxdim=maxdim, cap=args.cap)
                t_build = time.perf_counter() - t0
                t0 = time.perf_counter()
                rips_persistence(dm, filt.delta_max, hom_maxdim=min(1, maxdim - 1) if maxdim >= 1 else 0)
                t_red = time.perf_counter() - t0
                counts = simplex_count_profile(filt)
                row.update(
                    {
                        "t_build_s": round(t_build, 4),
                        "t_persistence_s": round(t_red, 4),
                        "t_total_s": round(t_dist + t_build + t_red, 4),
                        "simplices_total": int(counts.sum()),
                        "approx_bytes": int(
                            sum(c * (8 * (d + 1) + 8) for d, c in enumerate(counts))
                        ),
                    }
                )
                for d, c in enumerate(counts):
                    row[f"simplices_dim{d}"] = int(c)
            except SimplexCountError as exc:
                row["status"] = f"DNF: {exc}"
            rows.append(row)
    fields = list(rows[0].keys())
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
    print(f"bench table written to {args.out}")
    if args.plot:
        from .plotting import plot_bench

        plot_bench([r for r in rows if r["status"] == "OK"], args.plot)
        print(f"bench figure written to {args.plot}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paretotda",
        description="Topology checks for sampled Pareto sets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw a Pareto-set sample to CSV files")
    p.add_argument("--problem", required=True, choices=sorted(PROBLEMS))
    p.add_argument("--n", type=int, default=300)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--oversample", type=int, default=4)
    p.add_argument("--out-prefix", default="sample")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("analyze", help="run the structure tests on CSV inputs")
    p.add_argument("x_csv", help="decision-space CSV (header x1..xn)")
    p.add_argument("f_csv", nargs="?", default=None, help="objective CSV (header f1..fm)")
    _add_analysis_flags(p)
    p.add_argument("--s2", action="store_true", help="require the embedding test")
    p.add_argument("--no-s2", action="store_true", help="skip the embedding test")
    p.add_argument("--report", default="report.json")
    p.add_argument("--diagram-csv", default=None)
    p.add_argument("--svg", default=None, help="persistence diagram figure path")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("trials", help="repeated sample+analyze with aggregation")
    p.add_argument("--problem", required=True, choices=sorted(PROBLEMS))
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--n", type=int, default=300)
    p.add_argument("--base-seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    _add_analysis_flags(p)
    p.add_argument("--out", default="trials.csv")
    p.set_defaults(func=cmd_trials)

    p = sub.add_parser("bench", help="cost profile across N and maxdim")
    p.add_argument("--problem", default="med", choices=sorted(PROBLEMS))
    p.add_argument("--n-list", default="50,100,200")
    p.add_argument("--maxdim-list", default="1,2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=None, help="simplex count guard cap")
    p.add_argument("--out", default="bench.csv")
    p.add_argument("--plot", default=None, help="optional cost figure path")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        json.dump(
            {"error": type(exc).__name__, "message": str(exc)},
            sys.stderr,
        )
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
