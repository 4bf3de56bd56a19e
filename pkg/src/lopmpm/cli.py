"""Command-line harness: ``lopmpm {solve,bench,ablation,exact,gen}``.

Permutations are printed 1-based, as in LOLIB result files.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import List, Optional, Sequence

from . import oracle
from .engine import OVBS, POOL_STRATEGIES, SCORE_BASED, ConfigError, SolverConfig, run
from .instance import (GeneratorSpec, InstanceFormatError, LopInstance, generate_instance,
                       read_instance, save_instance)
from .report import (RunRow, aggregate, derive_seed, report_csv, report_json,
                     trace_to_string)

EXIT_OK = 0
EXIT_PARSE = 3
EXIT_CONFIG = 4
EXIT_GUARD = 5
EXIT_IO = 6


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _add_config_flags(parser: argparse.ArgumentParser, max_generations: Optional[int] = 400):
    defaults = SolverConfig()
    g = parser.add_argument_group("solver")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--p", type=int, default=defaults.p, help="population size")
    g.add_argument("--c", type=int, default=defaults.c, help="offspring per generation")
    g.add_argument("--g", type=int, default=defaults.g,
                   help="stagnant generations before a restart")
    g.add_argument("--m", type=int, default=defaults.m, help="parents per recombination")
    g.add_argument("--beta-low", type=float, default=defaults.beta_range[0])
    g.add_argument("--beta-high", type=float, default=defaults.beta_range[1])
    g.add_argument("--alpha-low", type=float, default=defaults.alpha_range[0])
    g.add_argument("--alpha-high", type=float, default=defaults.alpha_range[1])
    g.add_argument("--pool-strategy", choices=POOL_STRATEGIES, default=SCORE_BASED)
    g.add_argument("--max-generations", type=int, default=max_generations,
                   help="generation budget (0 disables it when --time-limit is given)")
    g.add_argument("--time-limit", type=float, default=None, help="seconds per run")
    g.add_argument("--selection-retry-cap", type=int, default=defaults.selection_retry_cap)


def _config_from(args, **overrides) -> SolverConfig:
    max_gen = args.max_generations
    if max_gen == 0 and args.time_limit is not None:
        max_gen = None
    fields = dict(
        p=args.p, c=args.c, g=args.g, m=args.m,
        beta_range=(args.beta_low, args.beta_high),
        alpha_range=(args.alpha_low, args.alpha_high),
        pool_strategy=args.pool_strategy,
        seed=args.seed,
        max_generations=max_gen,
        time_limit=args.time_limit,
        selection_retry_cap=args.selection_retry_cap,
    )
    fields.update(overrides)
    try:
        return SolverConfig(**fields)
    except ConfigError as exc:
        raise CliError(f"invalid configuration: {exc}", EXIT_CONFIG) from None


def _load(path) -> LopInstance:
    try:
        return read_instance(path)
    except InstanceFormatError as exc:
        raise CliError(f"{path}: {exc}", EXIT_PARSE) from None
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}", EXIT_IO) from None


def _one_based(perm) -> List[int]:
    return [int(x) + 1 for x in perm]


def _solve_cell(inst: LopInstance, cfg: SolverConfig, run_index: int, label: str = ""):
    tracker, trace = run(inst, cfg)
    row = RunRow(
        instance=inst.name,
        run=run_index,
        seed=cfg.seed,
        n=inst.n,
        best_objective=tracker.best.objective,
        time_to_best=round(tracker.time_to_best, 6),
        generation_of_best=tracker.generation_of_best,
        generations=trace.generations,
        restarts=trace.restarts,
        selection_fallbacks=trace.selection_fallbacks,
        config_digest=cfg.digest(),
        label=label,
        instance_digest=inst.digest(),
    )
    return row, tracker, trace


def _run_cells(cells, jobs: int):
    if jobs <= 1 or len(cells) <= 1:
        return [_solve_cell(*cell)[0] for cell in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_solve_cell, *cell) for cell in cells]
        return [f.result()[0] for f in futures]


def cmd_solve(args, out) -> int:
    inst = _load(args.instance)
    cfg = _config_from(args)
    row, tracker, trace = _solve_cell(inst, cfg, 0)
    record = {
        "instance": inst.name,
        "n": inst.n,
        "seed": cfg.seed,
        "best_objective": tracker.best.objective,
        "best_permutation": _one_based(tracker.best.perm),
        "time_to_best": row.time_to_best,
        "generation_of_best": tracker.generation_of_best,
        "generations": trace.generations,
        "restarts": trace.restarts,
        "selection_fallbacks": trace.selection_fallbacks,
        "config_digest": cfg.digest(),
        "config": cfg.as_dict(),
    }
    if args.format == "json":
        out.write(json.dumps(record) + "\n")
    else:
        flat = dict(record)
        flat["best_permutation"] = " ".join(str(x) for x in flat["best_permutation"])
        flat.pop("config")
        writer = csv.DictWriter(out, fieldnames=list(flat), lineterminator="\n")
        writer.writeheader()
        writer.writerow(flat)
    if args.trace:
        Path(args.trace).write_text(trace_to_string(trace), encoding="utf-8")
    return EXIT_OK


def cmd_bench(args, out) -> int:
    directory = Path(args.directory)
    if not directory.is_dir():
        raise CliError(f"{directory}: not a readable directory", EXIT_IO)
    base = _config_from(args)
    status = EXIT_OK
    instances = []
    for path in sorted(p for p in directory.iterdir() if p.is_file() and not p.name.startswith(".")):
        try:
            instances.append(_load(path))
        except CliError as exc:
            print(f"skipping {exc}", file=sys.stderr)
            status = exc.code
    cells = [
        (inst, replace(base, seed=derive_seed(args.seed, inst.name, k)), k)
        for inst in instances
        for k in range(args.runs)
    ]
    rows = _run_cells(cells, args.jobs)
    rows.sort(key=lambda r: (r.instance, r.run))
    aggs = aggregate(rows)
    csv_text = report_csv(rows, aggs)
    json_text = report_json(rows, aggs, config=base.as_dict(), config_digest=base.digest())
    out.write(csv_text if args.format == "csv" else json_text)
    if args.out_dir:
        target = Path(args.out_dir)
        target.mkdir(parents=True, exist_ok=True)
        (target / "report.csv").write_text(csv_text, encoding="utf-8")
        (target / "report.json").write_text(json_text, encoding="utf-8")
    return status


def ablation_configs(base: SolverConfig, mode: str):
    """Labelled configurations compared by one ablation study."""
    if mode == "parents":
        return [(f"m={m}", replace(base, m=m)) for m in (2, 3, 4)]
    if mode == "pool":
        return [
            ("ovbs", replace(base, pool_strategy=OVBS)),
            ("alpha=0.8", replace(base, pool_strategy=SCORE_BASED, alpha_range=(0.8, 0.8))),
            ("alpha=rand(0.8,1.0)", replace(base, pool_strategy=SCORE_BASED, alpha_range=(0.8, 1.0))),
        ]
    raise CliError(f"unknown ablation mode {mode!r}", EXIT_CONFIG)


def cmd_ablation(args, out) -> int:
    inst = _load(args.instance)
    base = _config_from(args)
    try:
        configs = ablation_configs(base, args.mode)
    except ConfigError as exc:
        raise CliError(f"invalid configuration: {exc}", EXIT_CONFIG) from None
    rows = []
    trace_dir = Path(args.trace_dir) if args.trace_dir else None
    if trace_dir:
        trace_dir.mkdir(parents=True, exist_ok=True)
    for label, cfg in configs:
        for k in range(args.runs):
            cell_cfg = replace(cfg, seed=derive_seed(args.seed, inst.name, k))
            row, _, trace = _solve_cell(inst, cell_cfg, k, label)
            rows.append(row)
            if trace_dir:
                safe = label.replace("=", "").replace("(", "_").replace(")", "").replace(",", "_")
                (trace_dir / f"{inst.name}_{safe}_run{k}.csv").write_text(
                    trace_to_string(trace), encoding="utf-8")
    aggs = aggregate(rows)
    if args.format == "csv":
        out.write(report_csv(rows, aggs))
    else:
        out.write(report_json(rows, aggs, mode=args.mode, instance=inst.name,
                              instance_digest=inst.digest()))
    return EXIT_OK


def cmd_exact(args, out) -> int:
    inst = _load(args.instance)
    try:
        value, witness = oracle.exact_solve(inst)
    except oracle.GuardError as exc:
        raise CliError(str(exc), EXIT_GUARD) from None
    record = {"instance": inst.name, "n": inst.n, "optimum": value,
              "witness": _one_based(witness)}
    if args.format == "json":
        out.write(json.dumps(record) + "\n")
    else:
        record["witness"] = " ".join(str(x) for x in record["witness"])
        writer = csv.DictWriter(out, fieldnames=list(record), lineterminator="\n")
        writer.writeheader()
        writer.writerow(record)
    return EXIT_OK


def cmd_gen(args, out) -> int:
    try:
        spec = GeneratorSpec(n=args.n, weight_low=args.low, weight_high=args.high,
                             seed=args.seed, name=args.name or "")
    except ValueError as exc:
        raise CliError(f"invalid generator settings: {exc}", EXIT_CONFIG) from None
    inst = generate_instance(spec)
    save_instance(inst, args.output)
    out.write(f"wrote {args.output} (n={inst.n}, digest={inst.digest()})\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lopmpm",
                                     description="Multi-parent memetic search for the LOP.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance")
    p.add_argument("instance")
    _add_config_flags(p)
    p.add_argument("--trace", help="write the per-generation CSV here")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="seeded multi-run campaign over a directory")
    p.add_argument("directory")
    p.add_argument("--runs", type=int, default=3)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out-dir", help="also write report.csv and report.json here")
    _add_config_flags(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("ablation", help="compare parent counts or pool-update strategies")
    p.add_argument("instance")
    p.add_argument("--mode", choices=("parents", "pool"), required=True)
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--trace-dir", help="write one trace CSV per (configuration, run)")
    _add_config_flags(p, max_generations=400)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_ablation)

    p = sub.add_parser("exact", help="exhaustive optimum (n <= 10)")
    p.add_argument("instance")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("gen", help="write a random instance")
    p.add_argument("output")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--low", type=int, default=0)
    p.add_argument("--high", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--name")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    if getattr(args, "runs", 1) < 1:
        print("lopmpm: --runs must be positive", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"lopmpm: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
