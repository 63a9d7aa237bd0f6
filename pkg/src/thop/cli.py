"""Command-line entry points: solve, validate, bench, gen."""

from __future__ import annotations

import argparse
import csv
import glob
import json
import logging
import math
import re
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .evaluator import MALFORMED, SolutionFormatError, evaluate, format_solution, parse_solution, tour_length
from .generate import KNAPSACK_TYPES, GenConfig, generate
from .mmas import MmasParams, SolveResult, solve
from .model import Instance, InstanceError, fmt_number, read_instance, serialize_instance

log = logging.getLogger("thop")

STATS_COLUMNS = ["iteration", "elapsed_seconds", "iter_best_profit", "global_best_profit", "tau_min", "tau_max"]
RUN_COLUMNS = ["instance", "run", "seed", "profit", "weight", "time", "pct_time", "pct_weight",
               "distance", "cities_visited", "D"]
BENCH_COLUMNS = ["instance", "group", "runs", "profits", "mean_profit", "best_profit", "reference_profit",
                 "best_known", "approx_ratio", "D", "pct_time", "pct_weight", "error"]
GROUP_COLUMNS = ["group", "instances", "mean_ratio", "std_ratio", "mean_D", "mean_pct_time", "mean_pct_weight"]
PARAM_FLAGS = ("ants", "alpha", "beta", "rho", "ptries")

_NAME_PATTERN = re.compile(r"^([^_]+_[^_]+_[^_]+)_[^_]+_[^_]+$")


def group_of(name: str) -> str:
    """XXX_YY_ZZZ prefix of an XXX_YY_ZZZ_WW_TT instance name; the name itself otherwise."""
    match = _NAME_PATTERN.match(name)
    return match.group(1) if match else name


def _num(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return repr(x)
    return fmt_number(x)


@dataclass
class RunSummary:
    instance: str
    run: int
    seed: int
    profit: float
    weight: float
    time: float
    pct_time: float
    pct_weight: float
    distance: int
    cities_visited: int
    D: float

    @classmethod
    def from_result(cls, name: str, run: int, seed: int, instance: Instance, result: SolveResult):
        ev, tour = result.evaluation, result.solution.tour
        dist = tour_length(tour, instance)
        return cls(name, run, seed, ev.profit, ev.weight, ev.time,
                   100.0 * ev.time / instance.max_time, 100.0 * ev.weight / instance.capacity,
                   dist, len(tour), dist / len(tour))

    def row(self) -> list[str]:
        return [_num(getattr(self, c)) for c in RUN_COLUMNS]


@dataclass
class BenchmarkRecord:
    instance: str
    group: str
    profits: list[float] = field(default_factory=list)
    reference: float | None = None
    best_run: RunSummary | None = None
    error: str = ""

    @property
    def mean_profit(self) -> float | None:
        return statistics.fmean(self.profits) if self.profits else None

    @property
    def best_profit(self) -> float | None:
        return max(self.profits) if self.profits else None

    @property
    def best_known(self) -> float | None:
        if self.reference is None or not self.profits:
            return None
        return max(self.reference, self.best_profit)

    @property
    def approx_ratio(self) -> float | None:
        bk = self.best_known
        if bk is None or bk <= 0:
            return None
        return self.mean_profit / bk

    def row(self) -> list[str]:
        b = self.best_run
        return [
            self.instance, self.group, str(len(self.profits)),
            " ".join(_num(p) for p in self.profits),
            _num(self.mean_profit), _num(self.best_profit), _num(self.reference),
            _num(self.best_known), _num(self.approx_ratio),
            _num(b.D) if b else "", _num(b.pct_time) if b else "", _num(b.pct_weight) if b else "",
            self.error,
        ]


# --- solve -------------------------------------------------------------------

def instance_name(path) -> str:
    return Path(path).name.removesuffix(".thop")


def load_config(path) -> dict[str, dict]:
    if path is None:
        return {}
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    known = {f.name for f in fields(MmasParams)}
    for group, overrides in data.items():
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f"config group {group!r}: unknown parameters {sorted(unknown)}")
    return data


def params_for(name: str, base: MmasParams, config: dict[str, dict]) -> MmasParams:
    return replace(base, **config.get(group_of(name), {}))


def _write_stats(path: Path, name: str, params: MmasParams, result: SolveResult) -> None:
    timed = params.max_iterations is None
    header = " ".join(f"{k}={_num(v)}" for k, v in params.as_dict().items())
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# instance={name} {header}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(STATS_COLUMNS)
        for s in result.stats:
            writer.writerow([s.iteration, f"{s.elapsed_seconds:.6f}" if timed else "",
                             _num(s.iter_best_profit), _num(s.global_best_profit),
                             repr(s.tau_min), repr(s.tau_max)])


def solve_file(path, params: MmasParams, runs: int, seed: int, out_dir: Path | None,
               config: dict | None = None) -> tuple[Instance, list[RunSummary]]:
    instance = read_instance(path)
    name = instance_name(path)
    params = params_for(name, params, config or {})
    summaries = []
    for run in range(1, runs + 1):
        run_seed = seed + run - 1
        run_params = replace(params, seed=run_seed)
        result = solve(instance, run_params)
        summary = RunSummary.from_result(name, run, run_seed, instance, result)
        summaries.append(summary)
        log.info("%s run %d seed %d: profit %s in %d iterations", name, run, run_seed,
                 _num(summary.profit), result.iterations)
        if out_dir is not None:
            (out_dir / f"{name}.run{run:02d}.sol").write_text(format_solution(result.solution), encoding="utf-8")
            _write_stats(out_dir / f"{name}.run{run:02d}.stats.csv", name, run_params, result)
    if out_dir is not None:
        with open(out_dir / f"{name}.runs.csv", "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(RUN_COLUMNS)
            writer.writerows(s.row() for s in summaries)
    return instance, summaries


def make_record(name: str, summaries: list[RunSummary], reference: float | None) -> BenchmarkRecord:
    best = max(summaries, key=lambda s: s.profit) if summaries else None
    return BenchmarkRecord(name, group_of(name), [s.profit for s in summaries], reference, best)


def write_records(path, records: list[BenchmarkRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(BENCH_COLUMNS)
        writer.writerows(r.row() for r in records)


def _params_from_args(args) -> MmasParams:
    overrides = {k: getattr(args, k) for k in PARAM_FLAGS if getattr(args, k) is not None}
    if args.iterations is not None:
        overrides["max_iterations"] = args.iterations
    if args.budget_seconds is not None:
        overrides["time_budget"] = args.budget_seconds
    return MmasParams(**overrides)


def cmd_solve(args) -> int:
    if args.runs < 1:
        print("error: --runs must be at least 1", file=sys.stderr)
        return 2
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        base = _params_from_args(args)
        config = load_config(args.config)
        instance, summaries = solve_file(args.instance, base, args.runs, args.seed, out_dir, config)
    except (OSError, InstanceError, ValueError) as exc:
        print(f"error: {args.instance}: {exc}", file=sys.stderr)
        return 2
    name = instance_name(args.instance)
    record = make_record(name, summaries, None)
    write_records(out_dir / f"{name}.summary.csv", [record])
    for s in summaries:
        print(f"run {s.run} seed {s.seed}: profit {_num(s.profit)} weight {_num(s.weight)} "
              f"time {s.time:.2f} (%T {s.pct_time:.1f}, %W {s.pct_weight:.1f})")
    print(f"{name}: best {_num(record.best_profit)} mean {record.mean_profit:.2f} over {len(summaries)} runs")
    return 0


# --- validate ----------------------------------------------------------------

def cmd_validate(args) -> int:
    try:
        instance = read_instance(args.instance)
        with open(args.solution, encoding="utf-8") as fh:
            solution = parse_solution(fh.read(), instance)
    except (OSError, InstanceError, SolutionFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    ev = evaluate(solution, instance)
    if ev.violation == MALFORMED:
        print(f"{MALFORMED}: {ev.detail}")
        return 1
    print(f"profit {_num(ev.profit)} weight {_num(ev.weight)} time {ev.time:.6g} "
          f"{'feasible' if ev.feasible else 'infeasible'}")
    if not ev.feasible:
        print(f"infeasible: {ev.violation} ({ev.detail})")
        return 1
    return 0


# --- bench -------------------------------------------------------------------

def read_reference(path) -> dict[str, float]:
    refs = {}
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            refs[instance_name(row["instance"].strip())] = float(row["best_known_profit"])
    return refs


def _bench_one(path: str, params: MmasParams, runs: int, seed: int, out_dir: Path | None,
               config: dict, reference: float | None) -> BenchmarkRecord:
    name = instance_name(path)
    try:
        _, summaries = solve_file(path, params, runs, seed, out_dir, config)
    except Exception as exc:  # one bad instance must not stop the batch
        return BenchmarkRecord(name, group_of(name), reference=reference, error=f"{type(exc).__name__}: {exc}")
    return make_record(name, summaries, reference)


def group_rows(records: list[BenchmarkRecord]) -> list[list[str]]:
    groups: dict[str, list[BenchmarkRecord]] = {}
    for r in records:
        if not r.error:
            groups.setdefault(r.group, []).append(r)

    def mean(xs):
        return statistics.fmean(xs) if xs else None

    def std(xs):
        return statistics.stdev(xs) if len(xs) > 1 else None

    rows = []
    for g in sorted(groups):
        rs = groups[g]
        ratios = [r.approx_ratio for r in rs if r.approx_ratio is not None]
        best = [r.best_run for r in rs if r.best_run is not None]
        rows.append([g, str(len(rs)), _num(mean(ratios)), _num(std(ratios)),
                     _num(mean([b.D for b in best])), _num(mean([b.pct_time for b in best])),
                     _num(mean([b.pct_weight for b in best]))])
    return rows


def cmd_bench(args) -> int:
    paths = sorted(glob.glob(args.glob))
    if not paths:
        print(f"error: no instance matches {args.glob!r}", file=sys.stderr)
        return 2
    try:
        base = _params_from_args(args)
        config = load_config(args.config)
        refs = read_reference(args.reference) if args.reference else {}
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    runs_dir = out.with_name(out.stem + "_runs")
    runs_dir.mkdir(exist_ok=True)

    jobs = [(p, base, args.runs, args.seed, runs_dir, config, refs.get(instance_name(p))) for p in paths]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_bench_one, *zip(*jobs)))
    else:
        records = [_bench_one(*job) for job in jobs]

    write_records(out, records)
    groups_path = out.with_name(out.stem + "_groups.csv")
    with open(groups_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(GROUP_COLUMNS)
        writer.writerows(group_rows(records))
    failed = sum(1 for r in records if r.error)
    print(f"{len(records)} instances ({failed} failed) -> {out}, {groups_path}")
    return 0


# --- gen ---------------------------------------------------------------------

def cmd_gen(args) -> int:
    try:
        cfg = GenConfig(
            n=args.cities, items_per_city=args.items_per_city,
            profit_range=tuple(args.profit_range), weight_range=tuple(args.weight_range),
            kind=args.kind, capacity=args.capacity, capacity_frac=args.capacity_frac,
            max_time=args.max_time, time_frac=args.time_frac, grid=args.grid, seed=args.seed,
            name=args.name,
        )
        text = serialize_instance(generate(cfg))
    except (ValueError, InstanceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ants", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--ptries", type=int)
    p.add_argument("--config", help="JSON file of per-group parameter overrides keyed by XXX_YY_ZZZ")
    stop = p.add_mutually_exclusive_group()
    stop.add_argument("--budget-seconds", type=float, help="wall-clock budget per run (default ceil(m/10))")
    stop.add_argument("--iterations", type=int, help="iteration cap instead of a wall-clock budget")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thop", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the ant colony solver on one instance")
    p.add_argument("instance")
    _add_run_options(p)
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", help="evaluate a solution file against an instance")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bench", help="solve a batch of instances and aggregate statistics")
    p.add_argument("glob")
    p.add_argument("--reference", help="CSV with columns instance,best_known_profit")
    p.add_argument("--out", default="bench.csv")
    p.add_argument("--jobs", type=int, default=1)
    _add_run_options(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="generate a random CEIL_2D instance")
    p.add_argument("--cities", type=int, default=6)
    p.add_argument("--items-per-city", type=int, default=1)
    p.add_argument("--profit-range", type=int, nargs=2, default=[1, 100], metavar=("LO", "HI"))
    p.add_argument("--weight-range", type=int, nargs=2, default=[1, 100], metavar=("LO", "HI"))
    p.add_argument("--kind", choices=KNAPSACK_TYPES, default="unc")
    cap = p.add_mutually_exclusive_group()
    cap.add_argument("--capacity", type=float)
    cap.add_argument("--capacity-frac", type=float, default=0.5)
    tmax = p.add_mutually_exclusive_group()
    tmax.add_argument("--max-time", type=float)
    tmax.add_argument("--time-frac", type=float, default=0.75)
    p.add_argument("--grid", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--name")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
