"""Compare the ant colony heuristic with the exact oracle on random tiny instances.

Writes one CSV row per instance and prints the hit rate.
"""

import argparse
import csv
import random
import sys
import time

from thop.generate import GenConfig, generate
from thop.mmas import MmasParams, solve
from thop.oracle import solve_exact
from thop.packing import fractional_kp_ub


def tiny_config(seed, max_n, max_m):
    r = random.Random(seed)
    n = r.randint(4, max_n)
    ipc = r.randint(1, 3)
    while ipc * (n - 2) > max_m:
        ipc -= 1
    return GenConfig(n=n, items_per_city=ipc, kind=r.choice(["unc", "bsc", "usw"]), seed=seed,
                     capacity_frac=r.uniform(0.2, 0.9), time_frac=r.uniform(0.3, 1.2))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=50)
    ap.add_argument("--budget", type=float, default=0.2, help="seconds per heuristic run")
    ap.add_argument("--ptries", type=int, default=1)
    ap.add_argument("--max-n", type=int, default=8)
    ap.add_argument("--max-m", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)

    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = csv.writer(out)
    writer.writerow(["instance", "n", "m", "upper_bound", "oracle", "heuristic", "gap", "oracle_seconds"])
    hits = 0
    for k in range(args.instances):
        inst = generate(tiny_config(args.seed + k, args.max_n, args.max_m))
        t0 = time.perf_counter()
        exact = solve_exact(inst)
        t_exact = time.perf_counter() - t0
        res = solve(inst, MmasParams(time_budget=args.budget, ptries=args.ptries, seed=args.seed + k))
        got = res.evaluation.profit if res.evaluation.feasible else 0
        hits += got == exact.profit
        writer.writerow([inst.name, inst.n, inst.m, f"{fractional_kp_ub(inst):.4f}", exact.profit, got,
                         exact.profit - got, f"{t_exact:.4f}"])
    if out is not sys.stdout:
        out.close()
    print(f"optimal on {hits}/{args.instances} instances", file=sys.stderr)


if __name__ == "__main__":
    main()
