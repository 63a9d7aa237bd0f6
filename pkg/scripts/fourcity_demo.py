"""Evaluate the hand-worked traces on the four-city fixture and print the exact optima."""

import argparse
from pathlib import Path

from thop.evaluator import evaluate
from thop.model import Solution, read_instance
from thop.oracle import solve_exact

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "fourcity.thop"

TRACES = [
    (None, (1, 2, 3, 4), {1, 4}),
    (None, (1, 3, 2, 4), {1, 4}),
    (None, (1, 3, 4), {3}),
    (20, (1, 3, 4), {4, 5}),
]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("instance", nargs="?", default=str(FIXTURE))
    args = ap.parse_args(argv)
    base = read_instance(args.instance)

    for max_time, tour, plan in TRACES:
        inst = base if max_time is None else base.with_max_time(max_time)
        ev = evaluate(Solution(tour, plan), inst)
        status = "feasible" if ev.feasible else f"infeasible ({ev.violation})"
        print(f"T={inst.max_time:g} tour={tour} plan={sorted(plan)}: "
              f"time={ev.time:.6f} profit={ev.profit:g} weight={ev.weight:g} {status}")

    for max_time in (base.max_time, 20):
        res = solve_exact(base.with_max_time(max_time))
        sol = res.solution
        where = f"tour={sol.tour} plan={sorted(sol.plan)}" if sol else "no feasible solution"
        print(f"optimum at T={max_time:g}: profit={res.profit:g} {where} "
              f"time={res.time:g} ({res.feasible_count} feasible leaves)")


if __name__ == "__main__":
    main()
