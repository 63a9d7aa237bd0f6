"""Exact evaluation of ThOP solutions and the tour-pruning map."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import Instance, Solution

TIME_TOL = 1e-9

NONE = "none"
OVERWEIGHT = "overweight"
OVERTIME = "overtime"
MALFORMED = "malformed-tour"


@dataclass(frozen=True)
class Evaluation:
    profit: float
    weight: float
    time: float
    feasible: bool
    violation: str = NONE
    detail: str = ""


def route_time(route: Sequence[int], picked: dict[int, float] | Sequence[float], instance: Instance) -> float:
    """Travel time along ``route`` when ``picked[c]`` weight is collected at city c.

    Items are loaded before leaving a city. The caller guarantees the total
    picked weight does not exceed the capacity. Every timing path in the
    package goes through here so results agree bit for bit.
    """
    d = instance.d
    v_max = instance.v_max
    nu = (instance.v_max - instance.v_min) / instance.capacity
    is_map = isinstance(picked, dict)
    w = 0
    t = 0.0
    prev = route[0]
    for c in route[1:]:
        w += picked.get(prev, 0) if is_map else picked[prev]
        t += d[prev][c] / (v_max - w * nu)
        prev = c
    return t


def _tour_problem(tour: Sequence[int], plan: Iterable[int], instance: Instance) -> str | None:
    n = instance.n
    if len(tour) < 2 or tour[0] != 1 or tour[-1] != n:
        return f"tour must start at city 1 and end at city {n}"
    for c in tour:
        if not 1 <= c <= n:
            return f"city {c} out of range 1..{n}"
    if len(set(tour)) != len(tour):
        return "tour repeats a city"
    on_tour = set(tour)
    for i in sorted(plan):
        if not 1 <= i <= instance.m:
            return f"item {i} does not exist"
        city = instance.items[i - 1].city
        if city not in on_tour:
            return f"item {i} at unvisited city {city}"
    return None


def evaluate(solution: Solution, instance: Instance) -> Evaluation:
    tour, plan = solution.tour, solution.plan
    if not tour:
        raise ValueError("empty tour")
    problem = _tour_problem(tour, plan, instance)
    if problem is not None:
        return Evaluation(0, 0, float("nan"), False, MALFORMED, problem)

    profit = sum(instance.profits[i] for i in plan)
    weight = sum(instance.weights[i] for i in plan)
    if weight > instance.capacity:
        return Evaluation(profit, weight, float("inf"), False, OVERWEIGHT,
                          f"weight {weight} > capacity {instance.capacity}")

    picked: dict[int, float] = {}
    for i in plan:
        c = instance.items[i - 1].city
        picked[c] = picked.get(c, 0) + instance.weights[i]
    t = route_time(tour, picked, instance)
    if t > instance.max_time + TIME_TOL:
        return Evaluation(profit, weight, t, False, OVERTIME, f"{t:.2f} > {instance.max_time:g}")
    return Evaluation(profit, weight, t, True)


def prune_tour(tour: Sequence[int], plan: Iterable[int], instance: Instance) -> tuple[int, ...]:
    """Keep the endpoints and every city where something is stolen, in tour order."""
    used = {instance.items[i - 1].city for i in plan}
    first, last = 1, instance.n
    return tuple(c for c in tour if c == first or c == last or c in used)


def tour_length(tour: Sequence[int], instance: Instance) -> int:
    d = instance.d
    return sum(d[a][b] for a, b in zip(tour, tour[1:]))


# --- solution files ----------------------------------------------------------

class SolutionFormatError(ValueError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


_BRACKETED = re.compile(r"^\[(.*)\]$")


def _parse_list(text: str, line: int) -> list[int]:
    match = _BRACKETED.match(text.strip())
    if match is None:
        raise SolutionFormatError(f"expected a bracketed list like [2 3], got {text.strip()!r}", line)
    body = match.group(1).replace(",", " ").split()
    try:
        return [int(tok) for tok in body]
    except ValueError:
        raise SolutionFormatError(f"non-integer entry in {text.strip()!r}", line) from None


def parse_solution(text: str, instance: Instance) -> Solution:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) != 2:
        raise SolutionFormatError(f"expected 2 non-empty lines, got {len(lines)}", max(len(lines), 1))
    interior = _parse_list(lines[0], 1)
    plan = _parse_list(lines[1], 2)
    if len(set(plan)) != len(plan):
        raise SolutionFormatError("item listed twice", 2)
    return Solution([1, *interior, instance.n], plan)


def format_solution(solution: Solution) -> str:
    interior = " ".join(str(c) for c in solution.tour[1:-1])
    items = " ".join(str(i) for i in sorted(solution.plan))
    return f"[{interior}]\n[{items}]\n"
