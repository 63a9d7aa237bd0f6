"""Exhaustive exact solver for tiny instances.

Depth-first enumeration over routes 1 -> S -> n and, at each city entered,
over every subset of its items. Two cuts are always exact: a branch stops
once its partial time or weight is already over the limit, because extending
a route never decreases either. The optional ``bound`` cut drops a branch
when its profit plus the fractional knapsack bound of the items still
reachable cannot reach the incumbent.
"""

from __future__ import annotations

from dataclasses import dataclass

from .evaluator import TIME_TOL, evaluate
from .model import Instance, Solution
from .packing import fractional_kp_ub

MAX_CITIES = 10
MAX_ITEMS = 14


class OracleSizeError(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    profit: float
    solution: Solution | None  # None when not even the direct journey fits in T
    feasible_count: int
    time: float = float("nan")


def solve_exact(instance: Instance, max_n: int = MAX_CITIES, max_m: int = MAX_ITEMS,
                bound: bool = True, pruned_only: bool = False) -> OracleResult:
    """Maximum-profit feasible solution by enumeration.

    Ties on profit go to the shorter travel time, then to the first solution
    met in enumeration order (cities ascending, item subsets in binary order).
    ``pruned_only`` skips visiting a city without stealing there.
    """
    n, m = instance.n, instance.m
    if n > max_n or m > max_m:
        raise OracleSizeError(f"instance too large for exhaustive search: n={n} (max {max_n}), m={m} (max {max_m})")

    d = instance.d
    W, T = instance.capacity, instance.max_time + TIME_TOL
    v_max = instance.v_max
    nu = (instance.v_max - instance.v_min) / instance.capacity
    profits, weights = instance.profits, instance.weights

    # every subset of each city's items, as (ids, weight, profit), in binary order
    subsets: list[list[tuple[tuple[int, ...], float, float]]] = [[] for _ in range(n + 1)]
    for c in range(2, n):
        ids = instance.items_at[c]
        start = 1 if pruned_only else 0
        for mask in range(start, 1 << len(ids)):
            chosen = tuple(ids[k] for k in range(len(ids)) if mask >> k & 1)
            subsets[c].append((chosen, sum(weights[i] for i in chosen), sum(profits[i] for i in chosen)))

    best = {"profit": -1.0, "time": float("inf"), "route": None, "plan": None}
    count = 0
    visited = [False] * (n + 1)
    route = [1]
    plan: list[int] = []

    def remaining_bound(room: float) -> float:
        rest = [it for it in instance.items if not visited[it.city]]
        return fractional_kp_ub(instance, rest, room)

    def dfs(cur: int, t: float, w: float, p: float) -> None:
        nonlocal count
        v = v_max - w * nu
        t_end = t + d[cur][n] / v
        if t_end <= T:
            count += 1
            if p > best["profit"] or (p == best["profit"] and t_end < best["time"]):
                best.update(profit=p, time=t_end, route=tuple(route) + (n,), plan=tuple(plan))
        if bound and p + remaining_bound(W - w) < best["profit"]:
            return
        for c in range(2, n):
            if visited[c]:
                continue
            t2 = t + d[cur][c] / v
            if t2 > T:
                continue
            visited[c] = True
            route.append(c)
            for chosen, sw, sp in subsets[c]:
                if w + sw > W:
                    continue
                plan.extend(chosen)
                dfs(c, t2, w + sw, p + sp)
                del plan[len(plan) - len(chosen):]
            route.pop()
            visited[c] = False

    visited[1] = True
    dfs(1, 0.0, 0, 0)
    if best["route"] is None:
        return OracleResult(0, None, 0)
    solution = Solution(best["route"], best["plan"])
    check = evaluate(solution, instance)
    assert check.feasible and check.profit == best["profit"], "oracle witness failed re-evaluation"
    return OracleResult(best["profit"], solution, count, check.time)
