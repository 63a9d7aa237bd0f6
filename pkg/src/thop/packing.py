"""Randomized multi-try greedy packing for a fixed tour, and the fractional knapsack bound."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .evaluator import route_time
from .model import Instance

WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class ScoreWeights:
    """Exponents on profit, weight and carried distance."""

    theta: float
    delta: float
    gamma: float

    def __post_init__(self):
        if min(self.theta, self.delta, self.gamma) < 0:
            raise ValueError("score exponents must be non-negative")
        if abs(self.theta + self.delta + self.gamma - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError("score exponents must sum to 1")

    @classmethod
    def from_raw(cls, a: float, b: float, c: float) -> ScoreWeights:
        s = a + b + c
        return cls(a / s, b / s, c / s)


def draw_weights(rng: random.Random) -> ScoreWeights:
    while True:
        a, b, c = rng.random(), rng.random(), rng.random()
        if max(a, b, c) >= WEIGHT_SUM_TOL:
            return ScoreWeights.from_raw(a, b, c)


def suffix_distances(tour: Sequence[int], instance: Instance) -> dict[int, int]:
    """Distance still to travel from each city of ``tour`` to its last city."""
    d = instance.d
    out = {tour[-1]: 0}
    acc = 0
    for k in range(len(tour) - 2, -1, -1):
        acc += d[tour[k]][tour[k + 1]]
        out[tour[k]] = acc
    return out


def suffix_distance(item_id: int, tour: Sequence[int], instance: Instance) -> int:
    city = instance.items[item_id - 1].city
    suffix = suffix_distances(tour, instance)
    if city not in suffix:
        raise ValueError(f"item {item_id} is at city {city}, which is not on the tour")
    return suffix[city]


def score(profit: float, weight: float, dist: float, w: ScoreWeights) -> float:
    return profit ** w.theta / (weight ** w.delta * dist ** w.gamma)


def _ranked_items(tour: Sequence[int], w: ScoreWeights, instance: Instance,
                  suffix: dict[int, int]) -> list[int]:
    profits, weights = instance.profits, instance.weights
    scored = []
    for c in tour[1:-1]:
        # coincident cities give a zero carried distance; score it as 1
        dc = max(suffix[c], 1)
        for i in instance.items_at[c]:
            scored.append((-score(profits[i], weights[i], dc, w), i))
    scored.sort()
    return [i for _, i in scored]


def greedy_pack_once(tour: Sequence[int], weights: ScoreWeights, instance: Instance,
                     suffix: dict[int, int] | None = None) -> set[int]:
    """One greedy pass in decreasing score order; the result is always feasible."""
    if suffix is None:
        suffix = suffix_distances(tour, instance)
    capacity, max_time = instance.capacity, instance.max_time
    item_w = instance.weights
    city_of = [0] + [it.city for it in instance.items]
    first, last = tour[0], tour[-1]

    picked = [0] * (instance.n + 1)
    count = [0] * (instance.n + 1)
    chosen: set[int] = set()
    total = 0
    for i in _ranked_items(tour, weights, instance, suffix):
        wi = item_w[i]
        if total + wi > capacity:
            continue
        c = city_of[i]
        old = picked[c]
        picked[c] = old + wi
        count[c] += 1
        route = [x for x in tour if x == first or x == last or count[x]]
        if route_time(route, picked, instance) > max_time:
            picked[c] = old
            count[c] -= 1
            continue
        total += wi
        chosen.add(i)
    return chosen


def pack(tour: Sequence[int], ptries: int, rng: random.Random, instance: Instance) -> set[int]:
    """Best of ``ptries`` greedy passes, each with freshly drawn score exponents."""
    if ptries < 1:
        raise ValueError("ptries must be at least 1")
    suffix = suffix_distances(tour, instance)
    profits = instance.profits
    best: set[int] = set()
    best_profit = -1.0
    for _ in range(ptries):
        plan = greedy_pack_once(tour, draw_weights(rng), instance, suffix)
        p = sum(profits[i] for i in plan)
        if p > best_profit:
            best, best_profit = plan, p
    return best


def fractional_kp_ub(instance: Instance, items=None, capacity: float | None = None) -> float:
    """Optimum of the knapsack relaxation that allows fractions of items."""
    items = instance.items if items is None else items
    room = instance.capacity if capacity is None else capacity
    bound = 0.0
    for it in sorted(items, key=lambda it: (-it.profit / it.weight, it.id)):
        if room <= 0:
            break
        if it.weight <= room:
            bound += it.profit
            room -= it.weight
        else:
            bound += it.profit * room / it.weight
            room = 0
    return bound
