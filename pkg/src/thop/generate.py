"""Random CEIL_2D instances, small enough for the exact oracle when asked."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Instance, Item, ceil_2d_matrix

KNAPSACK_TYPES = ("unc", "bsc", "usw")


@dataclass
class GenConfig:
    n: int = 6
    items_per_city: int = 1
    profit_range: tuple[int, int] = (1, 100)
    weight_range: tuple[int, int] = (1, 100)
    kind: str = "unc"
    capacity: float | None = None
    capacity_frac: float = 0.5  # of the total item weight, when capacity is None
    max_time: float | None = None
    time_frac: float = 0.75  # of the nearest-neighbour path time, when max_time is None
    grid: int = 100
    v_min: float = 0.1
    v_max: float = 1.0
    seed: int = 0
    name: str | None = None

    def __post_init__(self):
        lo, hi = self.profit_range
        if not 0 < lo <= hi:
            raise ValueError(f"invalid profit range {self.profit_range}")
        lo, hi = self.weight_range
        if not 0 < lo <= hi:
            raise ValueError(f"invalid weight range {self.weight_range}")
        if self.n < 2:
            raise ValueError("need at least 2 cities")
        if self.items_per_city < 0:
            raise ValueError("items_per_city must be non-negative")
        if self.kind not in KNAPSACK_TYPES:
            raise ValueError(f"kind must be one of {KNAPSACK_TYPES}")
        if self.grid < 1 or not 0 < self.v_min <= self.v_max:
            raise ValueError("invalid grid or speed range")
        if self.capacity_frac <= 0 or self.time_frac <= 0:
            raise ValueError("capacity_frac and time_frac must be positive")


def _nearest_neighbour_length(dist: np.ndarray) -> int:
    n = len(dist)
    left = set(range(1, n - 1))
    cur, length = 0, 0
    while left:
        nxt = min(left, key=lambda c: (dist[cur, c], c))
        length += int(dist[cur, nxt])
        left.remove(nxt)
        cur = nxt
    return length + int(dist[cur, n - 1])


def generate(cfg: GenConfig) -> Instance:
    rng = np.random.default_rng(cfg.seed)
    coords = rng.integers(0, cfg.grid + 1, size=(cfg.n, 2))
    dist = ceil_2d_matrix(coords)

    items = []
    (plo, phi), (wlo, whi) = cfg.profit_range, cfg.weight_range
    for city in range(2, cfg.n):
        for _ in range(cfg.items_per_city):
            if cfg.kind == "unc":
                w = int(rng.integers(wlo, whi + 1))
                p = int(rng.integers(plo, phi + 1))
            elif cfg.kind == "bsc":
                w = int(rng.integers(wlo, whi + 1))
                p = w + max(1, whi // 10)
            else:
                w = int(rng.integers(wlo, min(whi, wlo + max(1, (whi - wlo) // 100)) + 1))
                p = int(rng.integers(plo, phi + 1))
            items.append(Item(len(items) + 1, p, w, city))

    capacity = cfg.capacity
    if capacity is None:
        capacity = max(1, math.ceil(cfg.capacity_frac * sum(it.weight for it in items)))
    max_time = cfg.max_time
    if max_time is None:
        mean_speed = (cfg.v_min + cfg.v_max) / 2
        max_time = max(1, math.ceil(cfg.time_frac * _nearest_neighbour_length(dist) / mean_speed))
    name = cfg.name or f"gen{cfg.n}_{cfg.items_per_city:02d}_{cfg.kind}_s{cfg.seed}"
    return Instance(name, cfg.n, tuple(items), capacity, max_time, cfg.v_min, cfg.v_max,
                    dist, coords.astype(float))
