"""MAX-MIN Ant System over Hamiltonian paths, coupled with the packing heuristic.

Ants build full paths 1 -> (all interior cities) -> n. Each path is packed,
pruned to the cities where something is stolen, and scored by the cost
``UB + 1 - profit`` so that the usual minimisation machinery of MMAS applies.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from .evaluator import Evaluation, evaluate, prune_tour
from .model import Instance, Solution
from .packing import fractional_kp_ub, pack

COST_TOL = 1e-9


@dataclass
class MmasParams:
    ants: int = 196
    alpha: float = 1.24
    beta: float = 5.46
    rho: float = 0.51
    ptries: int = 1
    time_budget: float | None = None  # seconds; None -> ceil(m / 10)
    max_iterations: int | None = None  # when set, replaces the wall-clock budget
    seed: int = 0
    candidate_list_size: int = 20
    gb_every: int = 25  # global-best deposits on every k-th iteration
    restart_after: int = 250  # iterations without improvement before re-initialising trails
    tau_min_divisor: float = 2.0  # tau_min = tau_max / (divisor * n)
    deposit_on_pruned: bool = True

    def __post_init__(self):
        if self.ants < 1:
            raise ValueError("ants must be positive")
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be non-negative")
        if not 0 < self.rho < 1:
            raise ValueError("rho must lie in (0, 1)")
        if self.ptries < 1:
            raise ValueError("ptries must be positive")
        if self.candidate_list_size < 1:
            raise ValueError("candidate_list_size must be positive")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")

    def budget_for(self, instance: Instance) -> float:
        if self.time_budget is not None:
            return self.time_budget
        return float(math.ceil(instance.m / 10))

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class PheromoneState:
    tau: np.ndarray
    tau_min: float
    tau_max: float
    best_cost: float

    @classmethod
    def initial(cls, n: int, ub: float, params: MmasParams) -> PheromoneState:
        tau_max = 1.0 / (params.rho * (ub + 1.0))
        tau_min = tau_max / (params.tau_min_divisor * n)
        return cls(np.full((n + 1, n + 1), tau_max), tau_min, tau_max, math.inf)

    def set_best_cost(self, cost: float, n: int, params: MmasParams) -> None:
        self.best_cost = cost
        self.tau_max = 1.0 / (params.rho * cost)
        self.tau_min = self.tau_max / (params.tau_min_divisor * n)

    def reset(self) -> None:
        self.tau.fill(self.tau_max)


@dataclass
class IterationStats:
    iteration: int
    elapsed_seconds: float
    iter_best_profit: float
    global_best_profit: float
    tau_min: float
    tau_max: float


@dataclass
class SolveResult:
    solution: Solution
    evaluation: Evaluation
    stats: list[IterationStats] = field(default_factory=list)
    iterations: int = 0
    elapsed: float = 0.0
    upper_bound: float = 0.0


def fitness_cost(profit: float, ub: float) -> float:
    if profit > ub + COST_TOL:
        raise ValueError(f"profit {profit} exceeds the upper bound {ub}")
    return ub + 1.0 - profit


def ant_rng(seed: int, iteration: int, ant: int) -> random.Random:
    """Independent stream per (seed, iteration, ant); a str seed is hashed with SHA-512."""
    return random.Random(f"{seed}:{iteration}:{ant}")


class Colony:
    """Static per-instance construction data: heuristic matrix and candidate lists."""

    def __init__(self, instance: Instance, params: MmasParams):
        self.instance = instance
        self.params = params
        n = instance.n
        d = np.zeros((n + 1, n + 1))
        d[1:, 1:] = instance.dist
        d[d == 0] = 1.0  # coincident cities
        self.eta_beta = (1.0 / d) ** params.beta
        interior = list(range(2, n))
        self.interior = interior
        k = min(params.candidate_list_size, len(interior))
        self.candidates: list[list[int]] = [[] for _ in range(n + 1)]
        for i in range(1, n):
            others = sorted((c for c in interior if c != i), key=lambda c: (instance.d[i][c], c))
            self.candidates[i] = others[:k]
        self.choice: list[list[float]] = []

    def refresh_choice(self, state: PheromoneState) -> None:
        self.choice = (state.tau ** self.params.alpha * self.eta_beta).tolist()

    def construct(self, rng: random.Random) -> tuple[int, ...]:
        n = self.instance.n
        if n <= 3:
            return tuple(range(1, n + 1))
        visited = [False] * (n + 1)
        tour = [1]
        cur = 1
        for _ in range(n - 2):
            row = self.choice[cur]
            options = [c for c in self.candidates[cur] if not visited[c]]
            if not options:
                options = [c for c in self.interior if not visited[c] and c != cur]
            cur = _roulette(options, row, rng)
            visited[cur] = True
            tour.append(cur)
        tour.append(n)
        return tuple(tour)


def _roulette(options: Sequence[int], row: Sequence[float], rng: random.Random) -> int:
    if len(options) == 1:
        return options[0]
    weights = [row[c] for c in options]
    total = math.fsum(weights)
    if not total > 0 or math.isinf(total):
        return options[int(rng.random() * len(options))]
    r = rng.random() * total
    acc = 0.0
    for c, w in zip(options, weights):
        acc += w
        if r < acc:
            return c
    return options[-1]


def construct_tour(state: PheromoneState, params: MmasParams, rng: random.Random,
                   instance: Instance) -> tuple[int, ...]:
    colony = Colony(instance, params)
    colony.refresh_choice(state)
    return colony.construct(rng)


def update_pheromone(state: PheromoneState, tour: Sequence[int], cost: float,
                     params: MmasParams, n: int | None = None) -> PheromoneState:
    """Evaporate, deposit ``1/cost`` along ``tour`` and clamp to the MMAS bounds."""
    n = state.tau.shape[0] - 1 if n is None else n
    if cost < state.best_cost:
        state.set_best_cost(cost, n, params)
    tau = state.tau
    tau *= 1.0 - params.rho
    delta = 1.0 / cost
    for a, b in zip(tour, tour[1:]):
        tau[a, b] += delta
        tau[b, a] = tau[a, b]
    np.clip(tau, state.tau_min, state.tau_max, out=tau)
    return state


def solve(instance: Instance, params: MmasParams | None = None,
          callback: Callable[[IterationStats, PheromoneState], None] | None = None) -> SolveResult:
    params = params or MmasParams()
    n = instance.n
    fallback = Solution((1, n), ())
    ub = fractional_kp_ub(instance)
    start = time.perf_counter()
    if n == 2:
        return SolveResult(fallback, evaluate(fallback, instance), upper_bound=ub)

    budget = params.budget_for(instance)
    profits = instance.profits
    colony = Colony(instance, params)
    state = PheromoneState.initial(n, ub, params)

    best_tour: tuple[int, ...] = (1, n)
    best_plan: set[int] = set()
    best_profit = 0.0
    best_deposit: tuple[int, ...] = (1, n)
    since_improvement = 0
    stats: list[IterationStats] = []
    iteration = 0

    while True:
        iteration += 1
        colony.refresh_choice(state)
        it_profit, it_deposit = -1.0, (1, n)
        improved = False
        for ant in range(params.ants):
            rng = ant_rng(params.seed, iteration, ant)
            tour = colony.construct(rng)
            plan = pack(tour, params.ptries, rng, instance)
            profit = sum(profits[i] for i in plan)
            pruned = prune_tour(tour, plan, instance)
            deposit = pruned if params.deposit_on_pruned else tour
            if profit > it_profit:
                it_profit, it_deposit = profit, deposit
            if profit > best_profit:
                best_profit, best_tour, best_plan = profit, pruned, plan
                best_deposit = deposit
                improved = True

        if iteration == 1:
            # trails start at tau_max computed from the first iteration's best
            state.set_best_cost(fitness_cost(it_profit, ub), n, params)
            state.reset()
        since_improvement = 0 if improved else since_improvement + 1

        if params.gb_every and iteration % params.gb_every == 0:
            update_pheromone(state, best_deposit, fitness_cost(best_profit, ub), params, n)
        else:
            update_pheromone(state, it_deposit, fitness_cost(it_profit, ub), params, n)
        if params.restart_after and since_improvement >= params.restart_after:
            state.reset()
            since_improvement = 0

        elapsed = time.perf_counter() - start
        record = IterationStats(iteration, elapsed, it_profit, best_profit, state.tau_min, state.tau_max)
        stats.append(record)
        if callback is not None:
            callback(record, state)
        if params.max_iterations is not None:
            if iteration >= params.max_iterations:
                break
        elif elapsed >= budget:
            break

    solution = Solution(best_tour, best_plan)
    return SolveResult(solution, evaluate(solution, instance), stats, iteration,
                       time.perf_counter() - start, ub)
