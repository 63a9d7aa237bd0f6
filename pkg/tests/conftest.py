import itertools
import random
from pathlib import Path

import hypothesis
import numpy as np
import pytest

from thop.evaluator import evaluate
from thop.generate import GenConfig, generate
from thop.model import Instance, Item, Solution, read_instance

hypothesis.settings.register_profile("ci", deadline=None, max_examples=100)
hypothesis.settings.load_profile("ci")

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def fig1():
    return read_instance(FIXTURES / "fourcity.thop")


@pytest.fixture(scope="session")
def fig1_t20(fig1):
    return fig1.with_max_time(20)


def brute_force(instance: Instance):
    """Best profit by evaluating every (route, item subset) pair. Tiny instances only."""
    interior = list(range(2, instance.n))
    best = None
    for k in range(len(interior) + 1):
        for cities in itertools.combinations(interior, k):
            ids = [it.id for it in instance.items if it.city in cities]
            for perm in itertools.permutations(cities):
                tour = (1, *perm, instance.n)
                for r in range(len(ids) + 1):
                    for plan in itertools.combinations(ids, r):
                        ev = evaluate(Solution(tour, plan), instance)
                        if ev.feasible and (best is None or ev.profit > best):
                            best = ev.profit
    return best


def random_tiny_config(k: int, max_n: int = 8, max_m: int = 10) -> GenConfig:
    r = random.Random(k)
    n = r.randint(2, max_n)
    ipc = r.randint(1, 3) if n > 2 else 0
    while ipc * (n - 2) > max_m:
        ipc -= 1
    return GenConfig(n=n, items_per_city=ipc, kind=r.choice(["unc", "bsc", "usw"]), seed=k,
                     capacity_frac=r.uniform(0.2, 0.9), time_frac=r.uniform(0.2, 1.2))


def random_tiny(k: int, max_n: int = 8, max_m: int = 10) -> Instance:
    return generate(random_tiny_config(k, max_n, max_m))


def random_metric_explicit(k: int, n: int = 6, m: int = 6) -> Instance:
    """EXPLICIT instance whose matrix is the shortest-path closure of random weights, hence metric."""
    r = np.random.default_rng(k)
    a = r.integers(1, 30, size=(n, n))
    a = np.minimum(a, a.T)
    np.fill_diagonal(a, 0)
    for via in range(n):
        a = np.minimum(a, a[:, [via]] + a[[via], :])
    items = []
    if n > 2:
        for i in range(m):
            items.append(Item(i + 1, int(r.integers(1, 50)), int(r.integers(1, 20)), int(r.integers(2, n))))
    total_w = sum(it.weight for it in items) or 1
    return Instance(f"metric{k}", n, tuple(items), max(1, total_w // 2), float(a.sum() / n),
                    0.1, 1.0, a)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    def _report(criterion: int, title: str, passed: bool, detail: str = "") -> None:
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {title}" + (f" | {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
