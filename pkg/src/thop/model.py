"""Problem data for the Thief Orienteering Problem.

Cities are numbered 1..n in every public API: city 1 is where the thief
starts and city n is where the journey must end. Items sit only on the
interior cities 2..n-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

EDGE_CEIL_2D = "CEIL_2D"
EDGE_EXPLICIT = "EXPLICIT"


class InstanceError(ValueError):
    """Raised for malformed instance text or inconsistent instance data."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapacityError(ValueError):
    """Speed was requested for a knapsack heavier than its capacity."""


@dataclass(frozen=True)
class Item:
    id: int
    profit: float
    weight: float
    city: int


@dataclass(frozen=True)
class Solution:
    tour: tuple[int, ...]
    plan: frozenset[int] = frozenset()

    def __init__(self, tour: Sequence[int], plan=()):
        object.__setattr__(self, "tour", tuple(int(c) for c in tour))
        object.__setattr__(self, "plan", frozenset(int(i) for i in plan))


@dataclass(frozen=True, eq=False)
class Instance:
    name: str
    n: int
    items: tuple[Item, ...]
    capacity: float
    max_time: float
    v_min: float
    v_max: float
    dist: np.ndarray
    coords: np.ndarray | None = None
    extra: tuple[tuple[str, str], ...] = field(default=())

    def __post_init__(self):
        dist = np.asarray(self.dist, dtype=np.int64)
        dist.setflags(write=False)
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "items", tuple(self.items))
        if self.coords is not None:
            coords = np.asarray(self.coords, dtype=float)
            coords.setflags(write=False)
            object.__setattr__(self, "coords", coords)
        self.validate()

    @property
    def m(self) -> int:
        return len(self.items)

    @property
    def edge_weight_type(self) -> str:
        return EDGE_EXPLICIT if self.coords is None else EDGE_CEIL_2D

    def validate(self) -> None:
        if self.n < 2:
            raise InstanceError(f"need at least 2 cities, got {self.n}")
        if self.dist.shape != (self.n, self.n):
            raise InstanceError(f"distance matrix shape {self.dist.shape} does not match n={self.n}")
        if (self.dist < 0).any():
            raise InstanceError("negative distance")
        if (np.diag(self.dist) != 0).any():
            raise InstanceError("distance matrix diagonal must be zero")
        if (self.dist != self.dist.T).any():
            raise InstanceError("distance matrix must be symmetric")
        if self.coords is not None and self.coords.shape != (self.n, 2):
            raise InstanceError(f"coordinate array shape {self.coords.shape} does not match n={self.n}")
        if not 0 < self.v_min <= self.v_max:
            raise InstanceError(f"speeds must satisfy 0 < v_min <= v_max, got {self.v_min}, {self.v_max}")
        if self.capacity <= 0:
            raise InstanceError(f"capacity must be positive, got {self.capacity}")
        if self.max_time <= 0:
            raise InstanceError(f"max time must be positive, got {self.max_time}")
        for k, item in enumerate(self.items, start=1):
            if item.id != k:
                raise InstanceError(f"item ids must be 1..m in order, found {item.id} at position {k}")
            if item.profit <= 0 or item.weight <= 0:
                raise InstanceError(f"item {item.id}: profit and weight must be positive")
            if not 2 <= item.city <= self.n - 1:
                raise InstanceError(
                    f"item {item.id}: assigned to city {item.city}, items must lie on cities 2..{self.n - 1}"
                )

    # Hot-path views. Lists beat numpy for scalar indexing in the solver loops.

    @cached_property
    def d(self) -> list[list[int]]:
        """Distance table padded so that ``d[a][b]`` takes 1-based cities."""
        rows = [[0] * (self.n + 1)]
        for r in self.dist.tolist():
            rows.append([0] + r)
        return rows

    @cached_property
    def items_at(self) -> list[list[int]]:
        """Item ids per 1-based city."""
        at: list[list[int]] = [[] for _ in range(self.n + 1)]
        for item in self.items:
            at[item.city].append(item.id)
        return at

    @cached_property
    def profits(self) -> list[float]:
        return [0] + [it.profit for it in self.items]

    @cached_property
    def weights(self) -> list[float]:
        return [0] + [it.weight for it in self.items]

    def with_max_time(self, max_time: float) -> Instance:
        return Instance(self.name, self.n, self.items, self.capacity, max_time,
                        self.v_min, self.v_max, self.dist, self.coords, self.extra)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        same_coords = (self.coords is None and other.coords is None) or (
            self.coords is not None and other.coords is not None
            and np.array_equal(self.coords, other.coords))
        return (self.name == other.name and self.n == other.n and self.items == other.items
                and self.capacity == other.capacity and self.max_time == other.max_time
                and self.v_min == other.v_min and self.v_max == other.v_max
                and np.array_equal(self.dist, other.dist) and same_coords
                and self.extra == other.extra)

    __hash__ = None


def ceil_2d_matrix(coords) -> np.ndarray:
    coords = np.asarray(coords, dtype=float)
    n = len(coords)
    out = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(a + 1, n):
            dx = coords[a, 0] - coords[b, 0]
            dy = coords[a, 1] - coords[b, 1]
            out[a, b] = out[b, a] = math.ceil(math.hypot(dx, dy))
    return out


def distance(a: int, b: int, instance: Instance) -> int:
    """Integer distance between 1-based cities ``a`` and ``b``."""
    n = instance.n
    if not (1 <= a <= n and 1 <= b <= n):
        raise IndexError(f"city index out of range 1..{n}: ({a}, {b})")
    return int(instance.dist[a - 1, b - 1])


def speed(weight: float, instance: Instance) -> float:
    if weight > instance.capacity:
        raise CapacityError(f"knapsack weight {weight} exceeds capacity {instance.capacity}")
    return instance.v_max - weight * (instance.v_max - instance.v_min) / instance.capacity


# --- text format -----------------------------------------------------------

_HEADER_KEYS = {
    "PROBLEM NAME": "name",
    "DIMENSION": "n",
    "NUMBER OF ITEMS": "m",
    "CAPACITY OF KNAPSACK": "capacity",
    "MAX TIME": "max_time",
    "MIN SPEED": "v_min",
    "MAX SPEED": "v_max",
    "EDGE_WEIGHT_TYPE": "edge_type",
}
_REQUIRED = ("n", "m", "capacity", "max_time", "v_min", "v_max", "edge_type")

NODE_COORD_HEADER = "NODE_COORD_SECTION (INDEX, X, Y):"
EDGE_WEIGHT_HEADER = "EDGE_WEIGHT_SECTION:"
ITEMS_HEADER = "ITEMS SECTION (INDEX, PROFIT, WEIGHT, ASSIGNED NODE NUMBER):"


def _number(token: str, line: int, what: str) -> float | int:
    try:
        value = float(token)
    except ValueError:
        raise InstanceError(f"{what}: expected a number, got {token!r}", line) from None
    if not math.isfinite(value):
        raise InstanceError(f"{what}: non-finite value {token!r}", line)
    return int(value) if value.is_integer() and "." not in token and "e" not in token.lower() else value


def _integer(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise InstanceError(f"{what}: expected an integer, got {token!r}", line) from None


def fmt_number(x) -> str:
    """Shortest text that parses back to the same value."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def parse_instance(text: str) -> Instance:
    lines = text.splitlines()
    header: dict[str, object] = {}
    extra: list[tuple[str, str]] = []
    coords = None
    matrix = None
    items: list[Item] | None = None
    i = 0

    def take_rows(count: int, width: int, start: int, what: str) -> list[tuple[int, list[str]]]:
        rows = []
        j = start
        while len(rows) < count:
            if j >= len(lines):
                raise InstanceError(f"{what}: expected {count} rows, found {len(rows)}", j)
            toks = lines[j].split()
            j += 1
            if not toks:
                continue
            if len(toks) != width:
                raise InstanceError(f"{what}: expected {width} fields, got {len(toks)}", j)
            rows.append((j, toks))
        return rows

    def need(*keys: str) -> None:
        for key in keys:
            if key not in header:
                raise InstanceError(f"section appears before required header {key!r}", i + 1)

    while i < len(lines):
        raw = lines[i]
        stripped = raw.strip()
        lineno = i + 1
        i += 1
        if not stripped:
            continue
        upper = stripped.upper()
        if upper.startswith("NODE_COORD_SECTION"):
            need("n")
            n = header["n"]
            rows = take_rows(n, 3, i, "NODE_COORD_SECTION")
            coords = np.zeros((n, 2))
            for k, (ln, toks) in enumerate(rows, start=1):
                if _integer(toks[0], ln, "node index") != k:
                    raise InstanceError(f"node index {toks[0]} out of order, expected {k}", ln)
                coords[k - 1] = (_number(toks[1], ln, "x"), _number(toks[2], ln, "y"))
            i = rows[-1][0] if rows else i
            continue
        if upper.startswith("EDGE_WEIGHT_SECTION"):
            need("n")
            n = header["n"]
            rows = take_rows(n, n, i, "EDGE_WEIGHT_SECTION")
            matrix = np.array([[_integer(t, ln, "edge weight") for t in toks] for ln, toks in rows],
                              dtype=np.int64).reshape(n, n)
            i = rows[-1][0] if rows else i
            continue
        if upper.startswith("ITEMS SECTION"):
            need("m")
            m = header["m"]
            rows = take_rows(m, 4, i, "ITEMS SECTION")
            items = []
            for k, (ln, toks) in enumerate(rows, start=1):
                idx = _integer(toks[0], ln, "item index")
                if idx != k:
                    raise InstanceError(f"item index {idx} out of order, expected {k}", ln)
                profit = _number(toks[1], ln, "profit")
                weight = _number(toks[2], ln, "weight")
                city = _integer(toks[3], ln, "assigned node")
                if "n" in header and not 2 <= city <= header["n"] - 1:
                    raise InstanceError(
                        f"item {idx} assigned to city {city}; items must lie on cities 2..{header['n'] - 1}", ln)
                if profit <= 0 or weight <= 0:
                    raise InstanceError(f"item {idx}: profit and weight must be positive", ln)
                items.append(Item(idx, profit, weight, city))
            i = rows[-1][0] if rows else i
            continue
        if ":" not in stripped:
            raise InstanceError(f"unrecognized line {stripped!r}", lineno)
        key, _, value = stripped.partition(":")
        key = " ".join(key.split()).upper()
        value = value.strip()
        attr = _HEADER_KEYS.get(key)
        if attr is None:
            extra.append((" ".join(stripped.partition(":")[0].split()), value))
            continue
        if attr in header:
            raise InstanceError(f"duplicate header {key!r}", lineno)
        if attr == "name":
            header[attr] = value
        elif attr in ("n", "m"):
            header[attr] = _integer(value, lineno, key)
        elif attr == "edge_type":
            if value.upper() not in (EDGE_CEIL_2D, EDGE_EXPLICIT):
                raise InstanceError(f"unsupported EDGE_WEIGHT_TYPE {value!r}", lineno)
            header[attr] = value.upper()
        else:
            header[attr] = _number(value, lineno, key)

    for key in _REQUIRED:
        if key not in header:
            name = next(k for k, v in _HEADER_KEYS.items() if v == key)
            raise InstanceError(f"missing header {name!r}")
    m = header["m"]
    if m > 0 and items is None:
        raise InstanceError(f"NUMBER OF ITEMS is {m} but no ITEMS SECTION found")
    items = items or []
    if header["edge_type"] == EDGE_CEIL_2D:
        if coords is None:
            raise InstanceError("EDGE_WEIGHT_TYPE CEIL_2D requires a NODE_COORD_SECTION")
        dist = ceil_2d_matrix(coords)
    else:
        if matrix is None:
            raise InstanceError("EDGE_WEIGHT_TYPE EXPLICIT requires an EDGE_WEIGHT_SECTION")
        dist = matrix
        coords = None
    return Instance(
        name=str(header.get("name", "")),
        n=header["n"],
        items=tuple(items),
        capacity=header["capacity"],
        max_time=header["max_time"],
        v_min=header["v_min"],
        v_max=header["v_max"],
        dist=dist,
        coords=coords,
        extra=tuple(extra),
    )


def serialize_instance(instance: Instance) -> str:
    out = [f"PROBLEM NAME: {instance.name}"]
    out += [f"{k}: {v}" for k, v in instance.extra]
    out += [
        f"DIMENSION: {instance.n}",
        f"NUMBER OF ITEMS: {instance.m}",
        f"CAPACITY OF KNAPSACK: {fmt_number(instance.capacity)}",
        f"MAX TIME: {fmt_number(instance.max_time)}",
        f"MIN SPEED: {fmt_number(instance.v_min)}",
        f"MAX SPEED: {fmt_number(instance.v_max)}",
        f"EDGE_WEIGHT_TYPE: {instance.edge_weight_type}",
    ]
    if instance.coords is not None:
        out.append(NODE_COORD_HEADER)
        for k, (x, y) in enumerate(instance.coords, start=1):
            out.append(f"{k} {fmt_number(x)} {fmt_number(y)}")
    else:
        out.append(EDGE_WEIGHT_HEADER)
        for row in instance.dist.tolist():
            out.append(" ".join(str(v) for v in row))
    out.append(ITEMS_HEADER)
    for it in instance.items:
        out.append(f"{it.id} {fmt_number(it.profit)} {fmt_number(it.weight)} {it.city}")
    return "\n".join(out) + "\n"


def read_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def write_instance(instance: Instance, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_instance(instance))
