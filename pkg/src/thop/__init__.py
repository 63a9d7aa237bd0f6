"""Thief Orienteering Problem: MAX-MIN ant system with randomized greedy packing."""

from .evaluator import Evaluation, evaluate, prune_tour
from .mmas import MmasParams, solve
from .model import Instance, Item, Solution, distance, parse_instance, serialize_instance, speed
from .oracle import solve_exact
from .packing import fractional_kp_ub, pack

__all__ = [
    "Evaluation", "Instance", "Item", "MmasParams", "Solution", "distance", "evaluate",
    "fractional_kp_ub", "pack", "parse_instance", "prune_tour", "serialize_instance",
    "solve", "solve_exact", "speed",
]
