"""Simulated JIT shape cache and gradient-update cost.

A compiled update step is keyed by its padded input shape; every shape not
seen before in a run costs one compilation.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import OutOfOrderStep


class ShapeKey(NamedTuple):
    padded_nodes: int
    padded_edges: int
    num_graphs: int


@dataclass
class ShapeRegistry:
    seen: set = field(default_factory=set)
    events: list = field(default_factory=list)
    last_step: int = -1

    def record(self, step: int, shape: ShapeKey) -> bool:
        """Register ``shape`` at ``step``; True when it is a new shape."""
        if step <= self.last_step:
            raise OutOfOrderStep(f"step {step} not after {self.last_step}")
        self.last_step = step
        shape = ShapeKey(*shape)
        if shape in self.seen:
            return False
        self.seen.add(shape)
        self.events.append((step, shape))
        return True

    @property
    def compile_count(self) -> int:
        return len(self.seen)

    @property
    def recompilations(self) -> int:
        return max(len(self.seen) - 1, 0)

    def event_rows(self):
        return [(step, *shape) for step, shape in self.events]

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["step_index", "padded_nodes", "padded_edges", "num_graphs"])
            writer.writerows(self.event_rows())


def record_step(registry: ShapeRegistry, step: int, shape: ShapeKey) -> bool:
    return registry.record(step, shape)


def recompilation_count(registry: ShapeRegistry) -> int:
    """Distinct shapes minus the initial compilation."""
    return registry.recompilations


@dataclass(frozen=True)
class CostModel:
    """Linear per-step update cost, in microseconds."""

    base_cost: float = 500.0
    node_cost: float = 1.0
    edge_cost: float = 0.1
    compile_penalty: float = 200_000.0

    def __post_init__(self):
        for name in ("base_cost", "node_cost", "edge_cost", "compile_penalty"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


def simulate_update_cost(shape: ShapeKey, model: CostModel, is_new_shape: bool) -> float:
    cost = model.base_cost + model.node_cost * shape[0] + model.edge_cost * shape[1]
    if is_new_shape:
        cost += model.compile_penalty
    return cost
