"""Repulsive pheromone field.

Robots deposit pheromone on the cells around them; other robots prefer
low-pheromone cells, which spreads the swarm out. The deposit on a cell at
Euclidean distance r from the robot is

    delta_tau0 * exp(-r / a1) - eps / a2      for r <= r_s, clamped at 0,

with eps a fresh Uniform(0, 1) draw per cell, and the whole field decays
by the factor (1 - rho) once per step before new deposits land.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from pherofly import kernels
from pherofly.world import Coord


@dataclass
class PheromoneParams:
    delta_tau0: float = 2.0
    a1: float = 0.5
    a2: float = 0.5
    rho: float = 0.1
    r_s: float = 4.0
    phi: float = 1.0
    lam: float = 1.0
    eta_base: float = 0.9
    tau_floor: float = 1e-12

    def validate(self) -> None:
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")
        if self.r_s < 0:
            raise ValueError(f"r_s must be non-negative, got {self.r_s}")
        if self.a1 <= 0 or self.a2 <= 0:
            raise ValueError("a1 and a2 must be positive")
        if self.delta_tau0 < 0:
            raise ValueError(f"delta_tau0 must be non-negative, got {self.delta_tau0}")
        if not 0.0 < self.eta_base <= 1.0:
            raise ValueError(f"eta_base must lie in (0, 1], got {self.eta_base}")
        if self.tau_floor <= 0:
            raise ValueError(f"tau_floor must be positive, got {self.tau_floor}")


class PheromoneField:
    """Per-cell pheromone levels on an m x n grid.

    ``levels`` is indexed ``[y - 1, x - 1]`` (row-major, 1-based outside).
    Levels never go negative: decay is multiplicative and deposits are
    clamped at zero.
    """

    def __init__(self, m: int, n: int, params: PheromoneParams | None = None):
        self.m = m
        self.n = n
        self.params = params if params is not None else PheromoneParams()
        self.params.validate()
        self.levels = np.zeros((n, m), dtype=np.float64)

    def level(self, c: Coord) -> float:
        return float(self.levels[c[1] - 1, c[0] - 1])


def _draw_eps(field: PheromoneField, pos: Coord, rng) -> np.ndarray:
    """One uniform per bounding-box cell, row-major; see deposit_disk."""
    x0, y0 = pos
    ext = math.floor(field.params.r_s)
    w = min(field.m, x0 + ext) - max(1, x0 - ext) + 1
    h = min(field.n, y0 + ext) - max(1, y0 - ext) + 1
    return rng.random(w * h)


def deposit(field: PheromoneField, robot_pos: Coord, rng) -> dict[Coord, float]:
    """Increment map for one robot's deposit, without touching the field.

    Returns every cell within Euclidean distance r_s of ``robot_pos``
    (clamped-to-zero increments included). The noise draws follow the same
    order as :func:`deposit_into`, so applying the returned map yields the
    same field as the in-place path.
    """
    if not (1 <= robot_pos[0] <= field.m and 1 <= robot_pos[1] <= field.n):
        raise ValueError(f"robot position out of bounds: {robot_pos}")
    p = field.params
    x0, y0 = robot_pos
    ext = math.floor(p.r_s)
    eps = _draw_eps(field, robot_pos, rng)
    out: dict[Coord, float] = {}
    k = 0
    for y in range(max(1, y0 - ext), min(field.n, y0 + ext) + 1):
        for x in range(max(1, x0 - ext), min(field.m, x0 + ext) + 1):
            r = math.sqrt((x - x0) ** 2 + (y - y0) ** 2)
            if r <= p.r_s:
                d = p.delta_tau0 * math.exp(-r / p.a1) - eps[k] / p.a2
                out[(x, y)] = d if d > 0.0 else 0.0
            k += 1
    return out


def deposit_into(field: PheromoneField, robot_pos: Coord, rng) -> float:
    """Apply one robot's deposit directly to the field; returns the total."""
    p = field.params
    eps = _draw_eps(field, robot_pos, rng)
    return kernels.deposit_disk(
        field.levels, robot_pos[0], robot_pos[1], p.delta_tau0, p.a1, p.a2, p.r_s, eps
    )


def evaporate(field: PheromoneField) -> None:
    """Apply one step of decay to the whole field."""
    kernels.evaporate(field.levels, field.params.rho)


def step_update(field: PheromoneField, deposits) -> None:
    """One field update: decay, then add the given increment maps.

    ``deposits`` is an iterable of maps as returned by :func:`deposit`.
    Deposits landing in a step are not decayed in that same step.
    """
    evaporate(field)
    levels = field.levels
    for dep in deposits:
        for (x, y), d in dep.items():
            levels[y - 1, x - 1] += d
