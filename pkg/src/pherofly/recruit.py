"""Firefly-style recruitment toward found targets.

A coordinator sitting on a found target attracts nearby robots with
brightness beta = beta0 * exp(-gamma * r^2). Recruited robots step toward
the brightest requested target one cell at a time, with a small uniform
jitter on each axis, and give up when every requested target is farther
than the communication radius plus a slack margin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from pherofly import kernels
from pherofly.pheromone import PheromoneField
from pherofly.world import Coord, World, euclidean


@dataclass
class FireflyParams:
    alpha: float = 0.2
    beta0: float = 0.5
    # None means "derive from the grid": the engine fills in 1 / max(m, n).
    gamma: float | None = None
    delta_margin: float = 2.0

    def validate(self) -> None:
        if self.alpha < 0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")
        if self.beta0 <= 0:
            raise ValueError(f"beta0 must be positive, got {self.beta0}")
        if self.gamma is not None and self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.delta_margin < 0:
            raise ValueError(f"delta_margin must be non-negative, got {self.delta_margin}")


@dataclass(frozen=True)
class HelpRequest:
    """A coordinator's call for help with one target."""

    coordinator_id: int
    target_id: int
    target_pos: Coord
    issued_step: int


def attractiveness(params: FireflyParams, r: float) -> float:
    """Brightness perceived at Euclidean distance r."""
    if r < 0:
        raise ValueError(f"negative distance: {r}")
    return params.beta0 * math.exp(-params.gamma * r * r)


def choose_target(pos: Coord, requests, params: FireflyParams) -> HelpRequest:
    """Most attractive request; ties broken by lowest (y, x) target cell."""
    if not requests:
        raise ValueError("choose_target needs at least one request")
    return max(
        requests,
        key=lambda q: (
            attractiveness(params, euclidean(pos, q.target_pos)),
            (-q.target_pos[1], -q.target_pos[0]),
        ),
    )


def _sign(v: float) -> int:
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


def firefly_step(pos: Coord, target_pos: Coord, params: FireflyParams, rng) -> tuple[int, int]:
    """Per-axis unit step toward the target.

    Each axis moves by sign(beta * (target - pos) + alpha * (sigma - 1/2))
    with beta evaluated at the current Euclidean distance and sigma a
    fresh Uniform(0, 1) per axis (x drawn first, then y). With alpha = 0
    this is a plain sign step, so the Chebyshev distance shrinks by one
    per call on an open grid.
    """
    r = euclidean(pos, target_pos)
    b = attractiveness(params, r)
    sigma = rng.random(2)
    dx = _sign(b * (target_pos[0] - pos[0]) + params.alpha * (sigma[0] - 0.5))
    dy = _sign(b * (target_pos[1] - pos[1]) + params.alpha * (sigma[1] - 0.5))
    return dx, dy


def should_abandon(pos: Coord, requests, r_t: float, params: FireflyParams) -> bool:
    """True when every requested target is at least r_t + delta_margin away."""
    cutoff = r_t + params.delta_margin
    return all(euclidean(pos, q.target_pos) >= cutoff for q in requests)


def exploration_urge(pos: Coord, world: World, field: PheromoneField) -> float:
    """Local pull to keep exploring, in [0, 1].

    Measured as the pheromone contrast over the open neighbourhood:
    1 - min/max. A flat neighbourhood (including the all-zero one, and the
    boxed-in case with no open neighbour) gives 0: nothing nearby is more
    worth exploring than anything else, so recruitment is free.
    """
    mn, mx = kernels.urge_minmax(world._state, world._occ, field.levels,
                                 world.m, world.n, pos[0], pos[1])
    if mx <= 0.0:
        return 0.0
    return 1.0 - mn / mx


def accept_recruitment(
    pos: Coord,
    requests,
    w1: float,
    w2: float,
    params: FireflyParams,
    field: PheromoneField,
    world: World,
) -> bool:
    """Weigh the recruitment pull against the local exploration urge.

    The recruitment score is w2 times the normalized brightness of the
    best request, exp(-gamma r^2), which is 1 at the target cell and
    decays with distance; the exploration score is w1 times
    :func:`exploration_urge`. The robot accepts when the recruitment
    score is at least the exploration score, so acceptance is monotone in
    w2 and a w1 = 1 robot still accepts for free on flat pheromone. The
    caller re-evaluates this every step, which is what lets an accepted
    robot change its mind.
    """
    if not requests:
        raise ValueError("accept_recruitment needs at least one request")
    best_r = min(euclidean(pos, q.target_pos) for q in requests)
    beta_star = math.exp(-params.gamma * best_r * best_r)
    return w2 * beta_star >= w1 * exploration_urge(pos, world, field)
