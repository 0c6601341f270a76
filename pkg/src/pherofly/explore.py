"""Forager movement: pheromone-repelled cell selection.

A forager scores each open neighbour cell c as

    score(c) = (tau_c + tau_floor)^phi * (eta_c)^lam,    eta_c = eta_base^u

with a fresh u ~ Uniform(0, 1) per option per call, and moves to the cell
with the smallest normalized score. The floor keeps untouched cells (tau
= 0) scoreable; since eta is i.i.d. across options, the first move on a
clean field is uniformly random among the options.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from pherofly import kernels
from pherofly.pheromone import PheromoneField
from pherofly.world import Coord, World


@dataclass
class MoveDecision:
    """Chosen cell for this step; ``target`` is None when boxed in."""

    target: Coord | None


def _scores(field: PheromoneField, options, rng):
    p = field.params
    k = len(options)
    tau = np.empty(k)
    levels = field.levels
    for i, (x, y) in enumerate(options):
        tau[i] = levels[y - 1, x - 1]
    u = rng.random(k)
    out = np.empty(k)
    best = kernels.transition_scores(tau, u, p.phi, p.lam, p.eta_base, p.tau_floor, out)
    return out, best


def transition_distribution(field: PheromoneField, from_coord: Coord, options, rng) -> np.ndarray:
    """Probability vector over ``options``, aligned by index.

    Scores are strictly positive (tau_floor > 0), so the normalization is
    always well defined.
    """
    if len(options) == 0:
        raise ValueError(f"no movement options from {from_coord}")
    scores, _ = _scores(field, options, rng)
    return scores / scores.sum()


def select_next_cell(options, probabilities, rng) -> Coord:
    """Pick the option with the smallest probability, ties uniform."""
    probabilities = np.asarray(probabilities)
    lowest = probabilities.min()
    ties = np.flatnonzero(probabilities == lowest)
    if len(ties) == 1:
        return options[ties[0]]
    return options[ties[rng.integers(len(ties))]]


# Per-call scratch for forager_move. The engine is single threaded, so
# sharing these across calls is safe and avoids ~1 us of allocation in the
# hottest decision path.
_OPT_X = np.empty(8, dtype=np.int32)
_OPT_Y = np.empty(8, dtype=np.int32)
_OPT_TAU = np.empty(8)
_OPT_SCORE = np.empty(8)


def forager_move(pos: Coord, world: World, field: PheromoneField, rng) -> MoveDecision:
    """Decide the forager's next cell from its open neighbourhood.

    Works on unnormalized scores (the argmin is the same). Returns a
    decision with ``target=None`` when no neighbour is open; commit-time
    blocking (another robot took the cell first) is the engine's problem.
    """
    p = field.params
    count = kernels.open_options(world._state, world._occ, field.levels,
                                 world.m, world.n, pos[0], pos[1],
                                 _OPT_X, _OPT_Y, _OPT_TAU)
    if count == 0:
        return MoveDecision(None)
    u = rng.random(count)
    best, ties = kernels.pick_min_score(_OPT_TAU, u, p.phi, p.lam, p.eta_base,
                                        p.tau_floor, _OPT_SCORE)
    if ties > 1:
        tied = np.flatnonzero(_OPT_SCORE[:count] == _OPT_SCORE[best])
        best = tied[rng.integers(len(tied))]
    return MoveDecision((int(_OPT_X[best]), int(_OPT_Y[best])))
