"""Mission statistics and the weighted bi-objective.

The mission cost blends exploration effort (how many robot-cell first
visits happened, each weighted by the per-cell exploration time) against
recruitment effort (how long each coalition member spent between first
hearing a call and arriving at the target):

    J = w1 * sum(T_e * v) + w2 * sum(T_end - T_start)

with w1 + w2 = 1. Only spans that ended in an arrival count; a robot that
heard a call and never showed up contributes nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from pherofly.world import Coord, TargetStatus, World


@dataclass
class Span:
    """One counted recruitment span (frozen at execution start)."""

    robot_id: int
    target_id: int
    t_start: int
    t_end: int


class MissionTally:
    """Per-run counters the engine fills in as it goes."""

    def __init__(self, m: int, n: int, n_robots: int):
        self.m = m
        self.n = n
        self.n_robots = n_robots
        # One byte per robot-cell: visit maps are binary, a cell revisited
        # by the same robot counts once.
        self._visited = [bytearray(m * n) for _ in range(n_robots)]
        self.visits_total = 0
        self.spans: list[Span] = []

    def record_visit(self, robot_id: int, pos: Coord) -> None:
        idx = (pos[1] - 1) * self.m + (pos[0] - 1)
        row = self._visited[robot_id]
        if not row[idx]:
            row[idx] = 1
            self.visits_total += 1

    def visited(self, robot_id: int, pos: Coord) -> bool:
        return bool(self._visited[robot_id][(pos[1] - 1) * self.m + (pos[0] - 1)])

    def union_coverage(self) -> int:
        """Number of cells visited by at least one robot."""
        covered = bytearray(self.m * self.n)
        for row in self._visited:
            for i, v in enumerate(row):
                if v:
                    covered[i] = 1
        return sum(covered)


def weighted_objective(tally: MissionTally, w1: float, w2: float, t_e: float = 1.0) -> float:
    """Blend exploration and recruitment effort; see the module docstring."""
    if w1 < 0 or w2 < 0:
        raise ValueError(f"weights must be non-negative, got w1={w1}, w2={w2}")
    if abs(w1 + w2 - 1.0) > 1e-9:
        raise ValueError(f"weights must sum to 1, got w1 + w2 = {w1 + w2}")
    recruitment = sum(s.t_end - s.t_start for s in tally.spans)
    return w1 * t_e * tally.visits_total + w2 * recruitment


def f1(world: World) -> float:
    """Explored fraction of the non-obstacle area, in [0, 1]."""
    denom = world.explored_count + world.unexplored_count + world.inaccessible_count
    if denom == 0:
        raise ValueError("world has no non-obstacle cells")
    return world.explored_count / denom


def f2(world: World) -> int:
    """Number of disarmed targets."""
    return sum(1 for t in world.targets if t.status is TargetStatus.DISARMED)


@dataclass
class ConstraintReport:
    coverage_ok: bool
    coalitions_ok: bool
    unvisited_cells: int
    bad_coalitions: list[tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.coverage_ok and self.coalitions_ok


def check_constraints(world: World, r_min: int) -> ConstraintReport:
    """Verify the two hard mission constraints.

    Coverage: every accessible cell was visited at least once (visits mark
    cells Explored, so this is exactly "no Unexplored cell left").
    Coalitions: every disarmed target was handled by exactly ``r_min``
    robots, as frozen at execution start.
    """
    unvisited = world.unexplored_count
    bad = [
        (t.id, len(t.coalition))
        for t in world.targets
        if t.status is TargetStatus.DISARMED and len(t.coalition) != r_min
    ]
    return ConstraintReport(
        coverage_ok=unvisited == 0,
        coalitions_ok=not bad,
        unvisited_cells=unvisited,
        bad_coalitions=bad,
    )
