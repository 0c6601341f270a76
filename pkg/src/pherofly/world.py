"""Rectangular cell world: states, targets, occupancy.

Coordinates are 1-based pairs ``(x, y)`` with ``x`` in ``1..m`` (column)
and ``y`` in ``1..n`` (row); the origin is the upper-left corner. Cell
states live in a flat bytearray so that neighbour queries stay cheap in
the simulation loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum

Coord = tuple[int, int]

# 8-connected neighbourhood, fixed scan order (row above, same row, row below).
_OFFSETS = ((-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1))


class CellState(IntEnum):
    """State of one grid cell.

    Unexplored and Explored sort below Obstacle and Inaccessible so a
    single comparison decides traversability.
    """

    UNEXPLORED = 0
    EXPLORED = 1
    OBSTACLE = 2
    INACCESSIBLE = 3


class TargetStatus(IntEnum):
    HIDDEN = 0
    FOUND = 1
    DISARMING = 2
    DISARMED = 3
    EXPLODED = 4

    @property
    def armed(self) -> bool:
        """True while the target can still explode (dynamic scenarios)."""
        return self is not TargetStatus.DISARMED and self is not TargetStatus.EXPLODED


@dataclass
class Target:
    """A hazardous object sitting on a single cell.

    ``coalition`` is frozen at the moment disarming starts and is what the
    coalition-size constraint is checked against; late arrivals never join.
    """

    id: int
    pos: Coord
    status: TargetStatus = TargetStatus.HIDDEN
    coordinator_id: int | None = None
    found_step: int | None = None
    disarmed_step: int | None = None
    exploded_step: int | None = None
    coalition: tuple[int, ...] = ()


class World:
    """Grid state, target registry and robot occupancy.

    Occupancy is tracked here (not in the robots) so that "an occupied
    cell counts as an obstacle" is enforced in one place: a cell is open
    for movement iff it is traversable and no robot stands on it.
    """

    def __init__(self, m: int, n: int):
        if m < 2 or n < 2:
            raise ValueError(f"invalid dimensions: need m, n >= 2, got {m}x{n}")
        self.m = m
        self.n = n
        self._state = bytearray(m * n)
        # Occupancy is kept twice: as a coord -> robot id map for lookups
        # and as a flat 0/1 grid the movement kernels can scan.
        self._occ = bytearray(m * n)
        self.targets: list[Target] = []
        self.targets_by_pos: dict[Coord, Target] = {}
        self.occupancy: dict[Coord, int] = {}
        self.explored_count = 0
        self.unexplored_count = m * n
        self.obstacle_count = 0
        self.inaccessible_count = 0

    # -- cell state ------------------------------------------------------

    def in_bounds(self, c: Coord) -> bool:
        x, y = c
        return 1 <= x <= self.m and 1 <= y <= self.n

    def state(self, c: Coord) -> CellState:
        x, y = c
        if not (1 <= x <= self.m and 1 <= y <= self.n):
            raise ValueError(f"coordinate out of bounds: {c}")
        return CellState(self._state[(y - 1) * self.m + (x - 1)])

    def is_traversable(self, c: Coord) -> bool:
        """Inside the grid and neither Obstacle nor Inaccessible."""
        x, y = c
        if not (1 <= x <= self.m and 1 <= y <= self.n):
            return False
        return self._state[(y - 1) * self.m + (x - 1)] < CellState.OBSTACLE

    def is_open(self, c: Coord) -> bool:
        """Traversable and not occupied by a robot."""
        x, y = c
        if not (1 <= x <= self.m and 1 <= y <= self.n):
            return False
        idx = (y - 1) * self.m + (x - 1)
        return self._state[idx] < CellState.OBSTACLE and self._occ[idx] == 0

    def _set_state(self, c: Coord, new: CellState) -> None:
        x, y = c
        idx = (y - 1) * self.m + (x - 1)
        old = self._state[idx]
        if old == new:
            return
        self._state[idx] = new
        for count_attr, value in (
            ("unexplored_count", CellState.UNEXPLORED),
            ("explored_count", CellState.EXPLORED),
            ("obstacle_count", CellState.OBSTACLE),
            ("inaccessible_count", CellState.INACCESSIBLE),
        ):
            if old == value:
                setattr(self, count_attr, getattr(self, count_attr) - 1)
            if new == value:
                setattr(self, count_attr, getattr(self, count_attr) + 1)

    def mark_explored(self, c: Coord) -> None:
        """Flip an Unexplored cell to Explored; Explored cells stay put.

        Obstacle or Inaccessible cells cannot be explored; asking for it
        is a caller bug.
        """
        x, y = c
        idx = (y - 1) * self.m + (x - 1)
        old = self._state[idx]
        if old == CellState.UNEXPLORED:
            self._state[idx] = CellState.EXPLORED
            self.unexplored_count -= 1
            self.explored_count += 1
        elif old != CellState.EXPLORED:
            raise ValueError(f"cannot mark {CellState(old).name} cell {c} explored")

    def mark_inaccessible_region(self, center: Coord, radius: int) -> int:
        """Convert Unexplored cells within a Chebyshev ball to Inaccessible.

        Explored cells keep their state: damage is only assessed for area
        that was never covered. Returns the number of converted cells.
        """
        if radius < 0:
            raise ValueError(f"negative radius: {radius}")
        cx, cy = center
        converted = 0
        for y in range(max(1, cy - radius), min(self.n, cy + radius) + 1):
            base = (y - 1) * self.m - 1
            for x in range(max(1, cx - radius), min(self.m, cx + radius) + 1):
                if self._state[base + x] == CellState.UNEXPLORED:
                    self._state[base + x] = CellState.INACCESSIBLE
                    converted += 1
        self.unexplored_count -= converted
        self.inaccessible_count += converted
        return converted

    # -- movement support --------------------------------------------------

    def neighbors(self, c: Coord) -> list[Coord]:
        """Open 8-neighbourhood of ``c`` in fixed scan order."""
        x, y = c
        m = self.m
        n = self.n
        st = self._state
        occ = self.occupancy
        out = []
        for dx, dy in _OFFSETS:
            nx = x + dx
            ny = y + dy
            if 1 <= nx <= m and 1 <= ny <= n:
                if st[(ny - 1) * m + (nx - 1)] < CellState.OBSTACLE and (nx, ny) not in occ:
                    out.append((nx, ny))
        return out

    def occupy(self, c: Coord, robot_id: int) -> None:
        if c in self.occupancy:
            raise ValueError(f"cell {c} already occupied by robot {self.occupancy[c]}")
        self.occupancy[c] = robot_id
        self._occ[(c[1] - 1) * self.m + (c[0] - 1)] = 1

    def vacate(self, c: Coord) -> None:
        del self.occupancy[c]
        self._occ[(c[1] - 1) * self.m + (c[0] - 1)] = 0

    # -- targets -----------------------------------------------------------

    def add_target(self, target: Target) -> None:
        if target.pos in self.targets_by_pos:
            raise ValueError(f"cell {target.pos} already holds a target")
        self.targets.append(target)
        self.targets_by_pos[target.pos] = target

    def target_at(self, c: Coord) -> Target | None:
        # Hot paths read targets_by_pos.get directly; this is the API form.
        return self.targets_by_pos.get(c)


def new_world(m, n, obstacles=None, n_targets=0, rng=None):
    """Build a world with obstacles and hidden targets placed.

    Args:
        m, n: grid dimensions, both at least 2.
        obstacles: ``None`` for a clear grid, a float in [0, 1] for uniform
            random obstacle density, or an explicit list of coordinates.
        n_targets: number of hidden targets, placed uniformly at random on
            distinct non-obstacle cells.
        rng: numpy Generator; required when anything is placed randomly.

    Raises:
        ValueError: on bad dimensions or when the requested entities do
            not fit on the grid.
    """
    world = World(m, n)
    all_cells = [(x, y) for y in range(1, n + 1) for x in range(1, m + 1)]

    if obstacles is None:
        obstacle_cells = []
    elif isinstance(obstacles, (int, float)) and not isinstance(obstacles, bool):
        density = float(obstacles)
        if not 0.0 <= density <= 1.0:
            raise ValueError(f"obstacle density must lie in [0, 1], got {density}")
        k = round(density * m * n)
        if k > 0:
            if rng is None:
                raise ValueError("random obstacle placement needs an rng")
            picks = rng.choice(len(all_cells), size=k, replace=False)
            obstacle_cells = [all_cells[i] for i in picks]
        else:
            obstacle_cells = []
    else:
        obstacle_cells = [(int(x), int(y)) for x, y in obstacles]
        if len(set(obstacle_cells)) != len(obstacle_cells):
            raise ValueError("duplicate obstacle coordinates")
        for c in obstacle_cells:
            if not world.in_bounds(c):
                raise ValueError(f"obstacle out of bounds: {c}")

    for c in obstacle_cells:
        world._set_state(c, CellState.OBSTACLE)

    free = [c for c in all_cells if world.is_traversable(c)]
    if n_targets < 0:
        raise ValueError(f"negative target count: {n_targets}")
    if n_targets > len(free):
        raise ValueError(
            f"infeasible placement: {n_targets} targets on {len(free)} free cells"
        )
    if n_targets > 0:
        if rng is None:
            raise ValueError("target placement needs an rng")
        picks = rng.choice(len(free), size=n_targets, replace=False)
        for i, p in enumerate(picks):
            world.add_target(Target(id=i, pos=free[p]))
    return world


def chebyshev(a: Coord, b: Coord) -> int:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def euclidean(a: Coord, b: Coord) -> float:
    # math.sqrt is the correctly rounded IEEE square root, so scalar and
    # vectorised (np.sqrt) range tests agree bit for bit.
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    return math.sqrt(dx * dx + dy * dy)
