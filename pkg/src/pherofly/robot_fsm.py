"""Robot roles and the per-step decision rules.

Roles: a Forager explores; a Coordinator sits on a target it found and
broadcasts for help; a Recruited robot travels toward a broadcast target;
a Waiting robot has arrived and holds position until the coalition is
complete; Execution robots disarm for a fixed number of steps; Dead is
absorbing (dynamic scenarios only).

Decisions are computed against the state left by the previous step and
applied by the engine afterwards, so within one step no robot sees
another robot's same-step choice. ``step_robot`` may mutate only the
robot's private request book and commitment, which no other robot reads
during the decision sweep.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from pherofly.explore import forager_move
from pherofly.pheromone import PheromoneField
from pherofly.recruit import (
    FireflyParams,
    HelpRequest,
    accept_recruitment,
    choose_target,
    firefly_step,
    should_abandon,
)
from pherofly.world import Coord, TargetStatus, World, chebyshev


class RobotState(Enum):
    FORAGER = "forager"
    COORDINATOR = "coordinator"
    RECRUITED = "recruited"
    WAITING = "waiting"
    EXECUTION = "execution"
    DEAD = "dead"


@dataclass
class Robot:
    id: int
    pos: Coord
    state: RobotState = RobotState.FORAGER
    heading: int | None = None
    rr: dict[Coord, HelpRequest] = field(default_factory=dict)
    committed: Coord | None = None
    exec_remaining: int = 0
    arrived_at: int | None = None

    @property
    def alive(self) -> bool:
        return self.state is not RobotState.DEAD


@dataclass
class MissionParams:
    """Cross-module knobs the decision rules need in one place."""

    r_min: int
    r_t: float
    w1: float
    w2: float
    firefly: FireflyParams
    coordinator_counts: bool = True
    arrive_range: int = 1
    t_disarm: int = 5


def deliver_packets(robots, world: World, r_t: float, step: int):
    """Deliver every coordinator's help request for this step.

    Delivery is synchronous and lossless: each coordinator's request
    reaches every alive robot strictly closer than ``r_t`` (Euclidean)
    that is neither a coordinator nor executing. Returns the inbox lists
    (robot id -> requests, receivers only) and the senders, in robot id
    order, for energy accounting.
    """
    senders = [r for r in robots if r.state is RobotState.COORDINATOR]
    inboxes: dict[int, list[HelpRequest]] = {}
    if not senders:
        return inboxes, senders
    listeners = [
        r
        for r in robots
        if r.state not in (RobotState.COORDINATOR, RobotState.EXECUTION, RobotState.DEAD)
    ]
    if not listeners:
        return inboxes, senders
    # One senders x listeners distance matrix per step instead of a Python
    # loop per pair. np.sqrt and math.sqrt are both correctly rounded, so
    # the strict < test matches the scalar euclidean() exactly.
    spos = np.array([s.pos for s in senders], dtype=np.float64)
    lpos = np.array([r.pos for r in listeners], dtype=np.float64)
    dx = spos[:, 0:1] - lpos[:, 0]
    dy = spos[:, 1:2] - lpos[:, 1]
    in_range = np.sqrt(dx * dx + dy * dy) < r_t
    reqs = [None] * len(senders)
    # nonzero is row-major: sender by sender, listeners ascending, which is
    # exactly the old nested-loop delivery order.
    for i, j in zip(*np.nonzero(in_range)):
        req = reqs[i]
        if req is None:
            s = senders[i]
            target = world.target_at(s.committed)
            req = reqs[i] = HelpRequest(s.id, target.id, target.pos, step)
        inboxes.setdefault(listeners[j].id, []).append(req)
    return inboxes, senders


def step_robot(robot, inbox, robots, world, field, mp, waiting_by_target, rng):
    """One robot's decision for this step, as a tagged tuple.

    Rule order matters and is fixed:

    1. standing on an undiscovered target (or a found one whose
       coordinator died) claims it: ("discover", target);
    2. a coordinator with a complete coalition starts disarming:
       ("start_exec", target, member_ids), earliest arrivals first so the
       coalition has exactly the required size; otherwise ("stay",);
    3. executing robots just count down: ("tick",);
    4. waiting robots hold: ("stay",) -- they are locked to the coalition;
    5. a forager or recruited robot folds fresh requests into its book,
       abandons if everything is out of range, re-runs the acceptance
       trade-off and either heads for the brightest target
       (("approach", cell) / ("hold",) / ("wait_at", request) on arrival)
       or clears the book and forages: ("forage", cell_or_None).
    """
    target_here = world.targets_by_pos.get(robot.pos)
    if target_here is not None:
        if target_here.status is TargetStatus.HIDDEN:
            return ("discover", target_here)
        if target_here.status is TargetStatus.FOUND and (
            target_here.coordinator_id is None or not robots[target_here.coordinator_id].alive
        ):
            return ("discover", target_here)

    st = robot.state
    if st is RobotState.COORDINATOR:
        need = mp.r_min - 1 if mp.coordinator_counts else mp.r_min
        waiters = waiting_by_target.get(robot.committed, ())
        if len(waiters) >= need:
            members = tuple(rid for _, rid in sorted(waiters)[:need])
            return ("start_exec", world.targets_by_pos[robot.committed], members)
        return ("stay",)
    if st is RobotState.EXECUTION:
        return ("tick",)
    if st is RobotState.WAITING:
        return ("stay",)

    rr = robot.rr
    for req in inbox:
        if req.target_pos not in rr:
            rr[req.target_pos] = req
    if rr:
        requests = list(rr.values())
        if should_abandon(robot.pos, requests, mp.r_t, mp.firefly):
            rr.clear()
            robot.committed = None
        elif accept_recruitment(robot.pos, requests, mp.w1, mp.w2, mp.firefly, field, world):
            chosen = choose_target(robot.pos, requests, mp.firefly)
            robot.committed = chosen.target_pos
            if chebyshev(robot.pos, chosen.target_pos) <= mp.arrive_range:
                return ("wait_at", chosen)
            dx, dy = firefly_step(robot.pos, chosen.target_pos, mp.firefly, rng)
            if dx == 0 and dy == 0:
                return ("hold",)
            return ("approach", (robot.pos[0] + dx, robot.pos[1] + dy))
        else:
            rr.clear()
            robot.committed = None
    decision = forager_move(robot.pos, world, field, rng)
    return ("forage", decision.target)
