"""Simulation engine: step loop, scenario dynamics, run results.

Step phases, in fixed order:

1. purge stale request books and dissolve broken coalitions;
2. deliver help requests (with tx/rx energy debits);
3. decision sweep over robots in id order, against the state left by the
   previous step;
4. apply phase in a freshly shuffled robot order: moves (with blocked-cell
   fallback), occupancy, exploration marking, state transitions;
5. pheromone decay plus the deposits of foragers that committed their
   chosen move;
6. mobility/coordination debits (booked inline in phases 2 and 4);
7. dynamic scenarios: explosion draws, chained blasts, then death
   processing for blast victims and exhausted robots;
8. metrics tick and termination check.

Randomness is split over four named streams (placement, decisions,
shuffle, explosions) spawned from one root seed, so runs are reproducible
and toggling one mechanism does not perturb the draws of another.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from pherofly.config import Config
from pherofly.energy import EnergyLedger, heading_of, movement_cost, rx_cost, tx_cost
from pherofly.metrics import (
    ConstraintReport,
    MissionTally,
    Span,
    check_constraints,
    f1,
    f2,
    weighted_objective,
)
from pherofly.pheromone import PheromoneField, deposit_into, evaporate
from pherofly.robot_fsm import (
    MissionParams,
    Robot,
    RobotState,
    deliver_packets,
    step_robot,
)
from pherofly.world import TargetStatus, chebyshev, new_world


@dataclass
class RunResult:
    """Outcome of one simulation run."""

    seed: int
    w1: float
    w2: float
    m: int
    n: int
    n_robots: int
    n_targets: int
    r_min: int
    r_t: float
    scenario: str
    steps: int
    tesc: float
    f1: float
    f2: int
    targets_found: int
    alive_fraction: float
    completed: bool
    objective: float
    visits_total: int
    constraints: ConstraintReport
    transitions: list = field(repr=False, default_factory=list)
    alive_series: list = field(repr=False, default_factory=list)
    events: list | None = field(repr=False, default=None)
    debit_records: list | None = field(repr=False, default=None)


class Simulation:
    """One seeded run over a fresh world."""

    def __init__(self, cfg: Config, seed: int, record_events: bool = False,
                 record_debits: bool | None = None, dump_field_dir=None):
        cfg.validate()
        self.cfg = cfg
        self.seed = seed
        self.dump_field_dir = dump_field_dir
        streams = np.random.SeedSequence(seed).spawn(4)
        self.rng_place = np.random.default_rng(streams[0])
        self.rng_decide = np.random.default_rng(streams[1])
        self.rng_shuffle = np.random.default_rng(streams[2])
        self.rng_explode = np.random.default_rng(streams[3])

        w = cfg.world
        self.world = new_world(w.m, w.n, w.obstacles, w.n_targets, self.rng_place)
        self.field = PheromoneField(w.m, w.n, cfg.pheromone)
        firefly = cfg.firefly
        if firefly.gamma is None:
            firefly = replace(firefly, gamma=1.0 / max(w.m, w.n))
        self.mp = MissionParams(
            r_min=cfg.swarm.r_min,
            r_t=cfg.swarm.r_t,
            w1=cfg.weights.w1,
            w2=cfg.weights.w2,
            firefly=firefly,
            coordinator_counts=cfg.swarm.coordinator_counts,
            arrive_range=cfg.swarm.arrive_range,
            t_disarm=cfg.swarm.t_disarm,
        )
        self.dynamic = cfg.scenario.mode == "dynamic"
        budget = cfg.energy.budget if self.dynamic else None
        if record_debits is None:
            record_debits = record_events
        self.ledger = EnergyLedger(cfg.swarm.n_robots, budget=budget, record=record_debits)
        self.events: list[str] | None = [] if record_events else None
        self.transitions: list[tuple] = []
        self.tally = MissionTally(w.m, w.n, cfg.swarm.n_robots)

        free = [
            (x, y)
            for y in range(1, w.n + 1)
            for x in range(1, w.m + 1)
            if self.world.is_traversable((x, y))
        ]
        if cfg.swarm.n_robots > len(free):
            raise ValueError(
                f"infeasible placement: {cfg.swarm.n_robots} robots on {len(free)} free cells"
            )
        picks = self.rng_place.choice(len(free), size=cfg.swarm.n_robots, replace=False)
        self.robots = [Robot(id=i, pos=free[p]) for i, p in enumerate(picks)]
        for r in self.robots:
            self.world.occupy(r.pos, r.id)
            self.world.mark_explored(r.pos)
            self.tally.record_visit(r.id, r.pos)

        self.alive_count = cfg.swarm.n_robots
        self.alive_series = [self.alive_count]
        self.step_no = 0
        self.first_receipt: dict[tuple[int, int], int] = {}
        self.waiting_by_target: dict[tuple[int, int], list[tuple[int, int]]] = {}
        self._tx_cost = tx_cost(cfg.energy, cfg.swarm.r_t)
        self._rx_cost = rx_cost(cfg.energy)
        self._disarm_tick = cfg.energy.disarm_cost / cfg.swarm.t_disarm
        self._stopped = False
        self._completed = False

    # -- bookkeeping helpers ---------------------------------------------

    def _emit(self, line: str) -> None:
        if self.events is not None:
            self.events.append(line)

    def _debit(self, rid: int, category: str, amount: float) -> None:
        self.ledger.debit(self.step_no, rid, category, amount)
        if self.events is not None:
            self.events.append(f"{self.step_no} debit {rid} {category} {amount!r}")

    def _transition(self, robot: Robot, new_state: RobotState, reason: str) -> None:
        old = robot.state
        if old is new_state:
            return
        robot.state = new_state
        self.transitions.append((self.step_no, robot.id, old, new_state, reason))
        if self.events is not None:
            self.events.append(
                f"{self.step_no} state {robot.id} {old.value} {new_state.value} {reason}"
            )

    def _unwait(self, robot: Robot) -> None:
        """Drop a robot from the waiting index (it leaves Waiting)."""
        entries = self.waiting_by_target.get(robot.committed)
        if entries:
            self.waiting_by_target[robot.committed] = [
                e for e in entries if e[1] != robot.id
            ]

    def _request_valid(self, target_pos) -> bool:
        z = self.world.targets_by_pos.get(target_pos)
        return (
            z is not None
            and z.status in (TargetStatus.FOUND, TargetStatus.DISARMING)
            and z.coordinator_id is not None
            and self.robots[z.coordinator_id].alive
        )

    def _kill(self, robot: Robot, cause: str) -> None:
        if robot.state is RobotState.WAITING:
            self._unwait(robot)
        self._transition(robot, RobotState.DEAD, cause)
        self.world.vacate(robot.pos)
        self.alive_count -= 1
        self._emit(f"{self.step_no} death {robot.id} {cause}")

    # -- step phases -------------------------------------------------------

    def _purge(self) -> None:
        for r in self.robots:
            st = r.state
            if st is RobotState.WAITING:
                if not self._request_valid(r.committed):
                    self._unwait(r)
                    r.committed = None
                    r.rr.clear()
                    self._transition(r, RobotState.FORAGER, "dissolved")
            elif st in (RobotState.RECRUITED, RobotState.FORAGER) and r.rr:
                stale = [pos for pos in r.rr if not self._request_valid(pos)]
                for pos in stale:
                    del r.rr[pos]

    def _communicate(self) -> None:
        t = self.step_no
        inboxes, senders = deliver_packets(self.robots, self.world, self.mp.r_t, t)
        events = self.events
        for s in senders:
            self._debit(s.id, "tx", self._tx_cost)
            if events is not None:
                z = self.world.targets_by_pos[s.committed]
                events.append(f"{t} broadcast {s.id} {z.id} {z.pos[0]} {z.pos[1]}")
        first_receipt = self.first_receipt
        for rid in sorted(inboxes):
            for req in inboxes[rid]:
                self._debit(rid, "rx", self._rx_cost)
                first_receipt.setdefault((rid, req.target_id), t)
                if events is not None:
                    events.append(f"{t} receive {rid} {req.coordinator_id} {req.target_id}")
        self._inboxes = inboxes

    def _decide(self) -> dict[int, tuple]:
        decisions = {}
        empty: tuple = ()
        for r in self.robots:
            if r.state is not RobotState.DEAD:
                decisions[r.id] = step_robot(
                    r,
                    self._inboxes.get(r.id, empty),
                    self.robots,
                    self.world,
                    self.field,
                    self.mp,
                    self.waiting_by_target,
                    self.rng_decide,
                )
        return decisions

    def _commit_move(self, robot: Robot, to, deposit_ok: bool) -> None:
        """Move with commit-time fallback; books the mobility debit."""
        t = self.step_no
        world = self.world
        fallback = False
        if not world.is_open(to):
            options = world.neighbors(robot.pos)
            if not options:
                self._debit(robot.id, "mobility", self.cfg.energy.stop_cost)
                return
            to = options[self.rng_decide.integers(len(options))]
            fallback = True
        dx = to[0] - robot.pos[0]
        dy = to[1] - robot.pos[1]
        new_heading = heading_of(dx, dy)
        cost = movement_cost(self.cfg.energy, robot.heading, new_heading, True)
        world.vacate(robot.pos)
        world.occupy(to, robot.id)
        robot.pos = to
        robot.heading = new_heading
        world.mark_explored(to)
        self.tally.record_visit(robot.id, to)
        self._debit(robot.id, "mobility", cost)
        if self.events is not None:
            self.events.append(f"{t} move {robot.id} {to[0]} {to[1]} {int(fallback)}")
        if deposit_ok and not fallback:
            self._deposit_queue.append(robot.id)

    def _apply(self, decisions: dict[int, tuple]) -> None:
        t = self.step_no
        stop_cost = self.cfg.energy.stop_cost
        ids = list(decisions)
        order = self.rng_shuffle.permutation(len(ids))
        self._deposit_queue: list[int] = []
        for k in order:
            r = self.robots[ids[k]]
            dec = decisions[r.id]
            tag = dec[0]
            if tag == "forage":
                self._transition(r, RobotState.FORAGER, "reverted")
                if dec[1] is None:
                    self._debit(r.id, "mobility", stop_cost)
                else:
                    self._commit_move(r, dec[1], deposit_ok=True)
            elif tag == "approach":
                self._transition(r, RobotState.RECRUITED, "recruited")
                self._commit_move(r, dec[1], deposit_ok=False)
            elif tag == "hold":
                self._transition(r, RobotState.RECRUITED, "recruited")
                self._debit(r.id, "mobility", stop_cost)
            elif tag == "stay":
                self._debit(r.id, "mobility", stop_cost)
            elif tag == "wait_at":
                req = dec[1]
                r.arrived_at = t
                self.waiting_by_target.setdefault(req.target_pos, []).append((t, r.id))
                # Acceptance recruits before arrival parks, so a forager that
                # accepts while already adjacent passes through Recruited.
                self._transition(r, RobotState.RECRUITED, "recruited")
                self._transition(r, RobotState.WAITING, "arrived")
                self._debit(r.id, "mobility", stop_cost)
            elif tag == "discover":
                z = dec[1]
                if r.state is RobotState.WAITING:
                    self._unwait(r)
                if z.found_step is None:
                    z.found_step = t
                z.status = TargetStatus.FOUND
                z.coordinator_id = r.id
                r.committed = z.pos
                r.rr.clear()
                self._transition(r, RobotState.COORDINATOR, "discovered")
                self._debit(r.id, "mobility", stop_cost)
            elif tag == "start_exec":
                z, members = dec[1], dec[2]
                z.status = TargetStatus.DISARMING
                coalition = (r.id,) + members if self.mp.coordinator_counts else members
                z.coalition = tuple(sorted(coalition))
                for rid in members:
                    member = self.robots[rid]
                    self._unwait(member)
                    start = self.first_receipt.get((rid, z.id), member.arrived_at)
                    self.tally.spans.append(Span(rid, z.id, start, member.arrived_at))
                    member.exec_remaining = self.mp.t_disarm
                    self._transition(member, RobotState.EXECUTION, "coalition")
                r.exec_remaining = self.mp.t_disarm
                self._transition(r, RobotState.EXECUTION, "coalition")
                self._debit(r.id, "mobility", stop_cost)
            elif tag == "tick":
                r.exec_remaining -= 1
                self._debit(r.id, "disarm", self._disarm_tick)
                if r.exec_remaining == 0:
                    z = self.world.target_at(r.committed)
                    if z.status is TargetStatus.DISARMING:
                        z.status = TargetStatus.DISARMED
                        z.disarmed_step = t
                        self._emit(f"{t} disarm {z.id} {z.pos[0]} {z.pos[1]}")
                    r.committed = None
                    self._transition(r, RobotState.FORAGER, "disarmed")
            else:  # pragma: no cover - decision tags are closed
                raise RuntimeError(f"unknown decision tag: {tag!r}")

    def _update_field(self) -> None:
        evaporate(self.field)
        events = self.events
        for rid in sorted(self._deposit_queue):
            robot = self.robots[rid]
            total = deposit_into(self.field, robot.pos, self.rng_decide)
            if events is not None:
                events.append(
                    f"{self.step_no} deposit {rid} {robot.pos[0]} {robot.pos[1]} {total!r}"
                )

    def _explosions(self) -> None:
        t = self.step_no
        sc = self.cfg.scenario
        armed = [z for z in self.world.targets if z.status.armed]
        if not armed:
            return
        draws = self.rng_explode.random(len(armed))
        queue = [z for z, d in zip(armed, draws) if d < sc.p_explode]
        exploded = set()
        while queue:
            z = queue.pop(0)
            if z.id in exploded or not z.status.armed:
                continue
            exploded.add(z.id)
            z.status = TargetStatus.EXPLODED
            z.exploded_step = t
            self._emit(f"{t} explode {z.id} {z.pos[0]} {z.pos[1]}")
            for r in self.robots:
                if r.state is not RobotState.DEAD and chebyshev(r.pos, z.pos) <= sc.blast_radius:
                    self._kill(r, "explosion")
            self.world.mark_inaccessible_region(z.pos, sc.blast_radius)
            for z2 in self.world.targets:
                if z2.status.armed and z2.id not in exploded and chebyshev(z2.pos, z.pos) <= sc.blast_radius:
                    queue.append(z2)

    def _deaths(self) -> None:
        remaining = self.ledger.remaining
        for r in self.robots:
            if r.state is not RobotState.DEAD and remaining[r.id] <= 0.0:
                self._kill(r, "energy")

    def _check_termination(self) -> None:
        world = self.world
        disarmed = sum(1 for z in world.targets if z.status is TargetStatus.DISARMED)
        if (
            world.unexplored_count == 0
            and world.inaccessible_count == 0
            and disarmed == len(world.targets)
        ):
            self._stopped = True
            self._completed = True
            return
        if self.dynamic:
            if self.alive_count == 0:
                self._stopped = True
                return
            armed = any(z.status.armed for z in world.targets)
            if not armed and world.unexplored_count == 0:
                # Nothing left that robots could do: every reachable cell
                # is covered and no target can still be disarmed or blow up.
                self._stopped = True

    # -- public API --------------------------------------------------------

    def step(self) -> None:
        self.step_no += 1
        self._purge()
        self._communicate()
        decisions = self._decide()
        self._apply(decisions)
        self._update_field()
        if self.dump_field_dir is not None:
            self._dump_field()
        if self.dynamic:
            self._explosions()
            self._deaths()
        self.alive_series.append(self.alive_count)
        self._check_termination()

    def _dump_field(self) -> None:
        """Debug aid: write the post-update field as one CSV per step."""
        import os

        os.makedirs(self.dump_field_dir, exist_ok=True)
        path = os.path.join(self.dump_field_dir, f"step_{self.step_no:05d}.csv")
        with open(path, "w", encoding="utf-8") as fh:
            for row in self.field.levels:
                fh.write(",".join(repr(v) for v in row.tolist()) + "\n")

    def run(self) -> RunResult:
        self._check_termination()
        max_steps = self.cfg.scenario.max_steps
        while not self._stopped and self.step_no < max_steps:
            self.step()
        return self._result()

    def _result(self) -> RunResult:
        cfg = self.cfg
        return RunResult(
            seed=self.seed,
            w1=cfg.weights.w1,
            w2=cfg.weights.w2,
            m=cfg.world.m,
            n=cfg.world.n,
            n_robots=cfg.swarm.n_robots,
            n_targets=cfg.world.n_targets,
            r_min=cfg.swarm.r_min,
            r_t=cfg.swarm.r_t,
            scenario=cfg.scenario.mode,
            steps=self.step_no,
            tesc=self.ledger.tesc(),
            f1=f1(self.world),
            f2=f2(self.world),
            targets_found=sum(1 for z in self.world.targets if z.found_step is not None),
            alive_fraction=self.alive_count / cfg.swarm.n_robots,
            completed=self._completed,
            objective=weighted_objective(self.tally, cfg.weights.w1, cfg.weights.w2),
            visits_total=self.tally.visits_total,
            constraints=check_constraints(self.world, cfg.swarm.r_min),
            transitions=self.transitions,
            alive_series=self.alive_series,
            events=self.events,
            debit_records=self.ledger.records,
        )


def run(cfg: Config, seed: int, record_events: bool = False,
        record_debits: bool | None = None) -> RunResult:
    """Run one simulation to termination."""
    return Simulation(cfg, seed, record_events=record_events,
                      record_debits=record_debits).run()
