"""Energy accounting.

Mobility: a move costs 1 unit plus a turn surcharge that grows with the
heading change (45 degrees: 0.4 up to 180 degrees: 1.0); standing still
costs 0.5. Communication: a broadcast costs
``packet_bits * (r_t^psi * e_tx + e_circuit)`` joules and a reception
``packet_bits * e_rx``, both scaled into energy units by ``joule_scale``.
Disarming costs ``disarm_cost`` per robot, charged ratably over the
execution steps. The total swarm energy cost is the sum of every debit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


# Heading indexes run counterclockwise from east; the composite map below
# turns a unit step (dx, dy) into one (y grows downward).
_HEADINGS = {
    (1, 0): 0,
    (1, -1): 1,
    (0, -1): 2,
    (-1, -1): 3,
    (-1, 0): 4,
    (-1, 1): 5,
    (0, 1): 6,
    (1, 1): 7,
}


@dataclass
class EnergyParams:
    move_cost: float = 1.0
    stop_cost: float = 0.5
    turn_costs: dict[int, float] = field(
        default_factory=lambda: {45: 0.4, 90: 0.6, 135: 0.8, 180: 1.0}
    )
    disarm_cost: float = 5.0
    packet_bits: int = 256
    e_tx: float = 1e-12
    e_circuit: float = 1e-7
    e_rx: float = 1e-7
    psi: float = 2.0
    joule_scale: float = 1.0
    bit_rate: float = 3.0  # carried configuration constant; the step model never divides by it
    budget: float = 1000.0

    def validate(self) -> None:
        if self.move_cost < 0 or self.stop_cost < 0 or self.disarm_cost < 0:
            raise ValueError("action costs must be non-negative")
        if self.packet_bits <= 0:
            raise ValueError(f"packet_bits must be positive, got {self.packet_bits}")
        if self.psi < 0:
            raise ValueError(f"psi must be non-negative, got {self.psi}")
        if self.budget <= 0:
            raise ValueError(f"budget must be positive, got {self.budget}")


def heading_of(dx: int, dy: int) -> int:
    """Heading index for a unit step."""
    return _HEADINGS[(dx, dy)]


def turn_degrees(h_from: int, h_to: int) -> int:
    """Absolute heading change in degrees, in {0, 45, 90, 135, 180}."""
    d = abs(h_from - h_to) % 8
    return 45 * min(d, 8 - d)


def movement_cost(params: EnergyParams, prev_heading: int | None, new_heading: int | None, moved: bool) -> float:
    """Mobility cost of one step.

    A robot that did not move pays the stop cost. A robot's first move
    ever (``prev_heading`` is None) has no turn component.
    """
    if not moved:
        return params.stop_cost
    cost = params.move_cost
    if prev_heading is not None and new_heading is not None:
        deg = turn_degrees(prev_heading, new_heading)
        if deg:
            cost += params.turn_costs[deg]
    return cost


def tx_cost(params: EnergyParams, r_t: float) -> float:
    """Energy units for one broadcast over radius r_t."""
    joules = params.packet_bits * (math.pow(r_t, params.psi) * params.e_tx + params.e_circuit)
    return joules * params.joule_scale


def rx_cost(params: EnergyParams) -> float:
    """Energy units for receiving one packet."""
    return params.packet_bits * params.e_rx * params.joule_scale


class EnergyLedger:
    """Per-robot energy bookkeeping.

    Categories are "mobility", "tx", "rx" and "disarm"; the last three
    make up the coordination total. With ``budget=None`` (static
    scenarios) robots never run out, but every debit is still counted.
    When recording is on, each debit is kept as a (step, robot, category,
    amount) tuple so the total can be audited record by record.
    """

    COORDINATION = ("tx", "rx", "disarm")

    def __init__(self, n_robots: int, budget: float | None = None, record: bool = False):
        self.n_robots = n_robots
        self.mobility = [0.0] * n_robots
        self.coordination = [0.0] * n_robots
        self.remaining = [math.inf if budget is None else float(budget)] * n_robots
        self.records: list[tuple[int, int, str, float]] | None = [] if record else None

    def debit(self, step: int, robot_id: int, category: str, amount: float) -> float:
        """Charge one action; returns the robot's remaining energy.

        The full action cost is always booked (a robot can die mid-action,
        so total spend may exceed the budget by at most one action);
        remaining energy clamps at zero.
        """
        if amount < 0:
            raise ValueError(f"negative debit: {amount}")
        if category == "mobility":
            self.mobility[robot_id] += amount
        elif category in self.COORDINATION:
            self.coordination[robot_id] += amount
        else:
            raise ValueError(f"unknown energy category: {category!r}")
        if self.records is not None:
            self.records.append((step, robot_id, category, amount))
        left = self.remaining[robot_id] - amount
        if left < 0.0:
            left = 0.0
        self.remaining[robot_id] = left
        return left

    def tesc(self) -> float:
        """Total energy spent by the swarm, mobility plus coordination."""
        return sum(self.mobility) + sum(self.coordination)
