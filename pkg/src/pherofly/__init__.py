"""Grid-world swarm simulator.

Robots explore a rectangular cell grid while avoiding each other through a
repulsive pheromone field, discover hazardous targets, and recruit peers
with a firefly-style attractiveness signal until enough of them gather to
disarm each target cooperatively. A batch harness sweeps the weight pair
that trades exploration effort against recruitment effort and writes CSV
tables of the resulting mission statistics.
"""

from pherofly.world import CellState, Target, TargetStatus, World, new_world
from pherofly.pheromone import PheromoneField, PheromoneParams
from pherofly.recruit import FireflyParams, HelpRequest
from pherofly.robot_fsm import Robot, RobotState
from pherofly.energy import EnergyLedger, EnergyParams
from pherofly.config import Config, load_config, parse_config
from pherofly.engine import RunResult, Simulation, run
from pherofly.harness import SweepSpec, sweep

__version__ = "0.1.0"

__all__ = [
    "CellState",
    "Config",
    "EnergyLedger",
    "EnergyParams",
    "FireflyParams",
    "HelpRequest",
    "PheromoneField",
    "PheromoneParams",
    "Robot",
    "load_config",
    "RobotState",
    "RunResult",
    "Simulation",
    "SweepSpec",
    "Target",
    "TargetStatus",
    "World",
    "new_world",
    "parse_config",
    "run",
    "sweep",
]
