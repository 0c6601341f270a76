"""Run configuration: defaults, YAML parsing, validation.

A config file is a YAML document with nested sections (all optional, all
keys defaulted):

    world:     {m, n, n_targets, obstacles}
    swarm:     {n_robots, r_min, r_t, coordinator_counts, arrive_range, t_disarm}
    pheromone: {delta_tau0, a1, a2, rho, r_s, phi, lam, eta_base, tau_floor}
    firefly:   {alpha, beta0, gamma, delta_margin}
    energy:    {move_cost, stop_cost, turn_costs, disarm_cost, packet_bits,
                e_tx, e_circuit, e_rx, psi, joule_scale, bit_rate, budget}
    scenario:  {mode, p_explode, blast_radius, max_steps}
    weights:   {w1, w2}   (give one and the other is filled in)
    run:       {seed, replications}

Unknown sections or keys are rejected rather than ignored.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import yaml

from pherofly.energy import EnergyParams
from pherofly.pheromone import PheromoneParams
from pherofly.recruit import FireflyParams


@dataclass
class WorldConfig:
    m: int = 50
    n: int = 50
    n_targets: int = 10
    # None, a density in [0, 1], or an explicit list of [x, y] pairs.
    obstacles: object = None


@dataclass
class SwarmConfig:
    n_robots: int = 25
    r_min: int = 3
    r_t: float = 6.0
    coordinator_counts: bool = True
    arrive_range: int = 1
    t_disarm: int = 5


@dataclass
class ScenarioConfig:
    mode: str = "static"
    p_explode: float = 5e-4
    blast_radius: int = 2
    max_steps: int = 20000


@dataclass
class Weights:
    w1: float = 0.5
    w2: float = 0.5


@dataclass
class RunConfig:
    seed: int = 0
    replications: int = 1


@dataclass
class Config:
    world: WorldConfig = field(default_factory=WorldConfig)
    swarm: SwarmConfig = field(default_factory=SwarmConfig)
    pheromone: PheromoneParams = field(default_factory=PheromoneParams)
    firefly: FireflyParams = field(default_factory=FireflyParams)
    energy: EnergyParams = field(default_factory=EnergyParams)
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    weights: Weights = field(default_factory=Weights)
    run: RunConfig = field(default_factory=RunConfig)

    def validate(self) -> None:
        w = self.world
        if w.m < 2 or w.n < 2:
            raise ValueError(f"invalid dimensions: need m, n >= 2, got {w.m}x{w.n}")
        if w.n_targets < 0:
            raise ValueError(f"negative target count: {w.n_targets}")
        s = self.swarm
        if s.n_robots < 1:
            raise ValueError(f"need at least one robot, got {s.n_robots}")
        if not 1 <= s.r_min <= s.n_robots:
            raise ValueError(f"r_min must lie in [1, n_robots], got {s.r_min}")
        if s.r_t <= 0:
            raise ValueError(f"r_t must be positive, got {s.r_t}")
        if s.arrive_range < 1:
            raise ValueError(f"arrive_range must be at least 1, got {s.arrive_range}")
        if s.t_disarm < 1:
            raise ValueError(f"t_disarm must be at least 1, got {s.t_disarm}")
        self.pheromone.validate()
        self.firefly.validate()
        self.energy.validate()
        sc = self.scenario
        if sc.mode not in ("static", "dynamic"):
            raise ValueError(f"scenario mode must be 'static' or 'dynamic', got {sc.mode!r}")
        if not 0.0 <= sc.p_explode <= 1.0:
            raise ValueError(f"p_explode must lie in [0, 1], got {sc.p_explode}")
        if sc.blast_radius < 0:
            raise ValueError(f"blast_radius must be non-negative, got {sc.blast_radius}")
        if sc.max_steps < 1:
            raise ValueError(f"max_steps must be at least 1, got {sc.max_steps}")
        wt = self.weights
        if wt.w1 < 0 or wt.w2 < 0:
            raise ValueError(f"weights must be non-negative, got w1={wt.w1}, w2={wt.w2}")
        if abs(wt.w1 + wt.w2 - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1, got w1 + w2 = {wt.w1 + wt.w2}")
        if self.run.replications < 1:
            raise ValueError(f"replications must be at least 1, got {self.run.replications}")


_SECTIONS = {
    "world": WorldConfig,
    "swarm": SwarmConfig,
    "pheromone": PheromoneParams,
    "firefly": FireflyParams,
    "energy": EnergyParams,
    "scenario": ScenarioConfig,
    "weights": Weights,
    "run": RunConfig,
}


def _build_section(name, cls, data):
    if not isinstance(data, dict):
        raise ValueError(f"section {name!r} must be a mapping, got {type(data).__name__}")
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValueError(f"unknown key(s) in section {name!r}: {', '.join(unknown)}")
    if name == "world" and "obstacles" in data and isinstance(data["obstacles"], list):
        data = dict(data, obstacles=[(int(x), int(y)) for x, y in data["obstacles"]])
    if name == "energy" and "turn_costs" in data:
        data = dict(data, turn_costs={int(k): float(v) for k, v in data["turn_costs"].items()})
    return cls(**data)


def config_from_dict(doc: dict) -> Config:
    """Build and validate a Config from a nested plain dict."""
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ValueError(f"config root must be a mapping, got {type(doc).__name__}")
    unknown = sorted(set(doc) - set(_SECTIONS))
    if unknown:
        raise ValueError(f"unknown config section(s): {', '.join(unknown)}")
    kwargs = {}
    for name, cls in _SECTIONS.items():
        if name in doc:
            kwargs[name] = _build_section(name, cls, doc[name])
    cfg = Config(**kwargs)
    wt = doc.get("weights", {})
    if isinstance(wt, dict) and ("w1" in wt) != ("w2" in wt):
        # Only one weight given: the pair always sums to 1.
        if "w1" in wt:
            cfg.weights.w2 = 1.0 - cfg.weights.w1
        else:
            cfg.weights.w1 = 1.0 - cfg.weights.w2
    cfg.validate()
    return cfg


def parse_config(text: str) -> Config:
    """Parse a YAML config document."""
    return config_from_dict(yaml.safe_load(text))


def render_config(cfg: Config) -> str:
    """Render a Config as YAML; parse_config inverts this exactly."""
    doc = {}
    for name in _SECTIONS:
        section = dataclasses.asdict(getattr(cfg, name))
        if name == "world" and isinstance(section.get("obstacles"), list):
            # safe_dump has no representer for tuples; the parser turns the
            # lists back into coordinate tuples.
            section["obstacles"] = [list(c) for c in section["obstacles"]]
        doc[name] = section
    return yaml.safe_dump(doc, sort_keys=False)


def load_config(path) -> Config:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def set_weight_w1(cfg: Config, w1: float) -> None:
    """Set the weight pair from w1 alone, keeping the sum at 1."""
    cfg.weights.w1 = float(w1)
    cfg.weights.w2 = 1.0 - float(w1)
