"""Batch harness: replication sweeps and CSV result tables.

A sweep varies one dotted config path (usually ``weights.w1``) over a list
of values and runs a block of replications per value. Replicate seeds are
``run.seed + replicate_index``, so the worlds of replicate i are identical
across sweep points and two sweeps over the same config are byte-identical
CSV for CSV.
"""

from __future__ import annotations

import copy
import math
import os
from dataclasses import dataclass, field

from pherofly.config import Config, set_weight_w1
from pherofly.engine import RunResult, run

RAW_HEADER = (
    "seed,w1,w2,m,n,n_robots,n_targets,r_min,r_t,scenario,steps,tesc,"
    "f1,f2,targets_found,alive_fraction,completed"
)

SUMMARY_HEADER = (
    "axis,value,replications,steps_mean,steps_std,tesc_mean,tesc_std,"
    "f1_mean,f1_std,f2_mean,f2_std,targets_found_mean,targets_found_std,"
    "alive_fraction_mean,alive_fraction_std,completed_rate"
)


@dataclass
class SweepSpec:
    axis: str = "weights.w1"
    values: tuple = (0.5,)
    # None falls back to the config's run.replications.
    replications: int | None = None


@dataclass
class ResultTable:
    axis: str
    # (axis value, result), in execution order: values outer, replicates inner.
    rows: list[tuple[object, RunResult]] = field(default_factory=list)

    def results_for(self, value) -> list[RunResult]:
        return [r for v, r in self.rows if v == value]

    def values(self) -> list:
        seen = []
        for v, _ in self.rows:
            if v not in seen:
                seen.append(v)
        return seen


def set_axis(cfg: Config, axis: str, value) -> None:
    """Assign one dotted config path; the weight pair stays coupled."""
    if axis == "weights.w1":
        set_weight_w1(cfg, value)
        return
    if axis == "weights.w2":
        # Not routed through set_weight_w1: 1 - (1 - v) can land one ulp off
        # v and the swept value must come back exactly in the CSV.
        cfg.weights.w2 = float(value)
        cfg.weights.w1 = 1.0 - float(value)
        return
    parts = axis.split(".")
    obj = cfg
    for p in parts[:-1]:
        if not hasattr(obj, p):
            raise ValueError(f"unknown sweep axis: {axis!r}")
        obj = getattr(obj, p)
    if not hasattr(obj, parts[-1]):
        raise ValueError(f"unknown sweep axis: {axis!r}")
    current = getattr(obj, parts[-1])
    setattr(obj, parts[-1], type(current)(value) if current is not None else value)


def run_replications(cfg: Config, reps: int | None = None, record_events: bool = False):
    """Run the config's replication block; seeds are run.seed + index."""
    if reps is None:
        reps = cfg.run.replications
    return [run(cfg, cfg.run.seed + i, record_events=record_events) for i in range(reps)]


def sweep(cfg: Config, spec: SweepSpec, progress=None) -> ResultTable:
    """Run the full sweep; see the module docstring for seed discipline."""
    table = ResultTable(axis=spec.axis)
    reps = spec.replications if spec.replications is not None else cfg.run.replications
    for value in spec.values:
        point = copy.deepcopy(cfg)
        set_axis(point, spec.axis, value)
        point.validate()
        for i in range(reps):
            res = run(point, cfg.run.seed + i)
            table.rows.append((value, res))
            if progress is not None:
                progress(value, i, res)
    return table


# -- CSV rendering ---------------------------------------------------------
#
# All numbers are rendered with repr (shortest roundtrip, '.' decimal point
# regardless of locale); booleans become true/false. Rendering the same
# results twice therefore yields byte-identical text.


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def format_raw_row(res: RunResult) -> str:
    return ",".join(
        _fmt(v)
        for v in (
            res.seed,
            res.w1,
            res.w2,
            res.m,
            res.n,
            res.n_robots,
            res.n_targets,
            res.r_min,
            res.r_t,
            res.scenario,
            res.steps,
            res.tesc,
            res.f1,
            res.f2,
            res.targets_found,
            res.alive_fraction,
            res.completed,
        )
    )


def render_raw_csv(results) -> str:
    lines = [RAW_HEADER]
    lines.extend(format_raw_row(r) for r in results)
    return "\n".join(lines) + "\n"


def _mean_std(values) -> tuple[float, float]:
    n = len(values)
    mean = sum(values) / n
    if n < 2:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var)


def render_summary_csv(table: ResultTable) -> str:
    lines = [SUMMARY_HEADER]
    for value in table.values():
        block = table.results_for(value)
        cols = [table.axis, _fmt(value), str(len(block))]
        for metric in ("steps", "tesc", "f1", "f2", "targets_found", "alive_fraction"):
            mean, std = _mean_std([float(getattr(r, metric)) for r in block])
            cols.append(repr(mean))
            cols.append(repr(std))
        completed = sum(1 for r in block if r.completed) / len(block)
        cols.append(repr(completed))
        lines.append(",".join(cols))
    return "\n".join(lines) + "\n"


def write_results(table: ResultTable, out_dir) -> tuple[str, str]:
    """Write raw.csv and summary.csv under out_dir; returns the two paths."""
    os.makedirs(out_dir, exist_ok=True)
    raw_path = os.path.join(out_dir, "raw.csv")
    summary_path = os.path.join(out_dir, "summary.csv")
    with open(raw_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_raw_csv([r for _, r in table.rows]))
    with open(summary_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_summary_csv(table))
    return raw_path, summary_path
