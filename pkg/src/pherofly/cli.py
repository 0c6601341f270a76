"""Command line interface.

Subcommands:

* ``run``      one config, one or more replications; prints a line per run
* ``sweep``    vary one config path over a list of values, write CSV tables
* ``validate`` parse and validate a config, print the resolved summary
"""

from __future__ import annotations

import argparse
import os
import sys

from pherofly import kernels
from pherofly.config import load_config
from pherofly.engine import Simulation
from pherofly.harness import SweepSpec, render_raw_csv, sweep, write_results


def _add_common(p):
    p.add_argument("config", help="YAML config file")
    p.add_argument("--seed", type=int, default=None, help="override run.seed")
    p.add_argument("--reps", type=int, default=None, help="override run.replications")
    p.add_argument("--out", default=None, help="directory for CSV output")
    p.add_argument(
        "--backend",
        choices=kernels.available_backends(),
        default=None,
        help="kernel backend (default: compiled when built)",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pherofly",
        description="Swarm exploration and cooperative disarmament simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one configuration")
    _add_common(p_run)
    p_run.add_argument(
        "--dump-events",
        default=None,
        metavar="PATH",
        help="write the event log (one file per replication: PATH, PATH.1, ...)",
    )
    p_run.add_argument(
        "--dump-pheromone",
        default=None,
        metavar="DIR",
        help="write the pheromone field after every step (debug, slow)",
    )

    p_sweep = sub.add_parser("sweep", help="sweep one config path over values")
    _add_common(p_sweep)
    p_sweep.add_argument("--axis", default="weights.w1", help="dotted config path to vary")
    p_sweep.add_argument(
        "--values",
        required=True,
        help="comma-separated values for the axis, e.g. 0.1,0.3,0.5",
    )

    p_val = sub.add_parser("validate", help="check a config file")
    p_val.add_argument("config", help="YAML config file")
    return parser


def _apply_overrides(cfg, args):
    if args.seed is not None:
        cfg.run.seed = args.seed
    if args.reps is not None:
        cfg.run.replications = args.reps
    if args.backend is not None:
        kernels.use_backend(args.backend)


def _print_result(res):
    print(
        f"seed={res.seed} steps={res.steps} f1={res.f1:.4f} f2={res.f2} "
        f"tesc={res.tesc:.3f} alive={res.alive_fraction:.2f} "
        f"completed={'yes' if res.completed else 'no'}"
    )


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    _apply_overrides(cfg, args)
    results = []
    for i in range(cfg.run.replications):
        seed = cfg.run.seed + i
        sim = Simulation(
            cfg,
            seed,
            record_events=args.dump_events is not None,
            dump_field_dir=args.dump_pheromone,
        )
        res = sim.run()
        _print_result(res)
        results.append(res)
        if args.dump_events is not None:
            path = args.dump_events if i == 0 else f"{args.dump_events}.{i}"
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write("\n".join(res.events) + "\n" if res.events else "")
    if args.out is not None:
        os.makedirs(args.out, exist_ok=True)
        raw = os.path.join(args.out, "raw.csv")
        with open(raw, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(render_raw_csv(results))
        print(f"wrote {raw}")
    return 0


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    _apply_overrides(cfg, args)
    values = tuple(float(v) for v in args.values.split(","))
    spec = SweepSpec(axis=args.axis, values=values, replications=args.reps)

    def progress(value, i, res):
        print(f"{args.axis}={value} rep={i}: steps={res.steps} f1={res.f1:.4f} f2={res.f2}")

    table = sweep(cfg, spec, progress=progress)
    out = args.out if args.out is not None else "results"
    raw_path, summary_path = write_results(table, out)
    print(f"wrote {raw_path}")
    print(f"wrote {summary_path}")
    return 0


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    w = cfg.world
    s = cfg.swarm
    print(
        f"ok: {w.m}x{w.n} grid, {s.n_robots} robots, {w.n_targets} targets, "
        f"r_min={s.r_min}, r_t={s.r_t}, scenario={cfg.scenario.mode}, "
        f"w=({cfg.weights.w1}, {cfg.weights.w2}), "
        f"seed={cfg.run.seed}, replications={cfg.run.replications}"
    )
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        return cmd_validate(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
