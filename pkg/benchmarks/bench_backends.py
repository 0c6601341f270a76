"""Compare the compiled kernels against the pure Python fallback.

Times the four hot kernels in isolation, then a capped full run under each
backend, and checks that the two event logs are byte-identical (they must
be: the backends are interchangeable by contract).

Usage: python3 benchmarks/bench_backends.py [--steps N] [--seed N]
"""

import argparse
import time

import numpy as np

from pherofly import kernels
from pherofly.config import Config
from pherofly.engine import run


def best_of(fn, repeats=5, inner=200):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(inner):
            fn()
        best = min(best, (time.perf_counter() - t0) / inner)
    return best


def micro(backend):
    kernels.use_backend(backend)
    rng = np.random.default_rng(0)
    levels = rng.random((50, 50)) * 2.0
    eps = rng.random(81)
    state = np.zeros(50 * 50, dtype=np.uint8)
    occ = bytearray(50 * 50)
    out_x = np.empty(8, dtype=np.int32)
    out_y = np.empty(8, dtype=np.int32)
    out_tau = np.empty(8)
    out_s = np.empty(8)
    u = rng.random(8)

    def options_and_pick():
        k = kernels.open_options(state, occ, levels, 50, 50, 25, 25, out_x, out_y, out_tau)
        kernels.pick_min_score(out_tau[:k], u[:k], 1.0, 1.0, 0.9, 1e-12, out_s)

    return {
        "evaporate": best_of(lambda: kernels.evaporate(levels, 0.1)),
        "deposit_disk": best_of(
            lambda: kernels.deposit_disk(levels, 25, 25, 2.0, 0.5, 0.5, 4.0, eps)
        ),
        "open+pick": best_of(options_and_pick),
        "urge_minmax": best_of(
            lambda: kernels.urge_minmax(state, occ, levels, 50, 50, 25, 25)
        ),
    }


def full_run(backend, steps, seed):
    kernels.use_backend(backend)
    cfg = Config()
    cfg.scenario.max_steps = steps
    t0 = time.perf_counter()
    res = run(cfg, seed, record_events=True)
    return time.perf_counter() - t0, res


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=2000, help="full-run step cap")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    backends = kernels.available_backends()
    if "compiled" not in backends:
        print("compiled kernels not built; timing the pure backend only")

    rows = {b: micro(b) for b in backends}
    names = list(next(iter(rows.values())))
    print("kernel microbenchmarks (best of 5, 50x50 field, microseconds/op)")
    print(f"  {'kernel':<14}" + "".join(f"{b:>12}" for b in backends))
    for name in names:
        cells = "".join(f"{rows[b][name] * 1e6:>12.2f}" for b in backends)
        print(f"  {name:<14}{cells}")
    if "compiled" in backends:
        print(f"  {'(speedup)':<14}" + "".join(
            f"{rows['pure'][n] / rows['compiled'][n]:>11.1f}x" for n in names
        ))

    print(f"\nfull run (default shape, {args.steps}-step cap, seed {args.seed})")
    results = {}
    for b in backends:
        dt, res = full_run(b, args.steps, args.seed)
        results[b] = (dt, res)
        print(f"  {b:<9} {dt:7.2f} s  ({dt / res.steps * 1e3:.3f} ms/step, {res.steps} steps)")
    if "compiled" in backends:
        (dc, rc), (dp, rp) = results["compiled"], results["pure"]
        print(f"  speedup   {dp / dc:.2f}x")
        same = rc.events == rp.events
        print(f"  event logs identical: {'yes' if same else 'NO'}")
        if not same:
            raise SystemExit("backend divergence: event logs differ")
    kernels.use_backend(backends[0])


if __name__ == "__main__":
    main()
