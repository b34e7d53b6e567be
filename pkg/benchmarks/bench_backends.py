#!/usr/bin/env python3
"""Time the compiled annealing kernel against the pure-Python fallback.

Both backends run the same chains (same Q, schedule, initial state and
uniforms) and must return identical states; the script checks that before
reporting timings.

    python benchmarks/bench_backends.py --dims 2,6,10 --sweeps 1000 --repeats 3
"""
import argparse
import csv
import sys
import time

import numpy as np

from qubobox import _anneal_py
from qubobox.bench import gen_random_spd
from qubobox.qubo import build_qubo
from qubobox.solvers import beta_schedule, default_beta_range

try:
    from qubobox import _anneal
except ImportError:
    _anneal = None


def run_chain(mod, coeffs, betas, state0, uniforms):
    state = state0.copy()
    best = np.empty_like(state0)
    sweep_energy = np.empty(betas.shape[0])
    e = mod.anneal_chain(coeffs, betas, state, uniforms, best, sweep_energy)
    return e, best


def time_backend(mod, coeffs, betas, state0, uniforms, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = run_chain(mod, coeffs, betas, state0, uniforms)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dims", default="2,6,10,20")
    parser.add_argument("--sweeps", type=int, default=1000)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", help="optional CSV path")
    args = parser.parse_args()

    if _anneal is None:
        print("compiled kernel not built; only the fallback is available", file=sys.stderr)
        return 1

    rows = []
    print(f"{'d':>4} {'vars':>5} {'compiled_ms':>12} {'python_ms':>10} {'speedup':>8}")
    for d in (int(x) for x in args.dims.split(",")):
        system = gen_random_spd(d, args.seed)
        p = build_qubo(system, np.zeros(d), 1.0)
        coeffs = np.ascontiguousarray(p.coeffs)
        betas = beta_schedule(*default_beta_range(p, args.seed), args.sweeps)
        rng = np.random.default_rng(args.seed)
        state0 = rng.integers(0, 2, size=2 * d).astype(np.int8)
        uniforms = rng.random((args.sweeps, 2 * d))

        t_c, out_c = time_backend(_anneal, coeffs, betas, state0, uniforms, args.repeats)
        t_p, out_p = time_backend(_anneal_py, coeffs, betas, state0, uniforms, args.repeats)
        if out_c[0] != out_p[0] or out_c[1].tobytes() != out_p[1].tobytes():
            print(f"backends disagree at d={d}", file=sys.stderr)
            return 1
        rows.append({"d": d, "vars": 2 * d, "compiled_ms": 1e3 * t_c, "python_ms": 1e3 * t_p,
                     "speedup": t_p / t_c})
        print(f"{d:>4} {2 * d:>5} {1e3 * t_c:>12.3f} {1e3 * t_p:>10.2f} {t_p / t_c:>8.1f}")

    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
