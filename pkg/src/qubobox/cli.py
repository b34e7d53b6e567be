"""Command-line interface.

Exit codes: 0 success, 1 invalid arguments, 2 I/O failure, 3 solver contract
violation (bad system, enumeration too large, ...).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import List, Optional

import numpy as np

from . import theory
from .bench import (
    DEFAULT_BETAS, DEFAULT_EPSILONS, SweepSpec, emit_csv, emit_theory_csv, mean_totals,
    poisson_system, run_sweep,
)
from .box import PAPER_BUFFER, BoxConfig, box_solve, write_trace
from .linalg import ContractError, load_system
from .solvers import BACKEND, SamplerConfig

EXIT_OK, EXIT_ARGS, EXIT_IO, EXIT_CONTRACT = 0, 1, 2, 3

log = logging.getLogger("qubobox")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ARGS, f"{self.prog}: error: {message}\n")


def float_list(text: str) -> List[float]:
    """Parse ``0.1,0.2`` or an inclusive range ``start:stop:step``."""
    try:
        if ":" in text:
            start, stop, step = (float(t) for t in text.split(":"))
            if step <= 0:
                raise ValueError
            n = int(round((stop - start) / step))
            return [round(start + k * step, 12) for k in range(n + 1)]
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list or start:stop:step, got {text!r}") from None


def int_list(text: str) -> List[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--solver", choices=["sa", "exhaustive"], default="sa")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--num-reads", type=int, default=20)
    p.add_argument("--sweeps", type=int, default=1000)


def _add_box_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--beta", type=float, default=0.5, help="box contraction ratio")
    p.add_argument("--eps", type=float, default=1e-6, help="stop once the box is smaller than this")
    p.add_argument("--l-init", type=float, default=1.0)
    p.add_argument("--max-iter", type=int, default=None, help="iteration budget (default: 10x the worst case)")
    p.add_argument("--buffer", type=float, default=0.0,
                   help=f"relative improvement required to translate (the published value is {PAPER_BUFFER:g})")
    p.add_argument("--trace-out", help="write the iteration trace as JSON lines")
    _add_solver_flags(p)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qubobox", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve one system read from a JSON file")
    p.add_argument("system", help="JSON file with d, A, b and optional x_exact")
    _add_box_flags(p)

    p = sub.add_parser("poisson", help="solve the built-in 6x6 Poisson system")
    _add_box_flags(p)

    p = sub.add_parser("sweep", help="beta sweep over random SPD instances, one CSV row per run")
    p.add_argument("--dims", type=int_list, default=[2, 10])
    p.add_argument("--instances", type=int, default=10)
    p.add_argument("--betas", type=float_list, default=list(DEFAULT_BETAS))
    p.add_argument("--eps-list", type=float_list, default=list(DEFAULT_EPSILONS))
    p.add_argument("--out", help="CSV path (default: stdout summary only)")
    _add_solver_flags(p)

    p = sub.add_parser("theory", help="tabulate predicted iteration counts")
    p.add_argument("--eps", type=float_list, default=list(DEFAULT_EPSILONS))
    p.add_argument("--beta-grid", type=float_list, default=float_list("0.05:0.5:0.01"))
    p.add_argument("--out", help="CSV path (default: stdout)")
    return parser


def _sampler(args) -> SamplerConfig:
    return SamplerConfig(num_reads=args.num_reads, sweeps=args.sweeps, seed=args.seed, mode=args.solver)


def _run_box(system, args) -> int:
    cfg = BoxConfig(beta=args.beta, epsilon=args.eps, n_allowable=args.max_iter, l_init=args.l_init,
                    buffer=args.buffer, sampler=_sampler(args))
    res = box_solve(system, cfg)
    if args.trace_out:
        write_trace(res.trace, args.trace_out)
    out = {
        "solution": res.solution.tolist(),
        "n_t": res.n_t,
        "n_c": res.n_c,
        "n_total": res.n_total,
        "converged": res.converged,
        "residual_inf": res.residual_inf,
        "predicted_n_c": theory.contraction_count(cfg.beta, cfg.epsilon, cfg.l_init),
    }
    if system.x_exact is not None:
        out["error_inf"] = float(np.max(np.abs(res.solution - system.x_exact)))
    print(json.dumps(out, indent=2))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    spec = SweepSpec(dims=args.dims, betas=args.betas, epsilons=args.eps_list, instances_per_dim=args.instances,
                     sampler_mode=args.solver, master_seed=args.seed,
                     sampler=SamplerConfig(num_reads=args.num_reads, sweeps=args.sweeps))
    records = run_sweep(spec, progress=lambda r: log.info("d=%d inst=%d beta=%g eps=%g N=%d",
                                                          r.d, r.instance_id, r.beta, r.epsilon, r.n_total))
    if args.out:
        emit_csv(records, args.out)
    print("d,beta,epsilon,mean_n_total")
    for (d, beta, eps), mean in mean_totals(records).items():
        print(f"{d},{beta!r},{eps!r},{mean:.2f}")
    return EXIT_OK


def _cmd_theory(args) -> int:
    grid = [b for b in args.beta_grid if 0.0 < b <= 0.5]
    if len(grid) < len(args.beta_grid):
        log.warning("dropped %d grid values outside (0, 0.5]", len(args.beta_grid) - len(grid))
    curve = [pt for eps in args.eps for pt in theory.theory_curve(eps, grid)]
    if args.out:
        emit_theory_csv(curve, args.out)
    else:
        print(",".join(["beta", "epsilon", "n_c", "n_hat", "n_bar"]))
        for t in curve:
            print(f"{t.beta!r},{t.epsilon!r},{t.n_c},{t.n_hat!r},{t.n_bar!r}")
    s = theory.summary()
    print(f"# optimal beta (worst case) = {s['beta_opt_upper']:.6f}, (average) = {s['beta_opt_average']:.6f}",
          file=sys.stderr)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    log.debug("annealing backend: %s", BACKEND)
    try:
        if args.command == "solve":
            return _run_box(load_system(args.system), args)
        if args.command == "poisson":
            return _run_box(poisson_system(), args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_theory(args)
    except ContractError as exc:
        print(f"qubobox: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except (OSError, json.JSONDecodeError) as exc:
        print(f"qubobox: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
