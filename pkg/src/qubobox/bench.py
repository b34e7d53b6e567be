"""Test-system generators and beta-sweep experiments.

Random draws use numpy's PCG64 generator so every platform regenerates the
same instances from the same seed.
"""
from __future__ import annotations

import csv
import dataclasses
import math
import time
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence

import numpy as np

from .box import BoxConfig, box_solve
from .linalg import ContractError, SpdSystem
from .solvers import SamplerConfig
from .theory import TheoryBounds

SWEEP_COLUMNS = [
    "instance_id", "d", "beta", "epsilon", "seed", "n_t", "n_c", "n_total",
    "residual_inf", "converged", "wall_time_ms",
]
THEORY_COLUMNS = ["beta", "epsilon", "n_c", "n_hat", "n_bar"]
DEFAULT_BETAS = tuple(round(0.05 * k, 2) for k in range(1, 19))
DEFAULT_EPSILONS = (1e-6, 1e-8)


def gen_random_spd(d: int, seed: int) -> SpdSystem:
    """``A = d I - (B + B^T) / 2`` with ``B ~ U[0, 1)`` and ``x_exact ~ U[-2, 1]``."""
    if d < 1:
        raise ContractError("d must be >= 1")
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    b_mat = rng.random((d, d))
    a = d * np.eye(d) - (b_mat + b_mat.T) / 2
    x = rng.uniform(-2.0, 1.0, size=d)
    return SpdSystem.from_exact(a, x)


def poisson_system() -> SpdSystem:
    """6x6 finite-difference matrix of a 1-D Poisson problem with a fixed solution."""
    a = np.array([
        [6, -6, 0, 0, 0, 0],
        [-6, 12, -6, 0, 0, 0],
        [0, -6, 12, -6, 0, 0],
        [0, 0, -6, 12, -6, 0],
        [0, 0, 0, -6, 12, -6],
        [0, 0, 0, 0, -6, 12],
    ], dtype=np.float64)
    pi = np.pi
    x = np.array([-pi / 9, pi / 11, -pi / 20, pi / 8, 0.05 * pi, -pi / 5])
    return SpdSystem.from_exact(a, x)


def instance_seed(master_seed: int, d: int, instance_id: int) -> int:
    ss = np.random.SeedSequence(int(master_seed), spawn_key=(d, instance_id))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class SweepSpec:
    dims: Sequence[int]
    betas: Sequence[float] = DEFAULT_BETAS
    epsilons: Sequence[float] = DEFAULT_EPSILONS
    instances_per_dim: int = 10
    sampler_mode: str = "sa"
    master_seed: int = 0
    sampler: SamplerConfig = field(default_factory=SamplerConfig)

    def __post_init__(self):
        if not self.dims or not self.betas or not self.epsilons:
            raise ContractError("dims, betas and epsilons must be non-empty")
        if any(not 0.0 < b < 1.0 for b in self.betas):
            raise ContractError("betas must lie in (0, 1)")
        if self.instances_per_dim < 1:
            raise ContractError("instances_per_dim must be >= 1")
        if self.sampler_mode not in ("sa", "exhaustive"):
            raise ContractError(f"unknown sampler mode {self.sampler_mode!r}")


@dataclass(frozen=True)
class RunRecord:
    instance_id: int
    d: int
    beta: float
    epsilon: float
    seed: int
    n_t: int
    n_c: int
    n_total: int
    residual_inf: float
    converged: bool
    wall_time_ms: float


def run_one(system: SpdSystem, cfg: BoxConfig, instance_id: int, seed: int) -> RunRecord:
    t0 = time.perf_counter()
    try:
        res = box_solve(system, cfg)
    except Exception:  # a failed cell becomes a non-converged row
        return RunRecord(instance_id, system.d, cfg.beta, cfg.epsilon, seed, 0, 0, 0, math.nan, False,
                         (time.perf_counter() - t0) * 1e3)
    return RunRecord(instance_id, system.d, cfg.beta, cfg.epsilon, seed, res.n_t, res.n_c, res.n_total,
                     res.residual_inf, res.converged, (time.perf_counter() - t0) * 1e3)


def run_sweep(spec: SweepSpec, progress=None) -> List[RunRecord]:
    """Run every (d, instance, beta, epsilon) cell.

    A given (d, instance) uses one system and one sampler seed for all betas and
    epsilons, so comparisons across beta are paired.
    """
    sampler = dataclasses.replace(spec.sampler, mode=spec.sampler_mode)
    rows = []
    for d in spec.dims:
        for inst in range(spec.instances_per_dim):
            seed = instance_seed(spec.master_seed, d, inst)
            system = gen_random_spd(d, seed)
            for beta in spec.betas:
                for eps in spec.epsilons:
                    cfg = BoxConfig(beta=beta, epsilon=eps, sampler=dataclasses.replace(sampler, seed=seed))
                    rows.append(run_one(system, cfg, inst, seed))
                    if progress is not None:
                        progress(rows[-1])
    rows.sort(key=lambda r: (r.d, r.instance_id, r.beta, r.epsilon))
    return rows


def mean_totals(records: Iterable[RunRecord]) -> dict:
    """Mean ``n_total`` keyed by ``(d, beta, epsilon)``."""
    groups: dict = {}
    for r in records:
        groups.setdefault((r.d, r.beta, r.epsilon), []).append(r.n_total)
    return {k: float(np.mean(v)) for k, v in sorted(groups.items())}


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def _write_rows(path, columns, rows) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_fmt(row[c]) for c in columns])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def emit_csv(records: Iterable[RunRecord], path) -> None:
    _write_rows(path, SWEEP_COLUMNS, (dataclasses.asdict(r) for r in records))


def emit_theory_csv(curve: Iterable[TheoryBounds], path) -> None:
    _write_rows(path, THEORY_COLUMNS, (dataclasses.asdict(t) for t in curve))
