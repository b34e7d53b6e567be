"""QUBO minimisers: exact enumeration and seeded simulated annealing.

The annealing chain runs in a compiled extension when it is available and
falls back to pure Python otherwise.  Set ``QUBOBOX_PURE_PYTHON=1`` to force
the fallback.  Both backends produce identical results for identical input.
"""
from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from .linalg import ContractError
from .qubo import QuboProblem, qubo_energy

if os.environ.get("QUBOBOX_PURE_PYTHON"):
    from ._anneal_py import anneal_chain
    BACKEND = "python"
else:
    try:
        from ._anneal import anneal_chain
        BACKEND = "compiled"
    except ImportError:  # extension not built
        from ._anneal_py import anneal_chain
        BACKEND = "python"

log = logging.getLogger(__name__)

MAX_EXHAUSTIVE_BITS = 24
PROBE_STATES = 100
FALLBACK_BETA_RANGE = (0.1, 10.0)

_PROBE_STREAM = 0
_READ_STREAM = 1


class EnumerationTooLarge(ContractError):
    pass


@dataclass(frozen=True)
class SamplerConfig:
    """Settings shared by all samplers.

    ``beta_schedule`` is the (hot, cold) inverse-temperature pair of the
    geometric annealing schedule; ``None`` derives it from the problem.
    """

    num_reads: int = 20
    sweeps: int = 1000
    beta_schedule: Optional[Tuple[float, float]] = None
    seed: int = 0
    mode: str = "sa"

    def __post_init__(self):
        if self.num_reads < 1:
            raise ContractError("num_reads must be >= 1")
        if self.sweeps < 1:
            raise ContractError("sweeps must be >= 1")
        if self.mode not in ("sa", "exhaustive"):
            raise ContractError(f"unknown sampler mode {self.mode!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ContractError("seed must be a 64-bit unsigned integer")
        if self.beta_schedule is not None:
            hot, cold = self.beta_schedule
            if not 0.0 < hot < cold:
                raise ContractError("beta_schedule must satisfy 0 < beta_hot < beta_cold")


@dataclass(frozen=True)
class SampleResult:
    assignment: np.ndarray
    energy: float
    reads_used: int
    info: dict = field(default_factory=dict, compare=False)


@lru_cache(maxsize=None)
def _all_states(n: int) -> np.ndarray:
    # row k holds the bits of integer k, variable j is bit j
    idx = np.arange(2**n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(np.float64)


def solve_exhaustive(p: QuboProblem) -> SampleResult:
    """Global minimum by enumeration; ties go to the lowest integer encoding."""
    n = p.num_variables
    if n > MAX_EXHAUSTIVE_BITS:
        raise EnumerationTooLarge(
            f"exhaustive enumeration is limited to {MAX_EXHAUSTIVE_BITS} binary variables (d <= "
            f"{MAX_EXHAUSTIVE_BITS // 2}); this problem has {n}"
        )
    states = _all_states(n)
    best_e = math.inf
    best_k = 0
    chunk = 1 << 16
    for start in range(0, states.shape[0], chunk):
        block = states[start : start + chunk]
        energies = 0.5 * np.einsum("ij,ij->i", block @ p.coeffs, block)
        k = int(np.argmin(energies))
        if energies[k] < best_e:
            best_e, best_k = float(energies[k]), start + k
    q = states[best_k].astype(np.int8)
    return SampleResult(q, qubo_energy(p, q), 1)


def flip_deltas(coeffs: np.ndarray, states: np.ndarray) -> np.ndarray:
    """Single-flip energy changes for each row of ``states``."""
    s = np.asarray(states, dtype=np.float64)
    return (1.0 - 2.0 * s) * (s @ coeffs) + 0.5 * np.diag(coeffs)


def default_beta_range(p: QuboProblem, seed: int) -> Tuple[float, float]:
    """Adaptive (hot, cold) range from single-flip energy changes of random probe states."""
    rng = _stream(seed, _PROBE_STREAM)
    states = rng.integers(0, 2, size=(PROBE_STATES, p.num_variables))
    mags = np.abs(flip_deltas(p.coeffs, states))
    mags = mags[mags > 0.0]
    if mags.size == 0:
        return FALLBACK_BETA_RANGE
    hot = math.log(2.0) / float(mags.max())
    cold = math.log(100.0) / float(mags.min())
    if not (0.0 < hot < cold) or not math.isfinite(cold):
        return FALLBACK_BETA_RANGE
    return hot, cold


def beta_schedule(hot: float, cold: float, sweeps: int) -> np.ndarray:
    if sweeps == 1:
        return np.array([cold])
    return np.geomspace(hot, cold, sweeps)


def _stream(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=key)
    return np.random.Generator(np.random.PCG64(ss))


def solve_sa(p: QuboProblem, cfg: SamplerConfig = SamplerConfig()) -> SampleResult:
    """Simulated annealing over ``cfg.num_reads`` independent chains.

    Read ``r`` draws its initial state and acceptance uniforms from its own
    PCG64 stream keyed by ``(seed, 1, r)``, so results are reproducible and a
    run with more reads extends a run with fewer.
    """
    n = p.num_variables
    hot, cold = cfg.beta_schedule or default_beta_range(p, cfg.seed)
    betas = beta_schedule(hot, cold, cfg.sweeps)
    coeffs = np.ascontiguousarray(p.coeffs, dtype=np.float64)

    best_q = None
    best_e = math.inf
    sweep_energy = np.empty(cfg.sweeps)
    for r in range(cfg.num_reads):
        rng = _stream(cfg.seed, _READ_STREAM, r)
        state = rng.integers(0, 2, size=n).astype(np.int8)
        uniforms = rng.random((cfg.sweeps, n))
        chain_best = np.empty(n, dtype=np.int8)
        anneal_chain(coeffs, betas, state, uniforms, chain_best, sweep_energy)
        e = qubo_energy(p, chain_best)
        if e < best_e:
            best_e, best_q = e, chain_best
    return SampleResult(best_q, best_e, cfg.num_reads, {"beta_range": (hot, cold)})


def sample(p: QuboProblem, cfg: SamplerConfig = SamplerConfig()) -> SampleResult:
    """Backend-agnostic entry point used by the box driver.

    Exhaustive mode is honoured up to ``MAX_EXHAUSTIVE_BITS`` variables; larger
    problems are annealed instead, with a warning.
    """
    if cfg.mode == "exhaustive":
        if p.num_variables <= MAX_EXHAUSTIVE_BITS:
            return solve_exhaustive(p)
        log.warning("%d variables exceed the enumeration bound; using simulated annealing", p.num_variables)
    return solve_sa(p, cfg)
