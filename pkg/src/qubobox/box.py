"""The box algorithm: solve ``A x = b`` through a sequence of QUBOs.

Each iteration encodes ``x = c + L * (-2 q1 + q2)``, minimises the potential
energy over the 4**d lattice points and either moves the centre to a better
point (translation) or shrinks ``L`` by ``beta`` (contraction).  The run stops
once ``L < epsilon`` or the iteration budget is spent.

``l_init`` defaults to 1.  Any reasonable value converges, but a badly sized
initial box costs extra iterations.
"""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .linalg import ContractError, SpdSystem, potential_energy, residual_inf
from .qubo import build_qubo, decode
from .solvers import SamplerConfig, sample
from .theory import upper_bound_formula

PAPER_BUFFER = 1e-8

TRANSLATION = "translation"
CONTRACTION = "contraction"


def default_budget(beta: float, epsilon: float) -> int:
    """Ten times the worst-case iteration count."""
    return 10 * math.ceil(upper_bound_formula(beta, epsilon))


@dataclass(frozen=True)
class BoxConfig:
    beta: float = 0.5
    epsilon: float = 1e-6
    n_allowable: Optional[int] = None
    l_init: float = 1.0
    buffer: float = 0.0
    sampler: SamplerConfig = field(default_factory=SamplerConfig)

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise ContractError(f"beta must lie in (0, 1), got {self.beta}")
        if not self.epsilon > 0.0:
            raise ContractError("epsilon must be positive")
        if not self.l_init > self.epsilon:
            raise ContractError("l_init must exceed epsilon")
        if self.buffer < 0.0:
            raise ContractError("buffer must be non-negative")
        if self.n_allowable is None:
            budget = default_budget(self.beta, self.epsilon / self.l_init)
            object.__setattr__(self, "n_allowable", budget)
        if self.n_allowable < 1:
            raise ContractError("n_allowable must be >= 1")


@dataclass
class BoxState:
    center: np.ndarray
    scale: float
    best_energy: float = 0.0
    n_t: int = 0
    n_c: int = 0


@dataclass(frozen=True)
class IterationRecord:
    index: int
    kind: str
    center_after: List[float]
    scale_after: float
    energy_star: float
    accepted: bool

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self))


@dataclass(frozen=True)
class BoxResult:
    solution: np.ndarray
    n_t: int
    n_c: int
    n_total: int
    converged: bool
    trace: List[IterationRecord]
    residual_inf: float
    final_scale: float
    best_energy: float


def acceptance_test(pi_star: float, pi_hat: float, buffer: float) -> bool:
    """Translate only if ``pi_star < pi_hat * (1 + buffer)``.

    Since ``pi_hat <= 0`` after the first move, this asks for a relative
    improvement of at least ``buffer``; equal energies always contract.
    """
    if buffer < 0.0:
        raise ContractError("buffer must be non-negative")
    return pi_star < pi_hat * (1.0 + buffer)


def iteration_seed(seed: int, index: int) -> int:
    ss = np.random.SeedSequence(int(seed), spawn_key=(2, index))
    return int(ss.generate_state(1, np.uint64)[0])


def box_solve(system: SpdSystem, cfg: BoxConfig = BoxConfig()) -> BoxResult:
    st = BoxState(center=np.zeros(system.d), scale=float(cfg.l_init))
    trace: List[IterationRecord] = []
    converged = False
    while True:
        index = st.n_t + st.n_c
        problem = build_qubo(system, st.center, st.scale)
        sampler = dataclasses.replace(cfg.sampler, seed=iteration_seed(cfg.sampler.seed, index))
        found = sample(problem, sampler)
        x_star = decode(problem, found.assignment)
        # compare true energies; raw QUBO values from different boxes are not commensurable
        pi_star = potential_energy(system, x_star)
        accepted = acceptance_test(pi_star, st.best_energy, cfg.buffer)
        if accepted:
            st.center = x_star
            st.best_energy = pi_star
            st.n_t += 1
        else:
            st.scale = cfg.beta * st.scale
            st.n_c += 1
        trace.append(IterationRecord(
            index, TRANSLATION if accepted else CONTRACTION, st.center.tolist(), st.scale,
            pi_star, accepted,
        ))
        if st.scale < cfg.epsilon:
            converged = True
            break
        if st.n_t + st.n_c > cfg.n_allowable:
            break
    return BoxResult(
        solution=st.center,
        n_t=st.n_t,
        n_c=st.n_c,
        n_total=st.n_t + st.n_c,
        converged=converged,
        trace=trace,
        residual_inf=residual_inf(system, st.center),
        final_scale=st.scale,
        best_energy=st.best_energy,
    )


def write_trace(trace: List[IterationRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in trace:
            fh.write(rec.to_json() + "\n")
