"""Solve SPD linear systems with the QUBO box algorithm."""
from .bench import gen_random_spd, poisson_system, run_sweep, SweepSpec, RunRecord
from .box import BoxConfig, BoxResult, IterationRecord, acceptance_test, box_solve
from .linalg import ContractError, SpdSystem, is_spd, mat_vec, potential_energy, residual_inf
from .qubo import QuboProblem, build_qubo, decode, qubo_energy
from .solvers import BACKEND, SampleResult, SamplerConfig, sample, solve_exhaustive, solve_sa
from .theory import (
    TheoryBounds,
    average_total,
    contraction_count,
    optimal_beta_average,
    optimal_beta_upper,
    theory_curve,
    upper_bound_total,
)

__version__ = "0.1.0"
