"""Iteration-count predictions for the box algorithm as a function of the
contraction ratio ``beta`` and the termination scale ``epsilon``.

Worst case:  N_hat = (1 + 1/(2 beta)) * log_beta(epsilon)
Average:     N_bar = (1 + 3/(8 beta)) * log_beta(epsilon)

Setting the beta-derivative to zero gives ``ln b + 2 b + 1 = 0`` for the
worst case and ``3 ln b + 8 b + 3 = 0`` for the average; neither root depends
on epsilon.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional

from scipy.optimize import bisect

from .linalg import ContractError

ROOT_BRACKET = (1e-6, 0.999)
ROOT_XTOL = 1e-12
WORST_CASE_COEF = 1.0 / 2.0
AVERAGE_COEF = 3.0 / 8.0


def contraction_count(beta: float, epsilon: float, l_init: float = 1.0) -> int:
    """Number of ``L <- beta * L`` steps until ``L < epsilon``.

    Uses the same floating-point recurrence as the box driver, so the count is
    exact for the driver even when ``epsilon`` is an exact power of ``beta``.
    """
    if not 0.0 < beta < 1.0:
        raise ContractError(f"beta must lie in (0, 1), got {beta}")
    if not 0.0 < epsilon < l_init:
        raise ContractError(f"need 0 < epsilon < l_init, got epsilon={epsilon}, l_init={l_init}")
    scale, k = float(l_init), 0
    while not scale < epsilon:
        scale = beta * scale
        k += 1
    return k


def _total(beta: float, epsilon: float, coef: float) -> float:
    return (1.0 + coef / beta) * math.log(epsilon) / math.log(beta)


def _check_bound_domain(beta: float, epsilon: float) -> None:
    if not 0.0 < beta <= 0.5:
        raise ContractError(f"the iteration bounds assume 0 < beta <= 0.5, got {beta}")
    if not 0.0 < epsilon < 1.0:
        raise ContractError(f"epsilon must lie in (0, 1), got {epsilon}")


def upper_bound_total(beta: float, epsilon: float) -> float:
    _check_bound_domain(beta, epsilon)
    return _total(beta, epsilon, WORST_CASE_COEF)


def average_total(beta: float, epsilon: float) -> float:
    _check_bound_domain(beta, epsilon)
    return _total(beta, epsilon, AVERAGE_COEF)


def upper_bound_formula(beta: float, epsilon: float) -> float:
    """Worst-case formula evaluated without the ``beta <= 0.5`` guard."""
    return _total(beta, epsilon, WORST_CASE_COEF)


def upper_stationarity(beta: float) -> float:
    return math.log(beta) + 2.0 * beta + 1.0


def average_stationarity(beta: float) -> float:
    return 3.0 * math.log(beta) + 8.0 * beta + 3.0


def optimal_beta_upper() -> float:
    return bisect(upper_stationarity, *ROOT_BRACKET, xtol=ROOT_XTOL)


def optimal_beta_average() -> float:
    return bisect(average_stationarity, *ROOT_BRACKET, xtol=ROOT_XTOL)


def reduction(n_opt: float, n_ref: float) -> float:
    """Fractional saving ``1 - n_opt / n_ref``."""
    return 1.0 - n_opt / n_ref


def speedup(n_opt: float, n_ref: float) -> float:
    """Relative speed-up ``n_ref / n_opt - 1``."""
    return n_ref / n_opt - 1.0


@dataclass(frozen=True)
class TheoryBounds:
    beta: float
    epsilon: float
    n_c: Optional[int]
    n_hat: Optional[float]
    n_bar: Optional[float]
    error: Optional[str] = None


def theory_point(beta: float, epsilon: float) -> TheoryBounds:
    try:
        return TheoryBounds(
            beta, epsilon, contraction_count(beta, epsilon), upper_bound_total(beta, epsilon),
            average_total(beta, epsilon),
        )
    except ContractError as exc:
        return TheoryBounds(beta, epsilon, None, None, None, str(exc))


def theory_curve(epsilon: float, beta_grid: Iterable[float]) -> List[TheoryBounds]:
    """Tabulate contraction count, worst-case and average totals over ``beta_grid``.

    Points outside the formulas' domain come back with ``error`` set instead
    of raising, so one bad grid value does not lose the rest of the table.
    """
    return [theory_point(float(b), float(epsilon)) for b in beta_grid]


def summary(epsilon: float = 1e-6, reference_beta: float = 0.5) -> dict:
    """Optimal ratios and their savings relative to ``reference_beta``."""
    b_up = optimal_beta_upper()
    b_avg = optimal_beta_average()
    n_hat_opt, n_hat_ref = upper_bound_total(b_up, epsilon), upper_bound_total(reference_beta, epsilon)
    n_bar_opt, n_bar_ref = average_total(b_avg, epsilon), average_total(reference_beta, epsilon)
    return {
        "epsilon": epsilon,
        "beta_opt_upper": b_up,
        "beta_opt_average": b_avg,
        "n_hat_opt": n_hat_opt,
        "n_hat_ref": n_hat_ref,
        "n_bar_opt": n_bar_opt,
        "n_bar_ref": n_bar_ref,
        "upper_reduction": reduction(n_hat_opt, n_hat_ref),
        "upper_speedup": speedup(n_hat_opt, n_hat_ref),
        "average_reduction": reduction(n_bar_opt, n_bar_ref),
        "average_speedup": speedup(n_bar_opt, n_bar_ref),
    }
