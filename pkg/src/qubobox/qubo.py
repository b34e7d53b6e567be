"""QUBO construction for one box iteration.

Each real unknown is encoded with two bits, ``x = c + L * (-2 q1 + q2)``.
Binary variables are ordered ``[q1_0 .. q1_{d-1}, q2_0 .. q2_{d-1}]`` and the
QUBO energy is ``0.5 * q^T Q q`` with the linear part folded onto the diagonal.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .linalg import ContractError, SpdSystem, as_vector


def encoding_map(d: int) -> np.ndarray:
    """The d x 2d matrix ``M`` with ``M @ q = -2 q1 + q2``."""
    eye = np.eye(d)
    return np.hstack([-2.0 * eye, eye])


@dataclass(frozen=True)
class QuboProblem:
    coeffs: np.ndarray
    offset: float
    center: np.ndarray
    scale: float
    system: SpdSystem

    @property
    def d(self) -> int:
        return self.center.shape[0]

    @property
    def num_variables(self) -> int:
        return self.coeffs.shape[0]


def build_qubo(system: SpdSystem, center, scale: float) -> QuboProblem:
    c = as_vector(center, "center")
    if c.shape[0] != system.d:
        raise ContractError(f"center has length {c.shape[0]}, system has d={system.d}")
    scale = float(scale)
    if not scale > 0.0 or not np.isfinite(scale):
        raise ContractError(f"box scale must be positive and finite, got {scale}")

    m = encoding_map(system.d)
    a = system.a
    quad = scale * scale * (m.T @ a @ m)
    quad = 0.5 * (quad + quad.T)
    linear = scale * (m.T @ (a @ c - system.b))
    # q_i**2 == q_i, so a linear term r_i becomes 2 r_i on the diagonal of the 1/2-form
    coeffs = quad + np.diag(2.0 * linear)
    coeffs.setflags(write=False)
    offset = float(0.5 * (c @ (a @ c)) - c @ system.b)
    return QuboProblem(coeffs, offset, c, scale, system)


def split_assignment(p: QuboProblem, q) -> Tuple[np.ndarray, np.ndarray]:
    q = np.asarray(q)
    if q.ndim != 1 or q.shape[0] != p.num_variables:
        raise ContractError(f"assignment must have {p.num_variables} bits, got shape {q.shape}")
    if not np.all((q == 0) | (q == 1)):
        raise ContractError("assignment entries must be 0 or 1")
    return q[: p.d], q[p.d :]


def join_assignment(q1, q2) -> np.ndarray:
    q1 = np.asarray(q1, dtype=np.int8)
    q2 = np.asarray(q2, dtype=np.int8)
    if q1.shape != q2.shape or q1.ndim != 1:
        raise ContractError("q1 and q2 must be 1-D and of equal length")
    return np.concatenate([q1, q2])


def decode(p: QuboProblem, q) -> np.ndarray:
    q1, q2 = split_assignment(p, q)
    return p.center + p.scale * (-2.0 * q1 + q2)


def qubo_energy(p: QuboProblem, q) -> float:
    """``0.5 q^T Q q``; the constant ``offset`` is not included."""
    split_assignment(p, q)
    qf = np.asarray(q, dtype=np.float64)
    return float(0.5 * (qf @ (p.coeffs @ qf)))
