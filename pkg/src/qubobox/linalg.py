"""Small dense linear algebra for symmetric positive-definite systems.

Vectors and matrices are plain float64 numpy arrays.  They are validated on
entry and returned read-only so an :class:`SpdSystem` can be shared freely.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

SYMMETRY_ATOL = 1e-12
PIVOT_RTOL = 1e-12


class ContractError(ValueError):
    """Raised when an operation's preconditions are violated."""


def as_vector(v, name: str = "vector") -> np.ndarray:
    arr = np.array(v, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise ContractError(f"{name} must be a non-empty 1-D sequence, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ContractError(f"{name} has non-finite entries")
    arr.setflags(write=False)
    return arr


def as_sym_matrix(a, name: str = "matrix", atol: float = SYMMETRY_ATOL) -> np.ndarray:
    """Validate a square symmetric matrix and return it symmetrized and frozen."""
    arr = np.array(a, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ContractError(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ContractError(f"{name} has non-finite entries")
    if not np.allclose(arr, arr.T, rtol=0.0, atol=atol):
        raise ContractError(f"{name} is not symmetric (atol={atol})")
    # keep the upper triangle as the source of truth
    arr = np.triu(arr) + np.triu(arr, 1).T
    arr.setflags(write=False)
    return arr


def _check_dims(a: np.ndarray, v: np.ndarray) -> None:
    if a.shape[1] != v.shape[0]:
        raise ContractError(f"dimension mismatch: matrix is {a.shape}, vector has length {v.shape[0]}")


def mat_vec(a, v) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise ContractError("expected a 1-D vector")
    _check_dims(a, v)
    return a @ v


def cholesky(a) -> Optional[np.ndarray]:
    """Lower Cholesky factor of ``a``, or None if a pivot is not safely positive.

    A pivot must exceed ``PIVOT_RTOL * max(diag(a))``.
    """
    a = np.asarray(a, dtype=np.float64)
    d = a.shape[0]
    diag_max = float(np.max(np.diag(a)))
    if diag_max <= 0.0:
        return None
    tol = PIVOT_RTOL * diag_max
    low = np.zeros_like(a)
    for j in range(d):
        pivot = a[j, j] - low[j, :j] @ low[j, :j]
        if not pivot > tol:
            return None
        low[j, j] = np.sqrt(pivot)
        for i in range(j + 1, d):
            low[i, j] = (a[i, j] - low[i, :j] @ low[j, :j]) / low[j, j]
    return low


def is_spd(a) -> bool:
    try:
        a = np.asarray(a, dtype=np.float64)
    except (TypeError, ValueError):
        return False
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.size == 0:
        return False
    if not np.all(np.isfinite(a)) or not np.allclose(a, a.T, rtol=0.0, atol=SYMMETRY_ATOL):
        return False
    return cholesky(a) is not None


@dataclass(frozen=True)
class SpdSystem:
    """A linear system ``A x = b`` with symmetric positive-definite ``A``."""

    a: np.ndarray
    b: np.ndarray
    x_exact: Optional[np.ndarray] = None

    def __post_init__(self):
        a = as_sym_matrix(self.a, "A")
        b = as_vector(self.b, "b")
        if a.shape[0] != b.shape[0]:
            raise ContractError(f"A is {a.shape[0]}x{a.shape[0]} but b has length {b.shape[0]}")
        if not is_spd(a):
            raise ContractError("A is not positive-definite (Cholesky failed)")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if self.x_exact is not None:
            x = as_vector(self.x_exact, "x_exact")
            if x.shape[0] != b.shape[0]:
                raise ContractError("x_exact has the wrong length")
            scale = max(float(np.max(np.abs(b))), float(np.max(np.abs(a))) * float(np.max(np.abs(x))), 1.0)
            if np.max(np.abs(a @ x - b)) > 1e-10 * scale:
                raise ContractError("x_exact does not satisfy A x = b")
            object.__setattr__(self, "x_exact", x)

    @property
    def d(self) -> int:
        return self.b.shape[0]

    @classmethod
    def from_exact(cls, a, x_exact) -> "SpdSystem":
        """Build the system whose right-hand side is ``A @ x_exact``."""
        a = as_sym_matrix(a, "A")
        x = as_vector(x_exact, "x_exact")
        return cls(a, mat_vec(a, x), x)

    def to_json_dict(self) -> dict:
        out = {"d": self.d, "A": self.a.tolist(), "b": self.b.tolist()}
        if self.x_exact is not None:
            out["x_exact"] = self.x_exact.tolist()
        return out

    @classmethod
    def from_json_dict(cls, data: dict) -> "SpdSystem":
        try:
            d = int(data["d"])
            a, b = data["A"], data["b"]
        except (KeyError, TypeError) as exc:
            raise ContractError(f"system JSON is missing a required field: {exc}") from None
        a = np.array(a, dtype=np.float64)
        if a.shape != (d, d) or len(b) != d:
            raise ContractError(f"system JSON shapes do not match d={d}")
        return cls(a, b, data.get("x_exact"))


def load_system(path) -> SpdSystem:
    with open(path, encoding="utf-8") as fh:
        return SpdSystem.from_json_dict(json.load(fh))


def save_system(system: SpdSystem, path) -> None:
    Path(path).write_text(json.dumps(system.to_json_dict(), indent=2) + "\n", encoding="utf-8")


def potential_energy(system: SpdSystem, x) -> float:
    """Return ``0.5 x^T A x - x^T b``."""
    x = np.asarray(x, dtype=np.float64)
    _check_dims(system.a, x)
    return float(0.5 * (x @ (system.a @ x)) - x @ system.b)


def residual_inf(system: SpdSystem, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    _check_dims(system.a, x)
    return float(np.max(np.abs(system.a @ x - system.b)))
