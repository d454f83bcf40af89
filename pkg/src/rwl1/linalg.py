"""Dense linear-algebra helpers shared by the LP solver and the benchmark code.

Matrices are 2-D float64 numpy arrays in row-major (C) order, vectors are
1-D float64 arrays.  Every public entry point validates shapes and rejects
NaN/Inf, so downstream numerical code can assume clean inputs.
"""

from __future__ import annotations

import numpy as np

__all__ = ["as_matrix", "as_vector", "mat_vec", "count_nonzeros"]


def as_matrix(a, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Coerce to a finite 2-D float64 array, optionally checking its shape."""
    m = np.ascontiguousarray(a, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    if rows is not None and m.shape[0] != rows:
        raise ValueError(f"expected {rows} rows, got {m.shape[0]}")
    if cols is not None and m.shape[1] != cols:
        raise ValueError(f"expected {cols} cols, got {m.shape[1]}")
    return m


def as_vector(x, length: int | None = None) -> np.ndarray:
    """Coerce to a finite 1-D float64 array, optionally checking its length."""
    v = np.ascontiguousarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got ndim={v.ndim}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite (no NaN/Inf)")
    if length is not None and v.shape[0] != length:
        raise ValueError(f"expected length {length}, got {v.shape[0]}")
    return v


def mat_vec(a, x) -> np.ndarray:
    """Matrix-vector product a @ x with dimension checking."""
    am = as_matrix(a)
    xv = as_vector(x)
    if am.shape[1] != xv.shape[0]:
        raise ValueError(
            f"dimension mismatch: matrix is {am.shape[0]}x{am.shape[1]}, "
            f"vector has length {xv.shape[0]}"
        )
    return am @ xv


def count_nonzeros(x, tol: float = 1e-6) -> int:
    """Number of entries with magnitude above ``tol``."""
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    v = as_vector(x)
    return int(np.count_nonzero(np.abs(v) > tol))
