"""Boolean matrix products over numpy arrays.

A ``BoolMatrix`` is any 2-D numpy ``bool`` array. Products go through BLAS
in ``float32`` row blocks, which is exact while the inner dimension stays
below ``2**24``.
"""

from __future__ import annotations

import numpy as np

_ROW_BLOCK = 256
_EXACT_INNER = 1 << 24


def as_bool_matrix(a: np.ndarray | list) -> np.ndarray:
    m = np.asarray(a, dtype=bool)
    if m.ndim != 2:
        raise ValueError("a boolean matrix must be two-dimensional")
    return m


def _check(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    if a.shape[1] >= _EXACT_INNER:
        raise ValueError("inner dimension too large for exact float32 products")


def count_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Integer product of 0/1 (or small nonnegative integer) matrices."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("operands must be two-dimensional")
    _check(a, b)
    if a.size == 0 or b.size == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    out = a.astype(np.float64) @ b.astype(np.float64)
    return np.rint(out).astype(np.int64)


def bool_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product over the boolean semiring."""
    a = as_bool_matrix(a)
    b = as_bool_matrix(b)
    _check(a, b)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=bool)
    if a.size == 0 or b.size == 0:
        return out
    bf = b.astype(np.float32)
    for lo in range(0, a.shape[0], _ROW_BLOCK):
        out[lo : lo + _ROW_BLOCK] = a[lo : lo + _ROW_BLOCK].astype(np.float32) @ bf > 0
    return out


def trace_nonzero(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> bool:
    """Whether ``trace(a @ b @ c)`` is nonzero, one row block of ``a @ b`` at a time."""
    a, b, c = as_bool_matrix(a), as_bool_matrix(b), as_bool_matrix(c)
    _check(a, b)
    _check(b, c)
    if c.shape[1] != a.shape[0]:
        raise ValueError("the triple product is not square")
    if a.size == 0 or b.size == 0 or c.size == 0:
        return False
    bf = b.astype(np.float32)
    ct = c.T
    for lo in range(0, a.shape[0], _ROW_BLOCK):
        ab = a[lo : lo + _ROW_BLOCK].astype(np.float32) @ bf > 0
        # diagonal entry i of (ab @ c) is the dot of row i of ab with column i of c
        if (ab & ct[lo : lo + _ROW_BLOCK]).any():
            return True
    return False


def trace_count(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> int:
    """``trace(a @ b @ c)`` over the integers."""
    ab = count_matmul(a, b)
    c = np.asarray(c)
    if c.shape != (ab.shape[1], ab.shape[0]):
        raise ValueError("the triple product is not square")
    return int(np.einsum("ij,ji->", ab, c.astype(np.int64)))
