"""Exact row reduction over F_{p^e} on integer-coded numpy arrays.

Matrices are 2-d ``int64`` arrays whose entries are element codes of a
:class:`~fdiv.fields.FieldSpec`.  Prime fields use direct modular
arithmetic; small extensions go through the field's lookup tables, so every
routine here is exact.
"""

from __future__ import annotations

import numpy as np

from .fields import FieldSpec


def as_matrix(field: FieldSpec, rows) -> np.ndarray:
    """Coerce nested lists / FieldElements to an int-coded matrix."""
    conv = []
    for row in rows:
        conv.append([c.code if hasattr(c, "code") else int(c) % field.q for c in row])
    if not conv:
        return np.zeros((0, 0), dtype=np.int64)
    return np.array(conv, dtype=np.int64)


def rref(field: FieldSpec, A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns (R, pivot column indices)."""
    R = np.array(A, dtype=np.int64, copy=True)
    m, n = R.shape
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.nonzero(R[row:, col])[0]
        if nz.size == 0:
            continue
        pr = row + int(nz[0])
        if pr != row:
            R[[row, pr]] = R[[pr, row]]
        inv = field.inv(int(R[row, col]))
        R[row] = field.arr_mul(R[row], np.int64(inv))
        factors = R[:, col].copy()
        factors[row] = 0
        if np.any(factors):
            outer = field.arr_mul(factors[:, None], R[row][None, :])
            R = field.arr_sub(R, outer)
        pivots.append(col)
        row += 1
    return R, pivots


def rank(field: FieldSpec, A: np.ndarray) -> int:
    if A.size == 0:
        return 0
    return len(rref(field, A)[1])


def row_space(field: FieldSpec, A: np.ndarray) -> np.ndarray:
    """Canonical basis (RREF nonzero rows) of the row space."""
    if A.size == 0:
        return np.zeros((0, A.shape[1] if A.ndim == 2 else 0), dtype=np.int64)
    R, piv = rref(field, A)
    return R[: len(piv)]

def kernel_basis(field: FieldSpec, A: np.ndarray) -> np.ndarray:
    """Rows form a basis of {v : A v = 0}."""
    m, n = A.shape
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if m == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref(field, A)
    free = [j for j in range(n) if j not in piv]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for bi, j in enumerate(free):
        basis[bi, j] = 1
        for ri, pc in enumerate(piv):
            basis[bi, pc] = field.neg(int(R[ri, j]))
    return basis


def solve(field: FieldSpec, A: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution of A x = b, or None if inconsistent."""
    m, n = A.shape
    aug = np.concatenate([A, b.reshape(m, 1)], axis=1)
    R, piv = rref(field, aug)
    if n in piv:
        return None
    x = np.zeros(n, dtype=np.int64)
    for ri, pc in enumerate(piv):
        x[pc] = R[ri, n]
    return x


def subspace_equal(field: FieldSpec, B1: np.ndarray, B2: np.ndarray) -> bool:
    """Do the rows of B1 and B2 span the same subspace?"""
    c1, c2 = row_space(field, B1), row_space(field, B2)
    return c1.shape == c2.shape and bool(np.array_equal(c1, c2))


def contains_rows(field: FieldSpec, B: np.ndarray, V: np.ndarray) -> bool:
    """Is the row space of V contained in the row space of B?"""
    if V.size == 0:
        return True
    r = rank(field, B)
    stacked = np.concatenate([B, V], axis=0) if B.size else V
    return rank(field, stacked) == r


def frob_rows(field: FieldSpec, A: np.ndarray, n: int = 1) -> np.ndarray:
    """Entrywise Frobenius; sends a subspace basis to a basis of its image."""
    return field.arr_frob(A, n)
