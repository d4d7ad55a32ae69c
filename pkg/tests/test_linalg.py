"""Exact row reduction over small finite fields."""

import random

import numpy as np

from fdiv import linalg
from fdiv.fields import FieldSpec

F2 = FieldSpec(2)
F3 = FieldSpec(3)
F4 = FieldSpec(2, 2, [1, 1, 1])
F5 = FieldSpec(5)


def random_matrix(fs, rng, m, n):
    return np.array([[fs.random(rng) for _ in range(n)] for _ in range(m)], dtype=np.int64)


def mat_mul(fs, A, B):
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for i in range(A.shape[0]):
        for j in range(B.shape[1]):
            acc = 0
            for k in range(A.shape[1]):
                acc = fs.add(acc, fs.mul(int(A[i, k]), int(B[k, j])))
            out[i, j] = acc
    return out


def test_rref_identity():
    for fs in (F2, F3, F4, F5):
        A = np.eye(4, dtype=np.int64)
        R, piv = linalg.rref(fs, A)
        assert piv == [0, 1, 2, 3]
        assert np.array_equal(R, A)


def test_kernel_vectors_annihilate():
    rng = random.Random(11)
    for fs in (F2, F3, F4, F5):
        for _ in range(25):
            m, n = rng.randrange(1, 6), rng.randrange(1, 7)
            A = random_matrix(fs, rng, m, n)
            K = linalg.kernel_basis(fs, A)
            assert K.shape[0] == n - linalg.rank(fs, A)
            for v in K:
                prod = mat_mul(fs, A, v.reshape(-1, 1))
                assert not prod.any()


def test_solve_consistency():
    rng = random.Random(5)
    for fs in (F2, F3, F4, F5):
        for _ in range(25):
            m, n = rng.randrange(1, 6), rng.randrange(1, 6)
            A = random_matrix(fs, rng, m, n)
            x = np.array([fs.random(rng) for _ in range(n)], dtype=np.int64)
            b = mat_mul(fs, A, x.reshape(-1, 1)).ravel()
            sol = linalg.solve(fs, A, b)
            assert sol is not None
            assert np.array_equal(mat_mul(fs, A, sol.reshape(-1, 1)).ravel(), b)


def test_row_space_canonical():
    rng = random.Random(3)
    for fs in (F3, F4):
        for _ in range(20):
            A = random_matrix(fs, rng, 4, 5)
            B = A[::-1].copy()  # same row space, different order
            assert linalg.subspace_equal(fs, A, B)
            assert linalg.contains_rows(fs, A, B)


def test_rank_bounds():
    rng = random.Random(9)
    for fs in (F2, F5):
        for _ in range(20):
            m, n = rng.randrange(1, 7), rng.randrange(1, 7)
            A = random_matrix(fs, rng, m, n)
            r = linalg.rank(fs, A)
            assert 0 <= r <= min(m, n)


def test_frob_rows_subspace_image():
    # the entrywise Frobenius of a basis spans the image of the subspace
    fs = F4
    rng = random.Random(2)
    for _ in range(20):
        B = random_matrix(fs, rng, 2, 4)
        FB = linalg.frob_rows(fs, B, 1)
        # every Frobenius image of a random combination lies in span(FB)
        for _ in range(10):
            a, b = fs.random(rng), fs.random(rng)
            v = np.array(
                [fs.add(fs.mul(a, int(B[0, j])), fs.mul(b, int(B[1, j]))) for j in range(4)],
              dtype=np.int64)
            fv = fs.arr_frob(v, 1)
            assert linalg.contains_rows(fs, FB, fv.reshape(1, -1))
