"""Laurent polynomial and matrix arithmetic."""

import random

import pytest

from fdiv.errors import NotATransitionMatrix
from fdiv.fields import FieldSpec
from fdiv.laurent import LaurentMatrix, LaurentPoly, laurent_matrix_inverse, substitute_power

F2 = FieldSpec(2)
F3 = FieldSpec(3)
F4 = FieldSpec(2, 2, [1, 1, 1])


def random_poly(fs, rng, lo=-3, hi=3, terms=3):
    return LaurentPoly(fs, {rng.randrange(lo, hi + 1): fs.random(rng) for _ in range(terms)})


def test_normal_form_and_empty_markers():
    f = LaurentPoly(F3, {2: 3, 1: 1})  # 3 = 0 mod 3 is dropped
    assert 2 not in f.coeffs
    z = LaurentPoly.zero(F3)
    assert z.is_zero() and z.degree() is None and z.valuation() is None
    assert (f - f).degree() is None


def test_poly_ring_axioms():
    rng = random.Random(4)
    for fs in (F2, F3, F4):
        for _ in range(30):
            f, g, h = (random_poly(fs, rng) for _ in range(3))
            assert (f + g) * h == f * h + g * h
            assert f * g == g * f
            assert (f * g) * h == f * (g * h)


def test_substitute_power_examples():
    # x + 1 over F_2 -> x^2 + 1
    f = LaurentPoly(F2, {1: 1, 0: 1})
    assert substitute_power(f, 2) == LaurentPoly(F2, {2: 1, 0: 1})
    # c x^-1 over F_4 with coefficient Frobenius: c^2 x^-2
    u = F4.element([0, 1])
    g = LaurentPoly(F4, {-1: u})
    gi = substitute_power(g, 2, frobenius_coeffs=True)
    assert gi == LaurentPoly(F4, {-2: u * u})
    # a constant maps to its Frobenius
    c = LaurentPoly.constant(F4, u)
    assert substitute_power(c, 2, True) == LaurentPoly.constant(F4, u * u)


def test_substitute_power_is_ring_hom():
    rng = random.Random(8)
    for fs in (F2, F3, F4):
        for _ in range(30):
            f, g = random_poly(fs, rng), random_poly(fs, rng)
            lhs = substitute_power(f * g, fs.p)
            rhs = substitute_power(f, fs.p) * substitute_power(g, fs.p)
            assert lhs == rhs
            assert substitute_power(f + g, fs.p) == substitute_power(f, fs.p) + substitute_power(g, fs.p)


def test_divmod_poly():
    rng = random.Random(12)
    for fs in (F2, F3):
        for _ in range(40):
            f = random_poly(fs, rng, lo=0, hi=6, terms=4)
            g = random_poly(fs, rng, lo=0, hi=3, terms=2)
            if g.is_zero():
                continue
            q, r = f.divmod_poly(g)
            assert q * g + r == f
            assert r.is_zero() or r.degree() < g.degree()


def test_matrix_inverse_examples():
    # diag(x^2, x^-1) -> diag(x^-2, x)
    T = LaurentMatrix.x_diag(F3, [2, -1])
    Ti = laurent_matrix_inverse(T)
    assert Ti == LaurentMatrix.x_diag(F3, [-2, 1])
    # [[x,1],[0,x]] inverse: x^-2 * [[x,-1],[0,x]]
    x = LaurentPoly.x_power(F3, 1)
    one, zero = LaurentPoly.one(F3), LaurentPoly.zero(F3)
    T2 = LaurentMatrix(F3, [[x, one], [zero, x]])
    T2i = T2.inverse()
    assert T2 @ T2i == LaurentMatrix.identity(F3, 2)
    assert T2i @ T2 == LaurentMatrix.identity(F3, 2)
    # det = x + 1 is not a unit
    T3 = LaurentMatrix(F3, [[x + one, zero], [zero, one]])
    with pytest.raises(NotATransitionMatrix):
        laurent_matrix_inverse(T3)


def test_matrix_inverse_random():
    rng = random.Random(3)
    for fs in (F2, F3, F4):
        for _ in range(20):
            n = rng.randrange(1, 4)
            # build a guaranteed unit-determinant matrix from elementary factors
            T = LaurentMatrix.x_diag(fs, [rng.randrange(-2, 3) for _ in range(n)])
            for _ in range(3):
                i, j = rng.randrange(n), rng.randrange(n)
                if i == j:
                    continue
                E = LaurentMatrix.identity(fs, n).entries
                E = [list(r) for r in E]
                E[i][j] = random_poly(fs, rng, lo=-1, hi=1, terms=2)
                T = T @ LaurentMatrix(fs, E)
            Ti = T.inverse()
            assert T @ Ti == LaurentMatrix.identity(fs, n)
            assert Ti @ T == LaurentMatrix.identity(fs, n)


def test_det_multiplicative():
    rng = random.Random(17)
    for _ in range(15):
        A = LaurentMatrix(F3, [[random_poly(F3, rng, -1, 1, 2) for _ in range(2)] for _ in range(2)])
        B = LaurentMatrix(F3, [[random_poly(F3, rng, -1, 1, 2) for _ in range(2)] for _ in range(2)])
        assert (A @ B).det() == A.det() * B.det()
