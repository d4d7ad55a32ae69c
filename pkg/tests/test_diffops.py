"""Divided-power operator algebra: application, composition, decomposition."""

import random

import pytest

import fdiv.diffops as dops
from fdiv.diffops import DividedOperator, apply, compose, decompose_generator_product
from fdiv.errors import InvalidInput
from fdiv.fields import FieldSpec, binom_mod_p
from fdiv.laurent import LaurentPoly

F2 = FieldSpec(2)
F3 = FieldSpec(3)
F5 = FieldSpec(5)


def D(fs, k):
    return DividedOperator.basis(fs, k)


def x_pow(fs, m):
    return LaurentPoly.x_power(fs, m)


def random_op(fs, rng, max_order=6, max_deg=3):
    terms = {}
    for _ in range(rng.randrange(1, 4)):
        k = rng.randrange(max_order + 1)
        terms[k] = LaurentPoly(
            fs, {rng.randrange(max_deg + 1): fs.random(rng) for _ in range(2)}
        )
    return DividedOperator(fs, terms)


def test_apply_examples():
    # D_2(x^5) = C(5,2) x^3 = x^3 over F_3
    assert apply(D(F3, 2), x_pow(F3, 5)) == x_pow(F3, 1).shift(2)
    # D_0 is the identity
    f = LaurentPoly(F3, {0: 2, 3: 1, 7: 2})
    assert apply(D(F3, 0), f) == f
    # D_p(x^p) = 1
    for fs in (F2, F3, F5):
        assert apply(D(fs, fs.p), x_pow(fs, fs.p)) == LaurentPoly.one(fs)
    with pytest.raises(InvalidInput):
        apply(D(F2, 1), LaurentPoly(F2, {-1: 1}))


def test_compose_constant_coefficient_rule():
    # D_k D_l = C(k+l, k) D_{k+l}, spot checks plus the F_2 collapse D_1 D_1 = 0
    assert compose(D(F2, 1), D(F2, 1)).is_zero()
    for fs in (F2, F3, F5):
        for k in range(6):
            for l in range(6):
                expect = DividedOperator(
                    fs, {k + l: LaurentPoly.constant(fs, binom_mod_p(k + l, k, fs.p))}
                )
                assert compose(D(fs, k), D(fs, l), check=False) == expect


def test_commutator_with_x_is_identity_shift():
    # [D_1, x] = D_0 on the affine line
    for fs in (F2, F3, F5):
        mx = DividedOperator.mult_by(fs, x_pow(fs, 1))
        comm = compose(D(fs, 1), mx) - compose(mx, D(fs, 1))
        assert comm == DividedOperator.identity(fs)
        for l in range(11):
            xl = x_pow(fs, l)
            assert apply(comm, xl) == xl


def test_compose_agrees_with_application():
    rng = random.Random(21)
    for fs in (F2, F3):
        for _ in range(15):
            a, b = random_op(fs, rng), random_op(fs, rng)
            c = compose(a, b, check=False)
            for m in range(12):
                xm = x_pow(fs, m)
                assert apply(c, xm) == apply(a, apply(b, xm))


def test_compose_associative():
    rng = random.Random(33)
    for fs in (F2, F3, F5):
        for _ in range(10):
            a, b, c = (random_op(fs, rng, max_order=4) for _ in range(3))
            lhs = compose(compose(a, b, check=False), c, check=False)
            rhs = compose(a, compose(b, c, check=False), check=False)
            assert lhs == rhs


def test_order_filtration():
    rng = random.Random(40)
    for fs in (F2, F3):
        for _ in range(20):
            a, b = random_op(fs, rng), random_op(fs, rng)
            c = compose(a, b, check=False)
            if c.order() is not None:
                assert c.order() <= a.order() + b.order()


def test_order_examples():
    op = DividedOperator(F3, {5: LaurentPoly.one(F3), 2: x_pow(F3, 1)})
    assert op.order() == 5
    assert DividedOperator.mult_by(F3, x_pow(F3, 2)).order() == 0
    assert DividedOperator.zero(F3).order() is None


def test_p_nilpotence():
    # composing D_(p^m) with itself p times vanishes
    for fs, max_m in ((F2, 2), (F3, 2), (F5, 1)):
        for m in range(max_m + 1):
            g = D(fs, fs.p**m)
            acc = g
            for _ in range(fs.p - 1):
                acc = compose(g, acc, check=False)
            assert acc.is_zero()


def test_constant_coefficient_subalgebra_commutes():
    for fs in (F2, F3):
        for k in range(5):
            for l in range(5):
                assert compose(D(fs, k), D(fs, l), check=False) == compose(
                    D(fs, l), D(fs, k), check=False
                )


def test_annihilates_one_without_order_zero_term():
    rng = random.Random(55)
    for fs in (F2, F3):
        for _ in range(10):
            op = random_op(fs, rng)
            op = DividedOperator(fs, {k: f for k, f in op.terms.items() if k >= 1})
            assert apply(op, LaurentPoly.one(fs)).is_zero()


def test_decompose_generator_product():
    # D_3 = D_1 D_2 over F_2 (unit 1)
    digits, unit = decompose_generator_product(3, 2)
    assert digits == [(0, 1), (1, 1)] and unit == 1
    assert decompose_generator_product(0, 3) == ([], 1)
    for p in (2, 3):
        fs = FieldSpec(p)
        for m in range(3):
            digits, unit = decompose_generator_product(p**m, p)
            assert digits == [(m, 1)] and unit == 1
        # recomposition reproduces unit * D_j exactly
        for j in range(1, 28):
            digits, unit = decompose_generator_product(j, p)
            acc = DividedOperator.identity(fs)
            for m, c in digits:
                for _ in range(c):
                    acc = compose(D(fs, p**m), acc, check=False)
            assert acc == D(fs, j).scale(unit)
            # same in the opposite composition order (generators commute)
            acc2 = DividedOperator.identity(fs)
            for m, c in reversed(digits):
                for _ in range(c):
                    acc2 = compose(acc2, D(fs, p**m), check=False)
            assert acc2 == acc


def test_compose_self_check_flag():
    assert dops.COMPOSE_SELF_CHECK is True
    a = D(F3, 2)
    b = DividedOperator.mult_by(F3, x_pow(F3, 2))
    assert compose(a, b) == compose(a, b, check=False)
