"""Bundles on the projective line: cohomology, splitting, towers."""

import random

import pytest

from fdiv.birkhoff import birkhoff_factor
from fdiv.bundle_p1 import (
    BundleP1,
    FdivTowerP1,
    SplittingType,
    birkhoff_split,
    cech_h,
    check_h0_decreasing,
    check_numerical_triviality,
    euler_char,
    fdiv_rigidity,
    frobenius_pullback,
    splitting_from_h0,
)
from fdiv.errors import InvalidTower
from fdiv.fields import FieldSpec
from fdiv.laurent import LaurentMatrix, LaurentPoly

F2 = FieldSpec(2)
F3 = FieldSpec(3)
F4 = FieldSpec(2, 2, [1, 1, 1])
F5 = FieldSpec(5)


def rand_transition(fs, rng, r, max_abs_exp=3, tries=400):
    for _ in range(tries):
        T = LaurentMatrix.x_diag(fs, [rng.randrange(-2, 3) for _ in range(r)])
        for _ in range(rng.randrange(1, 5)):
            i, j = rng.randrange(r), rng.randrange(r)
            if i == j:
                continue
            E = [list(row) for row in LaurentMatrix.identity(fs, r).entries]
            side = rng.random() < 0.5
            exps = (0, 1) if side else (-1, 0)
            E[i][j] = LaurentPoly(fs, {rng.choice(exps): fs.random(rng)})
            T = T @ LaurentMatrix(fs, E) if side else LaurentMatrix(fs, E) @ T
        lo, hi = T.min_exp(), T.max_exp()
        if lo is not None and lo >= -max_abs_exp and hi <= max_abs_exp:
            return T
    raise RuntimeError("generator failed to land in the exponent window")


def test_h0_line_bundles():
    assert cech_h(BundleP1.line(F3, 3), 0) == 4
    for a in range(-4, 0):
        assert cech_h(BundleP1.line(F2, a), 0) == 0
    for a in range(0, 5):
        assert cech_h(BundleP1.line(F5, a), 0) == a + 1


def test_h1_line_bundles():
    assert cech_h(BundleP1.line(F2, -3), 1) == 2
    for a in range(-1, 4):
        assert cech_h(BundleP1.line(F3, a), 1) == 0
    for a in range(-5, -1):
        assert cech_h(BundleP1.line(F2, a), 1) == -a - 1


def test_cohomology_bott_on_sums():
    rng = random.Random(6)
    for fs in (F2, F3, F4):
        for _ in range(8):
            exps = [rng.randrange(-3, 4) for _ in range(rng.randrange(1, 4))]
            E = BundleP1.direct_sum_of_lines(fs, exps)
            st = SplittingType(tuple(exps))
            for t in range(-3, 4):
                assert cech_h(E, 0, t) == st.bott_h0(t)
                assert cech_h(E, 1, t) == st.bott_h1(t)


def test_twist_is_scalar_multiplication():
    E = BundleP1.line(F3, 1)
    assert E.twist(2).transition == LaurentMatrix.x_diag(F3, [3])


def test_pullback_examples():
    assert frobenius_pullback(BundleP1.line(F2, 1)).transition == LaurentMatrix.x_diag(F2, [2])
    E = BundleP1.direct_sum_of_lines(F2, [-1, 1])
    assert birkhoff_split(frobenius_pullback(E)).exponents == (2, -2)
    # coefficient Frobenius on entries over F_4
    u = F4.element([0, 1])
    T = LaurentMatrix(F4, [[LaurentPoly(F4, {1: u})]])
    ET = frobenius_pullback(BundleP1(T)).transition
    assert ET.entries[0][0] == LaurentPoly(F4, {2: u * u})


def test_pullback_scaling_properties():
    rng = random.Random(9)
    for fs in (F2, F3):
        for _ in range(6):
            E = BundleP1(rand_transition(fs, rng, rng.randrange(1, 4)))
            FE = frobenius_pullback(E)
            assert FE.degree == fs.p * E.degree
            se, sfe = birkhoff_split(E), birkhoff_split(FE)
            assert sfe.exponents == tuple(fs.p * a for a in se.exponents)


def test_euler_characteristic():
    E = BundleP1.direct_sum_of_lines(F3, [2, 0])
    assert euler_char(E, 1) == 6
    assert euler_char(BundleP1.line(F2, -1), 0) == 0
    for r in (1, 2, 3):
        E = BundleP1.direct_sum_of_lines(F2, [0] * r)
        for t in range(-2, 3):
            assert euler_char(E, t) == r * (t + 1)


def test_euler_identity_random():
    rng = random.Random(14)
    for fs in (F2, F3):
        for _ in range(5):
            E = BundleP1(rand_transition(fs, rng, rng.randrange(1, 3)))
            for t in range(-3, 4):
                assert euler_char(E, t) == E.degree + E.rank * (t + 1)


def test_splitting_examples():
    x = LaurentPoly.x_power(F3, 1)
    one, zero = LaurentPoly.one(F3), LaurentPoly.zero(F3)
    E = BundleP1(LaurentMatrix(F3, [[x, one], [zero, x]]))
    assert birkhoff_split(E).exponents == (1, 1)
    assert splitting_from_h0(E).exponents == (1, 1)
    assert splitting_from_h0(BundleP1.direct_sum_of_lines(F2, [2, 0])).exponents == (2, 0)
    assert splitting_from_h0(BundleP1.direct_sum_of_lines(F2, [0, 0, 0])).exponents == (0, 0, 0)


def test_splitting_invariance_under_chart_multiplication():
    rng = random.Random(23)
    E = BundleP1(rand_transition(F3, rng, 2))
    base = birkhoff_split(E).exponents
    # multiply by unimodular chart-side factors
    one, zero = LaurentPoly.one(F3), LaurentPoly.zero(F3)
    x = LaurentPoly.x_power(F3, 1)
    Up = LaurentMatrix(F3, [[one, x], [zero, one]])
    Vm = LaurentMatrix(F3, [[one, zero], [LaurentPoly(F3, {-1: 2}), one]])
    E2 = BundleP1(Up @ E.transition @ Vm)
    assert birkhoff_split(E2).exponents == base


def test_cohomology_matches_bott_on_mixed_matrices():
    # non-diagonal transitions: both cohomologies must agree with the Bott
    # counts of the computed splitting (guards the window truncation depth)
    rng = random.Random(5)
    for _ in range(20):
        fs = (F2, F3, F5)[rng.randrange(3)]
        E = BundleP1(rand_transition(fs, rng, rng.randrange(1, 4)))
        st = birkhoff_split(E)
        for t in range(-4, 5):
            assert cech_h(E, 0, t) == st.bott_h0(t)
            assert cech_h(E, 1, t) == st.bott_h1(t)


def test_h1_unipotent_transition_vanishes():
    x = LaurentPoly.x_power(F3, 1)
    one, zero = LaurentPoly.one(F3), LaurentPoly.zero(F3)
    E = BundleP1(LaurentMatrix(F3, [[x, one], [zero, x]]))
    assert cech_h(E, 1, 0) == 0
    assert euler_char(E, 1) == 6


def test_oracle_agreement_random():
    rng = random.Random(77)
    for fs in (F2, F3, F5):
        for _ in range(15):
            E = BundleP1(rand_transition(fs, rng, rng.randrange(1, 4)))
            assert birkhoff_split(E).exponents == splitting_from_h0(E).exponents


def test_factor_reconstruction():
    rng = random.Random(99)
    for _ in range(10):
        T = rand_transition(F2, rng, 3)
        f = birkhoff_factor(T)
        assert f.u @ f.diag @ f.v == T
        assert f.u.det().is_constant()
        assert f.v.det().is_constant()


def test_truncated_tower_h0_profile():
    # base O(-1) + O(1), p = 2: h0 profile (5, 3, 2) downward from level 0
    top = BundleP1.direct_sum_of_lines(F2, [-1, 1])
    tower = FdivTowerP1.truncated_from_top(top, 2)
    rep = check_h0_decreasing(tower)
    assert rep.passed
    assert rep.details["h0"] == [5, 3, 2]


def test_single_level_tower_vacuous():
    tower = FdivTowerP1.truncated_from_top(BundleP1.line(F3, 2), 0)
    assert check_h0_decreasing(tower).passed
    assert check_numerical_triviality(tower).passed


def test_numerical_triviality_truncated():
    top = BundleP1.direct_sum_of_lines(F3, [-1, 1])
    tower = FdivTowerP1.truncated_from_top(top, 2)
    rep = check_numerical_triviality(tower)
    assert rep.passed
    assert rep.details["degrees"] == [0, 0, 0]
    top2 = BundleP1.line(F2, 1)
    tower2 = FdivTowerP1.truncated_from_top(top2, 2)
    rep2 = check_numerical_triviality(tower2)
    assert rep2.passed
    assert rep2.details["degrees"] == [4, 2, 1]


def test_periodic_tower_rejects_nonzero_degree():
    with pytest.raises(InvalidTower):
        FdivTowerP1("periodic", [BundleP1.line(F2, 1)])


def test_rigidity_truncated():
    tower = FdivTowerP1.truncated_from_top(BundleP1.line(F2, 1), 2)
    rep = fdiv_rigidity(tower)
    assert rep.passed and rep.details["splitting"] == [4]
    tower2 = FdivTowerP1.truncated_from_top(
        BundleP1.direct_sum_of_lines(F2, [-1, 1]), 2
    )
    rep2 = fdiv_rigidity(tower2)
    assert rep2.details["splitting"] == [4, -4]


def test_rigidity_periodic():
    # trivial bundle with a nontrivial constant transition still splits as 0s
    one = LaurentPoly.one(F3)
    two = LaurentPoly.constant(F3, 2)
    zero = LaurentPoly.zero(F3)
    B = BundleP1(LaurentMatrix(F3, [[one, two], [zero, one]]))
    tower = FdivTowerP1("periodic", [B])
    rep = fdiv_rigidity(tower)
    assert rep.passed
    # degree-0 but nontrivially split level is rejected
    B2 = BundleP1.direct_sum_of_lines(F3, [1, -1])
    with pytest.raises(InvalidTower):
        fdiv_rigidity(FdivTowerP1("periodic", [B2]))


def test_tower_literal_pullback_enforced():
    with pytest.raises(InvalidTower):
        FdivTowerP1(
            "truncated", [BundleP1.line(F2, 3), BundleP1.line(F2, 1)]
        )
