"""Module extraction, tower reconstruction, validation, affine witness."""

import random

import pytest

from fdiv.dmod_affine import (
    DModulePresentation,
    dmod_from_tower,
    extract_level,
    h1d_affine_witness,
    to_y_coords,
    validate_dmodule,
    verify_fdiv_iso,
)
from fdiv import polymat
from fdiv.errors import NotATransitionMatrix
from fdiv.fields import FieldSpec
from fdiv.laurent import LaurentMatrix, LaurentPoly

F2 = FieldSpec(2)
F3 = FieldSpec(3)


def poly(fs, coeffs):
    return LaurentPoly.from_poly_coeffs(fs, coeffs)


def unimodular(fs, rng, n, deg=1, factors=3):
    """Random product of elementary matrices: constant nonzero determinant."""
    T = LaurentMatrix.identity(fs, n)
    for _ in range(factors):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        E = [list(r) for r in LaurentMatrix.identity(fs, n).entries]
        E[i][j] = LaurentPoly(
            fs, {rng.randrange(deg + 1): fs.random(rng) for _ in range(2)}
        )
        T = T @ LaurentMatrix(fs, E)
    return T


def tower_cumulative(fs, tower, n):
    """A_0 A_1^(p) ... A_(n-1)^(p^(n-1)) for the expected level-n generators."""
    out = LaurentMatrix.identity(fs, tower[0].rows)
    for k in range(n):
        t = tower[k]
        for _ in range(k):
            t = t.substitute_power(fs.p, frobenius_coeffs=True)
        out = out @ t
    return out


def module_rows(fs, mat, pn):
    return [to_y_coords(fs, mat.col(j), pn) for j in range(mat.cols)]


def test_trivial_module_validates():
    for fs, r, L in ((F2, 1, 3), (F3, 2, 2)):
        M = DModulePresentation.trivial(fs, r, L)
        assert validate_dmodule(M).passed


def test_altered_action_fails_validation():
    # adding the identity to the D_1 action breaks the operator relations
    one = LaurentPoly.one(F2)
    M = DModulePresentation(F2, 1, [LaurentMatrix(F2, [[one]])])
    report = validate_dmodule(M)
    assert not report.passed
    assert report.first_failure() is not None


def test_extract_trivial_levels():
    M = DModulePresentation.trivial(F2, 1, 3)
    lvl1 = extract_level(M, 1, degree_bound=4)
    assert lvl1.rank == 1
    assert lvl1.generators == ((LaurentPoly.one(F2),),)
    lvl2 = extract_level(M, 2, degree_bound=8)
    assert lvl2.generators == ((LaurentPoly.one(F2),),)
    assert len(lvl2.smith_factors) == 1


def test_extract_levels_nest():
    rng = random.Random(31)
    tower = [unimodular(F2, rng, 2) for _ in range(2)]
    M = dmod_from_tower(tower)
    l1 = extract_level(M, 1)
    l2 = extract_level(M, 2)
    rows1 = [to_y_coords(F2, g, 2) for g in l1.generators]
    rows2 = [to_y_coords(F2, g, 2) for g in l2.generators]
    # level-2 solutions lie in the level-1 module (over k[x^2])
    for row in rows2:
        assert polymat.module_solve(F2, rows1, row) is not None


def test_dmod_from_tower_identity():
    M = dmod_from_tower([LaurentMatrix.identity(F2, 2), LaurentMatrix.identity(F2, 2)])
    assert validate_dmodule(M).passed
    for m in range(2):
        for row in M.actions[m].entries:
            assert all(e.is_zero() for e in row)


def test_dmod_from_tower_rejects_nonconstant_det():
    bad = LaurentMatrix.diagonal(F2, [LaurentPoly.one(F2), poly(F2, [1, 1])])
    with pytest.raises(NotATransitionMatrix):
        dmod_from_tower([bad])


def test_roundtrip_single_level():
    x = LaurentPoly.x_power(F2, 1)
    one, zero = LaurentPoly.one(F2), LaurentPoly.zero(F2)
    A0 = LaurentMatrix(F2, [[one, x], [zero, one]])
    M = dmod_from_tower([A0])
    assert validate_dmodule(M).passed
    lvl1 = extract_level(M, 1)
    assert lvl1.rank == 2
    # module generated by extracted level-1 equals the column module of A0
    expected = polymat.hermite_form(F2, module_rows(F2, A0, 2))
    assert list(lvl1.hermite) == [tuple(r) for r in expected]
    lvl0 = extract_level(M, 0)
    C = verify_fdiv_iso(M, lvl1, lvl0)
    # C is invertible over k[x] and maps the level-1 frame onto the basis
    assert C.det().is_constant()


def test_roundtrip_random_towers():
    rng = random.Random(7)
    for p, fs in ((2, F2), (3, F3)):
        for trial in range(4):
            r = rng.choice((1, 2))
            N = rng.randrange(1, 3)
            tower = [unimodular(fs, rng, r) for _ in range(N)]
            M = dmod_from_tower(tower)
            assert validate_dmodule(M).passed
            prev = extract_level(M, 0)
            for n in range(1, N + 1):
                lvl = extract_level(M, n)
                assert lvl.rank == r
                assert len(lvl.smith_factors) == r
                pn = fs.p**n
                expected = polymat.hermite_form(
                    fs, module_rows(fs, tower_cumulative(fs, tower, n), pn)
                )
                assert list(lvl.hermite) == [tuple(row) for row in expected]
                C = verify_fdiv_iso(M, lvl, prev)
                assert C.det().is_constant() and not C.det().is_zero()
                prev = lvl


def test_twisted_linearity():
    rng = random.Random(13)
    tower = [unimodular(F2, rng, 2)]
    M = dmod_from_tower(tower)
    lvl = extract_level(M, 1)
    a = poly(F2, [1, 1])  # 1 + x
    a_tw = a.substitute_power(2, frobenius_coeffs=True)  # a^2 = a(x^2) over F_2
    for g in lvl.generators:
        scaled = tuple(a_tw * e for e in g)
        assert all(e.is_zero() for e in M.act(1, scaled))


def test_witness_values():
    assert h1d_affine_witness(2, 8) == 4
    assert h1d_affine_witness(3, 3) == 2
    for p in (2, 3, 5):
        for d in range(1, p):
            assert h1d_affine_witness(p, d) == d
    for p in (2, 3):
        for d in (p, p**2, p**3, 17, 40):
            assert h1d_affine_witness(p, d) == d - d // p


def test_witness_strictly_increasing_on_power_ladder():
    for p in (2, 3):
        vals = [h1d_affine_witness(p, p**j) for j in (1, 2, 3)]
        assert vals == sorted(vals) and len(set(vals)) == len(vals)
