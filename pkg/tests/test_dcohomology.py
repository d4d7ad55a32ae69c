"""Assembly of module cohomology from towers; projective vs affine."""

import random

import numpy as np
import pytest

from fdiv.bundle_p1 import BundleP1, FdivTowerP1
from fdiv.dcohomology import (
    CohomologyTowerSet,
    build_towers_p1,
    dcoh_dims,
    finiteness_report,
)
from fdiv.dmod_affine import DModulePresentation
from fdiv.errors import InvalidTower
from fdiv.fields import FieldSpec
from fdiv.laurent import LaurentMatrix, LaurentPoly
from fdiv.towers import SemilinearMap, TwistedTower, lim_dim

F2 = FieldSpec(2)
F3 = FieldSpec(3)
F4 = FieldSpec(2, 2, [1, 1, 1])


def trivial_periodic_tower(fs, r, m=1, isos=None):
    B = BundleP1.direct_sum_of_lines(fs, [0] * r)
    return FdivTowerP1("periodic", [B] * m, isos)


def test_periodic_trivial_rank1():
    ts = build_towers_p1(trivial_periodic_tower(F2, 1))
    reps = dcoh_dims(ts)
    assert [r.dim for r in reps] == [1, 0, 0]
    assert all(r.exact for r in reps)
    assert reps[0].lim == 1 and reps[1].r1lim == 0


def test_periodic_identity_isos_rank_r():
    for r in (1, 2, 3):
        ts = build_towers_p1(trivial_periodic_tower(F3, r))
        reps = dcoh_dims(ts)
        assert reps[0].dim == r
        assert reps[1].dim == 0 and reps[2].dim == 0


def test_periodic_f4_nontrivial_iso():
    # rank-1 iso u over F_4: transitions v -> u v^2; limit still rank 1
    u_code = F4.element([0, 1]).code
    tower = trivial_periodic_tower(F4, 1, isos=[np.array([[u_code]])])
    ts = build_towers_p1(tower)
    t0 = ts.towers[0]
    assert t0.maps[0].twist == 1
    assert t0.maps[0].matrix[0, 0] == u_code
    reps = dcoh_dims(ts)
    assert reps[0].dim == 1 and reps[1].dim == 0


def test_degree1_tower_is_zero_for_periodic():
    ts = build_towers_p1(trivial_periodic_tower(F2, 2, m=2))
    assert all(d == 0 for d in ts.towers[1].levels)


def test_gauge_equivalent_isos_same_dims():
    rng = random.Random(3)
    for fs in (F2, F4):
        for _ in range(10):
            r = rng.randrange(1, 3)
            # random invertible C and gauge A C Frob(A)^-1
            def rand_inv():
                while True:
                    m = np.array(
                        [[fs.random(rng) for _ in range(r)] for _ in range(r)],
                        dtype=np.int64,
                    )
                    from fdiv import linalg as la

                    if la.rank(fs, m) == r:
                        return m
            C = rand_inv()
            A = rand_inv()
            from fdiv import linalg as la
            from fdiv.towers import _mat_mul

            # inverse of Frob(A) over the field
            FA = fs.arr_frob(A, 1)
            aug = np.concatenate([FA, np.eye(r, dtype=np.int64)], axis=1)
            R, piv = la.rref(fs, aug)
            FAinv = R[:, r:]
            C2 = _mat_mul(fs, _mat_mul(fs, A, C), FAinv)
            d1 = dcoh_dims(build_towers_p1(trivial_periodic_tower(fs, r, isos=[C])))
            d2 = dcoh_dims(build_towers_p1(trivial_periodic_tower(fs, r, isos=[C2])))
            assert [x.dim for x in d1] == [x.dim for x in d2]


def test_periodic_with_zero_iso_rejected():
    with pytest.raises(InvalidTower):
        trivial_periodic_tower(F2, 2, isos=[np.zeros((2, 2), dtype=np.int64)])


def test_truncated_tower_h0_h1_dims():
    # tower over O(-1) + O(1), p=2, length 2: h0 dims (5, 3, 2), h1 dims (3, 1, 0)
    top = BundleP1.direct_sum_of_lines(F2, [-1, 1])
    tower = FdivTowerP1.truncated_from_top(top, 2)
    ts = build_towers_p1(tower)
    assert ts.towers[0].levels == [5, 3, 2]
    assert ts.towers[1].levels == [3, 1, 0]
    reps = dcoh_dims(ts)
    assert not any(r.exact for r in reps[:2])


def test_truncated_pullback_maps_compose():
    # the degree-0 transition matrices must be injective for these bundles
    top = BundleP1.direct_sum_of_lines(F3, [0, 1])
    tower = FdivTowerP1.truncated_from_top(top, 2)
    ts = build_towers_p1(tower)
    t0 = ts.towers[0]
    from fdiv import linalg as la

    for f in t0.maps:
        assert la.rank(F3, f.matrix) == f.matrix.shape[1]


def test_finiteness_projective():
    rep = finiteness_report(trivial_periodic_tower(F2, 2))
    assert rep.all_finite
    assert [d.dim for d in rep.degrees] == [2, 0, 0]
    assert rep.degrees[0].dim <= rep.rank


def test_finiteness_affine_trivial_module():
    M = DModulePresentation.trivial(F2, 1, 7)
    rep = finiteness_report(M, truncations=(4, 8, 16))
    assert rep.kind == "affine"
    assert [e["dim"] for e in rep.h0_ladder] == [1, 1, 1]
    assert all(e["stable_level"] is not None for e in rep.h0_ladder)
    assert [e["witness"] for e in rep.h1_witnesses] == [2, 4, 8]
    assert "unbounded growth" in rep.h1_label


def test_finiteness_affine_p3():
    M = DModulePresentation.trivial(F3, 1, 5)
    rep = finiteness_report(M, truncations=(3, 9, 27))
    assert [e["witness"] for e in rep.h1_witnesses] == [2, 6, 18]
    vals = [e["witness"] for e in rep.h1_witnesses]
    assert vals == sorted(vals) and len(set(vals)) == 3


def test_user_supplied_towers():
    f = SemilinearMap(F2, np.zeros((1, 1), dtype=np.int64))
    zero_tower = TwistedTower.periodic(F2, [1], [f])
    ts = CohomologyTowerSet(F2, {0: zero_tower}, "user-supplied")
    reps = dcoh_dims(ts, cap=1)
    assert reps[0].dim == 0


def test_additivity_of_reported_dims():
    ts = build_towers_p1(trivial_periodic_tower(F3, 3, m=2))
    for rep in dcoh_dims(ts):
        assert rep.dim == rep.lim + rep.r1lim
