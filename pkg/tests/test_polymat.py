"""Hermite/Smith forms over the univariate polynomial ring."""

import random

from fdiv import polymat
from fdiv.fields import FieldSpec
from fdiv.laurent import LaurentPoly

F2 = FieldSpec(2)
F3 = FieldSpec(3)


def rpoly(fs, rng, maxdeg=3):
    return LaurentPoly(fs, {rng.randrange(maxdeg + 1): fs.random(rng) for _ in range(2)})


def row_combo(fs, rng, rows):
    out = [LaurentPoly.zero(fs) for _ in rows[0]]
    for r in rows:
        c = rpoly(fs, rng)
        out = [o + c * e for o, e in zip(out, r)]
    return out


def test_hermite_canonical_under_shuffle():
    rng = random.Random(1)
    for fs in (F2, F3):
        for _ in range(20):
            rows = [[rpoly(fs, rng) for _ in range(4)] for _ in range(3)]
            h1 = polymat.hermite_form(fs, rows)
            shuffled = rows[::-1] + [row_combo(fs, rng, rows)]
            h2 = polymat.hermite_form(fs, shuffled)
            assert h1 == h2


def test_hermite_pivots_monic():
    rng = random.Random(2)
    for _ in range(10):
        rows = [[rpoly(F3, rng) for _ in range(3)] for _ in range(3)]
        h = polymat.hermite_form(F3, rows)
        for r in h:
            lead = next(e for e in r if not e.is_zero())
            assert lead.leading_code() == 1


def test_module_solve_roundtrip():
    rng = random.Random(3)
    for fs in (F2, F3):
        for _ in range(30):
            gens = [[rpoly(fs, rng) for _ in range(4)] for _ in range(2)]
            target = row_combo(fs, rng, gens)
            sol = polymat.module_solve(fs, gens, target)
            assert sol is not None
            recon = [LaurentPoly.zero(fs) for _ in range(4)]
            for c, g in zip(sol, gens):
                recon = [r + c * e for r, e in zip(recon, g)]
            assert recon == target


def test_module_solve_rejects_nonmembers():
    # x is not in the module generated by x^2 over k[x]
    gens = [[LaurentPoly.x_power(F3, 2)]]
    target = [LaurentPoly.x_power(F3, 1)]
    assert polymat.module_solve(F3, gens, target) is None


def test_smith_factors_diagonal():
    x = LaurentPoly.x_power(F3, 1)
    one = LaurentPoly.one(F3)
    zero = LaurentPoly.zero(F3)
    rows = [[one, zero], [zero, x * x]]
    fac = polymat.smith_invariant_factors(F3, rows)
    assert fac == [one, x * x]


def test_smith_divisibility_chain():
    rng = random.Random(5)
    for fs in (F2, F3):
        for _ in range(20):
            rows = [[rpoly(fs, rng) for _ in range(3)] for _ in range(3)]
            fac = polymat.smith_invariant_factors(fs, rows)
            for a, b in zip(fac, fac[1:]):
                _, rem = b.divmod_poly(a)
                assert rem.is_zero()
