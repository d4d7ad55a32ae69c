"""The executable check suite behind ``fdiv verify-paper``.

Each check verifies one mathematical claim of the library at desk scale,
from the operator composition table through the projective finiteness and
the affine growth pathology.  Checks are seeded and deterministic: the same
seed reproduces every randomly generated instance and hence the whole
report, byte for byte.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import diffops, linalg, polymat
from .birkhoff import birkhoff_factor
from .bundle_p1 import (
    BundleP1,
    FdivTowerP1,
    birkhoff_split,
    cech_h,
    check_h0_decreasing,
    check_numerical_triviality,
    euler_char,
    fdiv_rigidity,
    splitting_from_h0,
)
from .dcohomology import build_towers_p1, dcoh_dims, finiteness_report
from .diffops import DividedOperator, apply as op_apply, compose
from .dmod_affine import (
    DModulePresentation,
    dmod_from_tower,
    extract_level,
    h1d_affine_witness,
    to_y_coords,
    validate_dmodule,
    verify_fdiv_iso,
)
from .errors import InvalidTower
from .fields import FieldSpec, binom_mod_p
from .laurent import LaurentMatrix, LaurentPoly
from .spectral import SpectralPage, bound_edge, bound_upper, simulate
from .towers import SemilinearMap, TwistedTower, bound_check, check_ML, lim_dim, r1lim_dim


@dataclass
class CheckResult:
    name: str
    description: str
    passed: bool
    cases: int
    details: dict = dc_field(default_factory=dict)


def _rng(seed: int, name: str) -> random.Random:
    return random.Random(f"{seed}:{name}")


_FIELD_CACHE: dict[tuple, FieldSpec] = {}


def _field(p: int, e: int = 1, modulus=None) -> FieldSpec:
    key = (p, e, tuple(modulus) if modulus else None)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = FieldSpec(p, e, modulus)
    return _FIELD_CACHE[key]


def _unimodular(fs, rng, n, deg=1, factors=3) -> LaurentMatrix:
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


def _rand_transition(fs, rng, r, max_abs_exp=3, diag_lo=-2, diag_hi=2, tries=400):
    for _ in range(tries):
        T = LaurentMatrix.x_diag(fs, [rng.randrange(diag_lo, diag_hi + 1) for _ in range(r)])
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
    raise RuntimeError("transition generator failed to land in the window")


# ---------------------------------------------------------------------------
# the checks


def check_operator_composition(seed: int) -> CheckResult:
    """Composition table D_k D_l = C(k+l, k) D_(k+l), structurally and on
    monomials, for p in {2, 3, 5} and all k, l <= 25."""
    cases = 0
    for p in (2, 3, 5):
        fs = _field(p)
        for k in range(26):
            dk = DividedOperator.basis(fs, k)
            for l in range(26):
                dl = DividedOperator.basis(fs, l)
                got = compose(dk, dl, check=False)
                c = binom_mod_p(k + l, k, p)
                want = DividedOperator(fs, {k + l: LaurentPoly.constant(fs, c)})
                if got != want:
                    return CheckResult(
                        "operator-composition",
                        check_operator_composition.__doc__,
                        False,
                        cases,
                        {"failed at": [p, k, l]},
                    )
                for m in range(61):
                    xm = LaurentPoly.x_power(fs, m)
                    if op_apply(got, xm) != op_apply(dk, op_apply(dl, xm)):
                        return CheckResult(
                            "operator-composition",
                            check_operator_composition.__doc__,
                            False,
                            cases,
                            {"failed on monomial": [p, k, l, m]},
                        )
                cases += 1
    return CheckResult(
        "operator-composition", check_operator_composition.__doc__, True, cases
    )


def check_lucas(seed: int) -> CheckResult:
    """Digit-wise binomials agree with a big-integer Pascal triangle for all
    l, k <= 200 and p in {2, 3, 5, 7}."""
    rows = [[1]]
    for _ in range(200):
        prev = rows[-1]
        rows.append([1] + [prev[i] + prev[i + 1] for i in range(len(prev) - 1)] + [1])
    cases = 0
    for p in (2, 3, 5, 7):
        for l in range(201):
            for k in range(201):
                want = rows[l][k] % p if k <= l else 0
                if binom_mod_p(l, k, p) != want:
                    return CheckResult(
                        "lucas-binomials", check_lucas.__doc__, False, cases,
                        {"failed at": [p, l, k]},
                    )
                cases += 1
    return CheckResult("lucas-binomials", check_lucas.__doc__, True, cases)


def check_tower_roundtrip(seed: int) -> CheckResult:
    """Modules built from invertible matrix towers validate, their levels
    extract as free rank-r modules with Smith certificates, adjacent levels
    are related by invertible twisted changes of basis, and the extracted
    modules equal the cumulative twisted column modules; 50 seeded towers
    with r <= 2, up to 3 levels, p in {2, 3}."""
    rng = _rng(seed, "tower-roundtrip")
    towers_run = 0
    for trial in range(50):
        p = rng.choice((2, 3))
        fs = _field(p)
        r = rng.choice((1, 2))
        N = rng.randrange(1, 4)
        tower = [_unimodular(fs, rng, r) for _ in range(N)]
        M = dmod_from_tower(tower)
        rep = validate_dmodule(M)
        if not rep.passed:
            return CheckResult(
                "affine-tower-roundtrip", check_tower_roundtrip.__doc__, False,
                towers_run, {"validation failed": rep.first_failure()},
            )
        prev = extract_level(M, 0)
        cumulative = LaurentMatrix.identity(fs, r)
        for n in range(1, N + 1):
            twisted = tower[n - 1]
            for _ in range(n - 1):
                twisted = twisted.substitute_power(p, frobenius_coeffs=True)
            cumulative = cumulative @ twisted
            lvl = extract_level(M, n)
            ok_rank = lvl.rank == r and len(lvl.smith_factors) == r
            pn = p**n
            expected = polymat.hermite_form(
                fs, [to_y_coords(fs, cumulative.col(j), pn) for j in range(r)]
            )
            ok_module = list(lvl.hermite) == [tuple(row) for row in expected]
            C = verify_fdiv_iso(M, lvl, prev)
            d = C.det()
            ok_iso = d.is_constant() and not d.is_zero()
            if not (ok_rank and ok_module and ok_iso):
                return CheckResult(
                    "affine-tower-roundtrip", check_tower_roundtrip.__doc__, False,
                    towers_run,
                    {"failure": [trial, n, ok_rank, ok_module, ok_iso]},
                )
            prev = lvl
        towers_run += 1
    return CheckResult(
        "affine-tower-roundtrip", check_tower_roundtrip.__doc__, True, towers_run
    )


def check_h0_monotone(seed: int) -> CheckResult:
    """Section counts never grow along pullback towers: 50 seeded bundles
    (r <= 3, entry exponents within [-3, 3], p in {2, 3, 5}), three levels."""
    rng = _rng(seed, "h0-monotone")
    profiles = []
    for trial in range(50):
        p = rng.choice((2, 3, 5))
        fs = _field(p)
        r = rng.randrange(1, 4)
        top = BundleP1(_rand_transition(fs, rng, r))
        tower = FdivTowerP1.truncated_from_top(top, 2)
        rep = check_h0_decreasing(tower)
        if not rep.passed:
            return CheckResult(
                "h0-monotone", check_h0_monotone.__doc__, False, trial,
                {"violating profile": rep.details["h0"], "p": p},
            )
        if trial < 4:
            profiles.append({"p": p, "h0": rep.details["h0"]})
    return CheckResult(
        "h0-monotone", check_h0_monotone.__doc__, True, 50, {"samples": profiles}
    )


def check_rigidity(seed: int) -> CheckResult:
    """Pullback towers force p^N-divisible degrees and splitting exponents at
    the base; periodic towers sit in degree 0 with trivial splitting, and a
    periodic tower on a nonzero-degree bundle is rejected outright."""
    rng = _rng(seed, "rigidity")
    cases = 0
    for trial in range(25):
        p = rng.choice((2, 3, 5))
        fs = _field(p)
        r = rng.randrange(1, 4)
        N = rng.choice((1, 2))
        top = BundleP1(_rand_transition(fs, rng, r))
        tower = FdivTowerP1.truncated_from_top(top, N)
        nt = check_numerical_triviality(tower)
        rg = fdiv_rigidity(tower)
        if not (nt.passed and rg.passed):
            return CheckResult(
                "degree-rigidity", check_rigidity.__doc__, False, cases,
                {"trial": trial},
            )
        if tower.bundles[0].degree % (p**N) != 0:
            return CheckResult(
                "degree-rigidity", check_rigidity.__doc__, False, cases,
                {"nondivisible degree": tower.bundles[0].degree},
            )
        cases += 1
    # periodic: degree 0, trivial splitting, rejection of nonzero degree
    for p in (2, 3):
        fs = _field(p)
        one, zero = LaurentPoly.one(fs), LaurentPoly.zero(fs)
        B = BundleP1(LaurentMatrix(fs, [[one, one], [zero, one]]))
        tower = FdivTowerP1("periodic", [B])
        rep = fdiv_rigidity(tower)
        if not rep.passed or rep.details["splitting"] != [0, 0]:
            return CheckResult(
                "degree-rigidity", check_rigidity.__doc__, False, cases,
                {"periodic splitting": rep.details["splitting"]},
            )
        cases += 1
        try:
            FdivTowerP1("periodic", [BundleP1.line(fs, 1)])
            return CheckResult(
                "degree-rigidity", check_rigidity.__doc__, False, cases,
                {"missed rejection": p},
            )
        except InvalidTower:
            cases += 1
        try:
            fdiv_rigidity(
                FdivTowerP1("periodic", [BundleP1.direct_sum_of_lines(fs, [1, -1])])
            )
            return CheckResult(
                "degree-rigidity", check_rigidity.__doc__, False, cases,
                {"missed splitting rejection": p},
            )
        except InvalidTower:
            cases += 1
    return CheckResult("degree-rigidity", check_rigidity.__doc__, True, cases)


def check_euler(seed: int) -> CheckResult:
    """Euler characteristics of tower levels equal rank times (t+1) for
    t in [-5, 5], computed through both cohomology windows, never through
    the splitting."""
    rng = _rng(seed, "euler")
    cases = 0
    towers = []
    for p in (2, 2, 3):
        fs = _field(p)
        r = rng.choice((1, 2))
        top = BundleP1(_rand_transition(fs, rng, r, max_abs_exp=1, diag_lo=0, diag_hi=0))
        towers.append(FdivTowerP1.truncated_from_top(top, 2))
    for p in (2, 3):
        fs = _field(p)
        one, zero = LaurentPoly.one(fs), LaurentPoly.zero(fs)
        c = LaurentPoly.constant(fs, p - 1)
        B = BundleP1(LaurentMatrix(fs, [[one, c], [zero, one]]))
        towers.append(FdivTowerP1("periodic", [B, B]))
    for tower in towers:
        for E in tower.bundles:
            if E.degree != 0:
                return CheckResult(
                    "euler-characteristic", check_euler.__doc__, False, cases,
                    {"nonzero tower degree": E.degree},
                )
            for t in range(-5, 6):
                chi = euler_char(E, t)  # raises if the identity fails
                if chi != E.rank * (t + 1):
                    return CheckResult(
                        "euler-characteristic", check_euler.__doc__, False, cases,
                        {"chi": chi, "rank": E.rank, "t": t},
                    )
                cases += 1
    return CheckResult("euler-characteristic", check_euler.__doc__, True, cases)


def check_splitting_oracle(seed: int) -> CheckResult:
    """Factorization splitting equals the section-count splitting on 100
    seeded transition matrices, with exact factor reconstruction."""
    rng = _rng(seed, "splitting-oracle")
    for trial in range(100):
        p = rng.choice((2, 3, 5))
        fs = _field(p)
        r = rng.randrange(1, 4)
        T = _rand_transition(fs, rng, r)
        E = BundleP1(T)
        f = birkhoff_factor(T)  # re-verifies U diag V = T and unimodularity
        oracle = splitting_from_h0(E)
        if f.exponents != oracle.exponents:
            return CheckResult(
                "splitting-oracle", check_splitting_oracle.__doc__, False, trial,
                {"factorization": list(f.exponents), "oracle": list(oracle.exponents)},
            )
    return CheckResult(
        "splitting-oracle", check_splitting_oracle.__doc__, True, 100
    )


def check_spectral(seed: int) -> CheckResult:
    """Both page-versus-abutment inequalities and Euler conservation hold in
    1000 seeded admissible simulations with M, N <= 5 and entries <= 4."""
    rng = _rng(seed, "spectral")
    slacks = [0] * 6
    for trial in range(1000):
        M = rng.randrange(0, 6)
        N = rng.randrange(0, 6)
        dims = {
            (s, t): rng.randrange(0, 5)
            for s in range(M + 1)
            for t in range(N + 1)
            if rng.random() < 0.5
        }
        page = SpectralPage(M, N, dims)
        res = simulate(page, rng.randrange(2**63))
        euler_page = sum((-1) ** (s + t) * d for (s, t), d in page.dims.items())
        if res.euler_abutment() != euler_page:
            return CheckResult(
                "spectral-bounds", check_spectral.__doc__, False, trial,
                {"euler mismatch at": trial},
            )
        for n in range(M + N + 1):
            hn = res.abutment[n]
            if hn > bound_upper(page, n):
                return CheckResult(
                    "spectral-bounds", check_spectral.__doc__, False, trial,
                    {"upper bound violated at": [trial, n]},
                )
            rep = bound_edge(page, n, hn)
            if not rep.passed:
                return CheckResult(
                    "spectral-bounds", check_spectral.__doc__, False, trial,
                    {"edge bound violated at": [trial, n]},
                )
            slacks[min(rep.slack, 5)] += 1
    return CheckResult(
        "spectral-bounds", check_spectral.__doc__, True, 1000,
        {"edge slack histogram (clipped at 5)": slacks},
    )


def check_limit_bound(seed: int) -> CheckResult:
    """Inverse limits never exceed the largest level dimension, and the
    stable image chains stabilise with recorded certificates: 200 seeded
    towers with dims <= 6 over F_2, F_3, F_4."""
    rng = _rng(seed, "limit-bound")
    fields = [_field(2), _field(3), _field(2, 2, [1, 1, 1])]
    for trial in range(200):
        fs = fields[rng.randrange(3)]
        if rng.random() < 0.5:
            n = rng.randrange(2, 13)
            dims = [rng.randrange(0, 7) for _ in range(n)]
            maps = [
                SemilinearMap(
                    fs,
                    np.array(
                        [
                            [fs.random(rng) for _ in range(dims[i + 1])]
                            for _ in range(dims[i])
                        ],
                        dtype=np.int64,
                    ).reshape(dims[i], dims[i + 1]),
                    rng.randrange(0, fs.e + 1),
                )
                for i in range(n - 1)
            ]
            t = TwistedTower.truncated(fs, dims, maps)
        else:
            m = rng.randrange(1, 4)
            dims = [rng.randrange(1, 7) for _ in range(m)]
            maps = [
                SemilinearMap(
                    fs,
                    np.array(
                        [
                            [fs.random(rng) for _ in range(dims[(j + 1) % m])]
                            for _ in range(dims[j])
                        ],
                        dtype=np.int64,
                    ).reshape(dims[j], dims[(j + 1) % m]),
                    rng.randrange(0, fs.e + 1),
                )
                for j in range(m)
            ]
            t = TwistedTower.periodic(fs, dims, maps)
        rep = bound_check(t)
        ml = check_ML(t)
        if not rep.passed or not ml.entries:
            return CheckResult(
                "limit-bound", check_limit_bound.__doc__, False, trial,
                {"lim": rep.lim, "sup": rep.sup_dim},
            )
        if any("stabilization_index" not in e for e in ml.entries):
            return CheckResult(
                "limit-bound", check_limit_bound.__doc__, False, trial,
                {"missing certificate at": trial},
            )
    return CheckResult("limit-bound", check_limit_bound.__doc__, True, 200)


def check_projective_finiteness(seed: int) -> CheckResult:
    """Every periodic tower (necessarily trivial levels of rank r) yields
    finite dimensions in all degrees: degree 0 at most r, higher degrees 0,
    with the derived limit certified 0 by stabilization."""
    rng = _rng(seed, "projective-finiteness")
    cases = 0
    fields = [_field(2), _field(3), _field(2, 2, [1, 1, 1])]
    for trial in range(20):
        fs = fields[rng.randrange(3)]
        r = rng.randrange(1, 4)
        m = rng.randrange(1, 4)
        isos = []
        for _ in range(m):
            while True:
                c = np.array(
                    [[fs.random(rng) for _ in range(r)] for _ in range(r)],
                    dtype=np.int64,
                )
                if linalg.rank(fs, c) == r:
                    isos.append(c)
                    break
        B = BundleP1.direct_sum_of_lines(fs, [0] * r)
        tower = FdivTowerP1("periodic", [B] * m, isos)
        rep = finiteness_report(tower)
        dims = [d.dim for d in rep.degrees]
        ok = (
            dims[0] <= r
            and all(d == 0 for d in dims[1:])
            and all(d.exact for d in rep.degrees)
            and all(d.r1lim == 0 for d in rep.degrees)
            and all(d.ml_certificate is not None for d in rep.degrees[1:])
        )
        if not ok:
            return CheckResult(
                "projective-finiteness", check_projective_finiteness.__doc__,
                False, cases, {"dims": dims, "r": r},
            )
        cases += 1
    return CheckResult(
        "projective-finiteness", check_projective_finiteness.__doc__, True, cases
    )


def check_affine_pathology(seed: int) -> CheckResult:
    """The degree-1 affine witness equals d - floor(d/p) by monomial linear
    algebra and grows strictly along d = p, p^2, p^3, p^4 for p in {2, 3}."""
    ladders = {}
    for p in (2, 3):
        vals = []
        for j in (1, 2, 3, 4):
            d = p**j
            w = h1d_affine_witness(p, d)
            if w != d - d // p:
                return CheckResult(
                    "affine-pathology", check_affine_pathology.__doc__, False,
                    len(vals), {"wrong witness": [p, d, w]},
                )
            vals.append(w)
        if not all(a < b for a, b in zip(vals, vals[1:])):
            return CheckResult(
                "affine-pathology", check_affine_pathology.__doc__, False,
                len(vals), {"not strictly increasing": vals},
            )
        ladders[str(p)] = vals
    return CheckResult(
        "affine-pathology", check_affine_pathology.__doc__, True, 8,
        {"witness ladders": ladders},
    )


ALL_CHECKS = [
    ("operator-composition", check_operator_composition),
    ("lucas-binomials", check_lucas),
    ("affine-tower-roundtrip", check_tower_roundtrip),
    ("h0-monotone", check_h0_monotone),
    ("degree-rigidity", check_rigidity),
    ("euler-characteristic", check_euler),
    ("splitting-oracle", check_splitting_oracle),
    ("spectral-bounds", check_spectral),
    ("limit-bound", check_limit_bound),
    ("projective-finiteness", check_projective_finiteness),
    ("affine-pathology", check_affine_pathology),
]


def run_checks(seed: int = 42, only: list[str] | None = None) -> list[CheckResult]:
    results = []
    for name, fn in ALL_CHECKS:
        if only and name not in only:
            continue
        results.append(fn(seed))
    results.sort(key=lambda r: r.name)
    return results
