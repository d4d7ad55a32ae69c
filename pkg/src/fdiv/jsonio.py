"""Shared JSON encodings (schema tag "fdiv/1").

field            {"p": 2, "e": 2, "modulus": [1, 1, 1]}   (modulus iff e > 1)
field element    coordinate list, little-endian, length e
Laurent poly     {"-2": coords, "0": coords}              (string exponent keys)
matrix           row-major nested lists of entries
operator         {"0": poly, "2": poly}                    (string index keys)
bundle           {"rank": r, "transition": matrix-of-polys}
bundle tower     {"kind": "truncated"|"periodic", "bundles": [...], "isos": [...]}
twisted tower    {"kind": ..., "levels": [...], "maps": [{"matrix": ..., "twist": t}],
                  "preamble": {"levels": [...], "maps": [...]}}
module           {"field": ..., "rank": r, "actions": [matrix-of-polys, ...]}
spectral page    {"M": m, "N": n, "dims": {"s,t": d}}

Every top-level document produced by the command line carries
"schema": "fdiv/1" and embeds the field it is defined over.
"""

from __future__ import annotations

import numpy as np

from .bundle_p1 import BundleP1, FdivTowerP1
from .diffops import DividedOperator
from .dmod_affine import DModulePresentation
from .errors import InvalidInput
from .fields import FieldElement, FieldSpec
from .laurent import LaurentMatrix, LaurentPoly
from .spectral import SpectralPage
from .towers import SemilinearMap, TwistedTower

SCHEMA = "fdiv/1"


# -- field ---------------------------------------------------------------


def field_to_json(fs: FieldSpec) -> dict:
    out = {"p": fs.p, "e": fs.e}
    if fs.modulus is not None:
        out["modulus"] = list(fs.modulus)
    return out


def field_from_json(obj: dict) -> FieldSpec:
    if not isinstance(obj, dict) or "p" not in obj:
        raise InvalidInput("field object needs at least the characteristic p")
    return FieldSpec(obj["p"], obj.get("e", 1), obj.get("modulus"))


def element_to_json(x: FieldElement) -> list[int]:
    return list(x.coordinates)


def element_from_json(fs: FieldSpec, obj) -> int:
    """Accepts a coordinate list or a bare integer; returns the code."""
    if isinstance(obj, int):
        return obj % fs.p if fs.e == 1 else fs.encode([obj])
    return fs.encode([int(c) for c in obj])


# -- polynomials and matrices ------------------------------------------------


def poly_to_json(f: LaurentPoly) -> dict:
    fs = f.field
    return {str(m): list(fs.decode(c)) for m, c in sorted(f.coeffs.items())}


def poly_from_json(fs: FieldSpec, obj: dict) -> LaurentPoly:
    if not isinstance(obj, dict):
        raise InvalidInput("polynomial must be an object of exponent: coefficient")
    return LaurentPoly(fs, {int(m): element_from_json(fs, c) for m, c in obj.items()})


def matrix_to_json(T: LaurentMatrix) -> list:
    return [[poly_to_json(e) for e in row] for row in T.entries]


def matrix_from_json(fs: FieldSpec, obj) -> LaurentMatrix:
    return LaurentMatrix(fs, [[poly_from_json(fs, e) for e in row] for row in obj])


def const_matrix_to_json(fs: FieldSpec, M: np.ndarray) -> list:
    return [[list(fs.decode(int(c))) for c in row] for row in M]


def const_matrix_from_json(fs: FieldSpec, obj) -> np.ndarray:
    rows = [[element_from_json(fs, c) for c in row] for row in obj]
    if not rows:
        return np.zeros((0, 0), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


# -- operators -----------------------------------------------------------------


def operator_to_json(op: DividedOperator) -> dict:
    return {str(k): poly_to_json(f) for k, f in sorted(op.terms.items())}


def operator_from_json(fs: FieldSpec, obj: dict) -> DividedOperator:
    return DividedOperator(fs, {int(k): poly_from_json(fs, f) for k, f in obj.items()})


# -- bundles and towers on the projective line ---------------------------------


def bundle_to_json(E: BundleP1) -> dict:
    return {"rank": E.rank, "transition": matrix_to_json(E.transition)}


def bundle_from_json(fs: FieldSpec, obj: dict) -> BundleP1:
    T = matrix_from_json(fs, obj["transition"])
    E = BundleP1(T)
    if "rank" in obj and obj["rank"] != E.rank:
        raise InvalidInput("declared rank disagrees with the transition matrix")
    return E


def p1_tower_to_json(t: FdivTowerP1) -> dict:
    out = {
        "kind": t.kind,
        "bundles": [bundle_to_json(b) for b in t.bundles],
    }
    if t.kind == "periodic":
        out["isos"] = [const_matrix_to_json(t.field, c) for c in t.isos]
    return out


def p1_tower_from_json(fs: FieldSpec, obj: dict) -> FdivTowerP1:
    bundles = [bundle_from_json(fs, b) for b in obj["bundles"]]
    kind = obj.get("kind", "truncated")
    isos = None
    if kind == "periodic" and "isos" in obj:
        isos = [const_matrix_from_json(fs, c) for c in obj["isos"]]
    return FdivTowerP1(kind, bundles, isos)


# -- twisted towers ----------------------------------------------------------


def semilinear_to_json(fs: FieldSpec, f: SemilinearMap) -> dict:
    return {"matrix": const_matrix_to_json(fs, f.matrix), "twist": f.twist}


def semilinear_from_json(
    fs: FieldSpec, obj: dict, shape: tuple[int, int]
) -> SemilinearMap:
    mat = const_matrix_from_json(fs, obj.get("matrix", []))
    if mat.size == 0:
        mat = np.zeros(shape, dtype=np.int64)
    return SemilinearMap(fs, mat.reshape(shape), int(obj.get("twist", 0)))


def twisted_tower_to_json(t: TwistedTower) -> dict:
    fs = t.field
    out = {
        "kind": t.kind,
        "levels": list(t.levels),
        "maps": [semilinear_to_json(fs, f) for f in t.maps],
    }
    if t.kind == "periodic" and t.preamble_levels:
        out["preamble"] = {
            "levels": list(t.preamble_levels),
            "maps": [semilinear_to_json(fs, f) for f in t.preamble_maps],
        }
    return out


def twisted_tower_from_json(fs: FieldSpec, obj: dict) -> TwistedTower:
    kind = obj.get("kind", "truncated")
    levels = [int(d) for d in obj["levels"]]
    raw_maps = obj.get("maps", [])
    if kind == "truncated":
        maps = [
            semilinear_from_json(fs, m, (levels[i], levels[i + 1]))
            for i, m in enumerate(raw_maps)
        ]
        return TwistedTower.truncated(fs, levels, maps)
    m = len(levels)
    maps = [
        semilinear_from_json(fs, mm, (levels[j], levels[(j + 1) % m]))
        for j, mm in enumerate(raw_maps)
    ]
    pre = obj.get("preamble")
    if pre:
        plevels = [int(d) for d in pre["levels"]]
        pmaps = []
        for i, mm in enumerate(pre["maps"]):
            src = plevels[i + 1] if i + 1 < len(plevels) else levels[0]
            pmaps.append(semilinear_from_json(fs, mm, (plevels[i], src)))
        return TwistedTower.periodic(fs, levels, maps, plevels, pmaps)
    return TwistedTower.periodic(fs, levels, maps)


# -- modules -------------------------------------------------------------------


def module_to_json(M: DModulePresentation) -> dict:
    return {
        "field": field_to_json(M.field),
        "rank": M.rank,
        "actions": [matrix_to_json(a) for a in M.actions],
    }


def module_from_json(obj: dict, fs: FieldSpec | None = None) -> DModulePresentation:
    field = field_from_json(obj["field"]) if "field" in obj else fs
    if field is None:
        raise InvalidInput("module document carries no field")
    actions = [matrix_from_json(field, a) for a in obj["actions"]]
    return DModulePresentation(field, int(obj["rank"]), actions)


# -- spectral pages --------------------------------------------------------------


def page_to_json(p: SpectralPage) -> dict:
    return {
        "M": p.M,
        "N": p.N,
        "dims": {f"{s},{t}": d for (s, t), d in sorted(p.dims.items())},
    }


def page_from_json(obj: dict) -> SpectralPage:
    dims = {}
    for key, d in obj.get("dims", {}).items():
        s, t = key.split(",")
        dims[(int(s), int(t))] = int(d)
    return SpectralPage(int(obj["M"]), int(obj["N"]), dims)
