"""Frobenius-twisted inverse systems of finite-dimensional vector spaces.

A tower has levels V_0, V_1, ... with downward transition maps
f_i : V_(i+1) -> V_i, each a matrix together with a twist exponent t meaning
v -> M . Frob^t(v).  Over a finite field the Frobenius is bijective, so
images and kernels of these semilinear maps are genuine subspaces, computed
by applying the Frobenius to a basis and row-reducing.

Two finite descriptions are supported: explicit truncations, whose answers
are flagged as truncation-only, and eventually-periodic towers, whose limits
are exact.  The stable subspace of a level is the intersection of the images
from all higher levels; restricted to stable subspaces the transitions are
surjective, which drives the limit and derived-limit computations.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg
from .errors import InvalidInput
from .fields import FieldSpec


def _mat_mul(fs: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.shape[1] != B.shape[0]:
        raise InvalidInput("semilinear map shapes do not compose")
    if fs.e == 1:
        return (A @ B) % fs.p
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for i in range(A.shape[0]):
        for j in range(B.shape[1]):
            acc = 0
            for k in range(A.shape[1]):
                acc = fs.add(acc, fs.mul(int(A[i, k]), int(B[k, j])))
            out[i, j] = acc
    return out


@dataclass(frozen=True)
class SemilinearMap:
    """v -> matrix . (coefficientwise Frobenius^twist of v)."""

    field: FieldSpec
    matrix: np.ndarray  # shape (dim_out, dim_in), int element codes
    twist: int = 0

    def __post_init__(self):
        object.__setattr__(
            self, "matrix", np.array(self.matrix, dtype=np.int64) % self.field.q
        )

    @property
    def dim_out(self) -> int:
        return self.matrix.shape[0]

    @property
    def dim_in(self) -> int:
        return self.matrix.shape[1]

    def apply(self, v: np.ndarray) -> np.ndarray:
        tv = self.field.arr_frob(np.asarray(v, dtype=np.int64), self.twist)
        return _mat_mul(self.field, self.matrix, tv.reshape(-1, 1)).ravel()

    def compose(self, inner: "SemilinearMap") -> "SemilinearMap":
        """self after inner: (M1, t1) o (M2, t2) = (M1 . Frob^t1(M2), t1 + t2)."""
        m2 = self.field.arr_frob(inner.matrix, self.twist)
        return SemilinearMap(
            self.field, _mat_mul(self.field, self.matrix, m2), self.twist + inner.twist
        )

    def image_rows(self) -> np.ndarray:
        """Basis (rows) of the image of the full domain."""
        return linalg.row_space(self.field, self.matrix.T)

    def push_rows(self, rows: np.ndarray) -> np.ndarray:
        """Basis of the image of the subspace spanned by the given rows."""
        if rows.shape[0] == 0:
            return np.zeros((0, self.dim_out), dtype=np.int64)
        tw = self.field.arr_frob(rows, self.twist)
        img = _mat_mul(self.field, tw, self.matrix.T)
        return linalg.row_space(self.field, img)

    @classmethod
    def identity(cls, field: FieldSpec, dim: int, twist: int = 0) -> "SemilinearMap":
        return cls(field, np.eye(dim, dtype=np.int64), twist)


class TwistedTower:
    """Inverse system with maps f_i : V_(i+1) -> V_i.

    truncated: explicit levels V_0..V_N and maps f_0..f_(N-1).
    periodic: optional preamble levels P_0..P_(a-1) with maps
    f_0..f_(a-1) (the last one entering from the block start), then a
    repeating block B_0..B_(m-1) with maps g_j : B_((j+1) mod m) -> B_j.
    """

    def __init__(
        self,
        kind: str,
        field: FieldSpec,
        levels: list[int],
        maps: list[SemilinearMap],
        preamble_levels: list[int] | None = None,
        preamble_maps: list[SemilinearMap] | None = None,
    ):
        if kind not in ("truncated", "periodic"):
            raise InvalidInput("tower kind must be truncated or periodic")
        self.kind = kind
        self.field = field
        self.levels = list(levels)
        self.maps = list(maps)
        self.preamble_levels = list(preamble_levels or [])
        self.preamble_maps = list(preamble_maps or [])
        if kind == "truncated":
            if self.preamble_levels or self.preamble_maps:
                raise InvalidInput("truncated towers have no preamble")
            if len(maps) != max(len(levels) - 1, 0):
                raise InvalidInput("need one map per adjacent level pair")
            for i, f in enumerate(maps):
                if f.matrix.shape != (levels[i], levels[i + 1]):
                    raise InvalidInput(
                        f"map {i} has shape {f.matrix.shape}, "
                        f"expected ({levels[i]}, {levels[i + 1]})"
                    )
        else:
            if not levels:
                raise InvalidInput("periodic towers need a nonempty block")
            if len(maps) != len(levels):
                raise InvalidInput("periodic block needs one map per level")
            m = len(levels)
            for j, g in enumerate(maps):
                if g.matrix.shape != (levels[j], levels[(j + 1) % m]):
                    raise InvalidInput(f"block map {j} shape mismatch")
            if len(self.preamble_maps) != len(self.preamble_levels):
                raise InvalidInput("preamble needs one map per preamble level")
            for i, f in enumerate(self.preamble_maps):
                src = (
                    self.preamble_levels[i + 1]
                    if i + 1 < len(self.preamble_levels)
                    else levels[0]
                )
                if f.matrix.shape != (self.preamble_levels[i], src):
                    raise InvalidInput(f"preamble map {i} shape mismatch")

    # -- navigation -------------------------------------------------------

    @classmethod
    def truncated(cls, field, levels, maps) -> "TwistedTower":
        return cls("truncated", field, levels, maps)

    @classmethod
    def periodic(
        cls, field, block_levels, block_maps, preamble_levels=None, preamble_maps=None
    ) -> "TwistedTower":
        return cls(
            "periodic", field, block_levels, block_maps, preamble_levels, preamble_maps
        )

    @property
    def preamble_len(self) -> int:
        return len(self.preamble_levels)

    @property
    def block_len(self) -> int:
        return len(self.levels) if self.kind == "periodic" else 0

    def top_index(self) -> int | None:
        return len(self.levels) - 1 if self.kind == "truncated" else None

    def level_dim(self, i: int) -> int:
        if self.kind == "truncated":
            if not 0 <= i < len(self.levels):
                raise InvalidInput("level outside the truncation")
            return self.levels[i]
        if i < self.preamble_len:
            return self.preamble_levels[i]
        return self.levels[(i - self.preamble_len) % self.block_len]

    def map_at(self, i: int) -> SemilinearMap:
        """The map V_(i+1) -> V_i."""
        if self.kind == "truncated":
            return self.maps[i]
        if i < self.preamble_len:
            return self.preamble_maps[i]
        return self.maps[(i - self.preamble_len) % self.block_len]

    def max_dim(self) -> int:
        dims = list(self.levels) + list(self.preamble_levels)
        return max(dims) if dims else 0

    def representative_indices(self) -> list[int]:
        if self.kind == "truncated":
            return list(range(len(self.levels)))
        return list(range(self.preamble_len + self.block_len))


@dataclass
class StableResult:
    level: int
    basis: np.ndarray  # rows spanning the stable subspace of the level
    dim: int
    stabilization_index: int
    exact: bool  # False when only certified up to a truncation


@dataclass
class MLReport:
    exact: bool
    entries: list[dict] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return True  # pointwise finite-dimensional towers always satisfy ML


def _image_chain(tower: TwistedTower, i: int, top: int):
    """Subspace chain Im f_(j,i) for j = i+1..top; returns (spaces, index)."""
    fs = tower.field
    spaces = []
    comp = None  # composite V_j -> V_i
    for j in range(i + 1, top + 1):
        f = tower.map_at(j - 1)
        comp = f if comp is None else comp.compose(f)
        spaces.append(comp.image_rows())
    idx = len(spaces)
    while idx > 1 and linalg.subspace_equal(fs, spaces[idx - 1], spaces[idx - 2]):
        idx -= 1
    return spaces, i + idx  # chain stabilised from level i+idx onward


def stable_subspace(tower: TwistedTower, i: int) -> StableResult:
    """Intersection of the images of all composite maps into level i.

    The images are nested, so the intersection is the eventual image.  A
    truncated tower certifies only the chain it contains; an eventually
    periodic tower iterates whole periods of the autonomous block composite
    until a fixed subspace is reached, which is then exact.
    """
    fs = tower.field
    if tower.kind == "truncated":
        top = tower.top_index()
        if i > top:
            raise InvalidInput("level outside the truncation")
        if i == top:
            basis = np.eye(tower.level_dim(i), dtype=np.int64)
            return StableResult(i, basis, tower.level_dim(i), i, False)
        spaces, stab = _image_chain(tower, i, top)
        basis = spaces[-1]
        return StableResult(i, basis, basis.shape[0], stab, False)

    a, m = tower.preamble_len, tower.block_len
    pos = 0 if i < a else (i - a) % m
    block_level = a + pos
    # one-period composite g : B_pos -> B_pos (innermost map applied first)
    g = None
    for j in range(block_level, block_level + m):
        f = tower.map_at(j)
        g = f if g is None else g.compose(f)
    w = np.eye(tower.level_dim(block_level), dtype=np.int64)
    periods = 0
    while True:
        w_next = g.push_rows(w)
        periods += 1
        if linalg.subspace_equal(fs, w_next, w):
            break
        w = w_next
    stable_block = w
    if i >= a:
        return StableResult(i, stable_block, stable_block.shape[0], periods, True)
    # push the block stable space down through the preamble
    basis = stable_block
    for j in range(block_level - 1, i - 1, -1):
        basis = tower.map_at(j).push_rows(basis)
    return StableResult(i, basis, basis.shape[0], periods, True)


def check_ML(tower: TwistedTower) -> MLReport:
    """Record, per level, where the image chain into it stabilises.

    Pointwise finite-dimensional towers always satisfy the condition: the
    nested images can only drop finitely often.  The report is the
    certificate (exact for periodic towers, chain-length-limited otherwise).
    """
    exact = tower.kind == "periodic"
    rep = MLReport(exact=exact)
    for i in tower.representative_indices():
        res = stable_subspace(tower, i)
        rep.entries.append(
            {
                "level": i,
                "stable_dim": res.dim,
                "stabilization_index": res.stabilization_index,
                "exact": res.exact,
            }
        )
    return rep


def lim_dim(tower: TwistedTower) -> tuple[int, bool]:
    """Dimension of the inverse limit, with an exactness flag.

    Restricted to stable subspaces all transitions are surjective; around a
    periodic block the stable dimensions therefore agree and the transitions
    become isomorphisms, so the limit dimension is that common value.  For a
    truncated tower only the stable dimension at the base is certified.
    """
    if tower.kind == "truncated":
        res = stable_subspace(tower, 0)
        return res.dim, False
    res = stable_subspace(tower, tower.preamble_len)
    return res.dim, True


def r1lim_dim(tower: TwistedTower) -> tuple[int, MLReport]:
    """First derived limit: 0 for every pointwise finite-dimensional tower,
    returned together with the stabilization certificate that shows it."""
    return 0, check_ML(tower)


@dataclass
class BoundReport:
    lim: int
    sup_dim: int
    exact: bool

    @property
    def passed(self) -> bool:
        return self.lim <= self.sup_dim


def bound_check(tower: TwistedTower) -> BoundReport:
    """dim lim <= sup_i dim V_i, reporting both numbers."""
    d, exact = lim_dim(tower)
    return BoundReport(d, tower.max_dim(), exact)


def limit_element_extends(tower: TwistedTower, v: np.ndarray) -> bool:
    """For a periodic tower: does the stable vector v at the block start
    extend to a compatible sequence through one full period (and hence, by
    bijectivity of the restricted period map, to the whole tower)?"""
    if tower.kind != "periodic":
        raise InvalidInput("element extension is certified for periodic towers")
    fs = tower.field
    base = tower.preamble_len
    res = stable_subspace(tower, base)
    if not linalg.contains_rows(fs, res.basis, np.asarray(v).reshape(1, -1)):
        return False
    # solve one period of compatibility equations upward within the stables
    g = None
    for j in range(base, base + tower.block_len):
        f = tower.map_at(j)
        g = f if g is None else g.compose(f)
    # find w in the stable subspace with g(w) = v
    rows = res.basis
    if rows.shape[0] == 0:
        return bool(np.all(np.asarray(v) == 0))
    images = g.push_rows(rows)  # basis of g(stable)
    if not linalg.contains_rows(fs, images, np.asarray(v).reshape(1, -1)):
        return False
    # g restricted to the stable subspace must be injective as well
    tw = fs.arr_frob(rows, g.twist)
    img = _mat_mul(fs, tw, g.matrix.T)
    return linalg.rank(fs, img) == rows.shape[0]
