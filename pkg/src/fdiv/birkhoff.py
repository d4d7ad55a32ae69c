"""Birkhoff factorization of Laurent transition matrices on the line pair.

Any T invertible over k[x, 1/x] factors as U . diag(x^{a_i}) . V with U
invertible over k[x] and V invertible over k[1/x]; the sorted exponents are
the splitting type of the associated rank-r bundle.

The algorithm alternates two reduction passes driven by exact linear algebra
over the coefficient field:

* top pass (row operations over k[x]): while the matrix of top-degree row
  coefficients is singular, a dependence among its rows lets the row of
  largest top degree drop by at least one;
* bottom pass (column operations over k[1/x]): dually for bottom-degree
  column coefficients.

The degree span  sum_i t_i - sum_j b_j  strictly decreases with every
operation and is bounded below by 0, so the passes terminate with both
coefficient matrices nonsingular.  Then sum t_i = sum b_j = deg det, which
forces a permutation matching t_i = b_{sigma(i)} whose matched entries are
exact monomials; an echelon sweep fixes the matching and the remaining
off-pivot terms are cleared top-down by exact single-term kills.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import FactorizationFailed, NotATransitionMatrix
from .laurent import LaurentMatrix, LaurentPoly

_PASS_CAP = 20000


@dataclass
class BirkhoffFactors:
    """Exact factors with U . diag . V equal to the input transition matrix."""

    exponents: tuple[int, ...]  # sorted descending
    u: LaurentMatrix
    diag: LaurentMatrix
    v: LaurentMatrix


class _Worker:
    def __init__(self, T: LaurentMatrix):
        self.fs = T.field
        self.n = T.rows
        self.T = [[T.entries[i][j] for j in range(self.n)] for i in range(self.n)]
        ident = LaurentMatrix.identity(self.fs, self.n)
        self.U = [[ident.entries[i][j] for j in range(self.n)] for i in range(self.n)]
        self.V = [[ident.entries[i][j] for j in range(self.n)] for i in range(self.n)]
        self.ops = 0

    # -- elementary operations, tracked so that T_orig = U . T . V ---------

    def _tick(self):
        self.ops += 1
        if self.ops > _PASS_CAP:
            raise FactorizationFailed("factorization exceeded its operation cap")

    def row_add(self, dst: int, src: int, q: LaurentPoly):
        """row_dst += q * row_src on T; q must lie in k[x]."""
        self._tick()
        n = self.n
        self.T[dst] = [self.T[dst][j] + q * self.T[src][j] for j in range(n)]
        # U <- U . E^{-1}: col_src -= q * col_dst
        for i in range(n):
            self.U[i][src] = self.U[i][src] - q * self.U[i][dst]

    def col_add(self, dst: int, src: int, q: LaurentPoly):
        """col_dst += q * col_src on T; q must lie in k[1/x]."""
        self._tick()
        n = self.n
        for i in range(n):
            self.T[i][dst] = self.T[i][dst] + q * self.T[i][src]
        # V <- E^{-1} . V: row_src -= q * row_dst
        self.V[src] = [self.V[src][j] - q * self.V[dst][j] for j in range(n)]

    # -- degree data ---------------------------------------------------------

    def row_tops(self) -> list[int]:
        tops = []
        for row in self.T:
            degs = [e.degree() for e in row if not e.is_zero()]
            if not degs:
                raise FactorizationFailed("zero row in an invertible matrix")
            tops.append(max(degs))
        return tops

    def col_bots(self) -> list[int]:
        bots = []
        for j in range(self.n):
            vals = [
                self.T[i][j].valuation()
                for i in range(self.n)
                if not self.T[i][j].is_zero()
            ]
            if not vals:
                raise FactorizationFailed("zero column in an invertible matrix")
            bots.append(min(vals))
        return bots

    def top_matrix(self, tops) -> np.ndarray:
        return np.array(
            [
                [self.T[i][j].coeffs.get(tops[i], 0) for j in range(self.n)]
                for i in range(self.n)
            ],
            dtype=np.int64,
        )

    def bot_matrix(self, bots) -> np.ndarray:
        return np.array(
            [
                [self.T[i][j].coeffs.get(bots[j], 0) for j in range(self.n)]
                for i in range(self.n)
            ],
            dtype=np.int64,
        )

    # -- reduction passes ------------------------------------------------------

    def top_pass(self) -> bool:
        """Row-reduce at x = infinity until the top coefficient matrix is
        nonsingular; returns whether anything changed."""
        fs = self.fs
        changed = False
        while True:
            tops = self.row_tops()
            tc = self.top_matrix(tops)
            ker = linalg.kernel_basis(fs, tc.T)  # left null space of tc
            if ker.shape[0] == 0:
                return changed
            lam = ker[0]
            support = [i for i in range(self.n) if lam[i]]
            dst = max(support, key=lambda i: (tops[i], -i))
            inv = fs.inv(int(lam[dst]))
            for i in support:
                if i == dst:
                    continue
                c = fs.mul(int(lam[i]), inv)
                q = LaurentPoly(fs, {tops[dst] - tops[i]: c})
                self.row_add(dst, i, q)
            changed = True

    def bottom_pass(self) -> bool:
        """Column-reduce at x = 0 until the bottom coefficient matrix is
        nonsingular; returns whether anything changed."""
        fs = self.fs
        changed = False
        while True:
            bots = self.col_bots()
            bc = self.bot_matrix(bots)
            ker = linalg.kernel_basis(fs, bc)  # right null space: column deps
            if ker.shape[0] == 0:
                return changed
            lam = ker[0]
            support = [j for j in range(self.n) if lam[j]]
            dst = min(support, key=lambda j: (bots[j], j))
            inv = fs.inv(int(lam[dst]))
            for j in support:
                if j == dst:
                    continue
                c = fs.mul(int(lam[j]), inv)
                q = LaurentPoly(fs, {bots[dst] - bots[j]: c})
                self.col_add(dst, j, q)
            changed = True

    def echelon_top(self, tops) -> list[int]:
        """Echelon sweep on the top coefficient matrix, eliminating only
        into rows of larger or equal top degree; returns pivot columns."""
        fs = self.fs
        order = sorted(range(self.n), key=lambda i: (tops[i], i))
        pivot_col: dict[int, int] = {}
        for pos, i in enumerate(order):
            tc_row = [self.T[i][j].coeffs.get(tops[i], 0) for j in range(self.n)]
            col = next(
                (j for j in range(self.n) if tc_row[j] and j not in pivot_col.values()),
                None,
            )
            if col is None:
                raise FactorizationFailed("top coefficient matrix lost rank")
            pivot_col[i] = col
            cinv = fs.inv(tc_row[col])
            for i2 in order[pos + 1 :]:
                c2 = self.T[i2][col].coeffs.get(tops[i2], 0)
                if c2:
                    # row_i2 -= (c2/c) x^(t2-t) row_i
                    self.row_add(i2, i, LaurentPoly(
                        fs, {tops[i2] - tops[i]: fs.neg(fs.mul(c2, cinv))}
                    ))
        return [pivot_col[i] for i in range(self.n)]

    def clear_offpivot(self, sigma: list[int], tops):
        """Kill every term outside the matched monomials, highest level first."""
        fs = self.fs
        while True:
            best = None
            for i in range(self.n):
                col = sigma[i]
                for i2 in range(self.n):
                    if i2 == i or self.T[i2][col].is_zero():
                        continue
                    k = self.T[i2][col].degree()
                    if best is None or k > best[0] or (
                        k == best[0] and (i2, col) < (best[1], best[2])
                    ):
                        best = (k, i2, col, i)
            if best is None:
                break
            k, i2, col, i = best
            c_piv = self.T[i][col].coeffs[tops[i]]
            c = self.T[i2][col].coeffs[k]
            q = LaurentPoly(fs, {k - tops[i]: fs.neg(fs.mul(c, fs.inv(c_piv)))})
            self.row_add(i2, i, q)
        # rows: pivot columns are now pure monomials, so these kills are exact
        for i in range(self.n):
            col = sigma[i]
            c_piv = self.T[i][col].coeffs[tops[i]]
            for j in range(self.n):
                if j == col:
                    continue
                while not self.T[i][j].is_zero():
                    k = self.T[i][j].degree()
                    c = self.T[i][j].coeffs[k]
                    q = LaurentPoly(fs, {k - tops[i]: fs.neg(fs.mul(c, fs.inv(c_piv)))})
                    self.col_add(j, col, q)


def birkhoff_factor(T: LaurentMatrix) -> BirkhoffFactors:
    """Factor T = U . diag(x^{a_i}) . V exactly (exponents sorted descending).

    Raises NotATransitionMatrix if det(T) is not a unit of the Laurent ring
    and FactorizationFailed if the reduction exceeds its operation cap.
    """
    if not T.is_square():
        raise NotATransitionMatrix("transition matrices are square")
    _, det_exp = T.det_unit()
    fs = T.field
    w = _Worker(T)
    while True:
        a = w.top_pass()
        b = w.bottom_pass()
        if not a and not b:
            break
    tops = w.row_tops()
    bots = w.col_bots()
    if sum(tops) != det_exp or sum(bots) != det_exp:
        raise FactorizationFailed("degree bookkeeping is inconsistent")
    sigma = w.echelon_top(tops)
    for i in range(w.n):
        if bots[sigma[i]] != tops[i]:
            raise FactorizationFailed("degree matching failed")
    w.clear_offpivot(sigma, tops)

    # T is now monomial: entry (i, sigma(i)) = c_i x^{t_i}
    n = w.n
    consts = [w.T[i][sigma[i]].coeffs[tops[i]] for i in range(n)]
    # fold the constants into U, the permutation into V
    zero, one = LaurentPoly.zero(fs), LaurentPoly.one(fs)
    U = LaurentMatrix(
        fs,
        [[w.U[i][j].scale(consts[j]) for j in range(n)] for i in range(n)],
    )
    P = LaurentMatrix(
        fs,
        [[one if j2 == sigma[i] else zero for j2 in range(n)] for i in range(n)],
    )
    V = P @ LaurentMatrix(fs, w.V)
    # sort exponents descending via a final conjugating permutation
    order = sorted(range(n), key=lambda i: (-tops[i], i))
    exps = [tops[i] for i in order]
    Ps = LaurentMatrix(
        fs,
        [[one if j == order[i] else zero for j in range(n)] for i in range(n)],
    )
    # T = U D V = (U Ps^T)(Ps D Ps^T)(Ps V)
    U = U @ Ps.transpose()
    V = Ps @ V
    D = LaurentMatrix.x_diag(fs, exps)

    factors = BirkhoffFactors(tuple(exps), U, D, V)
    _verify(T, factors)
    return factors


def _verify(T: LaurentMatrix, f: BirkhoffFactors):
    prod = f.u @ f.diag @ f.v
    if prod != T:
        raise FactorizationFailed("factor product does not reproduce the input")
    du = f.u.det()
    dv = f.v.det()
    if not (du.is_constant() and not du.is_zero()):
        raise FactorizationFailed("chart-0 factor is not unimodular over k[x]")
    if not (dv.is_constant() and not dv.is_zero()):
        raise FactorizationFailed("chart-1 factor is not unimodular over k[1/x]")
    if not f.u.is_polynomial():
        raise FactorizationFailed("chart-0 factor has negative exponents")
    mx = f.v.max_exp()
    if mx is not None and mx > 0:
        raise FactorizationFailed("chart-1 factor has positive exponents")
