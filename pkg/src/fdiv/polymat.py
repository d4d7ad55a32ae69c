"""Hermite and Smith forms for matrices over the univariate polynomial ring.

Entries are :class:`LaurentPoly` values with nonnegative support, regarded as
polynomials in one variable over the coefficient field (a PID).  Rows span
submodules of a free module; the Hermite form is the canonical echelon basis
and the Smith invariant factors certify freeness and rank.
"""

from __future__ import annotations

from .fields import FieldSpec
from .laurent import LaurentPoly


def _is_zero_row(row) -> bool:
    return all(e.is_zero() for e in row)


def hermite_form(field: FieldSpec, rows) -> list[list[LaurentPoly]]:
    """Canonical row echelon form over the PID; returns the nonzero rows.

    Pivots are monic, entries above a pivot are reduced to degree below it.
    Two row sets generate the same submodule iff their forms are equal.
    """
    work = [list(r) for r in rows if not _is_zero_row(r)]
    if not work:
        return []
    ncols = len(work[0])
    pivot_row = 0
    for col in range(ncols):
        live = [i for i in range(pivot_row, len(work)) if not work[i][col].is_zero()]
        if not live:
            continue
        # Euclidean gcd loop within the column
        while len(live) > 1:
            live.sort(key=lambda i: work[i][col].degree())
            base = live[0]
            for i in live[1:]:
                q, _ = work[i][col].divmod_poly(work[base][col])
                work[i] = [work[i][j] - q * work[base][j] for j in range(ncols)]
            live = [i for i in live if not work[i][col].is_zero()]
        src = live[0]
        work[pivot_row], work[src] = work[src], work[pivot_row]
        inv = field.inv(work[pivot_row][col].leading_code())
        work[pivot_row] = [e.scale(inv) for e in work[pivot_row]]
        # reduce entries above the pivot
        for i in range(pivot_row):
            if work[i][col].is_zero():
                continue
            q, _ = work[i][col].divmod_poly(work[pivot_row][col])
            if not q.is_zero():
                work[i] = [work[i][j] - q * work[pivot_row][j] for j in range(ncols)]
        pivot_row += 1
        work = [r for r in work[:pivot_row]] + [
            r for r in work[pivot_row:] if not _is_zero_row(r)
        ]
        if pivot_row == len(work):
            break
    return work[:pivot_row]


def module_solve(field: FieldSpec, gen_rows, target) -> list[LaurentPoly] | None:
    """Coefficients x with sum_i x_i * gen_rows[i] = target, or None.

    Solves membership in the row module by Hermite reduction with a tracked
    transformation.
    """
    gens = [list(r) for r in gen_rows]
    if not gens:
        return None
    ncols = len(gens[0])
    one, zero = LaurentPoly.one(field), LaurentPoly.zero(field)
    trans = [
        [one if i == j else zero for j in range(len(gens))] for i in range(len(gens))
    ]

    def combine(i, j, q):
        gens[i] = [gens[i][c] - q * gens[j][c] for c in range(ncols)]
        trans[i] = [trans[i][c] - q * trans[j][c] for c in range(len(trans[i]))]

    pivot_row = 0
    pivots: list[tuple[int, int]] = []
    for col in range(ncols):
        live = [i for i in range(pivot_row, len(gens)) if not gens[i][col].is_zero()]
        if not live:
            continue
        while len(live) > 1:
            live.sort(key=lambda i: gens[i][col].degree())
            base = live[0]
            for i in live[1:]:
                q, _ = gens[i][col].divmod_poly(gens[base][col])
                combine(i, base, q)
            live = [i for i in live if not gens[i][col].is_zero()]
        src = live[0]
        gens[pivot_row], gens[src] = gens[src], gens[pivot_row]
        trans[pivot_row], trans[src] = trans[src], trans[pivot_row]
        pivots.append((pivot_row, col))
        pivot_row += 1

    residue = list(target)
    coeff = [zero] * len(gen_rows)
    for row_i, col in pivots:
        if residue[col].is_zero():
            continue
        q, r = residue[col].divmod_poly(gens[row_i][col])
        if not r.is_zero():
            return None
        residue = [residue[c] - q * gens[row_i][c] for c in range(ncols)]
        coeff = [coeff[c] + q * trans[row_i][c] for c in range(len(coeff))]
    if not _is_zero_row(residue):
        return None
    return coeff


def smith_invariant_factors(field: FieldSpec, rows) -> list[LaurentPoly]:
    """Monic invariant factors d_1 | d_2 | ... of the matrix (nonzero ones)."""
    work = [list(r) for r in rows]
    work = [r for r in work if not _is_zero_row(r)]
    factors: list[LaurentPoly] = []
    while work and work[0]:
        m, n = len(work), len(work[0])
        # locate an entry of minimal degree
        best = None
        for i in range(m):
            for j in range(n):
                e = work[i][j]
                if e.is_zero():
                    continue
                if best is None or e.degree() < work[best[0]][best[1]].degree():
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        work[0], work[bi] = work[bi], work[0]
        for row in work:
            row[0], row[bj] = row[bj], row[0]
        # clear first row and column; restart if a division leaves a remainder
        dirty = False
        for i in range(1, m):
            if work[i][0].is_zero():
                continue
            q, r = work[i][0].divmod_poly(work[0][0])
            work[i] = [work[i][j] - q * work[0][j] for j in range(n)]
            if not r.is_zero():
                dirty = True
        for j in range(1, n):
            if work[0][j].is_zero():
                continue
            q, r = work[0][j].divmod_poly(work[0][0])
            for i in range(m):
                work[i][j] = work[i][j] - q * work[i][0]
            if not r.is_zero():
                dirty = True
        if dirty:
            continue
        # ensure the pivot divides every remaining entry
        pivot = work[0][0]
        offender = None
        for i in range(1, m):
            for j in range(1, n):
                if work[i][j].is_zero():
                    continue
                _, r = work[i][j].divmod_poly(pivot)
                if not r.is_zero():
                    offender = i
                    break
            if offender:
                break
        if offender is not None:
            work[0] = [work[0][j] + work[offender][j] for j in range(n)]
            continue
        factors.append(pivot.monic())
        work = [row[1:] for row in work[1:] if not _is_zero_row(row[1:])]
        if work and not work[0]:
            break
    return factors
