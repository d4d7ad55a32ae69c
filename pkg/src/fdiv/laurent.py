"""Laurent polynomials and matrices in one variable over a finite field.

Coefficients are stored as integer element codes keyed by exponent; the zero
polynomial has empty support, and degree/valuation queries on it return
``None`` rather than a sentinel integer.
"""

from __future__ import annotations

from .errors import InvalidInput, NotATransitionMatrix
from .fields import FieldElement, FieldSpec


class LaurentPoly:
    """sum_m c_m x^m with finitely many nonzero c_m in F_{p^e}."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: dict[int, int] | None = None):
        self.field = field
        clean: dict[int, int] = {}
        if coeffs:
            for m, c in coeffs.items():
                code = c.code if isinstance(c, FieldElement) else int(c) % field.q
                if code:
                    clean[int(m)] = code
        self.coeffs = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, field: FieldSpec) -> "LaurentPoly":
        return cls(field)

    @classmethod
    def one(cls, field: FieldSpec) -> "LaurentPoly":
        return cls(field, {0: 1})

    @classmethod
    def constant(cls, field: FieldSpec, c) -> "LaurentPoly":
        return cls(field, {0: c})

    @classmethod
    def x_power(cls, field: FieldSpec, m: int, c=1) -> "LaurentPoly":
        return cls(field, {m: c})

    @classmethod
    def from_poly_coeffs(cls, field: FieldSpec, coeffs) -> "LaurentPoly":
        """Dense little-endian coefficient list, exponents 0, 1, 2, ..."""
        return cls(field, {m: c for m, c in enumerate(coeffs)})

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int | None:
        return max(self.coeffs) if self.coeffs else None

    def valuation(self) -> int | None:
        return min(self.coeffs) if self.coeffs else None

    def is_polynomial(self) -> bool:
        return all(m >= 0 for m in self.coeffs)

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    def is_unit(self) -> bool:
        """Units of the Laurent ring are single terms c x^m, c != 0."""
        return len(self.coeffs) == 1

    def is_constant(self) -> bool:
        return not self.coeffs or set(self.coeffs) == {0}

    def coefficient(self, m: int) -> FieldElement:
        return FieldElement(self.field, self.coeffs.get(m, 0))

    def leading_code(self) -> int:
        return self.coeffs[max(self.coeffs)]

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        fs = self.field
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            s = fs.add(out.get(m, 0), c)
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        res = LaurentPoly.__new__(LaurentPoly)
        res.field, res.coeffs = fs, out
        return res

    def __neg__(self) -> "LaurentPoly":
        fs = self.field
        res = LaurentPoly.__new__(LaurentPoly)
        res.field = fs
        res.coeffs = {m: fs.neg(c) for m, c in self.coeffs.items()}
        return res

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        fs = self.field
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        out: dict[int, int] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                m = m1 + m2
                s = fs.add(out.get(m, 0), fs.mul(c1, c2))
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        res = LaurentPoly.__new__(LaurentPoly)
        res.field, res.coeffs = fs, out
        return res

    __rmul__ = __mul__

    def scale(self, c) -> "LaurentPoly":
        fs = self.field
        code = c.code if isinstance(c, FieldElement) else int(c) % fs.q
        if code == 0:
            return LaurentPoly.zero(fs)
        res = LaurentPoly.__new__(LaurentPoly)
        res.field = fs
        res.coeffs = {m: fs.mul(a, code) for m, a in self.coeffs.items()}
        return res

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by x^k."""
        res = LaurentPoly.__new__(LaurentPoly)
        res.field = self.field
        res.coeffs = {m + k: c for m, c in self.coeffs.items()}
        return res

    def map_coeffs(self, fn) -> "LaurentPoly":
        return LaurentPoly(self.field, {m: fn(c) for m, c in self.coeffs.items()})

    def frobenius_coeffs(self, n: int = 1) -> "LaurentPoly":
        fs = self.field
        return self.map_coeffs(lambda c: fs.frob(c, n))

    def substitute_power(self, k: int, frobenius_coeffs: bool = True) -> "LaurentPoly":
        """x -> x^k on exponents; optionally raise coefficients to the k-th power.

        With ``frobenius_coeffs`` set and k = p this is the p-th power map
        f -> f^p, i.e. the Frobenius pullback on local sections.
        """
        fs = self.field
        out = {}
        for m, c in self.coeffs.items():
            out[m * k] = fs.frob(c, 1) if frobenius_coeffs else c
        return LaurentPoly(fs, out)

    def divmod_poly(self, g: "LaurentPoly") -> tuple["LaurentPoly", "LaurentPoly"]:
        """Euclidean division among ordinary polynomials (support >= 0)."""
        if not self.is_polynomial() or not g.is_polynomial():
            raise InvalidInput("divmod is defined for ordinary polynomials only")
        if g.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        fs = self.field
        dg = g.degree()
        inv_lead = fs.inv(g.coeffs[dg])
        rem = dict(self.coeffs)
        quo: dict[int, int] = {}
        while rem:
            dr = max(rem)
            if dr < dg:
                break
            c = fs.mul(rem[dr], inv_lead)
            quo[dr - dg] = c
            for m, b in g.coeffs.items():
                mm = dr - dg + m
                s = fs.sub(rem.get(mm, 0), fs.mul(c, b))
                if s:
                    rem[mm] = s
                else:
                    rem.pop(mm, None)
        return LaurentPoly(fs, quo), LaurentPoly(fs, rem)

    def monic(self) -> "LaurentPoly":
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.leading_code()))

    # -- misc -----------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, LaurentPoly)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, tuple(sorted(self.coeffs.items()))))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for m in sorted(self.coeffs):
            c = self.coeffs[m]
            cs = "" if (c == 1 and m != 0) else (
                str(c) if self.field.e == 1 else str(self.field.decode(c))
            )
            if m == 0:
                parts.append(cs or "1")
            elif m == 1:
                parts.append(f"{cs}x" if cs else "x")
            else:
                parts.append(f"{cs}x^{m}" if cs else f"x^{m}")
        return " + ".join(parts)


def substitute_power(f: LaurentPoly, p: int, frobenius_coeffs: bool = True) -> LaurentPoly:
    """Module-level alias for the chart-wise pullback x -> x^p."""
    return f.substitute_power(p, frobenius_coeffs)


class LaurentMatrix:
    """Rectangular matrix of Laurent polynomials over one field."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: FieldSpec, entries):
        self.field = field
        ent = tuple(tuple(e for e in row) for row in entries)
        if not ent or not ent[0]:
            raise InvalidInput("matrix needs at least one row and column")
        self.rows = len(ent)
        self.cols = len(ent[0])
        for row in ent:
            if len(row) != self.cols:
                raise InvalidInput("inconsistent row lengths")
        self.entries = ent

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "LaurentMatrix":
        one, zero = LaurentPoly.one(field), LaurentPoly.zero(field)
        return cls(field, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, field: FieldSpec, diag) -> "LaurentMatrix":
        zero = LaurentPoly.zero(field)
        n = len(diag)
        return cls(field, [[diag[i] if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def x_diag(cls, field: FieldSpec, exps) -> "LaurentMatrix":
        return cls.diagonal(field, [LaurentPoly.x_power(field, a) for a in exps])

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def row(self, i):
        return self.entries[i]

    def col(self, j):
        return tuple(self.entries[i][j] for i in range(self.rows))

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.cols != other.rows:
            raise InvalidInput("matrix shapes do not compose")
        zero = LaurentPoly.zero(self.field)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    e = self.entries[i][k]
                    f = other.entries[k][j]
                    if e.coeffs and f.coeffs:
                        acc = acc + e * f
                row.append(acc)
            out.append(row)
        return LaurentMatrix(self.field, out)

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return LaurentMatrix(
            self.field,
            [
                [self.entries[i][j] + other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ],
        )

    def __sub__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return LaurentMatrix(
            self.field,
            [
                [self.entries[i][j] - other.entries[i][j] for j in range(self.cols)]
                for i in range(self.rows)
            ],
        )

    def scale(self, f: LaurentPoly) -> "LaurentMatrix":
        return self.map_entries(lambda e: e * f)

    def transpose(self) -> "LaurentMatrix":
        return LaurentMatrix(
            self.field,
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
        )

    def map_entries(self, fn) -> "LaurentMatrix":
        return LaurentMatrix(
            self.field, [[fn(e) for e in row] for row in self.entries]
        )

    def substitute_power(self, k: int, frobenius_coeffs: bool = True) -> "LaurentMatrix":
        return self.map_entries(lambda e: e.substitute_power(k, frobenius_coeffs))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def det(self) -> LaurentPoly:
        if not self.is_square():
            raise InvalidInput("determinant of a non-square matrix")
        n = self.rows
        if n == 1:
            return self.entries[0][0]
        # cofactor expansion along the first row; fine at desk scale
        zero = LaurentPoly.zero(self.field)
        out = zero
        for j in range(n):
            e = self.entries[0][j]
            if e.is_zero():
                continue
            minor = LaurentMatrix(
                self.field,
                [
                    [self.entries[i][jj] for jj in range(n) if jj != j]
                    for i in range(1, n)
                ],
            )
            term = e * minor.det()
            out = out + term if j % 2 == 0 else out - term
        return out

    def det_unit(self) -> tuple[int, int]:
        """(c, m) with det = c x^m; raises if the determinant is not a unit."""
        d = self.det()
        if not d.is_unit():
            raise NotATransitionMatrix(f"determinant {d!r} is not a unit c*x^m")
        m = d.degree()
        return d.coeffs[m], m

    def adjugate(self) -> "LaurentMatrix":
        n = self.rows
        if n == 1:
            return LaurentMatrix(self.field, [[LaurentPoly.one(self.field)]])
        cof = []
        for i in range(n):
            row = []
            for j in range(n):
                minor = LaurentMatrix(
                    self.field,
                    [
                        [self.entries[ii][jj] for jj in range(n) if jj != j]
                        for ii in range(n) if ii != i
                    ],
                )
                d = minor.det()
                row.append(d if (i + j) % 2 == 0 else -d)
            cof.append(row)
        return LaurentMatrix(self.field, cof).transpose()

    def inverse(self) -> "LaurentMatrix":
        """Exact inverse; requires det = c x^m (a unit of the Laurent ring)."""
        c, m = self.det_unit()
        cinv = self.field.inv(c)
        return self.adjugate().map_entries(lambda e: e.shift(-m).scale(cinv))

    def max_exp(self) -> int | None:
        tops = [e.degree() for row in self.entries for e in row if not e.is_zero()]
        return max(tops) if tops else None

    def min_exp(self) -> int | None:
        bots = [e.valuation() for row in self.entries for e in row if not e.is_zero()]
        return min(bots) if bots else None

    def is_polynomial(self) -> bool:
        return all(e.is_polynomial() for row in self.entries for e in row)

    def __eq__(self, other):
        return (
            isinstance(other, LaurentMatrix)
            and self.field == other.field
            and self.entries == other.entries
        )

    def __repr__(self):
        body = "; ".join(
            ", ".join(repr(e) for e in row) for row in self.entries
        )
        return f"[{body}]"


def laurent_matrix_inverse(T: LaurentMatrix) -> LaurentMatrix:
    """Module-level alias; raises NotATransitionMatrix for non-unit determinant."""
    return T.inverse()
