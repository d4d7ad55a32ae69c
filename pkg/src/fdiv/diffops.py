"""Divided-power differential operators on the affine line.

An operator is a finite sum  sum_k f_k(x) D_k  with polynomial coefficients,
where D_k acts on monomials by D_k(x^l) = C(l, k) x^(l-k).  In characteristic
p the D_k for k >= 2 are not iterates of D_1; the indices D_(p^m) generate,
and composition follows D_k D_l = C(k+l, k) D_(k+l) together with the
Leibniz rule D_k (f .) = sum_{i+j=k} (D_i f) D_j.
"""

from __future__ import annotations

from .errors import InvalidInput
from .fields import FieldSpec, binom_mod_p, multinomial_unit
from .laurent import LaurentPoly

# Composition re-checks itself against application on monomials by default
# (disable for bulk inner loops that are verified externally).
COMPOSE_SELF_CHECK = True


class DividedOperator:
    """Normal form sum_k f_k(x) D_k; no zero coefficients are stored."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FieldSpec, terms: dict[int, LaurentPoly] | None = None):
        self.field = field
        clean: dict[int, LaurentPoly] = {}
        if terms:
            for k, f in terms.items():
                if f.is_zero():
                    continue
                if not f.is_polynomial():
                    raise InvalidInput("operator coefficients must be polynomials")
                if k < 0:
                    raise InvalidInput("operator indices are nonnegative")
                clean[int(k)] = f
        self.terms = clean

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, field: FieldSpec) -> "DividedOperator":
        return cls(field)

    @classmethod
    def basis(cls, field: FieldSpec, k: int, coeff=None) -> "DividedOperator":
        f = LaurentPoly.one(field) if coeff is None else coeff
        return cls(field, {k: f})

    @classmethod
    def mult_by(cls, field: FieldSpec, f: LaurentPoly) -> "DividedOperator":
        return cls(field, {0: f})

    @classmethod
    def identity(cls, field: FieldSpec) -> "DividedOperator":
        return cls.basis(field, 0)

    # -- structure -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def order(self) -> int | None:
        """Largest supported index; None for the zero operator."""
        return max(self.terms) if self.terms else None

    def coefficient(self, k: int) -> LaurentPoly:
        return self.terms.get(k, LaurentPoly.zero(self.field))

    def __add__(self, other: "DividedOperator") -> "DividedOperator":
        out = dict(self.terms)
        for k, f in other.terms.items():
            s = out.get(k)
            out[k] = f if s is None else s + f
        return DividedOperator(self.field, out)

    def __neg__(self) -> "DividedOperator":
        return DividedOperator(self.field, {k: -f for k, f in self.terms.items()})

    def __sub__(self, other: "DividedOperator") -> "DividedOperator":
        return self + (-other)

    def scale(self, c) -> "DividedOperator":
        return DividedOperator(self.field, {k: f.scale(c) for k, f in self.terms.items()})

    def __eq__(self, other):
        return (
            isinstance(other, DividedOperator)
            and self.field == other.field
            and self.terms == other.terms
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({self.terms[k]!r})*D{k}" for k in sorted(self.terms))


def apply(op: DividedOperator, f: LaurentPoly) -> LaurentPoly:
    """Apply the operator to an ordinary polynomial (exact)."""
    if not f.is_polynomial():
        raise InvalidInput("operators act on polynomials (no negative exponents)")
    fs = op.field
    p = fs.p
    out = LaurentPoly.zero(fs)
    for k, g in op.terms.items():
        dk_f: dict[int, int] = {}
        for l, c in f.coeffs.items():
            b = binom_mod_p(l, k, p)
            if b:
                m = l - k
                s = fs.add(dk_f.get(m, 0), fs.mul(c, b))
                if s:
                    dk_f[m] = s
                else:
                    dk_f.pop(m, None)
        out = out + g * LaurentPoly(fs, dk_f)
    return out


def compose(a: DividedOperator, b: DividedOperator, check: bool | None = None) -> DividedOperator:
    """Normal form of a after b, i.e. (a o b)(f) = a(b(f)).

    Coefficients of b are commuted to the left through each D_k of a via the
    Leibniz rule, after which indices combine by D_j D_l = C(j+l, j) D_{j+l}.
    The result is re-verified against application on monomials up to degree
    2*(order(a)+order(b)) unless ``check`` disables it.
    """
    fs = a.field
    p = fs.p
    out: dict[int, LaurentPoly] = {}
    for k, f in a.terms.items():
        for l, g in b.terms.items():
            # D_k (g .) = sum_{i+j=k} (D_i g) D_j, then D_j D_l = C(j+l,j) D_{j+l}
            for i in range(k + 1):
                j = k - i
                di_g = apply(DividedOperator.basis(fs, i), g)
                if di_g.is_zero():
                    continue
                c = binom_mod_p(j + l, j, p)
                if not c:
                    continue
                idx = j + l
                term = (f * di_g).scale(c)
                s = out.get(idx)
                out[idx] = term if s is None else s + term
    result = DividedOperator(fs, out)
    do_check = COMPOSE_SELF_CHECK if check is None else check
    if do_check:
        oa, ob = a.order(), b.order()
        top = 2 * ((oa or 0) + (ob or 0))
        for m in range(top + 1):
            xm = LaurentPoly.x_power(fs, m)
            if apply(result, xm) != apply(a, apply(b, xm)):
                raise AssertionError(
                    f"composition self-check failed on x^{m}"
                )
    return result


def decompose_generator_product(j: int, p: int) -> tuple[list[tuple[int, int]], int]:
    """Base-p factorisation of D_j through the generators D_(p^m).

    Returns (digits, unit) with digits = [(m, c_m)] for the nonzero base-p
    digits of j, and unit = j! / prod (p^m!)^(c_m) mod p, so that
    prod_m D_(p^m)^(c_m) = unit * D_j exactly.
    """
    if j < 0:
        raise InvalidInput("index must be nonnegative")
    digits = []
    m, rest = 0, j
    while rest:
        c = rest % p
        if c:
            digits.append((m, c))
        rest //= p
        m += 1
    return digits, multinomial_unit(j, p)


def order(op: DividedOperator) -> int | None:
    return op.order()
