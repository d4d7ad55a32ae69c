"""Exact arithmetic in finite fields F_{p^e} with an explicit Frobenius map.

Elements are encoded as integers in ``range(p**e)``: the base-p digits of the
code are the coordinates in the power basis 1, u, ..., u^(e-1) of
F_p[u]/(modulus).  All arithmetic goes through :class:`FieldSpec` methods so
that vectorised helpers (used by the linear algebra layer) and the scalar
wrapper :class:`FieldElement` share one implementation.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import InvalidInput

# Full q x q addition/subtraction tables are only built for small fields.
_TABLE_MAX_Q = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def binom_mod_p(l: int, k: int, p: int) -> int:
    """Binomial coefficient C(l, k) mod p by digit-wise Lucas decomposition."""
    if k < 0 or l < 0:
        return 0
    if k > l:
        return 0
    out = 1
    while k > 0 or l > 0:
        ld, l = l % p, l // p
        kd, k = k % p, k // p
        if kd > ld:
            return 0
        out = (out * math.comb(ld, kd)) % p
    return out


def multinomial_unit(j: int, p: int) -> int:
    """j! / prod_m (p^m!)^{c_m} mod p, where j = sum c_m p^m in base p.

    This is the scalar relating the composite of divided-power generators to
    the single operator of index j; it is a unit because the base-p
    decomposition of j involves no carries.
    """
    if j == 0:
        return 1
    num = math.factorial(j)
    m = 0
    rest = j
    while rest > 0:
        c = rest % p
        if c:
            num //= math.factorial(p**m) ** c
        rest //= p
        m += 1
    return num % p


# ---------------------------------------------------------------------------
# prime-field polynomial helpers (little-endian int lists), used for moduli


def _ptrim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmulmod(f, g, mod, p):
    out = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _pdivmod(out, mod, p)[1]


def _pdivmod(f, g, p):
    f = list(f)
    _ptrim(f)
    dg = len(g) - 1
    inv_lead = pow(g[-1], p - 2, p)
    q = [0] * max(0, len(f) - dg)
    while len(f) - 1 >= dg and f:
        shift = len(f) - 1 - dg
        c = (f[-1] * inv_lead) % p
        q[shift] = c
        for i, b in enumerate(g):
            f[shift + i] = (f[shift + i] - c * b) % p
        _ptrim(f)
    return q, f


def _irreducible(modulus: list[int], p: int) -> bool:
    """Brute-force factor search: no monic divisor of degree 1..e//2."""
    e = len(modulus) - 1
    for d in range(1, e // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]
            if not _pdivmod(modulus, g, p)[1]:
                return False
    return True


class FieldSpec:
    """A finite field F_{p^e}, the base field for every structure here.

    For e > 1 a monic irreducible modulus (little-endian coefficient list of
    length e+1) must be supplied; irreducibility is verified at construction.
    """

    def __init__(self, p: int, e: int = 1, modulus: list[int] | None = None):
        if not is_prime(p):
            raise InvalidInput(f"characteristic {p} is not prime")
        if e < 1:
            raise InvalidInput("extension degree must be >= 1")
        if e == 1:
            if modulus is not None:
                raise InvalidInput("modulus only applies to extensions (e > 1)")
        else:
            if modulus is None:
                raise InvalidInput("an extension field needs a modulus")
            modulus = [c % p for c in modulus]
            if len(modulus) != e + 1 or modulus[-1] == 0:
                raise InvalidInput("modulus must have degree exactly e")
            if modulus[-1] != 1:
                inv = pow(modulus[-1], p - 2, p)
                modulus = [(c * inv) % p for c in modulus]
            if not _irreducible(modulus, p):
                raise InvalidInput("modulus is reducible")
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = tuple(modulus) if modulus else None
        self._tables = None
        self._frob_tables: dict[int, np.ndarray] = {}

    # -- construction / conversion ---------------------------------------

    def element(self, coords) -> "FieldElement":
        if isinstance(coords, FieldElement):
            if coords.field is not self and coords.field != self:
                raise InvalidInput("element from a different field")
            return FieldElement(self, coords.code)
        if isinstance(coords, int):
            return FieldElement(self, coords % self.p if self.e == 1 else self.encode([coords]))
        return FieldElement(self, self.encode(list(coords)))

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def encode(self, coords: list[int]) -> int:
        if len(coords) > self.e:
            raise InvalidInput("too many coordinates")
        code = 0
        for c in reversed(coords):
            code = code * self.p + (c % self.p)
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.e):
            out.append(code % self.p)
            code //= self.p
        return tuple(out)

    def elements(self):
        for code in range(self.q):
            yield FieldElement(self, code)

    def random(self, rng) -> int:
        return rng.randrange(self.q)

    # -- scalar arithmetic on int codes ----------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        ca, cb = self.decode(a), self.decode(b)
        return self.encode([(x + y) % self.p for x, y in zip(ca, cb)])

    def sub(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a - b) % self.p
        ca, cb = self.decode(a), self.decode(b)
        return self.encode([(x - y) % self.p for x, y in zip(ca, cb)])

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        return self.encode([(-x) % self.p for x in self.decode(a)])

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        prod = _pmulmod(list(self.decode(a)), list(self.decode(b)), list(self.modulus), self.p)
        return self.encode(prod + [0] * (self.e - len(prod)))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverting zero field element")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow_(a, self.q - 2)

    def pow_(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow_(self.inv(a), -n)
        out, base = 1, a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def frob(self, a: int, n: int = 1) -> int:
        """x -> x^(p^n); negative n gives the inverse automorphism."""
        n %= self.e
        out = a
        for _ in range(n):
            out = self.pow_(out, self.p)
        return out

    # -- vectorised arithmetic on numpy int arrays ------------------------

    def _ensure_tables(self):
        if self._tables is not None:
            return self._tables
        if self.q > _TABLE_MAX_Q:
            raise InvalidInput(
                f"vectorised arithmetic tables limited to q <= {_TABLE_MAX_Q}"
            )
        q = self.q
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                add[a, b] = self.add(a, b)
                mul[a, b] = self.mul(a, b)
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = self.inv(a)
        neg = np.array([self.neg(a) for a in range(q)], dtype=np.int64)
        self._tables = (add, mul, inv, neg)
        return self._tables

    def arr_add(self, A, B):
        if self.e == 1:
            return (A + B) % self.p
        add = self._ensure_tables()[0]
        return add[A, B]

    def arr_sub(self, A, B):
        if self.e == 1:
            return (A - B) % self.p
        add, _, _, neg = self._ensure_tables()
        return add[A, neg[B]]

    def arr_mul(self, A, B):
        if self.e == 1:
            return (A * B) % self.p
        mul = self._ensure_tables()[1]
        return mul[A, B]

    def arr_neg(self, A):
        if self.e == 1:
            return (-A) % self.p
        return self._ensure_tables()[3][A]

    def arr_inv(self, A):
        if self.e == 1:
            return np.array([pow(int(a), self.p - 2, self.p) for a in np.atleast_1d(A)],
                            dtype=np.int64).reshape(np.shape(A))
        return self._ensure_tables()[2][A]

    def arr_frob(self, A, n: int = 1):
        n %= self.e
        if n == 0:
            return np.array(A, dtype=np.int64, copy=True)
        if n not in self._frob_tables:
            self._frob_tables[n] = np.array(
                [self.frob(a, n) for a in range(self.q)], dtype=np.int64
            )
        return self._frob_tables[n][A]

    # -- misc --------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.e == other.e
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        if self.e == 1:
            return f"FieldSpec(p={self.p})"
        return f"FieldSpec(p={self.p}, e={self.e}, modulus={list(self.modulus)})"


class FieldElement:
    """An element of F_{p^e}; immutable, arithmetic via operator overloading."""

    __slots__ = ("field", "code")

    def __init__(self, field: FieldSpec, code: int):
        self.field = field
        self.code = code % field.q

    @property
    def coordinates(self) -> tuple[int, ...]:
        return self.field.decode(self.code)

    def is_zero(self) -> bool:
        return self.code == 0

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise InvalidInput("mixing elements of different fields")
            return other.code
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.code, c))

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.code, c))

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(c, self.code))

    def __mul__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.code, c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.code, self.field.inv(c)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow_(self.code, n))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.code))

    def frobenius(self, n: int = 1) -> "FieldElement":
        return FieldElement(self.field, self.field.frob(self.code, n))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == other % self.field.p and self.code < self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.code))

    def __repr__(self):
        if self.field.e == 1:
            return f"{self.code}"
        return f"F{self.field.q}{self.coordinates}"


def frobenius(x: FieldElement, n: int = 1) -> FieldElement:
    """n-fold Frobenius x -> x^(p^n); n < 0 applies the inverse."""
    return x.frobenius(n)
