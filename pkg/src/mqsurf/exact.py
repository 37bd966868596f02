"""Exact arithmetic over Q, Q(zeta_3) and prime fields, plus fraction-free
linear algebra.

Rationals are :class:`fractions.Fraction`.  Elements of Q(zeta_3) are stored
on the basis ``{1, zeta}`` with ``zeta**2 = -1 - zeta``, so equality is a
structural comparison.  Prime field elements carry their modulus.

Every routine here is generic over the three coefficient rings: anything
supporting ``+ - * /`` and comparison with ``0`` can be fed to
:func:`matrix_rank` and friends.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import lcm
from numbers import Rational
from typing import Iterable, Sequence

__all__ = [
    "CycNum",
    "ZETA",
    "Fp",
    "ExactMatrix",
    "InvalidPrimeError",
    "BadRootError",
    "DenominatorDivisibleError",
    "DimensionMismatchError",
    "is_prime",
    "smallest_cube_root_of_unity",
    "cyc_mul",
    "cyc_inv",
    "reduce_mod_p",
    "matrix_rank",
    "kernel_dim",
    "determinant",
    "subspace_intersection_dim",
]


class InvalidPrimeError(ValueError):
    pass


class BadRootError(ValueError):
    pass


class DenominatorDivisibleError(ZeroDivisionError):
    pass


class DimensionMismatchError(ValueError):
    pass


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def smallest_cube_root_of_unity(p: int) -> int:
    """Smallest ``z`` in F_p with ``z**3 == 1`` and ``z != 1``."""
    if not is_prime(p) or p % 3 != 1:
        raise InvalidPrimeError(f"p={p} is not a prime congruent to 1 mod 3")
    for z in range(2, p):
        if pow(z, 3, p) == 1:
            return z
    raise AssertionError("unreachable for p = 1 mod 3")


# ---------------------------------------------------------------------------
# Q(zeta_3)
# ---------------------------------------------------------------------------


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


class CycNum:
    """The element ``a + b*zeta`` of Q(zeta_3)."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", _as_fraction(a))
        object.__setattr__(self, "b", _as_fraction(b))

    def __setattr__(self, name, value):
        raise AttributeError("CycNum is immutable")

    @classmethod
    def coerce(cls, x) -> "CycNum":
        if isinstance(x, CycNum):
            return x
        return cls(_as_fraction(x), 0)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        try:
            o = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return CycNum(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return CycNum(-self.a, -self.b)

    def __sub__(self, other):
        try:
            o = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return CycNum(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        try:
            o = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        try:
            o = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        # (a + b z)(c + d z) = ac + (ad + bc) z + bd z^2,  z^2 = -1 - z
        a, b, c, d = self.a, self.b, o.a, o.b
        bd = b * d
        return CycNum(a * c - bd, a * d + b * c - bd)

    __rmul__ = __mul__

    def conjugate(self) -> "CycNum":
        # zeta -> zeta^2 = -1 - zeta
        return CycNum(self.a - self.b, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def inverse(self) -> "CycNum":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(zeta_3)")
        c = self.conjugate()
        return CycNum(c.a / n, c.b / n)

    def __truediv__(self, other):
        try:
            o = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        try:
            o = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = CycNum(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparison -------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, CycNum):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Rational)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        return f"CycNum({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*z"
        return f"({self.a} + {self.b}*z)"


ZETA = CycNum(0, 1)


def cyc_mul(x: CycNum, y: CycNum) -> CycNum:
    return CycNum.coerce(x) * CycNum.coerce(y)


def cyc_inv(x: CycNum) -> CycNum:
    return CycNum.coerce(x).inverse()


# ---------------------------------------------------------------------------
# F_p
# ---------------------------------------------------------------------------


class Fp:
    """Element of the prime field F_p."""

    __slots__ = ("value", "p")

    def __init__(self, value, p: int):
        if not is_prime(p):
            raise InvalidPrimeError(f"{p} is not prime")
        if isinstance(value, Fp):
            if value.p != p:
                raise ValueError("mixing different prime fields")
            v = value.value
        elif isinstance(value, int):
            v = value % p
        else:
            q = _as_fraction(value)
            if q.denominator % p == 0:
                raise DenominatorDivisibleError(f"denominator of {q} vanishes mod {p}")
            v = q.numerator * pow(q.denominator, -1, p) % p
        object.__setattr__(self, "value", v)
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("Fp is immutable")

    def _other(self, other) -> int | None:
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError("mixing different prime fields")
            return other.value
        if isinstance(other, (int, Rational)):
            return Fp(other, self.p).value
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Fp(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Fp(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Fp(o - self.value, self.p)

    def __neg__(self):
        return Fp(-self.value, self.p)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Fp(self.value * o, self.p)

    __rmul__ = __mul__

    def inverse(self) -> "Fp":
        if self.value == 0:
            raise ZeroDivisionError(f"inverse of zero in F_{self.p}")
        return Fp(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * Fp(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Fp(o, self.p) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return Fp(pow(self.value, n, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Fp({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


def reduce_mod_p(x, p: int, zeta_image) -> Fp:
    """Image of ``x`` under the homomorphism Z[zeta]_(p) -> F_p, zeta -> zeta_image."""
    if not is_prime(p) or p % 3 != 1:
        raise InvalidPrimeError(f"p={p} must be a prime congruent to 1 mod 3")
    z = int(zeta_image) % p
    if z == 1 or pow(z, 3, p) != 1:
        raise BadRootError(f"{zeta_image} is not a primitive cube root of unity mod {p}")
    x = CycNum.coerce(x)
    for q in (x.a, x.b):
        if q.denominator % p == 0:
            raise DenominatorDivisibleError(f"denominator of {q} vanishes mod {p}")
    return Fp(x.a, p) + Fp(x.b, p) * z


# ---------------------------------------------------------------------------
# Linear algebra
# ---------------------------------------------------------------------------


class ExactMatrix:
    """Dense matrix over one of the exact coefficient rings."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Sequence], cols: int | None = None):
        ent = tuple(tuple(r) for r in entries)
        if cols is None:
            if not ent:
                raise ValueError("cols must be given for a matrix with no rows")
            cols = len(ent[0])
        for r in ent:
            if len(r) != cols:
                raise ValueError("ragged matrix rows")
        object.__setattr__(self, "entries", ent)
        object.__setattr__(self, "rows", len(ent))
        object.__setattr__(self, "cols", cols)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls([[0] * cols for _ in range(rows)], cols)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.rows,
        )

    def stack(self, other: "ExactMatrix") -> "ExactMatrix":
        if other.cols != self.cols:
            raise DimensionMismatchError(f"ambient dims differ: {self.cols} vs {other.cols}")
        return ExactMatrix(self.entries + other.entries, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.cols == other.cols and self.entries == other.entries

    def __hash__(self):
        return hash((self.cols, self.entries))

    def __repr__(self):
        return f"ExactMatrix({[list(r) for r in self.entries]!r})"

    def rank(self) -> int:
        return matrix_rank(self)


def _clear_denominators(row: list) -> list:
    """Scale a row of rationals / Q(zeta) elements to integral entries."""
    if all(isinstance(x, int) for x in row):
        return row
    if all(isinstance(x, (int, Fraction)) for x in row):
        m = lcm(*(Fraction(x).denominator for x in row))
        return [int(Fraction(x) * m) for x in row]
    if all(isinstance(x, (int, Fraction, CycNum)) for x in row):
        cs = [CycNum.coerce(x) for x in row]
        m = lcm(*(q.denominator for c in cs for q in (c.a, c.b)))
        return [c * m for c in cs]
    return row


def _bareiss(rows: list[list]) -> tuple[int, int]:
    """In-place fraction-free elimination.  Returns ``(rank, swap_sign)``.

    For integer input every division is exact (each entry stays a minor of
    the original matrix), so floor division is used; other rings divide in
    their field.
    """
    m = len(rows)
    if m == 0:
        return 0, 1
    n = len(rows[0])
    integral = all(isinstance(x, int) for r in rows for x in r)
    prev = 1
    r = 0
    sign = 1
    for c in range(n):
        if r == m:
            break
        piv_row = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv_row is None:
            continue
        if piv_row != r:
            rows[r], rows[piv_row] = rows[piv_row], rows[r]
            sign = -sign
        piv = rows[r][c]
        top = rows[r]
        for i in range(r + 1, m):
            row = rows[i]
            lead = row[c]
            for j in range(c + 1, n):
                num = piv * row[j] - lead * top[j]
                if integral:
                    row[j] = num // prev
                elif isinstance(num, int) and isinstance(prev, int):
                    row[j] = Fraction(num, prev)
                else:
                    row[j] = num / prev
            row[c] = 0
        prev = piv
        r += 1
    return r, sign


def matrix_rank(M: ExactMatrix) -> int:
    rows = [_clear_denominators(list(r)) for r in M.entries]
    rank, _ = _bareiss(rows)
    return rank


def kernel_dim(M: ExactMatrix) -> int:
    """Dimension of the right kernel ``{v : M v = 0}``."""
    return M.cols - matrix_rank(M)


def determinant(M: ExactMatrix):
    if M.rows != M.cols:
        raise DimensionMismatchError("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        return 1
    rows = [list(r) for r in M.entries]
    rank, sign = _bareiss(rows)
    if rank < n:
        return 0
    d = rows[n - 1][n - 1]
    return d if sign > 0 else -d


def subspace_intersection_dim(U: ExactMatrix, W: ExactMatrix) -> int:
    """``dim(rowspan U  &  rowspan W)`` via the rank identity."""
    if U.cols != W.cols:
        raise DimensionMismatchError(f"ambient dims differ: {U.cols} vs {W.cols}")
    return matrix_rank(U) + matrix_rank(W) - matrix_rank(U.stack(W))
