"""Exact arithmetic in biquadratic towers Q(sqrt(d1), sqrt(d2)) and 2x2 matrices over them.

An element is stored as four rationals (x0, x1, x2, x3) standing for

    x0 + x1*sqrt(d1) + x2*sqrt(d2) + x3*sqrt(d1)*sqrt(d2)

with d1 >= 1 and d2 < 0 square-free.  The last basis element equals s*sqrt(d3)
where d1*d2 = s**2 * d3 and d3 is square-free.  Branches are fixed once and for
all: sqrt(d1) > 0 and Im sqrt(d2) > 0, hence Im(sqrt(d1)*sqrt(d2)) > 0 too.

When d1 == 1 the tower collapses to Q(sqrt(d2)); the sqrt(d1) and product
coordinates are then folded into the first and third slots so that equality
stays structural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Tuple, Union

Scalar = Union[int, Fraction]


class FieldMismatchError(ValueError):
    """Operands belong to different towers."""


class NotACuspError(ValueError):
    """A value expected in Q(sqrt(-D)) lies outside it."""


def squarefree_decomposition(n: int) -> Tuple[int, int]:
    """Return ``(core, s)`` with ``n == s*s*core`` and ``core`` square-free.

    The sign of ``n`` is carried by ``core``.

    >>> squarefree_decomposition(-12)
    (-3, 2)
    """
    if n == 0:
        raise ValueError("zero has no square-free part")
    sign = -1 if n < 0 else 1
    n = abs(n)
    core, s, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            core *= p
        p += 1
    return sign * core * n, s


def is_squarefree(n: int) -> bool:
    return n != 0 and squarefree_decomposition(n)[1] == 1


@lru_cache(maxsize=None)
def _tower_constants(d1: int, d2: int) -> Tuple[int, int]:
    if d1 < 1 or not is_squarefree(d1):
        raise FieldMismatchError(f"d1 must be a positive square-free integer, got {d1}")
    if d2 >= 0 or not is_squarefree(d2):
        raise FieldMismatchError(f"d2 must be a negative square-free integer, got {d2}")
    g = math.gcd(d1, -d2)
    return d1 * d2 // (g * g), g


def _as_fraction(v: Scalar) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"expected int or Fraction, got {type(v).__name__}")


@dataclass(frozen=True, eq=False)
class BiquadraticNumber:
    d1: int
    d2: int
    coeffs: Tuple[Fraction, Fraction, Fraction, Fraction]

    def __post_init__(self):
        _tower_constants(self.d1, self.d2)
        if len(self.coeffs) != 4:
            raise ValueError("a biquadratic number needs exactly four coefficients")
        x0, x1, x2, x3 = (_as_fraction(v) for v in self.coeffs)
        if self.d1 == 1:
            x0, x1, x2, x3 = x0 + x1, Fraction(0), x2 + x3, Fraction(0)
        object.__setattr__(self, "coeffs", (x0, x1, x2, x3))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if isinstance(other, BiquadraticNumber):
            return (self.d1, self.d2, self.coeffs) == (other.d1, other.d2, other.coeffs)
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.d1, self.d2, self.coeffs))

    @property
    def d3(self) -> int:
        return _tower_constants(self.d1, self.d2)[0]

    @property
    def s(self) -> int:
        return _tower_constants(self.d1, self.d2)[1]

    @property
    def tower(self) -> "Tower":
        return Tower(self.d1, self.d2)

    def _lift(self, other) -> "BiquadraticNumber":
        if isinstance(other, BiquadraticNumber):
            if (other.d1, other.d2) != (self.d1, self.d2):
                raise FieldMismatchError(
                    f"tower ({self.d1}, {self.d2}) vs ({other.d1}, {other.d2})"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return BiquadraticNumber(self.d1, self.d2, (other, 0, 0, 0))
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return BiquadraticNumber(
            self.d1, self.d2, tuple(x + y for x, y in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __neg__(self):
        return BiquadraticNumber(self.d1, self.d2, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        d1, d2 = self.d1, self.d2
        x0, x1, x2, x3 = self.coeffs
        y0, y1, y2, y3 = other.coeffs
        return BiquadraticNumber(
            d1,
            d2,
            (
                x0 * y0 + d1 * x1 * y1 + d2 * x2 * y2 + d1 * d2 * x3 * y3,
                x0 * y1 + x1 * y0 + d2 * (x2 * y3 + x3 * y2),
                x0 * y2 + x2 * y0 + d1 * (x1 * y3 + x3 * y1),
                x0 * y3 + x3 * y0 + x1 * y2 + x2 * y1,
            ),
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.tower.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def galois(self, flip1: bool, flip2: bool) -> "BiquadraticNumber":
        """Apply the automorphism sqrt(d1) -> +-sqrt(d1), sqrt(d2) -> +-sqrt(d2)."""
        x0, x1, x2, x3 = self.coeffs
        if flip1:
            x1, x3 = -x1, -x3
        if flip2:
            x2, x3 = -x2, -x3
        return BiquadraticNumber(self.d1, self.d2, (x0, x1, x2, x3))

    def conj(self) -> "BiquadraticNumber":
        # sqrt(d1) is real, sqrt(d2) and the product are purely imaginary
        return self.galois(False, True)

    def inverse(self) -> "BiquadraticNumber":
        if not self:
            raise ZeroDivisionError("inverse of zero in a biquadratic tower")
        partial = self.galois(True, False)
        z = self * partial  # fixed by the first automorphism, so in Q(sqrt(d2))
        zbar = z.galois(False, True)
        norm = (z * zbar).coeffs[0]
        return (partial * zbar) * (1 / norm)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def embed(self) -> Tuple[float, float]:
        x0, x1, x2, x3 = self.coeffs
        re = float(x0) + float(x1) * math.sqrt(self.d1)
        im = float(x2) * math.sqrt(-self.d2) + float(x3) * math.sqrt(-self.d1 * self.d2)
        return re, im

    def __complex__(self) -> complex:
        return complex(*self.embed())

    def to_quadratic(self, D: int):
        """Coordinates ``(u, w)`` with ``self == u + w*sqrt(-D)``, or None if outside Q(sqrt(-D))."""
        root = self.tower.sqrt(-D)
        slot = next(i for i in (1, 2, 3) if root.coeffs[i])
        x = self.coeffs
        if any(x[i] for i in (1, 2, 3) if i != slot):
            return None
        return x[0], x[slot] / root.coeffs[slot]

    def __str__(self) -> str:
        names = ("", f"sqrt({self.d1})", f"sqrt({self.d2})", f"sqrt({self.d1})*sqrt({self.d2})")
        terms = []
        for coef, name in zip(self.coeffs, names):
            if not coef:
                continue
            if not name:
                terms.append(str(coef))
            elif coef == 1:
                terms.append(name)
            elif coef == -1:
                terms.append("-" + name)
            else:
                terms.append(f"{coef}*{name}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


@dataclass(frozen=True)
class Tower:
    """Convenience factory for elements of one fixed tower."""

    d1: int
    d2: int

    def __post_init__(self):
        _tower_constants(self.d1, self.d2)

    def scalar(self, q: Scalar) -> BiquadraticNumber:
        return BiquadraticNumber(self.d1, self.d2, (q, 0, 0, 0))

    @property
    def zero(self) -> BiquadraticNumber:
        return self.scalar(0)

    @property
    def one(self) -> BiquadraticNumber:
        return self.scalar(1)

    def sqrt(self, n: Scalar) -> BiquadraticNumber:
        """Principal square root of a rational ``n`` (positive, or Im > 0), if it lies in the tower."""
        n = _as_fraction(n)
        if n == 0:
            return self.zero
        # sqrt(p/q) = sqrt(p*q)/q
        core, k = squarefree_decomposition(n.numerator * n.denominator)
        k = Fraction(k, n.denominator)
        d3, s = _tower_constants(self.d1, self.d2)
        if core == 1:
            return self.scalar(k)
        if core == self.d2:
            return BiquadraticNumber(self.d1, self.d2, (0, 0, k, 0))
        if core == self.d1:
            return BiquadraticNumber(self.d1, self.d2, (0, k, 0, 0))
        if core == d3:
            return BiquadraticNumber(self.d1, self.d2, (0, 0, 0, k / s))
        raise NotACuspError(f"sqrt({n}) is not in Q(sqrt({self.d1}), sqrt({self.d2}))")

    def quadratic(self, u: Scalar, w: Scalar, D: int) -> BiquadraticNumber:
        """The element ``u + w*sqrt(-D)``."""
        return self.scalar(u) + self.sqrt(-D) * _as_fraction(w)


@dataclass(frozen=True)
class Matrix2:
    a: BiquadraticNumber
    b: BiquadraticNumber
    c: BiquadraticNumber
    d: BiquadraticNumber

    def __post_init__(self):
        towers = {(x.d1, x.d2) for x in self.entries}
        if len(towers) != 1:
            raise FieldMismatchError(f"matrix entries from several towers: {sorted(towers)}")

    @classmethod
    def of(cls, tower: Tower, a, b, c, d) -> "Matrix2":
        lift = lambda x: x if isinstance(x, BiquadraticNumber) else tower.scalar(x)
        return cls(lift(a), lift(b), lift(c), lift(d))

    @classmethod
    def identity(cls, tower: Tower) -> "Matrix2":
        return cls.of(tower, 1, 0, 0, 1)

    @property
    def entries(self) -> Tuple[BiquadraticNumber, ...]:
        return (self.a, self.b, self.c, self.d)

    @property
    def tower(self) -> Tower:
        return self.a.tower

    def __matmul__(self, other: "Matrix2") -> "Matrix2":
        return Matrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "Matrix2":
        return Matrix2(-self.a, -self.b, -self.c, -self.d)

    def det(self) -> BiquadraticNumber:
        return self.a * self.d - self.b * self.c

    def trace(self) -> BiquadraticNumber:
        return self.a + self.d

    def conj(self) -> "Matrix2":
        return Matrix2(self.a.conj(), self.b.conj(), self.c.conj(), self.d.conj())

    def inverse(self) -> "Matrix2":
        inv = self.det().inverse()
        return Matrix2(self.d * inv, -self.b * inv, -self.c * inv, self.a * inv)

    def is_scalar(self, value: Scalar) -> bool:
        return self == Matrix2.of(self.tower, value, 0, 0, value)


def bq_add(x: BiquadraticNumber, y: BiquadraticNumber) -> BiquadraticNumber:
    return x + y


def bq_mul(x: BiquadraticNumber, y: BiquadraticNumber) -> BiquadraticNumber:
    return x * y


def bq_inv(x: BiquadraticNumber) -> BiquadraticNumber:
    return x.inverse()


def bq_complex_conj(x: BiquadraticNumber) -> BiquadraticNumber:
    return x.conj()


def bq_embed(x: BiquadraticNumber) -> Tuple[float, float]:
    return x.embed()


def mat_mul(m: Matrix2, n: Matrix2) -> Matrix2:
    return m @ n


def mat_det(m: Matrix2) -> BiquadraticNumber:
    return m.det()


def mat_conj(m: Matrix2) -> Matrix2:
    return m.conj()
