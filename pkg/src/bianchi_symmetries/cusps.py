"""Cusps of the Bianchi orbifold as points of P^1(Q(sqrt(-D))) over the maximal order."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional, Tuple

from .classgroup import (
    ClassGroupStructure,
    FieldDiscriminant,
    IdealHNF,
    ideal_to_form,
    is_principal,
    principal_form,
)
from .exact import BiquadraticNumber, Matrix2, NotACuspError, Tower


@dataclass(frozen=True)
class OElement:
    """x + y*omega in the integral basis of the maximal order."""

    x: int
    y: int

    def __bool__(self) -> bool:
        return bool(self.x or self.y)

    def times_omega(self, disc: FieldDiscriminant) -> "OElement":
        # omega**2 = t*omega - n
        t, n = disc.omega_trace, disc.omega_norm
        return OElement(-n * self.y, self.x + t * self.y)

    def mul(self, other: "OElement", disc: FieldDiscriminant) -> "OElement":
        w = other.times_omega(disc)
        return OElement(self.x * other.x + self.y * w.x, self.x * other.y + self.y * w.y)

    def to_quadratic(self, disc: FieldDiscriminant) -> Tuple[Fraction, Fraction]:
        """Coordinates (u, w) with value u + w*sqrt(-D)."""
        if disc.omega_kind == "sqrt":
            return Fraction(self.x), Fraction(self.y)
        return self.x + Fraction(self.y, 2), Fraction(self.y, 2)

    @classmethod
    def from_quadratic(cls, u: Fraction, w: Fraction, disc: FieldDiscriminant) -> Optional["OElement"]:
        if disc.omega_kind == "sqrt":
            y, x = w, u
        else:
            y = 2 * w
            x = u - w
        if Fraction(x).denominator != 1 or Fraction(y).denominator != 1:
            return None
        return cls(int(x), int(y))

    def to_tower(self, tower: Tower, disc: FieldDiscriminant) -> BiquadraticNumber:
        u, w = self.to_quadratic(disc)
        return tower.quadratic(u, w, disc.D)

    def format(self, disc: FieldDiscriminant) -> str:
        return format_quadratic(*self.to_quadratic(disc), disc.D)


def format_quadratic(u: Fraction, w: Fraction, D: int) -> str:
    """Exact text for u + w*sqrt(-D), e.g. ``1+sqrt(-5)`` or ``-1/2*sqrt(-6)``."""
    root = f"sqrt(-{D})"
    if not w:
        return str(u)
    if w == 1:
        imag = root
    elif w == -1:
        imag = "-" + root
    else:
        imag = f"{w}*{root}"
    if not u:
        return imag
    return f"{u}{imag}" if imag.startswith("-") else f"{u}+{imag}"


def element_of_O(x: BiquadraticNumber, disc: FieldDiscriminant) -> Optional[OElement]:
    """The tower element as an element of O, or None if it is not integral in Q(sqrt(-D))."""
    coords = x.to_quadratic(disc.D)
    if coords is None:
        return None
    return OElement.from_quadratic(*coords, disc)


@dataclass(frozen=True)
class Cusp:
    """The point p/q; q == 0 is the cusp at infinity.

    The pair is normalized by its rational integer content and by the sign
    +-1, nothing more.
    """

    p: OElement
    q: OElement

    def __post_init__(self):
        if not self.p and not self.q:
            raise ValueError("(0, 0) is not a cusp")
        if not self.q:
            object.__setattr__(self, "p", OElement(1, 0))
            return
        g = gcd(gcd(self.p.x, self.p.y), gcd(self.q.x, self.q.y))
        lead = self.q.x if self.q.x else self.q.y
        if lead < 0:
            g = -g
        object.__setattr__(self, "p", OElement(self.p.x // g, self.p.y // g))
        object.__setattr__(self, "q", OElement(self.q.x // g, self.q.y // g))

    @property
    def is_infinity(self) -> bool:
        return not self.q

    def value(self, disc: FieldDiscriminant) -> Optional[Tuple[Fraction, Fraction]]:
        """(u, w) with p/q = u + w*sqrt(-D), or None at infinity."""
        if self.is_infinity:
            return None
        pu, pw = self.p.to_quadratic(disc)
        qu, qw = self.q.to_quadratic(disc)
        # p/q = p*conj(q)/N(q)
        norm = qu * qu + disc.D * qw * qw
        return (pu * qu + disc.D * pw * qw) / norm, (pw * qu - pu * qw) / norm

    @classmethod
    def from_value(cls, u: Fraction, w: Fraction, disc: FieldDiscriminant) -> "Cusp":
        """The point u + w*sqrt(-D) as p/q with q the least positive integer making p integral."""
        u, w = Fraction(u), Fraction(w)
        q0 = u.denominator * w.denominator // gcd(u.denominator, w.denominator)
        # the admissible integer denominators form an ideal of Z containing q0;
        # its generator is q0 or q0/2
        q = q0
        if q0 % 2 == 0 and OElement.from_quadratic(u * (q0 // 2), w * (q0 // 2), disc) is not None:
            q = q0 // 2
        p = OElement.from_quadratic(u * q, w * q, disc)
        return cls(p, OElement(q, 0))

    def format(self, disc: FieldDiscriminant) -> str:
        if self.is_infinity:
            return "oo"
        return format_quadratic(*self.value(disc), disc.D)


INFINITY = Cusp(OElement(1, 0), OElement(0, 0))


def quadratic_of(x: BiquadraticNumber, disc: FieldDiscriminant) -> Tuple[Fraction, Fraction]:
    coords = x.to_quadratic(disc.D)
    if coords is None:
        raise NotACuspError(f"{x} is not in Q(sqrt(-{disc.D}))")
    return coords


def moebius_apply(m: Matrix2, z: Cusp, disc: FieldDiscriminant) -> Cusp:
    """z -> (a z + b)/(c z + d) on P^1(Q(sqrt(-D)))."""
    if not m.det():
        raise ValueError("singular matrix")
    tower = m.tower
    if z.is_infinity:
        num, den = m.a, m.c
    else:
        p, q = z.p.to_tower(tower, disc), z.q.to_tower(tower, disc)
        num, den = m.a * p + m.b * q, m.c * p + m.d * q
    if not den:
        return INFINITY
    return Cusp.from_value(*quadratic_of(num / den, disc), disc)


def cusp_ideal(c: Cusp, disc: FieldDiscriminant) -> IdealHNF:
    """The O-ideal generated by numerator and denominator."""
    vectors = []
    for g in (c.p, c.q):
        w = g.times_omega(disc)
        vectors += [(g.x, g.y), (w.x, w.y)]
    return IdealHNF.from_lattice(disc, vectors)


def is_singular(c: Cusp, disc: FieldDiscriminant) -> bool:
    return not is_principal(cusp_ideal(c, disc))


def cusp_class_index(c: Cusp, disc: FieldDiscriminant, s: ClassGroupStructure) -> int:
    return s.index_of(ideal_to_form(cusp_ideal(c, disc)))


def cusp_representatives(disc: FieldDiscriminant, s: ClassGroupStructure) -> List[Cusp]:
    """One cusp per ideal class: the point (-b + sqrt(delta))/(2a) of each reduced form, with oo first."""
    out = []
    # sqrt(delta) = 2*sqrt(-D) when delta = -4D, sqrt(-D) when delta = -D
    root = 2 if disc.delta == -4 * disc.D else 1
    for f in s.representatives:
        if f == principal_form(disc):
            out.append(INFINITY)
        else:
            out.append(Cusp.from_value(Fraction(-f.b, 2 * f.a), Fraction(root, 2 * f.a), disc))
    return out


def in_fundamental_rectangle(c: Cusp, disc: FieldDiscriminant, slack: int = 0) -> bool:
    """|Re| <= 1/2 + slack and |Im| <= Im(omega)*(1/2 + slack), boundary included."""
    if c.is_infinity:
        raise ValueError("the cusp at infinity has no position in the rectangle")
    u, w = c.value(disc)
    half = Fraction(1, 2) + slack
    im_omega_sq = Fraction(disc.D) if disc.omega_kind == "sqrt" else Fraction(disc.D, 4)
    return abs(u) <= half and w * w * disc.D <= im_omega_sq * half * half
