"""Class groups of imaginary quadratic fields through reduced binary quadratic forms.

Everything here is brute force on purpose: the discriminants of interest are
small, so the full composition table is cheap and easy to audit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Dict, Iterable, List, Sequence, Tuple

from .exact import is_squarefree


class InvalidInputError(ValueError):
    """D is not a square-free positive integer."""


class ExcludedFieldError(ValueError):
    """D = 1 (Gaussian integers) or D = 3 (Eisensteinian integers)."""


class DiscriminantMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class FieldDiscriminant:
    """The maximal order of Q(sqrt(-D)) with integral basis {1, omega}.

    ``omega_kind`` is ``"sqrt"`` for omega = sqrt(-D) (D = 1, 2 mod 4) and
    ``"half"`` for omega = (1 + sqrt(-D))/2 (D = 3 mod 4).
    """

    D: int
    delta: int
    omega_kind: str

    @property
    def omega_trace(self) -> int:
        return 0 if self.omega_kind == "sqrt" else 1

    @property
    def omega_norm(self) -> int:
        return self.D if self.omega_kind == "sqrt" else (1 + self.D) // 4


@lru_cache(maxsize=None)
def make_discriminant(D: int) -> FieldDiscriminant:
    if D == 1:
        raise ExcludedFieldError("D = 1: the Gaussian integers are excluded")
    if D == 3:
        raise ExcludedFieldError("D = 3: the Eisensteinian integers are excluded")
    if D < 1 or not is_squarefree(D):
        raise InvalidInputError(f"D must be a square-free positive integer, got {D}")
    if D % 4 == 3:
        return FieldDiscriminant(D, -D, "half")
    return FieldDiscriminant(D, -4 * D, "sqrt")


@dataclass(frozen=True, order=True)
class BinaryQuadraticForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        return abs(b) <= a <= c and (b >= 0 or (abs(b) != a and a != c))

    def inverse(self) -> "BinaryQuadraticForm":
        return reduce_form(BinaryQuadraticForm(self.a, -self.b, self.c))

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


def principal_form(disc: FieldDiscriminant) -> BinaryQuadraticForm:
    delta = disc.delta
    if delta % 2 == 0:
        return BinaryQuadraticForm(1, 0, -delta // 4)
    return BinaryQuadraticForm(1, 1, (1 - delta) // 4)


def reduce_form(f: BinaryQuadraticForm) -> BinaryQuadraticForm:
    """Gauss reduction of a positive definite form."""
    a, b, c = f.a, f.b, f.c
    if a <= 0 or b * b - 4 * a * c >= 0:
        raise ValueError(f"form {f} is not positive definite")
    while True:
        # translate b into (-a, a]
        r = (a - b) // (2 * a)
        b, c = b + 2 * a * r, a * r * r + b * r + c
        if a > c:
            a, b, c = c, -b, a
            continue
        break
    if a == c and b < 0:
        b = -b
    return BinaryQuadraticForm(a, b, c)


@lru_cache(maxsize=None)
def _reduced_forms(delta: int) -> Tuple[BinaryQuadraticForm, ...]:
    forms = []
    a = 1
    while 3 * a * a <= -delta:
        for b in range(-a + 1, a + 1):
            num = b * b - delta
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            forms.append(BinaryQuadraticForm(a, b, c))
        a += 1
    return tuple(sorted(forms))


def enumerate_reduced_forms(disc: FieldDiscriminant) -> List[BinaryQuadraticForm]:
    return list(_reduced_forms(disc.delta))


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, u, v) with u*a + v*b == g == gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def compose(f: BinaryQuadraticForm, g: BinaryQuadraticForm) -> BinaryQuadraticForm:
    """Gauss composition of two primitive positive definite forms, reduced.

    Follows the classical Shanks arrangement (Cohen, Algorithm 5.4.7).
    """
    if f.discriminant != g.discriminant:
        raise DiscriminantMismatchError(f"{f} and {g} have different discriminants")
    if f.a > g.a:
        f, g = g, f
    a1, b1, _ = f.a, f.b, f.c
    a2, b2, c2 = g.a, g.b, g.c
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = _xgcd(s, d)
        y2 = -y2
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return reduce_form(BinaryQuadraticForm(a3, b3, c3))


@dataclass(frozen=True)
class ClassGroupStructure:
    discriminant: FieldDiscriminant
    class_number: int
    elementary_divisors: Tuple[int, ...]
    genus_count: int
    representatives: Tuple[BinaryQuadraticForm, ...]
    table: Tuple[Tuple[int, ...], ...] = field(repr=False, compare=False)

    def index_of(self, form: BinaryQuadraticForm) -> int:
        return self.representatives.index(reduce_form(form))

    def order(self, i: int) -> int:
        k, x = 1, i
        while x != 0:
            x = self.table[x][i]
            k += 1
        return k


def _prime_factors(n: int) -> List[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _invariant_factors(orders: Sequence[int], h: int) -> Tuple[int, ...]:
    # For a p-group with exponents e_i, #{x : x^(p^k) = 1} = p^(sum min(e_i, k)).
    per_prime: Dict[int, List[int]] = {}
    for p in _prime_factors(h):
        ppart = 1
        while h % (ppart * p) == 0:
            ppart *= p
        counts = [1]
        k = 0
        while counts[-1] < ppart:
            k += 1
            counts.append(sum(1 for o in orders if (p ** k) % o == 0))
        at_least = []  # at_least[k-1] = #{i : e_i >= k}
        for k in range(1, len(counts)):
            ratio, r = counts[k] // counts[k - 1], 0
            while ratio > 1:
                ratio //= p
                r += 1
            at_least.append(r)
        exps = []
        for k in range(len(at_least), 0, -1):
            nxt = at_least[k] if k < len(at_least) else 0
            exps.extend([k] * (at_least[k - 1] - nxt))
        per_prime[p] = exps  # descending
    width = max((len(e) for e in per_prime.values()), default=0)
    factors = []
    for j in range(width):
        f = 1
        for p, exps in per_prime.items():
            if j < len(exps):
                f *= p ** exps[j]
        factors.append(f)
    return tuple(sorted(factors))


@lru_cache(maxsize=None)
def _structure(delta: int, disc: FieldDiscriminant) -> ClassGroupStructure:
    reps = _reduced_forms(delta)
    index = {f: i for i, f in enumerate(reps)}
    table = tuple(tuple(index[compose(f, g)] for g in reps) for f in reps)
    h = len(reps)
    partial = ClassGroupStructure(disc, h, (), 0, reps, table)
    orders = [partial.order(i) for i in range(h)]
    genus = sum(1 for i in range(h) if table[i][i] == 0)
    return ClassGroupStructure(disc, h, _invariant_factors(orders, h), genus, reps, table)


def class_group_structure(disc: FieldDiscriminant) -> ClassGroupStructure:
    """Class number, invariant factors (ascending, each dividing the next) and 2-torsion size."""
    return _structure(disc.delta, disc)


def corollary_predicates(s: ClassGroupStructure) -> Tuple[bool, bool]:
    """Return (elementary abelian 2-group, cyclic of 2-power order)."""
    divisors = s.elementary_divisors
    h = s.class_number
    elementary_two = all(d == 2 for d in divisors)
    cyclic_two_power = len(divisors) <= 1 and h & (h - 1) == 0
    return elementary_two, cyclic_two_power


@dataclass(frozen=True)
class IdealHNF:
    """The O-ideal content * (a*Z + (b + omega)*Z) of the maximal order of Q(sqrt(-D))."""

    D: int
    a: int
    b: int
    content: int = 1

    def __post_init__(self):
        disc = make_discriminant(self.D)
        if self.a < 1 or self.content < 1 or not 0 <= self.b < self.a:
            raise ValueError(f"not in Hermite normal form: {self}")
        t, n = disc.omega_trace, disc.omega_norm
        if (self.b * self.b + t * self.b + n) % self.a:
            raise ValueError(f"lattice [{self.a}, {self.b}+omega] is not an ideal")

    @property
    def norm(self) -> int:
        return self.content ** 2 * self.a

    @classmethod
    def from_lattice(cls, disc: FieldDiscriminant, vectors: Iterable[Tuple[int, int]]) -> "IdealHNF":
        """Hermite normal form of the Z-span of coordinate vectors (x, y) meaning x + y*omega.

        The vectors must span an O-ideal of rank 2.
        """
        zero_x = 0
        gx, gy = 0, 0
        for x, y in vectors:
            if y == 0:
                zero_x = gcd(zero_x, x)
            elif gy == 0:
                gx, gy = x, y
            else:
                d, u, v = _xgcd(gy, y)
                zero_x = gcd(zero_x, (y // d) * gx - (gy // d) * x)
                gx, gy = u * gx + v * x, d
        if gy < 0:
            gx, gy = -gx, -gy
        if zero_x == 0 or gy == 0:
            raise ValueError("generators do not span a rank-2 lattice")
        gx %= zero_x
        if zero_x % gy or gx % gy:
            raise ValueError("lattice is not an ideal of the maximal order")
        return cls(disc.D, zero_x // gy, gx // gy, gy)


def ideal_to_form(ideal: IdealHNF) -> BinaryQuadraticForm:
    """Norm form of the primitive part: the ideal [a, (-B + sqrt(delta))/2] maps to (a, B, c)."""
    disc = make_discriminant(ideal.D)
    t, n = disc.omega_trace, disc.omega_norm
    a, b = ideal.a, ideal.b
    return BinaryQuadraticForm(a, -(2 * b + t), (b * b + t * b + n) // a)


def form_to_ideal(f: BinaryQuadraticForm, disc: FieldDiscriminant) -> IdealHNF:
    if f.discriminant != disc.delta:
        raise DiscriminantMismatchError(f"{f} does not have discriminant {disc.delta}")
    return IdealHNF(disc.D, f.a, ((-f.b - disc.omega_trace) // 2) % f.a)


def is_principal(ideal: IdealHNF) -> bool:
    disc = make_discriminant(ideal.D)
    return reduce_form(ideal_to_form(ideal)) == principal_form(disc)


@lru_cache(maxsize=None)
def _squares_mod(n: int) -> frozenset:
    return frozenset(x * x % n for x in range(n))


def is_square_mod(a: int, n: int) -> bool:
    """Exhaustive test for x with x*x = a (mod n); n may be composite."""
    if n < 1:
        raise ValueError("modulus must be positive")
    return a % n in _squares_mod(n)


def paper_N(D: int) -> Tuple[int, int]:
    """(n, N): the prime-divisor count of D and the predicted number of cusps.

    N = 2**(n-1) for D = 3 mod 4 and N = 2**n for D = 1, 2 mod 4.
    """
    make_discriminant(D)
    n = len(_prime_factors(D))
    if D % 4 == 3:
        return n, 2 ** (n - 1)
    return n, 2 ** n
