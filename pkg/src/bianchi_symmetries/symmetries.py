"""Bianchi's additional symmetries: the eight matrix families, their search and verification.

A symmetry of type t is the orientation-reversing map z -> M * conj(z) with M
built from integers (m, a1, a2, b, c) that satisfy the family's quadratic
condition.  It flips the cusp at infinity with sigma = M(oo) = A/C and leaves
invariant a hemisphere of squared radius 1/|C|^2.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .classgroup import (
    ClassGroupStructure,
    FieldDiscriminant,
    class_group_structure,
    is_square_mod,
    make_discriminant,
    principal_form,
)
from .cusps import (
    INFINITY,
    Cusp,
    OElement,
    cusp_class_index,
    element_of_O,
    is_singular,
    moebius_apply,
    quadratic_of,
)
from .exact import Matrix2, NotACuspError, Tower

log = logging.getLogger(__name__)


class ParameterError(ValueError):
    pass


class InvalidCandidateError(ValueError):
    pass


@dataclass(frozen=True)
class SymmetryType:
    tag: str
    uses_m: bool
    rhs: int
    residues: Tuple[int, ...]  # admissible D mod 4

    @property
    def order(self) -> int:
        return TYPE_ORDER.index(self.tag)

    def bc_coefficient(self, D: int, m: int) -> int:
        return {
            "I": lambda: m,
            "II": lambda: D // m,
            "III": lambda: 4,
            "IV": lambda: 4 * D,
            "V": lambda: 4 * m,
            "VI": lambda: 4 * D // m,
            "VII": lambda: 4 * m,
            "VIII": lambda: 4 * D // m,
        }[self.tag]()

    def quadratic_part(self, D: int, m: int, a1: int, a2: int) -> int:
        if self.uses_m:
            return m * a1 * a1 + (D // m) * a2 * a2
        return a1 * a1 + D * a2 * a2

    @property
    def expected_det(self) -> int:
        # Expanding each family matrix against its own condition gives
        # det = -1 for the odd families and +1 for the even ones.
        return -1 if TYPE_ORDER.index(self.tag) % 2 == 0 else 1

    def __str__(self) -> str:
        return self.tag


TYPE_ORDER = ("I", "II", "III", "IV", "V", "VI", "VII", "VIII")

TYPES: Dict[str, SymmetryType] = {
    "I": SymmetryType("I", True, 1, (1, 2)),
    "II": SymmetryType("II", True, 1, (1, 2)),
    "III": SymmetryType("III", False, 2, (1,)),
    "IV": SymmetryType("IV", False, 2, (1,)),
    "V": SymmetryType("V", True, 2, (1,)),
    "VI": SymmetryType("VI", True, 2, (1,)),
    "VII": SymmetryType("VII", True, 4, (3,)),
    "VIII": SymmetryType("VIII", True, 4, (3,)),
}


def _as_type(t) -> SymmetryType:
    return t if isinstance(t, SymmetryType) else TYPES[t]


def proper_divisors(D: int) -> List[int]:
    return [m for m in range(2, D) if D % m == 0]


def character_condition(t: SymmetryType, D: int, m: int) -> bool:
    """Residue condition on (D, m) for each family, tested by exhaustive search.

    For types V and VI, 2 and k agreeing as quadratic characters mod n is
    taken to mean that 2k is a square mod n (n odd, square-free, prime to 2k).
    """
    t = _as_type(t)
    if t.tag in ("I", "VII"):
        return is_square_mod(D // m, m)
    if t.tag in ("II", "VIII"):
        return is_square_mod(m, D // m)
    if t.tag == "IV":
        return is_square_mod(2, D)
    if t.tag == "V":
        return is_square_mod(2 * (D // m), m)
    if t.tag == "VI":
        return is_square_mod(2 * m, D // m)
    return True


def _check_m(t: SymmetryType, D: int, m: int) -> None:
    if t.uses_m and (m <= 1 or m >= D or D % m):
        raise ParameterError(f"type {t.tag} needs a divisor 1 < m < D of D={D}, got m={m}")


def type_applicable(t, D: int, m: int = 0, *, check_character: bool = True) -> bool:
    t = _as_type(t)
    _check_m(t, D, m)
    if D % 4 not in t.residues:
        return False
    return character_condition(t, D, m) if check_character else True


def condition_lhs(t, D: int, m: int, a1: int, a2: int, b: int, c: int) -> int:
    t = _as_type(t)
    return t.quadratic_part(D, m, a1, a2) + t.bc_coefficient(D, m) * b * c


def tower_for(t, D: int, m: int) -> Tower:
    t = _as_type(t)
    if t.tag in ("III", "IV"):
        return Tower(2, -D)
    if t.tag in ("V", "VI"):
        return Tower(2 * m, -2 * D // m)
    return Tower(m, -(D // m))


def build_matrix(t, D: int, m: int, a1: int, a2: int, b: int, c: int) -> Matrix2:
    """The matrix of the family with the given parameters, entries exactly as in the reference table."""
    t = _as_type(t)
    _check_m(t, D, m)
    if condition_lhs(t, D, m, a1, a2, b, c) != t.rhs:
        raise InvalidCandidateError(
            f"type {t.tag} condition fails for D={D}, m={m}, (a1,a2,b,c)=({a1},{a2},{b},{c})"
        )
    T = tower_for(t, D, m)
    tag = t.tag
    if tag in ("III", "IV"):
        r2, rD = T.sqrt(2), T.sqrt(-D)
        a = (a1 + a2 * rD) / r2
        if tag == "III":
            return Matrix2(a, b * r2, c * r2, (a2 * rD - a1) / r2)
        return Matrix2(a, b * r2 * rD, c * r2 * rD, (a1 - a2 * rD) / r2)
    if tag in ("V", "VI"):
        # sqrt(m)/sqrt(2) = sqrt(2m)/2 and sqrt(-D/m)/sqrt(2) = sqrt(-2D/m)/2
        r2m, r2q = T.sqrt(2 * m), T.sqrt(Fraction(-2 * D, m))
        a = (a1 * r2m + a2 * r2q) / 2
        if tag == "V":
            return Matrix2(a, b * r2m, c * r2m, (a2 * r2q - a1 * r2m) / 2)
        return Matrix2(a, b * r2q, c * r2q, (a1 * r2m - a2 * r2q) / 2)
    rm, rq = T.sqrt(m), T.sqrt(Fraction(-D, m))
    if tag == "I":
        return Matrix2(a1 * rm + a2 * rq, b * rm, c * rm, a2 * rq - a1 * rm)
    if tag == "II":
        return Matrix2(a1 * rm + a2 * rq, b * rq, c * rq, a1 * rm - a2 * rq)
    a = (a1 * rm + a2 * rq) / 2
    if tag == "VII":
        return Matrix2(a, b * rm, c * rm, (-a1 * rm + a2 * rq) / 2)
    return Matrix2(a, b * rq, c * rq, (a1 * rm - a2 * rq) / 2)


def table_sigma(t, D: int, m: int, a1: int, a2: int, b: int, c: int) -> Tuple[Fraction, Fraction]:
    """The reference sigma formula, as (u, w) with sigma = u + w*sqrt(-D)."""
    t = _as_type(t)
    F = Fraction
    return {
        "I": lambda: (F(a1, c), F(a2, c * m)),
        "II": lambda: (F(a2, c), F(-a1 * m * c, c * D)),
        "III": lambda: (F(a1, 2 * c), F(a2, 2 * c)),
        "IV": lambda: (F(a2, 2 * c), F(-a1, 2 * c * D)),
        "V": lambda: (F(a1, 2 * c), F(a2, 2 * c * m)),
        "VI": lambda: (F(a2, 2 * c), F(a1 * m, 2 * c * D)),
        "VII": lambda: (F(a1, 2 * c), F(a2, 2 * c * m)),
        "VIII": lambda: (F(a2, 2 * c), F(a1 * m, 2 * c * D)),
    }[t.tag]()


def derived_sigma(t, D: int, m: int, a1: int, a2: int, c: int) -> Tuple[Fraction, Fraction]:
    """A/C of the family's matrix in closed form, as (u, w) with sigma = u + w*sqrt(-D).

    Used to classify integer solutions before any matrix is built; it agrees
    with the sigma column up to the known misprint and conjugations.
    """
    t = _as_type(t)
    F = Fraction
    return {
        "I": lambda: (F(a1, c), F(a2, c * m)),
        "II": lambda: (F(a2, c), F(-a1 * m, c * D)),
        "III": lambda: (F(a1, 2 * c), F(a2, 2 * c)),
        "IV": lambda: (F(a2, 2 * c), F(-a1, 2 * c * D)),
        "V": lambda: (F(a1, 2 * c), F(a2, 2 * c * m)),
        "VI": lambda: (F(a2, 2 * c), F(-a1 * m, 2 * c * D)),
        "VII": lambda: (F(a1, 2 * c), F(a2, 2 * c * m)),
        "VIII": lambda: (F(a2, 2 * c), F(-a1 * m, 2 * c * D)),
    }[t.tag]()


def table_radius_sq(t, D: int, m: int, c: int) -> Fraction:
    """Square of the r_sigma column."""
    t = _as_type(t)
    F = Fraction
    return {
        "I": lambda: F(1, c * c * m),
        "II": lambda: F(m, c * c * D),
        "III": lambda: F(1, 2 * c * c),
        "IV": lambda: F(1, 2 * c * c * D),
        "V": lambda: F(1, 2 * c * c * m),
        "VI": lambda: F(m, 2 * c * c * D),
        "VII": lambda: F(1, c * c * m),
        "VIII": lambda: F(m, c * c * D),
    }[t.tag]()


@dataclass(frozen=True)
class SymmetryCandidate:
    type: SymmetryType
    D: int
    m: int  # 0 for types III and IV, where no divisor is involved
    a1: int
    a2: int
    b: int
    c: int
    matrix: Matrix2 = field(repr=False)
    sigma: Cusp
    radius_sq: Fraction
    class_index: int
    sigma_column: str  # "exact", "conjugate" or "mismatch"
    radius_matches_table: bool

    @property
    def params(self) -> Tuple[int, int, int, int, int]:
        return self.m, self.a1, self.a2, self.b, self.c

    @property
    def sort_key(self) -> Tuple[int, ...]:
        return (self.type.order, self.m, self.c, self.a1, self.a2, self.b)


def sigma_and_radius(matrix: Matrix2, disc: FieldDiscriminant) -> Tuple[Cusp, Fraction]:
    """sigma = A/C and r_sigma**2 = 1/|C|**2."""
    if not matrix.c:
        raise InvalidCandidateError("lower-left entry vanishes, the matrix fixes infinity")
    try:
        sigma = moebius_apply(matrix, INFINITY, disc)
    except NotACuspError as exc:
        raise InvalidCandidateError(f"malformed symmetry matrix: {exc}") from exc
    cc = matrix.c * matrix.c.conj()
    return sigma, 1 / cc.coeffs[0]


def make_candidate(
    t, D: int, m: int, a1: int, a2: int, b: int, c: int,
    structure: Optional[ClassGroupStructure] = None,
) -> SymmetryCandidate:
    t = _as_type(t)
    if c < 1:
        raise InvalidCandidateError("c must be at least 1")
    disc = make_discriminant(D)
    s = structure or class_group_structure(disc)
    if not t.uses_m:
        m = 0
    matrix = build_matrix(t, D, m, a1, a2, b, c)
    sigma, radius_sq = sigma_and_radius(matrix, disc)
    u, w = sigma.value(disc)
    listed = table_sigma(t, D, m, a1, a2, b, c)
    if listed == (u, w):
        column = "exact"
    elif listed == (u, -w):
        column = "conjugate"
    else:
        column = "mismatch"
    return SymmetryCandidate(
        t, D, m, a1, a2, b, c, matrix, sigma, radius_sq,
        cusp_class_index(sigma, disc, s), column,
        radius_sq == table_radius_sq(t, D, m, c),
    )


def stabilizer_generators(disc: FieldDiscriminant) -> Tuple[Matrix2, Matrix2]:
    """The translations z -> z + 1 and z -> z + omega generating the cusp stabiliser (mod -1)."""
    T = Tower(1, -disc.D)
    omega = OElement(0, 1).to_tower(T, disc)
    return Matrix2.of(T, 1, 1, 0, 1), Matrix2.of(T, 1, omega, 0, 1)


def _inversion(tower: Tower) -> Matrix2:
    return Matrix2.of(tower, 0, -1, 1, 0)


def retower(g: Matrix2, tower: Tower, disc: FieldDiscriminant) -> Matrix2:
    """Move a matrix with entries in Q(sqrt(-D)) into another tower containing sqrt(-D)."""
    return Matrix2(*(tower.quadratic(*quadratic_of(x, disc), disc.D) for x in g.entries))


def in_sl2_O(g: Matrix2, disc: FieldDiscriminant) -> bool:
    return g.det() == 1 and all(element_of_O(x, disc) is not None for x in g.entries)


@dataclass(frozen=True)
class VerificationReport:
    det: Fraction
    det_matches_type: bool
    involution_ok: bool
    normalizes_gamma: bool
    radius_lt_one: bool
    sigma_singular: bool
    flip_ok: bool

    @property
    def det_is_minus_one(self) -> bool:
        return self.det == -1

    @property
    def verified(self) -> bool:
        return all(
            (self.det_matches_type, self.involution_ok, self.normalizes_gamma,
             self.radius_lt_one, self.sigma_singular, self.flip_ok)
        )

    def failures(self) -> List[str]:
        names = ("det_matches_type", "involution_ok", "normalizes_gamma",
                 "radius_lt_one", "sigma_singular", "flip_ok")
        return [n for n in names if not getattr(self, n)]


def _flips(matrix: Matrix2, sigma: Cusp, disc: FieldDiscriminant) -> bool:
    """z -> M*conj(z) sends oo to sigma and sigma to oo, i.e. C*conj(sigma) + D = 0."""
    if sigma.is_infinity or moebius_apply(matrix, INFINITY, disc) != sigma:
        return False
    s = matrix.tower.quadratic(*sigma.value(disc), disc.D)
    return not (matrix.c * s.conj() + matrix.d)


def verify_candidate(
    cand: SymmetryCandidate, disc: FieldDiscriminant, s: ClassGroupStructure
) -> VerificationReport:
    M = cand.matrix
    det = M.det()
    det_value = det.coeffs[0] if det.is_rational() else None
    involution = M @ M.conj()
    Minv = M.inverse()
    gx, gy = stabilizer_generators(disc)
    gens = [retower(g, M.tower, disc) for g in (gx, gy)] + [_inversion(M.tower)]
    normalizes = True
    for g in gens:
        try:
            image = retower(M @ g.conj() @ Minv, Tower(1, -disc.D), disc)
        except NotACuspError:
            normalizes = False
            break
        if not in_sl2_O(image, disc):
            normalizes = False
            break
    return VerificationReport(
        det=det_value,
        det_matches_type=det_value == cand.type.expected_det,
        involution_ok=involution.is_scalar(1) or involution.is_scalar(-1),
        normalizes_gamma=normalizes,
        radius_lt_one=cand.radius_sq < 1,
        sigma_singular=is_singular(cand.sigma, disc),
        flip_ok=_flips(M, cand.sigma, disc),
    )


@dataclass(frozen=True)
class ConjugatedGenerators:
    gx: Matrix2
    gy: Matrix2
    in_sl2_O: bool
    parabolic: bool
    fix_sigma: bool


def conjugated_generators(cand: SymmetryCandidate, disc: FieldDiscriminant) -> ConjugatedGenerators:
    """M gamma_x M^-1 and M gamma_y M^-1, which stabilise sigma in place of the translations at oo."""
    M = cand.matrix
    Minv = M.inverse()
    local = Tower(1, -disc.D)
    out = []
    for g in stabilizer_generators(disc):
        conj = M @ retower(g, M.tower, disc) @ Minv
        try:
            out.append(retower(conj, local, disc))
        except NotACuspError:
            out.append(conj)
    ok = all(g.tower == local and in_sl2_O(g, disc) for g in out)
    parabolic = all(g.trace() == 2 or g.trace() == -2 for g in out)
    fixes = all(g.tower == local and moebius_apply(g, cand.sigma, disc) == cand.sigma for g in out)
    return ConjugatedGenerators(out[0], out[1], ok, parabolic, fixes)


def _bounds(t: SymmetryType, disc: FieldDiscriminant, m: int, c: int, slack: int) -> Tuple[int, int]:
    """Integer bounds on (a_re, a_im) that keep sigma in the enlarged rectangle.

    For every family Re(sigma) = re_scale * a_re / c and
    Im(sigma)**2 = im_scale_sq * a_im**2 / c**2.
    """
    D = disc.D
    F = Fraction
    re_scale, im_scale_sq = {
        "I": (F(1), F(D, m * m) if m else 0),
        "II": (F(1), F(m * m, D)),
        "III": (F(1, 2), F(D, 4)),
        "IV": (F(1, 2), F(1, 4 * D)),
        "V": (F(1, 2), F(D, 4 * m * m) if m else 0),
        "VI": (F(1, 2), F(m * m, 4 * D)),
        "VII": (F(1, 2), F(D, 4 * m * m) if m else 0),
        "VIII": (F(1, 2), F(m * m, 4 * D)),
    }[t.tag]
    half = F(1, 2) + slack
    im_omega_sq = F(D) if disc.omega_kind == "sqrt" else F(D, 4)
    re_bound = int(half * c / re_scale)
    im_sq = im_omega_sq * half * half * c * c / im_scale_sq
    return re_bound, isqrt(int(im_sq))


def integer_solutions(t, D: int, m: int, c_max: int, slack: int = 1):
    """Yield (a1, a2, b, c) solving the family's condition with sigma in the enlarged rectangle."""
    t = _as_type(t)
    disc = make_discriminant(D)
    re_first = t.tag in ("I", "III", "V", "VII")
    for c in range(1, c_max + 1):
        re_bound, im_bound = _bounds(t, disc, m, c, slack)
        coef = t.bc_coefficient(D, m) * c
        for a_re in range(-re_bound, re_bound + 1):
            for a_im in range(-im_bound, im_bound + 1):
                a1, a2 = (a_re, a_im) if re_first else (a_im, a_re)
                rest = t.rhs - t.quadratic_part(D, m, a1, a2)
                if rest % coef == 0:
                    yield a1, a2, rest // coef, c


def _minimality(t: SymmetryType, m: int, sol: Tuple[int, int, int, int]) -> Tuple[int, ...]:
    a1, a2, b, c = sol
    # ties between sign choices prefer non-negative parameters
    return (c, abs(a1), abs(a2), abs(b), m, -a1, -a2, -b)


@dataclass(frozen=True)
class SearchConfig:
    c_max: int = 12
    rectangle_slack: int = 1
    strict: bool = False
    enforce_character_conditions: bool = True

    def __post_init__(self):
        if self.c_max < 1:
            raise ValueError("c_max must be at least 1")
        if self.rectangle_slack < 0:
            raise ValueError("rectangle_slack must be non-negative")


def search_symmetries(
    D: int,
    config: Optional[SearchConfig] = None,
    structure: Optional[ClassGroupStructure] = None,
) -> List[SymmetryCandidate]:
    """Verified symmetries of every family, at most one per (type, ideal class).

    Within a family the retained candidate is the one minimal in
    (c, |a1|, |a2|, |b|); the result is sorted by (type, m, c, a1, a2, b).
    """
    cfg = config or SearchConfig()
    disc = make_discriminant(D)
    s = structure or class_group_structure(disc)
    principal = s.index_of(principal_form(disc))
    found: List[SymmetryCandidate] = []
    for tag in TYPE_ORDER:
        t = TYPES[tag]
        if D % 4 not in t.residues:
            continue
        ms = proper_divisors(D) if t.uses_m else [0]
        pool = []
        for m in ms:
            if not character_condition(t, D, m):
                if cfg.enforce_character_conditions:
                    continue
                log.info("type %s, D=%d, m=%d: character condition skipped", tag, D, m)
            pool.extend((m, sol) for sol in integer_solutions(t, D, m, cfg.c_max, cfg.rectangle_slack))
        pool.sort(key=lambda item: _minimality(t, item[0], item[1]))
        best: Dict[int, SymmetryCandidate] = {}
        for m, (a1, a2, b, c) in pool:
            if len(best) == s.class_number - 1:
                break
            sigma = Cusp.from_value(*derived_sigma(t, D, m, a1, a2, c), disc)
            index = cusp_class_index(sigma, disc, s)
            if index == principal or index in best:
                continue
            cand = make_candidate(t, D, m, a1, a2, b, c, s)
            if verify_candidate(cand, disc, s).verified:
                best[cand.class_index] = cand
        found.extend(best.values())
    return sorted(found, key=lambda cand: cand.sort_key)


@dataclass(frozen=True)
class IntroCase:
    label: str  # "A" or "B"
    m: int
    matrix: Matrix2 = field(repr=False)
    sigma: Cusp
    flip_ok: bool


def _smallest_prime_divisor(D: int) -> int:
    p = 2
    while D % p:
        p += 1
    return p


def intro_case_matrices(D: int) -> List[IntroCase]:
    """The two classical constructions, with m the smallest prime divisor of D.

    These matrices are only projectively meaningful, so they are checked for
    the flip oo <-> sigma alone.
    """
    disc = make_discriminant(D)
    out = []
    m = _smallest_prime_divisor(D)
    if D % 4 in (1, 2) and m < D:
        T = Tower(m, -(D // m))
        rq, rm = T.sqrt(Fraction(-D, m)), T.sqrt(m)
        M = Matrix2(rq, -rm, rm, rq)
        sigma = Cusp.from_value(Fraction(0), Fraction(1, m), disc)
        out.append(IntroCase("A", m, M, sigma, _flips(M, sigma, disc)))
    if D % 4 == 1:
        T = Tower(2, -D)
        r2, rD = T.sqrt(2), T.sqrt(-D)
        M = Matrix2((rD + 1) / r2, Fraction(D - 1, -4) * r2, r2, (rD - 1) / r2)
        sigma = Cusp.from_value(Fraction(1, 2), Fraction(1, 2), disc)
        out.append(IntroCase("B", 2, M, sigma, _flips(M, sigma, disc)))
    return out


@dataclass(frozen=True)
class BasicSymmetry:
    name: str
    apply: Callable[[Matrix2], Matrix2] = field(repr=False)

    def preserves(self, sample: Sequence[Matrix2], disc: FieldDiscriminant) -> bool:
        return all(in_sl2_O(self.apply(g), disc) for g in sample)


def _flip_off_diagonal(g: Matrix2) -> Matrix2:
    # E g E with E = diag(-1, 1)
    return Matrix2(g.a, -g.b, -g.c, g.d)


def basic_symmetries(disc: FieldDiscriminant) -> List[BasicSymmetry]:
    """Complex conjugation c, conjugation e by diag(-1, 1), and their composite."""
    return [
        BasicSymmetry("c", lambda g: g.conj()),
        BasicSymmetry("e", _flip_off_diagonal),
        BasicSymmetry("ce", lambda g: _flip_off_diagonal(g.conj())),
    ]
