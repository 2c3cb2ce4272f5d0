from itertools import product
from math import gcd

import pytest
from hypothesis import given, strategies as st

from bianchi_symmetries.classgroup import (
    BinaryQuadraticForm as Form,
    DiscriminantMismatchError,
    ExcludedFieldError,
    IdealHNF,
    InvalidInputError,
    class_group_structure,
    compose,
    corollary_predicates,
    enumerate_reduced_forms,
    form_to_ideal,
    ideal_to_form,
    is_principal,
    is_square_mod,
    make_discriminant,
    paper_N,
    principal_form,
    reduce_form,
)
from bianchi_symmetries.exact import is_squarefree

# Reduced forms enumerated by hand before the library existed.
HAND_FORMS = {
    5: [(1, 0, 5), (2, 2, 3)],
    6: [(1, 0, 6), (2, 0, 3)],
    10: [(1, 0, 10), (2, 0, 5)],
    13: [(1, 0, 13), (2, 2, 7)],
    14: [(1, 0, 14), (2, 0, 7), (3, -2, 5), (3, 2, 5)],
    15: [(1, 1, 4), (2, 1, 2)],
    22: [(1, 0, 22), (2, 0, 11)],
    23: [(1, 1, 6), (2, -1, 3), (2, 1, 3)],
    37: [(1, 0, 37), (2, 2, 19)],
    58: [(1, 0, 58), (2, 0, 29)],
}

SCOPE = [D for D in range(2, 201) if D != 3 and is_squarefree(D)]


def oracle_reduced_forms(delta):
    """Independent scan over a and c; b is recovered from the discriminant."""
    out = []
    bound = -delta
    for a in range(1, bound + 1):
        for c in range(a, bound + 1):
            sq = delta + 4 * a * c
            if sq < 0:
                continue
            b = int(round(sq ** 0.5))
            if b * b != sq or b > a:
                continue
            for bb in {b, -b}:
                if bb < 0 and (-bb == a or a == c):
                    continue
                if gcd(gcd(a, bb), c) == 1:
                    out.append((a, bb, c))
        if 3 * a * a > -delta:
            break
    return sorted(out)


def oracle_compose(f, g):
    """Dirichlet composition by searching B modulo 2A."""
    delta = f.discriminant
    e = gcd(gcd(f.a, g.a), (f.b + g.b) // 2)
    A = f.a * g.a // (e * e)
    for B in range(2 * A):
        if (B - f.b) % (2 * f.a // e) == 0 and (B - g.b) % (2 * g.a // e) == 0 and (B * B - delta) % (4 * A) == 0:
            return reduce_form(Form(A, B, (B * B - delta) // (4 * A)))
    raise AssertionError("no admissible B")


def oracle_torsion_counts(s):
    """#{x : k*x = 0} straight from the composition table."""
    h = s.class_number
    counts = {}
    for k in range(1, h + 1):
        n = 0
        for i in range(h):
            x = 0
            for _ in range(k):
                x = s.table[x][i]
            n += x == 0
        counts[k] = n
    return counts


@pytest.mark.parametrize("D", sorted(HAND_FORMS))
def test_scan_oracle_agrees_with_hand_enumeration(D):
    delta = make_discriminant(D).delta
    assert oracle_reduced_forms(delta) == HAND_FORMS[D]


@pytest.mark.parametrize("D", sorted(HAND_FORMS))
def test_enumeration_matches_hand_forms(D):
    forms = enumerate_reduced_forms(make_discriminant(D))
    assert [(f.a, f.b, f.c) for f in forms] == HAND_FORMS[D]


@pytest.mark.parametrize("D", SCOPE)
def test_enumeration_matches_scan_oracle(D):
    disc = make_discriminant(D)
    assert [(f.a, f.b, f.c) for f in enumerate_reduced_forms(disc)] == oracle_reduced_forms(disc.delta)


@pytest.mark.parametrize("D", [5, 6, 14, 21, 23, 30, 46, 47, 71, 105, 161])
def test_compose_matches_dirichlet_oracle(D):
    forms = enumerate_reduced_forms(make_discriminant(D))
    for f, g in product(forms, repeat=2):
        assert compose(f, g) == oracle_compose(f, g)


@pytest.mark.parametrize("D", SCOPE)
def test_composition_is_a_finite_abelian_group(D):
    disc = make_discriminant(D)
    s = class_group_structure(disc)
    forms = list(s.representatives)
    e = principal_form(disc)
    assert s.class_number == len(forms)
    for f in forms:
        assert compose(e, f) == f
        assert compose(f, f.inverse()) == e
    for f, g in product(forms, repeat=2):
        fg = compose(f, g)
        assert fg in forms
        assert fg == compose(g, f)
    for f, g, k in product(forms[:6], repeat=3):
        assert compose(compose(f, g), k) == compose(f, compose(g, k))


@pytest.mark.parametrize("D", SCOPE)
def test_invariant_factors_match_torsion_counts(D):
    s = class_group_structure(make_discriminant(D))
    divisors = s.elementary_divisors
    prod = 1
    for d in divisors:
        prod *= d
    assert prod == s.class_number
    assert all(b % a == 0 for a, b in zip(divisors, divisors[1:]))
    for k, n in oracle_torsion_counts(s).items():
        expected = 1
        for d in divisors:
            expected *= gcd(k, d)
        assert n == expected


@pytest.mark.parametrize("D", SCOPE)
def test_genus_count_is_two_power_dividing_h(D):
    s = class_group_structure(make_discriminant(D))
    g = s.genus_count
    assert g & (g - 1) == 0
    assert s.class_number % g == 0


def test_discriminants():
    assert make_discriminant(5).delta == -20
    assert make_discriminant(15).delta == -15
    assert make_discriminant(7).omega_kind == "half"


@pytest.mark.parametrize("D, word", [(3, "Eisensteinian"), (1, "Gaussian")])
def test_excluded_fields(D, word):
    with pytest.raises(ExcludedFieldError, match=word):
        make_discriminant(D)


@pytest.mark.parametrize("D", [0, -5, 12, 18])
def test_invalid_D(D):
    with pytest.raises(InvalidInputError):
        make_discriminant(D)


@pytest.mark.parametrize("f, expected", [
    (Form(5, 0, 1), Form(1, 0, 5)),
    (Form(1, 0, 5), Form(1, 0, 5)),
    (Form(2, -2, 3), Form(2, 2, 3)),
    (Form(3, 4, 3), Form(2, 2, 3)),
])
def test_reduce_form(f, expected):
    assert reduce_form(f) == expected


def test_reduce_rejects_indefinite():
    with pytest.raises(ValueError):
        reduce_form(Form(1, 5, 1))


def test_small_enumerations():
    assert enumerate_reduced_forms(make_discriminant(5)) == [Form(1, 0, 5), Form(2, 2, 3)]
    assert enumerate_reduced_forms(make_discriminant(6)) == [Form(1, 0, 6), Form(2, 0, 3)]
    assert enumerate_reduced_forms(make_discriminant(15)) == [Form(1, 1, 4), Form(2, 1, 2)]


def test_order_two_class():
    assert compose(Form(2, 2, 3), Form(2, 2, 3)) == Form(1, 0, 5)


@pytest.mark.parametrize("D, h, divisors, genera", [
    (5, 2, (2,), 2),
    (6, 2, (2,), 2),
    (14, 4, (4,), 2),
    (21, 4, (2, 2), 4),
    (23, 3, (3,), 1),
    (105, 8, (2, 2, 2), 8),
])
def test_structure(D, h, divisors, genera):
    s = class_group_structure(make_discriminant(D))
    assert (s.class_number, s.elementary_divisors, s.genus_count) == (h, divisors, genera)


def test_order_four_element():
    s = class_group_structure(make_discriminant(14))
    assert s.order(s.index_of(Form(3, 2, 5))) == 4


@pytest.mark.parametrize("D, expected", [(5, (True, True)), (14, (False, True)), (23, (False, False)), (21, (True, False))])
def test_corollary_predicates(D, expected):
    assert corollary_predicates(class_group_structure(make_discriminant(D))) == expected


def test_principal_ideal_maps_to_principal_form():
    disc = make_discriminant(6)
    assert reduce_form(ideal_to_form(IdealHNF(6, 1, 0))) == principal_form(disc)


def test_ideal_two_sqrt_minus_six():
    ideal = IdealHNF(6, 2, 0)
    assert reduce_form(ideal_to_form(ideal)) == Form(2, 0, 3)
    assert not is_principal(ideal)


def test_ideal_two_one_plus_sqrt_minus_five():
    disc = make_discriminant(5)
    ideal = IdealHNF.from_lattice(disc, [(2, 0), (0, 2), (1, 1), (-5, 1)])
    assert (ideal.a, ideal.b) == (2, 1)
    assert not is_principal(ideal)


def test_principal_by_construction():
    disc = make_discriminant(6)
    # sqrt(-6) and sqrt(-6)*omega = -6
    ideal = IdealHNF.from_lattice(disc, [(0, 1), (-6, 0)])
    assert ideal.norm == 6
    assert is_principal(ideal)


def test_ideal_validation():
    with pytest.raises(ValueError):
        IdealHNF(6, 4, 1)
    with pytest.raises(ValueError):
        IdealHNF(6, 2, 2)


@pytest.mark.parametrize("D", [21, 5, 14, 23, 47, 105])
def test_form_ideal_round_trip(D):
    disc = make_discriminant(D)
    e = principal_form(disc)
    for f in enumerate_reduced_forms(disc):
        ideal = form_to_ideal(f, disc)
        assert reduce_form(ideal_to_form(ideal)) == f
        assert is_principal(ideal) == (f == e)


def test_form_to_ideal_checks_discriminant():
    with pytest.raises(DiscriminantMismatchError):
        form_to_ideal(Form(1, 0, 5), make_discriminant(6))


@pytest.mark.parametrize("D, expected", [(5, (1, 2)), (15, (2, 2)), (30, (3, 8)), (6, (2, 4)), (7, (1, 1))])
def test_paper_N(D, expected):
    assert paper_N(D) == expected


@given(st.integers(-500, 500), st.integers(1, 120))
def test_is_square_mod_matches_search(a, n):
    assert is_square_mod(a, n) == any((x * x - a) % n == 0 for x in range(n))
