"""Admissible parameter tuples for each symmetry family, found by plain enumeration."""

import random
from functools import lru_cache

from bianchi_symmetries.exact import is_squarefree

FIELDS = {
    "I": [6, 10, 14, 21, 22, 30, 33, 34, 58, 65, 70],
    "II": [6, 10, 14, 21, 22, 30, 33, 34, 58, 65, 70],
    "III": [5, 13, 17, 21, 29, 33, 37, 41, 65],
    "IV": [17, 41, 73, 89, 97, 113],
    "V": [21, 33, 57, 65, 69, 77, 85, 105],
    "VI": [21, 33, 57, 65, 69, 77, 85, 105],
    "VII": [15, 35, 39, 51, 55, 87, 91, 95],
    "VIII": [15, 35, 39, 51, 55, 87, 91, 95],
}

QUADRATIC = {
    "I": lambda D, m: (m, D // m, m, 1),
    "II": lambda D, m: (m, D // m, D // m, 1),
    "III": lambda D, m: (1, D, 4, 2),
    "IV": lambda D, m: (1, D, 4 * D, 2),
    "V": lambda D, m: (m, D // m, 4 * m, 2),
    "VI": lambda D, m: (m, D // m, 4 * D // m, 2),
    "VII": lambda D, m: (m, D // m, 4 * m, 4),
    "VIII": lambda D, m: (m, D // m, 4 * D // m, 4),
}


def _divisors(D):
    return [m for m in range(2, D) if D % m == 0] or [0]


# type IV needs a1**2 = 2 mod D with a1 odd, which pushes |a1| past 10
BOUNDS = {"IV": 30}


@lru_cache(maxsize=None)
def all_admissible(tag, c_max=5):
    """Every (D, m, a1, a2, b, c) with |a1|, |a2| within the family's bound and 1 <= c <= c_max."""
    bound = BOUNDS.get(tag, 8)
    out = []
    for D in FIELDS[tag]:
        assert is_squarefree(D)
        ms = [0] if tag in ("III", "IV") else _divisors(D)
        for m in ms:
            if tag in ("V", "VI") and m % 2 == 0:
                continue
            p, q, k, rhs = QUADRATIC[tag](D, m)
            for c in range(1, c_max + 1):
                for a1 in range(-bound, bound + 1):
                    for a2 in range(-bound, bound + 1):
                        rest = rhs - p * a1 * a1 - q * a2 * a2
                        if rest % (k * c) == 0:
                            out.append((D, m, a1, a2, rest // (k * c), c))
    return tuple(out)


def admissible_sample(tag, n=50, seed=0):
    pool = all_admissible(tag)
    rng = random.Random(f"{tag}-{seed}")
    return rng.sample(pool, n) if len(pool) >= n else list(pool)
