"""Acceptance criteria, one test per criterion.

Run ``pytest tests/test_acceptance.py`` and read the "acceptance criteria"
section at the end of the output for the PASS/FAIL line of each criterion.
"""

import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from bianchi_symmetries.classgroup import class_group_structure, enumerate_reduced_forms, make_discriminant
from bianchi_symmetries.exact import BiquadraticNumber, Matrix2, Tower, is_squarefree
from bianchi_symmetries.report import REFERENCE_FIXTURES, analyze, check_reference_fixture
from bianchi_symmetries.symmetries import (
    TYPE_ORDER,
    _inversion,
    build_matrix,
    condition_lhs,
    in_sl2_O,
    retower,
    search_symmetries,
    stabilizer_generators,
    verify_candidate,
)

from samples import admissible_sample

criterion = pytest.mark.criterion


class Stopwatch:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


@criterion(1, "reference fixtures found with c_max = 4 and fully verified")
def test_reference_fixtures():
    with Stopwatch() as sw:
        results = [check_reference_fixture(*fx, c_max=4) for fx in REFERENCE_FIXTURES]
    failed = {r.name: [n for n, ok in r.checks if not ok] for r in results if not r.passed}
    assert len(results) == 7
    assert not failed, failed
    assert sw.elapsed < 5


# frozen before the build from a hand enumeration of reduced forms
CLASS_NUMBERS = {5: 2, 6: 2, 10: 2, 13: 2, 14: 4, 15: 2, 22: 2, 23: 3, 37: 2, 58: 2}


@criterion(2, "class numbers agree with the frozen reduced-form oracle")
def test_class_numbers():
    with Stopwatch() as sw:
        got = {D: len(enumerate_reduced_forms(make_discriminant(D))) for D in CLASS_NUMBERS}
        structures = {D: class_group_structure(make_discriminant(D)).class_number for D in CLASS_NUMBERS}
    assert got == CLASS_NUMBERS
    assert structures == CLASS_NUMBERS
    assert sw.elapsed < 1


@criterion(3, "every non-principal class covered for elementary-2 fields")
def test_corollary_coverage():
    with Stopwatch() as sw:
        reports = {D: analyze(D) for D in (5, 6, 10, 13, 22, 37, 58)}
    for D, r in reports.items():
        assert r.elementary_two, D
        assert r.covered_class_count == r.class_number - 1, D
    assert sw.elapsed < 10


@criterion(4, "count mismatches are surfaced as diagnostics")
def test_diagnostic_honesty():
    for D in (6, 10):
        r = analyze(D)
        assert (r.paper_N, r.class_number) == (4, 2)
        assert "PAPER_N_EXCEEDS_CLASSES" in [d.code for d in r.diagnostics]
    r = analyze(15)
    assert r.paper_N - 1 == 1
    assert r.symmetries == ()
    assert "FEWER_SYMMETRIES_THAN_THEOREM" in [d.code for d in r.diagnostics]


TOWERS = [(2, -3), (2, -5), (3, -2), (2, -1), (1, -6), (5, -2), (6, -5), (10, -3), (3, -5), (2, -15)]


def random_number(rng, tower):
    return BiquadraticNumber(*tower, tuple(Fraction(rng.randint(-30, 30), rng.randint(1, 9)) for _ in range(4)))


@criterion(5, "500-case exact arithmetic property suite")
def test_exact_arithmetic_suite():
    rng = random.Random(20240501)
    with Stopwatch() as sw:
        for _ in range(500):
            tower = rng.choice(TOWERS)
            x, y, z = (random_number(rng, tower) for _ in range(3))
            assert (x + y) + z == x + (y + z)
            assert (x * y) * z == x * (y * z)
            assert x * (y + z) == x * y + x * z
            assert x * y == y * x
            if x:
                assert x * x.inverse() == 1
            assert (x * y).conj() == x.conj() * y.conj()
            assert (x + y).conj() == x.conj() + y.conj()
            w = random_number(rng, tower)
            M, N = Matrix2(x, y, z, w), Matrix2(w, z, y, x)
            assert (M @ N).det() == M.det() * N.det()
            assert abs(complex(x * y) - complex(x) * complex(y)) <= 1e-9 * max(1.0, abs(complex(x) * complex(y)))
    assert sw.elapsed < 2


@criterion(6, "det(M) = -1 for 50 admissible tuples of each of the eight types")
def test_determinant_identity():
    with Stopwatch() as sw:
        wrong = {}
        for t in TYPE_ORDER:
            sample = admissible_sample(t, 50)
            assert len(sample) == 50
            for D, m, a1, a2, b, c in sample:
                assert condition_lhs(t, D, m, a1, a2, b, c) == (1, 1, 2, 2, 2, 2, 4, 4)[TYPE_ORDER.index(t)]
                det = build_matrix(t, D, m, a1, a2, b, c).det()
                if det != -1:
                    wrong.setdefault(t, set()).add(str(det))
    assert sw.elapsed < 2
    assert not wrong, f"det differs from -1: {wrong}"


@criterion(7, "verified candidates normalize the Bianchi group for D <= 60")
def test_normalization():
    with Stopwatch() as sw:
        checked = 0
        for D in range(2, 61):
            if D == 3 or not is_squarefree(D):
                continue
            disc = make_discriminant(D)
            s = class_group_structure(disc)
            local = Tower(1, -D)
            for cand in search_symmetries(D, structure=s):
                if not verify_candidate(cand, disc, s).verified:
                    continue
                M = cand.matrix
                Minv = M.inverse()
                gens = [retower(g, M.tower, disc) for g in stabilizer_generators(disc)] + [_inversion(M.tower)]
                for g in gens:
                    image = retower(M @ g.conj() @ Minv, local, disc)
                    assert in_sl2_O(image, disc), (D, cand.type.tag, cand.params)
                checked += 1
    assert checked > 0
    assert sw.elapsed < 10


def run_range(workers):
    cmd = [sys.executable, "-m", "bianchi_symmetries", "range", "--from", "2", "--to", "100",
           "--format", "json", "--workers", str(workers)]
    with Stopwatch() as sw:
        out = subprocess.run(cmd, capture_output=True, check=True).stdout
    return out, sw.elapsed


@criterion(8, "range 2..100 JSON is byte-identical across runs and worker counts")
def test_determinism():
    first, t1 = run_range(1)
    second, t2 = run_range(1)
    pooled, t4 = run_range(4)
    assert first == second
    assert first == pooled
    assert max(t1, t2, t4) < 60


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
