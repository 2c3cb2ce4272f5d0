"""Exact computation of anti-holomorphic symmetries of Bianchi orbifolds.

The package is layered bottom-up: ``exact`` (arithmetic in Q(sqrt(d1), sqrt(d2))),
``classgroup`` (forms, ideals, class groups), ``cusps``, ``symmetries`` (the eight
families, search and verification) and ``report``/``cli``.
"""

from .classgroup import (
    BinaryQuadraticForm,
    ClassGroupStructure,
    ExcludedFieldError,
    IdealHNF,
    InvalidInputError,
    class_group_structure,
    make_discriminant,
)
from .cusps import INFINITY, Cusp, OElement, moebius_apply
from .exact import BiquadraticNumber, FieldMismatchError, Matrix2, NotACuspError, Tower
from .report import AnalysisReport, analyze, paper_check, range_scan
from .symmetries import SearchConfig, SymmetryCandidate, search_symmetries, verify_candidate

__all__ = [
    "AnalysisReport", "BinaryQuadraticForm", "BiquadraticNumber", "ClassGroupStructure",
    "Cusp", "ExcludedFieldError", "FieldMismatchError", "INFINITY", "IdealHNF",
    "InvalidInputError", "Matrix2", "NotACuspError", "OElement", "SearchConfig",
    "SymmetryCandidate", "Tower", "analyze", "class_group_structure", "make_discriminant",
    "moebius_apply", "paper_check", "range_scan", "search_symmetries", "verify_candidate",
]
