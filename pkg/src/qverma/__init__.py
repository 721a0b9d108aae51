"""Exact Verma-module computations for U_q(sl(n+1)).

Scalars live in :mod:`qverma.qscalars`, the free algebra and PBW straightening in
:mod:`qverma.freealg`, the module action and pairings in :mod:`qverma.verma`, dynamical root
vectors in :mod:`qverma.dynamical` and closed formulas in :mod:`qverma.formulas`.
"""
from .qscalars import Params, fixed_profile, parse_rational, format_rational
from .freealg import TriangularArray, enumerate_pbw
from .verma import VermaVector, highest_weight_vector, module, standard_gram
from .formulas import B_total, DegenerateWeight, FormulaDiscrepancy

__all__ = [
    "Params",
    "fixed_profile",
    "parse_rational",
    "format_rational",
    "TriangularArray",
    "enumerate_pbw",
    "VermaVector",
    "highest_weight_vector",
    "module",
    "standard_gram",
    "B_total",
    "DegenerateWeight",
    "FormulaDiscrepancy",
]

__version__ = "0.1.0"
