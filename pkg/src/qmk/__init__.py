"""Module categories over quantum SL(2) on multigraphs: exact solving and certification."""

from .algebraic import AlgebraicNumber, parse_algebraic
from .errors import QMKError
from .forms import BilinearFormPair, ModuleSolution, SelfPairing, is_valid, verify_solution
from .graph import MultiGraph, RigidityClass, classify_rigidity, generalized_cycle_count
from .solver import fp_solution, solve_general, solve_generalized_tree, super_rigid_spectrum
from .spectra import char_poly, spectrum
from .tl import TLElement, build_graded_rep, check_jw_vanishing, jones_wenzl

__all__ = [
    "AlgebraicNumber",
    "BilinearFormPair",
    "ModuleSolution",
    "MultiGraph",
    "QMKError",
    "RigidityClass",
    "SelfPairing",
    "TLElement",
    "build_graded_rep",
    "char_poly",
    "check_jw_vanishing",
    "classify_rigidity",
    "fp_solution",
    "generalized_cycle_count",
    "is_valid",
    "jones_wenzl",
    "parse_algebraic",
    "solve_general",
    "solve_generalized_tree",
    "spectrum",
    "super_rigid_spectrum",
    "verify_solution",
]
