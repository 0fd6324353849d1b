"""Exact computations with NQ-1 manifolds, graded distributions and their quotients.

Functions on E[1] are polynomials in the base coordinates ``x`` with
exterior coefficients in the fiber coordinates ``xi``; vector fields, Lie
algebroids, distributions, IM-foliations, Lie 2-algebra actions and quotients
are built on top of that with rational arithmetic throughout.
"""

from pathlib import Path

from .algebroid import (LieAlgebroidData, NotHomologicalError, build_q, cdo_from_degree0, derived_bracket,
                        extract_algebroid, verify_algebroid_axioms)
from .distributions import (ClassicalTriple, Distribution, classical_to_dist, dist_is_involutive,
                            dist_is_q_invariant, dist_to_classical, dist_validate, module_equal,
                            module_membership, taylor_expand_degree1)
from .dsl import load, parse, render, resolve
from .graded import GradedFunction
from .imfoliation import IMFoliation, distribution_from_imf, imf_check_axioms, imf_from_distribution
from .lie2 import (Lie2Action, StrictLie2Algebra, action_check_constraints, action_closure_check,
                   action_distribution, action_quotient, strict_action_check)
from .polynomial import Poly
from .reduction import ReductionSetting, flat_frame_solve, invariant_functions, reduce
from .vector_fields import VectorField, vf_commutator, vf_is_homological

CORPUS = Path(__file__).parent / "corpus"

__all__ = [
    "CORPUS", "ClassicalTriple", "Distribution", "GradedFunction", "IMFoliation", "Lie2Action",
    "LieAlgebroidData", "NotHomologicalError", "Poly", "ReductionSetting", "StrictLie2Algebra", "VectorField",
    "action_check_constraints", "action_closure_check", "action_distribution", "action_quotient", "build_q",
    "cdo_from_degree0", "classical_to_dist", "derived_bracket", "dist_is_involutive", "dist_is_q_invariant",
    "dist_to_classical", "dist_validate", "distribution_from_imf", "extract_algebroid", "flat_frame_solve",
    "imf_check_axioms", "imf_from_distribution", "invariant_functions", "load", "module_equal",
    "module_membership", "parse", "reduce", "render", "resolve", "strict_action_check",
    "taylor_expand_degree1", "verify_algebroid_axioms", "vf_commutator", "vf_is_homological",
]
