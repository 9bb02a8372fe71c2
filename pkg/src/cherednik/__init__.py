"""Exact computations with rational Cherednik algebras at t = 0.

The package builds cyclic and dihedral reflection groups over cyclotomic
fields, multiplies in the PBW normal form with a formal parameter t, studies
the Poisson centre and the finite-dimensional restricted quotient, and checks
the matrix models of the algebra completed along a group orbit.
"""

from .completion import (
    CentralizerModel,
    CuspidalReductionReport,
    InvariantShift,
    TensorSplit,
    TruncatedModel,
    cuspidal_reduction_report,
    dimension_ledger,
    ideal_image_check,
    mirror_base_point,
    verify_relations,
)
from .cyclotomic import Cyclotomic, parse_scalar
from .groebner import IdealBasis
from .groups import (
    ClassFunction,
    Group,
    Parabolic,
    ParabolicPoset,
    build_group,
    cyclic_group,
    dihedral_group,
    induce_character,
    irreducible_representations,
    stabilizer,
)
from .invariants import (
    express_in_invariants,
    fundamental_invariants,
    leaf_census_c0,
)
from .polynomials import MultiPoly, TPoly
from .rca import Algebra, PBWElement
from .restricted import (
    BabyVerma,
    FiniteQuotient,
    RankOneCentre,
    RestrictedAlgebra,
    cm_families,
    is_poisson_point,
    point_quotient,
)

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "BabyVerma",
    "CentralizerModel",
    "ClassFunction",
    "CuspidalReductionReport",
    "Cyclotomic",
    "FiniteQuotient",
    "Group",
    "IdealBasis",
    "InvariantShift",
    "MultiPoly",
    "PBWElement",
    "Parabolic",
    "ParabolicPoset",
    "RankOneCentre",
    "RestrictedAlgebra",
    "TPoly",
    "TensorSplit",
    "TruncatedModel",
    "build_group",
    "cm_families",
    "cuspidal_reduction_report",
    "cyclic_group",
    "dihedral_group",
    "dimension_ledger",
    "express_in_invariants",
    "fundamental_invariants",
    "ideal_image_check",
    "induce_character",
    "irreducible_representations",
    "is_poisson_point",
    "leaf_census_c0",
    "mirror_base_point",
    "parse_scalar",
    "point_quotient",
    "stabilizer",
    "verify_relations",
]
