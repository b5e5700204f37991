"""Relative homological algebra over finite-dimensional algebras over GF(p).

Modules are given by action matrices, subcategories by ``add(T)``. The
package builds proper resolutions and coresolutions, the constructions that
resolve a term of a short exact sequence from resolutions of the other two,
complete resolutions, and bounds on relative and Gorenstein dimensions.
"""
from .approx import Subcategory, add, ext1, ext_dims, is_in_add
from .modcat import Algebra, Module, Morphism, dual, dual_map, path_algebra, truncated_polynomial
from .resolve import (
    AugmentedResolution,
    HypothesisViolation,
    Obstruction,
    ShortExactSeq,
    build_coproper_coresolution,
    build_proper_resolution,
)

__all__ = [
    "Algebra",
    "AugmentedResolution",
    "HypothesisViolation",
    "Module",
    "Morphism",
    "Obstruction",
    "ShortExactSeq",
    "Subcategory",
    "add",
    "build_coproper_coresolution",
    "build_proper_resolution",
    "dual",
    "dual_map",
    "ext1",
    "ext_dims",
    "is_in_add",
    "path_algebra",
    "truncated_polynomial",
]

__version__ = "0.1.0"
