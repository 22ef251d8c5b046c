"""Exact invariant bookkeeping for symplectic 4-manifold constructions."""

from __future__ import annotations

from .cyclotomic import SQRT3, ZETA, CycMatrix, CyclotomicElement, scalar_equivalent, verify_form_preservation
from .cs_lattice import cs_relation_report
from .geography import Block, TrackedSurface, blow_up, fiber_sum, homology_profile, product_block, torus_surgery
from .groups import Presentation, SurgeryDatum, Word, h1, parse_presentation, parse_word
from .lattice import AbelianGroup, IntMatrix, cokernel, snf
from .recipes import Recipe, Report, builtin_recipes, parse_recipe, run_recipe

__version__ = "0.1.0"

__all__ = [
    "SQRT3", "ZETA", "CycMatrix", "CyclotomicElement", "scalar_equivalent", "verify_form_preservation",
    "cs_relation_report",
    "Block", "TrackedSurface", "blow_up", "fiber_sum", "homology_profile", "product_block", "torus_surgery",
    "Presentation", "SurgeryDatum", "Word", "h1", "parse_presentation", "parse_word",
    "AbelianGroup", "IntMatrix", "cokernel", "snf",
    "Recipe", "Report", "builtin_recipes", "parse_recipe", "run_recipe",
]
