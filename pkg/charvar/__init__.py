"""
Topology of representation spaces and character varieties.

charvar answers questions about Hom(Gamma, G) and its quotient by G from
theorems whose hypotheses it checks first, and verifies the numerical side
(lifts, deck actions, obstruction classes) on concrete matrices.
"""

from __future__ import annotations

import json
from pathlib import Path

from .exceptions import CharvarError, HypothesisNotMet
from .liegroup import ReductiveDescriptor, named_group, pi1, pi1_derived
from .matrixrep import LiftedRep, MatrixRep, lift_to_universal_cover, obstruction_class
from .presentation import GroupClass, Presentation, parse_presentation, standard_group
from .theorems import InvariantReport, analyze, pi1_moduli
from .zmodule import FgAbelianGroup, IntMatrix, smith_normal_form

__version__: str = json.loads(
    Path(__file__).with_name("manifest.json").read_text(encoding="utf-8")
)["version"]

__all__ = [
    "CharvarError",
    "FgAbelianGroup",
    "GroupClass",
    "HypothesisNotMet",
    "IntMatrix",
    "InvariantReport",
    "LiftedRep",
    "MatrixRep",
    "Presentation",
    "ReductiveDescriptor",
    "analyze",
    "lift_to_universal_cover",
    "named_group",
    "obstruction_class",
    "parse_presentation",
    "pi1",
    "pi1_derived",
    "pi1_moduli",
    "smith_normal_form",
    "standard_group",
]
