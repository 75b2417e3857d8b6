"""Left Rees categories built from diagrams of partial homomorphisms of finite groups."""

from .bimodules import CoveringBimodule, bimodule_from_diagram, diagram_from_bimodule
from .diagrams import Diagram, DiagramClass, GroupElem, build_diagram, classify, diagrams_conjugate
from .fileformat import parse_diagram, parse_word, print_diagram
from .groupoid import EdgeLetter, GroupoidWord, emit_presentation, equal, reduce
from .groups import FiniteGroup, cyclic_group, group_from_table, partial_hom, symmetric_group
from .tensor import CategoryTruncation, TensorCategory, verify_levi
from .zappa import check_axioms, derive_action, zs_iso_check

__version__ = "0.1.0"

__all__ = [
    "CategoryTruncation",
    "CoveringBimodule",
    "Diagram",
    "DiagramClass",
    "EdgeLetter",
    "FiniteGroup",
    "GroupElem",
    "GroupoidWord",
    "TensorCategory",
    "bimodule_from_diagram",
    "build_diagram",
    "check_axioms",
    "classify",
    "cyclic_group",
    "derive_action",
    "diagram_from_bimodule",
    "diagrams_conjugate",
    "emit_presentation",
    "equal",
    "group_from_table",
    "parse_diagram",
    "parse_word",
    "partial_hom",
    "print_diagram",
    "reduce",
    "symmetric_group",
    "verify_levi",
    "zs_iso_check",
]
