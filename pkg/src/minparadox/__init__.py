"""Material-implication principles over minimal logic: semantics, proof search, separations."""

from .formula import Schema, parse, to_text, to_unicode, translate_implicational
from .kripke import Model, Structure, forces, model_valid, schema_valid_full

__version__ = "0.1.0"

__all__ = [
    "Schema",
    "parse",
    "to_text",
    "to_unicode",
    "translate_implicational",
    "Model",
    "Structure",
    "forces",
    "model_valid",
    "schema_valid_full",
]
