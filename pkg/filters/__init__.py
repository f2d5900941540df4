"""Littlewood–Paley generators, families and filters."""

from .family import (
    BlockSequence,
    LPFamily,
    almost_orthogonality_check,
    block,
    build_family,
    decompose,
    family_for,
    high_pass,
    littlewood_paley_ratio,
    low_pass,
    partition_of_unity_defect,
)
from .generator import GENERATORS, GeneratorSpec, get_generator

__all__ = [
    "BlockSequence",
    "LPFamily",
    "GeneratorSpec",
    "GENERATORS",
    "almost_orthogonality_check",
    "block",
    "build_family",
    "decompose",
    "family_for",
    "get_generator",
    "high_pass",
    "littlewood_paley_ratio",
    "low_pass",
    "partition_of_unity_defect",
]
