"""Instance generators and file formats."""
from .generator import generate, random_coloring_baseline
from .loader import (
    format_set_system,
    load_coloring,
    load_fractional,
    load_instance,
    load_matrix,
    load_set_system,
    parse_set_system,
    save_matrix,
    save_set_system,
)

__all__ = [
    "generate",
    "random_coloring_baseline",
    "format_set_system",
    "load_coloring",
    "load_fractional",
    "load_instance",
    "load_matrix",
    "load_set_system",
    "parse_set_system",
    "save_matrix",
    "save_set_system",
]
