"""Named checkers, one per verified result, and the runner that executes them."""
from .core import (MODES, REGISTRY, CheckRecord, Skip, Theorem, UnknownTheorem, registered_ids,
                   run_check)

__all__ = ["MODES", "REGISTRY", "CheckRecord", "Skip", "Theorem", "UnknownTheorem",
           "registered_ids", "run_check"]
