"""Bruck-Bose geometry of PG(2,q^2) inside PG(4,q) over exact finite fields.

Codes: F_q elements are 0..q-1, F_{q^2} elements a0 + q a1, F_{q^4}
elements below q^4; INF stands for the parameter infinity.
"""
from .bruckbose import BruckBoseFrame, make_frame
from .gf_tower import INF, MAX_Q, FElem, FieldTower, Level, TowerError, make_tower, prime_power
from .projective import Subspace, meet, normalize, span, subspace

__version__ = "0.1.0"

__all__ = ["BruckBoseFrame", "FElem", "FieldTower", "INF", "Level", "MAX_Q", "Subspace",
           "TowerError", "__version__", "make_frame", "make_tower", "meet", "normalize",
           "prime_power", "span", "subspace"]
