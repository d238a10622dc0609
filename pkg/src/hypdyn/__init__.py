"""Exact topological dynamics of the cat map and the Smale horseshoe."""

from .errors import DomainError, EscapeError
from .exactnum import GOLDEN, QuadNum
from .toral import IntMat2, TorusPoint, cat_matrix

__all__ = ["DomainError", "EscapeError", "GOLDEN", "QuadNum", "IntMat2", "TorusPoint", "cat_matrix"]
__version__ = "0.1.0"
