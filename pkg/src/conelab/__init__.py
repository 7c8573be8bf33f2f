"""conelab: a numerical laboratory for symmetric-cone calculus and
cone-constrained estimates for non-elliptic differential operators."""

from ._backend import BACKEND

__all__ = ["BACKEND", "__version__"]
__version__ = "0.1.0"
