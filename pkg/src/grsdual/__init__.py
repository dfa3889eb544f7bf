"""MDS self-dual, self-orthogonal and almost self-dual codes from
generalized Reed-Solomon constructions over GF(r^2)."""

from grsdual.field import FiniteField, Fe, build_field

__all__ = ["FiniteField", "Fe", "build_field"]
__version__ = "0.1.0"
