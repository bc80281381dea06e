"""Perturbation-series Dirichlet solver for dd_bar + tau d^2 on Jordan domains."""

from .bipoly import BiPolynomial, TrigPolynomial
from .classification import Classification, EquationCoefficients, classify
from .conformal import BoundaryDataSpec, ConformalMap, transport_boundary, univalence_check
from .estimator import PerturbationSolver
from .exceptions import (
    DegenerateEquation, DerivativeVanishes, DimensionMismatch, EllipError, Inconclusive,
    ModeOverflow, NonContractive, NotUnivalent, SampleCountMismatch,
)
from .field import BoundaryModes, FourierRadialField, PolarGrid
from .operators import apply_K, apply_Kz, apply_Kzbar, apply_P, estimate_operator_norm
from .solver import SolveReport, run

__version__ = "0.1.0"

__all__ = [
    "BiPolynomial", "BoundaryDataSpec", "BoundaryModes", "Classification", "ConformalMap",
    "DegenerateEquation", "DerivativeVanishes", "DimensionMismatch", "EllipError",
    "EquationCoefficients", "FourierRadialField", "Inconclusive", "ModeOverflow",
    "NonContractive", "NotUnivalent", "PerturbationSolver", "PolarGrid", "SampleCountMismatch",
    "SolveReport", "TrigPolynomial", "apply_K", "apply_Kz", "apply_Kzbar", "apply_P",
    "classify", "estimate_operator_norm", "run", "transport_boundary", "univalence_check",
]
