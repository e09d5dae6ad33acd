"""Numerical checks for Carleson measures and the Hausdorff-Young property
of the Laplace transform on the right half-plane."""

from .carleson import CarlesonResult, carleson_norm
from .consts import ExponentPair, babenko_constant, conjugate_exponent, marcinkiewicz_optimum
from .errors import DomainError, NotApplicableError, TailDivergenceError, UnsupportedMeasureError
from .measure import Atom, BoundaryDensity, BoxDensity, CarlesonSquare, DensityPiece, HalfPlaneMeasure, HorizontalDensity
from .report import VerificationReport
from .stepfun import StepFunction

__version__ = "0.1.0"
