"""Optimal curve configurations, train tracks and twist matrices for strata
of quadratic differentials."""

from .config import CurveConfiguration, from_curves, verify
from .realize import realize_signature
from .signature import Signature, optimal_count, parse_signature
from .traintrack import TrainTrack, ergodic_upper_bound

__all__ = [
    "CurveConfiguration", "Signature", "TrainTrack", "ergodic_upper_bound", "from_curves",
    "optimal_count", "parse_signature", "realize_signature", "verify",
]
__version__ = "0.1.0"
