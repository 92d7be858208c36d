"""Verification laboratory for the correspondence between interlacing
sequences / continual diagrams and probability measures, with limit-shape
and fluctuation experiments for random matrices and random partitions."""

__version__ = "0.1.0"

from .interlacing import (  # noqa: E402
    AtomicMeasure,
    Diagram,
    InterlacingError,
    InterlacingPair,
    markov_forward,
    markov_inverse,
)

__all__ = [
    "__version__",
    "AtomicMeasure",
    "Diagram",
    "InterlacingError",
    "InterlacingPair",
    "markov_forward",
    "markov_inverse",
]
