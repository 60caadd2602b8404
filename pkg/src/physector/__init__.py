"""Physical-sector extraction from commuting-measurement data."""

from .errors import (
    InvalidMatrixError,
    InvalidProbabilityError,
    NormalizationError,
    OutsideFovError,
    PhysectorError,
    PositivityError,
    ShapeError,
)
from .extraction import (
    DecisionObservable,
    DecisionStatistic,
    ExtractionReport,
    build_decision_observable,
    decision_statistic,
    diagonal_hint,
    hoeffding_bound,
    hoeffding_sample_size,
    run_psep,
)
from .measurement import (
    CommutingMeasurement,
    born_probabilities,
    identity_measurement,
    random_measurement,
    subset,
    validate,
)
from .numerics import SolveResult, min_norm_solve, pseudoinverse
from .simulate import FrequencyRecord, sample_frequencies
from .states import DiagonalState, even_cat_diagonal, fock_mixture, hybrid_pure_state

__version__ = "0.1.0"
