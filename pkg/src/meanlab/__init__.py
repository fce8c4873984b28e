"""Power means of finitely supported measures on the positive-definite cone."""
from .spd import (
    EigenPair,
    NotPositiveDefiniteError,
    OrderResult,
    SingularMatrixError,
    congruence,
    eig,
    hermitize,
    loewner_leq,
    mpow,
    random_pd,
    thompson,
)
from .means import PowerParam, arithmetic_mean, gmean, harmonic_mean, mixture, power_integral, qgmean, tsallis
from .measures import (
    AtomicMeasure,
    MeasureFamily,
    condition_remove,
    discretize,
    new_measure,
    pushforward_congruence,
    pushforward_inv,
    pushforward_map,
    pushforward_pow,
    pushforward_scale,
)
from .power_mean import NonConvergenceError, SolveOptions, SolveReport, commuting_oracle, residual_kamei, solve
from .maps import UnitalPositiveMap

__version__ = "0.1.0"

__all__ = [
    "EigenPair",
    "NotPositiveDefiniteError",
    "OrderResult",
    "SingularMatrixError",
    "congruence",
    "eig",
    "hermitize",
    "loewner_leq",
    "mpow",
    "random_pd",
    "thompson",
    "PowerParam",
    "arithmetic_mean",
    "gmean",
    "harmonic_mean",
    "mixture",
    "power_integral",
    "qgmean",
    "tsallis",
    "AtomicMeasure",
    "MeasureFamily",
    "condition_remove",
    "discretize",
    "new_measure",
    "pushforward_congruence",
    "pushforward_inv",
    "pushforward_map",
    "pushforward_pow",
    "pushforward_scale",
    "NonConvergenceError",
    "SolveOptions",
    "SolveReport",
    "commuting_oracle",
    "residual_kamei",
    "solve",
    "UnitalPositiveMap",
]
