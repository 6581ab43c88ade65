"""Quantum correlations of two Stark-shifted atoms in dissipative reservoirs."""

from .measures import (
    BURES_MAX,
    CorrelationSample,
    FanoBloch,
    LquResult,
    bures_entanglement,
    concurrence_x,
    evaluate_all,
    fano_bloch,
    lqu_model,
    sudden_change_times,
    tdd,
)
from .model import (
    AmplitudePair,
    ModelParams,
    Regime,
    Scenario,
    StatePrep,
    XState,
    amplitudes,
    density_matrix,
    phi,
    regime,
    sigma_excited,
    sigma_vacuum,
    theta,
)

__version__ = "0.1.0"
