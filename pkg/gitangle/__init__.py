"""
gitangle - entanglement relative to a dynamical symmetry group.

A state is judged against the Lie algebra of observables a system can
actually access: coherent states minimize the total variance, completely
entangled states have vanishing expectation of every generator, and the
Kempf-Ness flow over the complexified group measures how far a state is
from the null cone.

Quick Start::

    from gitangle import Toolkit, StateEngine

    kit = Toolkit()
    ghz = StateEngine.ghz_state(3)
    basis = kit.system("local:2x2x2")
    result = kit.orbit.analyse(ghz, basis)    # stability "stable", concurrence 1.0

Direct module imports::

    from gitangle.modules import BellEngine, MajoranaEngine
"""

from gitangle.version import __version__
from gitangle.config import FlowParams, SearchBudget, Settings
from gitangle.toolkit import Toolkit
from gitangle.exceptions import (
    GitangleError,
    ValidationError,
    DimensionMismatchError,
    DimensionCapError,
    FactorIndexError,
    FactorCountError,
    StateNormError,
    ZeroStateError,
    SystemSpecError,
    StateFileError,
    PentagramError,
    DirectionError,
    NumericalFailureError,
    BudgetExhaustedError,
)

# Re-export engines and domain types for convenience
from gitangle.modules import (
    RepresentationEngine,
    OperatorBasis,
    SpinLabel,
    StateEngine,
    PureState,
    DensityMatrix,
    SchmidtData,
    FluctuationEngine,
    VarianceReport,
    OrbitEngine,
    OrbitResult,
    InvariantEngine,
    InvariantReport,
    MajoranaEngine,
    RootConfiguration,
    StarPoints,
    Spin1Invariants,
    BellEngine,
    Pentagram,
    PentagramReport,
    CanonicalFrame,
    ViolationResult,
)

__all__ = [
    '__version__',
    'FlowParams',
    'SearchBudget',
    'Settings',
    'Toolkit',
    # Errors
    'GitangleError',
    'ValidationError',
    'DimensionMismatchError',
    'DimensionCapError',
    'FactorIndexError',
    'FactorCountError',
    'StateNormError',
    'ZeroStateError',
    'SystemSpecError',
    'StateFileError',
    'PentagramError',
    'DirectionError',
    'NumericalFailureError',
    'BudgetExhaustedError',
    # Engines and types
    'RepresentationEngine',
    'OperatorBasis',
    'SpinLabel',
    'StateEngine',
    'PureState',
    'DensityMatrix',
    'SchmidtData',
    'FluctuationEngine',
    'VarianceReport',
    'OrbitEngine',
    'OrbitResult',
    'InvariantEngine',
    'InvariantReport',
    'MajoranaEngine',
    'RootConfiguration',
    'StarPoints',
    'Spin1Invariants',
    'BellEngine',
    'Pentagram',
    'PentagramReport',
    'CanonicalFrame',
    'ViolationResult',
]
