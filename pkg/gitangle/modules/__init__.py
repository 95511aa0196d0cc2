"""gitangle modules package.

All engine classes can be imported directly::

    from gitangle.modules import OrbitEngine, StateEngine, RepresentationEngine
"""

from gitangle.modules.ent_repn import RepresentationEngine, OperatorBasis, SpinLabel
from gitangle.modules.ent_states import StateEngine, PureState, DensityMatrix, SchmidtData
from gitangle.modules.ent_fluct import FluctuationEngine, VarianceReport
from gitangle.modules.ent_orbit import OrbitEngine, OrbitResult
from gitangle.modules.ent_invariants import InvariantEngine, InvariantReport
from gitangle.modules.ent_majorana import (
    MajoranaEngine,
    RootConfiguration,
    StarPoints,
    Spin1Invariants,
)
from gitangle.modules.ent_bell import (
    BellEngine,
    Pentagram,
    PentagramReport,
    CanonicalFrame,
    ViolationResult,
)

__all__ = [
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
