"""gitangle toolkit - engine registry and report assembly."""

import logging
from typing import Optional

import numpy as np

from gitangle.config import ROOT_CLUSTER_TOL, Settings
from gitangle.modules.ent_bell import BellEngine
from gitangle.modules.ent_fluct import FluctuationEngine
from gitangle.modules.ent_invariants import InvariantEngine
from gitangle.modules.ent_majorana import MajoranaEngine
from gitangle.modules.ent_orbit import OrbitEngine
from gitangle.modules.ent_repn import OperatorBasis, RepresentationEngine
from gitangle.modules.ent_states import PureState, StateEngine
from gitangle.exceptions import DimensionMismatchError, FactorCountError

logger = logging.getLogger("gitangle.toolkit")


def default_system(state: PureState) -> str:
    """spin:<d-1> for a single factor, local:<d1>x<d2>... otherwise."""
    if state.n_factors == 1:
        return f"spin:{state.dims[0] - 1}"
    return "local:" + "x".join(str(d) for d in state.dims)


class Toolkit:
    """gitangle library - every engine bound to one Settings."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or Settings()
        self.repn = RepresentationEngine()
        self.states = StateEngine()
        self.fluct = FluctuationEngine()
        self.orbit = OrbitEngine()
        self.invariants = InvariantEngine()
        self.majorana = MajoranaEngine()
        self.bell = BellEngine()

    def system(self, spec: Optional[str], state: Optional[PureState] = None) -> OperatorBasis:
        """Basis for spec, or the default for the state; dimensions must agree."""
        spec = spec or default_system(state)
        basis = self.repn.system(spec, cap=self.settings.dimension_cap)
        if state is not None and basis.dim != state.dim:
            raise DimensionMismatchError(basis.dim, state.dim, what=f"state for system {spec}")
        logger.debug("SYSTEM_BUILT spec=%s dim=%d generators=%d", spec, basis.dim, len(basis))
        return basis

    # ── Reports ────────────────────────────────────────────

    def variance_report(self, state: PureState, basis: OperatorBasis) -> dict:
        report = self.fluct.total_variance(state, basis).to_dict()
        residual = self.fluct.coherence_residual(state, basis)
        report['coherence_residual'] = residual
        report['coherence_verdict'] = self.fluct.coherence_verdict(residual)
        two_s = self.repn.spin_of(basis)
        if two_s is not None:
            low, high = self.fluct.spin_variance_bounds(two_s)
            report['variance_bounds'] = [low, high]
            report['uncertainty'] = self.fluct.uncertainty_exceeds_projection(state, two_s)
        return report

    def orbit_report(self, state: PureState, basis: OperatorBasis) -> dict:
        result = self.orbit.analyse(state, basis, self.settings.flow)
        report = result.to_dict()
        report['history_length'] = len(result.norm_history)
        return report

    def schmidt_report(self, state: PureState) -> dict:
        if state.n_factors != 2:
            raise FactorCountError("schmidt", "exactly 2 factors", state.dims)
        data = self.states.schmidt(state)
        report = data.to_dict()
        report['entropy_ebits'] = self.states.entropy(state)
        report['marginal_spectra'] = [s.tolist() for s in self.states.spectra(state)]
        return report

    def invariant_report(self, state: PureState) -> dict:
        found = self.invariants.report(state)
        if found is None:
            raise FactorCountError(
                "invariants", "two factors or three qubits [2, 2, 2]", state.dims
            )
        report = found.to_dict()
        if found.name == "hyperdet":
            report['three_tangle'] = found.derived_concurrence ** 2
        return report

    def majorana_report(self, state: PureState, two_s: int) -> dict:
        config = self.majorana.to_roots(state, two_s)
        stars = self.majorana.star_points(config)
        report = config.to_dict()
        report['star_points'] = stars.points.tolist()
        report['balance_residual'] = float(np.linalg.norm(self.majorana.star_sum(stars)))
        report['hm_class'] = self.majorana.hm_classify(config, cluster_tol=ROOT_CLUSTER_TOL)
        return report

    def pentagram_report(self, state: PureState, basis: str = "spin", search: bool = False) -> dict:
        regular = self.bell.regular_pentagram()
        evaluated = self.bell.evaluate(state, regular, basis)
        frame = self.bell.canonical_frame(state, basis)
        report = {
            'type': 'PENTAGRAM_ANALYSIS',
            'pentagram': regular.to_dict(),
            'spectrum': list(evaluated.spectrum),
            'bell_value': evaluated.bell_value,
            'violated': evaluated.violated,
            'jsquare_form': self.bell.jsquare_form(state, regular, basis),
            'reflection_form': self.bell.reflection_form(state, regular, basis),
            'frame': frame.to_dict(),
            'max_bell_value': self.bell.max_bell_value(frame.phi, regular),
        }
        if search:
            found = self.bell.search_violation(state, self.settings.search, basis)
            report['search'] = found.to_dict() if found is not None else None
        return report
