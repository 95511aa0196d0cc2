"""
ent.fluct - Quantum fluctuation functionals for gitangle.

Total variance D(psi) = Sum_i <X_i^2> - <X_i>^2 over a B-orthonormal
basis, the expectation (moment) vector, and two coherence tests.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from gitangle.config import COHERENT_TOL, NOT_COHERENT_TOL
from gitangle.exceptions import DimensionMismatchError
from gitangle.modules.ent_repn import OperatorBasis, RepresentationEngine
from gitangle.modules.ent_states import PureState


@dataclass(frozen=True, eq=False)
class VarianceReport:
    total_variance: float
    expectation_vector: np.ndarray
    casimir_scalar: float
    residual_entanglement: float

    def to_dict(self) -> dict:
        return {
            'type': 'VARIANCE',
            'total_variance': self.total_variance,
            'expectation_vector': [float(x) for x in self.expectation_vector],
            'casimir_scalar': self.casimir_scalar,
            'residual_entanglement': self.residual_entanglement,
        }


def _check(state: PureState, basis: OperatorBasis) -> np.ndarray:
    if state.dim != basis.dim:
        raise DimensionMismatchError(basis.dim, state.dim)
    return state.unit()


class FluctuationEngine:
    """Variance and coherence tests relative to a dynamical system."""

    @staticmethod
    def expectation_vector(state: PureState, basis: OperatorBasis) -> np.ndarray:
        """<X_i> for every generator, on the normalized state."""
        psi = _check(state, basis)
        return np.array([np.vdot(psi, x @ psi).real for x in basis.generators], dtype=float)

    @staticmethod
    def total_variance(state: PureState, basis: OperatorBasis) -> VarianceReport:
        psi = _check(state, basis)
        images = [x @ psi for x in basis.generators]
        means = np.array([np.vdot(psi, v).real for v in images], dtype=float)
        second = float(sum(np.vdot(v, v).real for v in images))
        casimir = RepresentationEngine.casimir(basis)
        c_scalar = float(np.vdot(psi, casimir @ psi).real)
        sq = float(np.dot(means, means))
        return VarianceReport(
            total_variance=second - sq,
            expectation_vector=means,
            casimir_scalar=c_scalar,
            residual_entanglement=math.sqrt(sq),
        )

    @staticmethod
    def entanglement_residual(state: PureState, basis: OperatorBasis) -> float:
        """|<X>|; zero exactly for completely entangled states."""
        means = FluctuationEngine.expectation_vector(state, basis)
        return float(np.linalg.norm(means))

    @staticmethod
    def coherence_residual(state: PureState, basis: OperatorBasis) -> float:
        """
        || Sum_i X_i psi (x) X_i psi - c psi (x) psi ||, c = Sum_i <X_i>^2.

        psi (x) phi is held as the outer product psi phi^T, so the norm is
        the Frobenius norm of a dim x dim matrix.
        """
        psi = _check(state, basis)
        if len(basis) == 0:
            return 0.0
        images = np.stack([x @ psi for x in basis.generators])
        means = images @ psi.conj()
        c = float(np.sum(means.real ** 2))
        tensor = images.T @ images - c * np.outer(psi, psi)
        return float(np.linalg.norm(tensor))

    @staticmethod
    def coherence_verdict(residual: float) -> str:
        if residual < COHERENT_TOL:
            return "coherent"
        if residual > NOT_COHERENT_TOL:
            return "not_coherent"
        return "indeterminate"

    # ── Spin systems ───────────────────────────────────────

    @staticmethod
    def spin_coherence_check(state: PureState, two_s: int) -> bool:
        """Sum_a <J_a>^2 == s^2, i.e. D(psi) == s."""
        basis = RepresentationEngine.spin_generators(two_s)
        means = FluctuationEngine.expectation_vector(state, basis)
        s = two_s / 2.0
        return abs(float(np.dot(means, means)) - s * s) <= COHERENT_TOL

    @staticmethod
    def spin_variance_bounds(two_s: int) -> Tuple[float, float]:
        """(s, s(s+1)): total variance of coherent and completely entangled spin states."""
        s = two_s / 2.0
        return s, s * (s + 1.0)

    @staticmethod
    def uncertainty_exceeds_projection(state: PureState, two_s: int) -> dict:
        """sqrt(D) against the largest spin projection s."""
        basis = RepresentationEngine.spin_generators(two_s)
        report = FluctuationEngine.total_variance(state, basis)
        s = two_s / 2.0
        std = math.sqrt(max(report.total_variance, 0.0))
        return {
            'type': 'SPIN_UNCERTAINTY',
            'std_dev': std,
            'max_projection': s,
            'exceeds': std > s,
        }
