"""
ent.orbit - Kempf-Ness flow over the complexified dynamical group.

The flow descends ||g psi||^2 along the non-compact directions
exp(-eta Sum_i m_i X_i), where m_i = <X_i> on the normalized iterate is
the moment map. d/dt ||exp(tX) psi||^2 at t = 0 equals
2 <X>_psi_hat ||psi||^2, so m is the gradient up to the factor 2||psi||^2.

Along any ray exp(-tX) psi the squared norm is a convex sum of
exponentials in t, and its infimum over t >= 0 bounds mu(psi) from above.
Once the iterate has shrunk, the flow evaluates that infimum along its own
direction and, when it lies below null_tol, steps to the bottom of the ray
at once, before roundoff can move the iterate onto a nearby closed orbit.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import optimize, special

from gitangle.config import EIGEN_ZERO_TOL, NULL_CERTIFY_RATIO, FlowParams
from gitangle.exceptions import DimensionMismatchError, NumericalFailureError
from gitangle.modules.ent_fluct import FluctuationEngine
from gitangle.modules.ent_repn import OperatorBasis, RepresentationEngine
from gitangle.modules.ent_states import PureState

logger = logging.getLogger("gitangle.orbit")

COHERENT = "coherent"
UNSTABLE = "unstable"
SEMISTABLE_BOUNDARY = "semistable_boundary"
STABLE = "stable"
STABILITY_LABELS = (COHERENT, UNSTABLE, SEMISTABLE_BOUNDARY, STABLE)

MAX_EXPONENT = 300.0  # exp(2 x) stays below the largest double


@dataclass(frozen=True, eq=False)
class OrbitResult:
    minimal_vector: PureState
    concurrence: float
    stability: str
    iterations: int
    final_gradient_norm: float
    norm_history: Tuple[float, ...]
    converged: bool = False
    backtrack_failures: int = 0
    null_bound: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            'type': 'ORBIT',
            'concurrence': self.concurrence,
            'stability': self.stability,
            'iterations': self.iterations,
            'final_gradient_norm': self.final_gradient_norm,
            'final_norm2': self.norm_history[-1],
            'converged': self.converged,
            'backtrack_failures': self.backtrack_failures,
            'null_bound': self.null_bound,
            'minimal_vector': self.minimal_vector.to_dict(),
        }


def _ray_minimum(weights: np.ndarray, w: np.ndarray) -> Tuple[float, float]:
    """
    (inf, argmin) over t >= 0 of Sum_k weights_k exp(-2 t w_k); the argmin
    is inf when the infimum is only approached.
    """
    total = float(np.sum(weights))
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    if total == 0.0 or scale == 0.0:
        return total, 0.0
    flat = np.abs(w) <= EIGEN_ZERO_TOL * scale
    rising = (w < 0.0) & ~flat & (weights > 0.0)
    if not np.any(rising):
        return float(np.sum(weights[flat])), math.inf
    # beyond t_hi the rising terms alone exceed the value at t = 0
    t_hi = math.log(total / float(np.sum(weights[rising]))) / (2.0 * float(np.min(-w[rising])))
    if t_hi <= 0.0:
        return total, 0.0
    live = weights > 0.0
    log_w, w_live = np.log(weights[live]), w[live]
    best = optimize.minimize_scalar(
        lambda t: float(special.logsumexp(log_w - 2.0 * t * w_live)),
        bounds=(0.0, t_hi), method="bounded",
    )
    value = math.exp(best.fun)
    if value >= total:
        return total, 0.0
    return value, float(best.x)


class OrbitEngine:
    """Minimal vectors, generalized concurrence and stability."""

    @staticmethod
    def ray_bound(state: PureState, basis: OperatorBasis,
                  direction: Optional[Sequence[float]] = None) -> float:
        """
        inf over t >= 0 of ||exp(-tX) psi||^2 for X = Sum c_i X_i, by default
        along the moment map. Always an upper bound on mu(psi) ||psi||^2.
        """
        if state.dim != basis.dim:
            raise DimensionMismatchError(basis.dim, state.dim)
        coeffs = OrbitEngine.gradient(state, basis) if direction is None else direction
        w, v = np.linalg.eigh(basis.combine(coeffs))
        weights = np.abs(v.conj().T @ state.amplitudes) ** 2
        return _ray_minimum(weights, w)[0]

    @staticmethod
    def gradient(state: PureState, basis: OperatorBasis) -> np.ndarray:
        """Moment map: <X_i> on the normalized state."""
        return FluctuationEngine.expectation_vector(state, basis)

    @staticmethod
    def finite_difference_gradient(state: PureState, basis: OperatorBasis,
                                   direction: Sequence[float],
                                   eps: float = 1e-6) -> Tuple[float, float]:
        """
        Central difference of ||exp(tX) psi||^2 at t = 0 for X = Sum c_i X_i,
        returned with the analytic value 2 <X> ||psi||^2.
        """
        if state.dim != basis.dim:
            raise DimensionMismatchError(basis.dim, state.dim)
        x = basis.combine(direction)
        w, v = np.linalg.eigh(x)
        coeff = v.conj().T @ state.amplitudes

        def norm2(t: float) -> float:
            return float(np.sum(np.exp(2.0 * t * w) * np.abs(coeff) ** 2))

        fd = (norm2(eps) - norm2(-eps)) / (2.0 * eps)
        psi = state.amplitudes
        analytic = 2.0 * float(np.vdot(psi, x @ psi).real)
        return fd, analytic

    @staticmethod
    def kempf_ness_flow(state: PureState, basis: OperatorBasis,
                        params: Optional[FlowParams] = None) -> OrbitResult:
        """
        Gradient flow towards the minimal vector of the complex orbit.

        Stops when the moment map norm reaches grad_tol, when the squared
        norm falls below null_tol, or after max_iters. A small iterate whose
        ray bound is already below null_tol takes the whole ray in one step;
        that and every Armijo-accepted step decrease the norm, so
        norm_history is nonincreasing. null_bound is the smallest ray bound
        seen, relative to the starting norm.
        """
        params = params or FlowParams()
        if state.dim != basis.dim:
            raise DimensionMismatchError(basis.dim, state.dim)

        psi = np.array(state.amplitudes, dtype=complex)
        norm2 = float(np.vdot(psi, psi).real)
        start = norm2
        history = [norm2]
        gens = basis.stack()
        converged = False
        failures = 0
        grad_norm = 0.0
        iters = 0
        bound = None

        for iters in range(params.max_iters + 1):
            unit = psi / np.linalg.norm(psi)
            means = np.array([np.vdot(unit, x @ unit).real for x in gens], dtype=float)
            grad_norm = float(np.linalg.norm(means))
            if grad_norm <= params.grad_tol:
                converged = True
                break
            if norm2 / start < params.null_tol or iters == params.max_iters:
                break

            w, v = np.linalg.eigh(np.tensordot(means, gens, axes=1))
            coeff = v.conj().T @ psi
            weights = np.abs(coeff) ** 2
            if norm2 < NULL_CERTIFY_RATIO * start:
                ray, t_min = _ray_minimum(weights, w)
                bound = ray if bound is None else min(bound, ray)
                if ray < params.null_tol * start and math.isfinite(t_min):
                    # bottom of the ray; exponents of zero-weight terms are clipped
                    scaled = np.exp(np.minimum(-t_min * w, MAX_EXPONENT))
                    psi = v @ (scaled * coeff)
                    norm2 = float(np.sum(weights * scaled ** 2))
                    history.append(norm2)
                    logger.debug("FLOW_RAY_STEP iter=%d t=%.3g norm2=%.3g", iters, t_min, norm2 / start)
                    continue
            target = 2.0 * params.armijo * grad_norm ** 2 * norm2
            eta = params.step
            accepted = False
            for _ in range(params.max_backtracks):
                # change of ||psi||^2, accurate even below the roundoff of norm2
                change = float(np.sum(weights * np.expm1(-2.0 * eta * w)))
                if not np.isfinite(change):
                    raise NumericalFailureError("kempf_ness_flow", iters)
                if change <= -target * eta:
                    accepted = True
                    break
                eta *= params.backtracking
            if not accepted:
                failures += 1
                logger.warning("FLOW_BACKTRACK_EXHAUSTED iter=%d grad=%.3g", iters, grad_norm)
                break
            psi = v @ (np.exp(-eta * w) * coeff)
            if not np.all(np.isfinite(psi)):
                raise NumericalFailureError("kempf_ness_flow", iters)
            norm2 = norm2 + change
            history.append(norm2)

        mu = norm2 / start
        null_bound = None if bound is None else bound / start
        if mu < params.null_tol:
            stability = UNSTABLE
        elif converged:
            stability = STABLE
        else:
            stability = SEMISTABLE_BOUNDARY

        logger.info("FLOW_DONE system=%s iters=%d norm2=%.6g grad=%.3g stability=%s",
                    basis.label, iters, mu, grad_norm, stability)
        return OrbitResult(
            minimal_vector=PureState(state.dims, psi, normalized=False, label=state.label),
            concurrence=float(min(max(mu, 0.0), 1.0)),
            stability=stability,
            iterations=iters,
            final_gradient_norm=grad_norm,
            norm_history=tuple(history),
            converged=converged,
            backtrack_failures=failures,
            null_bound=null_bound,
        )

    @staticmethod
    def is_coherent(state: PureState, basis: OperatorBasis) -> bool:
        """Exact spin test for spin systems, quadratic-equation test otherwise."""
        two_s = RepresentationEngine.spin_of(basis)
        if two_s is not None:
            return FluctuationEngine.spin_coherence_check(state, two_s)
        residual = FluctuationEngine.coherence_residual(state, basis)
        return FluctuationEngine.coherence_verdict(residual) == COHERENT

    @staticmethod
    def analyse(state: PureState, basis: OperatorBasis,
                params: Optional[FlowParams] = None) -> OrbitResult:
        """Flow result with the final stability label and concurrence."""
        result = OrbitEngine.kempf_ness_flow(state, basis, params)
        if OrbitEngine.is_coherent(state, basis):
            return _relabel(result, COHERENT, 0.0)
        if result.stability == UNSTABLE:
            return _relabel(result, UNSTABLE, 0.0)
        return result

    @staticmethod
    def concurrence(state: PureState, basis: OperatorBasis,
                    params: Optional[FlowParams] = None) -> float:
        """mu(psi) = inf ||g psi||^2 over the complexified group."""
        return OrbitEngine.analyse(state, basis, params).concurrence

    @staticmethod
    def classify(state: PureState, basis: OperatorBasis,
                 params: Optional[FlowParams] = None) -> str:
        return OrbitEngine.analyse(state, basis, params).stability


def _relabel(result: OrbitResult, stability: str, mu: float) -> OrbitResult:
    return OrbitResult(
        minimal_vector=result.minimal_vector,
        concurrence=mu,
        stability=stability,
        iterations=result.iterations,
        final_gradient_norm=result.final_gradient_norm,
        norm_history=result.norm_history,
        converged=result.converged,
        backtrack_failures=result.backtrack_failures,
        null_bound=result.null_bound,
    )
