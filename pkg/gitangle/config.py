"""
gitangle - configuration, tolerances and parameter sets.
"""

from dataclasses import dataclass, field, asdict
from typing import List

# ── Size limits ───────────────────────────────────────────

DIMENSION_CAP = 4096

# ── Tolerances ────────────────────────────────────────────

HERMITIAN_TOL = 1e-12
ORTHONORMAL_TOL = 1e-10
CLOSURE_TOL = 1e-9
NORM_TOL = 1e-12
FILE_NORM_TOL = 1e-6
PSD_CLIP = 1e-10

COHERENT_TOL = 1e-8         # residual below: coherent
NOT_COHERENT_TOL = 1e-6     # residual above: not coherent

ROOT_LEADING_TOL = 1e-12    # relative to the coefficient norm
ROOT_CLUSTER_TOL = 1e-6     # chordal distance on the sphere

EIGEN_ZERO_TOL = 1e-12      # relative to the largest eigenvalue magnitude
NULL_CERTIFY_RATIO = 1e-2   # flow checks its ray bound once norm^2 has fallen below this fraction

PARALLEL_TOL = 1e-9
VIOLATION_TOL = 1e-10
UNIT_TOL = 1e-9

DEFAULT_SEED = 20240607


# ── Parameter sets ────────────────────────────────────────

@dataclass(frozen=True)
class FlowParams:
    """Step policy and stopping rules of the Kempf-Ness flow."""
    step: float = 0.5
    max_iters: int = 10000
    grad_tol: float = 1e-9
    null_tol: float = 1e-6
    backtracking: float = 0.5
    armijo: float = 1e-4
    max_backtracks: int = 60

    def __post_init__(self):
        from .exceptions import ValidationError
        if self.step <= 0 or self.grad_tol <= 0 or self.null_tol <= 0:
            raise ValidationError("FlowParams: step, grad_tol and null_tol must be positive.")
        if self.max_iters < 1 or self.max_backtracks < 1:
            raise ValidationError("FlowParams: max_iters and max_backtracks must be at least 1.")
        if not 0.0 < self.backtracking < 1.0:
            raise ValidationError("FlowParams: backtracking must lie strictly between 0 and 1.")
        if self.null_tol >= 1.0:
            raise ValidationError("FlowParams: null_tol must be below 1 (it bounds a squared norm).")
        if not 0.0 < self.armijo < 1.0:
            raise ValidationError("FlowParams: armijo must lie strictly between 0 and 1.")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SearchBudget:
    """Budget of the pentagram violation search."""
    max_evaluations: int = 20000
    refine_iters: int = 400     # function evaluations per local refinement
    starts: int = 40            # perturbed degenerate starts, spread over the eps grid
    eps_min: float = 1e-3
    eps_max: float = 0.3
    eps_points: int = 8
    margin: float = 1e-6        # states with phi > pi/4 - margin count as coherent

    def __post_init__(self):
        from .exceptions import ValidationError
        if self.max_evaluations < 1 or self.refine_iters < 1 or self.starts < 1:
            raise ValidationError("SearchBudget: max_evaluations, refine_iters and starts must be at least 1.")
        if not 0.0 < self.eps_min <= self.eps_max or self.eps_points < 1:
            raise ValidationError("SearchBudget: need 0 < eps_min <= eps_max and eps_points >= 1.")
        if self.margin < 0:
            raise ValidationError("SearchBudget: margin must be nonnegative.")

    def eps_grid(self) -> List[float]:
        """Log-spaced opening angles of the degenerate starts."""
        if self.eps_points == 1:
            return [self.eps_min]
        ratio = (self.eps_max / self.eps_min) ** (1.0 / (self.eps_points - 1))
        return [self.eps_min * ratio ** k for k in range(self.eps_points)]

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Settings:
    """Everything a CLI run can configure."""
    dimension_cap: int = DIMENSION_CAP
    seed: int = DEFAULT_SEED
    flow: FlowParams = field(default_factory=FlowParams)
    search: SearchBudget = field(default_factory=SearchBudget)

    def __post_init__(self):
        from .exceptions import ValidationError
        if self.dimension_cap < 1:
            raise ValidationError("Settings: dimension_cap must be at least 1.")
        if self.seed < 0:
            raise ValidationError(f"Settings: seed must be a nonnegative integer, got {self.seed}.")

    def to_dict(self) -> dict:
        return {
            'dimension_cap': self.dimension_cap,
            'seed': self.seed,
            'flow': self.flow.to_dict(),
            'search': self.search.to_dict(),
        }
