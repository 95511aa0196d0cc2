"""
ent.bell - Pentagram inequality for spin 1 and the CHSH functional.

A spin-1 state is handled as a complex vector psi of E^3 (see
MajoranaEngine.spin1_to_cartesian). For a pentagram l_1..l_5 the
classical bound reads Sum_i |(l_i, psi)|^2 <= 2.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from gitangle.config import PARALLEL_TOL, UNIT_TOL, VIOLATION_TOL, SearchBudget
from gitangle.exceptions import (
    BudgetExhaustedError,
    DirectionError,
    FactorCountError,
    PentagramError,
    ValidationError,
)
from gitangle.modules.ent_majorana import MajoranaEngine
from gitangle.modules.ent_repn import RepresentationEngine
from gitangle.modules.ent_states import PureState

logger = logging.getLogger("gitangle.bell")

BASES = ("spin", "cartesian")
QUARTER_PI = math.pi / 4.0

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True, eq=False)
class Pentagram:
    """Five unit vectors, each orthogonal to the next (indices mod 5)."""
    vectors: np.ndarray

    def __post_init__(self):
        v = np.array(self.vectors, dtype=float)
        if v.shape != (5, 3):
            raise PentagramError(f"A pentagram has 5 vectors in 3-space, got shape {v.shape}.")
        if np.max(np.abs(np.linalg.norm(v, axis=1) - 1.0)) > 1e-12:
            raise PentagramError("Pentagram vectors must have unit length.")
        for i in range(5):
            if abs(float(v[i] @ v[(i + 1) % 5])) > 1e-10:
                raise PentagramError(f"Vectors {i + 1} and {(i + 1) % 5 + 1} are not orthogonal.")
        v.setflags(write=False)
        object.__setattr__(self, 'vectors', v)

    def to_dict(self) -> dict:
        return {'type': 'PENTAGRAM', 'vectors': self.vectors.tolist()}


@dataclass(frozen=True, eq=False)
class PentagramReport:
    operator_A: np.ndarray
    spectrum: Tuple[float, float, float]
    eigenvectors: np.ndarray            # columns, in spectrum order
    bell_value: Optional[float] = None
    violated: bool = False

    def to_dict(self) -> dict:
        return {
            'type': 'PENTAGRAM_REPORT',
            'operator_A': self.operator_A.tolist(),
            'spectrum': list(self.spectrum),
            'bell_value': self.bell_value,
            'violated': self.violated,
        }


@dataclass(frozen=True, eq=False)
class CanonicalFrame:
    """psi = exp(i phase) (cos(phi) m + i sin(phi) n), m and n orthonormal."""
    phi: float
    m: np.ndarray
    n: np.ndarray
    phase: float

    def to_dict(self) -> dict:
        return {
            'type': 'CANONICAL_FRAME',
            'phi': self.phi,
            'm': self.m.tolist(),
            'n': self.n.tolist(),
            'phase': self.phase,
        }


@dataclass(frozen=True, eq=False)
class ViolationResult:
    pentagram: Pentagram
    value: float
    evaluations: int
    phi: float

    def to_dict(self) -> dict:
        return {
            'type': 'VIOLATION',
            'value': self.value,
            'phi': self.phi,
            'evaluations': self.evaluations,
            'pentagram': self.pentagram.to_dict(),
        }


class _BudgetSpent(Exception):
    pass


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _vector(state: PureState, basis: str) -> np.ndarray:
    """Normalized E^3 (x) C vector of a spin-1 state."""
    if basis not in BASES:
        raise ValidationError(f"Unknown spin-1 basis '{basis}'. Use one of: {', '.join(BASES)}.")
    if state.dim != 3:
        raise FactorCountError("pentagram analysis", "a single spin-1 factor [3]", state.dims)
    if basis == "cartesian":
        return state.unit()
    v = MajoranaEngine.spin1_to_cartesian(state)
    return v / np.linalg.norm(v)


def _check_direction(name: str, d: Sequence[float]) -> np.ndarray:
    v = np.asarray(d, dtype=float)
    if v.shape != (3,):
        raise ValidationError(f"Direction {name} must have 3 components, got {v.shape}.")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > UNIT_TOL:
        raise DirectionError(name, norm)
    return v


class BellEngine:
    """Pentagram construction, spectra, violation search and CHSH."""

    # ── Construction ───────────────────────────────────────

    @staticmethod
    def make_pentagram(params: Sequence[float]) -> Pentagram:
        """
        (theta, phi, a2, a3, a4): l_1 from polar angles; l_2 turned by a2 in
        the plane orthogonal to l_1; l_3 = cos(a3) l_1 + sin(a3) l_1 x l_2;
        l_4 = cos(a4) l_2 + sin(a4) l_2 x l_3; l_5 = l_4 x l_1 normalized.
        """
        if len(params) != 5:
            raise ValidationError(f"make_pentagram takes 5 parameters, got {len(params)}.")
        theta, phi, a2, a3, a4 = (float(x) for x in params)
        st, ct, sp, cp = math.sin(theta), math.cos(theta), math.sin(phi), math.cos(phi)
        l1 = np.array([st * cp, st * sp, ct])
        e_theta = np.array([ct * cp, ct * sp, -st])
        e_phi = np.array([-sp, cp, 0.0])
        l2 = _unit(math.cos(a2) * e_theta + math.sin(a2) * e_phi)
        l3 = _unit(math.cos(a3) * l1 + math.sin(a3) * np.cross(l1, l2))
        l4 = _unit(math.cos(a4) * l2 + math.sin(a4) * np.cross(l2, l3))
        if abs(float(l4 @ l1)) > 1.0 - PARALLEL_TOL:
            raise PentagramError("l_4 is parallel to l_1, so l_5 is undefined. Change a3 or a4.")
        l5 = _unit(np.cross(l4, l1))
        return Pentagram(np.array([l1, l2, l3, l4, l5]))

    @staticmethod
    def pentagram_params(p: Pentagram) -> Tuple[float, ...]:
        """Parameters rebuilding p, up to the sign of l_5."""
        l1, l2, l3, l4, _ = p.vectors
        theta = math.acos(max(-1.0, min(1.0, float(l1[2]))))
        phi = math.atan2(float(l1[1]), float(l1[0]))
        st, ct, sp, cp = math.sin(theta), math.cos(theta), math.sin(phi), math.cos(phi)
        e_theta = np.array([ct * cp, ct * sp, -st])
        e_phi = np.array([-sp, cp, 0.0])
        a2 = math.atan2(float(l2 @ e_phi), float(l2 @ e_theta))
        a3 = math.atan2(float(l3 @ np.cross(l1, l2)), float(l3 @ l1))
        a4 = math.atan2(float(l4 @ np.cross(l2, l3)), float(l4 @ l2))
        return theta, phi, a2, a3, a4

    @staticmethod
    def regular_pentagram() -> Pentagram:
        """Star polygon around e_z: l_k at azimuth 4 pi k / 5."""
        c = math.cos(math.pi / 5.0)
        cos_b = math.sqrt(c / (1.0 + c))
        sin_b = math.sqrt(1.0 - cos_b ** 2)
        return Pentagram(np.array([
            [sin_b * math.cos(4.0 * math.pi * k / 5.0), sin_b * math.sin(4.0 * math.pi * k / 5.0), cos_b]
            for k in range(5)
        ]))

    @staticmethod
    def random_pentagram(rng: np.random.Generator) -> Pentagram:
        """Uniform l_1 on the sphere and uniform chain angles."""
        while True:
            theta = math.acos(rng.uniform(-1.0, 1.0))
            rest = rng.uniform(0.0, 2.0 * math.pi, size=4)
            try:
                return BellEngine.make_pentagram([theta, *rest])
            except PentagramError:
                continue

    @staticmethod
    def has_parallel_pair(p: Pentagram) -> bool:
        g = np.abs(p.vectors @ p.vectors.T)
        return bool(np.any(g[np.triu_indices(5, k=1)] > 1.0 - PARALLEL_TOL))

    # ── Spectral properties ────────────────────────────────

    @staticmethod
    def pentagram_operator(p: Pentagram) -> PentagramReport:
        """A = Sum_i |l_i><l_i| and its descending spectrum."""
        a = p.vectors.T @ p.vectors
        w, v = np.linalg.eigh(a)
        order = np.argsort(w)[::-1]
        spectrum = tuple(float(x) for x in w[order])
        return PentagramReport(operator_A=a, spectrum=spectrum, eigenvectors=v[:, order])

    @staticmethod
    def determinant_identity(p: Pentagram) -> Tuple[float, float]:
        """(det(A - I), 2 Prod_{i<j} sin^2 angle(l_i, l_j))."""
        a = p.vectors.T @ p.vectors
        lhs = float(np.linalg.det(a - np.eye(3)))
        g = p.vectors @ p.vectors.T
        rhs = 2.0 * float(np.prod(1.0 - g[np.triu_indices(5, k=1)] ** 2))
        return lhs, rhs

    @staticmethod
    def max_bell_value(phi: float, p: Pentagram) -> float:
        """Best value over orientations of p for a state with angle phi."""
        if not 0.0 <= phi <= QUARTER_PI + 1e-12:
            raise ValidationError(f"phi must lie in [0, pi/4] (|(psi, psi)| = cos 2 phi), got {phi!r}.")
        l1, l2, _ = BellEngine.pentagram_operator(p).spectrum
        return (l1 + l2) / 2.0 + (l1 - l2) / 2.0 * math.cos(2.0 * phi)

    # ── State functionals ──────────────────────────────────

    @staticmethod
    def bell_value(state: PureState, p: Pentagram, basis: str = "spin") -> float:
        """<psi|A|psi> = Sum_i |(l_i, psi)|^2."""
        psi = _vector(state, basis)
        return float(np.sum(np.abs(p.vectors @ psi) ** 2))

    @staticmethod
    def evaluate(state: PureState, p: Pentagram, basis: str = "spin") -> PentagramReport:
        report = BellEngine.pentagram_operator(p)
        value = BellEngine.bell_value(state, p, basis)
        return PentagramReport(
            operator_A=report.operator_A,
            spectrum=report.spectrum,
            eigenvectors=report.eigenvectors,
            bell_value=value,
            violated=value > 2.0 + VIOLATION_TOL,
        )

    @staticmethod
    def jsquare_form(state: PureState, p: Pentagram, basis: str = "spin") -> float:
        """Sum_i <J_{l_i}^2> with the spin-1 matrices; equals 5 - bell_value."""
        psi = _vector(state, basis)
        amps = MajoranaEngine.cartesian_to_spin1(psi).amplitudes
        gens = RepresentationEngine.spin_generators(2).stack()
        total = 0.0
        for l in p.vectors:
            j = np.tensordot(l, gens, axes=1)
            v = j @ amps
            total += float(np.vdot(v, v).real)
        return total

    @staticmethod
    def reflection_form(state: PureState, p: Pentagram, basis: str = "spin") -> float:
        """Sum_i <S_i S_{i+1}> + 3 with S_l = 1 - 2|l><l|; classically >= 0."""
        psi = _vector(state, basis)
        refl = [np.eye(3) - 2.0 * np.outer(l, l) for l in p.vectors]
        total = sum(np.vdot(psi, refl[i] @ refl[(i + 1) % 5] @ psi).real for i in range(5))
        return float(total) + 3.0

    @staticmethod
    def classical_pentagram_bound() -> int:
        """min of s1 s2 + s2 s3 + ... + s5 s1 + 3 over s_i = +-1."""
        return min(
            sum(s[i] * s[(i + 1) % 5] for i in range(5)) + 3
            for s in itertools.product((1, -1), repeat=5)
        )

    # ── Violation search ───────────────────────────────────

    @staticmethod
    def canonical_frame(state: PureState, basis: str = "spin") -> CanonicalFrame:
        """phi in [0, pi/4] with |(psi, psi)| = cos 2 phi."""
        psi = _vector(state, basis)
        gamma = 0.5 * float(np.angle(np.sum(psi * psi)))
        rotated = np.exp(-1j * gamma) * psi
        re, im = rotated.real, rotated.imag
        a, b = float(np.linalg.norm(re)), float(np.linalg.norm(im))
        m = re / a
        if b > 1e-12:
            n = im / b
        else:
            # real state: any unit vector orthogonal to m
            helper = np.eye(3)[int(np.argmin(np.abs(m)))]
            n = _unit(np.cross(m, helper))
        return CanonicalFrame(phi=min(math.atan2(b, a), QUARTER_PI), m=m, n=n, phase=gamma)

    @staticmethod
    def align(p: Pentagram, frame: CanonicalFrame) -> Pentagram:
        """Rotate p so its top two eigenvectors land on frame.m and frame.n."""
        v = BellEngine.pentagram_operator(p).eigenvectors
        source = np.column_stack([v[:, 0], v[:, 1], np.cross(v[:, 0], v[:, 1])])
        target = np.column_stack([frame.m, frame.n, np.cross(frame.m, frame.n)])
        rotated = p.vectors @ (target @ source.T).T
        return Pentagram(rotated / np.linalg.norm(rotated, axis=1, keepdims=True))

    @staticmethod
    def search_starts(budget: SearchBudget) -> List[Tuple[float, float]]:
        """
        (a3, a4) starting shapes: the regular pentagram, then degenerate
        chains (l_3 = l_1, spectrum {2, 2, 1}) opened by eps on a log grid.
        """
        regular = BellEngine.pentagram_params(BellEngine.regular_pentagram())
        starts = [(regular[3], regular[4])]
        grid = budget.eps_grid()
        per_eps = max(1, budget.starts // len(grid))
        for eps in grid:
            for a4 in np.linspace(0.0, math.pi, per_eps + 2)[1:-1]:
                starts.append((float(eps), float(a4)))
        return starts

    @staticmethod
    def search_violation(state: PureState, budget: Optional[SearchBudget] = None,
                         basis: str = "spin") -> Optional[ViolationResult]:
        """
        Pentagram with bell_value > 2 for a noncoherent spin-1 state.

        theta, phi and a2 only rotate a pentagram, and the best rotation is
        known in closed form (align), so the local search runs over the
        shape angles (a3, a4) on max_bell_value and the winner is aligned
        with the canonical frame. Returns None for phi >= pi/4 - margin.
        """
        budget = budget or SearchBudget()
        frame = BellEngine.canonical_frame(state, basis)
        if frame.phi >= math.pi / 4.0 - budget.margin:
            logger.info("SEARCH_SKIPPED phi=%.9f reason=coherent", frame.phi)
            return None

        count = [0]
        best = [-math.inf, None]

        def objective(shape: np.ndarray) -> float:
            if count[0] >= budget.max_evaluations:
                raise _BudgetSpent()
            count[0] += 1
            params = [0.0, 0.0, 0.0, float(shape[0]), float(shape[1])]
            try:
                value = BellEngine.max_bell_value(frame.phi, BellEngine.make_pentagram(params))
            except PentagramError:
                return 0.0
            if value > best[0]:
                best[0], best[1] = value, params
            return -value

        for start in BellEngine.search_starts(budget):
            try:
                optimize.minimize(objective, np.array(start), method="Powell",
                                  options={'maxfev': budget.refine_iters, 'xtol': 1e-10, 'ftol': 1e-14})
            except _BudgetSpent:
                break

        if best[1] is None or best[0] <= 2.0 + VIOLATION_TOL:
            logger.warning("SEARCH_INCONCLUSIVE phi=%.9f best=%.12f evaluations=%d",
                           frame.phi, best[0], count[0])
            raise BudgetExhaustedError("pentagram violation search", best[0], budget.max_evaluations)

        aligned = BellEngine.align(BellEngine.make_pentagram(best[1]), frame)
        value = BellEngine.bell_value(state, aligned, basis)
        logger.info("SEARCH_DONE phi=%.9f value=%.12f evaluations=%d", frame.phi, value, count[0])
        return ViolationResult(pentagram=aligned, value=value, evaluations=count[0], phi=frame.phi)

    # ── CHSH ───────────────────────────────────────────────

    @staticmethod
    def chsh_value(state: PureState, a1: Sequence[float], a2: Sequence[float],
                   b1: Sequence[float], b2: Sequence[float]) -> float:
        """<A1B1> + <A2B1> + <A2B2> - <A1B2> + 2 with A = a.sigma; classically >= 0."""
        if tuple(state.dims) != (2, 2):
            raise FactorCountError("chsh_value", "two qubit factors [2, 2]", state.dims)
        ops = {}
        for name, d in (("a1", a1), ("a2", a2), ("b1", b1), ("b2", b2)):
            v = _check_direction(name, d)
            ops[name] = np.tensordot(v, np.array(PAULI), axes=1)
        psi = state.unit()

        def corr(a: np.ndarray, b: np.ndarray) -> float:
            return float(np.vdot(psi, np.kron(a, b) @ psi).real)

        return (corr(ops["a1"], ops["b1"]) + corr(ops["a2"], ops["b1"])
                + corr(ops["a2"], ops["b2"]) - corr(ops["a1"], ops["b2"]) + 2.0)

    @staticmethod
    def chsh_optimal_directions() -> Tuple[np.ndarray, ...]:
        """a1, a2, b1, b2 at 0, 90, 45 and 135 degrees in the x-z plane."""
        def direction(deg: float) -> np.ndarray:
            t = math.radians(deg)
            return np.array([math.sin(t), 0.0, math.cos(t)])

        return direction(0.0), direction(90.0), direction(45.0), direction(135.0)
