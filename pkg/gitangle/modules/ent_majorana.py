"""
ent.majorana - Binary-form (Majorana) picture of spin states.

A spin-s state with amplitudes c_0..c_{2s} in the basis |s>, ..., |-s>
is the binary form f(x, y) whose coefficient of x^(2s-i) y^i is
c_i sqrt(C(2s, i)). Roots are taken in z = y/x, i.e. as the zeros of the
polynomial g(z) = Sum_i c_i sqrt(C(2s, i)) z^i; a missing top degree
means roots at infinity. |+s> therefore has all roots at infinity, which
the stereographic map sends to the north pole (0, 0, 1).

Under exp(i theta J_z) and exp(i theta J_y) the star points rotate by
+theta about the z and y axes respectively.
"""

import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from gitangle.config import ROOT_LEADING_TOL
from gitangle.exceptions import DimensionMismatchError, ValidationError, ZeroStateError
from gitangle.modules.ent_states import PureState

UNSTABLE = "unstable"
SEMISTABLE_NOT_STABLE = "semistable_not_stable"
STABLE = "stable"

SQRT_HALF = 1.0 / math.sqrt(2.0)

# columns: |+1>, |0>, |-1> in Cartesian coordinates with the Condon-Shortley
# phases of the J matrices; in the frame l = e_z, m = -e_x, n = -e_y this is
# |+1> = (m + in)/sqrt 2, |0> = l, |-1> = -(m - in)/sqrt 2, so that
# (psi, psi) = c_0^2 - 2 c_+1 c_-1
SPIN1_TO_CARTESIAN = np.array([
    [-SQRT_HALF, 0.0, SQRT_HALF],
    [-1j * SQRT_HALF, 0.0, -1j * SQRT_HALF],
    [0.0, 1.0, 0.0],
], dtype=complex)


@dataclass(frozen=True)
class RootConfiguration:
    """Roots of the binary form; infinity is counted separately."""
    finite_roots: Tuple[complex, ...]
    infinity_multiplicity: int
    two_s: int

    def __post_init__(self):
        object.__setattr__(self, 'finite_roots', tuple(complex(z) for z in self.finite_roots))
        if self.infinity_multiplicity < 0:
            raise ValidationError("infinity_multiplicity must be nonnegative.")
        if len(self.finite_roots) + self.infinity_multiplicity != self.two_s:
            raise ValidationError(
                f"{len(self.finite_roots)} finite roots + {self.infinity_multiplicity} at infinity "
                f"do not add up to two_s = {self.two_s}."
            )

    def to_dict(self) -> dict:
        return {
            'type': 'ROOTS',
            'two_s': self.two_s,
            'finite_roots': [[z.real, z.imag] for z in self.finite_roots],
            'infinity_multiplicity': self.infinity_multiplicity,
        }


@dataclass(frozen=True, eq=False)
class StarPoints:
    """Unit vectors of S^2, one per root."""
    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).reshape(-1, 3)
        if pts.size and np.max(np.abs(np.linalg.norm(pts, axis=1) - 1.0)) > 1e-12:
            raise ValidationError("Star points must be unit vectors.")
        pts.setflags(write=False)
        object.__setattr__(self, 'points', pts)

    def total(self) -> np.ndarray:
        return self.points.sum(axis=0) if self.points.size else np.zeros(3)

    def to_dict(self) -> dict:
        return {'type': 'STAR_POINTS', 'points': self.points.tolist()}


class Spin1Invariants(NamedTuple):
    bilinear_square: complex
    cross_norm: float
    phi: float


def _check_spin(state: PureState, two_s: int):
    if state.dim != two_s + 1:
        raise DimensionMismatchError(two_s + 1, state.dim, what="spin state")


class MajoranaEngine:
    """Roots, stars and Hilbert-Mumford multiplicities of spin states."""

    # ── Forms and roots ────────────────────────────────────

    @staticmethod
    def polynomial(state: PureState, two_s: int) -> np.ndarray:
        """Ascending coefficients g_i of g(z)."""
        _check_spin(state, two_s)
        weights = np.sqrt([math.comb(two_s, i) for i in range(two_s + 1)])
        return state.amplitudes * weights

    @staticmethod
    def to_roots(state: PureState, two_s: int) -> RootConfiguration:
        """Companion-matrix roots of g(z) after balancing."""
        g = MajoranaEngine.polynomial(state, two_s)
        scale = float(np.linalg.norm(g))
        if scale == 0.0:
            raise ZeroStateError("Root extraction")
        # negligible leading coefficients become roots at infinity; only exact
        # zeros at the low end count as roots at 0
        degree = int(np.nonzero(np.abs(g) > ROOT_LEADING_TOL * scale)[0][-1])
        low = int(np.nonzero(g)[0][0])
        roots = [0j] * low
        core = g[low:degree + 1]
        k = len(core) - 1
        if k > 0:
            companion = np.zeros((k, k), dtype=complex)
            companion[1:, :-1] = np.eye(k - 1)
            companion[:, -1] = -core[:-1] / core[-1]
            balanced, _ = linalg.matrix_balance(companion, permute=False)
            roots.extend(complex(z) for z in linalg.eigvals(balanced))
        return RootConfiguration(tuple(roots), two_s - degree, two_s)

    @staticmethod
    def from_roots(config: RootConfiguration) -> PureState:
        """Normalized state whose form has exactly these roots."""
        two_s = config.two_s
        g = np.zeros(two_s + 1, dtype=complex)
        ascending = np.poly(np.array(config.finite_roots, dtype=complex))[::-1] \
            if config.finite_roots else np.array([1.0 + 0j])
        g[:len(ascending)] = ascending
        weights = np.sqrt([math.comb(two_s, i) for i in range(two_s + 1)])
        amps = g / weights
        return PureState((two_s + 1,), amps / np.linalg.norm(amps), label="from_roots")

    # ── Stars ──────────────────────────────────────────────

    @staticmethod
    def star_point(z: Optional[complex]) -> np.ndarray:
        """Inverse stereographic image of z; None stands for infinity."""
        if z is None:
            return np.array([0.0, 0.0, 1.0])
        r2 = abs(z) ** 2
        d = 1.0 + r2
        return np.array([2.0 * z.real / d, 2.0 * z.imag / d, (r2 - 1.0) / d])

    @staticmethod
    def star_points(config: RootConfiguration) -> StarPoints:
        pts = [MajoranaEngine.star_point(z) for z in config.finite_roots]
        pts += [MajoranaEngine.star_point(None)] * config.infinity_multiplicity
        return StarPoints(np.array(pts) if pts else np.zeros((0, 3)))

    @staticmethod
    def star_sum(stars: StarPoints) -> np.ndarray:
        return stars.total()

    @staticmethod
    def balance_residual(state: PureState, two_s: int) -> float:
        """|Sum of star points|; zero for completely entangled spin states."""
        stars = MajoranaEngine.star_points(MajoranaEngine.to_roots(state, two_s))
        return float(np.linalg.norm(MajoranaEngine.star_sum(stars)))

    # ── Hilbert-Mumford ────────────────────────────────────

    @staticmethod
    def multiplicities(config: RootConfiguration, cluster_tol: Optional[float] = None) -> List[int]:
        """
        Multiplicities of coincident roots, largest first.

        With cluster_tol None roots must be exactly equal; otherwise points
        closer than cluster_tol in chordal distance are merged.
        """
        if cluster_tol is None:
            counts = {}
            for z in config.finite_roots:
                counts[z] = counts.get(z, 0) + 1
            mults = list(counts.values())
            if config.infinity_multiplicity:
                mults.append(config.infinity_multiplicity)
            return sorted(mults, reverse=True)

        pts = MajoranaEngine.star_points(config).points
        parent = list(range(len(pts)))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if np.linalg.norm(pts[i] - pts[j]) < cluster_tol:
                    parent[find(i)] = find(j)
        counts = {}
        for i in range(len(pts)):
            root = find(i)
            counts[root] = counts.get(root, 0) + 1
        return sorted(counts.values(), reverse=True)

    @staticmethod
    def hm_classify(config: RootConfiguration, cluster_tol: Optional[float] = None) -> str:
        """
        More than half of the roots coinciding means unstable, fewer than
        half means stable. Exactly half is semistable but not stable unless
        the rest coincide too (two antipodal-able points), which is stable.
        """
        if config.two_s == 0:
            return STABLE
        mults = MajoranaEngine.multiplicities(config, cluster_tol)
        top = mults[0]
        if 2 * top > config.two_s:
            return UNSTABLE
        if 2 * top < config.two_s:
            return STABLE
        return STABLE if len(mults) == 2 else SEMISTABLE_NOT_STABLE

    # ── Spin 1 as E^3 (x) C ────────────────────────────────

    @staticmethod
    def spin1_to_cartesian(state: PureState) -> np.ndarray:
        _check_spin(state, 2)
        return SPIN1_TO_CARTESIAN @ state.amplitudes

    @staticmethod
    def cartesian_to_spin1(vector: Sequence[complex], label: str = "") -> PureState:
        v = np.asarray(vector, dtype=complex)
        if v.shape != (3,):
            raise ValidationError(f"A spin-1 Cartesian vector has 3 components, got {v.shape}.")
        amps = SPIN1_TO_CARTESIAN.conj().T @ v
        norm = np.linalg.norm(amps)
        if norm == 0.0:
            raise ZeroStateError("cartesian_to_spin1")
        return PureState((3,), amps / norm, label=label)

    @staticmethod
    def spin1_invariants(vector: Sequence[complex]) -> Spin1Invariants:
        """(psi, psi), |[psi, psi*]| and phi with |(psi, psi)| = cos 2 phi."""
        v = np.asarray(vector, dtype=complex)
        norm = np.linalg.norm(v)
        if norm == 0.0:
            raise ZeroStateError("spin1_invariants")
        v = v / norm
        bilinear = complex(np.sum(v * v))
        cross = float(np.linalg.norm(np.cross(v, v.conj())))
        phi = 0.5 * math.acos(min(abs(bilinear), 1.0))
        return Spin1Invariants(bilinear, cross, phi)
