"""
ent.states - Pure states on factored Hilbert spaces for gitangle.

Amplitudes are indexed row-major by multi-index with factor 0 slowest,
i.e. the order of ``numpy.reshape(amplitudes, dims)``.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from gitangle.config import HERMITIAN_TOL, NORM_TOL, PSD_CLIP
from gitangle.exceptions import (
    FactorCountError,
    FactorIndexError,
    StateNormError,
    ValidationError,
    ZeroStateError,
)


@dataclass(frozen=True, eq=False)
class PureState:
    """Amplitude vector over a tensor-factored space."""
    dims: Tuple[int, ...]
    amplitudes: np.ndarray
    normalized: bool = True     # False marks intermediate (unnormalized) iterates
    label: str = ""

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ValidationError(f"dims must be a nonempty list of positive integers, got {list(self.dims)}.")
        amps = np.array(self.amplitudes, dtype=complex).ravel()
        if amps.size != int(np.prod(dims)):
            raise ValidationError(
                f"{amps.size} amplitudes given for dims {list(dims)}; expected {int(np.prod(dims))}."
            )
        if not np.all(np.isfinite(amps)):
            raise ValidationError("Amplitudes must be finite numbers.")
        if self.normalized:
            norm = float(np.linalg.norm(amps))
            if abs(norm - 1.0) > NORM_TOL:
                raise StateNormError(norm, NORM_TOL)
        amps.setflags(write=False)
        object.__setattr__(self, 'dims', dims)
        object.__setattr__(self, 'amplitudes', amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def n_factors(self) -> int:
        return len(self.dims)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def unit(self) -> np.ndarray:
        """Normalized amplitude vector."""
        n = self.norm
        if n == 0.0:
            raise ZeroStateError("Normalization")
        return self.amplitudes / n

    def to_dict(self) -> dict:
        return {
            'type': 'PURE_STATE',
            'dims': list(self.dims),
            'amplitudes': [[float(z.real), float(z.imag)] for z in self.amplitudes],
            'unnormalized': not self.normalized,
            'label': self.label,
        }


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian positive semidefinite matrix with unit trace."""
    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (self.dim, self.dim):
            raise ValidationError(f"Density matrix shape {m.shape} does not match dim {self.dim}.")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ValidationError("Density matrix is not Hermitian.")
        if abs(np.trace(m).real - 1.0) > PSD_CLIP:
            raise ValidationError(f"Density matrix has trace {np.trace(m).real:.12g}, expected 1.")
        m.setflags(write=False)
        object.__setattr__(self, 'matrix', m)

    def eigenvalues(self) -> np.ndarray:
        """Descending spectrum, with numerical noise in [-PSD_CLIP, 0) clamped to 0."""
        ev = np.linalg.eigvalsh(self.matrix)[::-1]
        return np.where((ev < 0.0) & (ev >= -PSD_CLIP), 0.0, ev)

    def expectation(self, op: np.ndarray) -> float:
        return float(np.real(np.trace(self.matrix @ op)))

    def to_dict(self) -> dict:
        return {
            'type': 'DENSITY_MATRIX',
            'dim': self.dim,
            'matrix': [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix],
            'eigenvalues': [float(x) for x in self.eigenvalues()],
        }


@dataclass(frozen=True, eq=False)
class SchmidtData:
    """psi = Sum_i c_i left_i (x) right_i with c nonincreasing."""
    coefficients: np.ndarray
    left_basis: np.ndarray      # columns
    right_basis: np.ndarray     # columns

    def reconstruct(self) -> np.ndarray:
        out = np.zeros(self.left_basis.shape[0] * self.right_basis.shape[0], dtype=complex)
        for i, c in enumerate(self.coefficients):
            out += c * np.kron(self.left_basis[:, i], self.right_basis[:, i])
        return out

    @property
    def rank(self) -> int:
        return int(np.sum(self.coefficients > 1e-12))

    def to_dict(self) -> dict:
        return {
            'type': 'SCHMIDT',
            'coefficients': [float(c) for c in self.coefficients],
            'rank': self.rank,
        }


class StateEngine:
    """Constructs and analyses pure states."""

    # ── Construction ───────────────────────────────────────

    @staticmethod
    def from_amplitudes(dims: Sequence[int], amplitudes: Sequence[complex],
                        label: str = "", normalize: bool = True) -> PureState:
        amps = np.array(amplitudes, dtype=complex).ravel()
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0.0:
                raise ZeroStateError("Normalization")
            amps = amps / norm
        return PureState(tuple(dims), amps, normalized=normalize, label=label)

    @staticmethod
    def basis_state(dims: Sequence[int], index: Sequence[int], label: str = "") -> PureState:
        amps = np.zeros(int(np.prod(dims)), dtype=complex)
        amps[np.ravel_multi_index(tuple(index), tuple(dims))] = 1.0
        return PureState(tuple(dims), amps, label=label or "|" + "".join(str(i) for i in index) + ">")

    @staticmethod
    def product_state(*vectors: Sequence[complex]) -> PureState:
        amps = np.array([1.0], dtype=complex)
        dims = []
        for v in vectors:
            v = np.asarray(v, dtype=complex)
            amps = np.kron(amps, v)
            dims.append(v.size)
        return StateEngine.from_amplitudes(dims, amps, label="product")

    @staticmethod
    def bell_state() -> PureState:
        """(|00> + |11>)/sqrt(2)."""
        return StateEngine.from_amplitudes([2, 2], [1, 0, 0, 1], label="bell")

    @staticmethod
    def singlet() -> PureState:
        """(|01> - |10>)/sqrt(2)."""
        return StateEngine.from_amplitudes([2, 2], [0, 1, -1, 0], label="singlet")

    @staticmethod
    def ghz_state(n: int = 3) -> PureState:
        amps = np.zeros(2 ** n, dtype=complex)
        amps[0] = amps[-1] = 1.0
        return StateEngine.from_amplitudes([2] * n, amps, label="ghz")

    @staticmethod
    def w_state(n: int = 3) -> PureState:
        amps = np.zeros(2 ** n, dtype=complex)
        for k in range(n):
            amps[1 << k] = 1.0
        return StateEngine.from_amplitudes([2] * n, amps, label="w")

    @staticmethod
    def max_entangled(n: int) -> PureState:
        """Sum_i |ii> / sqrt(n)."""
        return StateEngine.from_amplitudes([n, n], np.eye(n).ravel(), label=f"max_entangled_{n}")

    @staticmethod
    def spin_state(two_s: int, two_mu: int) -> PureState:
        """|mu> of spin s; index 0 is mu = s."""
        if abs(two_mu) > two_s or (two_s - two_mu) % 2:
            raise ValidationError(f"2mu = {two_mu} is not a weight of spin two_s = {two_s}.")
        amps = np.zeros(two_s + 1, dtype=complex)
        amps[(two_s - two_mu) // 2] = 1.0
        return PureState((two_s + 1,), amps, label=f"|{two_mu}/2>")

    @staticmethod
    def spin_coherent_state(two_s: int, theta: float, phi: float) -> PureState:
        """|+s> rotated to the direction (theta, phi)."""
        c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
        amps = np.array([
            math.sqrt(math.comb(two_s, i)) * c ** (two_s - i) * (np.exp(1j * phi) * s) ** i
            for i in range(two_s + 1)
        ], dtype=complex)
        return StateEngine.from_amplitudes([two_s + 1], amps, label="coherent")

    @staticmethod
    def random_state(dims: Sequence[int], rng: np.random.Generator) -> PureState:
        n = int(np.prod(dims))
        amps = rng.normal(size=n) + 1j * rng.normal(size=n)
        return StateEngine.from_amplitudes(dims, amps, label="random")

    @staticmethod
    def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
        z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / math.sqrt(2.0)
        q, r = np.linalg.qr(z)
        return q * (np.diag(r) / np.abs(np.diag(r)))

    @staticmethod
    def random_local_unitary(dims: Sequence[int], rng: np.random.Generator) -> List[np.ndarray]:
        """One Haar unitary per factor, for apply_local."""
        return [StateEngine.random_unitary(int(d), rng) for d in dims]

    # ── Transformations ────────────────────────────────────

    @staticmethod
    def apply(state: PureState, op: np.ndarray, normalized: bool = False) -> PureState:
        """op @ psi; pass normalized=True only for unitary op."""
        amps = op @ state.amplitudes
        return PureState(state.dims, amps, normalized=normalized, label=state.label)

    @staticmethod
    def apply_local(state: PureState, ops: Sequence[Optional[np.ndarray]],
                    normalized: bool = False) -> PureState:
        """Apply ops[k] on factor k (None leaves the factor alone)."""
        if len(ops) != state.n_factors:
            raise FactorCountError("apply_local", f"{state.n_factors} local operators", state.dims)
        t = state.tensor()
        for k, op in enumerate(ops):
            if op is None:
                continue
            t = np.moveaxis(np.tensordot(op, t, axes=([1], [k])), 0, k)
        return PureState(state.dims, t.ravel(), normalized=normalized, label=state.label)

    # ── Observables ────────────────────────────────────────

    @staticmethod
    def expectation(state: PureState, op: np.ndarray) -> complex:
        """<psi|op|psi> / <psi|psi>."""
        psi = state.amplitudes
        return complex(np.vdot(psi, op @ psi) / np.vdot(psi, psi).real)

    @staticmethod
    def density(state: PureState) -> DensityMatrix:
        psi = state.unit()
        return DensityMatrix(state.dim, np.outer(psi, psi.conj()))

    @staticmethod
    def marginal(state: PureState, factor_index: int) -> DensityMatrix:
        """Partial trace over every factor except ``factor_index``."""
        if not 0 <= factor_index < state.n_factors:
            raise FactorIndexError(factor_index, state.n_factors)
        t = np.moveaxis(state.tensor(), factor_index, 0)
        m = t.reshape(state.dims[factor_index], -1)
        rho = m @ m.conj().T / (state.norm ** 2)
        rho = (rho + rho.conj().T) / 2.0
        return DensityMatrix(state.dims[factor_index], rho)

    # ── Bipartite analysis ─────────────────────────────────

    @staticmethod
    def schmidt(state: PureState) -> SchmidtData:
        if state.n_factors != 2:
            raise FactorCountError("schmidt", "exactly 2 factors", state.dims)
        u, s, vh = np.linalg.svd(state.unit().reshape(state.dims))
        k = len(s)
        return SchmidtData(coefficients=s, left_basis=u[:, :k], right_basis=vh[:k, :].T)

    @staticmethod
    def von_neumann(eigenvalues: Sequence[float]) -> float:
        """-Sum p log2 p with 0 log 0 := 0."""
        p = np.asarray(eigenvalues, dtype=float)
        p = np.where((p < 0.0) & (p >= -PSD_CLIP), 0.0, p)
        p = p[p > 0.0]
        return float(max(0.0, -np.sum(p * np.log2(p))))

    @staticmethod
    def entropy(state: PureState) -> float:
        """Entanglement entropy in ebits of a bipartite pure state."""
        data = StateEngine.schmidt(state)
        return StateEngine.von_neumann(data.coefficients ** 2)

    @staticmethod
    def marginal_entropy(state: PureState, factor_index: int) -> float:
        """Entropy (bits) of one factor's reduced state in any factorization."""
        return StateEngine.von_neumann(StateEngine.marginal(state, factor_index).eigenvalues())

    @staticmethod
    def spectra(state: PureState) -> List[np.ndarray]:
        """Descending marginal spectra of every factor."""
        return [StateEngine.marginal(state, k).eigenvalues() for k in range(state.n_factors)]
