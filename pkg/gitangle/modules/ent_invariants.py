"""
ent.invariants - Closed-form polynomial invariants for gitangle.

Determinant concurrence of n x n bipartite states, the Cayley
hyperdeterminant of three qubits and the 3-tangle. The polynomials are
evaluated on the raw amplitudes, so they stay SL-invariant and homogeneous;
the norm is divided out only in the derived concurrence and tangle. Only the
modulus of an invariant feeds those; the phase is reported.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from gitangle.exceptions import FactorCountError, ZeroStateError
from gitangle.modules.ent_states import PureState


@dataclass(frozen=True)
class InvariantReport:
    name: str
    value: complex
    modulus: float
    derived_concurrence: float
    flag: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            'type': 'INVARIANT',
            'name': self.name,
            'value': [self.value.real, self.value.imag],
            'modulus': self.modulus,
            'derived_concurrence': self.derived_concurrence,
            'flag': self.flag,
        }


def _norm2(state: PureState) -> float:
    norm2 = state.norm ** 2
    if norm2 == 0.0:
        raise ZeroStateError("Invariant normalization")
    return norm2


class InvariantEngine:
    """SL x SL (x SL) invariants with a known relation to the concurrence."""

    @staticmethod
    def det_concurrence(state: PureState) -> InvariantReport:
        """det[psi_ij] (degree n) and mu = n |det|^(2/n) / ||psi||^2."""
        if state.n_factors != 2:
            raise FactorCountError("det_concurrence", "exactly 2 factors", state.dims)
        n, m = state.dims
        if n != m:
            # no invariants exist for unequal factor dimensions
            return InvariantReport("det", 0j, 0.0, 0.0, flag="unequal_dims")
        value = complex(np.linalg.det(state.amplitudes.reshape(n, n)))
        modulus = abs(value)
        norm2 = _norm2(state)
        return InvariantReport(
            name="det",
            value=value,
            modulus=modulus,
            derived_concurrence=float(n * modulus ** (2.0 / n) / norm2),
        )

    @staticmethod
    def cayley_hyperdet(state: PureState) -> InvariantReport:
        """Det[psi] term by term (degree 4), tau = 4|Det| / ||psi||^4, mu = sqrt(tau)."""
        if tuple(state.dims) != (2, 2, 2):
            raise FactorCountError("cayley_hyperdet", "three qubit factors [2, 2, 2]", state.dims)
        p = state.amplitudes.reshape(2, 2, 2)
        a000, a001, a010, a011 = p[0, 0, 0], p[0, 0, 1], p[0, 1, 0], p[0, 1, 1]
        a100, a101, a110, a111 = p[1, 0, 0], p[1, 0, 1], p[1, 1, 0], p[1, 1, 1]

        squares = (a000 ** 2 * a111 ** 2 + a001 ** 2 * a110 ** 2
                   + a010 ** 2 * a101 ** 2 + a011 ** 2 * a100 ** 2)
        cross = (a000 * a001 * a110 * a111 + a000 * a010 * a101 * a111
                 + a000 * a011 * a100 * a111 + a001 * a010 * a101 * a110
                 + a001 * a011 * a110 * a100 + a010 * a011 * a101 * a100)
        quartic = a000 * a011 * a101 * a110 + a001 * a010 * a100 * a111
        value = complex(squares - 2.0 * cross + 4.0 * quartic)
        modulus = abs(value)
        return InvariantReport(
            name="hyperdet",
            value=value,
            modulus=modulus,
            derived_concurrence=float(np.sqrt(4.0 * modulus) / _norm2(state)),
        )

    @staticmethod
    def three_tangle(state: PureState) -> float:
        return InvariantEngine.cayley_hyperdet(state).derived_concurrence ** 2

    @staticmethod
    def hyperdet_discriminant(state: PureState) -> complex:
        """
        Det as the discriminant of t -> det(A + tB), A and B the slices of
        the first qubit: (det(A+B) - det A - det B)^2 - 4 det A det B.
        """
        if tuple(state.dims) != (2, 2, 2):
            raise FactorCountError("hyperdet_discriminant", "three qubit factors [2, 2, 2]", state.dims)
        p = state.amplitudes.reshape(2, 2, 2)
        a, b = p[0], p[1]
        det_a, det_b = np.linalg.det(a), np.linalg.det(b)
        mixed = np.linalg.det(a + b) - det_a - det_b
        return complex(mixed ** 2 - 4.0 * det_a * det_b)

    @staticmethod
    def report(state: PureState) -> Optional[InvariantReport]:
        """The invariant that applies to the state's format, if any."""
        if tuple(state.dims) == (2, 2, 2):
            return InvariantEngine.cayley_hyperdet(state)
        if state.n_factors == 2:
            return InvariantEngine.det_concurrence(state)
        return None
