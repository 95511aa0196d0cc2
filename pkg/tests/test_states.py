"""Tests for pure states, marginals and the Schmidt decomposition."""

import math

import numpy as np
import pytest

from gitangle.exceptions import (
    FactorCountError,
    FactorIndexError,
    StateNormError,
    ValidationError,
    ZeroStateError,
)
from gitangle.modules.ent_states import PureState, StateEngine


@pytest.fixture
def rng():
    return np.random.default_rng(7)


# -- Construction ------------------------------------------------------------

def test_unnormalized_amplitudes_rejected():
    with pytest.raises(StateNormError):
        PureState((2,), np.array([1.0, 1.0]))


def test_unnormalized_flag_allows_any_norm():
    state = PureState((2,), np.array([3.0, 4.0]), normalized=False)
    assert state.norm == pytest.approx(5.0)
    assert np.allclose(state.unit(), [0.6, 0.8])


def test_wrong_amplitude_count():
    with pytest.raises(ValidationError):
        PureState((2, 2), np.array([1.0, 0.0, 0.0]))


def test_zero_state_cannot_be_normalized():
    with pytest.raises(ZeroStateError):
        StateEngine.from_amplitudes([2], [0.0, 0.0])


def test_amplitudes_are_read_only():
    state = StateEngine.bell_state()
    with pytest.raises(ValueError):
        state.amplitudes[0] = 0.0


def test_spin_state_index_zero_is_top_weight():
    state = StateEngine.spin_state(2, 2)
    assert np.allclose(state.amplitudes, [1, 0, 0])
    with pytest.raises(ValidationError):
        StateEngine.spin_state(2, 1)


def test_coherent_state_at_north_pole():
    state = StateEngine.spin_coherent_state(3, 0.0, 0.0)
    assert np.allclose(state.amplitudes, [1, 0, 0, 0])


def test_random_unitary_is_unitary(rng):
    u = StateEngine.random_unitary(4, rng)
    assert np.allclose(u.conj().T @ u, np.eye(4), atol=1e-12)


def test_apply_local_with_unitaries_keeps_norm(rng):
    state = StateEngine.ghz_state(3)
    ops = StateEngine.random_local_unitary(state.dims, rng)
    moved = StateEngine.apply_local(state, ops, normalized=True)
    assert moved.norm == pytest.approx(1.0, abs=1e-12)


def test_apply_local_needs_one_op_per_factor():
    with pytest.raises(FactorCountError):
        StateEngine.apply_local(StateEngine.bell_state(), [np.eye(2)])


# -- Marginals ---------------------------------------------------------------

def test_bell_marginal_is_maximally_mixed():
    rho = StateEngine.marginal(StateEngine.bell_state(), 0)
    assert np.allclose(rho.matrix, np.eye(2) / 2.0)
    assert np.allclose(rho.eigenvalues(), [0.5, 0.5])


def test_marginal_factor_out_of_range():
    with pytest.raises(FactorIndexError):
        StateEngine.marginal(StateEngine.bell_state(), 2)


def test_marginal_of_unnormalized_state_has_unit_trace():
    state = PureState((2, 2), np.array([2.0, 0.0, 0.0, 2.0]), normalized=False)
    rho = StateEngine.marginal(state, 1)
    assert np.trace(rho.matrix).real == pytest.approx(1.0)


def test_w_marginal_spectrum():
    spectra = StateEngine.spectra(StateEngine.w_state(3))
    for ev in spectra:
        assert np.allclose(ev, [2.0 / 3.0, 1.0 / 3.0])


def test_marginal_reproduces_local_expectations(rng):
    state = StateEngine.random_state([2, 3, 2], rng)
    full = StateEngine.density(state)
    for k, d in enumerate(state.dims):
        h = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        h = h + h.conj().T
        left = int(np.prod(state.dims[:k]))
        right = int(np.prod(state.dims[k + 1:]))
        embedded = np.kron(np.kron(np.eye(left), h), np.eye(right))
        local = StateEngine.marginal(state, k).expectation(h)
        assert local == pytest.approx(full.expectation(embedded), abs=1e-10)


# -- Schmidt and entropy -----------------------------------------------------

def test_schmidt_of_bell():
    data = StateEngine.schmidt(StateEngine.bell_state())
    assert np.allclose(data.coefficients, [1 / math.sqrt(2), 1 / math.sqrt(2)])
    assert data.rank == 2


def test_schmidt_of_product():
    state = StateEngine.product_state([1, 0], [0, 1])
    data = StateEngine.schmidt(state)
    assert np.allclose(data.coefficients, [1.0, 0.0])
    assert data.rank == 1


def test_schmidt_reconstructs_random_two_by_three(rng):
    state = StateEngine.random_state([2, 3], rng)
    data = StateEngine.schmidt(state)
    assert np.max(np.abs(data.reconstruct() - state.amplitudes)) <= 1e-10
    assert np.all(np.diff(data.coefficients) <= 0.0)


def test_schmidt_needs_two_factors():
    with pytest.raises(FactorCountError):
        StateEngine.schmidt(StateEngine.ghz_state(3))


@pytest.mark.parametrize("state,expected", [
    (StateEngine.bell_state(), 1.0),
    (StateEngine.product_state([1, 0], [1, 1]), 0.0),
    (StateEngine.max_entangled(3), math.log2(3)),
])
def test_entropy(state, expected):
    assert StateEngine.entropy(state) == pytest.approx(expected, abs=1e-12)


def test_entropy_is_symmetric_between_factors(rng):
    state = StateEngine.random_state([2, 3], rng)
    assert StateEngine.marginal_entropy(state, 0) == pytest.approx(
        StateEngine.marginal_entropy(state, 1), abs=1e-10)
    assert StateEngine.entropy(state) == pytest.approx(StateEngine.marginal_entropy(state, 0), abs=1e-10)


def test_entropy_is_local_unitary_invariant(rng):
    state = StateEngine.random_state([3, 4], rng)
    for _ in range(3):
        moved = StateEngine.apply_local(state, StateEngine.random_local_unitary([3, 4], rng),
                                        normalized=True)
        assert StateEngine.entropy(moved) == pytest.approx(StateEngine.entropy(state), abs=1e-10)


def test_von_neumann_ignores_zero_weights():
    assert StateEngine.von_neumann([1.0, 0.0, -1e-13]) == 0.0
