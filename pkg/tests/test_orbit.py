"""Tests for the Kempf-Ness flow, generalized concurrence and stability classes."""

import math

import numpy as np
import pytest

from gitangle.config import FlowParams
from gitangle.exceptions import DimensionMismatchError, ValidationError
from gitangle.modules.ent_majorana import MajoranaEngine, RootConfiguration
from gitangle.modules.ent_orbit import OrbitEngine
from gitangle.modules.ent_repn import RepresentationEngine
from gitangle.modules.ent_states import PureState, StateEngine


@pytest.fixture
def qubits3():
    return RepresentationEngine.local_algebra([2, 2, 2])


@pytest.fixture
def qubits2():
    return RepresentationEngine.local_algebra([2, 2])


# -- Completely entangled and coherent states --------------------------------

def test_ghz_is_already_minimal(qubits3):
    result = OrbitEngine.analyse(StateEngine.ghz_state(3), qubits3)
    assert result.iterations == 0
    assert result.concurrence == pytest.approx(1.0)
    assert result.stability == "stable"


def test_bell_concurrence_is_one(qubits2):
    assert OrbitEngine.concurrence(StateEngine.bell_state(), qubits2) == pytest.approx(1.0)


def test_product_state_is_coherent(qubits3):
    result = OrbitEngine.analyse(StateEngine.basis_state([2, 2, 2], [0, 0, 0]), qubits3)
    assert result.stability == "coherent"
    assert result.concurrence == 0.0


def test_spin_coherent_state_has_zero_concurrence():
    basis = RepresentationEngine.spin_generators(3)
    state = StateEngine.spin_coherent_state(3, 0.8, 2.1)
    assert OrbitEngine.classify(state, basis) == "coherent"


# -- Unstable states ---------------------------------------------------------

def test_w_state_flows_to_zero(qubits3):
    result = OrbitEngine.analyse(StateEngine.w_state(3), qubits3)
    assert result.stability == "unstable"
    assert result.concurrence == 0.0
    assert result.norm_history[-1] < 1e-6


def test_norm_history_never_increases(qubits3):
    result = OrbitEngine.kempf_ness_flow(StateEngine.w_state(3), qubits3)
    history = np.array(result.norm_history)
    assert np.all(np.diff(history) <= 1e-15)


@pytest.mark.parametrize("roots,two_s", [
    ((0, 0, 0, 1, 2), 5),
    ((0, 0, 0, 0, 1, 2), 6),
])
def test_majority_root_cluster_is_unstable(roots, two_s):
    config = RootConfiguration(tuple(complex(z) for z in roots), 0, two_s)
    state = MajoranaEngine.from_roots(config)
    basis = RepresentationEngine.spin_generators(two_s)
    result = OrbitEngine.kempf_ness_flow(state, basis)
    assert result.stability == "unstable"
    assert result.norm_history[-1] < FlowParams().null_tol
    assert np.all(np.diff(result.norm_history) <= 1e-15)
    assert OrbitEngine.classify(state, basis) == "unstable"


def test_half_root_cluster_is_not_unstable():
    config = RootConfiguration((0j, 0j, 0j, 1 + 0j, 1 + 0j, 1 + 0j), 0, 6)
    state = MajoranaEngine.from_roots(config)
    result = OrbitEngine.analyse(state, RepresentationEngine.spin_generators(6))
    assert result.stability not in ("coherent", "unstable")
    assert result.concurrence > FlowParams().null_tol


# -- Ray bound ---------------------------------------------------------------

@pytest.mark.parametrize("a", [0.6, 0.8])
def test_ray_bound_of_schmidt_pair(qubits2, a):
    b = math.sqrt(1.0 - a * a)
    state = StateEngine.from_amplitudes([2, 2], [a, 0, 0, b])
    assert OrbitEngine.ray_bound(state, qubits2) == pytest.approx(2.0 * a * b, abs=1e-8)


def test_ray_bound_of_product_state_is_zero(qubits2):
    state = StateEngine.basis_state([2, 2], [0, 0])
    assert OrbitEngine.ray_bound(state, qubits2) == pytest.approx(0.0, abs=1e-12)


def test_ray_bound_never_undercuts_concurrence(qubits3):
    rng = np.random.default_rng(17)
    for _ in range(5):
        state = StateEngine.random_state([2, 2, 2], rng)
        direction = rng.normal(size=len(qubits3))
        mu = OrbitEngine.concurrence(state, qubits3)
        assert OrbitEngine.ray_bound(state, qubits3) >= mu - 1e-5
        assert OrbitEngine.ray_bound(state, qubits3, direction) >= mu - 1e-5


def test_ray_bound_dimension_mismatch(qubits3):
    with pytest.raises(DimensionMismatchError):
        OrbitEngine.ray_bound(StateEngine.bell_state(), qubits3)


# -- Closed forms ------------------------------------------------------------

@pytest.mark.parametrize("a", [0.6, 0.8, 0.95])
def test_two_qubit_concurrence_is_twice_product(qubits2, a):
    b = math.sqrt(1.0 - a * a)
    state = StateEngine.from_amplitudes([2, 2], [a, 0, 0, b])
    result = OrbitEngine.analyse(state, qubits2)
    assert result.stability == "stable"
    assert result.concurrence == pytest.approx(2.0 * a * b, abs=1e-6)


@pytest.mark.parametrize("phi", [0.0, 0.2, 0.5])
def test_spin1_concurrence_is_cos_two_phi(phi):
    basis = RepresentationEngine.spin_generators(2)
    m, n = np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
    state = MajoranaEngine.cartesian_to_spin1(math.cos(phi) * m + 1j * math.sin(phi) * n)
    result = OrbitEngine.analyse(state, basis)
    assert result.concurrence == pytest.approx(math.cos(2.0 * phi), abs=1e-6)


def test_concurrence_is_local_unitary_invariant(qubits2):
    rng = np.random.default_rng(11)
    state = StateEngine.random_state([2, 2], rng)
    moved = StateEngine.apply_local(state, StateEngine.random_local_unitary([2, 2], rng), normalized=True)
    assert OrbitEngine.concurrence(state, qubits2) == pytest.approx(
        OrbitEngine.concurrence(moved, qubits2), abs=1e-6)


def test_unnormalized_input_gives_relative_concurrence(qubits2):
    state = PureState((2, 2), np.array([3.0, 0.0, 0.0, 4.0]), normalized=False)
    assert OrbitEngine.concurrence(state, qubits2) == pytest.approx(0.96, abs=1e-6)


# -- Gradient ----------------------------------------------------------------

def test_gradient_matches_central_difference(qubits2):
    rng = np.random.default_rng(5)
    state = StateEngine.random_state([2, 2], rng)
    direction = rng.normal(size=len(qubits2))
    fd, analytic = OrbitEngine.finite_difference_gradient(state, qubits2, direction)
    assert abs(fd - analytic) <= 1e-6 * max(abs(analytic), 1e-3)


def test_gradient_vanishes_on_ghz(qubits3):
    assert np.allclose(OrbitEngine.gradient(StateEngine.ghz_state(3), qubits3), 0.0, atol=1e-12)


# -- Parameters and errors ---------------------------------------------------

def test_flow_dimension_mismatch(qubits3):
    with pytest.raises(DimensionMismatchError):
        OrbitEngine.kempf_ness_flow(StateEngine.bell_state(), qubits3)


def test_iteration_cap_gives_semistable_boundary(qubits2):
    state = StateEngine.from_amplitudes([2, 2], [0.6, 0, 0, 0.8])
    result = OrbitEngine.analyse(state, qubits2, FlowParams(max_iters=1))
    assert result.stability == "semistable_boundary"
    assert not result.converged


@pytest.mark.parametrize("kwargs", [
    {'step': 0.0},
    {'max_iters': 0},
    {'backtracking': 1.0},
    {'null_tol': 2.0},
])
def test_bad_flow_params(kwargs):
    with pytest.raises(ValidationError):
        FlowParams(**kwargs)


def test_result_serializes():
    basis = RepresentationEngine.local_algebra([2, 2])
    doc = OrbitEngine.analyse(StateEngine.bell_state(), basis).to_dict()
    assert doc['type'] == 'ORBIT'
    assert doc['minimal_vector']['dims'] == [2, 2]
    assert doc['null_bound'] is None
