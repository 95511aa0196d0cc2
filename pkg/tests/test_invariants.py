"""Tests for determinant and hyperdeterminant invariants."""

import numpy as np
import pytest
from scipy import linalg

from gitangle.exceptions import FactorCountError
from gitangle.modules.ent_invariants import InvariantEngine
from gitangle.modules.ent_orbit import OrbitEngine
from gitangle.modules.ent_repn import RepresentationEngine
from gitangle.modules.ent_states import PureState, StateEngine


def _special_linear(d: int, rng: np.random.Generator, scale: float = 0.5) -> np.ndarray:
    """exp of a random traceless complex matrix: determinant exactly one."""
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    a -= np.trace(a) / d * np.eye(d)
    return linalg.expm(scale * a)


# -- Determinant -------------------------------------------------------------

def test_bell_determinant():
    report = InvariantEngine.det_concurrence(StateEngine.bell_state())
    assert report.modulus == pytest.approx(0.5)
    assert report.derived_concurrence == pytest.approx(1.0)


def test_product_determinant_vanishes():
    report = InvariantEngine.det_concurrence(StateEngine.product_state([1, 2], [3, -1]))
    assert report.modulus <= 1e-15
    assert report.derived_concurrence <= 1e-7


def test_max_entangled_qutrits():
    report = InvariantEngine.det_concurrence(StateEngine.max_entangled(3))
    assert report.derived_concurrence == pytest.approx(1.0)


def test_unequal_dims_are_flagged():
    rng = np.random.default_rng(2)
    report = InvariantEngine.det_concurrence(StateEngine.random_state([2, 3], rng))
    assert report.flag == "unequal_dims"
    assert report.derived_concurrence == 0.0


def test_determinant_needs_two_factors():
    with pytest.raises(FactorCountError):
        InvariantEngine.det_concurrence(StateEngine.ghz_state(3))


def test_determinant_agrees_with_flow():
    rng = np.random.default_rng(21)
    basis = RepresentationEngine.local_algebra([2, 2])
    for _ in range(5):
        state = StateEngine.random_state([2, 2], rng)
        closed = InvariantEngine.det_concurrence(state).derived_concurrence
        assert OrbitEngine.concurrence(state, basis) == pytest.approx(closed, abs=1e-6)


@pytest.mark.parametrize("n", [2, 3])
def test_determinant_is_sl_invariant(n):
    rng = np.random.default_rng(31 + n)
    state = StateEngine.random_state([n, n], rng)
    before = InvariantEngine.det_concurrence(state).value
    for _ in range(3):
        moved = StateEngine.apply_local(state, [_special_linear(n, rng), _special_linear(n, rng)])
        after = InvariantEngine.det_concurrence(moved).value
        assert abs(after - before) <= 1e-9


@pytest.mark.parametrize("n", [2, 3])
def test_determinant_is_homogeneous(n):
    rng = np.random.default_rng(41 + n)
    state = StateEngine.random_state([n, n], rng)
    c = 0.7 - 1.3j
    scaled = PureState(state.dims, c * state.amplitudes, normalized=False)
    original = InvariantEngine.det_concurrence(state)
    report = InvariantEngine.det_concurrence(scaled)
    assert abs(report.value - c ** n * original.value) <= 1e-12
    assert report.derived_concurrence == pytest.approx(original.derived_concurrence, abs=1e-12)


# -- Hyperdeterminant --------------------------------------------------------

def test_ghz_hyperdeterminant():
    report = InvariantEngine.cayley_hyperdet(StateEngine.ghz_state(3))
    assert report.value == pytest.approx(0.25)
    assert InvariantEngine.three_tangle(StateEngine.ghz_state(3)) == pytest.approx(1.0)
    assert report.derived_concurrence == pytest.approx(1.0)


def test_w_hyperdeterminant_vanishes():
    assert InvariantEngine.cayley_hyperdet(StateEngine.w_state(3)).modulus == 0.0


def test_hyperdeterminant_matches_discriminant():
    rng = np.random.default_rng(4)
    for _ in range(5):
        state = StateEngine.random_state([2, 2, 2], rng)
        direct = InvariantEngine.cayley_hyperdet(state).value
        assert abs(direct - InvariantEngine.hyperdet_discriminant(state)) <= 1e-12


def test_hyperdeterminant_is_local_unitary_invariant_in_modulus():
    rng = np.random.default_rng(8)
    state = StateEngine.random_state([2, 2, 2], rng)
    moved = StateEngine.apply_local(state, StateEngine.random_local_unitary([2, 2, 2], rng), normalized=True)
    assert InvariantEngine.cayley_hyperdet(moved).modulus == pytest.approx(
        InvariantEngine.cayley_hyperdet(state).modulus, abs=1e-12)


def test_hyperdeterminant_is_sl_invariant():
    rng = np.random.default_rng(51)
    state = StateEngine.random_state([2, 2, 2], rng)
    before = InvariantEngine.cayley_hyperdet(state).value
    for _ in range(3):
        moved = StateEngine.apply_local(state, [_special_linear(2, rng) for _ in range(3)])
        after = InvariantEngine.cayley_hyperdet(moved).value
        assert abs(after - before) <= 1e-8 * abs(before)


def test_hyperdeterminant_is_homogeneous_of_degree_four():
    rng = np.random.default_rng(52)
    state = StateEngine.random_state([2, 2, 2], rng)
    c = 1.5 + 0.5j
    scaled = PureState(state.dims, c * state.amplitudes, normalized=False)
    original = InvariantEngine.cayley_hyperdet(state).value
    assert abs(InvariantEngine.cayley_hyperdet(scaled).value - c ** 4 * original) <= 1e-12
    assert abs(InvariantEngine.hyperdet_discriminant(scaled) - c ** 4 * original) <= 1e-12
    assert InvariantEngine.three_tangle(scaled) == pytest.approx(
        InvariantEngine.three_tangle(state), abs=1e-12)


def test_unnormalized_ghz_keeps_unit_tangle():
    ghz = PureState((2, 2, 2), np.array([3.0, 0, 0, 0, 0, 0, 0, 3.0]), normalized=False)
    report = InvariantEngine.cayley_hyperdet(ghz)
    assert report.value == pytest.approx(81.0)
    assert report.derived_concurrence == pytest.approx(1.0)
    assert InvariantEngine.three_tangle(ghz) == pytest.approx(1.0)


def test_hyperdeterminant_needs_three_qubits():
    with pytest.raises(FactorCountError):
        InvariantEngine.cayley_hyperdet(StateEngine.bell_state())


# -- Dispatch ----------------------------------------------------------------

def test_report_dispatch():
    assert InvariantEngine.report(StateEngine.ghz_state(3)).name == "hyperdet"
    assert InvariantEngine.report(StateEngine.bell_state()).name == "det"
    assert InvariantEngine.report(StateEngine.ghz_state(4)) is None
    assert InvariantEngine.report(StateEngine.spin_state(2, 0)) is None


def test_report_serializes_complex_value():
    doc = InvariantEngine.report(StateEngine.ghz_state(3)).to_dict()
    assert doc['value'] == [pytest.approx(0.25), pytest.approx(0.0)]
