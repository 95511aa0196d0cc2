"""Tests for pentagrams, the spin-1 Bell functional, the violation search and CHSH."""

import logging
import math

import numpy as np
import pytest

from gitangle.config import SearchBudget
from gitangle.exceptions import (
    BudgetExhaustedError,
    DirectionError,
    FactorCountError,
    PentagramError,
    ValidationError,
)
from gitangle.modules.ent_bell import BellEngine, Pentagram
from gitangle.modules.ent_majorana import MajoranaEngine
from gitangle.modules.ent_states import StateEngine

SQRT5 = math.sqrt(5.0)


def spin1_with_angle(phi: float, phase: float = 0.0):
    """exp(i phase)(cos(phi) e_x + i sin(phi) e_y) as a spin-1 state."""
    v = np.exp(1j * phase) * np.array([math.cos(phi), 1j * math.sin(phi), 0.0])
    return MajoranaEngine.cartesian_to_spin1(v)


@pytest.fixture
def regular():
    return BellEngine.regular_pentagram()


@pytest.fixture
def degenerate():
    # a3 = 0 puts l_3 on l_1
    return BellEngine.make_pentagram([0.4, 1.1, 0.3, 0.0, 0.9])


@pytest.fixture
def small_budget():
    return SearchBudget(max_evaluations=4000, refine_iters=200, starts=6, eps_points=3)


# -- Construction ------------------------------------------------------------

def test_regular_pentagram_is_valid(regular):
    g = regular.vectors @ regular.vectors.T
    for i in range(5):
        assert abs(g[i, (i + 1) % 5]) <= 1e-12


def test_params_rebuild_the_pentagram():
    p = BellEngine.make_pentagram([1.0, -0.4, 2.2, 1.3, 0.7])
    rebuilt = BellEngine.make_pentagram(BellEngine.pentagram_params(p))
    assert np.allclose(rebuilt.vectors, p.vectors, atol=1e-12)


def test_parallel_l4_and_l1_rejected():
    with pytest.raises(PentagramError):
        BellEngine.make_pentagram([0.0, 0.0, 0.0, math.pi / 2.0, math.pi / 2.0])


def test_make_pentagram_needs_five_params():
    with pytest.raises(ValidationError):
        BellEngine.make_pentagram([0.0, 0.0, 0.0])


def test_non_orthogonal_vectors_rejected():
    vectors = np.array(BellEngine.regular_pentagram().vectors)
    vectors[1] = vectors[0]
    with pytest.raises(PentagramError):
        Pentagram(vectors)


def test_random_pentagrams_are_valid():
    rng = np.random.default_rng(17)
    for _ in range(20):
        assert BellEngine.random_pentagram(rng).vectors.shape == (5, 3)


def test_degenerate_pentagram_has_parallel_pair(degenerate, regular):
    assert BellEngine.has_parallel_pair(degenerate)
    assert not BellEngine.has_parallel_pair(regular)


# -- Spectral laws -----------------------------------------------------------

def test_trace_is_five():
    rng = np.random.default_rng(1)
    for _ in range(10):
        report = BellEngine.pentagram_operator(BellEngine.random_pentagram(rng))
        assert sum(report.spectrum) == pytest.approx(5.0, abs=1e-12)
        assert report.spectrum[0] <= SQRT5 + 1e-12
        assert report.spectrum[1] >= 1.0 - 1e-12


def test_degenerate_spectrum(degenerate):
    assert np.allclose(BellEngine.pentagram_operator(degenerate).spectrum, [2.0, 2.0, 1.0], atol=1e-12)


def test_regular_spectrum(regular):
    spectrum = BellEngine.pentagram_operator(regular).spectrum
    assert spectrum[0] == pytest.approx(SQRT5)
    assert spectrum[1] == pytest.approx((5.0 - SQRT5) / 2.0)


def test_determinant_identity(regular, degenerate):
    rng = np.random.default_rng(6)
    for p in [regular, degenerate] + [BellEngine.random_pentagram(rng) for _ in range(10)]:
        lhs, rhs = BellEngine.determinant_identity(p)
        assert abs(lhs - rhs) <= 1e-8 * abs(rhs) + 1e-12


def test_regular_determinant_value(regular):
    lhs, _ = BellEngine.determinant_identity(regular)
    assert lhs == pytest.approx((SQRT5 - 1.0) * ((5.0 - SQRT5) / 2.0 - 1.0) ** 2)


# -- Bell value --------------------------------------------------------------

def test_axis_state_violates(regular):
    report = BellEngine.evaluate(StateEngine.spin_state(2, 0), regular)
    assert report.bell_value == pytest.approx(SQRT5, abs=1e-12)
    assert report.violated


def test_axis_state_in_cartesian_basis(regular):
    state = StateEngine.from_amplitudes([3], [0, 0, 1])
    assert BellEngine.bell_value(state, regular, basis="cartesian") == pytest.approx(SQRT5)


def test_degenerate_pentagram_saturates_at_l1(degenerate):
    state = StateEngine.from_amplitudes([3], degenerate.vectors[0])
    report = BellEngine.evaluate(state, degenerate, basis="cartesian")
    assert report.bell_value == pytest.approx(2.0, abs=1e-12)
    assert not report.violated


def test_coherent_states_never_violate():
    rng = np.random.default_rng(13)
    for _ in range(20):
        theta, phi = math.acos(rng.uniform(-1, 1)), rng.uniform(0, 2 * math.pi)
        state = StateEngine.spin_coherent_state(2, theta, phi)
        assert BellEngine.bell_value(state, BellEngine.random_pentagram(rng)) <= 2.0 + 1e-9


def test_max_bell_value_at_quarter_pi(regular):
    l3 = BellEngine.pentagram_operator(regular).spectrum[2]
    assert BellEngine.max_bell_value(math.pi / 4.0, regular) == pytest.approx((5.0 - l3) / 2.0)


@pytest.mark.parametrize("phi", [-0.1, 1.0])
def test_max_bell_value_rejects_angle_outside_range(regular, phi):
    with pytest.raises(ValidationError):
        BellEngine.max_bell_value(phi, regular)


def test_jsquare_and_bell_add_to_five(regular):
    rng = np.random.default_rng(14)
    for _ in range(5):
        state = StateEngine.random_state([3], rng)
        total = BellEngine.jsquare_form(state, regular) + BellEngine.bell_value(state, regular)
        assert total == pytest.approx(5.0, abs=1e-12)


def test_jsquare_and_bell_add_to_five_on_random_pentagrams():
    rng = np.random.default_rng(15)
    for _ in range(10):
        p = BellEngine.random_pentagram(rng)
        assert not np.allclose(p.vectors, BellEngine.regular_pentagram().vectors)
        state = StateEngine.random_state([3], rng)
        total = BellEngine.jsquare_form(state, p) + BellEngine.bell_value(state, p)
        assert total == pytest.approx(5.0, abs=1e-12)


def test_reflection_form(regular):
    state = StateEngine.spin_state(2, 0)
    assert BellEngine.reflection_form(state, regular) == pytest.approx(8.0 - 4.0 * SQRT5)
    assert BellEngine.classical_pentagram_bound() == 0


def test_unknown_basis(regular):
    with pytest.raises(ValidationError):
        BellEngine.bell_value(StateEngine.spin_state(2, 0), regular, basis="polar")


def test_bell_value_needs_spin1(regular):
    with pytest.raises(FactorCountError):
        BellEngine.bell_value(StateEngine.bell_state(), regular)


# -- Canonical frame and alignment -------------------------------------------

def test_canonical_frame_recovers_angle():
    frame = BellEngine.canonical_frame(spin1_with_angle(0.2, phase=0.3))
    assert frame.phi == pytest.approx(0.2, abs=1e-12)
    assert frame.m @ frame.n == pytest.approx(0.0, abs=1e-12)


def test_real_state_frame():
    frame = BellEngine.canonical_frame(StateEngine.spin_state(2, 0))
    assert frame.phi == pytest.approx(0.0, abs=1e-12)
    assert np.linalg.norm(frame.n) == pytest.approx(1.0)


def test_coherent_frame_angle_is_quarter_pi(regular):
    frame = BellEngine.canonical_frame(StateEngine.spin_coherent_state(2, 1.1, 0.4))
    assert frame.phi <= math.pi / 4.0
    assert frame.phi == pytest.approx(math.pi / 4.0, abs=1e-6)
    assert BellEngine.max_bell_value(frame.phi, regular) == pytest.approx(
        BellEngine.max_bell_value(math.pi / 4.0, regular), abs=1e-9)


def test_aligned_pentagram_reaches_the_maximum(regular):
    state = spin1_with_angle(math.pi / 8.0)
    aligned = BellEngine.align(regular, BellEngine.canonical_frame(state))
    value = BellEngine.bell_value(state, aligned)
    assert value == pytest.approx(BellEngine.max_bell_value(math.pi / 8.0, regular), abs=1e-10)
    assert value > 2.0


# -- Violation search --------------------------------------------------------

def test_search_on_real_state_finds_sqrt5(small_budget):
    result = BellEngine.search_violation(StateEngine.spin_state(2, 0), small_budget)
    assert result.value >= SQRT5 - 1e-6


def test_search_at_eighth_pi(small_budget):
    result = BellEngine.search_violation(spin1_with_angle(math.pi / 8.0), small_budget)
    assert result.value > 2.0
    assert result.value == pytest.approx(BellEngine.max_bell_value(result.phi, result.pentagram), abs=1e-9)
    assert result.evaluations <= small_budget.max_evaluations


def test_search_close_to_coherent_boundary(small_budget):
    result = BellEngine.search_violation(spin1_with_angle(math.pi / 4.0 - 0.05), small_budget)
    assert result.value > 2.0


def test_search_skips_coherent_state(caplog):
    with caplog.at_level(logging.INFO, logger="gitangle.bell"):
        assert BellEngine.search_violation(StateEngine.spin_state(2, 2)) is None
    assert "SEARCH_SKIPPED" in caplog.text


def test_exhausted_search_is_inconclusive():
    budget = SearchBudget(max_evaluations=1, margin=1e-6)
    with pytest.raises(BudgetExhaustedError):
        BellEngine.search_violation(spin1_with_angle(math.pi / 4.0 - 1e-3), budget)


def test_search_starts_cover_eps_grid(small_budget):
    starts = BellEngine.search_starts(small_budget)
    assert len(starts) == 1 + small_budget.eps_points * (small_budget.starts // small_budget.eps_points)
    assert {a3 for a3, _ in starts[1:]} == set(small_budget.eps_grid())


# -- CHSH --------------------------------------------------------------------

def test_singlet_chsh_at_optimal_angles():
    value = BellEngine.chsh_value(StateEngine.singlet(), *BellEngine.chsh_optimal_directions())
    assert value == pytest.approx(2.0 - 2.0 * math.sqrt(2.0), abs=1e-12)


def test_product_state_respects_chsh():
    state = StateEngine.basis_state([2, 2], [0, 0])
    assert BellEngine.chsh_value(state, *BellEngine.chsh_optimal_directions()) >= 0.0


def test_chsh_rejects_non_unit_direction():
    a1, a2, b1, b2 = BellEngine.chsh_optimal_directions()
    with pytest.raises(DirectionError):
        BellEngine.chsh_value(StateEngine.singlet(), 2.0 * a1, a2, b1, b2)


def test_chsh_needs_two_qubits():
    with pytest.raises(FactorCountError):
        BellEngine.chsh_value(StateEngine.ghz_state(3), *BellEngine.chsh_optimal_directions())
