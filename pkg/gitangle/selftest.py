"""
gitangle.selftest - named acceptance checks with fixed seeds.

Every check draws from its own generator, seeded from (seed, position),
so results do not depend on which other checks ran.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from gitangle.config import Settings
from gitangle.exceptions import BudgetExhaustedError, GitangleError
from gitangle.modules.ent_bell import BellEngine
from gitangle.modules.ent_fluct import FluctuationEngine
from gitangle.modules.ent_invariants import InvariantEngine
from gitangle.modules.ent_majorana import (
    UNSTABLE as HM_UNSTABLE,
    MajoranaEngine,
    RootConfiguration,
)
from gitangle.modules.ent_orbit import COHERENT, UNSTABLE, OrbitEngine
from gitangle.modules.ent_repn import RepresentationEngine
from gitangle.modules.ent_states import PureState, StateEngine

logger = logging.getLogger("gitangle.selftest")


@dataclass(frozen=True)
class Profile:
    """Sample sizes of the acceptance checks."""
    pentagrams: int = 1000
    degenerate_pentagrams: int = 100
    coherent_states: int = 500
    coherent_pentagrams: int = 200
    violation_states: int = 50
    variance_states: int = 10000
    two_qubit_states: int = 200
    three_qubit_states: int = 100
    spin1_states: int = 200
    gradient_pairs: int = 100
    majorana_random: int = 20
    bipartite_states: int = 100
    product_states: int = 1000


FULL = Profile()
QUICK = Profile(
    pentagrams=100, degenerate_pentagrams=20, coherent_states=50, coherent_pentagrams=20,
    violation_states=3, variance_states=200, two_qubit_states=10, three_qubit_states=5,
    spin1_states=10, gradient_pairs=10, majorana_random=3, bipartite_states=10,
    product_states=50,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {'name': self.name, 'passed': self.passed, 'detail': self.detail}


Outcome = Tuple[bool, Dict[str, object]]


def _random_direction(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def _random_coherent(two_s: int, rng: np.random.Generator) -> PureState:
    theta = math.acos(rng.uniform(-1.0, 1.0))
    return StateEngine.spin_coherent_state(two_s, theta, rng.uniform(0.0, 2.0 * math.pi))


def _spin1_with_angle(phi: float, rng: np.random.Generator) -> PureState:
    """exp(i gamma) (cos(phi) m + i sin(phi) n) for a random frame and phase."""
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    vec = np.exp(1j * rng.uniform(0.0, 2.0 * math.pi)) * (math.cos(phi) * q[:, 0] + 1j * math.sin(phi) * q[:, 1])
    return MajoranaEngine.cartesian_to_spin1(vec, label=f"phi={phi:.6f}")


# -- Pentagram ---------------------------------------------------------------

def check_pentagram_axis(settings: Settings, profile: Profile, rng: np.random.Generator) -> Outcome:
    c = math.cos(math.pi / 5.0)
    expected = 5.0 * c / (1.0 + c)
    value = BellEngine.bell_value(StateEngine.spin_state(2, 0), BellEngine.regular_pentagram())
    return abs(value - expected) <= 1e-9 and value > 2.0, {'bell_value': value, 'expected': expected}


def check_pentagram_spectra(settings: Settings, profile: Profile, rng: np.random.Generator) -> Outcome:
    trace_err = 0.0
    det_err = 0.0
    det_ok = True
    margin = math.inf
    for _ in range(profile.pentagrams):
        p = BellEngine.random_pentagram(rng)
        l1, l2, l3 = BellEngine.pentagram_operator(p).spectrum
        trace_err = max(trace_err, abs(l1 + l2 + l3 - 5.0))
        if not BellEngine.has_parallel_pair(p):
            margin = min(margin, l1 - 2.0, l3 - 1.0, 2.0 - l2)
        lhs, rhs = BellEngine.determinant_identity(p)
        # absolute floor: det(A - I) carries roundoff of order 1e-15
        det_ok &= abs(lhs - rhs) <= 1e-8 * abs(rhs) + 1e-12
        if rhs != 0.0:
            det_err = max(det_err, abs(lhs - rhs) / abs(rhs))

    degenerate_err = 0.0
    for k in range(profile.degenerate_pentagrams):
        theta, phi, a2, a4 = rng.uniform(0.0, 2.0 * math.pi, size=4)
        a3 = 0.0 if k % 2 == 0 else math.pi
        spectrum = BellEngine.pentagram_operator(BellEngine.make_pentagram([theta, phi, a2, a3, a4])).spectrum
        degenerate_err = max(degenerate_err, float(np.max(np.abs(np.array(spectrum) - [2.0, 2.0, 1.0]))))

    passed = trace_err <= 1e-9 and degenerate_err <= 1e-9 and margin > 0.0 and det_ok
    return passed, {
        'trace_error': trace_err,
        'degenerate_error': degenerate_err,
        'strict_margin': margin,
        'determinant_relative_error': det_err,
    }


def check_coherent_safety(settings: Settings, profile: Profile, rng: np.random.Generator) -> Outcome:
    vectors = np.array([
        MajoranaEngine.spin1_to_cartesian(_random_coherent(2, rng)) for _ in range(profile.coherent_states)
    ])
    frames = np.array([BellEngine.random_pentagram(rng).vectors for _ in range(profile.coherent_pentagrams)])
    values = np.sum(np.abs(np.einsum('pid,sd->psi', frames, vectors)) ** 2, axis=2)
    worst = float(values.max())
    return worst <= 2.0 + 1e-9, {'max_bell_value': worst}


def check_noncoherent_violation(settings: Settings, profile: Profile, rng: np.random.Generator) -> Outcome:
    found = 0
    weakest = math.inf
    for _ in range(profile.violation_states):
        state = _spin1_with_angle(rng.uniform(0.0, math.pi / 8.0), rng)
        try:
            result = BellEngine.search_violation(state, settings.search)
        except BudgetExhaustedError:
            continue
        if result is not None and result.value > 2.0:
            found += 1
            weakest = min(weakest, result.value)
    return found == profile.violation_states, {
        'states': profile.violation_states,
        'violations_found': found,
        'smallest_violation': weakest if found else None,
    }


# -- Representations and fluctuations ----------------------------------------

def check_casimir(settings: Settings, profile: Profile, rng: np.random.Generator) -> Outcome:
    spin_err = 0.0
    for two_s in range(1, 9):
        s = two_s / 2.0
        casimir = RepresentationEngine.casimir(RepresentationEngine.spin_generators(two_s))
        spin_err = max(spin_err, float(np.max(np.abs(casimir - s * (s + 1) * np.eye(two_s + 1)))))
    local = RepresentationEngine.casimir(RepresentationEngine.local_algebra([2, 2]))
    local_err = float(np.max(np.abs(local - 1.5 * np.eye(4))))
    return spin_err <= 1e-10 and local_err <= 1e-10, {'spin_error': spin_err, 'local_error': local_err}


def check_variance_range(settings: Settings, profile: Profile, rng: np.random.Generator) -> Outcome:
    passed = True
    detail = {}
    for two_s in (2, 3, 4):
        s = two_s / 2.0
        basis = RepresentationEngine.spin_generators(two_s)
        values = [
            FluctuationEngine.total_variance(StateEngine.random_state([two_s + 1], rng), basis).total_variance
            for _ in range(profile.variance_states)
        ]
        low, high = min(values), max(values)
        top = FluctuationEngine.total_variance(StateEngine.spin_state(two_s, two_s), basis).total_variance
        cat = np.zeros(two_s + 1, dtype=complex)
        cat[0], cat[-1] = 1.0, -1.0
        extremes = [StateEngine.from_amplitudes([two_s + 1], cat, label="cat")]
        if two_s % 2 == 0:
            extremes.append(StateEngine.spin_state(two_s, 0))
        extreme_err = max(
            abs(FluctuationEngine.total_variance(st, basis).total_variance - s * (s + 1)) for st in extremes
        )
        passed &= (low >= s - 1e-8 and high <= s * (s + 1) + 1e-8
                   and abs(top - s) <= 1e-12 and extreme_err <= 1e-10)
        detail[f"two_s={two_s}"] = {
            'min': low, 'max': high, 'highest_weight': top, 'extreme_error': extreme_err,
        }
    return passed, detail


# -- Orbit flow --------------------------------------------------------------

def check_flow_vs_invariants(settings: Settings, profile: Profile, rng: np.random.Generator) -> Outcome:
    flow = settings.flow
    pair = RepresentationEngine.local_algebra([2, 2])
    triple = RepresentationEngine.local_algebra([2, 2, 2])

    two_err = 0.0
    for _ in range(profile.two_qubit_states):
        state = StateEngine.random_state([2, 2], rng)
        oracle = InvariantEngine.det_concurrence(state).derived_concurrence
        two_err = max(two_err, abs(OrbitEngine.concurrence(state, pair, flow) - oracle))

    three_err = 0.0
    for _ in range(profile.three_qubit_states):
        state = StateEngine.random_state([2, 2, 2], rng)
        oracle = InvariantEngine.cayley_hyperdet(state).derived_concurrence
        three_err = max(three_err, abs(OrbitEngine.concurrence(state, triple, flow) - oracle))

    ghz = StateEngine.ghz_state(3)
    ghz_mu = OrbitEngine.concurrence(ghz, triple, flow)
    ghz_tau = InvariantEngine.three_tangle(ghz)
    w = StateEngine.w_state(3)
    w_result = OrbitEngine.analyse(w, triple, flow)
    w_det = InvariantEngine.cayley_hyperdet(w).value

    passed = (two_err <= 1e-6 and three_err <= 1e-4
              and abs(ghz_mu - 1.0) <= 1e-6 and abs(ghz_tau - 1.0) <= 1e-12
              and w_result.stability == UNSTABLE and w_result.norm_history[-1] < 1e-6
              and w_det == 0)
    return passed, {
        'two_qubit_error': two_err,
        'three_qubit_error': three_err,
        'ghz_concurrence': ghz_mu,
        'ghz_tangle': ghz_tau,
        'w_stability': w_result.stability,
        'w_final_norm2': w_result.norm_history[-1],
        'w_hyperdet': [w_det.real, w_det.imag],
    }


def check_spin1_concurrence(settings: Settings, profile: Profile, rng: np.random.Generator) -> Outcome:
    basis = RepresentationEngine.spin_generators(2)
    err = 0.0
    for _ in range(profile.spin1_states):
        state = StateEngine.random_state([3], rng)
        oracle = abs(MajoranaEngine.spin1_invariants(MajoranaEngine.spin1_to_cartesian(state)).bilinear_square)
        err = max(err, abs(OrbitEngine.concurrence(state, basis, settings.flow) - oracle))
    return err <= 1e-6, {'max_error': err}


def check_gradient(settings: Settings, profile: Profile, rng: np.random.Generator) -> Outcome:
    systems = [([4], RepresentationEngine.spin_generators(3)),
               ([2, 2], RepresentationEngine.local_algebra([2, 2])),
               ([2, 3], RepresentationEngine.local_algebra([2, 3]))]
    worst = 0.0
    for k in range(profile.gradient_pairs):
        dims, basis = systems[k % len(systems)]
        state = StateEngine.random_state(dims, rng)
        fd, analytic = OrbitEngine.finite_difference_gradient(state, basis, rng.normal(size=len(basis)), eps=1e-6)
        worst = max(worst, abs(fd - analytic) / max(abs(analytic), 1e-3))
    return worst <= 1e-4, {'max_relative_error': worst}


# -- Majorana ----------------------------------------------------------------

def curated_spin_states() -> List[Tuple[int, PureState]]:
    """Spin states whose balance is known exactly."""
    states = []
    for two_s in range(1, 7):
        cat = np.zeros(two_s + 1, dtype=complex)
        cat[0], cat[-1] = 1.0, -1.0
        states.append((two_s, StateEngine.from_amplitudes([two_s + 1], cat, label="cat")))
        states.append((two_s, StateEngine.spin_coherent_state(two_s, 1.1, 0.4)))
        if two_s % 2 == 0:
            states.append((two_s, StateEngine.spin_state(two_s, 0)))
    tetra = np.array([1.0, 0.0, 0.0, math.sqrt(2.0), 0.0], dtype=complex)
    states.append((4, StateEngine.from_amplitudes([5], tetra, label="tetrahedral")))
    return states


def curated_root_configurations() -> List[RootConfiguration]:
    """Exact multiplicity patterns on both sides of the Hilbert-Mumford boundary."""
    w = np.exp(2j * np.pi / 3.0)
    six = [np.exp(2j * np.pi * k / 6.0) for k in range(6)]
    patterns = [
        ([0], 0, 1),
        ([0, 0], 0, 2), ([0], 1, 2), ([0, 1], 0, 2),
        ([0, 0, 0], 0, 3), ([0, 0, 1], 0, 3), ([0, 1, -1], 0, 3), ([1, w, w * w], 0, 3),
        ([0, 0, 0, 1], 0, 4), ([0, 0, 1, 1], 0, 4), ([0, 0, 1, -1], 0, 4), ([0, 0], 2, 4),
        ([1, -1, 1j, -1j], 0, 4), ([0, 0, 0, 0], 0, 4),
        ([0, 0, 0, 1, 2], 0, 5), ([0, 0, 1, 1, 2], 0, 5),
        ([0, 0, 0, 1, 1, 1], 0, 6), ([0, 0, 0, 1, 2, 3], 0, 6), ([0, 0, 0, 0, 1, 2], 0, 6),
        (six, 0, 6),
    ]
    return [RootConfiguration(tuple(roots), inf, two_s) for roots, inf, two_s in patterns]


def check_majorana(settings: Settings, profile: Profile, rng: np.random.Generator) -> Outcome:
    samples = list(curated_spin_states())
    for two_s in range(1, 7):
        samples += [(two_s, StateEngine.random_state([two_s + 1], rng)) for _ in range(profile.majorana_random)]

    balance_mismatch = 0
    fidelity = 1.0
    for two_s, state in samples:
        basis = RepresentationEngine.spin_generators(two_s)
        balanced = MajoranaEngine.balance_residual(state, two_s) <= 1e-8
        centred = FluctuationEngine.entanglement_residual(state, basis) <= 1e-8
        balance_mismatch += balanced != centred
        rebuilt = MajoranaEngine.from_roots(MajoranaEngine.to_roots(state, two_s))
        fidelity = min(fidelity, abs(np.vdot(rebuilt.amplitudes, state.unit())) ** 2)

    hm_mismatch = []
    for config in curated_root_configurations():
        state = MajoranaEngine.from_roots(config)
        basis = RepresentationEngine.spin_generators(config.two_s)
        flow_unstable = OrbitEngine.classify(state, basis, settings.flow) in (COHERENT, UNSTABLE)
        hm_unstable = MajoranaEngine.hm_classify(config) == HM_UNSTABLE
        if flow_unstable != hm_unstable:
            hm_mismatch.append(config.to_dict())

    passed = balance_mismatch == 0 and not hm_mismatch and fidelity >= 1.0 - 1e-8
    return passed, {
        'states': len(samples),
        'balance_mismatches': balance_mismatch,
        'hm_mismatches': hm_mismatch,
        'min_fidelity': fidelity,
    }


# -- Bipartite and CHSH ------------------------------------------------------

def check_schmidt_entropy(settings: Settings, profile: Profile, rng: np.random.Generator) -> Outcome:
    bell = StateEngine.entropy(StateEngine.bell_state())
    qutrits = StateEngine.entropy(StateEngine.max_entangled(3))
    shapes = [(2, 3), (3, 3), (2, 4), (3, 5)]
    iso_err = 0.0
    for k in range(profile.bipartite_states):
        dims = shapes[k % len(shapes)]
        left, right = StateEngine.spectra(StateEngine.random_state(dims, rng))
        r = min(dims)
        iso_err = max(iso_err, float(np.max(np.abs(left[:r] - right[:r]))))
    passed = abs(bell - 1.0) <= 1e-10 and abs(qutrits - math.log2(3.0)) <= 1e-10 and iso_err <= 1e-10
    return passed, {'bell_ebits': bell, 'qutrit_ebits': qutrits, 'isospectral_error': iso_err}


def check_chsh(settings: Settings, profile: Profile, rng: np.random.Generator) -> Outcome:
    singlet = BellEngine.chsh_value(StateEngine.singlet(), *BellEngine.chsh_optimal_directions())
    lowest = math.inf
    for _ in range(profile.product_states):
        state = StateEngine.product_state(rng.normal(size=2) + 1j * rng.normal(size=2),
                                          rng.normal(size=2) + 1j * rng.normal(size=2))
        dirs = [_random_direction(rng) for _ in range(4)]
        lowest = min(lowest, BellEngine.chsh_value(state, *dirs))
    passed = abs(singlet - (2.0 - 2.0 * math.sqrt(2.0))) <= 1e-9 and lowest >= -1e-9
    return passed, {'singlet_value': singlet, 'min_product_value': lowest}


CHECKS: List[Tuple[str, Callable[[Settings, Profile, np.random.Generator], Outcome]]] = [
    ("pentagram_axis_value", check_pentagram_axis),
    ("pentagram_spectral_laws", check_pentagram_spectra),
    ("coherent_safety", check_coherent_safety),
    ("noncoherent_violation", check_noncoherent_violation),
    ("casimir_scalars", check_casimir),
    ("variance_range", check_variance_range),
    ("flow_vs_invariants", check_flow_vs_invariants),
    ("spin1_concurrence", check_spin1_concurrence),
    ("gradient_check", check_gradient),
    ("majorana_consistency", check_majorana),
    ("schmidt_entropy", check_schmidt_entropy),
    ("chsh", check_chsh),
]

CHECK_NAMES = tuple(name for name, _ in CHECKS)


def run_selftest(settings: Optional[Settings] = None, profile: Profile = FULL,
                 only: Optional[Sequence[str]] = None) -> List[CheckResult]:
    """Run the checks (or the named subset) and collect their results."""
    settings = settings or Settings()
    results = []
    for position, (name, check) in enumerate(CHECKS):
        if only and name not in only:
            continue
        rng = np.random.default_rng([settings.seed, position])
        try:
            passed, detail = check(settings, profile, rng)
        except GitangleError as exc:
            passed, detail = False, {'error': str(exc)}
        logger.info("CHECK_DONE name=%s passed=%s", name, passed)
        results.append(CheckResult(name, bool(passed), detail))
    return results
