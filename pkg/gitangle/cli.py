"""gitangle CLI - analyse states against their dynamical symmetry group."""

import argparse
import logging
import math
import sys
from typing import List, Optional

from gitangle.config import Settings
from gitangle.exceptions import (
    BudgetExhaustedError,
    GitangleError,
    NumericalFailureError,
    ValidationError,
)
from gitangle.modules.ent_bell import BASES
from gitangle.modules.ent_orbit import SEMISTABLE_BOUNDARY
from gitangle.modules.ent_states import PureState, StateEngine
from gitangle.selftest import CHECK_NAMES, FULL, QUICK, run_selftest
from gitangle.statefile import dumps, load_params, load_state_file
from gitangle.toolkit import Toolkit
from gitangle.version import get_version

logger = logging.getLogger("gitangle.cli")

BANNER = r"""
        _ _                    _
   __ _(_) |_ __ _ _ __   __ _| | ___
  / _` | | __/ _` | '_ \ / _` | |/ _ \
 | (_| | | || (_| | | | | (_| | |  __/
  \__, |_|\__\__,_|_| |_|\__, |_|\___|
  |___/                  |___/
 Entanglement relative to a dynamical symmetry group
"""

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_INCONCLUSIVE = 3


class _Parser(argparse.ArgumentParser):
    """argparse with one-line errors and the validation exit code."""

    def error(self, message: str):
        self.exit(EXIT_VALIDATION, f"error: {message} (see '{self.prog} --help')\n")


class _Run:
    """Loaded inputs shared by the analysis subcommands."""

    def __init__(self, args: argparse.Namespace, state_required: bool = True):
        self.args = args
        self.settings: Settings = load_params(args.params, seed=args.seed)
        self.toolkit = Toolkit(self.settings)
        self.document = None
        self.state: Optional[PureState] = None
        if args.state:
            self.document = load_state_file(args.state)
            self.state = self.document.to_state()
        elif state_required:
            raise ValidationError(f"'{args.command}' needs a state: pass --state <file.json>.")

    def system_spec(self) -> Optional[str]:
        return self.args.system

    def report(self, system: Optional[str], result: dict) -> dict:
        return {
            'gitangle_version': get_version(),
            'command': self.args.command,
            'input': self.document.model_dump() if self.document is not None else None,
            'system': system,
            'parameters': self.settings.to_dict(),
            'result': result,
        }


# ── Output ─────────────────────────────────────────────────

def _format(value) -> str:
    if isinstance(value, bool) or value is None:
        return str(value).lower() if value is not None else "none"
    if isinstance(value, float):
        return f"{value:.6f}" if math.isfinite(value) else str(value)
    return str(value)


def _print_tree(doc: dict, indent: int = 2):
    for key, value in doc.items():
        if key == 'type':
            continue
        if isinstance(value, dict):
            print(" " * indent + f"{key}:")
            _print_tree(value, indent + 2)
        elif isinstance(value, list) and value and isinstance(value[0], (list, dict)):
            print(" " * indent + f"{key}: [{len(value)} entries]")
        elif isinstance(value, list):
            print(" " * indent + f"{key}: " + ", ".join(_format(v) for v in value))
        else:
            print(" " * indent + f"{key}: {_format(value)}")


def _emit(args: argparse.Namespace, report: dict):
    if args.json:
        print(dumps(report))
        return
    print(f"gitangle {report['command']}  (v{report['gitangle_version']})")
    if report.get('system'):
        print(f"  system: {report['system']}")
    if report.get('input'):
        print(f"  state: dims={report['input']['dims']} label={report['input']['label'] or '-'}")
    _print_tree(report['result'])


# ── Subcommands ────────────────────────────────────────────

def cmd_classify(args) -> int:
    """Kempf-Ness flow: stability class and generalized concurrence."""
    run = _Run(args)
    basis = run.toolkit.system(run.system_spec(), run.state)
    result = run.toolkit.orbit_report(run.state, basis)
    _emit(args, run.report(basis.label, result))
    return EXIT_INCONCLUSIVE if result['stability'] == SEMISTABLE_BOUNDARY else EXIT_OK


def cmd_concurrence(args) -> int:
    """Flow concurrence next to the closed-form invariant when one applies."""
    run = _Run(args)
    basis = run.toolkit.system(run.system_spec(), run.state)
    orbit = run.toolkit.orbit_report(run.state, basis)
    result = {
        'type': 'CONCURRENCE',
        'concurrence': orbit['concurrence'],
        'stability': orbit['stability'],
        'iterations': orbit['iterations'],
        'final_gradient_norm': orbit['final_gradient_norm'],
    }
    if run.toolkit.invariants.report(run.state) is not None:
        result['invariant'] = run.toolkit.invariant_report(run.state)
    _emit(args, run.report(basis.label, result))
    return EXIT_INCONCLUSIVE if orbit['stability'] == SEMISTABLE_BOUNDARY else EXIT_OK


def cmd_variance(args) -> int:
    """Total variance, moment vector and coherence test."""
    run = _Run(args)
    basis = run.toolkit.system(run.system_spec(), run.state)
    _emit(args, run.report(basis.label, run.toolkit.variance_report(run.state, basis)))
    return EXIT_OK


def cmd_schmidt(args) -> int:
    """Schmidt coefficients and entanglement entropy of a bipartite state."""
    run = _Run(args)
    _emit(args, run.report(None, run.toolkit.schmidt_report(run.state)))
    return EXIT_OK


def cmd_invariants(args) -> int:
    """Determinant or hyperdeterminant invariant."""
    run = _Run(args)
    _emit(args, run.report(None, run.toolkit.invariant_report(run.state)))
    return EXIT_OK


def cmd_majorana(args) -> int:
    """Roots, star points and Hilbert-Mumford class of a spin state."""
    run = _Run(args)
    basis = run.toolkit.system(run.system_spec(), run.state)
    two_s = run.toolkit.repn.spin_of(basis)
    if two_s is None:
        raise ValidationError(f"majorana needs a spin system (spin:<two_s>), got {basis.label}.")
    _emit(args, run.report(basis.label, run.toolkit.majorana_report(run.state, two_s)))
    return EXIT_OK


def cmd_pentagram(args) -> int:
    """Pentagram inequality for a spin-1 state, optionally searching for a violation."""
    run = _Run(args)
    result = run.toolkit.pentagram_report(run.state, basis=args.basis, search=args.search)
    _emit(args, run.report("spin:2", result))
    return EXIT_OK


def cmd_chsh(args) -> int:
    """CHSH functional of a two-qubit state (singlet when no state is given)."""
    run = _Run(args, state_required=False)
    state = run.state if run.state is not None else StateEngine.singlet()
    if args.angles is None:
        dirs = run.toolkit.bell.chsh_optimal_directions()
        angles = [0.0, 90.0, 45.0, 135.0]
    else:
        angles = list(args.angles)
        dirs = [[math.sin(math.radians(a)), 0.0, math.cos(math.radians(a))] for a in angles]
    value = run.toolkit.bell.chsh_value(state, *dirs)
    result = {
        'type': 'CHSH',
        'state_label': state.label,
        'angles_deg': angles,
        'chsh_value': value,
        'violated': value < -1e-9,
    }
    _emit(args, run.report("local:2x2", result))
    return EXIT_OK


def cmd_selftest(args) -> int:
    """Run the acceptance checks and print a pass/fail table."""
    settings = load_params(args.params, seed=args.seed)
    profile = QUICK if args.quick else FULL
    results = run_selftest(settings, profile, only=args.check)
    failed = [r.name for r in results if not r.passed]
    if args.json:
        print(dumps({
            'gitangle_version': get_version(),
            'command': 'selftest',
            'profile': 'quick' if args.quick else 'full',
            'parameters': settings.to_dict(),
            'results': [r.to_dict() for r in results],
        }))
    else:
        width = max(len(name) for name in CHECK_NAMES)
        print(f"gitangle selftest  (v{get_version()}, seed {settings.seed})")
        for r in results:
            print(f"  {r.name:<{width}}  {'PASS' if r.passed else 'FAIL'}")
        print(f"  {len(results) - len(failed)}/{len(results)} passed")
    return EXIT_VALIDATION if failed else EXIT_OK


def cmd_version(args) -> int:
    """Print version information."""
    print(BANNER.strip("\n"))
    print(f"v{get_version()}")
    return EXIT_OK


# ── Entry point ────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--system', help="spin:<two_s> | local:<d1>x<d2>[x...] | sym:<d>^<n> | wedge:<d>^<n>")
    common.add_argument('--state', help='Path to a JSON state file')
    common.add_argument('--params', help='Path to a JSON params file (flow, search, dimension_cap, seed)')
    common.add_argument('--json', action='store_true', help='Emit the report as JSON')
    common.add_argument('--seed', type=int, help='Seed for every stochastic component')
    common.add_argument('-v', '--verbose', action='count', default=0, help='-v for info logs, -vv for debug')

    parser = _Parser(prog='gitangle', description='gitangle - entanglement relative to a dynamical symmetry group')
    subparsers = parser.add_subparsers(dest='command', parser_class=_Parser, metavar='command')

    for name, func, text in (
        ('classify', cmd_classify, 'Stability class from the Kempf-Ness flow'),
        ('concurrence', cmd_concurrence, 'Generalized concurrence'),
        ('variance', cmd_variance, 'Total variance and coherence'),
        ('schmidt', cmd_schmidt, 'Schmidt decomposition and entropy'),
        ('invariants', cmd_invariants, 'Determinant / hyperdeterminant invariants'),
        ('majorana', cmd_majorana, 'Majorana roots and stars of a spin state'),
    ):
        sub = subparsers.add_parser(name, parents=[common], help=text)
        sub.set_defaults(func=func)

    pent = subparsers.add_parser('pentagram', parents=[common], help='Pentagram inequality for spin 1')
    pent.add_argument('--basis', choices=BASES, default='spin', help='Amplitude basis of the spin-1 state')
    pent.add_argument('--search', action='store_true', help='Search for a violating pentagram')
    pent.set_defaults(func=cmd_pentagram)

    chsh = subparsers.add_parser('chsh', parents=[common], help='CHSH functional of two qubits')
    chsh.add_argument('--angles', type=float, nargs=4, metavar=('A1', 'A2', 'B1', 'B2'),
                      help='Directions in the x-z plane, degrees from z')
    chsh.set_defaults(func=cmd_chsh)

    test = subparsers.add_parser('selftest', parents=[common], help='Run the acceptance checks')
    test.add_argument('--quick', action='store_true', help='Reduced sample sizes')
    test.add_argument('--check', action='append', choices=CHECK_NAMES, help='Run only this check (repeatable)')
    test.set_defaults(func=cmd_selftest)

    ver = subparsers.add_parser('version', help='Print version')
    ver.set_defaults(func=cmd_version, verbose=0)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """Parse argv, dispatch, and map errors to exit codes."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        print(BANNER.strip("\n"))
        parser.print_help()
        return EXIT_OK

    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s %(message)s")

    try:
        return args.func(args)
    except BudgetExhaustedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except NumericalFailureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except GitangleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
