"""Analyse one JSON state file with the default system for its dims."""

import sys

from gitangle.statefile import load_state
from gitangle.toolkit import Toolkit


def run_file(path: str, kit: Toolkit = None) -> dict:
    """Variance and orbit summary of the state in path. Returns both reports."""
    kit = kit or Toolkit()
    state = load_state(path)
    basis = kit.system(None, state)

    variance = kit.variance_report(state, basis)
    orbit = kit.orbit_report(state, basis)

    print(f"\n=== {path}: dims {list(state.dims)} on {basis.label} ===")
    print(f"  total variance   {variance['total_variance']:.6f}")
    print(f"  coherence        {variance['coherence_verdict']}")
    print(f"  stability        {orbit['stability']}")
    print(f"  concurrence      {orbit['concurrence']:.6f}")
    return {'variance': variance, 'orbit': orbit}


if __name__ == "__main__":
    if len(sys.argv) < 2:
        print("Usage: python run_gitangle.py <state.json>")
        sys.exit(1)
    run_file(sys.argv[1])
