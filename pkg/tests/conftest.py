"""Shared fixtures: the running two-place example and solver availability."""

import pytest

from petrisep import Instance, Mode, PetriNet, Transition
from petrisep.solver import SolverNotFoundError, discover_solver


def two_place_instance(mode: Mode = Mode.REACH) -> Instance:
    """Two places, three transitions; (0, 4) is unreachable from (3, 1)."""
    t = Transition("t", (2, 1), (1, 2))
    u = Transition("u", (1, 2), (0, 4))
    v = Transition("v", (1, 0), (2, 1))
    return Instance(PetriNet(("p1", "p2"), (t, u, v)), (3, 1), (0, 4), mode)


@pytest.fixture
def two_place() -> Instance:
    return two_place_instance()


def _solver_available() -> bool:
    try:
        discover_solver()
    except SolverNotFoundError:
        return False
    return True


HAVE_SOLVER = _solver_available()

needs_solver = pytest.mark.skipif(
    not HAVE_SOLVER, reason="no SMT backend found (need z3 or node with z3-solver)"
)


@pytest.fixture
def announce(capsys):
    """Print a line that survives pytest's capture."""

    def emit(line: str) -> None:
        with capsys.disabled():
            print(line, flush=True)

    return emit
