"""Synthesis loop: outcomes, budgets, refinement, certification."""

import pytest

from petrisep import (
    HalfSpace,
    Instance,
    LoopBudget,
    Mode,
    Outcome,
    PetriNet,
    SmtSession,
    SolverConfig,
    SynthesisResult,
    SynthesisStats,
    Transition,
    certify,
    check_net,
    nontrivial_certificate,
    nontrivial_net,
    synthesize,
    verify_separator,
)
from petrisep.cegar import initial_bound
from petrisep.formula import is_multiple_of

from conftest import needs_solver, two_place_instance


def test_loop_budget_validation():
    LoopBudget()
    with pytest.raises(ValueError):
        LoopBudget(max_iterations=0)
    with pytest.raises(ValueError):
        LoopBudget(max_seconds=0)
    with pytest.raises(ValueError):
        LoopBudget(max_bound=0)


def test_initial_bound_covers_instance_entries():
    assert initial_bound(two_place_instance()) == 10
    big = Instance(
        PetriNet(("p",), (Transition("t", (25,), (0,)),)), (30,), (0,), Mode.REACH
    )
    assert initial_bound(big) == 30


def test_stats_json_round_trip():
    stats = SynthesisStats(3, 17, 0.5, 20, False, ((1, -2), (3, 4)))
    assert SynthesisStats.from_json(stats.to_json()) == stats


@needs_solver
def test_synthesize_running_example(two_place):
    result = synthesize(two_place)
    assert result.outcome is Outcome.FOUND
    hs = result.halfspace
    assert hs is not None
    assert result.separator.ok
    assert result.inductivity.inductive
    # independent re-check, not trusting the stored verdicts
    assert verify_separator(two_place, hs).ok
    assert check_net(two_place.net, hs).inductive
    assert result.stats.solver_queries > 0
    assert result.stats.wall_seconds >= 0


@needs_solver
def test_synthesize_result_json_round_trip(two_place):
    result = synthesize(two_place)
    again = SynthesisResult.from_json(result.to_json())
    assert again == result


@needs_solver
def test_synthesize_cover_mode_on_coverable_target_refutes():
    # (0, 4) is coverable from (3, 1), so no certificate can exist.
    result = synthesize(two_place_instance(Mode.COVER))
    assert result.outcome is Outcome.NO_SEPARATOR
    assert result.halfspace is None


@needs_solver
def test_synthesize_reports_no_separator_when_target_equals_start():
    net = PetriNet(("p", "q"), (Transition("t", (1, 0), (0, 1)),))
    inst = Instance(net, (2, 2), (2, 2), Mode.REACH)
    result = synthesize(inst)
    assert result.outcome is Outcome.NO_SEPARATOR


@needs_solver
def test_synthesize_net_without_transitions_uses_fast_path():
    net = PetriNet(("p", "q"), ())
    inst = Instance(net, (1, 0), (0, 1), Mode.REACH)
    result = synthesize(inst)
    assert result.outcome is Outcome.FOUND
    assert result.stats.fast_path
    assert result.stats.iterations <= 1


@needs_solver
def test_synthesize_nontrivial_family_member():
    inst = nontrivial_net(3)
    result = synthesize(inst)
    assert result.outcome is Outcome.FOUND
    assert not result.stats.fast_path  # no trivial separator exists
    assert check_net(inst.net, result.halfspace).inductive
    assert verify_separator(inst, result.halfspace).ok


@needs_solver
def test_examined_candidates_are_primitive_and_pairwise_not_multiples():
    inst = nontrivial_net(3)
    result = synthesize(inst)
    seen = result.stats.examined
    assert seen, "loop should have examined at least one candidate"
    from math import gcd

    for k in seen:
        assert gcd(*k) == 1
    for i, a in enumerate(seen):
        for b in seen[i + 1 :]:
            assert not is_multiple_of(b, a), (a, b)


@needs_solver
def test_shared_session_is_reused_across_calls(two_place):
    cfg = SolverConfig()
    with SmtSession(cfg) as session:
        r1 = synthesize(two_place, cfg, session=session)
        r2 = synthesize(nontrivial_net(3), cfg, session=session)
        assert r1.outcome is Outcome.FOUND
        assert r2.outcome is Outcome.FOUND
        assert session.queries >= r1.stats.solver_queries + r2.stats.solver_queries


@needs_solver
def test_budget_exhaustion_is_reported():
    # A reachable target: candidates keep failing until the iteration
    # budget runs out or the formula itself becomes unsatisfiable.
    net = PetriNet(
        ("p", "q"),
        (Transition("a", (1, 0), (0, 1)), Transition("b", (0, 1), (1, 0))),
    )
    inst = Instance(net, (1, 0), (0, 1), Mode.REACH)
    result = synthesize(inst, budget=LoopBudget(max_iterations=1, max_seconds=20))
    assert result.outcome in (Outcome.EXHAUSTED, Outcome.NO_SEPARATOR)
    assert result.halfspace is None


@needs_solver
def test_minimize_and_incremental_toggles_do_not_change_verdicts(two_place):
    for cfg in (
        SolverConfig(minimize=False),
        SolverConfig(incremental=False),
        SolverConfig(minimize=False, incremental=False),
    ):
        result = synthesize(two_place, cfg)
        assert result.outcome is Outcome.FOUND
        assert verify_separator(two_place, result.halfspace).ok
        assert check_net(two_place.net, result.halfspace).inductive


def test_certify_accepts_known_certificate():
    inst = nontrivial_net(4)
    report = certify(inst, nontrivial_certificate(4))
    assert report.ok
    assert report.separator.ok
    assert report.inductivity.inductive
    assert all(v is True for _, v in report.oracle)


def test_certify_rejects_shifted_threshold(two_place):
    report = certify(two_place, HalfSpace((3, 2), 8))
    assert not report.ok
    assert not report.inductivity.inductive


def test_certify_oracle_budget_shows_as_none(two_place):
    report = certify(two_place, HalfSpace((3, 2), 9), oracle_points=1)
    assert report.separator.ok and report.inductivity.inductive
    assert any(v is None for _, v in report.oracle)
    assert report.ok  # budget exhaustion is not a refutation


def test_certificate_report_json_round_trip(two_place):
    report = certify(two_place, HalfSpace((3, 2), 9))
    from petrisep import CertificateReport

    assert CertificateReport.from_json(report.to_json()) == report
