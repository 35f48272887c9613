"""Constraint formulas over k: local evaluation, SMT rendering, exclusion."""

import itertools
import random

import pytest

from petrisep import Mode, constants_for_instance, random_instance
from petrisep.formula import (
    Atom,
    Conj,
    Disj,
    Divides,
    Neg,
    bound_constraint,
    evaluate,
    exclude_multiples,
    is_multiple_of,
    separation_condition,
    separator_formula,
    to_smt,
    transition_formula,
    trivial_separator_formula,
)

from conftest import two_place_instance


def test_atom_evaluation():
    assert evaluate(Atom((2, -1), ">=", 3), (2, 1))
    assert not evaluate(Atom((2, -1), ">", 3), (2, 1))
    assert evaluate(Atom((1, 0), "=", 5), (5, 9))
    assert evaluate(Atom((0, 1), "<=", 0), (5, -2))
    assert evaluate(Atom((0, 1), "<", 0), (5, -2))
    with pytest.raises(ValueError):
        Atom((1,), "!=", 0)


def test_divides_normalizes_and_evaluates():
    d = Divides(0, -3)
    assert d.divisor == 3
    assert evaluate(d, (9, 1))
    assert not evaluate(d, (10, 1))
    with pytest.raises(ValueError):
        Divides(0, 0)


def test_connectives():
    top = Conj(())
    bottom = Disj(())
    assert evaluate(top, (0,))
    assert not evaluate(bottom, (0,))
    assert evaluate(Neg(bottom), (0,))
    f = Disj((Atom((1,), ">=", 5), Conj((Atom((1,), "<", 0), Neg(Divides(0, 2))))))
    assert evaluate(f, (7,))
    assert evaluate(f, (-3,))
    assert not evaluate(f, (-4,))


def test_smt_rendering():
    assert to_smt(Atom((3, -2), ">=", -4), ["k0", "k1"]) == (
        "(>= (+ (* 3 k0) (* (- 2) k1)) (- 4))"
    )
    assert to_smt(Atom((0, 1), "<", 2), ["k0", "k1"]) == "(< k1 2)"
    assert to_smt(Atom((0,), "=", 0), ["k0"]) == "(= 0 0)"
    assert to_smt(Divides(1, 4), ["a", "b"]) == "(= (mod b 4) 0)"
    assert to_smt(Conj(()), []) == "true"
    assert to_smt(Disj(()), []) == "false"
    assert (
        to_smt(Neg(Conj((Atom((1,), ">", 0),))), ["x"]) == "(not (and (> x 0)))"
    )


def test_separation_condition(two_place):
    f = separation_condition(two_place)
    assert evaluate(f, (3, 2))  # 11 > 8
    assert not evaluate(f, (1, 1))  # 4 > 4 fails


def test_bound_constraint():
    f = bound_constraint(2, 3)
    assert evaluate(f, (3, -3))
    assert not evaluate(f, (4, 0))
    assert not evaluate(f, (0, -4))
    with pytest.raises(ValueError):
        bound_constraint(2, 0)


def box(n: int, radius: int):
    return itertools.product(range(-radius, radius + 1), repeat=n)


def test_is_multiple_of_matches_definition():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(1, 3)
        k_hat = tuple(rng.randint(-3, 3) for _ in range(n))
        if all(x == 0 for x in k_hat):
            continue
        for k in box(n, 7):
            expected = any(
                all(x == a * y for x, y in zip(k, k_hat)) for a in range(1, 9)
            )
            assert is_multiple_of(k, k_hat) == expected, (k, k_hat)


def test_exclude_multiples_cuts_exactly_the_multiples():
    rng = random.Random(6)
    from math import gcd

    for _ in range(120):
        n = rng.randint(1, 3)
        k_hat = tuple(rng.randint(-3, 3) for _ in range(n))
        if all(x == 0 for x in k_hat) or gcd(*k_hat) != 1:
            continue
        f = exclude_multiples(k_hat)
        for k in box(n, 7):
            assert evaluate(f, k) == (not is_multiple_of(k, k_hat)), (k, k_hat)


def test_exclude_multiples_rejects_bad_pivots():
    with pytest.raises(ValueError):
        exclude_multiples((0, 0))
    with pytest.raises(ValueError):
        exclude_multiples((2, 4))


def test_trivial_formula_implies_full_formula():
    for seed in range(40):
        inst = random_instance(
            seed, places=2, transitions=2, max_flow=3, max_marking=3
        )
        full = separator_formula(inst)
        triv = trivial_separator_formula(inst)
        for k in box(2, 4):
            if evaluate(triv, k):
                assert evaluate(full, k), (seed, k)


def test_separator_formula_is_necessary_for_workable_vectors():
    """Any k that admits a threshold must satisfy the synthesis formula.

    The converse does not hold (the formula over-approximates; the exact
    constant generator prunes the rest), so only necessity is asserted.
    """
    for seed in range(60):
        inst = random_instance(
            seed, places=2, transitions=2, max_flow=3, max_marking=3
        )
        full = separator_formula(inst)
        for k in box(2, 4):
            if all(x == 0 for x in k):
                continue
            report = constants_for_instance(inst, k)
            if report.chosen is not None:
                assert evaluate(full, k), (seed, k, report.chosen)


def test_separator_formula_cover_mode_requires_nonpositive_k():
    inst = two_place_instance(Mode.COVER)
    f = separator_formula(inst)
    for k in box(2, 4):
        if any(x > 0 for x in k):
            assert not evaluate(f, k), k


def test_transition_formula_bundles_separation(two_place):
    t = two_place.net.transitions[0]
    f = transition_formula(two_place, t)
    assert evaluate(f, (3, 2))
    assert not evaluate(f, (1, 1))  # separation fails even though t is fine
