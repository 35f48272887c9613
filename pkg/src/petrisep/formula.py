"""Linear constraints over the unknown coefficient vector k.

The synthesis formula characterizes exactly those k for which some
threshold c makes (k, c) inductive for every transition and separating
for the instance. Atoms keep concrete integer coefficients so formulas
can be both evaluated locally (exact arithmetic) and emitted as SMT-LIB2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .net import Instance, IntVector, Mode, Transition, vec_add, vec_sub

Formula = Union["Atom", "Divides", "Conj", "Disj", "Neg"]

_RELS = {">=", ">", "=", "<=", "<"}


@dataclass(frozen=True)
class Atom:
    """coeffs . k REL rhs with concrete integer coefficients."""

    coeffs: IntVector
    rel: str
    rhs: int

    def __post_init__(self):
        if self.rel not in _RELS:
            raise ValueError(f"bad relation {self.rel!r}")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))


@dataclass(frozen=True)
class Divides:
    """divisor | k(index), divisor a concrete nonzero integer."""

    index: int
    divisor: int

    def __post_init__(self):
        if self.divisor == 0:
            raise ValueError("zero divisor")
        object.__setattr__(self, "divisor", abs(self.divisor))


@dataclass(frozen=True)
class Conj:
    parts: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class Disj:
    parts: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class Neg:
    inner: Formula


def evaluate(f: Formula, k: Sequence[int]) -> bool:
    """Evaluate under the assignment k with exact integer arithmetic."""
    if isinstance(f, Atom):
        lhs = sum(c * v for c, v in zip(f.coeffs, k))
        if f.rel == ">=":
            return lhs >= f.rhs
        if f.rel == ">":
            return lhs > f.rhs
        if f.rel == "=":
            return lhs == f.rhs
        if f.rel == "<=":
            return lhs <= f.rhs
        return lhs < f.rhs
    if isinstance(f, Divides):
        return k[f.index] % f.divisor == 0
    if isinstance(f, Conj):
        return all(evaluate(p, k) for p in f.parts)
    if isinstance(f, Disj):
        return any(evaluate(p, k) for p in f.parts)
    if isinstance(f, Neg):
        return not evaluate(f.inner, k)
    raise TypeError(f"not a formula: {f!r}")


def _unit(n: int, i: int, value: int = 1) -> IntVector:
    v = [0] * n
    v[i] = value
    return tuple(v)


def _sign_conj(n: int, rel: str) -> Conj:
    """k >= 0 (rel '>=') or k <= 0 (rel '<=') componentwise."""
    return Conj(tuple(Atom(_unit(n, i), rel, 0) for i in range(n)))


def separation_condition(inst: Instance) -> Atom:
    """k . m_init > k . m_final: some threshold can split the markings."""
    return Atom(vec_sub(inst.m_init, inst.m_final), ">", 0)


def transition_options(inst: Instance, t: Transition) -> Disj:
    """Ways a transition can admit a separating inductive threshold.

    Either firing never lowers the product; or k <= 0 with the enabling
    products strictly below k.m_init (a threshold just above them still
    admits m_init); or k >= 0 with the fired products strictly above
    k.m_final; or k is sign-pure and every nonzero |k(i)| spans the drop
    -k.delta, which makes a non-trivial threshold exist.
    """
    n = inst.net.n
    oriented = Atom(t.delta, ">=", 0)
    antitone = Conj(
        (_sign_conj(n, "<="), Atom(vec_sub(inst.m_init, t.pre), ">", 0))
    )
    monotone = Conj(
        (_sign_conj(n, ">="), Atom(vec_sub(t.post, inst.m_final), ">", 0))
    )
    sign_pure = Disj((_sign_conj(n, ">="), _sign_conj(n, "<=")))
    spans = []
    for i in range(n):
        e_i = _unit(n, i)
        spans.append(
            Disj(
                (
                    Atom(e_i, "=", 0),
                    Atom(vec_add(e_i, t.delta), ">=", 0),  # k(i) >= -k.delta
                    Atom(vec_sub(t.delta, e_i), ">=", 0),  # -k(i) >= -k.delta
                )
            )
        )
    wide_enough = Conj(tuple(spans))
    return Disj((oriented, antitone, monotone, Conj((sign_pure, wide_enough))))


def transition_formula(inst: Instance, t: Transition) -> Conj:
    """Separation plus the admissibility disjunction for one transition."""
    return Conj((separation_condition(inst), transition_options(inst, t)))


def _cover_parts(inst: Instance) -> tuple[Formula, ...]:
    if inst.mode is not Mode.COVER:
        return ()
    return (_sign_conj(inst.net.n, "<="),)


def separator_formula(inst: Instance) -> Conj:
    """Exactly the k admitting a separating inductive threshold.

    Cover mode appends k <= 0, which characterizes half spaces disjoint
    from the whole upward closure of the target.
    """
    parts: list[Formula] = [separation_condition(inst)]
    parts.extend(transition_options(inst, t) for t in inst.net.transitions)
    parts.extend(_cover_parts(inst))
    return Conj(tuple(parts))


def trivial_separator_formula(inst: Instance) -> Conj:
    """Fast-path variant: every transition must fall in a cheap case."""
    parts: list[Formula] = [separation_condition(inst)]
    for t in inst.net.transitions:
        opts = transition_options(inst, t)
        parts.append(Disj(opts.parts[:3]))  # drop the non-trivial branch
    parts.extend(_cover_parts(inst))
    return Conj(tuple(parts))


def bound_constraint(n: int, bound: int) -> Conj:
    """-bound <= k(i) <= bound for every place."""
    if bound < 1:
        raise ValueError("bound must be positive")
    parts = []
    for i in range(n):
        e_i = _unit(n, i)
        parts.append(Atom(e_i, "<=", bound))
        parts.append(Atom(e_i, ">=", -bound))
    return Conj(tuple(parts))


def exclude_multiples(k_hat: Sequence[int]) -> Neg:
    """Forbid every positive integer multiple of the primitive vector k_hat.

    k is a multiple of k_hat iff all cross products match (collinearity),
    the pivot entry has the sign of and at least the magnitude of k_hat's,
    and the pivot entry is divisible by k_hat's. The negation of that
    conjunction is the refinement added after a failed candidate.
    """
    k_hat = tuple(k_hat)
    n = len(k_hat)
    if all(x == 0 for x in k_hat):
        raise ValueError("cannot exclude multiples of the zero vector")
    from math import gcd

    if gcd(*k_hat) != 1:
        raise ValueError("exclusion requires a primitive vector")
    p = next(i for i in range(n) if k_hat[i] != 0)
    parts: list[Formula] = []
    for i in range(n):
        if i == p:
            continue
        coeffs = [0] * n
        coeffs[i] = k_hat[p]
        coeffs[p] = -k_hat[i]
        parts.append(Atom(tuple(coeffs), "=", 0))  # k_hat(p) k(i) = k_hat(i) k(p)
    pivot = _unit(n, p)
    if k_hat[p] > 0:
        parts.append(Atom(pivot, ">=", k_hat[p]))
    else:
        parts.append(Atom(pivot, "<=", k_hat[p]))
    parts.append(Divides(p, k_hat[p]))
    return Neg(Conj(tuple(parts)))


def is_multiple_of(k: Sequence[int], k_hat: Sequence[int]) -> bool:
    """Reference predicate: k == a * k_hat for some integer a >= 1."""
    pivs = [(x, y) for x, y in zip(k, k_hat) if y != 0]
    if not pivs:
        return False
    x0, y0 = pivs[0]
    if x0 % y0 != 0:
        return False
    a = x0 // y0
    if a < 1:
        return False
    return all(x == a * y for x, y in zip(k, k_hat))


# -- SMT-LIB2 emission -------------------------------------------------


def _smt_int(v: int) -> str:
    return str(v) if v >= 0 else f"(- {-v})"


def _smt_linear(coeffs: Sequence[int], names: Sequence[str]) -> str:
    terms = []
    for c, name in zip(coeffs, names):
        if c == 0:
            continue
        terms.append(name if c == 1 else f"(* {_smt_int(c)} {name})")
    if not terms:
        return "0"
    if len(terms) == 1:
        return terms[0]
    return "(+ " + " ".join(terms) + ")"


def to_smt(f: Formula, names: Sequence[str]) -> str:
    """Render as an SMT-LIB2 term over the given variable names."""
    if isinstance(f, Atom):
        op = "=" if f.rel == "=" else f.rel
        return f"({op} {_smt_linear(f.coeffs, names)} {_smt_int(f.rhs)})"
    if isinstance(f, Divides):
        return f"(= (mod {names[f.index]} {f.divisor}) 0)"
    if isinstance(f, Conj):
        if not f.parts:
            return "true"
        return "(and " + " ".join(to_smt(p, names) for p in f.parts) + ")"
    if isinstance(f, Disj):
        if not f.parts:
            return "false"
        return "(or " + " ".join(to_smt(p, names) for p in f.parts) + ")"
    if isinstance(f, Neg):
        return f"(not {to_smt(f.inner, names)})"
    raise TypeError(f"not a formula: {f!r}")
