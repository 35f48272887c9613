"""Petri net and half-space domain model.

Markings and coefficient vectors are plain tuples of Python ints, so all
arithmetic is exact and arbitrary precision. Every object in this module is
immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence

IntVector = tuple[int, ...]


class StructureError(ValueError):
    """Raised when an operation is applied to structurally invalid data."""


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    """Exact scalar product of two equal-length integer vectors."""
    if len(a) != len(b):
        raise StructureError(f"length mismatch: {len(a)} vs {len(b)}")
    return sum(x * y for x, y in zip(a, b))


def vec_add(a: Sequence[int], b: Sequence[int]) -> IntVector:
    if len(a) != len(b):
        raise StructureError(f"length mismatch: {len(a)} vs {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Sequence[int], b: Sequence[int]) -> IntVector:
    if len(a) != len(b):
        raise StructureError(f"length mismatch: {len(a)} vs {len(b)}")
    return tuple(x - y for x, y in zip(a, b))


def vec_ge(a: Sequence[int], b: Sequence[int]) -> bool:
    """Componentwise a >= b."""
    if len(a) != len(b):
        raise StructureError(f"length mismatch: {len(a)} vs {len(b)}")
    return all(x >= y for x, y in zip(a, b))


@dataclass(frozen=True)
class Transition:
    """A transition with consumption vector `pre` and production vector `post`.

    `delta` is the marking change `post - pre`, cached at construction.
    """

    name: str
    pre: IntVector
    post: IntVector
    delta: IntVector = field(init=False)

    def __post_init__(self):
        pre = tuple(self.pre)
        post = tuple(self.post)
        if len(pre) != len(post):
            raise StructureError(
                f"transition {self.name!r}: pre/post arity mismatch "
                f"({len(pre)} vs {len(post)})"
            )
        if any(x < 0 for x in pre) or any(x < 0 for x in post):
            raise StructureError(f"transition {self.name!r}: negative flow entry")
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "post", post)
        object.__setattr__(self, "delta", vec_sub(post, pre))

    def is_enabled(self, marking: Sequence[int]) -> bool:
        """True iff the marking dominates `pre` componentwise."""
        return vec_ge(marking, self.pre)

    def fire(self, marking: Sequence[int]) -> IntVector:
        """Fire from an enabling marking; returns marking + delta."""
        if not self.is_enabled(marking):
            raise StructureError(
                f"transition {self.name!r} not enabled at {tuple(marking)}"
            )
        return vec_add(marking, self.delta)


@dataclass(frozen=True)
class PetriNet:
    places: tuple[str, ...]
    transitions: tuple[Transition, ...]

    def __post_init__(self):
        places = tuple(self.places)
        transitions = tuple(self.transitions)
        if len(set(places)) != len(places):
            raise StructureError("duplicate place names")
        seen = set()
        for t in transitions:
            if len(t.pre) != len(places):
                raise StructureError(
                    f"transition {t.name!r} arity {len(t.pre)} != {len(places)} places"
                )
            if t.name in seen:
                raise StructureError(f"duplicate transition name {t.name!r}")
            seen.add(t.name)
        object.__setattr__(self, "places", places)
        object.__setattr__(self, "transitions", transitions)

    @property
    def n(self) -> int:
        return len(self.places)


def is_marking(v: Sequence[int]) -> bool:
    return all(x >= 0 for x in v)


class Mode(Enum):
    REACH = "reach"
    COVER = "cover"


@dataclass(frozen=True)
class HalfSpace:
    """The set of integer vectors m with k . m >= c."""

    k: IntVector
    c: int

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(self.k))

    def contains(self, m: Sequence[int]) -> bool:
        return dot(self.k, m) >= self.c

    def to_json(self) -> dict:
        return {"k": list(self.k), "c": self.c}

    @classmethod
    def from_json(cls, data: dict) -> "HalfSpace":
        return cls(tuple(int(x) for x in data["k"]), int(data["c"]))


@dataclass(frozen=True)
class Instance:
    """A safety verification instance: prove m_final not reachable/coverable."""

    net: PetriNet
    m_init: IntVector
    m_final: IntVector
    mode: Mode = Mode.REACH

    def __post_init__(self):
        m0 = tuple(self.m_init)
        mf = tuple(self.m_final)
        n = self.net.n
        if len(m0) != n or len(mf) != n:
            raise StructureError("initial/target marking arity mismatch")
        if not is_marking(m0) or not is_marking(mf):
            raise StructureError("markings must be non-negative")
        object.__setattr__(self, "m_init", m0)
        object.__setattr__(self, "m_final", mf)


@dataclass(frozen=True)
class SeparatorVerdict:
    """Outcome of the separation check (inductivity checked elsewhere)."""

    init_inside: bool
    final_outside: bool
    cover_nonpositive: Optional[bool]  # None in reach mode

    @property
    def ok(self) -> bool:
        if not (self.init_inside and self.final_outside):
            return False
        return self.cover_nonpositive is not False

    def failures(self) -> list[str]:
        out = []
        if not self.init_inside:
            out.append("initial marking outside half space")
        if not self.final_outside:
            out.append("target marking inside half space")
        if self.cover_nonpositive is False:
            out.append("cover mode requires k <= 0")
        return out

    def to_json(self) -> dict:
        return {
            "init_inside": self.init_inside,
            "final_outside": self.final_outside,
            "cover_nonpositive": self.cover_nonpositive,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SeparatorVerdict":
        return cls(
            bool(data["init_inside"]),
            bool(data["final_outside"]),
            None if data["cover_nonpositive"] is None else bool(data["cover_nonpositive"]),
        )


def verify_separator(inst: Instance, hs: HalfSpace) -> SeparatorVerdict:
    """Check that the half space separates m_init from m_final.

    Reach mode: k.m_init >= c and k.m_final < c. Cover mode additionally
    requires k <= 0 componentwise, which is equivalent to the half space
    missing the whole upward closure of m_final.
    """
    if len(hs.k) != inst.net.n:
        raise StructureError("half-space arity mismatch")
    init_inside = hs.contains(inst.m_init)
    final_outside = not hs.contains(inst.m_final)
    cover_flag = None
    if inst.mode is Mode.COVER:
        cover_flag = all(x <= 0 for x in hs.k)
    return SeparatorVerdict(init_inside, final_outside, cover_flag)


class ExplorationOutcome(Enum):
    REACHED = "reached"
    NOT_REACHED = "not-reached"  # frontier emptied: exhaustive negative answer
    INCONCLUSIVE = "inconclusive"  # state budget hit first


@dataclass(frozen=True)
class ExplorationReport:
    outcome: ExplorationOutcome
    states_visited: int
    steps_to_target: Optional[int] = None  # BFS depth at which target was found


def bounded_explore(inst: Instance, max_states: int) -> ExplorationReport:
    """Breadth-first search of the firing relation from m_init.

    Reports whether m_final was reached (reach mode) or some marking
    >= m_final was reached (cover mode). States are deduplicated; the
    answer is exhaustive only if the frontier emptied within the budget.
    """
    if max_states <= 0:
        raise StructureError("exploration budget must be positive")

    def hits(m: IntVector) -> bool:
        if inst.mode is Mode.COVER:
            return vec_ge(m, inst.m_final)
        return m == inst.m_final

    start = inst.m_init
    if hits(start):
        return ExplorationReport(ExplorationOutcome.REACHED, 1, 0)
    seen = {start}
    frontier = deque([(start, 0)])
    while frontier:
        m, depth = frontier.popleft()
        for t in inst.net.transitions:
            if not t.is_enabled(m):
                continue
            m2 = t.fire(m)
            if m2 in seen:
                continue
            if hits(m2):
                return ExplorationReport(
                    ExplorationOutcome.REACHED, len(seen) + 1, depth + 1
                )
            seen.add(m2)
            if len(seen) >= max_states:
                return ExplorationReport(ExplorationOutcome.INCONCLUSIVE, len(seen))
            frontier.append((m2, depth + 1))
    return ExplorationReport(ExplorationOutcome.NOT_REACHED, len(seen))
