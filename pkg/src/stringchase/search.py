"""Finding fully labeled strings: exhaustive oracle and path following.

Two independent routes to the same certificates.  The exhaustive route
enumerates every k-string and filters; it also verifies the parity
structure that makes the fast route work.  The fast route walks a single
door-in/door-out path: fully labeled faces are the doors, every string has
at most two of them, and the only dead ends of the resulting path graph
are the 0-string at the origin and the fully labeled strings of the top
dimension.  Starting at the origin therefore always terminates at a fully
labeled n-string, without enumerating anything.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .grid import (
    BoundaryFace,
    GridSpec,
    StringK,
    enumerate_strings,
    face_vertices,
    lift,
    pivot,
    pivot_entry_index,
    string_count,
    vertices,
)
from .labeling import count_fully_labeled_faces, is_fully_labeled, label_set

DEFAULT_BUDGET = 10_000_000

OUTCOME_FOUND = "found_fully_labeled"


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration would visit more strings than allowed."""

    def __init__(self, required: int, budget: int):
        super().__init__(f"enumeration needs {required} strings, budget is {budget}")
        self.required = required
        self.budget = budget


class StepLimitExceeded(RuntimeError):
    """The walk visited more strings than can exist; an internal bug."""


class LabelingInvalid(RuntimeError):
    """The walk met a configuration impossible under the Brouwer rules."""


class TraceInvalid(ValueError):
    """A path trace fails one of its structural invariants."""


@dataclass(frozen=True)
class LevelParity:
    """Double-count bookkeeping for one level k.

    s1/s2: k-strings with exactly one / exactly two fully labeled faces.
    t1/t2: fully labeled faces contained in exactly one / two k-strings.
    Counting (string, face) incidences both ways gives s1 + 2*s2 =
    t1 + 2*t2, and t1 equals the number of fully labeled strings one level
    down, so s1 is odd at every level by induction.
    """

    k: int
    s1: int
    s2: int
    t1: int
    t2: int
    fully_labeled: int

    @property
    def identity_ok(self) -> bool:
        return self.s1 + 2 * self.s2 == self.t1 + 2 * self.t2

    @property
    def odd_ok(self) -> bool:
        return self.s1 % 2 == 1


@dataclass(frozen=True)
class ParityReport:
    levels: tuple[LevelParity, ...]

    @property
    def ok(self) -> bool:
        return all(lv.identity_ok and lv.odd_ok for lv in self.levels)


@dataclass(frozen=True)
class TraceStep:
    """One visited string.

    ``entry``/``exit`` are omitted-vertex indices of the faces used to come
    in and go out.  entry None on the first step means the seed; on a later
    step it means the string was entered from the level above (it was that
    walk's downward door).  exit None on the last step marks the found
    string; on an earlier step it marks a lift to the level above.
    """

    level: int
    string: StringK
    entry: int | None
    exit: int | None


@dataclass(frozen=True)
class PathTrace:
    steps: tuple[TraceStep, ...]
    outcome: str


def exhaustive_fully_labeled(
    spec: GridSpec, lab, k: int, budget: int = DEFAULT_BUDGET
) -> list[StringK]:
    """All k-fully-labeled k-strings, lexicographic by base then perm."""
    required = string_count(spec, k)
    if required > budget:
        raise BudgetExceeded(required, budget)
    return [s for s in enumerate_strings(spec, k) if is_fully_labeled(lab, s)]


def parity_check(spec: GridSpec, lab, budget: int = DEFAULT_BUDGET) -> ParityReport:
    """Count doors and door-bearing strings at every level 1..n.

    For a labeling obeying the Brouwer boundary rules every level passes
    both the double-count identity and the oddness check; a failed level
    is reported, not raised.
    """
    required = sum(string_count(spec, k) for k in range(1, spec.n + 1))
    if required > budget:
        raise BudgetExceeded(required, budget)

    levels = []
    for k in range(1, spec.n + 1):
        s1 = s2 = fully = 0
        containment: Counter[frozenset] = Counter()
        for b in enumerate_strings(spec, k):
            count, doors = count_fully_labeled_faces(lab, b)
            if count == 1:
                s1 += 1
            elif count == 2:
                s2 += 1
            if is_fully_labeled(lab, b):
                fully += 1
            for h in doors:
                containment[face_vertices(b, h)] += 1
        t1 = sum(1 for c in containment.values() if c == 1)
        t2 = sum(1 for c in containment.values() if c == 2)
        levels.append(LevelParity(k, s1, s2, t1, t2, fully))
    return ParityReport(tuple(levels))


def path_follow(spec: GridSpec, lab) -> tuple[StringK, PathTrace]:
    """Walk door-in/door-out from the origin to a fully labeled n-string.

    The walk keeps one current string.  A fully labeled k-string below the
    top dimension has exactly one door plus the lift that contains it, so
    it is passed through: entered through its door it is lifted, entered
    from above it exits through its door.  A string with two doors is
    crossed from one to the other, pivoting when the exit door is shared
    with a neighbor and descending when the exit door lies flat in the
    zero slab of its level (the only boundary case the rules permit).
    Since every string on the path has at most two connections, the walk
    is a simple path and can only end at a fully labeled n-string.

    Raises LabelingInvalid as soon as the labeling breaks one of the
    boundary rules the walk relies on, and StepLimitExceeded if more
    strings are visited at some level than exist there (a bug guard;
    cycles are impossible when the degree bound holds).
    """
    n = spec.n
    limits = [string_count(spec, k) + 1 for k in range(n + 1)]
    visits = [0] * (n + 1)
    steps: list[TraceStep] = []

    current = StringK(0, (0,) * n, ())
    entry: int | None = None
    descended = False

    while True:
        k = current.k
        visits[k] += 1
        if visits[k] > limits[k]:
            raise StepLimitExceeded(f"more than {limits[k]} strings visited at level {k}")

        if k == 0:
            if lab.label(current.base) != 0:
                raise LabelingInvalid("the origin must carry label 0")
            steps.append(TraceStep(0, current, None, None))
            current, entry, descended = lift(current), 1, False
            continue

        count, doors = count_fully_labeled_faces(lab, current)

        if descended:
            # current is the downward door of the level above: a fully
            # labeled string whose single door leads onward.
            if count != 1 or not is_fully_labeled(lab, current):
                raise LabelingInvalid(
                    f"downward door {current} is not fully labeled with a single door"
                )
            exit_h = doors[0]
            steps.append(TraceStep(k, current, None, exit_h))
        elif count == 1:
            if not is_fully_labeled(lab, current):
                raise LabelingInvalid(
                    f"{current} has one door but is not fully labeled; "
                    "labels exceed the level"
                )
            if entry not in doors:
                raise LabelingInvalid(f"entry face {entry} of {current} is not a door")
            steps.append(TraceStep(k, current, entry, None))
            if k == n:
                return current, PathTrace(tuple(steps), OUTCOME_FOUND)
            current, entry, descended = lift(current), k + 1, False
            continue
        elif count == 2:
            if entry not in doors:
                raise LabelingInvalid(f"entry face {entry} of {current} is not a door")
            exit_h = doors[1] if doors[0] == entry else doors[0]
            steps.append(TraceStep(k, current, entry, exit_h))
        else:
            raise LabelingInvalid(f"{count} doors at {current}; must be 1 or 2")

        try:
            nxt = pivot(spec, current, exit_h)
        except BoundaryFace:
            floor_door = (
                exit_h == k and current.perm[-1] == k and current.base[k - 1] == 0
            )
            if not floor_door:
                raise LabelingInvalid(
                    f"door {exit_h} of {current} is pinned to the grid boundary, "
                    "which the boundary rules forbid"
                ) from None
            if k == 1:
                raise LabelingInvalid(
                    "walk descended back to the origin; labeling is not Brouwer"
                ) from None
            current = StringK(k - 1, current.base, current.perm[:-1])
            entry, descended = None, True
        else:
            current, entry, descended = nxt, pivot_entry_index(exit_h, k), False


def verify_trace(lab, trace: PathTrace) -> None:
    """Check a trace's structural invariants; raise TraceInvalid if broken.

    Works from the trace alone: consecutive strings must share exactly
    max(level, next level) vertices whose labels are exactly the set below
    that level, recorded exit faces must match the shared set, no string
    may repeat, and the walk must run from the origin seed to a fully
    labeled string of the top dimension.
    """
    steps = trace.steps
    if not steps:
        raise TraceInvalid("empty trace")

    for step in steps:
        if step.string.k != step.level:
            raise TraceInvalid(f"step level {step.level} != string dimension {step.string.k}")

    first, last = steps[0], steps[-1]
    if first.level != 0 or any(c != 0 for c in first.string.base):
        raise TraceInvalid("trace does not start at the origin 0-string")
    if last.level != lab.spec.n:
        raise TraceInvalid(f"trace ends at level {last.level}, not {lab.spec.n}")
    if last.exit is not None:
        raise TraceInvalid("final step records an exit face")
    if not is_fully_labeled(lab, last.string):
        raise TraceInvalid("final string is not fully labeled")

    if len({s.string for s in steps}) != len(steps):
        raise TraceInvalid("a string repeats within the trace")

    for a, b in zip(steps, steps[1:]):
        level = max(a.level, b.level)
        shared = set(vertices(a.string)) & set(vertices(b.string))
        if len(shared) != level:
            raise TraceInvalid(
                f"consecutive strings share {len(shared)} vertices, expected {level}"
            )
        if label_set(lab, shared) != set(range(level)):
            raise TraceInvalid("shared face is not fully labeled one level down")
        if a.exit is not None and face_vertices(a.string, a.exit) != frozenset(shared):
            raise TraceInvalid("recorded exit face does not match the shared vertices")
        if a.exit is None and a.level != level - 1:
            raise TraceInvalid("lift recorded where levels do not rise")

    if trace.outcome != OUTCOME_FOUND:
        raise TraceInvalid(f"unexpected outcome {trace.outcome!r}")
