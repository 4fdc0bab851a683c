"""Labelings of grid points induced by a self-map of the cube.

The induced label of a grid point x is the largest axis k whose coordinate
is positive and not pushed up by the map, i.e. g_k(x) <= x_k; when no axis
qualifies the label is 0.  Labels computed this way always satisfy the two
Brouwer boundary rules that the string search relies on:

  * zero-face rule: a point with coordinate k equal to 0 is never labeled k;
  * one-face rule:  a point with coordinate k equal to 1 is labeled >= k.

Map outputs are clamped componentwise into [0,1] before comparison, so a
map that drifts epsilon outside the cube through floating-point roundoff
cannot break the one-face rule.  The comparison itself is an exact float
``<=`` with no tolerance band.
"""

from __future__ import annotations

import math
import random
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field

from .grid import GridPoint, GridSpec, StringK, vertices

EXHAUSTIVE_POINT_BUDGET = 1_000_000
VALIDATION_SAMPLE_SIZE = 10_000


class MapEvaluationFailed(RuntimeError):
    """The map's evaluator faulted; carries the offending input point."""

    def __init__(self, point: tuple[float, ...], reason: str):
        super().__init__(f"map evaluation failed at {point}: {reason}")
        self.point = point
        self.reason = reason


@dataclass(frozen=True)
class MapFn:
    """A map of [0,1]^n into itself, evaluated with an unconditional clamp.

    ``fn`` may return any sequence of n numbers; calling the MapFn clamps
    each component into [0,1].  Evaluator exceptions, wrong component
    counts and NaNs are reported as MapEvaluationFailed together with the
    input point.  ``lipschitz`` and ``fixed_points`` are optional metadata
    for maps whose behaviour is known exactly (see the builtin catalog).
    """

    n: int
    fn: Callable[[tuple[float, ...]], Sequence[float]]
    name: str = "map"
    description: str = ""
    lipschitz: float | None = None
    fixed_points: tuple[tuple[float, ...], ...] = ()

    def __call__(self, p: Sequence[float]) -> tuple[float, ...]:
        pt = tuple(float(c) for c in p)
        try:
            raw = tuple(self.fn(pt))
        except MapEvaluationFailed:
            raise
        except Exception as exc:
            raise MapEvaluationFailed(pt, f"evaluator raised {exc!r}") from exc
        if len(raw) != self.n:
            raise MapEvaluationFailed(pt, f"expected {self.n} components, got {len(raw)}")
        out = []
        for v in raw:
            v = float(v)
            if math.isnan(v):
                raise MapEvaluationFailed(pt, "evaluator produced NaN")
            out.append(0.0 if v < 0.0 else 1.0 if v > 1.0 else v)
        return tuple(out)


class Labeling:
    """Memoized induced labeling of a grid by a map.

    Each grid point is labeled at most once; the map is evaluated exactly
    once per labeled point.  Instances may be queried concurrently (label
    computation is idempotent), and the cache is never invalidated within
    a resolution.
    """

    def __init__(self, spec: GridSpec, source: MapFn):
        if spec.n != source.n:
            raise ValueError(f"grid dimension {spec.n} != map dimension {source.n}")
        self.spec = spec
        self.source = source
        self._cache: dict[GridPoint, int] = {}

    def label(self, x: GridPoint) -> int:
        x = tuple(x)
        hit = self._cache.get(x)
        if hit is not None:
            return hit
        if not self.spec.contains(x):
            raise ValueError(f"{x} is not a point of {self.spec}")
        real = self.spec.to_real(x)
        g = self.source(real)
        lab = 0
        for k in range(self.spec.n, 0, -1):
            if x[k - 1] > 0 and g[k - 1] <= real[k - 1]:
                lab = k
                break
        self._cache[x] = lab
        return lab

    @property
    def evals(self) -> int:
        """Number of distinct points labeled so far (= map evaluations)."""
        return len(self._cache)


class ExplicitLabeling:
    """A labeling given directly as a table or function, for testing.

    No Brouwer conditions are assumed; feed it to ``validate_brouwer`` or
    the search routines to exercise their failure paths.
    """

    def __init__(self, spec: GridSpec, source: Mapping[GridPoint, int] | Callable[[GridPoint], int]):
        self.spec = spec
        self._fn = source.__getitem__ if isinstance(source, Mapping) else source

    def label(self, x: GridPoint) -> int:
        return self._fn(tuple(x))


def labels_of(lab, s: StringK) -> list[int]:
    """Labels of the k+1 vertices of ``s``, in vertex order."""
    return [lab.label(v) for v in vertices(s)]


def label_set(lab, pts) -> set[int]:
    """Set of labels over an arbitrary collection of grid points."""
    return {lab.label(p) for p in pts}


def is_fully_labeled(lab, s: StringK) -> bool:
    """True iff the labels of ``s`` are exactly {0, ..., k}."""
    return set(labels_of(lab, s)) == set(range(s.k + 1))


def count_fully_labeled_faces(lab, s: StringK) -> tuple[int, list[int]]:
    """Faces of ``s`` carrying the label set {0, ..., k-1}.

    Returns (count, omitted indices).  When the labels of ``s`` lie within
    0..k the count is 0, 1 or 2, and it is 1 exactly when ``s`` itself is
    fully labeled.
    """
    if s.k < 1:
        raise ValueError("faces are defined for strings of dimension >= 1")
    labels = labels_of(lab, s)
    want = set(range(s.k))
    doors = [h for h in range(s.k + 1) if set(labels[:h] + labels[h + 1:]) == want]
    return len(doors), doors


@dataclass(frozen=True)
class RuleViolation:
    """One grid point breaking a Brouwer boundary rule."""

    point: GridPoint
    axis: int
    label: int
    rule: str  # "zero-face" or "one-face"


@dataclass(frozen=True)
class BrouwerReport:
    """Result of checking the two boundary rules over (a sample of) the grid."""

    checked: int
    exhaustive: bool
    violations: tuple[RuleViolation, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_brouwer(
    lab,
    *,
    point_budget: int = EXHAUSTIVE_POINT_BUDGET,
    sample_size: int = VALIDATION_SAMPLE_SIZE,
    seed: int = 0,
) -> BrouwerReport:
    """Check the zero-face and one-face rules at every grid point.

    Exhaustive while (m+1)^n fits in ``point_budget``; beyond that a
    deterministic uniform sample of ``sample_size`` points is used.
    Violations are data, not errors: labelings induced from a map never
    produce any, hand-built ones may.
    """
    spec = lab.spec
    exhaustive = spec.point_count <= point_budget
    if exhaustive:
        points = spec.points()
        checked = spec.point_count
    else:
        rng = random.Random(seed)
        points = (tuple(rng.randint(0, spec.m) for _ in range(spec.n)) for _ in range(sample_size))
        checked = sample_size

    violations = []
    for p in points:
        value = lab.label(p)
        for k in range(1, spec.n + 1):
            if p[k - 1] == 0 and value == k:
                violations.append(RuleViolation(p, k, value, "zero-face"))
            if p[k - 1] == spec.m and value < k:
                violations.append(RuleViolation(p, k, value, "one-face"))
    return BrouwerReport(checked, exhaustive, tuple(violations))
