"""Exact integer geometry of the subdivided unit cube.

A grid point is a tuple of integers in {0, ..., m}^n; the tuple ``a`` stands
for the real point ``a/m`` in [0,1]^n.  A k-string is a chain of k+1 grid
points that climbs one grid step along each of the axes 1..k, in some order.
It is stored canonically as a base vertex plus the order ``perm`` in which
axes are stepped; the vertex set determines that representation uniquely
because the coordinate sums of the vertices form a consecutive ladder.

Axis indices are 1-based everywhere in this module, so ``perm`` contains
values from 1 to k and coordinate i of a point is ``p[i - 1]``.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

GridPoint = tuple[int, ...]


class NotAString(ValueError):
    """The given vertex set is not the vertex set of any k-string."""


class BoundaryFace(ValueError):
    """The requested pivot step would leave the grid."""


class DimensionExceeded(ValueError):
    """A lift was requested beyond the dimension of the grid."""


@dataclass(frozen=True)
class GridSpec:
    """Grid shape: dimension ``n``, ``m`` subdivisions per axis.

    The point set is {0, ..., m}^n, of size (m+1)^n.
    """

    n: int
    m: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"dimension must be >= 1, got {self.n}")
        if self.m < 1:
            raise ValueError(f"resolution must be >= 1, got {self.m}")

    @property
    def point_count(self) -> int:
        return (self.m + 1) ** self.n

    def contains(self, p: GridPoint) -> bool:
        return len(p) == self.n and all(0 <= c <= self.m for c in p)

    def to_real(self, p: GridPoint) -> tuple[float, ...]:
        return tuple(c / self.m for c in p)

    def points(self) -> Iterator[GridPoint]:
        """All grid points in lexicographic order."""
        return itertools.product(range(self.m + 1), repeat=self.n)


@dataclass(frozen=True)
class StringK:
    """A k-string, stored as (base vertex, axis order).

    ``perm`` lists the axes stepped on the way from the base to the top
    vertex; it is a permutation of 1..k.  All vertices keep coordinate 0 on
    every axis beyond k.
    """

    k: int
    base: GridPoint
    perm: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.k != len(self.perm):
            raise ValueError(f"k={self.k} but perm has {len(self.perm)} entries")
        if sorted(self.perm) != list(range(1, self.k + 1)):
            raise ValueError(f"perm {self.perm} is not a permutation of 1..{self.k}")
        if self.k > len(self.base):
            raise ValueError(f"k={self.k} exceeds dimension {len(self.base)}")
        if any(c < 0 for c in self.base):
            raise ValueError(f"negative coordinate in base {self.base}")
        if any(self.base[j] != 0 for j in range(self.k, len(self.base))):
            raise ValueError(f"base {self.base} has nonzero coordinate beyond axis {self.k}")

    @property
    def n(self) -> int:
        return len(self.base)


@dataclass(frozen=True)
class Face:
    """A k-string minus one vertex, identified by the omitted position."""

    parent: StringK
    omitted: int

    def __post_init__(self) -> None:
        if not 0 <= self.omitted <= self.parent.k:
            raise ValueError(f"omitted index {self.omitted} outside 0..{self.parent.k}")

    def vertex_set(self) -> frozenset[GridPoint]:
        return face_vertices(self.parent, self.omitted)


def vertices(s: StringK) -> list[GridPoint]:
    """The k+1 vertices of ``s``, from the base up."""
    out = [s.base]
    cur = list(s.base)
    for axis in s.perm:
        cur[axis - 1] += 1
        out.append(tuple(cur))
    return out


def face_vertices(s: StringK, omitted: int) -> frozenset[GridPoint]:
    """Vertex set of the face of ``s`` that drops vertex ``omitted``."""
    verts = vertices(s)
    return frozenset(verts[:omitted] + verts[omitted + 1:])


def string_from_vertices(pts: Iterable[GridPoint]) -> StringK:
    """Reconstruct the unique k-string with this vertex set.

    Raises NotAString when the points are not a string: coordinate sums must
    be consecutive, successive differences must be unit steps on distinct
    axes, and no axis beyond k may be touched.
    """
    unique = {tuple(p) for p in pts}
    if not unique:
        raise NotAString("empty vertex set")
    dims = {len(p) for p in unique}
    if len(dims) != 1:
        raise NotAString("vertices of mixed dimension")
    if any(c < 0 for p in unique for c in p):
        raise NotAString("negative coordinate")

    ordered = sorted(unique, key=lambda p: (sum(p), p))
    k = len(ordered) - 1
    sums = [sum(p) for p in ordered]
    if sums != list(range(sums[0], sums[0] + k + 1)):
        raise NotAString(f"coordinate sums {sums} are not consecutive")

    axes = []
    for a, b in zip(ordered, ordered[1:]):
        delta = [bi - ai for ai, bi in zip(a, b)]
        stepped = [i + 1 for i, d in enumerate(delta) if d != 0]
        if len(stepped) != 1 or delta[stepped[0] - 1] != 1:
            raise NotAString(f"{a} -> {b} is not a unit grid step")
        axes.append(stepped[0])
    if len(set(axes)) != k or any(axis > k for axis in axes):
        raise NotAString(f"stepped axes {axes} are not distinct axes within 1..{k}")
    base = ordered[0]
    if any(base[j] != 0 for j in range(k, len(base))):
        raise NotAString(f"base {base} has nonzero coordinate beyond axis {k}")
    return StringK(k, base, tuple(axes))


def lift(c: StringK) -> StringK:
    """Extend a (k-1)-string living below axis k to the unique k-string
    containing it: one extra step on axis k from the top vertex."""
    k = c.k + 1
    if k > c.n:
        raise DimensionExceeded(f"cannot lift a {c.k}-string in dimension {c.n}")
    return StringK(k, c.base, c.perm + (k,))


def pivot(spec: GridSpec, b: StringK, h: int) -> StringK:
    """The other k-string sharing the face of ``b`` that omits vertex ``h``.

    Three cases, by the position of the omitted vertex:
      * h = 0: drop the base, append a step on the first axis of ``perm``
        beyond the top vertex (base moves up, perm cycles left);
      * 0 < h < k: swap the two steps around the omitted vertex;
      * h = k: drop the top, prepend a step below the base on the last axis
        of ``perm`` (base moves down, perm cycles right).

    Pivoting is an involution: pivoting the result through the shared face
    (omitted index k, h, or 0 respectively) returns ``b``.  Raises
    BoundaryFace when the new vertex would leave the grid; for h = k with
    perm ending in k and a base on the floor of axis k, that face is the
    downward door into the dimension below.
    """
    k = b.k
    if k < 1:
        raise ValueError("a 0-string has no faces to pivot through")
    if not 0 <= h <= k:
        raise ValueError(f"omitted index {h} outside 0..{k}")

    if h == 0:
        axis = b.perm[0]
        # top vertex already sits at base[axis]+1; one more step must stay <= m
        if b.base[axis - 1] + 2 > spec.m:
            raise BoundaryFace(f"step on axis {axis} above {b.base} leaves the grid")
        new_base = _bump(b.base, axis, +1)
        return StringK(k, new_base, b.perm[1:] + (axis,))
    if h == k:
        axis = b.perm[-1]
        if b.base[axis - 1] == 0:
            raise BoundaryFace(f"step on axis {axis} below {b.base} leaves the grid")
        new_base = _bump(b.base, axis, -1)
        return StringK(k, new_base, (axis,) + b.perm[:-1])
    swapped = list(b.perm)
    swapped[h - 1], swapped[h] = swapped[h], swapped[h - 1]
    return StringK(k, b.base, tuple(swapped))


def pivot_entry_index(h: int, k: int) -> int:
    """Omitted index of the shared face inside the string pivot(b, h)."""
    if h == 0:
        return k
    if h == k:
        return 0
    return h


def enumerate_strings(spec: GridSpec, k: int) -> Iterator[StringK]:
    """Every k-string of the grid exactly once, lexicographic by base then
    by perm.  There are m^k * k! of them."""
    if not 0 <= k <= spec.n:
        raise ValueError(f"k={k} outside 0..{spec.n}")
    tail = (0,) * (spec.n - k)
    for head in itertools.product(range(spec.m), repeat=k):
        base = head + tail
        for perm in itertools.permutations(range(1, k + 1)):
            yield StringK(k, base, perm)


def string_count(spec: GridSpec, k: int) -> int:
    """Number of k-strings: m^k * k!."""
    count = spec.m ** k
    for i in range(2, k + 1):
        count *= i
    return count


def in_grid(spec: GridSpec, s: StringK) -> bool:
    """Whether every vertex of ``s`` lies inside the grid."""
    return s.n == spec.n and all(spec.contains(v) for v in vertices(s))


def _bump(p: GridPoint, axis: int, delta: int) -> GridPoint:
    cur = list(p)
    cur[axis - 1] += delta
    return tuple(cur)
