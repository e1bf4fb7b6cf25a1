"""Harder-Narasimhan filtrations, polygonal lines and their energy."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby
from typing import Iterable, Sequence

from .core import Flag, SlopePoint, SplitBundle, quotient_data, topsum


class NotComparableError(ValueError):
    """Two polygons do not satisfy the hypotheses of an energy comparison."""


@dataclass(frozen=True)
class Polygon:
    """Graph of a continuous piecewise affine map on ``[0, x_last]``.

    Vertices start at the origin and have strictly increasing abscissae.
    """

    vertices: tuple[tuple[int, Fraction], ...]

    def __init__(self, vertices: Iterable[Sequence]):
        verts = tuple((int(x), Fraction(y)) for x, y in vertices)
        if len(verts) < 2:
            raise ValueError("a polygon needs at least two vertices")
        if verts[0] != (0, 0):
            raise ValueError("polygons start at the origin")
        if any(b[0] <= a[0] for a, b in zip(verts, verts[1:])):
            raise ValueError("vertex abscissae must be strictly increasing")
        object.__setattr__(self, "vertices", verts)

    @property
    def length(self) -> int:
        return self.vertices[-1][0]

    @property
    def end(self) -> Fraction:
        return self.vertices[-1][1]

    def segments(self) -> list[tuple[int, Fraction]]:
        """``(width, slope)`` for every segment."""
        return [
            (x1 - x0, Fraction(y1 - y0) / (x1 - x0))
            for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:])
        ]

    def breakpoints(self) -> list[int]:
        return [x for x, _ in self.vertices]

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        if not 0 <= x <= self.length:
            raise ValueError(f"{x} lies outside [0, {self.length}]")
        for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:]):
            if x <= x1:
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        raise AssertionError("unreachable")

    def normalized(self) -> "Polygon":
        """Drop vertices lying inside a straight segment."""
        verts = [self.vertices[0]]
        for v, nxt in zip(self.vertices[1:], self.vertices[2:] + (None,)):
            if nxt is not None:
                (x0, y0) = verts[-1]
                # collinear iff (v - prev) and (nxt - v) have equal slope
                if (v[1] - y0) * (nxt[0] - v[0]) == (nxt[1] - v[1]) * (v[0] - x0):
                    continue
            verts.append(v)
        return Polygon(verts)

    def is_concave(self, strict: bool = False) -> bool:
        slopes = [s for _, s in self.segments()]
        if strict:
            return all(a > b for a, b in zip(slopes, slopes[1:]))
        return all(a >= b for a, b in zip(slopes, slopes[1:]))

    def energy(self, baseline) -> Fraction:
        baseline = Fraction(baseline)
        return sum((w * (s - baseline) ** 2 for w, s in self.segments()), Fraction(0))


@dataclass(frozen=True)
class EnergyComparison:
    """Outcome of comparing two polygons' energies.

    ``difference`` is ``E(f) - E(g)``.  ``boundary`` marks a distinct pair
    where every hypothesis holds yet the energies coincide.
    """

    difference: Fraction
    distinct: bool
    boundary: bool = False


def hn_filtration(b: SplitBundle) -> Flag:
    """One step per distinct twist value, largest first."""
    subsets, idx = [], 0
    for _, group in groupby(b.twists):
        idx += len(list(group))
        subsets.append(range(idx))
    return Flag.from_witnesses(b, subsets)


def is_semistable(b: SplitBundle) -> bool:
    m = b.slope
    return all(Fraction(topsum(b, k), k) <= m for k in range(1, b.rank))


def polygon_of(f: Flag) -> Polygon:
    return Polygon([(0, 0)] + f.points)


def normalize_flag(f: Flag) -> Flag:
    """Merge consecutive graded pieces of equal slope."""
    data = quotient_data(f)
    keep = [i for i in range(len(data) - 1) if data[i][1] != data[i + 1][1]]
    keep.append(len(data) - 1)
    steps = tuple(f.steps[i] for i in keep)
    wit = None if f.witnesses is None else tuple(f.witnesses[i] for i in keep)
    return Flag(steps, wit)


def dominates(b: SplitBundle, p: SlopePoint, validate: bool = True) -> bool:
    """Whether ``p`` lies on or below the HN polygon of ``b``.

    With ``validate`` a point no subobject of ``b`` can realise raises
    ``ValueError`` instead of returning ``False``.
    """
    if validate:
        p.check(b)
    elif p.rank > b.rank:
        return False
    return p.degree <= polygon_of(hn_filtration(b))(p.rank)


def is_concave(f: Flag) -> bool:
    slopes = [m for _, m in quotient_data(f)]
    return all(a > b for a, b in zip(slopes, slopes[1:]))


def energy(f: Flag, baseline) -> Fraction:
    baseline = Fraction(baseline)
    return sum((r * (m - baseline) ** 2 for r, m in quotient_data(f)), Fraction(0))


def _ge_on(f: Polygon, g: Polygon, upto: int) -> bool:
    xs = sorted({x for x in f.breakpoints() + g.breakpoints() if x <= upto} | {upto})
    return all(f(x) >= g(x) for x in xs)


def _same_map(f: Polygon, g: Polygon) -> bool:
    return f.normalized().vertices == g.normalized().vertices


def compare_concave_energy(f: Polygon, g: Polygon, baseline) -> EnergyComparison:
    """Energy gap of two concave maps with common endpoints and ``f >= g``.

    Raises :class:`NotComparableError` when the hypotheses fail.
    """
    if f.length != g.length:
        raise NotComparableError(f"domains differ: [0, {f.length}] vs [0, {g.length}]")
    if f.end != g.end:
        raise NotComparableError(f"end values differ: {f.end} vs {g.end}")
    if not (f.is_concave() and g.is_concave()):
        raise NotComparableError("both maps must be concave")
    if not _ge_on(f, g, f.length):
        raise NotComparableError("f does not dominate g")
    diff = f.energy(baseline) - g.energy(baseline)
    distinct = not _same_map(f, g)
    return EnergyComparison(diff, distinct, boundary=distinct and diff == 0)
