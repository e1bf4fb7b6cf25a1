"""Exact rational arithmetic and the domain types shared by every module.

A bundle over the projective line splits as a sum of line bundles, so it is
modelled by its multiset of twists.  Subobjects of maximal degree in this
model are coordinate subsets of the twists; anything else is carried only as
a (rank, degree) point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

Rat = Fraction

#: Volume of the base curve.  Only ever enters as a global scale factor.
VOLUME = 1

_RAT_RE = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def as_rat(value: Union[int, str, Fraction]) -> Fraction:
    """Coerce ``value`` to an exact rational.

    Strings must look like ``"p"`` or ``"p/q"``; floats are refused so that
    no rounding sneaks into exact code paths.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RAT_RE.match(value)
        if match is None:
            raise ValueError(f"not a rational literal: {value!r}")
        num, den = match.groups()
        if den is not None and int(den) == 0:
            raise ZeroDivisionError(f"zero denominator in {value!r}")
        return Fraction(int(num), int(den) if den is not None else 1)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def rat_str(q: Fraction) -> str:
    """Reduced ``"p/q"`` (or ``"p"``) form."""
    return str(Fraction(q))


@dataclass(frozen=True)
class SplitBundle:
    """Direct sum of line bundles ``O(a_1) + ... + O(a_r)``, twists descending."""

    twists: tuple[int, ...]

    def __init__(self, twists: Iterable[int]):
        values = tuple(twists)
        if not values:
            raise ValueError("twists must be non-empty")
        for a in values:
            if isinstance(a, bool) or not isinstance(a, int):
                raise TypeError(f"twists must be integers, got {a!r}")
        object.__setattr__(self, "twists", tuple(sorted(values, reverse=True)))

    @property
    def rank(self) -> int:
        return len(self.twists)

    @property
    def degree(self) -> int:
        return sum(self.twists)

    @property
    def slope(self) -> Fraction:
        return Fraction(self.degree, self.rank)

    def twistsum(self, indices: Iterable[int]) -> int:
        return sum(self.twists[i] for i in indices)

    def __repr__(self) -> str:
        return f"SplitBundle({list(self.twists)})"


@dataclass(frozen=True, order=True)
class SlopePoint:
    """The point ``(rank F, deg F)`` of a subobject ``F``."""

    rank: int
    degree: int

    def __post_init__(self):
        if self.rank <= 0:
            raise ValueError(f"rank must be positive, got {self.rank}")

    @property
    def slope(self) -> Fraction:
        return Fraction(self.degree, self.rank)

    def check(self, bundle: SplitBundle) -> None:
        if self.rank > bundle.rank:
            raise ValueError(f"rank {self.rank} exceeds bundle rank {bundle.rank}")
        bound = topsum(bundle, self.rank)
        if self.degree > bound:
            raise ValueError(
                f"no rank-{self.rank} subobject of {bundle} has degree {self.degree} "
                f"(maximum is {bound})"
            )


def slope(p: SlopePoint) -> Fraction:
    return Fraction(p.degree, p.rank)


def topsum(b: SplitBundle, k: int) -> int:
    """Largest degree of a rank-``k`` subobject: the sum of the ``k`` top twists."""
    if not 1 <= k <= b.rank:
        raise ValueError(f"k must lie in [1, {b.rank}], got {k}")
    return sum(b.twists[:k])


@dataclass(frozen=True)
class Flag:
    """An increasing chain ``0 = E_0 < E_1 < ... < E_k = E``.

    ``steps`` holds ``(rank E_i, deg E_i)`` for ``i >= 1``.  For split flags
    ``witnesses`` holds the nested index sets realising each step.
    """

    steps: tuple[SlopePoint, ...]
    witnesses: Optional[tuple[frozenset, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        steps = tuple(s if isinstance(s, SlopePoint) else SlopePoint(*s) for s in self.steps)
        if not steps:
            raise ValueError("a flag needs at least one step")
        for lo, hi in zip(steps, steps[1:]):
            if hi.rank <= lo.rank:
                raise ValueError("flag ranks must be strictly increasing")
        object.__setattr__(self, "steps", steps)
        if self.witnesses is not None:
            wit = tuple(frozenset(w) for w in self.witnesses)
            if len(wit) != len(steps):
                raise ValueError("one witness set per step is required")
            for lo, hi in zip(wit, wit[1:]):
                if not lo < hi:
                    raise ValueError("witness sets must be strictly nested")
            for w, s in zip(wit, steps):
                if len(w) != s.rank:
                    raise ValueError("witness size must equal step rank")
            object.__setattr__(self, "witnesses", wit)

    @classmethod
    def from_points(cls, points: Iterable[Sequence[int]]) -> "Flag":
        return cls(tuple(SlopePoint(int(r), int(d)) for r, d in points))

    @classmethod
    def from_witnesses(cls, bundle: SplitBundle, subsets: Iterable[Iterable[int]]) -> "Flag":
        wit = tuple(frozenset(s) for s in subsets)
        for w in wit:
            if any(not 0 <= i < bundle.rank for i in w):
                raise ValueError(f"witness indices out of range for {bundle}: {sorted(w)}")
        steps = tuple(SlopePoint(len(w), bundle.twistsum(w)) for w in wit)
        return cls(steps, wit)

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def points(self) -> list[tuple[int, int]]:
        return [(s.rank, s.degree) for s in self.steps]

    @property
    def is_split(self) -> bool:
        return self.witnesses is not None

    def blocks(self) -> list[frozenset]:
        """Index sets of the graded pieces ``E_i / E_{i-1}`` (split flags only)."""
        if self.witnesses is None:
            raise ValueError("flag carries no witness sets")
        out, prev = [], frozenset()
        for w in self.witnesses:
            out.append(w - prev)
            prev = w
        return out

    def check(self, bundle: SplitBundle) -> None:
        """Raise ``ValueError`` unless this is a flag of ``bundle``."""
        last = self.steps[-1]
        if (last.rank, last.degree) != (bundle.rank, bundle.degree):
            raise ValueError(
                f"last step {last.rank, last.degree} is not the full bundle "
                f"{bundle.rank, bundle.degree}"
            )
        for s in self.steps:
            s.check(bundle)
        if self.witnesses is not None:
            for w, s in zip(self.witnesses, self.steps):
                if any(not 0 <= i < bundle.rank for i in w):
                    raise ValueError("witness index out of range")
                if bundle.twistsum(w) != s.degree:
                    raise ValueError("step degree differs from its witness twist sum")

    def __repr__(self) -> str:
        return f"Flag({self.points})"


def quotient_data(f: Flag) -> list[tuple[int, Fraction]]:
    """Ranks and slopes ``(r_i, m_i)`` of the graded pieces of ``f``."""
    out = []
    prev_r, prev_d = 0, 0
    for s in f.steps:
        r_i = s.rank - prev_r
        out.append((r_i, Fraction(s.degree - prev_d, r_i)))
        prev_r, prev_d = s.rank, s.degree
    return out


def flag_from_quotients(data: Iterable[tuple[int, Fraction]]) -> Flag:
    """Inverse of :func:`quotient_data`."""
    points, r, d = [], 0, Fraction(0)
    for r_i, m_i in data:
        r += r_i
        d += r_i * m_i
        if d.denominator != 1:
            raise ValueError("quotient data does not give integer degrees")
        points.append((r, int(d)))
    return Flag.from_points(points)


@dataclass(frozen=True)
class Spectrum:
    """Constant eigenvalues ``l_1 < ... < l_k`` paired with their eigenflag."""

    flag: Flag
    eigenvalues: tuple[Fraction, ...]

    def __post_init__(self):
        eig = tuple(as_rat(x) for x in self.eigenvalues)
        if len(eig) != len(self.flag):
            raise ValueError(
                f"{len(eig)} eigenvalues given for a flag with {len(self.flag)} steps"
            )
        if any(lo >= hi for lo, hi in zip(eig, eig[1:])):
            raise ValueError("eigenvalues must be strictly increasing")
        object.__setattr__(self, "eigenvalues", eig)

    def trace(self) -> Fraction:
        return sum((r_i * lam for (r_i, _), lam in zip(quotient_data(self.flag), self.eigenvalues)),
                   Fraction(0))


@dataclass(frozen=True)
class PairModel:
    """A split bundle with a morphism whose image spans the twists in ``image``.

    ``image`` holds 0-based indices into ``bundle.twists``; the empty set
    models the zero morphism.
    """

    bundle: SplitBundle
    image: frozenset
    tau: Fraction

    def __init__(self, bundle: SplitBundle, image: Iterable[int], tau):
        img = frozenset(image)
        if any(not 0 <= i < bundle.rank for i in img):
            raise ValueError(f"image indices out of range for {bundle}: {sorted(img)}")
        object.__setattr__(self, "bundle", bundle)
        object.__setattr__(self, "image", img)
        object.__setattr__(self, "tau", as_rat(tau))

    def image_step(self, f: Flag) -> Optional[int]:
        """0-based index of the first step of ``f`` containing the image."""
        if not self.image:
            return None
        if f.witnesses is None:
            raise ValueError("image containment needs a split flag")
        for i, w in enumerate(f.witnesses):
            if self.image <= w:
                return i
        raise ValueError("last witness does not contain the image")
