"""Holomorphic pairs: tau-stability, the generalized HN filtration and the
pair version of the optimal destabilizing endomorphism.

Index conventions: ``PairModel.image`` and flag witnesses are 0-based
positions in the descending twist list.  ``m_index`` and ``image_step``
count filtration terms the usual way, so ``E_j`` is ``flag.steps[j - 1]``
and ``E_0`` is the zero subobject.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby
from typing import Optional, Union

from .core import Flag, PairModel, Spectrum, SplitBundle, quotient_data, topsum
from .hn import EnergyComparison, NotComparableError, Polygon, hn_filtration
from .weight import weight_of


class ModelAssumptionError(ValueError):
    """The pair violates the standing assumption ``slope(E) >= tau``."""


class TauSemistableError(ValueError):
    """A construction that needs an unstable pair got a tau-semistable one."""


CASES = ("A", "B", "C")


@dataclass(frozen=True)
class GeneralizedHN:
    flag: Flag
    m_index: int
    case_tag: str
    image_step: int

    @property
    def skip(self) -> bool:
        return self.case_tag != "C"


@dataclass(frozen=True)
class PairDestabilizer:
    """Optimal direction for a pair; entry ``m_index`` is pinned to 0 when ``skip``."""

    flag: Flag
    m_index: int
    skip: bool
    direction: tuple[Fraction, ...]
    norm_sq: Fraction
    case_tag: str = "C"

    @property
    def skip_index(self) -> Optional[int]:
        """1-based position of the zero eigenvalue, if any."""
        return self.m_index + 1 if self.skip else None

    @property
    def min_weight(self) -> float:
        return -math.sqrt(self.norm_sq)

    @property
    def float_view(self) -> list[float]:
        scale = math.sqrt(self.norm_sq)
        return [float(x) / scale for x in self.direction]


@dataclass(frozen=True)
class LimitBlock:
    bundle: SplitBundle
    carries_morphism: bool = False


@dataclass(frozen=True)
class PairLimit:
    blocks: tuple[LimitBlock, ...]
    image_absorbed: bool


def check_model(p: PairModel) -> None:
    if p.bundle.slope < p.tau:
        raise ModelAssumptionError(
            f"slope(E) = {p.bundle.slope} is below tau = {p.tau}"
        )


def is_tau_semistable(p: PairModel) -> bool:
    b, tau = p.bundle, p.tau
    r = b.rank
    if any(Fraction(topsum(b, k), k) > tau for k in range(1, r)):
        return False
    # largest-degree subobject of each rank containing the image
    img_deg = b.twistsum(p.image)
    rest = [b.twists[i] for i in range(r) if i not in p.image]
    for size in range(max(len(p.image), 1), r):
        extra = size - len(p.image)
        deg = img_deg + sum(rest[:extra])
        if Fraction(b.degree - deg, r - size) < tau:
            return False
    return True


def _type_ii_step(b: SplitBundle, current: frozenset, image: frozenset, tau: Fraction):
    """Image-containing ``S < current`` minimising ``slope(current / S)`` below tau.

    Among minimisers the quotient of largest rank wins; equal twists are
    peeled from the highest index so the surviving witness stays
    lexicographically smallest.
    """
    pool = sorted((i for i in current if i not in image), key=lambda i: (b.twists[i], -i))
    best, best_q, total = None, 0, 0
    for q, i in enumerate(pool, start=1):
        if q == len(current):
            break
        total += b.twists[i]
        avg = Fraction(total, q)
        if avg < tau and (best is None or avg <= best):
            best, best_q = avg, q
    if best is None:
        return None
    return current - frozenset(pool[:best_q])


def generalized_hn(p: PairModel, model_check: bool = True) -> GeneralizedHN:
    """Generalized HN filtration of an unstable pair.

    Phase one takes maximal subobjects of slope above ``tau`` from the
    bottom; once they swallow the image the classical filtration takes over.
    Otherwise phase two peels minimal-slope quotients off the top while
    keeping the image, until none of slope below ``tau`` is left.
    """
    if model_check:
        check_model(p)
    if is_tau_semistable(p):
        raise TauSemistableError(f"{p} is tau-semistable")
    b, tau, image = p.bundle, p.tau, p.image

    bottom = []
    current = frozenset()
    absorbed = not image
    for value, group in groupby(range(b.rank), key=lambda i: b.twists[i]):
        if value <= tau or absorbed:
            break
        current = current | frozenset(group)
        bottom.append(current)
        absorbed = image <= current

    if absorbed:
        flag = hn_filtration(b)
        m = sum(1 for _, m_i in quotient_data(flag) if m_i > tau)
        image_step = next(j for j, w in enumerate((frozenset(),) + flag.witnesses) if image <= w)
        return GeneralizedHN(flag, m, "C", image_step)

    m = len(bottom)
    top = []
    current = frozenset(range(b.rank))
    while True:
        nxt = _type_ii_step(b, current, image, tau)
        if nxt is None:
            break
        top.append(nxt)
        current = nxt
    e_m = bottom[-1] if bottom else frozenset()
    assert e_m < current, "type (ii) subobject lost the type (i) part"
    # with no type (ii) subobject the full bundle itself is E_{m+1}
    subsets = bottom + top[::-1] + [frozenset(range(b.rank))]
    flag = Flag.from_witnesses(b, subsets)
    _, m_next = quotient_data(flag)[m]
    if m_next < tau:
        tag = "A"
    elif m_next == tau:
        tag = "B"
    else:
        raise AssertionError("slope of E_{m+1}/E_m exceeds tau")
    return GeneralizedHN(flag, m, tag, m + 1)


def pair_maximal_weight(p: PairModel, s: Spectrum) -> Union[Fraction, float]:
    """Weight of the pair in direction ``s``; ``math.inf`` when the image
    leaves the non-positive eigenspace."""
    f = s.flag
    f.check(p.bundle)
    if p.image:
        if f.witnesses is None:
            raise ValueError("a nonzero morphism needs a split flag")
        nonpos = [i for i, lam in enumerate(s.eigenvalues) if lam <= 0]
        if not nonpos or not p.image <= f.witnesses[nonpos[-1]]:
            return math.inf
    return weight_of(f, s.eigenvalues, p.bundle.degree, p.tau)


def pair_optimal_destabilizer(p: PairModel, model_check: bool = True) -> Optional[PairDestabilizer]:
    if is_tau_semistable(p):
        return None
    g = generalized_hn(p, model_check=model_check)
    data = quotient_data(g.flag)
    direction = [p.tau - m_i for _, m_i in data]
    if g.skip:
        direction[g.m_index] = Fraction(0)
    norm_sq = sum(
        (r * (m_i - p.tau) ** 2 for i, (r, m_i) in enumerate(data)
         if not (g.skip and i == g.m_index)),
        Fraction(0),
    )
    return PairDestabilizer(g.flag, g.m_index, g.skip, tuple(direction), norm_sq, g.case_tag)


def quotient_pair(p: PairModel, g: GeneralizedHN) -> PairModel:
    """The pair ``(E_{m+1}/E_m, induced morphism)``."""
    block = sorted(g.flag.blocks()[g.m_index])
    sub = SplitBundle(p.bundle.twists[i] for i in block)
    induced = [pos for pos, i in enumerate(block) if i in p.image]
    return PairModel(sub, induced, p.tau)


def pair_limit_object(p: PairModel, d: PairDestabilizer) -> PairLimit:
    d.flag.check(p.bundle)
    blocks = []
    for i, block in enumerate(d.flag.blocks()):
        sub = SplitBundle(p.bundle.twists[j] for j in sorted(block))
        blocks.append(LimitBlock(sub, carries_morphism=d.skip and i == d.m_index))
    return PairLimit(tuple(blocks), image_absorbed=not d.skip)


def _techlem_check(f: Polygon, g: Polygon, tau: Fraction) -> None:
    if not (f.is_concave() and g.is_concave()):
        raise NotComparableError("both maps must be concave")
    span = min(f.length, g.length)
    xs = sorted({x for x in f.breakpoints() + g.breakpoints() if x <= span} | {span})
    if any(f(x) < g(x) for x in xs):
        raise NotComparableError("f does not dominate g on the common domain")
    if any(s < tau for _, s in f.segments() + g.segments()):
        raise NotComparableError("a segment slope lies below tau")
    if f.length != g.length:
        if Fraction(f.end - g.end, f.length - g.length) > tau:
            raise NotComparableError("endpoint chord slope exceeds tau")


def techlem_compare(f: Polygon, g: Polygon, tau) -> EnergyComparison:
    """Energy gap ``E(f) - E(g)`` (reference slope ``tau``) for maps on
    possibly different intervals.

    A distinct pair with zero gap is returned with ``boundary=True``; it
    happens when one map extends the other by segments of slope ``tau``.
    """
    tau = Fraction(tau)
    _techlem_check(f, g, tau)
    diff = f.energy(tau) - g.energy(tau)
    distinct = f.normalized().vertices != g.normalized().vertices
    return EnergyComparison(diff, distinct, boundary=distinct and diff == 0)
