"""Maximal weights, the optimal destabilizing endomorphism and its flow limit.

Irrational quantities never enter the exact core.  An optimal direction is
stored unnormalised together with its exact squared norm; dividing by the
square root happens only in :attr:`Destabilizer.float_view`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import VOLUME, Flag, Spectrum, SplitBundle, quotient_data
from .hn import energy, hn_filtration, is_semistable


def _displayed_weight(flag: Flag, eig, degree: int, baseline: Fraction) -> Fraction:
    # l_k deg E + sum (l_i - l_{i+1}) deg E_i - baseline * Tr(s)
    trace = sum(r * lam for (r, _), lam in zip(quotient_data(flag), eig))
    w = eig[-1] * degree
    for i in range(len(eig) - 1):
        w += (eig[i] - eig[i + 1]) * flag.steps[i].degree
    return w - baseline * trace


def _slope_form_weight(flag: Flag, eig, baseline: Fraction) -> Fraction:
    return sum(
        (lam * r * (m - baseline) for (r, m), lam in zip(quotient_data(flag), eig)),
        Fraction(0),
    )


def weight_of(flag: Flag, eig, degree: int, baseline) -> Fraction:
    """Weight of a spectrum against a reference slope, both written forms checked."""
    baseline = Fraction(baseline)
    w = _displayed_weight(flag, eig, degree, baseline)
    assert w == _slope_form_weight(flag, eig, baseline), "weight forms disagree"
    return w


def maximal_weight(b: SplitBundle, s: Spectrum) -> Fraction:
    """Maximal weight of ``b`` in the direction ``s``.

    Every :class:`Spectrum` over a model flag has a holomorphic eigenflag, so
    the infinite branch of the weight cannot occur here.
    """
    s.flag.check(b)
    return weight_of(s.flag, s.eigenvalues, b.degree, b.slope)


@dataclass(frozen=True)
class Destabilizer:
    """Optimal destabilizing direction attached to a filtration.

    ``direction`` lists the unnormalised eigenvalues ``m - m_i``; the unit
    endomorphism is ``direction / sqrt(norm_sq)`` and its weight is
    ``-sqrt(weight_sq)``.
    """

    flag: Flag
    direction: tuple[Fraction, ...]
    norm_sq: Fraction
    weight_sq: Fraction

    @property
    def ranks(self) -> list[int]:
        return [r for r, _ in quotient_data(self.flag)]

    @property
    def min_weight(self) -> float:
        return -math.sqrt(self.weight_sq / VOLUME)

    @property
    def float_view(self) -> list[float]:
        scale = math.sqrt(self.norm_sq * VOLUME)
        return [float(x) / scale for x in self.direction]


def lagrange_minimum(f: Flag, baseline) -> Optional[tuple[tuple[Fraction, ...], Fraction]]:
    """Negative critical point of the weight on the unit ellipsoid of ``f``.

    Returns ``(direction, value_sq)`` with minimum ``-sqrt(value_sq)``, or
    ``None`` when that critical point breaks ``l_1 < ... < l_k``.
    """
    baseline = Fraction(baseline)
    data = quotient_data(f)
    direction = tuple(baseline - m for _, m in data)
    if any(a >= b for a, b in zip(direction, direction[1:])):
        return None
    value_sq = sum((r * d * d for (r, _), d in zip(data, direction)), Fraction(0))
    return direction, value_sq


def optimal_destabilizer(b: SplitBundle) -> Optional[Destabilizer]:
    if is_semistable(b):
        return None
    flag = hn_filtration(b)
    direction, value_sq = lagrange_minimum(flag, b.slope)
    assert value_sq == energy(flag, b.slope)
    return Destabilizer(flag, direction, value_sq, value_sq)


def limit_object(b: SplitBundle, d: Destabilizer) -> list[SplitBundle]:
    """Graded pieces reached by flowing along ``d``."""
    if d.flag.witnesses is None:
        raise ValueError("limit object needs a split flag with witnesses")
    d.flag.check(b)
    return [SplitBundle(b.twists[i] for i in sorted(block)) for block in d.flag.blocks()]


def flow_decay_exponents(d) -> dict[tuple[int, int], Fraction]:
    """Scaling exponents of the blocks ``Hom(F_j, F_i)`` under ``exp(t s)``.

    Keys are 0-based pairs ``i < j`` and values ``direction[i] - direction[j]``,
    all negative, so the off-diagonal part of the operator decays.
    """
    lam = d.direction
    k = len(lam)
    return {(i, j): lam[i] - lam[j] for i in range(k) for j in range(i + 1, k)}
