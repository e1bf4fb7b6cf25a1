"""Brute-force ground truth for the closed forms.

Everything here works by enumeration: flags, subsets, spectra on an integer
grid, and a sampled-plus-refined minimisation of the weight over the unit
ellipsoid.  None of it calls the constructions it certifies except to obtain
the value being checked.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np

from . import hn, pairs, weight
from .core import Flag, PairModel, SlopePoint, Spectrum, SplitBundle, as_rat, quotient_data, topsum

log = logging.getLogger(__name__)


class InfeasibleError(ValueError):
    """The constrained eigenvalue region is empty."""


@dataclass
class SweepConfig:
    max_rank: int = 4
    twist_range: tuple[int, int] = (-2, 2)
    tau_grid: list = field(default_factory=list)
    degree_slack: int = 2
    grid_resolution: float = 1e-3
    grid_samples: int = 20
    seed: int = 0
    # negative-control hook: perturb the closed form being certified
    corrupt: bool = False
    # integer eigenvalues for the (slow) spectrum sweep; None skips it
    spectrum_values: Optional[list] = None

    def __post_init__(self):
        if self.max_rank < 1:
            raise ValueError("max_rank must be at least 1")
        lo, hi = self.twist_range
        if lo > hi:
            raise ValueError("twist_range must satisfy lo <= hi")
        self.twist_range = (int(lo), int(hi))
        if self.degree_slack < 0:
            raise ValueError("degree_slack must be non-negative")
        if not 0 < self.grid_resolution <= 1e-2:
            raise ValueError("grid_resolution must lie in (0, 1e-2]")
        self.tau_grid = [as_rat(t) for t in self.tau_grid]

    @property
    def tolerance(self) -> float:
        return 5 * self.grid_resolution


@dataclass
class Report:
    kind: str
    checked: Counter = field(default_factory=Counter)
    violations: list = field(default_factory=list)
    # one row per unstable instance: optimum against the best competitor
    margins: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def violation(self, check: str, **detail) -> None:
        self.violations.append({"check": check, **detail})
        log.warning("%s violation: %s %s", self.kind, check, detail)

    def margin(self, best: Fraction, runner_up: Optional[Fraction], **label) -> None:
        row = {"kind": self.kind, "twists": None, "image": None, "tau": None, **label,
               "best": str(best), "runner_up": None, "margin": None}
        if runner_up is not None:
            row.update(runner_up=str(runner_up), margin=str(best - runner_up))
        self.margins.append(row)


def bundles(max_rank: int, twist_range: tuple[int, int], min_rank: int = 1) -> Iterator[SplitBundle]:
    lo, hi = twist_range
    for r in range(min_rank, max_rank + 1):
        for tw in itertools.combinations_with_replacement(range(hi, lo - 1, -1), r):
            yield SplitBundle(tw)


# -- flag enumeration ---------------------------------------------------------

def split_flags(b: SplitBundle) -> Iterator[Flag]:
    """Every chain of index subsets ending at the full set (no deduplication)."""
    full = frozenset(range(b.rank))

    def rec(current: frozenset, chain: list):
        rest = sorted(full - current)
        for size in range(1, len(rest) + 1):
            for block in itertools.combinations(rest, size):
                nxt = current | frozenset(block)
                if nxt == full:
                    yield chain + [nxt]
                else:
                    yield from rec(nxt, chain + [nxt])

    for chain in rec(frozenset(), []):
        yield Flag.from_witnesses(b, chain)


def ordered_partition_count(n: int) -> int:
    """Number of chains of subsets of an ``n``-set ending at the full set."""
    if n == 0:
        return 1
    return sum(math.comb(n, j) * ordered_partition_count(n - j) for j in range(1, n + 1))


def _typed_chains(counts: tuple[int, ...]):
    if not any(counts):
        yield ()
        return
    for take in itertools.product(*(range(c + 1) for c in counts)):
        if not any(take):
            continue
        rest = tuple(c - t for c, t in zip(counts, take))
        for tail in _typed_chains(rest):
            yield (take,) + tail


def typed_split_flags(b: SplitBundle, image: frozenset = frozenset()) -> Iterator[Flag]:
    """Split flags up to permutations preserving twists and image membership.

    Witnesses use the lowest free indices of each type.
    """
    types = sorted({(b.twists[i], i in image) for i in range(b.rank)}, reverse=True)
    pools = {t: [i for i in range(b.rank) if (b.twists[i], i in image) == t] for t in types}
    counts = tuple(len(pools[t]) for t in types)
    for chain in _typed_chains(counts):
        used = [0] * len(types)
        current, subsets = set(), []
        for take in chain:
            for j, t in enumerate(take):
                current.update(pools[types[j]][used[j]:used[j] + t])
                used[j] += t
            subsets.append(frozenset(current))
        yield Flag.from_witnesses(b, subsets)


def concave_split_flags(b: SplitBundle) -> Iterator[Flag]:
    """Split flags with strictly decreasing quotient slopes, up to
    twist-preserving permutations.

    These are exactly the collinear normalizations of the split flags
    whose polygon is concave.
    """
    values = sorted(set(b.twists), reverse=True)
    counts = tuple(b.twists.count(v) for v in values)
    pools = [[i for i in range(b.rank) if b.twists[i] == v] for v in values]

    def rec(rest, last, chain):
        if not any(rest):
            yield chain
            return
        for take in itertools.product(*(range(c + 1) for c in rest)):
            size = sum(take)
            if not size:
                continue
            m = Fraction(sum(t * v for t, v in zip(take, values)), size)
            if last is None or m < last:
                yield from rec(tuple(c - t for c, t in zip(rest, take)), m, chain + [take])

    for chain in rec(counts, None, []):
        used = [0] * len(values)
        current, subsets = set(), []
        for take in chain:
            for j, t in enumerate(take):
                current.update(pools[j][used[j]:used[j] + t])
                used[j] += t
            subsets.append(frozenset(current))
        yield Flag.from_witnesses(b, subsets)


def enumerate_flags(b: SplitBundle, slack: int = 2, include_split: bool = False) -> Iterator[Flag]:
    """Flags by (rank, degree): each intermediate rank-``k`` step takes every
    degree in ``[topsum(k) - slack, topsum(k)]``.

    With ``include_split`` the (rank, degree) chains of all split flags are
    added as well.  Output is deduplicated and witness-free.
    """
    if slack < 0:
        raise ValueError("slack must be non-negative")
    r, deg = b.rank, b.degree
    seen = set()
    for cut in range(r):
        for ranks in itertools.combinations(range(1, r), cut):
            choices = [range(topsum(b, k) - slack, topsum(b, k) + 1) for k in ranks]
            for degs in itertools.product(*choices):
                pts = tuple(zip(ranks, degs)) + ((r, deg),)
                seen.add(pts)
                yield Flag.from_points(pts)
    if include_split:
        for f in typed_split_flags(b):
            pts = tuple(f.points)
            if pts not in seen:
                seen.add(pts)
                yield Flag(f.steps)


def strictly_increasing_tuples(k: int, values: Sequence[int]) -> Iterator[tuple[int, ...]]:
    return itertools.combinations(sorted(values), k)


# -- numerical minimisation on the ellipsoid ----------------------------------

@dataclass(frozen=True)
class GridResult:
    value: float
    argmin: list[float]


def _cone_matrix(k: int, nonpositive_step: Optional[int], zero_step: Optional[int]) -> np.ndarray:
    """Columns generate the closed cone of admissible eigenvalue vectors."""
    cols = []
    anchor = zero_step if zero_step is not None else nonpositive_step
    if anchor is None:
        anchor = 0
        cols.append(np.ones(k))
        cols.append(-np.ones(k))
    elif zero_step is None:
        cols.append(-np.ones(k))
    for j in range(anchor + 1, k):
        v = np.zeros(k)
        v[j:] = 1.0
        cols.append(v)
    for j in range(anchor):
        v = np.zeros(k)
        v[: j + 1] = -1.0
        cols.append(v)
    if not cols:
        return np.zeros((k, 0))
    return np.stack(cols, axis=1)


def grid_minimize(
    b: SplitBundle,
    f: Flag,
    baseline,
    resolution: float = 1e-3,
    nonpositive_step: Optional[int] = None,
    zero_step: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> GridResult:
    """Minimise ``sum l_i r_i (m_i - baseline)`` over ``sum r_i l_i^2 = 1``
    with ``l`` non-decreasing.

    ``nonpositive_step`` and ``zero_step`` (0-based) add ``l_j <= 0`` or
    ``l_j = 0``.  The feasible cone is parametrised by a non-negative
    orthant, sampled densely and then refined by projected pattern search.
    """
    f.check(b)
    if rng is None:
        rng = np.random.default_rng(0)
    data = quotient_data(f)
    k = len(data)
    r = np.array([ri for ri, _ in data], dtype=float)
    c = np.array([ri * float(mi - Fraction(baseline)) for ri, mi in data])
    if zero_step is not None and nonpositive_step is not None and nonpositive_step > zero_step:
        raise InfeasibleError("constraints force two equal eigenvalues")
    A = _cone_matrix(k, nonpositive_step, zero_step)
    n = A.shape[1]
    if n == 0:
        raise InfeasibleError("no eigenvalue vector satisfies the constraints")

    def objective(P: np.ndarray) -> np.ndarray:
        L = P @ A.T
        norm = np.sqrt((L * L) @ r)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = (L @ c) / norm
        return np.where(norm > 1e-300, val, np.inf)

    samples = max(2000, int(2.0 / resolution))
    P = rng.exponential(size=(samples, n)) * (rng.random((samples, n)) < 0.6)
    P = np.vstack([P, np.eye(n)])
    vals = objective(P)
    starts = P[np.argsort(vals)[:4]]

    best_p, best_v = None, np.inf
    for p in starts:
        p = p / p.sum()
        v = objective(p[None, :])[0]
        step = 0.5
        while step > resolution * 1e-3:
            improved = False
            for j in range(n):
                for delta in (step, -step):
                    q = p.copy()
                    q[j] = max(q[j] + delta, 0.0)
                    if not q.any():
                        continue
                    qv = objective(q[None, :])[0]
                    if qv < v - 1e-15:
                        p, v, improved = q / q.sum(), qv, True
            if not improved:
                step /= 2
        if v < best_v:
            best_p, best_v = p, v
    lam = A @ best_p
    lam = lam / math.sqrt(float(lam @ (r * lam)))
    return GridResult(float(best_v), [float(x) for x in lam])


# -- classical certification ---------------------------------------------------

def _norm_sq(data, lam) -> Fraction:
    return sum((ri * Fraction(x) ** 2 for (ri, _), x in zip(data, lam)), Fraction(0))


def _bound_ok(w: Fraction, lam_norm_sq: Fraction, best_sq: Fraction) -> bool:
    # w / |lam| >= -sqrt(best_sq)  (exact)
    return w >= 0 or w * w <= best_sq * lam_norm_sq


def criterion_spectra(f: Flag, values: Sequence[int] = range(-2, 3)) -> Iterator[tuple[int, ...]]:
    return strictly_increasing_tuples(len(f), values)


def corrupt_value(v: Fraction) -> Fraction:
    return v * Fraction(7, 8)


def certify_classical(cfg: SweepConfig, report: Optional[Report] = None) -> Report:
    """Exhaustive check of the closed-form optimal destabilizer for bundles."""
    report = report or Report("classical")
    start = time.perf_counter()
    rng = random.Random(cfg.seed)
    grid_pool = []
    for b in bundles(cfg.max_rank, cfg.twist_range):
        report.checked["bundles"] += 1
        m = b.slope
        d = weight.optimal_destabilizer(b)
        semistable = hn.is_semistable(b)
        if (d is None) != semistable:
            report.violation("destabilizer-exists", twists=list(b.twists))
            continue
        best = Fraction(0) if d is None else d.norm_sq
        if cfg.corrupt and d is not None:
            best = corrupt_value(best)
        hn_pts = None if d is None else tuple(hn.normalize_flag(d.flag).points)
        runner_up = None
        for f in enumerate_flags(b, cfg.degree_slack, include_split=True):
            report.checked["flags"] += 1
            lm = weight.lagrange_minimum(f, m)
            if lm is None:
                continue
            _, value_sq = lm
            pts = tuple(hn.normalize_flag(f).points)
            if pts == hn_pts:
                if value_sq != best:
                    report.violation("hn-value", twists=list(b.twists), flag=f.points)
            else:
                if runner_up is None or value_sq > runner_up:
                    runner_up = value_sq
                if value_sq >= best and not (semistable and value_sq == 0):
                    report.violation("optimality", twists=list(b.twists), flag=f.points,
                                     value_sq=str(value_sq), best=str(best))
            if d is not None and len(f) > 1:
                grid_pool.append((b, f, value_sq))
        if semistable:
            for f in typed_split_flags(b):
                if len(f) == 1:
                    continue
                g = grid_minimize(b, f, m, cfg.grid_resolution)
                report.checked["semistable-grid"] += 1
                if g.value < -cfg.tolerance:
                    report.violation("semistable-weight", twists=list(b.twists),
                                     flag=f.points, value=g.value)
        if d is not None:
            report.margin(best, runner_up, twists=" ".join(map(str, b.twists)))
            check_limit(b, d, report, {"twists": list(b.twists)})
            g = grid_minimize(b, d.flag, m, cfg.grid_resolution)
            report.checked["hn-grid"] += 1
            if abs(g.value + math.sqrt(best)) > cfg.tolerance:
                report.violation("grid-agreement", twists=list(b.twists),
                                 grid=g.value, closed=-math.sqrt(best))
    for b, f, value_sq in rng.sample(grid_pool, min(cfg.grid_samples, len(grid_pool))):
        g = grid_minimize(b, f, b.slope, cfg.grid_resolution)
        report.checked["flag-grid"] += 1
        if abs(g.value + math.sqrt(value_sq)) > cfg.tolerance:
            report.violation("lagrange-grid", twists=list(b.twists), flag=f.points,
                             grid=g.value, closed=-math.sqrt(value_sq))
    report.seconds += time.perf_counter() - start
    return report


def stability_criterion_violations(b: SplitBundle, slack: int = 1,
                                   values: Sequence[int] = range(-2, 3)) -> list:
    """``is_semistable(b)`` against the sign of every enumerated weight."""
    semistable = hn.is_semistable(b)
    d = weight.optimal_destabilizer(b)
    negative = False
    bad = []
    for f in enumerate_flags(b, slack, include_split=True):
        f.check(b)
        data = quotient_data(f)
        for lam in criterion_spectra(f, values):
            w = weight.maximal_weight(b, Spectrum(f, lam))
            if w < 0:
                negative = True
                if semistable:
                    bad.append(("negative-on-semistable", f.points, lam))
            if d is not None and not _bound_ok(w, _norm_sq(data, lam), d.norm_sq):
                bad.append(("below-optimum", f.points, lam))
    if d is not None:
        w = weight.maximal_weight(b, Spectrum(d.flag, d.direction))
        negative = negative or w < 0
        if w != -d.norm_sq:
            bad.append(("optimal-weight", d.flag.points, d.direction))
    if negative == semistable:
        bad.append(("criterion", None, None))
    return bad


# -- pair certification --------------------------------------------------------

def tau_semistable_bruteforce(p: PairModel) -> bool:
    b, tau = p.bundle, p.tau
    r = b.rank
    for size in range(1, r):
        for S in itertools.combinations(range(r), size):
            deg = b.twistsum(S)
            if Fraction(deg, size) > tau:
                return False
            if p.image <= set(S) and Fraction(b.degree - deg, r - size) < tau:
                return False
    return True


def _block_semistable(b: SplitBundle, block) -> bool:
    return len({b.twists[i] for i in block}) == 1


def _induced_pair(p: PairModel, flag: Flag, j: int) -> PairModel:
    block = sorted(flag.blocks()[j])
    prev = flag.witnesses[j - 1] if j > 0 else frozenset()
    sub = SplitBundle(p.bundle.twists[i] for i in block)
    induced = [pos for pos, i in enumerate(block) if i in p.image and i not in prev]
    return PairModel(sub, induced, p.tau)


@dataclass(frozen=True)
class FlagData:
    """Per-flag quantities that do not depend on tau."""

    flag: Flag
    ranks: tuple[int, ...]
    slopes: tuple[Fraction, ...]
    semistable: tuple[bool, ...]
    image_step: int
    signature: tuple


def flag_data(b: SplitBundle, image: frozenset, flag: Flag) -> FlagData:
    data = quotient_data(flag)
    wit = (frozenset(),) + flag.witnesses
    return FlagData(
        flag,
        tuple(r for r, _ in data),
        tuple(m for _, m in data),
        tuple(_block_semistable(b, blk) for blk in flag.blocks()),
        next(j for j, w in enumerate(wit) if image <= w),
        tuple(tuple(sorted((b.twists[i], i in image) for i in blk)) for blk in flag.blocks()),
    )


def _chain_split(slopes, tau):
    """Index ``l`` of the first slope not above tau, or ``None`` when the
    slopes around it are not strictly decreasing on both sides of ``tau``."""
    k = len(slopes)
    l = 0
    while l < k and slopes[l] > tau:
        l += 1
    head, tail = slopes[:l], slopes[l + 1:]
    if any(x <= y for x, y in zip(head, head[1:])):
        return None
    if any(x >= tau for x in tail) or any(x <= y for x, y in zip(tail, tail[1:])):
        return None
    return l


def theorem_match(p: PairModel, fd: FlagData) -> Optional[tuple[int, str]]:
    """``(m, case)`` if the flag meets every clause of the generalized HN
    theorem, else ``None``.

    The slope chain pins ``m`` to the number of slopes above tau, so only
    that index needs testing.
    """
    tau, slopes, k = p.tau, fd.slopes, len(fd.slopes)
    m = _chain_split(slopes, tau)
    if m is None:
        return None
    if any(not ok for i, ok in enumerate(fd.semistable) if i != m):
        return None
    if fd.image_step <= m:
        if m == k or (fd.semistable[m] and (m + 1 == k or slopes[m] > slopes[m + 1])):
            return m, "C"
        return None
    if fd.image_step != m + 1:
        return None
    if slopes[m] < tau and tau_semistable_bruteforce(_induced_pair(p, fd.flag, m)):
        return m, "A"
    if slopes[m] == tau and fd.semistable[m]:
        return m, "B"
    return None


def admissible_value(p: PairModel, fd: FlagData) -> Optional[tuple[Fraction, bool]]:
    """Energy with the zero-eigenvalue rule for an admissible filtration,
    with whether a term was skipped; ``None`` if not admissible."""
    tau, slopes, k = p.tau, fd.slopes, len(fd.slopes)
    l = _chain_split(slopes, tau)
    if l is None:
        return None
    if l < k and fd.image_step > l + 1:
        return None
    skip = fd.image_step > l
    if not skip and l + 1 < k and not slopes[l] > slopes[l + 1]:
        return None
    value = sum(
        (r * (m - tau) ** 2 for i, (r, m) in enumerate(zip(fd.ranks, slopes))
         if not (skip and i == l)),
        Fraction(0),
    )
    return value, skip


def flag_signature(p: PairModel, flag: Flag) -> tuple:
    return tuple(
        tuple(sorted((p.bundle.twists[i], i in p.image) for i in block))
        for block in flag.blocks()
    )


def type_ii_maximal(p: PairModel) -> Optional[frozenset]:
    """Image-containing proper subobject with the smallest quotient slope
    below tau, largest quotient among ties (brute force)."""
    b, r = p.bundle, p.bundle.rank
    best, best_key = None, None
    for size in range(1, r):
        for S in itertools.combinations(range(r), size):
            if not p.image <= set(S):
                continue
            q = Fraction(b.degree - b.twistsum(S), r - size)
            if q >= p.tau:
                continue
            key = (q, size)
            if best_key is None or key < best_key:
                best, best_key = frozenset(S), key
    return best


def images(b: SplitBundle) -> Iterator[frozenset]:
    """Non-empty images up to twist-preserving permutations."""
    groups = [list(g) for _, g in itertools.groupby(range(b.rank), key=lambda i: b.twists[i])]
    for take in itertools.product(*(range(len(g) + 1) for g in groups)):
        if any(take):
            yield frozenset(i for g, t in zip(groups, take) for i in g[:t])


def check_pair_instance(p: PairModel, flags: list[FlagData], report: Report,
                        corrupt: bool = False,
                        spectra_values: Optional[Sequence[int]] = None):
    """Run every exact pair check on one instance; returns the destabilizer.

    ``spectra_values`` additionally sweeps integer spectra through
    :func:`~gaugehn.pairs.pair_maximal_weight` (slow; used on small sweeps).
    """
    b, tau = p.bundle, p.tau
    tag = {"twists": list(b.twists), "image": sorted(p.image), "tau": str(tau)}
    semistable = pairs.is_tau_semistable(p)
    if semistable != tau_semistable_bruteforce(p):
        report.violation("tau-semistable-definition", **tag)
    d = pairs.pair_optimal_destabilizer(p)
    if (d is None) != semistable:
        report.violation("pair-destabilizer-exists", **tag)
        return None
    best = Fraction(0) if d is None else d.norm_sq
    if corrupt and d is not None:
        best = corrupt_value(best)
    negative = False
    if spectra_values is not None:
        for fd in flags:
            for lam in criterion_spectra(fd.flag, spectra_values):
                w = pairs.pair_maximal_weight(p, Spectrum(fd.flag, lam))
                if w == math.inf:
                    continue
                report.checked["pair-spectra"] += 1
                negative = negative or w < 0
                norm = sum((r * x * x for r, x in zip(fd.ranks, lam)), 0)
                if not _bound_ok(w, norm, best):
                    report.violation("pair-spectrum-below-optimum", flag=fd.flag.points,
                                     lam=list(lam), **tag)
        if semistable and negative:
            report.violation("pair-criterion-semistable", **tag)
    if d is None:
        return None

    g = pairs.generalized_hn(p)
    expected = flag_signature(p, g.flag)
    matches = []
    runner_up = None
    for fd in flags:
        report.checked["pair-flags"] += 1
        hit = theorem_match(p, fd)
        if hit is not None:
            matches.append((fd.signature, *hit))
        adm = admissible_value(p, fd)
        if adm is None:
            continue
        report.checked["admissible"] += 1
        value, _ = adm
        if fd.signature == expected:
            if value != best:
                report.violation("pair-value", flag=fd.flag.points, **tag)
            continue
        if runner_up is None or value > runner_up:
            runner_up = value
        if value >= best:
            report.violation("pair-optimality", flag=fd.flag.points, value=str(value),
                             best=str(best), **tag)

    report.margin(best, runner_up, twists=" ".join(map(str, b.twists)),
                  image=" ".join(str(i + 1) for i in sorted(p.image)), tau=str(tau))
    w = pairs.pair_maximal_weight(p, Spectrum(d.flag, d.direction))
    if w != -d.norm_sq:
        report.violation("pair-optimal-weight", **tag)
    if spectra_values is not None and not (negative or w < 0):
        report.violation("pair-criterion-unstable", **tag)
    if matches != [(expected, g.m_index, g.case_tag)]:
        report.violation("hardert-uniqueness", found=len(matches), **tag)
    if g.case_tag in "BC":
        if g.flag.points != hn.hn_filtration(b).points:
            report.violation("hardert-classical", **tag)
        slopes = [mi for _, mi in quotient_data(g.flag)]
        if g.m_index + 1 < len(slopes) and not slopes[g.m_index] > slopes[g.m_index + 1]:
            report.violation("hardert-extra-slope", **tag)
    if g.case_tag == "A" and not pairs.is_tau_semistable(pairs.quotient_pair(p, g)):
        report.violation("case-a-quotient", **tag)
    first = hn.hn_filtration(b)
    if first.steps[0].slope > tau:
        type_ii = type_ii_maximal(p)
        if type_ii is not None and not first.witnesses[0] <= type_ii:
            report.violation("containment", **tag)
    check_pair_limit(p, d, report, tag)
    return d


def literal_limit_failures(p: PairModel, d) -> list[str]:
    """Which of "every block semistable" and "block slopes strictly
    decreasing" fail for the graded pair limit, read literally."""
    blocks = pairs.pair_limit_object(p, d).blocks
    out = []
    if any(not hn.is_semistable(blk.bundle) for blk in blocks):
        out.append("semistable")
    if any(x.bundle.slope <= y.bundle.slope for x, y in zip(blocks, blocks[1:])):
        out.append("slopes")
    return out


def check_pair_limit(p: PairModel, d, report: Report, tag: dict) -> None:
    """Plain blocks semistable, the carrying block a tau-semistable pair,
    distinct eigenvalues, and decay of the off-diagonal part."""
    report.checked["pair-limit-objects"] += 1
    literal = literal_limit_failures(p, d)
    for what in literal:
        # tallied, not violations: the carrying block is only tau-semistable
        report.checked[f"pair-limit-literal-{what}-fails"] += 1
    if literal:
        report.checked[f"pair-limit-literal-case-{d.case_tag}"] += 1
    lim = pairs.pair_limit_object(p, d)
    for i, blk in enumerate(lim.blocks):
        if blk.carries_morphism:
            ok = tau_semistable_bruteforce(_induced_pair(p, d.flag, i))
        else:
            ok = hn.is_semistable(blk.bundle)
        if not ok:
            report.violation("pair-limit-semistable", block=i, **tag)
    if sum(blk.carries_morphism for blk in lim.blocks) != int(d.skip):
        report.violation("pair-limit-tag", **tag)
    if any(v >= 0 for v in weight.flow_decay_exponents(d).values()):
        report.violation("pair-decay", **tag)


def techlem_documented_boundary(f, g, tau) -> bool:
    """Whether the longer polygon is the shorter one extended by segments of
    slope ``tau``: the configurations where the energies tie."""
    tau = Fraction(tau)
    short, long_ = (f, g) if f.length <= g.length else (g, f)
    if short.length == long_.length:
        return False
    cut, at = short.length, long_(short.length)
    head = [(x, y) for x, y in long_.vertices if x < cut] + [(cut, at)]
    if hn.Polygon(head).normalized().vertices != short.normalized().vertices:
        return False
    tail = hn.Polygon([(0, 0)] + [(x - cut, y - at) for x, y in long_.vertices if x > cut])
    return all(s == tau for _, s in tail.segments())


def check_limit(b: SplitBundle, d, report: Report, tag: dict) -> None:
    report.checked["limit-objects"] += 1
    blocks = weight.limit_object(b, d)
    if any(not hn.is_semistable(x) for x in blocks):
        report.violation("limit-semistable", **tag)
    if any(x.slope <= y.slope for x, y in zip(blocks, blocks[1:])):
        report.violation("limit-slopes", **tag)
    if sorted(a for x in blocks for a in x.twists) != sorted(b.twists):
        report.violation("limit-twists", **tag)
    if any(v >= 0 for v in weight.flow_decay_exponents(d).values()):
        report.violation("decay", **tag)


def pair_instances(cfg: SweepConfig, report: Report) -> Iterator[tuple[PairModel, list[FlagData]]]:
    """Every swept pair with slope(E) >= tau, with its typed split flags."""
    for b in bundles(cfg.max_rank, cfg.twist_range):
        if b.rank == 1:
            report.checked["skipped-rank-1"] += 1
            continue
        taus = [t for t in cfg.tau_grid if b.slope >= t]
        if not taus:
            continue
        for image in images(b):
            flags = [flag_data(b, image, f) for f in typed_split_flags(b, image)]
            for tau in taus:
                yield PairModel(b, image, tau), flags


def certify_pairs(cfg: SweepConfig, report: Optional[Report] = None) -> Report:
    """Exhaustive check of the generalized HN theorem and the pair optimum."""
    report = report or Report("pairs")
    start = time.perf_counter()
    rng = random.Random(cfg.seed)
    pool = []
    for p, flags in pair_instances(cfg, report):
        report.checked["instances"] += 1
        d = check_pair_instance(p, flags, report, cfg.corrupt, cfg.spectrum_values)
        if d is not None:
            pool.append(p)
    for p in rng.sample(pool, min(cfg.grid_samples, len(pool))):
        check_pair_grid(p, cfg, report)
    report.seconds += time.perf_counter() - start
    return report


def check_pair_grid(p: PairModel, cfg: SweepConfig, report: Report) -> None:
    d = pairs.pair_optimal_destabilizer(p)
    g = grid_minimize(p.bundle, d.flag, p.tau, cfg.grid_resolution,
                      nonpositive_step=p.image_step(d.flag))
    report.checked["pair-grid"] += 1
    if abs(g.value - d.min_weight) > cfg.tolerance:
        report.violation("pair-grid-agreement", twists=list(p.bundle.twists),
                         image=sorted(p.image), tau=str(p.tau),
                         grid=g.value, closed=d.min_weight)
