"""Limiting averages of the k-indices over F_Q.

Two independent evaluation routes for the limit constant of
(1/N(Q)) sum nu_k:

* cell route: enumerate depth-(k-1) cylinder cells of the transfer map up
  to a branch cap L, weight each cell by the signed continuant of its
  itinerary, and sum 2 * weight * area.  Everything discarded has positive
  weight, so the truncated sum is a lower bound; a closed-form tail bound
  turns it into a rigorous enclosure.

* star route: expand the continuant into its monomials, evaluate each
  monomial's integral by its own cell enumeration at its own depth, and
  combine with explicit per-monomial signs.

The tail model uses two exact telescoping sums over the branch regions
(area of the branch-k region is 4/(k(k+1)(k+2)) for k >= 2, area of the
k-tail is 2/(k(k+1))) plus the separation constraint that two branch
indices at distance h cannot both exceed 4h + 2, which caps every other
factor of a monomial once one index runs over the tail.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice
from typing import NamedTuple, Optional, Sequence

from .continuants import (
    continuant_monomials,
    fibonacci,
    kronecker2,
    nu_k_from_nu2,
)
from .farey import correlation_sum, count_farey, sum_nu_k, windows
from .triangle import CylinderCell, area, enumerate_cells, load_cells, save_cells

DEFAULT_KAPPA_MAX = 60
DEFAULT_CHUNKS = 64


@dataclass(frozen=True)
class BkInterval:
    """Enclosure [lo, hi] for the limiting average of nu_k, with the branch
    cap and depth of the underlying cell sum and the tail bound used."""

    k: int
    lo: Fraction
    hi: Fraction
    kappa_max: int
    depth: int
    tail_bound: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, value, slack=Fraction(0)) -> bool:
        value = Fraction(value)
        return self.lo - slack <= value <= self.hi + slack

    def distance(self, value) -> Fraction:
        """Distance from value to the interval (0 if inside)."""
        value = Fraction(value)
        if value < self.lo:
            return self.lo - value
        if value > self.hi:
            return value - self.hi
        return Fraction(0)


# ---------------------------------------------------------------------------
# cell cache

_cells_memo: dict[tuple[int, int], list[CylinderCell]] = {}


def get_cells(depth: int, kappa_max: int, cell_cache=None) -> list[CylinderCell]:
    """Cells at the given depth/cap, memoized; optionally backed by a cache
    file (used only when its header matches, rewritten otherwise)."""
    key = (depth, kappa_max)
    if key in _cells_memo:
        return _cells_memo[key]
    if cell_cache is not None:
        try:
            cells, d, L = load_cells(cell_cache)
            if (d, L) == key:
                _cells_memo[key] = cells
                return cells
        except (OSError, ValueError):
            pass
    cells = enumerate_cells(depth, kappa_max)
    _cells_memo[key] = cells
    if cell_cache is not None:
        save_cells(cell_cache, cells, depth, kappa_max)
    return cells


# ---------------------------------------------------------------------------
# tail model

def _separation_cap(h: int) -> int:
    """Two branch indices at distance h cannot both exceed 4h + 2."""
    return 4 * h + 2


def _monomial_discard_bound(m: Sequence[int], i: int, L: int) -> Fraction:
    """Upper bound for the integral of prod_{j in m} kappa_j over the region
    where kappa_i exceeds L.

    There the other indices are capped by separation, and the unbounded one
    integrates to exactly 4/(L+2); if i is not in m the whole product is
    capped and only the region's area 2/((L+1)(L+2)) enters."""
    cap = Fraction(1)
    for j in m:
        if j != i:
            cap *= _separation_cap(abs(i - j))
    if i in m:
        return cap * Fraction(4, L + 2)
    return cap * Fraction(2, (L + 1) * (L + 2))


def _require_separation(k: int, L: int) -> None:
    need = _separation_cap(k - 2)
    if L < need:
        raise ValueError(
            f"kappa_max={L} too small for k={k}: the tail model needs at least {need}"
        )


def cell_tail_bound(k: int, kappa_max: int) -> Fraction:
    """Bound on the total weight (times 2) of depth-(k-1) cells discarded by
    the cap: union bound over which position runs past the cap, monomial by
    monomial."""
    if k < 3:
        return Fraction(0)
    _require_separation(k, kappa_max)
    total = Fraction(0)
    for i in range(1, k):
        for m in continuant_monomials(k - 1):
            total += _monomial_discard_bound(m, i, kappa_max)
    return 2 * total


# ---------------------------------------------------------------------------
# the two geometric routes

def bk_enclosure(k: int, kappa_max: int = DEFAULT_KAPPA_MAX, cell_cache=None) -> BkInterval:
    """Rigorous enclosure of the limiting average of nu_k from cell geometry.

    k = 1 is exact (nu_1 is identically 1).  k = 2 is exact for every cap:
    the discarded weight telescopes in closed form to 8/(L+2).  For k >= 3
    the truncated sum is the lower end and the tail bound the width.
    """
    if k < 1:
        raise ValueError("k must be >= 1 (nu_0 is undefined)")
    if kappa_max < 1:
        raise ValueError("kappa_max must be >= 1")
    if k == 1:
        return BkInterval(1, Fraction(1), Fraction(1), kappa_max, 0, Fraction(0))
    if k == 2:
        cells = get_cells(1, kappa_max, cell_cache)
        trunc = 2 * sum(
            (c.itinerary[0] * area(c.region) for c in cells), Fraction(0)
        )
        exact = trunc + Fraction(8, kappa_max + 2)
        return BkInterval(2, exact, exact, kappa_max, 1, Fraction(0))
    _require_separation(k, kappa_max)
    cells = get_cells(k - 1, kappa_max, cell_cache)
    trunc = Fraction(0)
    for c in cells:
        w = nu_k_from_nu2(k, c.itinerary)
        if w < 1:
            raise AssertionError(
                f"cell {c.itinerary} has weight {w} < 1; the enclosure logic assumes"
                " positive weights"
            )
        trunc += w * area(c.region)
    trunc *= 2
    tail = cell_tail_bound(k, kappa_max)
    return BkInterval(k, trunc, trunc + tail, kappa_max, k - 1, tail)


class StarFormValue(NamedTuple):
    value: Fraction
    tail_bound: Fraction


def bk_star_form(k: int, kappa_max: int = DEFAULT_KAPPA_MAX) -> StarFormValue:
    """The monomial-by-monomial route: per monomial, a layer-cake sum of
    tail-region intersection areas evaluated through that monomial's own
    cell enumeration, signed by the argument parities and the overall
    Kronecker prefactor."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return StarFormValue(Fraction(1), Fraction(0))
    if k >= 3:
        _require_separation(k, kappa_max)
    pre = kronecker2(2 * k - 1)
    total = Fraction(0)
    tail = Fraction(0)
    for m in continuant_monomials(k - 1):
        if not m:
            w = Fraction(1, 2)
        else:
            d = max(m)
            cells = get_cells(d, kappa_max)
            w = Fraction(0)
            for c in cells:
                prod = 1
                for j in m:
                    prod *= c.itinerary[j - 1]
                w += prod * area(c.region)
            for i in range(1, d + 1):
                tail += _monomial_discard_bound(m, i, kappa_max)
        sign = -1 if sum(m) % 2 else 1
        total += sign * w
    return StarFormValue(pre * 2 * total, 2 * tail)


def bk_trivial_ceiling(k: int) -> int:
    """Crude upper ceiling fib(k-1) * (4k+2)^k for the limiting average;
    every enclosure must sit below it."""
    if k < 2:
        raise ValueError("k must be >= 2")
    return fibonacci(k - 1) * (4 * k + 2) ** k


# ---------------------------------------------------------------------------
# empirical route

def bk_empirical(
    k: int,
    Q: int,
    chunks: int = DEFAULT_CHUNKS,
    threads: Optional[int] = None,
    engine: Optional[str] = None,
) -> Fraction:
    """Exact average of nu_k over one period of F_Q."""
    return Fraction(
        sum_nu_k(Q, k, chunks=chunks, threads=threads, engine=engine), count_farey(Q)
    )


def ah_empirical(
    h: int,
    Q: int,
    chunks: int = DEFAULT_CHUNKS,
    threads: Optional[int] = None,
    engine: Optional[str] = None,
) -> Fraction:
    """Exact average of nu_2(gamma_i) nu_2(gamma_{i+h}) over one period."""
    return Fraction(
        correlation_sum(Q, h, chunks=chunks, threads=threads, engine=engine), count_farey(Q)
    )


def calibrate_error_constant(orders: Sequence[int] = (100, 200, 500, 1000)) -> float:
    """Error-model constant fitted where the truth is exact: the k = 2
    average is 3 - 1/N(Q), so C = max |avg - 3| * Q / (log Q)^2."""
    best = 0.0
    for Q in orders:
        dev = abs(bk_empirical(2, Q) - 3)
        best = max(best, float(dev) * Q / math.log(Q) ** 2)
    return best


class CrossCheckReport(NamedTuple):
    Q: int
    kappa_max: int
    empirical_b3: Fraction
    corr_minus_one: Fraction
    identical: bool
    interval: BkInterval
    widen: Fraction
    empirical_inside: bool


def b3_cross_check(
    Q: int,
    kappa_max: int = DEFAULT_KAPPA_MAX,
    error_constant: Optional[float] = None,
    chunks: int = DEFAULT_CHUNKS,
) -> CrossCheckReport:
    """Consistency of the two estimators tied by nu_3 = nu_2 nu_2' - 1:
    the empirical average of nu_3 must equal the lag-1 correlation average
    minus one exactly, and both must fall in the geometric enclosure widened
    by the calibrated error model."""
    emp3 = bk_empirical(3, Q, chunks=chunks)
    a1 = ah_empirical(1, Q, chunks=chunks)
    itv = bk_enclosure(3, kappa_max)
    C = calibrate_error_constant() if error_constant is None else error_constant
    widen = Fraction(C * math.log(Q) ** 2 / Q)
    inside = itv.contains(emp3, slack=widen)
    return CrossCheckReport(Q, kappa_max, emp3, a1 - 1, emp3 == a1 - 1, itv, widen, inside)


# ---------------------------------------------------------------------------
# value distribution

@dataclass(frozen=True)
class DistributionTable:
    k: int
    kappa_max: int
    Q: int
    entries: dict[int, tuple[Fraction, Fraction]]  # value -> (measure, frequency)
    truncation_deficit: Fraction

    def measures_total(self) -> Fraction:
        return sum((m for m, _ in self.entries.values()), Fraction(0))


def nu_k_distribution(
    k: int, kappa_max: int = DEFAULT_KAPPA_MAX, Q: int = 100
) -> DistributionTable:
    """Geometric measure (2 * cell area, exact up to the truncation deficit)
    and one-period empirical frequency of each nu_k value."""
    if k < 2:
        raise ValueError("the value distribution needs k >= 2")
    cells = get_cells(k - 1, kappa_max)
    measures: dict[int, Fraction] = {}
    covered = Fraction(0)
    for c in cells:
        v = nu_k_from_nu2(k, c.itinerary)
        a = area(c.region)
        measures[v] = measures.get(v, Fraction(0)) + 2 * a
        covered += 2 * a
    N = count_farey(Q)
    counts: Counter[int] = Counter()
    for ps, qs in islice(windows(Q, k + 1), N):
        counts[ps[k] * qs[0] - ps[0] * qs[k]] += 1
    entries: dict[int, tuple[Fraction, Fraction]] = {}
    for v in sorted(set(measures) | set(counts)):
        entries[v] = (measures.get(v, Fraction(0)), Fraction(counts.get(v, 0), N))
    return DistributionTable(k, kappa_max, Q, entries, 1 - covered)


# ---------------------------------------------------------------------------
# convergence against the enclosure

class ConvergenceRow(NamedTuple):
    Q: int
    empirical: Fraction
    distance: Fraction
    model: float


@dataclass(frozen=True)
class ConvergenceReport:
    k: int
    kappa_max: int
    interval: BkInterval
    rows: list[ConvergenceRow]
    consistent: bool


_MODEL_SLACK = 10.0


def convergence_report(
    k: int, orders: Sequence[int], kappa_max: int = DEFAULT_KAPPA_MAX, chunks: int = DEFAULT_CHUNKS
) -> ConvergenceReport:
    """Empirical averages against the geometric enclosure for growing Q.

    Distances to the interval must shrink no slower than the (log Q)^2 / Q
    error model allows (with a generous slack); a zero distance must stay
    zero."""
    if not orders or list(orders) != sorted(orders):
        raise ValueError("orders must be a nonempty ascending list")
    itv = bk_enclosure(k, kappa_max)
    rows = []
    for Q in orders:
        emp = bk_empirical(k, Q, chunks=chunks)
        dist = itv.distance(emp)
        rows.append(ConvergenceRow(Q, emp, dist, math.log(Q) ** 2 / Q if Q > 1 else 1.0))
    consistent = True
    for prev, cur in zip(rows, rows[1:]):
        if prev.distance == 0:
            if cur.distance != 0:
                consistent = False
        else:
            allowed = float(prev.distance) * (cur.model / prev.model) * _MODEL_SLACK
            if float(cur.distance) > allowed:
                consistent = False
    return ConvergenceReport(k, kappa_max, itv, rows, consistent)
