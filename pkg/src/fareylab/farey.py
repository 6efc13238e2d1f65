"""Farey sequences of order Q: exact streaming enumeration and index sums.

The sequence F_Q lists the reduced fractions in (0,1] with denominator at
most Q, gamma_1 = 1/Q through gamma_{N(Q)} = 1, and is extended to all
integer indices by gamma_{i+N(Q)} = gamma_i + 1 (so gamma_0 = 0/1).  The
k-index of gamma_i is the numerator of gamma_{i+k-1} - gamma_{i-1}:

    nu_k(gamma_i) = p_{i+k-1} q_{i-1} - p_{i-1} q_{i+k-1}

All sums here are exact integers.  Large runs go through int64 numba
kernels with per-call term caps chosen so no intermediate can overflow;
partial sums are combined as Python ints, so results are exact for any Q.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Optional

import numpy as np


class ContractViolation(ValueError):
    """A fraction pair fed to a neighbor-based operation is not a
    consecutive pair of the periodic extension of F_Q."""


class FareyFraction(NamedTuple):
    num: int
    den: int

    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


class FareyContext(NamedTuple):
    order: int
    count: int


@dataclass(frozen=True)
class FareyWindow:
    """k+1 consecutive extension fractions gamma_{i-1}..gamma_{i+k-1}."""

    start_index: int
    fractions: tuple[FareyFraction, ...]


# ---------------------------------------------------------------------------
# totient sieve

_phi_cumsum: np.ndarray | None = None


def _grow_phi(limit: int) -> np.ndarray:
    global _phi_cumsum
    if _phi_cumsum is not None and len(_phi_cumsum) > limit:
        return _phi_cumsum
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if phi[p] == p:  # untouched -> prime
            phi[p::p] -= phi[p::p] // p
    phi[0] = 0
    _phi_cumsum = np.cumsum(phi)
    return _phi_cumsum


def count_farey(Q: int) -> int:
    """N(Q) = #F_Q = sum of phi(q) for q <= Q, exactly."""
    if Q < 1:
        raise ValueError(f"order must be >= 1, got {Q}")
    cs = _grow_phi(max(Q, 1024))
    return int(cs[Q])


def farey_context(Q: int) -> FareyContext:
    return FareyContext(Q, count_farey(Q))


# ---------------------------------------------------------------------------
# neighbor recurrence

def _check_pair(prev: FareyFraction, cur: FareyFraction, Q: int) -> None:
    if Q < 1:
        raise ValueError(f"order must be >= 1, got {Q}")
    pa, qa = prev
    pb, qb = cur
    if qa < 1 or qb < 1 or qa > Q or qb > Q:
        raise ContractViolation(f"denominators of ({prev}, {cur}) not in 1..{Q}")
    if pb * qa - pa * qb != 1:
        raise ContractViolation(f"({prev}, {cur}) is not unimodular")
    if qa + qb <= Q:
        raise ContractViolation(f"({prev}, {cur}) are not neighbors in F_{Q}")


def farey_next(prev: FareyFraction, cur: FareyFraction, Q: int) -> FareyFraction:
    """Successor of cur given its predecessor, via
    t = floor((Q + q_{i-1}) / q_i), gamma_{i+1} = t*gamma_i - gamma_{i-1}."""
    prev = FareyFraction(*prev)
    cur = FareyFraction(*cur)
    _check_pair(prev, cur, Q)
    t = (Q + prev.den) // cur.den
    return FareyFraction(t * cur.num - prev.num, t * cur.den - prev.den)


def nu2_floor(prev: FareyFraction, cur: FareyFraction, Q: int) -> int:
    """nu_2(cur) = floor((Q + q_{i-1}) / q_i) for a consecutive pair."""
    prev = FareyFraction(*prev)
    cur = FareyFraction(*cur)
    _check_pair(prev, cur, Q)
    return (Q + prev.den) // cur.den


def nu_k(first: FareyFraction, last: FareyFraction) -> int:
    """Numerator of last - first over the product of denominators.

    With first = gamma_{i-1} and last = gamma_{i+k-1} this is nu_k(gamma_i);
    the caller is responsible for the two fractions being exactly k
    positions apart in the same extension.
    """
    pa, qa = first
    pb, qb = last
    v = pb * qa - pa * qb
    if v <= 0:
        raise ValueError(f"first ({pa}/{qa}) must precede last ({pb}/{qb})")
    return v


def neighbor_criterion(a: int, b: int, Q: int) -> bool:
    """True iff (a, b) occurs as a consecutive denominator pair in F_Q:
    1 <= a, b <= Q, gcd(a, b) = 1 and a + b > Q."""
    return 1 <= a <= Q and 1 <= b <= Q and math.gcd(a, b) == 1 and a + b > Q


# ---------------------------------------------------------------------------
# streaming / seeking

def farey_stream(
    Q: int, start: Optional[tuple[FareyFraction, FareyFraction]] = None
) -> Iterator[FareyFraction]:
    """Yield Farey fractions in increasing order with O(1) state.

    Without a seed: exactly the N(Q) fractions of F_Q, 1/Q .. 1/1.
    With a seed pair (gamma_{i-1}, gamma_i): yields gamma_i, gamma_{i+1}, ...
    of the periodic extension, without end.
    """
    if Q < 1:
        raise ValueError(f"order must be >= 1, got {Q}")
    if start is None:
        pa, qa = 0, 1
        pb, qb = 1, Q
        while True:
            yield FareyFraction(pb, qb)
            if pb == 1 and qb == 1:
                return
            t = (Q + qa) // qb
            pa, qa, pb, qb = pb, qb, t * pb - pa, t * qb - qa
    else:
        prev, cur = start
        prev = FareyFraction(*prev)
        cur = FareyFraction(*cur)
        _check_pair(prev, cur, Q)
        pa, qa = prev
        pb, qb = cur
        while True:
            yield FareyFraction(pb, qb)
            t = (Q + qa) // qb
            pa, qa, pb, qb = pb, qb, t * pb - pa, t * qb - qa


def seek(x, Q: int) -> tuple[FareyFraction, FareyFraction]:
    """Consecutive pair (gamma_{i-1}, gamma_i) of the extension with
    gamma_{i-1} <= x < gamma_i, for rational x in [0, 1).

    Runs a Stern-Brocot descent with run-length acceleration, so the cost
    is O(sum of continued-fraction quotient logs), not O(Q).
    """
    if isinstance(x, float):
        raise TypeError("seek needs an exact rational, not a float")
    x = Fraction(x)
    if not (0 <= x < 1):
        raise ValueError(f"x must satisfy 0 <= x < 1, got {x}")
    if Q < 1:
        raise ValueError(f"order must be >= 1, got {Q}")
    xn, xd = x.numerator, x.denominator
    a, b = 0, 1  # left  <= x
    c, d = 1, 1  # right >  x
    while b + d <= Q:
        num = xn * b - xd * a  # > 0 iff x > left
        den = xd * c - xn * d  # > 0 always (right > x)
        if xn * (b + d) - xd * (a + c) >= 0:  # mediant <= x: push left up
            t = min(num // den, (Q - b) // d)
            a, b = a + t * c, b + t * d
        else:  # mediant > x: pull right down
            if num == 0:  # x == left: right walks alone
                t = (Q - d) // b
            else:
                t = min((den - 1) // num, (Q - d) // b)
            c, d = c + t * a, d + t * b
    return FareyFraction(a, b), FareyFraction(c, d)


def farey_window(Q: int, i: int, k: int) -> FareyWindow:
    """The k+1 consecutive extension fractions gamma_{i-1}..gamma_{i+k-1}.

    Any integer i is accepted; the periodic extension reduces it into the
    base period, so the cost is O(i mod N + k), not O(i)."""
    if Q < 1 or k < 1:
        raise ValueError("Q and k must be >= 1")
    N = count_farey(Q)
    shift, j = divmod(i - 1, N)  # gamma_{i} = gamma_{j+1} + shift
    pa, qa = 0, 1
    pb, qb = 1, Q
    for _ in range(j):
        t = (Q + qa) // qb
        pa, qa, pb, qb = pb, qb, t * pb - pa, t * qb - qa
    out = [FareyFraction(pa + shift * qa, qa), FareyFraction(pb + shift * qb, qb)]
    pa, pb = out[0].num, out[1].num
    qa, qb = out[0].den, out[1].den
    for _ in range(k - 1):
        t = (Q + qa) // qb
        pa, qa, pb, qb = pb, qb, t * pb - pa, t * qb - qa
        out.append(FareyFraction(pb, qb))
    return FareyWindow(i - 1, tuple(out))


def windows(Q: int, size: int) -> Iterator[tuple[list[int], list[int]]]:
    """Yield (p, q) buffer lists of `size` consecutive extension fractions
    gamma_{i-1}..gamma_{i+size-2} for i = 1, 2, ...

    The same lists are reused between yields; callers must copy if they
    keep references. Runs forever; take N(Q) items for one period.
    """
    if size < 2:
        raise ValueError("window size must be >= 2")
    ps = [0, 1]
    qs = [1, Q]
    while len(ps) < size:
        t = (Q + qs[-2]) // qs[-1]
        ps.append(t * ps[-1] - ps[-2])
        qs.append(t * qs[-1] - qs[-2])
    while True:
        yield ps, qs
        t = (Q + qs[-2]) // qs[-1]
        pn = t * ps[-1] - ps[-2]
        qn = t * qs[-1] - qs[-2]
        ps.pop(0)
        qs.pop(0)
        ps.append(pn)
        qs.append(qn)


# ---------------------------------------------------------------------------
# chunked exact sums

_FAST_MAX_ORDER = 10**8
_FAST_MAX_SPAN = 64


def _threads_default() -> int:
    try:
        return max(1, int(os.environ.get("FAREY_LAB_THREADS", "1")))
    except ValueError:
        return 1


def _chunk_plan(Q: int, chunks: int) -> list[tuple[tuple[int, int, int, int], tuple[int, int]]]:
    """Split ownership of the window heads gamma_{i-1} in [0, 1) at the cut
    points j/chunks.  Each entry is ((p_prev, q_prev, p_cur, q_cur), stop)
    where the chunk owns all terms whose head lies in [cut_{j-1}, cut_j)."""
    if chunks < 1:
        raise ValueError("chunks must be >= 1")
    plan = []
    for j in range(chunks):
        lo = Fraction(j, chunks)
        a, b = seek(lo, Q)
        if a.value() != lo:
            t = (Q + a.den) // b.den
            a, b = b, FareyFraction(t * b.num - a.num, t * b.den - a.den)
        plan.append(((a.num, a.den, b.num, b.den), (j + 1, chunks)))
    return plan


def _terms_per_call(bound_per_term: int) -> int:
    return max(1, (1 << 62) // max(1, bound_per_term))


def _fast_available() -> bool:
    if os.environ.get("FAREYLAB_FORCE_PURE"):
        return False
    try:
        from . import _fast

        return _fast.HAVE_NUMBA
    except ImportError:
        return False


def _pick_engine(engine: Optional[str], Q: int, span: int, chunks: int) -> str:
    if engine in ("pure", "fast"):
        return engine
    if engine is not None:
        raise ValueError(f"unknown engine {engine!r}")
    if (
        _fast_available()
        and Q <= _FAST_MAX_ORDER
        and span <= _FAST_MAX_SPAN
        and chunks <= 10**6
        and count_farey(Q) > 512
    ):
        return "fast"
    return "pure"


def _sum_chunk_pure(Q: int, k: int, pair: tuple[int, int, int, int], stop: tuple[int, int]) -> int:
    pa, qa, pb, qb = pair
    ps = [pa, pb]
    qs = [qa, qb]
    while len(ps) < k + 1:
        t = (Q + qs[-2]) // qs[-1]
        ps.append(t * ps[-1] - ps[-2])
        qs.append(t * qs[-1] - qs[-2])
    sn, sd = stop
    total = 0
    while ps[0] * sd < sn * qs[0]:
        total += ps[k] * qs[0] - ps[0] * qs[k]
        t = (Q + qs[-2]) // qs[-1]
        pn = t * ps[-1] - ps[-2]
        qn = t * qs[-1] - qs[-2]
        ps.pop(0)
        qs.pop(0)
        ps.append(pn)
        qs.append(qn)
    return total


def _sum_chunk_fast(Q: int, k: int, pair: tuple[int, int, int, int], stop: tuple[int, int]) -> int:
    from . import _fast

    pa, qa, pb, qb = pair
    ps = [pa, pb]
    qs = [qa, qb]
    while len(ps) < k + 1:
        t = (Q + qs[-2]) // qs[-1]
        ps.append(t * ps[-1] - ps[-2])
        qs.append(t * qs[-1] - qs[-2])
    pbuf = np.array(ps, dtype=np.int64)
    qbuf = np.array(qs, dtype=np.int64)
    cap = _terms_per_call(k * Q)  # nu_k <= k*Q
    total = 0
    while True:
        part, done, hit = _fast.sum_nu_k_chunk(Q, k, pbuf, qbuf, stop[0], stop[1], cap)
        total += int(part)
        if hit:
            return total


def _corr_chunk_pure(Q: int, h: int, pair: tuple[int, int, int, int], stop: tuple[int, int]) -> int:
    pa, qa, pb, qb = pair
    ring = []
    bp, bq_, bp2, bq2 = pa, qa, pb, qb
    for _ in range(h):
        t = (Q + bq_) // bq2
        ring.append(t)
        bp, bq_, bp2, bq2 = bp2, bq2, t * bp2 - bp, t * bq2 - bq_
    ap, aq, ap2, aq2 = pa, qa, pb, qb
    sn, sd = stop
    total = 0
    idx = 0
    while ap * sd < sn * aq:
        ta = ring[idx]
        tb = (Q + bq_) // bq2
        total += ta * tb
        ring[idx] = tb
        idx += 1
        if idx == h:
            idx = 0
        ap, aq, ap2, aq2 = ap2, aq2, ta * ap2 - ap, ta * aq2 - aq
        bp, bq_, bp2, bq2 = bp2, bq2, tb * bp2 - bp, tb * bq2 - bq_
    return total


def _corr_chunk_fast(Q: int, h: int, pair: tuple[int, int, int, int], stop: tuple[int, int]) -> int:
    from . import _fast

    pa, qa, pb, qb = pair
    ring = []
    bp, bq_, bp2, bq2 = pa, qa, pb, qb
    for _ in range(h):
        t = (Q + bq_) // bq2
        ring.append(t)
        bp, bq_, bp2, bq2 = bp2, bq2, t * bp2 - bp, t * bq2 - bq_
    apq = np.array([pa, qa, pb, qb], dtype=np.int64)
    bpq = np.array([bp, bq_, bp2, bq2], dtype=np.int64)
    ring_arr = np.array(ring, dtype=np.int64)
    state = np.zeros(1, dtype=np.int64)
    cap = _terms_per_call(4 * Q * Q)  # nu2 <= 2Q
    total = 0
    while True:
        part, done, hit = _fast.corr_chunk(Q, h, apq, bpq, ring_arr, state, stop[0], stop[1], cap)
        total += int(part)
        if hit:
            return total


def _run_chunks(worker, plan, threads: int) -> int:
    if threads <= 1 or len(plan) == 1:
        return sum(worker(item) for item in plan)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(worker, plan))


def sum_nu_k(
    Q: int,
    k: int,
    chunks: int = 1,
    threads: Optional[int] = None,
    engine: Optional[str] = None,
) -> int:
    """Exact sum of nu_k(gamma_i) over one full period i = 1..N(Q).

    The result is independent of `chunks` and `threads`; those only control
    how the index range is split for parallel summation.
    """
    if Q < 1 or k < 1:
        raise ValueError("Q and k must be >= 1")
    eng = _pick_engine(engine, Q, k, chunks)
    plan = _chunk_plan(Q, chunks)
    fn = _sum_chunk_fast if eng == "fast" else _sum_chunk_pure
    threads = _threads_default() if threads is None else max(1, threads)
    return _run_chunks(lambda item: fn(Q, k, item[0], item[1]), plan, threads)


def correlation_sum(
    Q: int,
    h: int,
    chunks: int = 1,
    threads: Optional[int] = None,
    engine: Optional[str] = None,
) -> int:
    """Exact sum of nu_2(gamma_i) * nu_2(gamma_{i+h}) over one period."""
    if Q < 1 or h < 1:
        raise ValueError("Q and h must be >= 1")
    eng = _pick_engine(engine, Q, h, chunks)
    plan = _chunk_plan(Q, chunks)
    fn = _corr_chunk_fast if eng == "fast" else _corr_chunk_pure
    threads = _threads_default() if threads is None else max(1, threads)
    return _run_chunks(lambda item: fn(Q, h, item[0], item[1]), plan, threads)
