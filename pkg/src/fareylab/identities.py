"""Exhaustive exact verification of the index identities over full Farey
sequences.  Every verifier streams one period and compares both sides of an
identity as exact integers; a report with failures is a build-breaking bug,
not a tolerance question.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import islice
from typing import NamedTuple, Optional

import numpy as np

from .continuants import nu_k_from_nu2
from .farey import _fast_available, count_farey, windows

MAX_STORED_FAILURES = 100


class Failure(NamedTuple):
    index: int
    k: int
    expected: int
    got: int


@dataclass
class VerificationReport:
    identity: str
    Q: int
    k_min: int
    k_max: int
    checked: int = 0
    failure_count: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def record(self, index: int, k: int, expected: int, got: int) -> None:
        self.failure_count += 1
        if len(self.failures) < MAX_STORED_FAILURES:
            self.failures.append(Failure(index, k, expected, got))

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "Q": self.Q,
            "k_min": self.k_min,
            "k_max": self.k_max,
            "checked": self.checked,
            "passed": self.passed,
            "failure_count": self.failure_count,
            "failures": [f._asdict() for f in self.failures],
        }


def _window_nu(ps: list[int], qs: list[int], j: int, span: int) -> int:
    """nu_span at window offset j: cross product of positions j and j+span."""
    return ps[j + span] * qs[j] - ps[j] * qs[j + span]


def verify_theorem_identity(Q: int, k_max: int) -> VerificationReport:
    """nu_k(gamma_i) equals the signed continuant of nu_2(gamma_i..gamma_{i+k-2})
    for every i in one period and every 1 <= k <= k_max."""
    if Q < 1 or k_max < 1:
        raise ValueError("Q and k_max must be >= 1")
    rep = VerificationReport("signed-continuant", Q, 1, k_max)
    N = count_farey(Q)
    size = k_max + 1
    for i, (ps, qs) in enumerate(islice(windows(Q, size), N), start=1):
        nu2s = [_window_nu(ps, qs, j, 2) for j in range(k_max - 1)]
        for k in range(1, k_max + 1):
            got = nu_k_from_nu2(k, nu2s[: k - 1])
            expected = _window_nu(ps, qs, 0, k)
            rep.checked += 1
            if got != expected:
                rep.record(i, k, expected, got)
    return rep


def verify_sl2_lemma(Q: int, k: int) -> VerificationReport:
    """nu_{k-1}(g_i) nu_{k-1}(g_{i+1}) - nu_k(g_i) nu_{k-2}(g_{i+1}) = 1."""
    if Q < 1:
        raise ValueError("Q must be >= 1")
    if k < 3:
        raise ValueError("the determinant identity needs k >= 3")
    rep = VerificationReport("unimodular-pair", Q, k, k)
    N = count_farey(Q)
    for i, (ps, qs) in enumerate(islice(windows(Q, k + 1), N), start=1):
        det = _window_nu(ps, qs, 0, k - 1) * _window_nu(ps, qs, 1, k - 1) - _window_nu(
            ps, qs, 0, k
        ) * _window_nu(ps, qs, 1, k - 2)
        rep.checked += 1
        if det != 1:
            rep.record(i, k, 1, det)
    return rep


def verify_three_term(Q: int, k: int) -> VerificationReport:
    """nu_k(g_i) = nu_2(g_{i+k-2}) nu_{k-1}(g_i) - nu_{k-2}(g_i)."""
    if Q < 1:
        raise ValueError("Q must be >= 1")
    if k < 3:
        raise ValueError("the three-term recurrence needs k >= 3")
    rep = VerificationReport("three-term", Q, k, k)
    N = count_farey(Q)
    for i, (ps, qs) in enumerate(islice(windows(Q, k + 1), N), start=1):
        lhs = _window_nu(ps, qs, 0, k)
        rhs = _window_nu(ps, qs, k - 2, 2) * _window_nu(ps, qs, 0, k - 1) - _window_nu(
            ps, qs, 0, k - 2
        )
        rep.checked += 1
        if lhs != rhs:
            rep.record(i, k, rhs, lhs)
    return rep


def verify_division_form(Q: int, k: int) -> VerificationReport:
    """nu_k(g_i) = (nu_{k-1}(g_i) nu_{k-1}(g_{i+1}) - 1) / nu_{k-2}(g_{i+1}),
    with the division exact."""
    if Q < 1:
        raise ValueError("Q must be >= 1")
    if k < 3:
        raise ValueError("the division form needs k >= 3")
    rep = VerificationReport("division-form", Q, k, k)
    N = count_farey(Q)
    for i, (ps, qs) in enumerate(islice(windows(Q, k + 1), N), start=1):
        num = _window_nu(ps, qs, 0, k - 1) * _window_nu(ps, qs, 1, k - 1) - 1
        den = _window_nu(ps, qs, 1, k - 2)
        lhs = _window_nu(ps, qs, 0, k)
        rep.checked += 1
        if num % den != 0 or num // den != lhs:
            rep.record(i, k, lhs, num // den if num % den == 0 else -num)
    return rep


def verify_hall_shiu(Q: int) -> VerificationReport:
    """Sum of nu_2 over one period equals 3 N(Q) - 1."""
    if Q < 1:
        raise ValueError("Q must be >= 1")
    from .farey import sum_nu_k

    rep = VerificationReport("index-sum", Q, 2, 2)
    N = count_farey(Q)
    total = sum_nu_k(Q, 2)
    rep.checked = 1
    if total != 3 * N - 1:
        rep.record(0, 2, 3 * N - 1, total)
    return rep


def verify_index_formulas(Q: int) -> VerificationReport:
    """The three nu_2 expressions agree at every index: the neighbor
    denominator ratio (an exact integer), the cross product, and the floor
    formula."""
    if Q < 1:
        raise ValueError("Q must be >= 1")
    rep = VerificationReport("index-formulas", Q, 2, 2)
    N = count_farey(Q)
    for i, (ps, qs) in enumerate(islice(windows(Q, 3), N), start=1):
        cross = _window_nu(ps, qs, 0, 2)
        s = qs[0] + qs[2]
        flo = (Q + qs[0]) // qs[1]
        rep.checked += 1
        if s % qs[1] != 0 or s // qs[1] != cross or flo != cross:
            rep.record(i, 2, cross, flo if s % qs[1] == 0 else -s)
    return rep


_SUITE_NAMES = (
    "index-formulas",
    "signed-continuant",
    "unimodular-pair",
    "three-term",
    "division-form",
)


def verify_suite(
    Q: int, k_max: int = 8, engine: Optional[str] = None
) -> list[VerificationReport]:
    """Run all identity verifiers over one period in a single pass.

    Returns reports for the five streaming identities plus the index-sum
    identity.  With the fast engine only counts come back from the kernel;
    if anything fails the pure verifiers are re-run for full detail.
    """
    if Q < 1 or k_max < 2:
        raise ValueError("need Q >= 1 and k_max >= 2")
    use_fast = (
        engine == "fast"
        or (engine is None and _fast_available() and Q <= 10**6 and k_max <= 32)
    )
    if engine == "pure":
        use_fast = False
    reports: list[VerificationReport] = []
    if use_fast:
        from . import _fast

        N = count_farey(Q)
        ps = [0, 1]
        qs = [1, Q]
        while len(ps) < k_max + 1:
            t = (Q + qs[-2]) // qs[-1]
            ps.append(t * ps[-1] - ps[-2])
            qs.append(t * qs[-1] - qs[-2])
        pbuf = np.array(ps, dtype=np.int64)
        qbuf = np.array(qs, dtype=np.int64)
        checked = np.zeros(5, dtype=np.int64)
        fails = np.zeros(5, dtype=np.int64)
        first = np.full(3, -1, dtype=np.int64)
        sum2 = int(_fast.verify_batch(Q, k_max, N, pbuf, qbuf, checked, fails, first))
        spans = {
            "index-formulas": (0, 2, 2),
            "signed-continuant": (1, 1, k_max),
            "unimodular-pair": (2, 3, k_max),
            "three-term": (3, 3, k_max),
            "division-form": (4, 3, k_max),
        }
        for name in _SUITE_NAMES:
            c, lo, hi = spans[name]
            rep = VerificationReport(name, Q, lo, hi)
            rep.checked = int(checked[c])
            rep.failure_count = int(fails[c])
            reports.append(rep)
        if any(not r.passed for r in reports):
            return verify_suite(Q, k_max, engine="pure")
        hs = VerificationReport("index-sum", Q, 2, 2, checked=1)
        if sum2 != 3 * N - 1:
            hs.record(0, 2, 3 * N - 1, sum2)
        reports.append(hs)
        return reports

    reports.append(verify_index_formulas(Q))
    reports.append(verify_theorem_identity(Q, k_max))
    sl2 = VerificationReport("unimodular-pair", Q, 3, k_max)
    three = VerificationReport("three-term", Q, 3, k_max)
    div = VerificationReport("division-form", Q, 3, k_max)
    for k in range(3, k_max + 1):
        for rep, fn in ((sl2, verify_sl2_lemma), (three, verify_three_term), (div, verify_division_form)):
            sub = fn(Q, k)
            rep.checked += sub.checked
            rep.failure_count += sub.failure_count
            rep.failures.extend(sub.failures[: MAX_STORED_FAILURES - len(rep.failures)])
    reports.extend([sl2, three, div])
    reports.append(verify_hall_shiu(Q))
    return reports
