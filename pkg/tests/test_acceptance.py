"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines; the
whole module takes a few minutes, dominated by the Q = 10^5 stream in
criterion 8.
"""
import math
import os
import time
from fractions import Fraction as F

from fareylab import (
    ah_empirical,
    area,
    bk_empirical,
    bk_enclosure,
    calibrate_error_constant,
    count_farey,
    enumerate_cells,
    farey_triangle,
    sum_nu_k,
    tail_region,
    verify_sl2_lemma,
    verify_suite,
    verify_theorem_identity,
    verify_three_term,
    visible_count,
)
from fareylab.triangle import covered_area

THREADS = min(os.cpu_count() or 1, 8)


def report(n: int, desc: str, ok: bool, detail: str = "") -> None:
    tag = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"\n{tag} criterion {n}: {desc}{suffix}")
    assert ok, f"criterion {n}: {desc}{suffix}"


def test_criterion_01_index_sum_identity():
    t0 = time.time()
    bad = [
        Q
        for Q in range(1, 2001)
        if sum_nu_k(Q, 2, threads=THREADS) != 3 * count_farey(Q) - 1
    ]
    elapsed = time.time() - t0
    report(
        1,
        "sum of nu_2 equals 3N(Q)-1 exactly for every Q <= 2000",
        not bad and elapsed < 30,
        f"{elapsed:.1f}s",
    )


def test_criterion_02_signed_continuant_identity():
    t0 = time.time()
    ok = True
    for Q in (10, 50, 100, 300):
        rep = verify_theorem_identity(Q, 8) if Q <= 50 else None
        if rep is None:
            rep = next(
                r for r in verify_suite(Q, 8) if r.identity == "signed-continuant"
            )
        ok = ok and rep.passed and rep.checked == 8 * count_farey(Q)
    elapsed = time.time() - t0
    report(
        2,
        "nu_k (determinant) = signed continuant for Q in {10,50,100,300}, k <= 8",
        ok and elapsed < 60,
        f"{elapsed:.1f}s",
    )


def test_criterion_03_pair_lemmas():
    ok = True
    for Q in range(2, 301):
        ok = ok and all(r.passed for r in verify_suite(Q, 8))
    # spot-check the per-k verifiers on top of the batched suite
    ok = ok and verify_sl2_lemma(300, 8).passed and verify_three_term(300, 8).passed
    report(3, "pair determinant and three-term recurrence exact for Q <= 300, k in 3..8", ok)


def test_criterion_04_tail_region_areas():
    ok = area(farey_triangle()) == F(1, 2)
    for k in range(2, 101):
        ok = ok and area(tail_region(k)) == F(2, k * (k + 1))
    report(4, "polygon areas: tail regions 2/(k(k+1)) for k in 2..100, triangle 1/2", ok)


def test_criterion_05_cell_area_preservation():
    ok = True
    L = 20
    for depth in range(1, 5):
        cells = enumerate_cells(depth, L)
        ok = ok and all(area(c.region) == area(c.forward_image) for c in cells)
        uncovered = F(1, 2) - covered_area(cells)
        ok = ok and 0 <= uncovered <= F(2 * depth, (L + 1) * (L + 2))
    report(
        5,
        "cells at depth <= 4, cap 20: exact area preservation and uncovered-mass bound",
        ok,
    )


def test_criterion_06_second_index_constant():
    ok = bk_enclosure(2, 60).lo == 3 and bk_enclosure(2, 60).hi == 3
    for Q in range(1, 1001):
        if bk_empirical(2, Q, chunks=1) != 3 - F(1, count_farey(Q)):
            ok = False
            break
    report(
        6,
        "enclosure pins the nu_2 average at exactly 3; empirical is 3 - 1/N(Q) for Q <= 1000",
        ok,
    )


def test_criterion_07_third_index_consistency():
    ok = True
    for Q in range(1, 1001):
        if bk_empirical(3, Q, chunks=1) != ah_empirical(1, Q, chunks=1) - 1:
            ok = False
            break
    itv = bk_enclosure(3, 60)
    C = calibrate_error_constant()
    inside = []
    for Q in (1000, 10000):
        emp = bk_empirical(3, Q, chunks=64, engine="fast")
        widen = F(C * math.log(Q) ** 2 / Q)
        inside.append(itv.contains(emp, slack=widen))
    report(
        7,
        "nu_3 average = lag-1 correlation average - 1 exactly for Q <= 1000; "
        "values at Q = 10^3, 10^4 inside the widened enclosure",
        ok and all(inside),
    )


def test_criterion_08_convergence_model():
    itv = bk_enclosure(3, 60)
    t0 = time.time()
    d3 = itv.distance(bk_empirical(3, 10**3, chunks=64))
    d5 = itv.distance(bk_empirical(3, 10**5, chunks=64, threads=THREADS))
    elapsed = time.time() - t0
    model_ratio = (math.log(1e3) ** 2 / 1e3) / (math.log(1e5) ** 2 / 1e5)
    ok = (d5 == 0) if d3 == 0 else (10 * d5 <= d3)
    report(
        8,
        "distance from the nu_3 average to the enclosure shrinks by >= 10x "
        f"from Q=10^3 to Q=10^5 (error model predicts {model_ratio:.0f}x)",
        ok,
        f"d(10^3)={float(d3):.3g}, d(10^5)={float(d5):.3g}, {elapsed:.0f}s",
    )


def test_criterion_09_visible_point_bijection():
    T = farey_triangle()
    ok = all(visible_count(T, Q) == count_farey(Q) for Q in range(1, 501))
    reg = tail_region(2)
    ratios = []
    for Q in (100, 1000):
        n = visible_count(reg, Q)
        model = 6 * float(area(reg)) * Q * Q / math.pi**2
        ratios.append(abs(n - model) / Q**2)
    ok = ok and ratios[1] < ratios[0] / 2
    report(
        9,
        "coprime pairs in the scaled triangle biject with F_Q for Q <= 500; "
        "density deviation at Q=10^3 under half of Q=10^2",
        ok,
        f"ratios {ratios[0]:.2e} -> {ratios[1]:.2e}",
    )


def test_criterion_10_equidistribution_sanity():
    Q = 10**5
    ratio = count_farey(Q) * math.pi**2 / (3 * Q * Q)
    report(
        10,
        "N(Q) pi^2 / (3 Q^2) within [0.98, 1.02] at Q = 10^5",
        0.98 <= ratio <= 1.02,
        f"ratio {ratio:.6f}",
    )
