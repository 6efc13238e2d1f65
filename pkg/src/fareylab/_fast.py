"""numba kernels for the hot streaming loops.

Everything here works on int64 buffers. Callers are responsible for keeping
per-call term counts below the overflow caps (see farey._terms_per_call);
partial sums are folded into Python ints between calls, so full-run totals
are exact at any size.
"""
from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dep, but stay importable
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap if not (len(args) == 1 and callable(args[0])) else args[0]


@njit(cache=True, nogil=True)
def sum_nu_k_chunk(Q, k, pbuf, qbuf, stop_num, stop_den, max_terms):
    """Advance a (k+1)-wide window, summing nu_k, until the window head
    reaches stop_num/stop_den or max_terms terms are consumed.

    pbuf/qbuf hold gamma_{i-1}..gamma_{i+k-1} and are mutated in place.
    Returns (partial_sum, terms_done, hit_stop).
    """
    total = np.int64(0)
    done = 0
    while done < max_terms:
        if pbuf[0] * stop_den >= stop_num * qbuf[0]:
            return total, done, True
        total += pbuf[k] * qbuf[0] - pbuf[0] * qbuf[k]
        t = (Q + qbuf[k - 1]) // qbuf[k]
        pn = t * pbuf[k] - pbuf[k - 1]
        qn = t * qbuf[k] - qbuf[k - 1]
        for j in range(k):
            pbuf[j] = pbuf[j + 1]
            qbuf[j] = qbuf[j + 1]
        pbuf[k] = pn
        qbuf[k] = qn
        done += 1
    return total, done, False


@njit(cache=True, nogil=True)
def corr_chunk(Q, h, apq, bpq, ring, state, stop_num, stop_den, max_terms):
    """Sum nu2(gamma_i) * nu2(gamma_{i+h}) over a chunk.

    apq = [p_{i-1}, q_{i-1}, p_i, q_i] cursor for the owned index i;
    bpq = same layout, h positions ahead; ring holds nu2(gamma_i..gamma_{i+h-1});
    state[0] is the ring cursor. All mutated in place.
    """
    total = np.int64(0)
    done = 0
    idx = state[0]
    while done < max_terms:
        if apq[0] * stop_den >= stop_num * apq[1]:
            state[0] = idx
            return total, done, True
        ta = ring[idx]
        tb = (Q + bpq[1]) // bpq[3]
        total += ta * tb
        ring[idx] = tb
        idx += 1
        if idx == h:
            idx = 0
        pn = ta * apq[2] - apq[0]
        qn = ta * apq[3] - apq[1]
        apq[0] = apq[2]
        apq[1] = apq[3]
        apq[2] = pn
        apq[3] = qn
        pn = tb * bpq[2] - bpq[0]
        qn = tb * bpq[3] - bpq[1]
        bpq[0] = bpq[2]
        bpq[1] = bpq[3]
        bpq[2] = pn
        bpq[3] = qn
        done += 1
    state[0] = idx
    return total, done, False


@njit(cache=True, nogil=True)
def verify_batch(Q, k_max, n_terms, pbuf, qbuf, checked, fails, first):
    """One pass over a full period verifying, per index i:

      code 0: the three index formulas agree (divisibility included)
      code 1: nu_k equals the signed continuant of the nu2 string, k=1..k_max
      code 2: nu_{k-1} nu_{k-1}' - nu_k nu_{k-2}' = 1, k=3..k_max
      code 3: nu_k = nu2(gamma_{i+k-2}) nu_{k-1} - nu_{k-2}, k=3..k_max
      code 4: (nu_{k-1} nu_{k-1}' - 1) / nu_{k-2}' exact and equals nu_k

    pbuf/qbuf hold gamma_{i-1}..gamma_{i+k_max-1}. checked/fails are int64[5];
    first is int64[3] = (index, k, code) of the first failure (-1 if none).
    Returns the exact sum of nu2 over the period.
    """
    nu_i = np.empty(k_max + 1, dtype=np.int64)
    nu_n = np.empty(k_max + 1, dtype=np.int64)
    t2 = np.empty(max(k_max - 1, 1), dtype=np.int64)
    cont = np.empty(k_max, dtype=np.int64)
    sum_nu2 = np.int64(0)
    for i in range(1, n_terms + 1):
        for j in range(1, k_max + 1):
            nu_i[j] = pbuf[j] * qbuf[0] - pbuf[0] * qbuf[j]
        for j in range(1, k_max):
            nu_n[j] = pbuf[1 + j] * qbuf[1] - pbuf[1] * qbuf[1 + j]
        for j in range(k_max - 1):
            t2[j] = pbuf[j + 2] * qbuf[j] - pbuf[j] * qbuf[j + 2]

        # index formulas: (q_{i-1}+q_{i+1})/q_i = nu_2(gamma_i) = floor((Q+q_{i-1})/q_i)
        if k_max >= 2:
            checked[0] += 1
            s = qbuf[0] + qbuf[2]
            ok = (s % qbuf[1] == 0) and (s // qbuf[1] == nu_i[2])
            ok = ok and ((Q + qbuf[0]) // qbuf[1] == nu_i[2])
            if not ok:
                fails[0] += 1
                if first[0] < 0:
                    first[0] = i
                    first[1] = 2
                    first[2] = 0
            sum_nu2 += nu_i[2]

        # signed continuant: cont[j] = K_j((-1)^1 t2[0], ..., (-1)^j t2[j-1])
        if k_max >= 2:
            cont[1] = -t2[0]
        if k_max >= 3:
            a = np.int64(1)
            b = cont[1]
            for j in range(2, k_max):
                x = t2[j - 1] if j % 2 == 0 else -t2[j - 1]
                c = x * b + a
                cont[j] = c
                a = b
                b = c
        for k in range(1, k_max + 1):
            checked[1] += 1
            kk = k - 1
            val = np.int64(1) if kk == 0 else cont[kk]
            m8 = (2 * k - 1) % 8
            if not (m8 == 1 or m8 == 7):
                val = -val
            if val != nu_i[k]:
                fails[1] += 1
                if first[0] < 0:
                    first[0] = i
                    first[1] = k
                    first[2] = 1

        for k in range(3, k_max + 1):
            checked[2] += 1
            if nu_i[k - 1] * nu_n[k - 1] - nu_i[k] * nu_n[k - 2] != 1:
                fails[2] += 1
                if first[0] < 0:
                    first[0] = i
                    first[1] = k
                    first[2] = 2
            checked[3] += 1
            if nu_i[k] != t2[k - 2] * nu_i[k - 1] - nu_i[k - 2]:
                fails[3] += 1
                if first[0] < 0:
                    first[0] = i
                    first[1] = k
                    first[2] = 3
            checked[4] += 1
            num = nu_i[k - 1] * nu_n[k - 1] - 1
            if num % nu_n[k - 2] != 0 or num // nu_n[k - 2] != nu_i[k]:
                fails[4] += 1
                if first[0] < 0:
                    first[0] = i
                    first[1] = k
                    first[2] = 4

        t = (Q + qbuf[k_max - 1]) // qbuf[k_max]
        pn = t * pbuf[k_max] - pbuf[k_max - 1]
        qn = t * qbuf[k_max] - qbuf[k_max - 1]
        for j in range(k_max):
            pbuf[j] = pbuf[j + 1]
            qbuf[j] = qbuf[j + 1]
        pbuf[k_max] = pn
        qbuf[k_max] = qn
    return sum_nu2
