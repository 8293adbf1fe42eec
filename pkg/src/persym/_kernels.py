"""Compiled inner loops. Every kernel works on a half-open index range so the
callers can shard work across threads; all of them release the GIL.

Shapes are passed as an int64 array of block row counts plus ``k``; the
assignment/coset index layout matches :mod:`persym.model`.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_JIT = dict(nogil=True, cache=True)


@njit(**_JIT)
def _parity(v):
    v ^= v >> 32
    v ^= v >> 16
    v ^= v >> 8
    v ^= v >> 4
    v ^= v >> 2
    v ^= v >> 1
    return v & 1


@njit(**_JIT)
def _clmul(a, b):
    out = 0
    while b != 0:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


@njit(**_JIT)
def _rank_at(x, s, k, pivots):
    mask = (1 << k) - 1
    for c in range(k):
        pivots[c] = 0
    rank = 0
    off = 0
    for j in range(s.shape[0]):
        width = s[j] + k - 1
        word = (x >> off) & ((1 << width) - 1)
        off += width
        for r in range(s[j]):
            v = (word >> r) & mask
            top = k - 1
            while v != 0:
                while not (v >> top) & 1:
                    top -= 1
                if pivots[top] == 0:
                    pivots[top] = v
                    rank += 1
                    break
                v ^= pivots[top]
            if rank == k:
                return rank
    return rank


@njit(**_JIT)
def census_range(start, stop, s, k, counts):
    """counts[r] += number of assignments in [start, stop) with rank r."""
    pivots = np.zeros(k, np.int64)
    for x in range(start, stop):
        counts[_rank_at(x, s, k, pivots)] += 1


@njit(**_JIT)
def ranks_range(start, stop, s, k, out):
    pivots = np.zeros(k, np.int64)
    for x in range(start, stop):
        out[x - start] = _rank_at(x, s, k, pivots)


@njit(**_JIT)
def _exp_sum_full_at(x, s, k):
    # f = sum_Y prod_j sum_{U_j} E(t_j Y U_j); E reads the T^-1 coefficient,
    # which for t_j * P is sum_d P_d * alpha_{d+1} = parity(P & A_j).
    total = 0
    for y in range(1 << k):
        prod = 1
        off = 0
        for j in range(s.shape[0]):
            width = s[j] + k - 1
            a = (x >> off) & ((1 << width) - 1)
            off += width
            inner = 0
            for u in range(1 << s[j]):
                if _parity(_clmul(y, u) & a):
                    inner -= 1
                else:
                    inner += 1
            prod *= inner
            if prod == 0:
                break
        total += prod
    return total


@njit(**_JIT)
def _exp_sum_at(x, s, k):
    # Same sum, with each inner sum over U = sum_e u_e T^e written as
    # prod_e (1 + E(t_j Y T^e)): every factor is 0 or 2.
    total = 0
    for y in range(1 << k):
        prod = 1
        off = 0
        for j in range(s.shape[0]):
            width = s[j] + k - 1
            a = (x >> off) & ((1 << width) - 1)
            off += width
            for e in range(s[j]):
                if _parity((y << e) & a):
                    prod = 0
                    break
            if prod == 0:
                break
            prod <<= s[j]
        total += prod
    return total


@njit(**_JIT)
def exp_sums_range(start, stop, s, k, out):
    for x in range(start, stop):
        out[x - start] = _exp_sum_at(x, s, k)


@njit(**_JIT)
def exp_sums_full_range(start, stop, s, k, out):
    for x in range(start, stop):
        out[x - start] = _exp_sum_full_at(x, s, k)


@njit(**_JIT)
def inner_sum_table(sj, k, full):
    """table[y, a] = sum over deg U < sj of E(t Y U) for the block word ``a``.

    ``full`` enumerates every U; otherwise the sum is the product over the
    monomials T^e of (1 + E(t Y T^e)).
    """
    width = sj + k - 1
    table = np.zeros((1 << k, 1 << width), np.int64)
    for y in range(1 << k):
        for a in range(1 << width):
            if full:
                acc = 0
                for u in range(1 << sj):
                    if _parity(_clmul(y, u) & a):
                        acc -= 1
                    else:
                        acc += 1
            else:
                acc = 1 << sj
                for e in range(sj):
                    if _parity((y << e) & a):
                        acc = 0
                        break
            table[y, a] = acc
    return table


@njit(**_JIT)
def solutions_range(start, stop, s, k, q):
    """Count tuples in [start, stop) solving every equation sum_i Y_i U_j^(i) = 0.

    Tuple layout, per replicate i: Y_i (k bits) then U_1^(i) .. U_n^(i)
    (s_j bits each); replicates are packed one after another.
    """
    n = s.shape[0]
    stride = k
    for j in range(n):
        stride += s[j]
    ymask = (1 << k) - 1
    found = 0
    for x in range(start, stop):
        ok = True
        uoff = k
        for j in range(n):
            umask = (1 << s[j]) - 1
            acc = 0
            for i in range(q):
                base = i * stride
                y = (x >> base) & ymask
                u = (x >> (base + uoff)) & umask
                acc ^= _clmul(y, u)
            if acc != 0:
                ok = False
                break
            uoff += s[j]
        if ok:
            found += 1
    return found


@njit(**_JIT)
def block_span_keys(sj, k, out):
    """out[a] = reduced echelon basis (pivot order, zero padded) of block word a's rows."""
    mask = (1 << k) - 1
    piv = np.zeros(k, np.int64)
    for a in range(out.shape[0]):
        for b in range(k):
            piv[b] = 0
        for r in range(sj):
            v = (a >> r) & mask
            for b in range(k - 1, -1, -1):
                if not (v >> b) & 1:
                    continue
                if piv[b] == 0:
                    piv[b] = v
                    break
                v ^= piv[b]
        # back-substitute so every pivot column is clear elsewhere
        for b in range(k):
            if piv[b] == 0:
                continue
            for c in range(b + 1, k):
                if piv[c] != 0 and (piv[c] >> b) & 1:
                    piv[c] ^= piv[b]
        m = 0
        for b in range(k - 1, -1, -1):
            if piv[b] != 0:
                out[a, m] = piv[b]
                m += 1
        for c in range(m, k):
            out[a, c] = 0
