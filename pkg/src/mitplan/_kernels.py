"""Compiled inner loops of the optimizer.

Each kernel mirrors a pure-Python operator in :mod:`mitplan.moea` and must
return bit-identical results; the test suite checks this. Without numba the
kernels still run, just slowly.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn


@njit(cache=True)
def repair_row(y, total):
    n = y.size
    s = 0
    for i in range(n):
        s += y[i]
    if s == total:
        return
    if s == 0:
        for i in range(n):
            y[i] = 1
        s = n
    rem = np.empty(n, dtype=np.int64)
    floor_sum = 0
    for i in range(n):
        q = y[i] * total
        y[i] = q // s
        rem[i] = q % s
        floor_sum += y[i]
    taken = np.zeros(n, dtype=np.bool_)
    for _ in range(total - floor_sum):
        pick = -1
        for i in range(n):
            if not taken[i] and (pick < 0 or rem[i] > rem[pick]):
                pick = i
        taken[pick] = True
        y[pick] += 1


@njit(cache=True)
def mutate_row(y, fire, u_src, u_amt, total):
    n = y.size
    if n < 2 or total == 0:
        return
    step = max(1, total // 10)
    donors = np.empty(n, dtype=np.int64)
    for gene in range(n):
        if not fire[gene]:
            continue
        count = 0
        for j in range(n):
            if j != gene and y[j] > 0:
                donors[count] = j
                count += 1
        if count == 0:
            continue
        src = donors[int(u_src[gene] * count)]
        amount = min(1 + int(u_amt[gene] * step), y[src])
        y[src] -= amount
        y[gene] += amount


@njit(cache=True)
def vary(genomes, position, entrants, cross, swaps, fire, u_src, u_amt, cx_prob, total):
    size, n = genomes.shape
    parents = np.empty_like(genomes)
    for row in range(size):
        win = entrants[row, 0]
        for c in range(1, entrants.shape[1]):
            cand = entrants[row, c]
            if position[cand] < position[win]:
                win = cand
        parents[row] = genomes[win]
    children = parents.copy()
    for k in range(size // 2):
        if cross[k] >= cx_prob:
            continue
        a = parents[2 * k]
        b = parents[2 * k + 1]
        same = True
        any_swap = False
        for i in range(n):
            if a[i] != b[i]:
                same = False
            if swaps[k, i]:
                any_swap = True
        if same or not any_swap:
            continue
        c1 = children[2 * k]
        c2 = children[2 * k + 1]
        for i in range(n):
            if swaps[k, i]:
                c1[i] = b[i]
                c2[i] = a[i]
        repair_row(c1, total)
        repair_row(c2, total)
    for row in range(size):
        mutate_row(children[row], fire[row], u_src[row], u_amt[row], total)
    return children


@njit(cache=True)
def rank_crowd(viol, pc, tc):
    size = pc.size
    order = np.argsort(tc, kind="mergesort")
    order = order[np.argsort(pc[order], kind="mergesort")]
    order = order[np.argsort(viol[order], kind="mergesort")]

    # distinct points in (viol, pc, tc) order; uid maps members to them
    uid = np.empty(size, dtype=np.int64)
    first = np.empty(size, dtype=np.int64)
    u = -1
    for p in range(size):
        i = order[p]
        if p == 0 or viol[i] != viol[order[p - 1]] or pc[i] != pc[order[p - 1]] or tc[i] != tc[order[p - 1]]:
            u += 1
            first[u] = i
        uid[i] = u
    count = u + 1
    uv = np.empty(count)
    up = np.empty(count)
    ut = np.empty(count)
    for j in range(count):
        uv[j] = viol[first[j]]
        up[j] = pc[first[j]]
        ut[j] = tc[first[j]]

    urank = np.empty(count, dtype=np.int64)
    ucrowd = np.zeros(count)
    newest = np.empty(count)
    fronts = 0
    nfeas = 0
    while nfeas < count and uv[nfeas] == 0:
        t = ut[nfeas]
        lo, hi = 0, fronts
        while lo < hi:
            mid = (lo + hi) // 2
            if newest[mid] <= t:
                lo = mid + 1
            else:
                hi = mid
        if lo == fronts:
            fronts += 1
        newest[lo] = t
        urank[nfeas] = lo
        nfeas += 1

    members = np.argsort(urank[:nfeas], kind="mergesort")
    start = 0
    while start < nfeas:
        stop = start
        while stop < nfeas and urank[members[stop]] == urank[members[start]]:
            stop += 1
        last = stop - 1
        for q in range(start, stop):
            j = members[q]
            if q == start or q == last:
                ucrowd[j] = np.inf
            else:
                ucrowd[j] = (up[members[q + 1]] - up[members[q - 1]]) / (
                    up[members[last]] - up[members[start]]
                ) + (ut[members[q - 1]] - ut[members[q + 1]]) / (
                    ut[members[start]] - ut[members[last]]
                )
        start = stop

    base = fronts
    start = nfeas
    while start < count:
        stop = start
        while stop < count and uv[stop] == uv[start]:
            stop += 1
        group = np.arange(start, stop)
        for j in group:
            urank[j] = base
        by_tc = group[np.argsort(ut[group], kind="mergesort")]
        for g in range(2):
            ordered = group if g == 0 else by_tc
            vals = up if g == 0 else ut
            span = vals[ordered[-1]] - vals[ordered[0]]
            m = ordered.size
            for q in range(m):
                j = ordered[q]
                if q == 0 or q == m - 1:
                    ucrowd[j] = np.inf
                elif span > 0:
                    ucrowd[j] += (vals[ordered[q + 1]] - vals[ordered[q - 1]]) / span
        base += 1
        start = stop

    rank = np.empty(size, dtype=np.int64)
    crowd = np.zeros(size)
    for i in range(size):
        rank[i] = urank[uid[i]]
    for j in range(count):
        crowd[first[j]] = ucrowd[j]
    return rank, crowd
