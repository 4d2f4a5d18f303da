"""Array-based backtracking kernel behind the solver.

The kernel runs the recursive coloring search iteratively over flat int64
arrays so that numba can compile it to machine code; without numba the same
function runs unchanged (slowly) under CPython.  Per assignment of slot i it
applies the almost-rainbow domain rule to every k-AP whose second-largest
slot is i, with an undo trail for backtracking.

Pruning rules, individually toggleable:
  lexmin  - only colors <= (max used)+1 are branched on,
  union   - prune when some color id no longer appears in any domain,
  prefix  - interval only: an all-color-1 prefix induces an exact r-coloring
            of a shorter interval, impossible when aw of that length is <= r,
  wipeout - stop a branch as soon as a domain empties (pure acceleration).

Status codes: 0 = witness found, 1 = search space exhausted, 2 = aborted
(node budget or external abort flag).
"""

from __future__ import annotations

import os

import numpy as np

from .core import Structure, almost_rainbow_entries

FOUND = 0
EXHAUSTED = 1
ABORTED = 2


def _search_impl(
    n,
    k,
    r,
    prop_start,
    prop_tgt,
    prop_rest,
    use_lexmin,
    use_union,
    use_prefix,
    use_wipeout,
    prefix_prune,
    count_all,
    start_depth,
    init_colors,
    abort_flag,
    max_nodes,
    out_coloring,
):
    full = (np.int64(1) << r) - 1
    dom = np.full(n, full, dtype=np.int64)
    colors = np.zeros(n, dtype=np.int64)
    cnt = np.full(r + 1, n, dtype=np.int64)
    nzero = 0

    n_entries = prop_start[n]
    cap = n + n_entries * (k - 1) + 8
    tpos = np.zeros(cap, dtype=np.int64)
    told = np.zeros(cap, dtype=np.int64)
    tlen = 0

    cand = np.zeros(n + 1, dtype=np.int64)
    mark = np.zeros(n + 1, dtype=np.int64)
    mst = np.zeros(n + 1, dtype=np.int64)
    ust = np.zeros(n + 1, dtype=np.int64)

    nodes = np.int64(0)
    found = np.int64(0)

    m_cur = np.int64(0)
    used_cur = np.int64(0)

    # replay a fixed prefix (work splitting for parallel runs)
    for j in range(start_depth):
        a = init_colors[j]
        abit = np.int64(1) << (a - 1)
        if dom[j] & abit == 0:
            return EXHAUSTED, nodes, found
        nodes += 1
        colors[j] = a
        old = dom[j]
        if old != abit:
            tpos[tlen] = j
            told[tlen] = old
            tlen += 1
            rem = old & ~abit
            while rem != 0:
                b = rem & (-rem)
                col = 1
                while (b >> (col - 1)) & 1 == 0:
                    col += 1
                cnt[col] -= 1
                if cnt[col] == 0:
                    nzero += 1
                rem ^= b
            dom[j] = abit
        if a > m_cur:
            m_cur = a
        used_cur |= abit
        e = prop_start[j]
        e_end = prop_start[j + 1]
        while e < e_end:
            amask = np.int64(0)
            off = e * (k - 1)
            for q in range(k - 1):
                amask |= np.int64(1) << (colors[prop_rest[off + q]] - 1)
            pc = 0
            tmp = amask
            while tmp != 0:
                tmp &= tmp - 1
                pc += 1
            if pc == k - 1:
                t = prop_tgt[e]
                oldd = dom[t]
                newd = oldd & amask
                if newd != oldd:
                    tpos[tlen] = t
                    told[tlen] = oldd
                    tlen += 1
                    rem = oldd & ~newd
                    while rem != 0:
                        b = rem & (-rem)
                        col = 1
                        while (b >> (col - 1)) & 1 == 0:
                            col += 1
                        cnt[col] -= 1
                        if cnt[col] == 0:
                            nzero += 1
                        rem ^= b
                    dom[t] = newd
                    if newd == 0 and use_wipeout == 1:
                        return EXHAUSTED, nodes, found
            e += 1

    i = start_depth
    if i == n:
        if used_cur == full:
            for j in range(n):
                out_coloring[j] = colors[j]
            return FOUND, nodes, np.int64(1)
        return EXHAUSTED, nodes, found
    if use_union == 1 and nzero > 0:
        return EXHAUSTED, nodes, found
    if use_prefix == 1 and i >= 2 and used_cur == 1 and prefix_prune[i] == 1:
        return EXHAUSTED, nodes, found
    mark[i] = tlen
    mst[i] = m_cur
    ust[i] = used_cur
    if use_lexmin == 1:
        lim = m_cur + 1
        if lim > r:
            lim = np.int64(r)
        cand[i] = dom[i] & ((np.int64(1) << lim) - 1)
    else:
        cand[i] = dom[i]

    while i >= start_depth:
        if abort_flag[0] != 0:
            return ABORTED, nodes, found
        if max_nodes > 0 and nodes >= max_nodes:
            return ABORTED, nodes, found

        c = cand[i]
        if c == 0:
            # undo this depth entirely and pop
            while tlen > mark[i]:
                tlen -= 1
                pos = tpos[tlen]
                old = told[tlen]
                back = old & ~dom[pos]
                while back != 0:
                    b = back & (-back)
                    col = 1
                    while (b >> (col - 1)) & 1 == 0:
                        col += 1
                    if cnt[col] == 0:
                        nzero -= 1
                    cnt[col] += 1
                    back ^= b
                dom[pos] = old
            colors[i] = 0
            i -= 1
            continue

        # next sibling: smallest candidate color
        a = 1
        while (c >> (a - 1)) & 1 == 0:
            a += 1
        cand[i] = c & (c - 1)

        # undo the previous sibling's writes at this depth
        while tlen > mark[i]:
            tlen -= 1
            pos = tpos[tlen]
            old = told[tlen]
            back = old & ~dom[pos]
            while back != 0:
                b = back & (-back)
                col = 1
                while (b >> (col - 1)) & 1 == 0:
                    col += 1
                if cnt[col] == 0:
                    nzero -= 1
                cnt[col] += 1
                back ^= b
            dom[pos] = old

        nodes += 1
        colors[i] = a
        abit = np.int64(1) << (a - 1)
        m2 = mst[i]
        if a > m2:
            m2 = np.int64(a)
        u2 = ust[i] | abit

        old = dom[i]
        if old != abit:
            tpos[tlen] = i
            told[tlen] = old
            tlen += 1
            rem = old & ~abit
            while rem != 0:
                b = rem & (-rem)
                col = 1
                while (b >> (col - 1)) & 1 == 0:
                    col += 1
                cnt[col] -= 1
                if cnt[col] == 0:
                    nzero += 1
                rem ^= b
            dom[i] = abit

        dead = 0
        e = prop_start[i]
        e_end = prop_start[i + 1]
        while e < e_end:
            amask = np.int64(0)
            off = e * (k - 1)
            for q in range(k - 1):
                amask |= np.int64(1) << (colors[prop_rest[off + q]] - 1)
            pc = 0
            tmp = amask
            while tmp != 0:
                tmp &= tmp - 1
                pc += 1
            if pc == k - 1:
                t = prop_tgt[e]
                oldd = dom[t]
                newd = oldd & amask
                if newd != oldd:
                    tpos[tlen] = t
                    told[tlen] = oldd
                    tlen += 1
                    rem = oldd & ~newd
                    while rem != 0:
                        b = rem & (-rem)
                        col = 1
                        while (b >> (col - 1)) & 1 == 0:
                            col += 1
                        cnt[col] -= 1
                        if cnt[col] == 0:
                            nzero += 1
                        rem ^= b
                    dom[t] = newd
                    if newd == 0 and use_wipeout == 1:
                        dead = 1
                        break
            e += 1
        if dead == 1:
            continue

        ni = i + 1
        if ni == n:
            if u2 == full:
                found += 1
                if found == 1:
                    for j in range(n):
                        out_coloring[j] = colors[j]
                if count_all == 0:
                    return FOUND, nodes, found
            continue
        if use_union == 1 and nzero > 0:
            continue
        if use_prefix == 1 and ni >= 2 and u2 == 1 and prefix_prune[ni] == 1:
            continue

        mark[ni] = tlen
        mst[ni] = m2
        ust[ni] = u2
        if use_lexmin == 1:
            lim = m2 + 1
            if lim > r:
                lim = np.int64(r)
            cand[ni] = dom[ni] & ((np.int64(1) << lim) - 1)
        else:
            cand[ni] = dom[ni]
        i = ni

    return EXHAUSTED, nodes, found


def _compile_kernel():
    if os.environ.get("ANTIVDW_PURE_PYTHON"):
        return _search_impl
    try:
        from numba import njit
    except ImportError:
        return _search_impl
    return njit(cache=True, nogil=True)(_search_impl)


search_kernel = _compile_kernel()


def build_tables(s: Structure, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Flatten the almost-rainbow entries into CSR arrays for the kernel."""
    n = s.n
    per_slot = almost_rainbow_entries(s, k)
    prop_start = np.zeros(n + 1, dtype=np.int64)
    rest_flat: list[int] = []
    tgt: list[int] = []
    for i in range(n):
        prop_start[i + 1] = prop_start[i] + len(per_slot[i])
        for rest, t in per_slot[i]:
            rest_flat.extend(rest)
            tgt.append(t)
    prop_tgt = np.asarray(tgt, dtype=np.int64)
    prop_rest = np.asarray(rest_flat, dtype=np.int64)
    return prop_start, prop_tgt, prop_rest
