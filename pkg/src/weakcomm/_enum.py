"""Compiled HLT coset enumeration over a dense int32 table.

Column ``2*i`` holds generator ``i`` and column ``2*i + 1`` its inverse, so
the inverse of column ``x`` is ``x ^ 1``.  Undefined entries are -1.
Coincidences are processed immediately with a queue and forward pointers
(``p[c] == c`` exactly for live cosets).  When the table is full the dead
rows are squeezed out before giving up.
"""

import numpy as np
from numba import njit

COMPLETE = 0
LIMIT_EXCEEDED = 1


@njit(cache=True)
def _rep(p, c):
    r = c
    while p[r] != r:
        r = p[r]
    while p[c] != r:
        nxt = p[c]
        p[c] = r
        c = nxt
    return r


@njit(cache=True)
def _coincidence(table, p, q, a, b, ncols):
    """Merge cosets ``a`` and ``b``; returns how many cosets died."""
    a = _rep(p, a)
    b = _rep(p, b)
    if a == b:
        return 0
    if a > b:
        a, b = b, a
    p[b] = a
    q[0] = b
    qlen = 1
    i = 0
    while i < qlen:
        e = q[i]
        i += 1
        for x in range(ncols):
            f = table[e, x]
            if f < 0:
                continue
            xi = x ^ 1
            table[f, xi] = -1
            e1 = _rep(p, e)
            f1 = _rep(p, f)
            if table[e1, x] >= 0:
                u = _rep(p, f1)
                v = _rep(p, table[e1, x])
            elif table[f1, xi] >= 0:
                u = _rep(p, e1)
                v = _rep(p, table[f1, xi])
            else:
                table[e1, x] = f1
                table[f1, xi] = e1
                continue
            if u != v:
                if u > v:
                    u, v = v, u
                p[v] = u
                q[qlen] = v
                qlen += 1
    return qlen


@njit(cache=True)
def _scan_and_fill(table, p, q, c, word, start, stop, n, ncols):
    """Scan ``word[start:stop]`` at coset ``c``, defining cosets as needed.

    Returns ``(n, died)`` with the new coset count and the number of
    cosets killed by coincidences.
    """
    f = c
    b = c
    i = start
    j = stop - 1
    while True:
        while i <= j and table[f, word[i]] >= 0:
            f = table[f, word[i]]
            i += 1
        if i > j:
            if f != b:
                return n, _coincidence(table, p, q, f, b, ncols)
            return n, 0
        while j >= i and table[b, word[j] ^ 1] >= 0:
            b = table[b, word[j] ^ 1]
            j -= 1
        if j < i:
            return n, _coincidence(table, p, q, f, b, ncols)
        if i == j:
            table[f, word[i]] = b
            table[b, word[i] ^ 1] = f
            return n, 0
        d = n
        n += 1
        for x in range(ncols):
            table[d, x] = -1
        p[d] = d
        table[f, word[i]] = d
        table[d, word[i] ^ 1] = f


@njit(cache=True)
def _scan_no_define(table, p, q, c, word, start, stop, ncols):
    """Scan without defining cosets: records a deduction when exactly one
    entry is missing and merges on a mismatch.  Returns cosets killed."""
    f = c
    b = c
    i = start
    j = stop - 1
    while i <= j and table[f, word[i]] >= 0:
        f = table[f, word[i]]
        i += 1
    if i > j:
        if f != b:
            return _coincidence(table, p, q, f, b, ncols)
        return 0
    while j >= i and table[b, word[j] ^ 1] >= 0:
        b = table[b, word[j] ^ 1]
        j -= 1
    if j < i:
        return _coincidence(table, p, q, f, b, ncols)
    if i == j:
        table[f, word[i]] = b
        table[b, word[i] ^ 1] = f
    return 0


@njit(cache=True)
def _lookahead(table, p, q, n, rel_letters, rel_offsets, ncols):
    """Scan every relator at every live coset without defining; returns killed."""
    died = 0
    nrel = rel_offsets.shape[0] - 1
    for c in range(n):
        if p[c] != c:
            continue
        for r in range(nrel):
            if p[c] != c:
                break
            died += _scan_no_define(table, p, q, c, rel_letters,
                                    rel_offsets[r], rel_offsets[r + 1], ncols)
    return died


@njit(cache=True)
def _compact(table, p, n, ncols, c):
    """Renumber live cosets to ``0..live-1``; returns (n, new c)."""
    newidx = np.full(n, -1, dtype=np.int32)
    k = 0
    newc = -1
    for i in range(n):
        if i == c:
            newc = k
        if p[i] == i:
            newidx[i] = k
            k += 1
    if newc < 0:
        newc = k
    for i in range(n):
        if p[i] == i:
            r = newidx[i]
            for x in range(ncols):
                t = table[i, x]
                table[r, x] = newidx[t] if t >= 0 else -1
    for i in range(k):
        p[i] = i
    return k, newc


@njit(cache=True)
def hlt_enumerate(rel_letters, rel_offsets, sub_letters, sub_offsets, ncols,
                  max_cosets, initial_capacity):
    """Run HLT; returns (status, table, p, n, live, total_defined)."""
    cap = min(initial_capacity, max_cosets)
    if cap < 1:
        cap = 1
    table = np.full((cap, ncols), -1, dtype=np.int32)
    p = np.empty(cap, dtype=np.int32)
    q = np.empty(cap, dtype=np.int32)
    p[0] = 0
    n = 1
    live = 1
    total = 1
    nrel = rel_offsets.shape[0] - 1
    nsub = sub_offsets.shape[0] - 1
    longest = ncols
    for r in range(nrel):
        longest = max(longest, rel_offsets[r + 1] - rel_offsets[r])
    for r in range(nsub):
        longest = max(longest, sub_offsets[r + 1] - sub_offsets[r])

    c = 0
    phase = 0  # 0: subgroup words at coset 0, 1: main loop
    r = 0
    while True:
        if phase == 0:
            if r >= nsub:
                phase = 1
                r = 0
                continue
        else:
            if c >= n:
                break
            if p[c] != c:
                c += 1
                r = 0
                continue
        # room for one scan or one round of definitions
        if n + longest > cap:
            if cap < max_cosets:
                newcap = min(max_cosets, max(2 * cap, n + longest))
                t2 = np.full((newcap, ncols), -1, dtype=np.int32)
                t2[:n] = table[:n]
                p2 = np.empty(newcap, dtype=np.int32)
                p2[:n] = p[:n]
                table = t2
                p = p2
                q = np.empty(newcap, dtype=np.int32)
                cap = newcap
            if n + longest > cap:
                if live + longest > cap or 4 * live > 3 * cap:
                    # nearly full of live cosets: look for deductions first
                    died = _lookahead(table, p, q, n, rel_letters, rel_offsets, ncols)
                    live -= died
                    # a lookahead that frees little would only repeat at once
                    if live + longest > cap or died < max(longest, cap // 32):
                        return LIMIT_EXCEEDED, table, p, n, live, total
                n, c = _compact(table, p, n, ncols, c)
                continue
        if phase == 0:
            lo = sub_offsets[r]
            hi = sub_offsets[r + 1]
            n2, died = _scan_and_fill(table, p, q, 0, sub_letters, lo, hi, n, ncols)
            total += n2 - n
            live += (n2 - n) - died
            n = n2
            r += 1
            continue
        if r < nrel:
            lo = rel_offsets[r]
            hi = rel_offsets[r + 1]
            n2, died = _scan_and_fill(table, p, q, c, rel_letters, lo, hi, n, ncols)
            total += n2 - n
            live += (n2 - n) - died
            n = n2
            r += 1
            continue
        for x in range(ncols):
            if table[c, x] < 0:
                d = n
                n += 1
                total += 1
                live += 1
                for y in range(ncols):
                    table[d, y] = -1
                p[d] = d
                table[c, x] = d
                table[d, x ^ 1] = c
        c += 1
        r = 0
    return COMPLETE, table, p, n, live, total


@njit(cache=True)
def standardize(table, p, n, ncols, live):
    """BFS renumbering of the live cosets from coset 0.

    Returns the compact table plus, for every coset, the BFS parent and the
    column through which it was first reached (-1 for coset 0).
    """
    newidx = np.full(n, -1, dtype=np.int32)
    order = np.empty(live, dtype=np.int32)
    parent = np.full(live, -1, dtype=np.int32)
    via = np.full(live, -1, dtype=np.int32)
    root = _rep(p, 0)
    newidx[root] = 0
    order[0] = root
    cnt = 1
    k = 0
    while k < cnt:
        c = order[k]
        for x in range(ncols):
            d = _rep(p, table[c, x])
            if newidx[d] < 0:
                if cnt >= live:
                    return np.empty((0, ncols), dtype=np.int32), parent, via, -1
                newidx[d] = cnt
                order[cnt] = d
                parent[cnt] = k
                via[cnt] = x
                cnt += 1
        k += 1
    out = np.empty((cnt, ncols), dtype=np.int32)
    for i in range(cnt):
        c = order[i]
        for x in range(ncols):
            out[i, x] = newidx[_rep(p, table[c, x])]
    return out, parent[:cnt], via[:cnt], cnt
