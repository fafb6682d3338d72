"""Independent oracle for the Schur multiplier M(G) of a small group.

Cohomology with trivial coefficients Z/p^k is computed from normalized bar
cochains.  By universal coefficients

    |H^2(G; Z/p^k)| = |Hom(M(G), Z/p^k)| * |G_ab / p^k|
    |H^1(G; Z/p^k)| = |G_ab / p^k|

so the quotient ``p^(s_k)`` gives ``s_k = sum_i min(k, e_i)`` over the
p-primary invariants ``p^e_i`` of M(G), and differencing in k recovers them.
The exponent of M(G) divides |G|, so k never needs to exceed the p-adic
valuation of |G|.  Everything here is independent of coset enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numba import njit

from .errors import ResourceLimitError
from .perm import Permutation, prime_factors

MAX_ORDER = 27


def multiplication_table(elements: Sequence[Permutation]) -> np.ndarray:
    """``t[i, j]`` = index of ``elements[i] * elements[j]``; element 0 must be 1."""
    if not elements or not elements[0].is_identity():
        raise ValueError("the first element must be the identity")
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    t = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            t[i, j] = index[a * b]
    return t


def _coboundaries(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Integer matrices of d1: C^1 -> C^2 and d2: C^2 -> C^3 (normalized cochains)."""
    n = t.shape[0]
    m = n - 1
    # normalized 1-cochains: f(x) for x != 1, column x - 1
    d1 = np.zeros((m * m, m), dtype=np.int64)
    for g in range(1, n):
        for h in range(1, n):
            row = (g - 1) * m + (h - 1)
            d1[row, h - 1] += 1
            gh = t[g, h]
            if gh:
                d1[row, gh - 1] -= 1
            d1[row, g - 1] += 1

    def col(x, y):
        return (x - 1) * m + (y - 1)

    d2 = np.zeros((m * m * m, m * m), dtype=np.int64)
    for g in range(1, n):
        for h in range(1, n):
            gh = t[g, h]
            for l in range(1, n):
                row = ((g - 1) * m + (h - 1)) * m + (l - 1)
                d2[row, col(h, l)] += 1
                if gh:
                    d2[row, col(gh, l)] -= 1
                hl = t[h, l]
                if hl:
                    d2[row, col(g, hl)] += 1
                d2[row, col(g, h)] -= 1
    return d1, d2


@njit(cache=True)
def _eliminate(a, p, k):
    mod = p**k
    rows, cols = a.shape
    out = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    v = 0
    pv = 1
    while v < k and r < rows and r < cols:
        # a pivot of valuation exactly v, if any is left
        pi = -1
        pj = -1
        for i in range(r, rows):
            for j in range(r, cols):
                if a[i, j] % (pv * p) != 0:
                    pi = i
                    pj = j
                    break
            if pi >= 0:
                break
        if pi < 0:
            v += 1
            pv *= p
            continue
        for j in range(cols):
            a[r, j], a[pi, j] = a[pi, j], a[r, j]
        for i in range(rows):
            a[i, r], a[i, pj] = a[i, pj], a[i, r]
        unit = a[r, r] // pv
        inv = 1
        while (unit * inv) % mod != 1 % mod:
            inv += 1
        for j in range(r, cols):
            a[r, j] = (a[r, j] * inv) % mod
        for i in range(r + 1, rows):
            f = a[i, r] // pv
            if f:
                for j in range(r, cols):
                    a[i, j] = (a[i, j] - f * a[r, j]) % mod
        out[r] = v
        r += 1
    return out[:r]


def pivot_valuations(a: np.ndarray, p: int, k: int) -> list[int]:
    """p-valuations of the nonzero Smith diagonal of ``a`` over Z/p^k.

    Gaussian elimination with a pivot of least valuation each step.  The
    least valuation never decreases, because every remaining entry stays
    divisible by the current pivot's power of p.  Column operations would
    only touch the pivot row, so they are skipped.  Reducing the same
    diagonal modulo p^j for j < k gives the answer over Z/p^j.
    """
    a = np.unique(np.mod(a, p**k), axis=0)
    a = np.ascontiguousarray(a[np.any(a != 0, axis=1)], dtype=np.int64)
    if not a.size:
        return []
    return [int(v) for v in _eliminate(a, p, k)]


def image_log_size(a: np.ndarray, p: int, k: int) -> int:
    """log_p of the size of the image of ``a`` acting on (Z/p^k)^cols."""
    return sum(k - v for v in pivot_valuations(a, p, k))


@dataclass
class CohomologyData:
    order: int
    multiplier: list[int]
    abelianization: list[int]

    @property
    def multiplier_order(self) -> int:
        return math.prod(self.multiplier)

    @property
    def abelianization_order(self) -> int:
        return math.prod(self.abelianization)


def _invariants(p: int, s: list[int]) -> list[int]:
    """Invariants p^e from s_k = sum min(k, e_i), k = 1..len(s)."""
    s = [0] + s
    at_least = [s[k] - s[k - 1] for k in range(1, len(s))] + [0]
    out = []
    for k in range(1, len(s)):
        out.extend([p**k] * (at_least[k - 1] - at_least[k]))
    return out


def cohomology_data(elements: Sequence[Permutation], max_order: int = MAX_ORDER) -> CohomologyData:
    """Schur multiplier and abelianization invariants from bar cochains."""
    n = len(elements)
    if n > max_order:
        raise ResourceLimitError(f"multiplier oracle is limited to order {max_order}", max_order)
    if n == 1:
        return CohomologyData(1, [], [])
    t = multiplication_table(elements)
    d1, d2 = _coboundaries(t)
    m = n - 1
    mult, ab = [], []
    for p in prime_factors(n):
        a = 0
        while n % p ** (a + 1) == 0:
            a += 1
        v1 = pivot_valuations(d1, p, a)
        v2 = pivot_valuations(d2, p, a)
        s2, s1 = [], []
        for k in range(1, a + 1):
            im1 = sum(max(0, k - v) for v in v1)
            im2 = sum(max(0, k - v) for v in v2)
            ker1 = k * m - im1
            ker2 = k * m * m - im2
            h1 = ker1  # no 0-coboundaries with trivial action
            h2 = ker2 - im1
            s1.append(h1)
            s2.append(h2 - h1)
        mult += _invariants(p, s2)
        ab += _invariants(p, s1)
    return CohomologyData(n, sorted(mult), sorted(ab))


def schur_multiplier(elements: Sequence[Permutation], max_order: int = MAX_ORDER) -> list[int]:
    return cohomology_data(elements, max_order).multiplier
