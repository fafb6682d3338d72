import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import catalog
from weakcomm.errors import ResourceLimitError
from weakcomm.multiplier import cohomology_data, image_log_size, schur_multiplier
from weakcomm.perm import enumerate_elements


def elements(name):
    e = catalog()[name]
    out = list(enumerate_elements(e.group))
    out.sort(key=lambda p: (not p.is_identity(), p.images.tolist()))
    return out


def abelian_multiplier(cyclic_orders):
    """M(Z_n1 x ... x Z_nk) = sum over i < j of Z_gcd(ni, nj), as prime powers."""
    out = []
    for a, b in itertools.combinations(cyclic_orders, 2):
        g = math.gcd(a, b)
        p = 2
        while g > 1:
            q = 1
            while g % p == 0:
                g //= p
                q *= p
            if q > 1:
                out.append(q)
            p += 1
    return sorted(out)


@pytest.mark.parametrize("name, factors", [
    ("Z2", [2]), ("Z3", [3]), ("Z4", [4]), ("Z5", [5]), ("Z7", [7]), ("Z8", [8]), ("Z9", [9]),
    ("Z2xZ2", [2, 2]), ("Z4xZ2", [4, 2]), ("Z3xZ3", [3, 3]), ("Z2xZ2xZ2", [2, 2, 2]),
    ("Z4xZ4", [4, 4]), ("Z4xZ2xZ2", [4, 2, 2]), ("Z2^4", [2, 2, 2, 2]),
    ("Z3xZ3xZ3", [3, 3, 3]),
])
def test_abelian_groups_match_formula(name, factors):
    data = cohomology_data(elements(name))
    assert data.multiplier == abelian_multiplier(factors)
    assert data.abelianization_order == math.prod(factors)


@pytest.mark.parametrize("name, expected, ab", [
    ("S3", [], 2), ("Q8", [], 4), ("D4", [2], 4), ("A4", [2], 3),
    ("Z3xS3", [], 6), ("SL23", [], 3), ("He3", [3, 3], 9),
])
def test_nonabelian_values(name, expected, ab):
    data = cohomology_data(elements(name))
    assert data.multiplier == expected
    assert data.abelianization_order == ab


def test_cap():
    with pytest.raises(ResourceLimitError):
        schur_multiplier(elements("D16"))


def brute_image_size(a, mod):
    rows, cols = a.shape
    seen = set()
    for v in itertools.product(range(mod), repeat=cols):
        seen.add(tuple((a @ np.array(v)) % mod))
    return len(seen)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 1), (2, 2), (3, 1), (2, 3)]),
       st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_image_size_against_brute_force(pk, rows, cols, seed):
    p, k = pk
    a = np.random.default_rng(seed).integers(-4, 5, size=(rows, cols)).astype(np.int64)
    assert p ** image_log_size(a, p, k) == brute_image_size(a, p**k)
