import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakcomm.errors import ContainmentError, PreconditionError, StructuralError
from weakcomm.perm import (
    Permutation,
    build_group,
    comm,
    commutator_subgroup,
    compose,
    conj,
    element_order,
    enumerate_elements,
    group_exponent,
    iterated_commutator,
    is_normalized_by,
    membership,
    normal_closure,
    quotient_order_and_exponent,
    same_subgroup,
    subgroup_closure,
    trivial_subgroup,
    whole_group,
)

P = Permutation.parse


def closure_count(gens, degree):
    """Brute-force element count of <gens>."""
    ident = Permutation.identity(degree)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


S3 = build_group([P("(0 1 2)"), P("(0 1)", 3)])
KLEIN = build_group([P("(0 1)(2 3)"), P("(0 2)(1 3)")])


def test_compose_examples():
    e = Permutation.identity(3)
    p = P("(0 1 2)")
    assert compose(e, p) == p
    assert compose(P("(0 1)"), P("(0 1)")).is_identity()
    r = compose(P("(0 1 2)"), P("(0 1)", 3))
    assert [r[x] for x in range(3)] == [0, 2, 1]


def test_conventions():
    x, y = P("(0 1 2)"), P("(0 1)", 3)
    assert conj(x, y) == y.inverse() * x * y
    assert comm(x, y) == x.inverse() * y.inverse() * x * y
    # left-normed: [x, y, x] = [[x, y], x]
    assert comm(x, y, x) == comm(comm(x, y), x)


def test_degree_mismatch():
    with pytest.raises(StructuralError):
        compose(P("(0 1)"), P("(0 1 2)"))
    with pytest.raises(StructuralError):
        build_group([P("(0 1)"), P("(0 1 2)")])


def test_element_order_examples():
    assert element_order(Permutation.identity(4)) == 1
    assert element_order(P("(0 1)(2 3 4)")) == 6
    assert element_order(P("(0 1 2)")) == 3


def test_build_group_examples():
    assert build_group([], 3).order() == 1
    assert S3.order() == 6
    assert KLEIN.order() == 4


def test_membership_examples():
    c3 = build_group([P("(0 1 2)")])
    assert membership(c3, Permutation.identity(3))
    assert not membership(c3, P("(0 1)", 3))
    assert membership(c3, P("(0 2 1)"))


def test_subgroup_closure_examples():
    assert subgroup_closure(S3, []).order() == 1
    assert subgroup_closure(S3, [P("(0 1 2)")]).order() == 3
    assert subgroup_closure(S3, list(S3.generators)).order() == 6
    with pytest.raises(ContainmentError):
        subgroup_closure(build_group([P("(0 1 2)")]), [P("(0 1)", 3)])


def test_normal_closure_examples():
    assert normal_closure(S3, [P("(0 1)", 3)]).order() == 6
    assert normal_closure(S3, [Permutation.identity(3)]).order() == 1
    a3 = normal_closure(S3, [P("(0 1 2)")])
    assert a3.order() == 3
    assert is_normalized_by(a3, S3.generators)


def test_commutator_subgroup_examples():
    s3 = whole_group(S3)
    assert commutator_subgroup(s3, s3).order() == 3
    assert commutator_subgroup(trivial_subgroup(S3), s3).order() == 1
    k = whole_group(KLEIN)
    assert commutator_subgroup(k, k).order() == 1


def test_iterated_commutator_examples():
    s3 = whole_group(S3)
    a3 = subgroup_closure(S3, [P("(0 1 2)")])
    assert same_subgroup(iterated_commutator(a3, s3, 1), commutator_subgroup(a3, s3))
    assert iterated_commutator(a3, s3, 2).order() == 3
    for n in (1, 2, 3):
        assert iterated_commutator(a3, trivial_subgroup(S3), n).order() == 1


def test_enumerate_and_exponent_examples():
    assert len(list(enumerate_elements(build_group([], 2)))) == 1
    assert len(list(enumerate_elements(build_group([P("(0 1 2)")])))) == 3
    orders = sorted(x.order() for x in enumerate_elements(S3))
    assert orders == [1, 2, 2, 2, 3, 3]
    assert group_exponent(S3) == 6
    assert group_exponent(KLEIN) == 2
    assert group_exponent(build_group([], 3)) == 1


def test_quotient_examples():
    s3 = whole_group(S3)
    a3 = subgroup_closure(S3, [P("(0 1 2)")])
    q = quotient_order_and_exponent(s3, s3)
    assert (q.order, q.exponent) == (1, 1)
    q = quotient_order_and_exponent(s3, a3)
    assert (q.order, q.exponent) == (2, 2)
    c4 = build_group([P("(0 1 2 3)")])
    z2 = subgroup_closure(c4, [P("(0 2)(1 3)")])
    q = quotient_order_and_exponent(whole_group(c4), z2)
    assert (q.order, q.exponent, q.invariants) == (2, 2, [2])
    with pytest.raises(PreconditionError):
        quotient_order_and_exponent(s3, subgroup_closure(S3, [P("(0 1)", 3)]))


def test_quotient_by_trivial_reproduces_order_and_exponent():
    q = quotient_order_and_exponent(whole_group(S3), trivial_subgroup(S3))
    assert (q.order, q.exponent) == (6, 6)


def test_semiregular_group_matches_plain():
    # the regular representation of S3 acting on itself
    elems = sorted(enumerate_elements(S3), key=lambda p: p.images.tolist())
    index = {e: i for i, e in enumerate(elems)}
    gens = [Permutation([index[e * g] for e in elems]) for g in S3.generators]
    reg = build_group(gens)
    assert reg.order() == 6
    assert group_exponent(reg) == 6


# -- properties ------------------------------------------------------------------

perm_lists = st.integers(min_value=2, max_value=7).flatmap(
    lambda n: st.lists(st.permutations(list(range(n))), min_size=1, max_size=3))


@settings(max_examples=60, deadline=None)
@given(perm_lists)
def test_chain_order_matches_closure(gen_lists):
    gens = [Permutation(g) for g in gen_lists]
    g = build_group(gens)
    elems = closure_count(gens, gens[0].degree)
    assert g.order() == len(elems)
    assert sorted(x.key() for x in enumerate_elements(g)) == sorted(x.key() for x in elems)


@settings(max_examples=40, deadline=None)
@given(perm_lists, st.integers(min_value=0, max_value=2**32 - 1))
def test_membership_agrees_with_enumeration(gen_lists, seed):
    gens = [Permutation(g) for g in gen_lists]
    n = gens[0].degree
    g = build_group(gens)
    elems = closure_count(gens, n)
    rng = np.random.default_rng(seed)
    for _ in range(20):
        p = Permutation(rng.permutation(n))
        assert membership(g, p) == (p in elems)


@settings(max_examples=40, deadline=None)
@given(perm_lists)
def test_commutator_subgroup_symmetric_and_exponent_divides(gen_lists):
    gens = [Permutation(g) for g in gen_lists]
    g = build_group(gens)
    a = whole_group(g)
    b = subgroup_closure(g, gens[:1])
    assert same_subgroup(commutator_subgroup(a, b), commutator_subgroup(b, a))
    e = group_exponent(g)
    assert g.order() % e == 0
    assert all((x ** e).is_identity() for x in enumerate_elements(g))


def test_commutator_subgroup_exhaustive_small():
    s4 = build_group([P("(0 1 2 3)"), P("(0 1)", 4)])
    elems = list(enumerate_elements(s4))
    comms = {comm(x, y) for x, y in itertools.product(elems, elems)}
    exhaustive = closure_count(list(comms), 4)
    assert commutator_subgroup(whole_group(s4), whole_group(s4)).order() == len(exhaustive) == 12


def test_membership_closed_under_products():
    s4 = build_group([P("(0 1 2 3)"), P("(0 1)", 4)])
    a4 = normal_closure(s4, [P("(0 1 2)", 4)])
    rng = np.random.default_rng(1)
    src = s4.random_source(rng)
    inside = [x for x in (src.next() for _ in range(200)) if a4.contains(x)]
    for x, y in zip(inside, inside[1:]):
        assert a4.contains(x * y)
    assert math.gcd(a4.order(), 24) == 12
