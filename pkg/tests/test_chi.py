import itertools

import pytest

from conftest import catalog, chi_of
from weakcomm.catalog import parse_grp
from weakcomm.chi import (
    GroupHom,
    chi_presentation,
    direct_images,
    kernel_of_hom,
    nu_chi_consistency,
    nu_delta_index,
    nu_presentation,
    r_from_triples,
    realize_chi,
    realize_nu,
    t_group,
)
from weakcomm.errors import PreconditionError, ResourceLimitError
from weakcomm.fp import todd_coxeter
from weakcomm.perm import Permutation, PermGroup, build_group, same_subgroup

TRIVIAL = parse_grp("name = one\ngenerators = a\nrelators = a\nperm a = (1)\n")


def brute_closure(gens):
    ident = Permutation.identity(gens[0].degree)
    seen, frontier = {ident}, [ident]
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


def brute_t_order(images):
    d = images[0].degree
    gens = [direct_images([x, x, None], d) for x in images]
    gens += [direct_images([None, x, x], d) for x in images]
    return len(brute_closure(gens))


def test_chi_presentation_examples():
    p = chi_presentation(catalog()["Z2"])
    assert p.generator_names == ["a", "a'"]
    assert [r.format(p.generator_names) for r in p.relators] == \
        ["a^2", "a'^2", "a^-1*a'^-1*a*a'"]
    # one relator per non-identity element; the identity's is vacuous and skipped
    assert len(chi_presentation(catalog()["Z3"]).relators) == 2 + 2
    s3 = chi_presentation(catalog()["S3"])
    assert len(s3.relators) == 2 * 3 + 5


def test_reduced_presentation_keeps_maximal_cyclic_subgroups():
    # S3: <a> and the three reflections; Z9 is cyclic
    assert len(chi_presentation(catalog()["S3"], reduced=True).relators) == 2 * 3 + 4
    assert len(chi_presentation(catalog()["Z9"], reduced=True).relators) == 2 + 1
    # Z2^4: every non-identity element spans its own maximal cyclic subgroup
    full = chi_presentation(catalog()["Z2^4"])
    assert chi_presentation(catalog()["Z2^4"], reduced=True).relators == full.relators


@pytest.mark.parametrize("name", ["S3", "D4", "Q8", "A4", "Z4xZ2"])
def test_reduced_presentation_defines_the_same_group(name):
    full = todd_coxeter(chi_presentation(catalog()[name]))
    reduced = todd_coxeter(chi_presentation(catalog()[name], reduced=True))
    assert full.coset_count == reduced.coset_count == chi_of(name).order


@pytest.mark.parametrize("n", [2, 3, 4, 5, 7])
def test_cyclic_chi_is_direct_square(n):
    c = chi_of(f"Z{n}")
    assert c.order == n * n
    assert c.D.is_trivial() and c.W.is_trivial() and c.R.is_trivial()
    assert c.all_invariants_hold()


def test_s3_against_t_oracle():
    c = chi_of("S3")
    t = brute_t_order(catalog()["S3"].images)
    assert t == 108
    assert c.order == 108
    assert c.T.order() == t
    assert c.L.order() == 18
    assert c.W.is_trivial() and c.R.is_trivial()


def test_t_group_examples():
    assert t_group([Permutation.parse("(0 1)")]).order() == 4
    klein = [Permutation.parse("(0 1)(2 3)"), Permutation.parse("(0 2)(1 3)")]
    assert t_group(klein).order() == 16


def test_kernel_examples():
    s3 = build_group([Permutation.parse("(0 1 2)"), Permutation.parse("(0 1)", 3)])
    ident = GroupHom(s3, s3, list(s3.generators), list(s3.generators))
    assert kernel_of_hom(ident).order() == 1
    c4 = build_group([Permutation.parse("(0 1 2 3)")])
    z2 = build_group([Permutation.parse("(0 1)")])
    k = kernel_of_hom(GroupHom(c4, z2, list(c4.generators), list(z2.generators)))
    assert k.order() == 2
    assert chi_of("S3").L.order() == 18


def test_kernel_by_graph_matches_brute_force():
    s4 = build_group([Permutation.parse("(0 1 2 3)"), Permutation.parse("(0 1)", 4)])
    sign = build_group([Permutation.parse("(0 1)")])
    h = GroupHom(s4, sign, list(s4.generators), [Permutation.parse("(0 1)")] * 2)
    k = kernel_of_hom(h)
    assert k.order() == 12
    assert all(k.contains(x) == (x.images.tolist() in _even(4)) for x in brute_closure(list(s4.generators)))


def _even(n):
    out = []
    for p in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        if inv % 2 == 0:
            out.append(list(p))
    return out


@pytest.mark.parametrize("name", ["S3", "D4", "Q8", "A4", "Z2xZ2xZ2", "Z4xZ2"])
def test_invariants_and_r_cross_check(name):
    c = chi_of(name)
    assert c.all_invariants_hold(), [i.name for i in c.invariants if not i.passed]
    assert same_subgroup(r_from_triples(c), c.R)
    assert c.L.order() * c.base.order == c.order


def test_trivial_group():
    c = realize_chi(TRIVIAL)
    assert c.order == 1 and c.all_invariants_hold()
    nu = realize_nu(TRIVIAL)
    assert nu.order == 1
    assert nu_chi_consistency(c, nu).passed


def test_resource_limit_is_clean():
    with pytest.raises(ResourceLimitError) as info:
        realize_chi(catalog()["D8"], max_cosets=100)
    assert info.value.record["max_cosets"] == 100


@pytest.mark.parametrize("name, scope, order", [
    ("Z2", "all_elements", 8),
    ("Z3", "all_elements", 27),
    ("Z2", "generators", 8),
])
def test_nu_orders(name, scope, order):
    nu = realize_nu(catalog()[name], scope)
    assert nu.order == order
    assert all(i.passed for i in nu.invariants)


def test_nu_z2_consistency_numbers():
    res = nu_chi_consistency(chi_of("Z2"), realize_nu(catalog()["Z2"], "all_elements"))
    assert (res.nu_order, res.delta_order, res.chi_order, res.r_order) == (8, 2, 4, 1)
    assert res.passed


@pytest.mark.parametrize("name", ["S3", "D4", "Q8"])
def test_nu_delta_index_matches_full(name):
    e = catalog()[name]
    nu = realize_nu(e, "all_elements")
    assert nu_delta_index(e, "all_elements") * nu.Delta.order() == nu.order
    res = nu_chi_consistency(chi_of(name), nu)
    assert res.passed


def test_nu_scope_errors():
    with pytest.raises(PreconditionError):
        nu_presentation(catalog()["S3"], "some_elements")
    with pytest.raises(ResourceLimitError):
        nu_presentation(catalog()["S4"], "all_elements", relator_cap=100)
