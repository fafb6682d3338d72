import pytest

from conftest import catalog, chi_of
from weakcomm.errors import PreconditionError, StructuralError
from weakcomm.perm import Permutation, build_group, join, same_subgroup, subgroup_closure, \
    trivial_subgroup, whole_group
from weakcomm.series import (
    bracket_table,
    central_product_check,
    derived_chi,
    derived_length,
    gamma_chi,
    lower_central_series,
    nilpotency_class,
)


def test_group_level_helpers():
    g = catalog()
    assert nilpotency_class(g["D4"].group) == 2
    assert nilpotency_class(g["Q16"].group) == 3
    assert nilpotency_class(g["S3"].group) is None
    assert nilpotency_class(g["Z5"].group) == 1
    assert derived_length(g["S4"].group) == 3
    assert derived_length(g["Z4"].group) == 1
    assert [t.order() for t in lower_central_series(g["D8"].group)] == [16, 4, 2, 1, 1]


def test_cyclic_chi_is_abelian():
    c = chi_of("Z4")
    assert gamma_chi(c)[2].is_trivial()
    assert derived_chi(c)[1].is_trivial()
    assert bracket_table(c, "D", "G")[0].is_trivial()


def test_s3_series():
    c = chi_of("S3")
    gamma = gamma_chi(c)
    derived = derived_chi(c)
    prod = join(c.D, c.L1, c.L2)
    assert gamma[2].order() == prod.order()
    assert 108 % gamma[2].order() == 0
    assert same_subgroup(gamma[2], derived[1])
    assert derived.last_index >= 2 or derived.stabilized_at is not None
    assert gamma.is_descending() and derived.is_descending()


def test_stabilization_index():
    c = chi_of("S3")
    gamma = gamma_chi(c, n_max=10)
    assert gamma.stabilized_at is not None
    last = gamma[gamma.stabilized_at]
    assert same_subgroup(gamma[gamma.stabilized_at + 3], last)
    with pytest.raises(IndexError):
        gamma[0]


def test_bracket_tables():
    r = bracket_table(chi_of("S3"), "R", "G")
    assert all(t.is_trivial() for _, t in r.terms)
    d = bracket_table(chi_of("D4"), "D", "G")
    assert d.is_descending()
    assert all(d.normal)
    with pytest.raises(PreconditionError):
        bracket_table(chi_of("D4"), "W", "G")
    with pytest.raises(PreconditionError):
        bracket_table(chi_of("D4"), "D", "H")


def test_central_product_examples():
    triv = build_group([], 4)
    cert = central_product_check(trivial_subgroup(triv), [trivial_subgroup(triv)] * 2)
    assert cert.passed
    x, y = Permutation.parse("(0 1)(2 3)"), Permutation.parse("(0 2)(1 3)")
    klein = build_group([x, y])
    cert = central_product_check(whole_group(klein), [subgroup_closure(klein, [x]),
                                                       subgroup_closure(klein, [y])])
    assert cert.passed
    c = chi_of("S3")
    cert = central_product_check(derived_chi(c)[1], [c.D, join(c.L1, c.L2)])
    assert cert.passed
    with pytest.raises(StructuralError):
        central_product_check(whole_group(klein), [])


def test_central_product_failure_has_witness():
    s3 = build_group([Permutation.parse("(0 1 2)"), Permutation.parse("(0 1)", 3)])
    a = subgroup_closure(s3, [Permutation.parse("(0 1 2)")])
    b = subgroup_closure(s3, [Permutation.parse("(0 1)", 3)])
    cert = central_product_check(whole_group(s3), [a, b])
    assert not cert.passed
    assert cert.failing_pair == (0, 1)
    assert not cert.witness.is_identity()
