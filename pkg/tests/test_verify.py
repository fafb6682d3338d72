import json

import pytest

from conftest import catalog, chi_of
from weakcomm.errors import PreconditionError
from weakcomm.verify import (
    REGISTRY,
    CheckResult,
    Perturbation,
    RunConfig,
    VerificationReport,
    check_exponent_theorems,
    check_homology_links,
    check_identity_suites,
    check_L12_structure,
    check_pgroup_bound,
    commutator_order_lcm,
    group_data,
    pgroup_bound,
    run_all,
)
from weakcomm.perm import enumerate_elements

IDENTITY_IDS = {"lemma2.1", "lemma2.2", "lemma2.3", "lemma2.4", "lemma2.5", "lemma5.1"}


def statuses(results):
    return {r.id: r.status for r in results}


def test_check_result_validation():
    with pytest.raises(ValueError):
        CheckResult("thmA.b", "maybe")
    with pytest.raises(ValueError):
        CheckResult("thmZ", "pass")
    with pytest.raises(ValueError):
        CheckResult("thmA.b", "fail")
    r = CheckResult("thmA.b", "fail", {"exp_R": 4})
    assert CheckResult.from_dict(r.to_dict()) == r


def test_run_config_validation():
    with pytest.raises(PreconditionError):
        RunConfig(max_cosets=0)
    with pytest.raises(PreconditionError):
        RunConfig(suites=("identities", "astrology"))
    with pytest.raises(PreconditionError):
        RunConfig(nu_triple_scope="half")
    with pytest.raises(PreconditionError):
        RunConfig(samples=-1)


def test_exponent_examples():
    c = chi_of("S3")
    res = statuses(check_exponent_theorems(c))
    assert res["twogen.R1"] == "pass"
    assert res["thmA.a"] == res["corB"] == "not-applicable"
    assert res["abelian.R2"] == "not-applicable"
    res = statuses(check_exponent_theorems(chi_of("Z2xZ2xZ2")))
    assert res["abelian.R2"] == "pass"
    assert res["twogen.R1"] == "not-applicable"


def test_commutator_lcm_is_over_the_set():
    elems = list(enumerate_elements(catalog()["S4"].group))
    # commutators in S4 are the even permutations of order 1, 2 and 3
    assert commutator_order_lcm(elems) == 6


def test_pgroup_bound_examples():
    gd = group_data(chi_of("Q8").base)
    assert pgroup_bound(gd) == 8
    assert check_pgroup_bound(chi_of("Q8")).status == "pass"
    assert check_pgroup_bound(chi_of("Z3")).status == "pass"
    assert check_pgroup_bound(chi_of("S3")).status == "not-applicable"


def test_l12_structure_examples():
    for name in ("Z4", "S3", "Z2xZ2xZ2"):
        assert set(statuses(check_L12_structure(chi_of(name))).values()) == {"pass"}


@pytest.mark.parametrize("name, w_r, d_r", [("S3", 1, 3), ("Z2xZ2", 2, 2), ("Z4", 1, 1)])
def test_homology_examples(name, w_r, d_r):
    res = {r.id: r for r in check_homology_links(chi_of(name))}
    assert all(r.status == "pass" for r in res.values())
    assert res["homology.multiplier"].witnesses["order_W_mod_R"] == w_r
    assert res["homology.exterior"].witnesses["order_D_mod_R"] == d_r


def test_homology_skipped_above_cap():
    res = check_homology_links(chi_of("D16"))
    assert {r.status for r in res} == {"skipped"}


def test_identity_suites_pass_on_s3():
    res = check_identity_suites(chi_of("S3"), samples=1000, seed=0)
    assert statuses(res) == {i: "pass" for i in IDENTITY_IDS}


def test_zero_samples_skip():
    res = statuses(check_identity_suites(chi_of("S3"), samples=0))
    assert all(v == "skipped" for k, v in res.items() if k != "lemma2.5")


def twist_fixture():
    c = chi_of("SL23")
    b = c.base.elements.index(c.base.images[1])
    return c, Perturbation(twist_phi_by=b)


def test_negative_control_twisted_phi():
    c, pert = twist_fixture()
    res = {r.id: r for r in check_identity_suites(c, 1000, 0, pert)}
    failed = {k for k, r in res.items() if r.status == "fail"}
    assert failed == {"lemma2.1", "lemma2.2", "lemma2.4", "lemma2.5"}
    assert all(res[k].witnesses for k in failed)


def test_negative_control_twist_hits_lemma_2_1_part_i():
    c = chi_of("S3")
    b = c.base.elements.index(c.base.images[1])
    res = {r.id: r for r in check_identity_suites(c, 1000, 0, Perturbation(twist_phi_by=b))}
    assert res["lemma2.1"].status == "fail"
    assert res["lemma2.1"].witnesses["part"] == "(i)"


def test_negative_control_wrong_sources():
    pert = Perturbation(sources={"L1": "L", "L2": "L"})
    res = statuses(check_identity_suites(chi_of("S3"), 1000, 0, pert))
    assert {k for k, v in res.items() if v == "fail"} == {"lemma2.3"}


def test_every_check_id_registered_once():
    rep = run_all(catalog()["Q8"], RunConfig(samples=200))
    ids = [c.id for c in rep.checks]
    assert len(ids) == len(set(ids))
    assert set(ids) <= set(REGISTRY)
    assert not rep.failed
    assert rep.subgroup_orders["R"] == 1
    for cid in ("thmC.a", "thmC.b", "thmC.c", "thmD.a", "thmD.b"):
        assert rep.check(cid).status == "pass"


def strip_times(d):
    for c in d["checks"]:
        c.pop("elapsed_ms")
    return d


def test_reports_reproducible_and_round_trip():
    cfg = RunConfig(samples=300, seed=7)
    a = run_all(catalog()["D4"], cfg)
    b = run_all(catalog()["D4"], cfg)
    assert json.dumps(strip_times(a.to_dict())) == json.dumps(strip_times(b.to_dict()))
    back = VerificationReport.from_dict(json.loads(json.dumps(a.to_dict())))
    assert back.to_dict() == a.to_dict()


def test_z2_report():
    rep = run_all(catalog()["Z2"])
    assert rep.chi_order == 4
    assert {c.status for c in rep.checks} <= {"pass", "not-applicable"}


def test_fatal_report_on_resource_limit():
    rep = run_all(catalog()["D8"], RunConfig(max_cosets=100))
    assert rep.fatal and rep.chi_order is None
    assert [c.id for c in rep.checks] == ["realize"]
    assert rep.checks[0].status == "skipped"
    assert rep.checks[0].witnesses["max_cosets"] == 100


def test_suite_selection():
    rep = run_all(catalog()["S3"], RunConfig(suites=("exponents",)))
    ids = {c.id for c in rep.checks}
    assert "thmA.b" in ids and "lemma2.1" not in ids and "nu.consistency" not in ids
