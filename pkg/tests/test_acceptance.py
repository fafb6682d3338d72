"""Acceptance criteria, one test per criterion.

Each test prints a single ``criterion N: PASS`` or ``FAIL`` line; the lines
are also collected and repeated in the terminal summary.  The stretch runs
on the library groups of order 81 and 243 only execute when
``WEAKCOMM_STRETCH=1`` is set.
"""

import functools
import os
import resource
import time

import pytest

from conftest import catalog
from weakcomm.chi import chi_presentation, realize_chi
from weakcomm.fp import todd_coxeter
from weakcomm.errors import ResourceLimitError
from weakcomm.multiplier import schur_multiplier
from weakcomm.perm import enumerate_elements, group_exponent
from weakcomm.verify import (
    Perturbation,
    RunConfig,
    check_identity_suites,
    chi_exponents,
    run_all,
)

RESULTS: list[str] = []
STRETCH = os.environ.get("WEAKCOMM_STRETCH") == "1"


def record(n: int, ok: bool, detail: str = "") -> None:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
    print(line)
    RESULTS.append(line)
    assert ok, line


def small_groups(max_order: int = 64) -> list[str]:
    return sorted((n for n, e in catalog().items() if e.group.order() <= max_order),
                  key=lambda n: (catalog()[n].group.order(), n))


@functools.lru_cache(maxsize=None)
def full_report(name: str):
    return run_all(catalog()[name], RunConfig(samples=1000, seed=0))


def statuses(rep, ids) -> dict:
    return {i: rep.check(i).status for i in ids}


def bad_groups(ids, names, allowed=("pass",)) -> dict:
    out = {}
    for name in names:
        rep = full_report(name)
        if rep.fatal:
            out[name] = "fatal"
            continue
        st = statuses(rep, ids)
        wrong = {k: v for k, v in st.items() if v not in allowed}
        if wrong:
            out[name] = wrong
    return out


def test_criterion_01_cyclic():
    t0 = time.perf_counter()
    bad = []
    for n in (2, 3, 4, 5, 7):
        c = realize_chi(catalog()[f"Z{n}"])
        abelian = all(g * h == h * g for g in c.gens for h in c.gens)
        if not (c.order == n * n and abelian and c.D.is_trivial() and c.R.is_trivial()
                and c.W.is_trivial()):
            bad.append(n)
    dt = time.perf_counter() - t0
    record(1, not bad and dt < 1.0, f"bad={bad} time={dt:.2f}s")


def test_criterion_02_two_generated():
    t0 = time.perf_counter()
    orders = {}
    for name in ("S3", "D4", "Q8", "A4", "Z4xZ2"):
        orders[name] = realize_chi(catalog()[name]).R.order()
    dt = time.perf_counter() - t0
    ok = all(v == 1 for v in orders.values()) and dt < 30.0
    record(2, ok, f"|R|={orders} time={dt:.1f}s")


def test_criterion_03_abelian():
    exps = {name: group_exponent(realize_chi(catalog()[name]).R)
            for name in ("Z2xZ2xZ2", "Z4xZ2")}
    record(3, all(2 % e == 0 for e in exps.values()), f"exp(R)={exps}")


def test_criterion_04_exponent_of_R():
    names = small_groups()
    config = RunConfig(suites=("exponents",))
    t0 = time.perf_counter()
    failed = {}
    for name in names:
        rep = run_all(catalog()[name], config)
        st = "fatal" if rep.fatal else rep.check("thmA.b").status
        if st != "pass":
            failed[name] = st
    dt = time.perf_counter() - t0
    ok = len(names) >= 12 and not failed and dt < 600.0
    record(4, ok, f"groups={len(names)} failed={failed} time={dt:.0f}s")


def test_criterion_05_exponent_bounds():
    names = small_groups()
    # the commutator search may skip thm4.3b on large groups; none do here
    bad = bad_groups(("thm4.2b", "thm4.3b"), names)
    record(5, not bad, f"groups={len(names)} bad={bad}")


def test_criterion_06_central_products():
    names = small_groups()
    bad = bad_groups(("thmC.a", "thmC.b", "thmC.c", "thmD.a", "thmD.b"), names)
    record(6, not bad, f"groups={len(names)} bad={bad}")


def test_criterion_07_nilpotent_series():
    names = [n for n in small_groups()
             if catalog()[n].declared.get("class") not in (None, 0)
             and catalog()[n].declared["class"] <= 3]
    bad = bad_groups(("cor5.6", "remark.gamma_c3"), names)
    record(7, len(names) >= 10 and not bad, f"groups={len(names)} bad={bad}")


def test_criterion_08_homology():
    names = sorted(set(small_groups(16)) | {"S3", "D4", "Q8", "A4"})
    bad = bad_groups(("homology.multiplier", "homology.exterior"), names)
    expected = {"Z2xZ2": [2], "S3": [], "Q8": [], "D4": [2], "A4": [2]}
    oracle = {n: schur_multiplier(list(enumerate_elements(catalog()[n].group)))
              for n in expected}
    ok = not bad and oracle == expected
    record(8, ok, f"groups={len(names)} bad={bad} oracle={oracle}")


def test_criterion_09_identity_suites():
    ids = ("lemma2.1", "lemma2.2", "lemma2.3", "lemma2.4", "lemma2.5", "lemma5.1", "lemma5.3")
    names = small_groups()
    bad = bad_groups(ids, names)
    # negative controls must fail exactly the checks they target
    sl = full_report("SL23")
    c = realize_chi(catalog()["SL23"])
    b = c.base.elements.index(c.base.images[1])
    twisted = {r.id for r in check_identity_suites(c, 1000, 0, Perturbation(twist_phi_by=b))
               if r.status == "fail"}
    s3 = realize_chi(catalog()["S3"])
    swapped = {r.id for r in check_identity_suites(
        s3, 1000, 0, Perturbation(sources={"L1": "L", "L2": "L"})) if r.status == "fail"}
    controls_ok = (twisted == {"lemma2.1", "lemma2.2", "lemma2.4", "lemma2.5"}
                   and swapped == {"lemma2.3"})
    ok = not bad and controls_ok and sl.config["samples"] == 1000
    record(9, ok, f"groups={len(names)} bad={bad} twisted_phi={sorted(twisted)} "
                  f"wrong_sources={sorted(swapped)}")


def test_criterion_10_nu_consistency():
    names = small_groups(16)
    bad = bad_groups(("nu.consistency",), names)
    record(10, not bad, f"groups={len(names)} bad={bad}")


def test_criterion_11_library_groups():
    if not STRETCH:
        line = "criterion 11: SKIPPED  stretch run, not gating; set WEAKCOMM_STRETCH=1"
        print(line)
        RESULTS.append(line)
        pytest.skip("stretch run; set WEAKCOMM_STRETCH=1")
    out = {}
    t0 = time.perf_counter()
    c = realize_chi(catalog()["He3xZ3"], max_cosets=10**7)
    ex = chi_exponents(c)
    dt = time.perf_counter() - t0
    rss_mb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024
    out["81,12"] = {"order_chi": c.order, "exp_R": ex["R"], "exp_R_mod_L12": ex["R/L12"],
                    "time_s": round(dt), "maxrss_MB": round(rss_mb)}
    ok81 = ex["R"] == 3 and ex["R/L12"] == 3 and dt <= 1800 and rss_mb <= 4096
    del c
    try:
        c = realize_chi(catalog()["G243_37"], max_cosets=10**7)
        exp_l12 = chi_exponents(c)["L12"]
        out["243,37"] = {"exp_L12": exp_l12}
        ok243 = exp_l12 == 3
    except ResourceLimitError as exc:
        # a clean stop at the cap, with its resource record, is an accepted outcome
        rec = getattr(exc, "record", {})
        out["243,37"] = {"limit": rec}
        ok243 = bool(rec)
    record(11, ok81 and ok243, f"(stretch) {out}")


def test_criterion_12_enumeration_floor():
    entry = catalog()["D63"]
    pres = chi_presentation(entry, reduced=True)
    t0 = time.perf_counter()
    table = todd_coxeter(pres, max_cosets=2 * 10**6)
    dt = time.perf_counter() - t0
    per = table.peak_bytes / (table.coset_count * 2 * pres.ngens)
    ok = table.complete and table.coset_count >= 10**6 and dt < 300.0 and per <= 16.0
    record(12, ok, f"cosets={table.coset_count} time={dt:.0f}s "
                   f"bytes/coset/signed generator={per:.2f}")
