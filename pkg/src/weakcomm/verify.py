"""Mechanical checks of the structure theorems on a realized chi(G).

Every check produces a :class:`CheckResult` under a stable id from
:data:`REGISTRY`.  Identity suites substitute seeded random elements and
compare points of the regular representation; subgroup statements are
decided exactly with stabilizer chains.
"""

from __future__ import annotations

import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import series
from .catalog import CatalogEntry
from .chi import (
    DEFAULT_MAX_COSETS,
    BaseGroup,
    ChiComplex,
    lcm_all,
    default_triple_scope,
    first_relator_outside_R,
    nu_chi_consistency,
    nu_delta_index,
    nu_presentation,
    realize_chi,
    realize_nu,
)
from .errors import PreconditionError, ResourceLimitError, WeakCommError
from .multiplier import MAX_ORDER as ORACLE_MAX_ORDER
from .multiplier import cohomology_data
from .perm import (
    DEFAULT_ENUMERATION_CAP,
    PermGroup,
    Permutation,
    SubgroupHandle,
    commutator_subgroup,
    group_exponent,
    is_subgroup,
    join,
    prime_factors,
    quotient_order_and_exponent,
    same_subgroup,
)

log = logging.getLogger(__name__)

STATUSES = ("pass", "fail", "skipped", "not-applicable")
SUITES = ("identities", "exponents", "series", "homology", "nu")

# id -> the statement being checked
REGISTRY: dict[str, str] = {
    "realize": "chi(G) is realized by coset enumeration within the configured caps",
    "chi.invariants": "[L,D] = 1, W central in LD, R <= W, L12 <= R, |chi|/|W| = |T(G)|, "
                      "|L| = |chi|/|G|, |D| = |chi|/|G|^2, |L||D| = |W||LD|, "
                      "L = <x^-1 x'>, R normal and equal to the closure of generator triples",
    "thmA.a": "G periodic implies R periodic (vacuous for finite G)",
    "thmA.b": "exp(R) divides exp(G) * exp(G')",
    "corB": "G finitely generated and periodic implies L12 finite (vacuous for finite G)",
    "thm4.2b": "exp(R/L12) divides exp(G)",
    "thm4.3b": "exp(L12) divides m, the lcm of the orders of all commutators [x,y] in G",
    "abelian.R2": "G abelian implies R^2 = 1",
    "twogen.R1": "G with a declared 2-element generating set has R = 1",
    "cor4.5": "G a p-group of derived length d: exp(R) divides min(exp(G')exp(G), "
              "2^d exp(G')^(d-1)) for p = 2 and min(exp(G')exp(G), exp(G')^(d-1)) for odd p",
    "thm4.1a": "L12 <= R",
    "thm4.1b": "if [g_i,h_i'] R generate D/R then the brackets "
               "[[g_i,phi,h_i],[g_j,phi,h_j']] generate L12",
    "homology.multiplier": "|W/R| = |M(G)| with equal abelian invariants (cocycle oracle)",
    "homology.exterior": "|D/R| = |G'| |M(G)|",
    "homology.L1L2": "|L1/R| = |L2/R| = |D/R|",
    "homology.central": "D/R, L1/R, L2/R commute pairwise and their product is chi'/R",
    "lemma2.1": "[x,y'] = [x',y]; [x,y']^(z') = [x,y']^z; conjugation by a word in z_i or "
                "z_i' agrees; [x',y,x] = [x,y,x']; [x',y_1..y_n,x] = [x,y_1..y_n,x']",
    "lemma2.2": "[h,g'^-1 g] = [g',h][h,g] = [h,g][g',h] and "
                "[h^-1 h',g'] = [g',h][h',g'] = [h',g'][g',h]",
    "lemma2.3": "[a1 a2, b1 b2] = [a1,b1][a1,b2][a2,b1][a2,b2] for a_i in L1, b_i in L2",
    "lemma2.4": "[[g,phi][h,phi],a,b'] = [[g,phi],a,b'][[h,phi],a,b'] mod L12 and "
                "[[g,phi,a][h,phi,b],c'] = [g,phi,a,c'][h,phi,b,c']",
    "lemma2.5": "R = <[g,phi,a,b'], L12>",
    "lemma5.1": "[t,a,g,b'] = [t,a,b',g] and [t,a',g',b] = [t,a',b,g'] for t in L",
    "lemma5.3": "[R,_n G] lies in [D,_(n+1) G], [L1,_(n+1) G] and [L2,_(n+1) G'] for n >= 1",
    "thmC.a": "chi' is the central product of D and L1 L2",
    "thmC.b": "chi'' = D' L1' L2' L12",
    "thmC.c": "chi^(k+1) is the central product of D^(k), L1^(k), L2^(k) for k >= 2",
    "thmD.a": "[D,_n G], [L1,_n G], [L2,_n G'] are normal in chi for n >= 1",
    "thmD.b": "gamma_n(chi) = [D,_(n-2) G][L1,_(n-2) G][L2,_(n-2) G'] for n >= 3",
    "cor5.6": "G nilpotent of class c: gamma_(n+2)(chi) = [R,_(n-1) G] = [D,_n G] = "
              "[L1,_n G] = [L2,_n G'] for n >= c",
    "remark.gamma_c3": "G nilpotent of class c: gamma_(c+3)(chi) has exponent dividing 2",
    "nu.consistency": "x -> xR, x' -> x'R induces nu(G)/Delta(G) = chi(G)/R",
    "remark.81_12": "library group 81#12: exp(R) = 3 and exp(R/L12) = 3",
    "remark.243_37": "library group 243#37: exp(L12) = 3",
}


@dataclass
class CheckResult:
    id: str
    status: str
    witnesses: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0
    note: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.id not in REGISTRY:
            raise ValueError(f"unregistered check id {self.id!r}")
        if self.status == "fail" and not self.witnesses:
            raise ValueError(f"{self.id}: a failing check needs a witness")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "CheckResult":
        return cls(d["id"], d["status"], dict(d.get("witnesses", {})),
                   d.get("elapsed_ms", 0.0), d.get("note", ""))


@dataclass
class RunConfig:
    max_cosets: int = DEFAULT_MAX_COSETS
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    samples: int = 1000
    seed: int = 0
    suites: tuple = SUITES
    nu_triple_scope: str | None = None
    # the cocycle oracle and nu are only attempted up to these orders of G
    oracle_max_order: int = ORACLE_MAX_ORDER
    nu_max_order: int = 24
    # nu itself (beyond the index of Delta) is realized only within these limits
    nu_full_max_order: int = 12
    nu_full_max_cosets: int = 10**5

    def __post_init__(self):
        self.suites = tuple(self.suites)
        for name in ("max_cosets", "enumeration_cap", "oracle_max_order", "nu_max_order",
                     "nu_full_max_order", "nu_full_max_cosets"):
            if getattr(self, name) <= 0:
                raise PreconditionError(f"{name} must be positive")
        if self.samples < 0:
            raise PreconditionError("samples must be non-negative")
        bad = [s for s in self.suites if s not in SUITES]
        if bad:
            raise PreconditionError(f"unknown suite(s): {', '.join(bad)}")
        if self.nu_triple_scope not in (None, "generators", "all_elements"):
            raise PreconditionError(f"unknown triple scope {self.nu_triple_scope!r}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["suites"] = list(self.suites)
        return d


@dataclass
class VerificationReport:
    group: str
    chi_order: int | None
    subgroup_orders: dict
    exponents: dict
    checks: list[CheckResult]
    seed: int
    config: dict
    fatal: bool = False

    @property
    def failed(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == "fail"]

    def check(self, cid: str) -> CheckResult:
        for c in self.checks:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def to_dict(self) -> dict:
        return {"group": self.group, "chi_order": self.chi_order,
                "subgroup_orders": dict(self.subgroup_orders),
                "exponents": dict(self.exponents),
                "checks": [c.to_dict() for c in self.checks],
                "seed": self.seed, "config": dict(self.config), "fatal": self.fatal}

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        return cls(d["group"], d["chi_order"], dict(d["subgroup_orders"]), dict(d["exponents"]),
                   [CheckResult.from_dict(c) for c in d["checks"]], d["seed"], dict(d["config"]),
                   d.get("fatal", False))


# -- plumbing ---------------------------------------------------------------------

def _timed(cid: str, fn: Callable[[], tuple]) -> CheckResult:
    """Run ``fn() -> (status, witnesses, note)``; caps turn into skips."""
    t0 = time.perf_counter()
    try:
        status, witnesses, note = fn()
    except ResourceLimitError as exc:
        status, witnesses, note = "skipped", {"cap": exc.cap}, str(exc)
    ms = (time.perf_counter() - t0) * 1000.0
    return CheckResult(cid, status, witnesses, round(ms, 3), note)


def _na(reason: str) -> tuple:
    return "not-applicable", {}, reason


def _verdict(ok: bool, witnesses: dict, note: str = "") -> tuple:
    return ("pass" if ok else "fail"), witnesses, note


def _divides(a: int, b: int) -> bool:
    return b % a == 0


def _mask(sub: SubgroupHandle) -> np.ndarray:
    return sub.group.tree.mask


def _grow_points(arith, start: PermGroup, points) -> PermGroup:
    """Add the elements at ``points`` to ``start`` one by one, skipping members."""
    group = start
    for p in points:
        p = int(p)
        if p and not group.tree.mask[p]:
            group = group.extended([arith.element(p)])
    return group


def _points_in(sub: SubgroupHandle, points) -> np.ndarray:
    return _mask(sub)[np.asarray(points, dtype=np.int64)]


# -- G-level quantities -------------------------------------------------------------

@dataclass
class GroupData:
    order: int
    exponent: int
    derived_exponent: int
    derived_order: int
    derived_length: int | None
    nilpotency_class: int | None
    abelian: bool
    commutator_lcm: int | None


def commutator_order_lcm(elements: list[Permutation], max_order: int = 1000) -> int | None:
    """lcm of the orders of all commutators [x, y], exhaustively; ``None`` above
    ``max_order`` elements."""
    n = len(elements)
    if n > max_order:
        return None
    arr = np.stack([e.images for e in elements]).astype(np.int64)
    inv = np.argsort(arr, axis=1)
    seen = set()
    for i in range(n):
        # point -> x^-1 -> y^-1 -> x -> y
        t = inv[:, inv[i]]
        t = arr[i][t]
        t = np.take_along_axis(arr, t, axis=1)
        for row in np.unique(t, axis=0):
            seen.add(row.tobytes())
    orders = [Permutation(np.frombuffer(b, dtype=np.int64)).order() for b in seen]
    return lcm_all(orders)


def group_data(base: BaseGroup) -> GroupData:
    g = base.group
    dg = series.derived_subgroup(g)
    return GroupData(
        order=base.order,
        exponent=series.exponent_of(g),
        derived_exponent=series.exponent_of(dg),
        derived_order=dg.order(),
        derived_length=series.derived_length(g),
        nilpotency_class=series.nilpotency_class(g),
        abelian=dg.is_trivial(),
        commutator_lcm=commutator_order_lcm(base.elements),
    )


def _prime_power(n: int) -> int | None:
    ps = prime_factors(n)
    return ps[0] if len(ps) == 1 else None


# -- exponent theorems ------------------------------------------------------------

def chi_exponents(c: ChiComplex) -> dict:
    r_l12 = quotient_order_and_exponent(c.R, c.L12, check_normal=False)
    w_r = quotient_order_and_exponent(c.W, c.R, check_normal=False)
    return {"R": group_exponent(c.R), "R/L12": r_l12.exponent,
            "L12": group_exponent(c.L12), "W/R": w_r.exponent}


def check_exponent_theorems(c: ChiComplex, gd: GroupData | None = None,
                            ex: dict | None = None) -> list[CheckResult]:
    gd = gd or group_data(c.base)
    ex = ex or chi_exponents(c)
    out = [_timed("thmA.a", lambda: _na("every finite group is periodic; nothing to check")),
           _timed("corB", lambda: _na("L12 of a finite group is finite; nothing to check"))]

    def thm_a():
        bound = gd.exponent * gd.derived_exponent
        return _verdict(_divides(ex["R"], bound), {"exp_R": ex["R"], "bound": bound})

    def thm42():
        return _verdict(_divides(ex["R/L12"], gd.exponent),
                        {"exp_R_mod_L12": ex["R/L12"], "exp_G": gd.exponent})

    def thm43():
        if gd.commutator_lcm is None:
            return "skipped", {}, "commutator set too large for exhaustive search"
        return _verdict(_divides(ex["L12"], gd.commutator_lcm),
                        {"exp_L12": ex["L12"], "m": gd.commutator_lcm,
                         "exp_G_derived": gd.derived_exponent})

    def abelian():
        if not gd.abelian:
            return _na("G is not abelian")
        return _verdict(_divides(ex["R"], 2), {"exp_R": ex["R"]})

    def twogen():
        entry = c.base.entry
        if not entry.two_generated:
            return _na("the catalog entry does not declare a 2-element generating set")
        return _verdict(c.R.is_trivial(), {"order_R": c.R.order()})

    out += [_timed("thmA.b", thm_a), _timed("thm4.2b", thm42), _timed("thm4.3b", thm43),
            _timed("abelian.R2", abelian), _timed("twogen.R1", twogen)]
    return out


def pgroup_bound(gd: GroupData) -> int | None:
    p = _prime_power(gd.order)
    if p is None or gd.derived_length is None:
        return None
    d = gd.derived_length
    first = gd.derived_exponent * gd.exponent
    if d == 0:
        return 1
    second = gd.derived_exponent ** (d - 1)
    if p == 2:
        second *= 2**d
    return min(first, second)


def check_pgroup_bound(c: ChiComplex, gd: GroupData | None = None,
                       ex: dict | None = None) -> CheckResult:
    gd = gd or group_data(c.base)

    def run():
        p = _prime_power(gd.order)
        if p is None:
            return _na("G is not a p-group")
        bound = pgroup_bound(gd)
        exp_r = ex["R"] if ex else group_exponent(c.R)
        return _verdict(_divides(exp_r, bound), {"p": p, "d": gd.derived_length,
                                                "exp_R": exp_r, "bound": bound})
    return _timed("cor4.5", run)


def check_library_remarks(c: ChiComplex, ex: dict | None = None) -> list[CheckResult]:
    lib = c.base.entry.declared.get("library_id")
    ex = ex or chi_exponents(c)

    def r81():
        if lib != "81,12":
            return _na("only for the library group 81#12")
        return _verdict(ex["R"] == 3 and ex["R/L12"] == 3,
                        {"exp_R": ex["R"], "exp_R_mod_L12": ex["R/L12"]})

    def r243():
        if lib != "243,37":
            return _na("only for the library group 243#37")
        return _verdict(ex["L12"] == 3, {"exp_L12": ex["L12"]})
    return [_timed("remark.81_12", r81), _timed("remark.243_37", r243)]


# -- substitution sampling -----------------------------------------------------------

@dataclass
class Perturbation:
    """Negative-control fixture applied to the identity suites.

    ``twist_phi_by``: index (into the element list of G) of an element t;
    the suites then use g -> (g^t)' in place of g -> g'.
    ``sources``: sample a named subgroup from another one, e.g.
    ``{"L1": "L", "L2": "L"}``.
    """

    twist_phi_by: int | None = None
    sources: dict = field(default_factory=dict)


class _Sampler:
    def __init__(self, c: ChiComplex, perturbation: Perturbation | None = None):
        self.c = c
        self.a = c.arith
        xs, xps = c.element_points()
        self.xs = xs
        self.xps = xps
        self.p = perturbation or Perturbation()
        if self.p.twist_phi_by is not None:
            t = xps[self.p.twist_phi_by]
            self.xps = self.a.conj(xps, np.full(xps.shape, t))
        self.n = len(xs)
        self.gen_index = [c.base.elements.index(img) for img in c.base.images]

    def pick(self, rng, count: int) -> np.ndarray:
        return rng.integers(self.n, size=count)

    def subgroup(self, name: str, rng, count: int) -> np.ndarray:
        source = self.p.sources.get(name, name)
        return self.a.random_products(self.c.generator_points(source), count, rng)

    def word(self, i: int) -> str:
        names = self.c.base.presentation.generator_names
        return self.c.base.words[int(i)].format(names)


def _first_mismatch(lhs, rhs) -> int | None:
    bad = np.flatnonzero(np.asarray(lhs) != np.asarray(rhs))
    return int(bad[0]) if bad.size else None


def _part(name: str, lhs, rhs, describe) -> tuple[str, int | None, dict]:
    j = _first_mismatch(lhs, rhs)
    if j is None:
        return name, None, {}
    w = {"part": name, "sample": j, "lhs_point": int(lhs[j]), "rhs_point": int(rhs[j])}
    w.update(describe(j))
    return name, j, w


def _summarize(parts: list[tuple[str, int | None, dict]], samples: int) -> tuple:
    for name, j, w in parts:
        if j is not None:
            return "fail", w, f"part {name} failed"
    return "pass", {"samples": samples, "parts": len(parts)}, ""


def _lemma2_1(s: _Sampler, rng, n: int) -> tuple:
    a = s.a
    x, y, z = s.pick(rng, n), s.pick(rng, n), s.pick(rng, n)
    X, Xp, Y, Yp = s.xs[x], s.xps[x], s.xs[y], s.xps[y]
    Z, Zp = s.xs[z], s.xps[z]

    def d(*named):
        return lambda j: {k: s.word(v[j]) for k, v in named}

    base = a.comm(X, Yp)
    parts = [_part("(i)", base, a.comm(Xp, Y), d(("x", x), ("y", y))),
             _part("(ii)", a.conj(base, Zp), a.conj(base, Z), d(("x", x), ("y", y), ("z", z)))]

    # (iii): omega a word of length 3 in z_1, z_2, z_3 with signs, each letter
    # optionally replaced by its copy
    zs = [s.pick(rng, n) for _ in range(3)]
    signs = rng.integers(2, size=(3, n)).astype(bool)
    eps = rng.integers(2, size=(3, n)).astype(bool)
    left = np.zeros(n, dtype=np.int64)
    right = np.zeros(n, dtype=np.int64)
    for i in range(3):
        plain = s.xs[zs[i]]
        mixed = np.where(eps[i], s.xps[zs[i]], plain)
        plain = np.where(signs[i], a.inv(plain), plain)
        mixed = np.where(signs[i], a.inv(mixed), mixed)
        left = a.mul(left, mixed)
        right = a.mul(right, plain)
    parts.append(_part("(iii)", a.conj(base, left), a.conj(base, right),
                       lambda j: {"x": s.word(x[j]), "y": s.word(y[j]),
                                  "z": [s.word(zz[j]) for zz in zs],
                                  "inverted": [bool(v[j]) for v in signs],
                                  "copied": [bool(v[j]) for v in eps]}))
    parts.append(_part("(iv)", a.comm(Xp, Y, X), a.comm(X, Y, Xp), d(("x", x), ("y", y))))

    # (v) with n = 1, 2, 3 middle entries, a third of the samples each
    for length in (1, 2, 3):
        idx = np.arange(n)[np.arange(n) % 3 == length - 1]
        if not idx.size:
            continue
        ys = [s.pick(rng, idx.size) for _ in range(length)]
        mids = [s.xs[v] for v in ys]
        lhs = a.comm(Xp[idx], *mids, X[idx])
        rhs = a.comm(X[idx], *mids, Xp[idx])
        parts.append(_part(f"(v) n={length}", lhs, rhs,
                           lambda j, idx=idx, ys=ys: {"x": s.word(x[idx[j]]),
                                                      "ys": [s.word(v[j]) for v in ys]}))
    return _summarize(parts, n)


def _lemma2_2(s: _Sampler, rng, n: int) -> tuple:
    a = s.a
    g, h = s.pick(rng, n), s.pick(rng, n)
    G, Gp, H, Hp = s.xs[g], s.xps[g], s.xs[h], s.xps[h]

    def d(j):
        return {"g": s.word(g[j]), "h": s.word(h[j])}

    lhs1 = a.comm(H, a.mul(a.inv(Gp), G))
    lhs2 = a.comm(a.mul(a.inv(H), Hp), Gp)
    parts = [
        _part("(i) first", lhs1, a.mul(a.comm(Gp, H), a.comm(H, G)), d),
        _part("(i) second", lhs1, a.mul(a.comm(H, G), a.comm(Gp, H)), d),
        _part("(ii) first", lhs2, a.mul(a.comm(Gp, H), a.comm(Hp, Gp)), d),
        _part("(ii) second", lhs2, a.mul(a.comm(Hp, Gp), a.comm(Gp, H)), d),
    ]
    return _summarize(parts, n)


def _lemma2_3(s: _Sampler, rng, n: int) -> tuple:
    a = s.a
    a1, a2 = s.subgroup("L1", rng, n), s.subgroup("L1", rng, n)
    b1, b2 = s.subgroup("L2", rng, n), s.subgroup("L2", rng, n)
    lhs = a.comm(a.mul(a1, a2), a.mul(b1, b2))
    rhs = a.product(a.comm(a1, b1), a.comm(a1, b2), a.comm(a2, b1), a.comm(a2, b2))
    part = _part("bilinear", lhs, rhs, lambda j: {"alpha": [int(a1[j]), int(a2[j])],
                                                  "beta": [int(b1[j]), int(b2[j])]})
    return _summarize([part], n)


def _lemma2_4(s: _Sampler, rng, n: int) -> tuple:
    a = s.a
    g, h, x, y, z = (s.pick(rng, n) for _ in range(5))
    lg = a.mul(a.inv(s.xs[g]), s.xps[g])
    lh = a.mul(a.inv(s.xs[h]), s.xps[h])
    A, B, Bp, Cp = s.xs[x], s.xs[y], s.xps[y], s.xps[z]

    def d(j):
        return {"g": s.word(g[j]), "h": s.word(h[j]), "a": s.word(x[j]),
                "b": s.word(y[j]), "c": s.word(z[j])}

    lhs = a.comm(a.mul(lg, lh), A, Bp)
    rhs = a.mul(a.comm(lg, A, Bp), a.comm(lh, A, Bp))
    diff = a.mul(a.inv(lhs), rhs)
    inside = _points_in(s.c.L12, diff)
    bad = np.flatnonzero(~inside)
    parts = []
    if bad.size:
        j = int(bad[0])
        w = {"part": "(i)", "sample": j, "quotient_point": int(diff[j])}
        w.update(d(j))
        parts.append(("(i)", j, w))
    else:
        parts.append(("(i)", None, {}))
    lhs2 = a.comm(a.mul(a.comm(lg, A), a.comm(lh, B)), Cp)
    rhs2 = a.mul(a.comm(lg, A, Cp), a.comm(lh, B, Cp))
    parts.append(_part("(ii)", lhs2, rhs2, d))
    return _summarize(parts, n)


def _lemma5_1(s: _Sampler, rng, n: int) -> tuple:
    a = s.a
    t = s.subgroup("L", rng, n)
    x, g, y = s.pick(rng, n), s.pick(rng, n), s.pick(rng, n)
    A, Ap, G, Gp, B, Bp = s.xs[x], s.xps[x], s.xs[g], s.xps[g], s.xs[y], s.xps[y]

    def d(j):
        return {"t_point": int(t[j]), "a": s.word(x[j]), "g": s.word(g[j]), "b": s.word(y[j])}

    parts = [_part("(i)", a.comm(t, A, G, Bp), a.comm(t, A, Bp, G), d),
             _part("(ii)", a.comm(t, Ap, Gp, B), a.comm(t, Ap, B, Gp), d)]
    return _summarize(parts, n)


def _lemma2_5(s: _Sampler, max_triples: int = 10**6) -> tuple:
    """R = <[g,phi,a,b'], L12>, generator triples first, then all triples."""
    c, a = s.c, s.a
    r_mask = _mask(c.R)

    def attempt(idx: np.ndarray, scope: str):
        g, x, y = (idx[:, i] for i in range(3))
        lg = a.mul(a.inv(s.xs[g]), s.xps[g])
        pts = a.comm(lg, s.xs[x], s.xps[y])
        outside = np.flatnonzero(~r_mask[pts])
        if outside.size:
            j = int(outside[0])
            return False, {"scope": scope, "g": s.word(g[j]), "a": s.word(x[j]),
                           "b": s.word(y[j]), "point": int(pts[j]), "reason": "not in R"}
        grown = _grow_points(a, c.L12.group, np.unique(pts))
        ok = grown.order() == c.R.order()
        return ok, {"scope": scope, "generated_order": grown.order(), "order_R": c.R.order()}

    gi = np.array(s.gen_index)
    idx = np.array(np.meshgrid(gi, gi, gi, indexing="ij")).reshape(3, -1).T
    ok, w = attempt(idx, "generators")
    if ok or w.get("reason"):
        return _verdict(ok, w)
    if s.n ** 3 > max_triples:
        return "fail", w, "generator triples fall short and all triples exceed the cap"
    el = np.arange(s.n)
    idx = np.array(np.meshgrid(el, el, el, indexing="ij")).reshape(3, -1).T
    ok, w = attempt(idx, "all_elements")
    return _verdict(ok, w)


_SAMPLED = (("lemma2.1", _lemma2_1), ("lemma2.2", _lemma2_2), ("lemma2.3", _lemma2_3),
            ("lemma2.4", _lemma2_4), ("lemma5.1", _lemma5_1))


def check_identity_suites(c: ChiComplex, samples: int = 1000, seed: int = 0,
                          perturbation: Perturbation | None = None) -> list[CheckResult]:
    """Seeded substitution suites; each lemma draws from its own stream."""
    s = _Sampler(c, perturbation)
    out = []
    for k, (cid, fn) in enumerate(_SAMPLED):
        if samples == 0:
            out.append(CheckResult(cid, "skipped", {"samples": 0}, 0.0, "no samples requested"))
            continue
        rng = np.random.default_rng([seed, k])
        out.append(_timed(cid, lambda fn=fn, rng=rng: fn(s, rng, samples)))
    out.insert(4, _timed("lemma2.5", lambda: _lemma2_5(s)))
    return out


# -- L12 structure --------------------------------------------------------------

def check_L12_structure(c: ChiComplex, max_pairs: int = 10**6) -> list[CheckResult]:
    s = _Sampler(c)
    a = s.a

    def part_a():
        inside = _points_in(c.R, c.generator_points("L12"))
        bad = np.flatnonzero(~inside)
        if bad.size:
            return "fail", {"generator_point": int(c.generator_points("L12")[bad[0]])}, ""
        return "pass", {"order_L12": c.L12.order(), "order_R": c.R.order()}, ""

    def choose_pairs(idx: np.ndarray) -> tuple[list, PermGroup]:
        pts = a.comm(s.xs[idx[:, 0]], s.xps[idx[:, 1]])
        group = c.R.group
        chosen = []
        for j, p in enumerate(pts):
            p = int(p)
            if p and not group.tree.mask[p]:
                group = group.extended([a.element(p)])
                chosen.append((int(idx[j, 0]), int(idx[j, 1])))
                if group.order() == c.D.order():
                    break
        return chosen, group

    def part_b():
        gi = np.array(s.gen_index)
        idx = np.array(np.meshgrid(gi, gi, indexing="ij")).reshape(2, -1).T
        chosen, grp = choose_pairs(idx)
        scope = "generators"
        if grp.order() != c.D.order():
            if s.n ** 2 > max_pairs:
                return "skipped", {}, "generator pairs fall short and all pairs exceed the cap"
            el = np.arange(s.n)
            idx = np.array(np.meshgrid(el, el, indexing="ij")).reshape(2, -1).T
            chosen, grp = choose_pairs(idx)
            scope = "all_elements"
        if grp.order() != c.D.order():
            return "fail", {"scope": scope, "reached": grp.order(), "order_D": c.D.order()}, \
                "no pair set generates D/R"
        w = {"n": len(chosen), "scope": scope,
             "pairs": [[s.word(g), s.word(h)] for g, h in chosen]}
        if not chosen:
            return _verdict(c.L12.is_trivial(), dict(w, order_L12=c.L12.order()))
        g = np.array([p[0] for p in chosen])
        h = np.array([p[1] for p in chosen])
        lg = a.mul(a.inv(s.xs[g]), s.xps[g])
        u = a.comm(lg, s.xs[h])
        v = a.comm(lg, s.xps[h])
        ii, jj = np.meshgrid(np.arange(len(g)), np.arange(len(g)), indexing="ij")
        pts = a.comm(u[ii.ravel()], v[jj.ravel()])
        inside = _points_in(c.L12, pts)
        if not inside.all():
            return "fail", dict(w, reason="bracket outside L12"), ""
        grown = _grow_points(a, PermGroup((), c.chi.degree, semiregular=True), np.unique(pts))
        w.update(generated_order=grown.order(), order_L12=c.L12.order())
        return _verdict(grown.order() == c.L12.order(), w)

    return [_timed("thm4.1a", part_a), _timed("thm4.1b", part_b)]


# -- homology links ------------------------------------------------------------------

def check_homology_links(c: ChiComplex, gd: GroupData | None = None,
                         oracle_max_order: int = ORACLE_MAX_ORDER) -> list[CheckResult]:
    gd = gd or group_data(c.base)
    ids = ("homology.multiplier", "homology.exterior", "homology.L1L2", "homology.central")
    if gd.order > oracle_max_order:
        reason = f"multiplier oracle limited to |G| <= {oracle_max_order}"
        return [CheckResult(i, "skipped", {"order_G": gd.order}, 0.0, reason) for i in ids]
    data = cohomology_data(c.base.elements, oracle_max_order)
    m = data.multiplier_order
    wr = quotient_order_and_exponent(c.W, c.R, check_normal=False)
    dr = c.D.order() // c.R.order()

    def mult():
        w = {"order_W_mod_R": wr.order, "order_M": m, "oracle_invariants": data.multiplier,
             "quotient_invariants": wr.invariants}
        ok = wr.order == m and (wr.invariants is None or wr.invariants == data.multiplier)
        return _verdict(ok, w)

    def ext():
        return _verdict(dr == gd.derived_order * m,
                        {"order_D_mod_R": dr, "order_G_derived": gd.derived_order, "order_M": m})

    def l1l2():
        q1 = c.L1.order() // c.R.order()
        q2 = c.L2.order() // c.R.order()
        ok = is_subgroup(c.R, c.L1) and is_subgroup(c.R, c.L2) and q1 == q2 == dr
        return _verdict(ok, {"order_L1_mod_R": q1, "order_L2_mod_R": q2, "order_D_mod_R": dr})

    def central():
        parts = {"D": c.D, "L1": c.L1, "L2": c.L2}
        names = list(parts)
        r_mask = _mask(c.R)
        for i in range(3):
            for j in range(i + 1, 3):
                for x in parts[names[i]].generators:
                    for y in parts[names[j]].generators:
                        p = int(c.arith.comm(x.images[0], y.images[0])[0])
                        if not r_mask[p]:
                            return "fail", {"pair": [names[i], names[j]], "commutator_point": p}, ""
        prod = join(c.R, c.D, c.L1, c.L2)
        whole = commutator_subgroup(_whole(c), _whole(c))
        return _verdict(same_subgroup(prod, whole),
                        {"order_product": prod.order(), "order_chi_derived": whole.order()})

    return [_timed(ids[0], mult), _timed(ids[1], ext), _timed(ids[2], l1l2),
            _timed(ids[3], central)]


def _whole(c: ChiComplex) -> SubgroupHandle:
    return SubgroupHandle(c.chi, (), c.chi)


# -- series -------------------------------------------------------------------------

def _derived_of(h: SubgroupHandle, k: int) -> SubgroupHandle:
    for _ in range(k):
        h = commutator_subgroup(h, h)
    return h


def _available(table: series.SeriesTable, index: int) -> bool:
    return index <= table.last_index or table.stabilized_at is not None


def check_series(c: ChiComplex, gd: GroupData | None = None,
                 n_max: int | None = None) -> list[CheckResult]:
    gd = gd or group_data(c.base)
    cls = gd.nilpotency_class
    if n_max is None:
        n_max = (cls if cls is not None else 3) + 5
    gamma = series.gamma_chi(c, n_max + 3)
    derived = series.derived_chi(c, n_max)
    br = {"D": series.bracket_table(c, "D", "G", n_max + 1),
          "L1": series.bracket_table(c, "L1", "G", n_max + 1),
          "L2": series.bracket_table(c, "L2", "Gphi", n_max + 1),
          "R": series.bracket_table(c, "R", "G", n_max + 1)}
    stab = {"gamma": gamma.stabilized_at, "derived": derived.stabilized_at}
    stab.update({f"[{k},_n]": t.stabilized_at for k, t in br.items()})

    def thm_c_a():
        cert = series.central_product_check(derived[1], [c.D, join(c.L1, c.L2)])
        w = {"order_chi_derived": cert.whole_order, "order_product": cert.product_order}
        if cert.failing_pair is not None:
            w["failing_pair"] = list(cert.failing_pair)
        return _verdict(cert.passed, w, cert.note)

    def thm_c_b():
        parts = [_derived_of(c.D, 1), _derived_of(c.L1, 1), _derived_of(c.L2, 1), c.L12]
        prod = join(*parts)
        return _verdict(same_subgroup(prod, derived[2]),
                        {"order_chi_2": derived[2].order(), "order_product": prod.order()})

    def thm_c_c():
        k = 2
        checked = []
        d, l1, l2 = _derived_of(c.D, 2), _derived_of(c.L1, 2), _derived_of(c.L2, 2)
        while _available(derived, k + 1) and k <= n_max:
            cert = series.central_product_check(derived[k + 1], [d, l1, l2])
            if not cert.passed:
                return "fail", {"k": k, "order_whole": cert.whole_order,
                                "order_product": cert.product_order}, cert.note
            checked.append(cert.whole_order)
            if cert.whole_order == 1 and d.is_trivial() and l1.is_trivial() and l2.is_trivial():
                break
            k += 1
            d, l1, l2 = (_derived_of(x, 1) for x in (d, l1, l2))
        return "pass", {"k_checked": list(range(2, 2 + len(checked))), "orders": checked,
                        "stabilized_at": derived.stabilized_at}, ""

    def thm_d_a():
        for key in ("D", "L1", "L2"):
            t = br[key]
            for n, ok in enumerate(t.normal):
                if n >= 1 and not ok:
                    return "fail", {"bracket": t.terms[n][0]}, ""
        return "pass", {k: len(br[k].terms) - 1 for k in ("D", "L1", "L2")}, ""

    def thm_d_b():
        checked = []
        n = 3
        while n <= n_max + 2 and _available(gamma, n) and all(
                _available(br[k], n - 2) for k in ("D", "L1", "L2")):
            prod = join(br["D"][n - 2], br["L1"][n - 2], br["L2"][n - 2])
            if not same_subgroup(prod, gamma[n]):
                return "fail", {"n": n, "order_gamma": gamma[n].order(),
                                "order_product": prod.order()}, ""
            checked.append(n)
            n += 1
        return "pass", {"n_checked": checked, "stabilization": stab}, ""

    def lemma_5_3():
        checked = []
        n = 1
        while n <= n_max and _available(br["R"], n) and all(
                _available(br[k], n + 1) for k in ("D", "L1", "L2")):
            r = br["R"][n]
            for k in ("D", "L1", "L2"):
                if not is_subgroup(r, br[k][n + 1]):
                    return "fail", {"n": n, "container": k, "order_R_bracket": r.order()}, ""
            checked.append(n)
            n += 1
        return "pass", {"n_checked": checked}, ""

    def cor_5_6():
        if cls is None:
            return _na("G is not nilpotent")
        if cls == 0:
            return _na("G is trivial")
        checked = []
        n = cls
        while n <= cls + n_max and _available(gamma, n + 2) and _available(br["R"], n - 1) \
                and all(_available(br[k], n) for k in ("D", "L1", "L2")):
            terms = [gamma[n + 2], br["R"][n - 1], br["D"][n], br["L1"][n], br["L2"][n]]
            for i, t in enumerate(terms[1:], start=1):
                if not same_subgroup(terms[0], t):
                    return "fail", {"n": n, "term": i, "orders": [x.order() for x in terms]}, ""
            checked.append(n)
            if all(br[k].stabilized_at is not None and n >= br[k].stabilized_at for k in br) \
                    and gamma.stabilized_at is not None and n + 2 >= gamma.stabilized_at:
                break
            n += 1
        return "pass", {"c": cls, "n_checked": checked}, ""

    def gamma_c3():
        if cls is None:
            return _na("G is not nilpotent")
        if not _available(gamma, cls + 3):
            return "skipped", {}, "lower central series not computed far enough"
        e = group_exponent(gamma[cls + 3])
        return _verdict(_divides(e, 2), {"c": cls, "exp_gamma": e,
                                         "order_gamma": gamma[cls + 3].order()})

    return [_timed("lemma5.3", lemma_5_3), _timed("thmC.a", thm_c_a), _timed("thmC.b", thm_c_b),
            _timed("thmC.c", thm_c_c), _timed("thmD.a", thm_d_a), _timed("thmD.b", thm_d_b),
            _timed("cor5.6", cor_5_6), _timed("remark.gamma_c3", gamma_c3)]


# -- nu ----------------------------------------------------------------------------

def check_nu(c: ChiComplex, config: RunConfig) -> CheckResult:
    def run():
        scope = config.nu_triple_scope
        if scope is None and c.base.order > config.nu_max_order:
            return "skipped", {"order_G": c.base.order}, \
                f"nu is only realized by default for |G| <= {config.nu_max_order}"
        scope = scope or default_triple_scope(c.base.order)
        pres = nu_presentation(c.base.entry, scope, cap=config.enumeration_cap)
        witness = first_relator_outside_R(c, pres)
        index = nu_delta_index(c.base, scope, config.max_cosets, config.enumeration_cap)
        w = {"scope": scope, "index_Delta": index, "order_chi": c.order,
             "order_R": c.R.order()}
        ok = witness is None and index * c.R.order() == c.order
        if witness:
            w["relator"] = witness
        # the full nu is a cross-check on the index; it is often much larger
        full_cap = min(config.max_cosets, config.nu_full_max_cosets)
        note = ""
        nu = None
        if c.base.order > config.nu_full_max_order:
            note = f"nu itself is only realized for |G| <= {config.nu_full_max_order}"
        else:
            try:
                nu = realize_nu(c.base, scope, full_cap, config.enumeration_cap)
            except ResourceLimitError:
                note = f"nu itself exceeds {full_cap} cosets"
        if nu is not None:
            res = nu_chi_consistency(c, nu)
            w["order_nu"] = res.nu_order
            w["order_Delta"] = res.delta_order
            ok = ok and res.passed and res.nu_order == index * res.delta_order
            bad = [i.name for i in nu.invariants if not i.passed]
            if bad:
                w["failed_invariants"] = bad
                ok = False
        return _verdict(ok, w, note)
    return _timed("nu.consistency", run)


# -- everything ------------------------------------------------------------------

def _fatal(name: str, config: RunConfig, status: str, witnesses: dict, note: str,
           ms: float) -> VerificationReport:
    rec = CheckResult("realize", status, witnesses or {"error": note}, round(ms, 3), note)
    return VerificationReport(name, None, {}, {}, [rec], config.seed, config.to_dict(), True)


def run_all(entry: CatalogEntry, config: RunConfig | None = None,
            perturbation: Perturbation | None = None) -> VerificationReport:
    config = config or RunConfig()
    t0 = time.perf_counter()
    try:
        base = BaseGroup.from_entry(entry, config.enumeration_cap)
        c = realize_chi(base, config.max_cosets, config.enumeration_cap)
    except ResourceLimitError as exc:
        rec = dict(getattr(exc, "record", {}) or {"cap": exc.cap})
        return _fatal(entry.name, config, "skipped", rec, str(exc),
                      (time.perf_counter() - t0) * 1000.0)
    except WeakCommError as exc:
        return _fatal(entry.name, config, "fail", {"error": type(exc).__name__}, str(exc),
                      (time.perf_counter() - t0) * 1000.0)
    realize_ms = (time.perf_counter() - t0) * 1000.0
    checks = [CheckResult("realize", "pass", {"order_chi": c.order, "order_G": base.order},
                          round(realize_ms, 3))]
    bad = [i.name for i in c.invariants if not i.passed]
    checks.append(CheckResult("chi.invariants", "fail" if bad else "pass",
                              {"failed": bad} if bad else {"count": len(c.invariants)}))

    gd = group_data(base)
    ex = chi_exponents(c)
    exponents = {"G": gd.exponent, "G'": gd.derived_exponent, **ex}
    orders = {"L": c.L.order(), "D": c.D.order(), "W": c.W.order(), "R": c.R.order(),
              "L1": c.L1.order(), "L2": c.L2.order(), "L12": c.L12.order(), "T": c.T.order()}
    suites = set(config.suites)
    if "exponents" in suites:
        checks += check_exponent_theorems(c, gd, ex)
        checks.append(check_pgroup_bound(c, gd, ex))
        checks += check_L12_structure(c)
        checks += check_library_remarks(c, ex)
    if "homology" in suites:
        checks += check_homology_links(c, gd, config.oracle_max_order)
    if "identities" in suites:
        checks += check_identity_suites(c, config.samples, config.seed, perturbation)
    if "series" in suites:
        checks += check_series(c, gd)
    if "nu" in suites:
        checks.append(check_nu(c, config))
    return VerificationReport(base.name, c.order, orders, exponents, checks, config.seed,
                              config.to_dict())
