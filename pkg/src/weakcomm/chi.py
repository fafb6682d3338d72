"""The weak commutativity group chi(G), Rocco's nu(G) and their subgroups.

Both groups are realized by coset enumeration over the trivial subgroup, so
they act regularly on the cosets.  An element is then pinned down by the
image of coset 0, and :class:`RegularArithmetic` multiplies elements given as
such points by tracing spanning-tree words through the coset table.  Heavy
sampling (thousands of commutator identities) never builds a full
permutation of the regular degree.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .catalog import CatalogEntry
from .errors import ConsistencyError, PreconditionError, ResourceLimitError, StructuralError
from .fp import (
    CosetTable,
    Presentation,
    Word,
    commutator_word,
    coset_action,
    element_words,
    evaluate_word,
    todd_coxeter,
)
from .perm import (
    DEFAULT_ENUMERATION_CAP,
    Permutation,
    PermGroup,
    SubgroupHandle,
    _OrbitTree,
    comm,
    comm_factors,
    commutator_subgroup,
    commutes,
    is_normalized_by,
    is_subgroup,
    join,
    normal_closure,
    same_subgroup,
    subgroup_closure,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_COSETS = 10**6
RELATOR_CAP = 10**5
# all-element triples for nu are used up to this order by default
NU_ALL_ELEMENTS_MAX_ORDER = 24


# -- the input group -------------------------------------------------------------

@dataclass
class BaseGroup:
    """The input group: presentation, permutation images and element words."""

    entry: CatalogEntry
    group: PermGroup
    images: list[Permutation]
    elements: list[Permutation]
    words: list[Word]

    @classmethod
    def from_entry(cls, entry: CatalogEntry, cap: int = DEFAULT_ENUMERATION_CAP) -> "BaseGroup":
        images = entry.images
        table = element_words(images, entry.presentation, cap)
        return cls(entry, entry.group, images, list(table), list(table.values()))

    @property
    def name(self) -> str:
        return self.entry.name

    @property
    def presentation(self) -> Presentation:
        return self.entry.presentation

    @property
    def ngens(self) -> int:
        return self.presentation.ngens

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def degree(self) -> int:
        return self.images[0].degree


def _phi_names(names: Sequence[str]) -> list[str]:
    out = [f"{x}'" for x in names]
    taken = set(names)
    return [n if n not in taken else f"{n}_phi" for n in out]


def _maximal_cyclic_words(words: dict[Permutation, Word]) -> list[Word]:
    """One shortest generator word per maximal cyclic subgroup."""
    spans = {}
    for g, w in words.items():  # words come shortest first
        if not w.letters:
            continue
        powers, x = [], g
        while not x.is_identity():
            powers.append(x)
            x = x * g
        key = frozenset(powers)
        if key not in spans:
            spans[key] = w
    kept = set()
    for s in sorted(spans, key=len, reverse=True):
        if not any(s < t for t in kept):
            kept.add(s)
    return [w for s, w in spans.items() if s in kept]


def chi_presentation(entry: CatalogEntry, cap: int = DEFAULT_ENUMERATION_CAP,
                     reduced: bool = False) -> Presentation:
    """Generators X and X', relators of G on both copies and [w, w'] per element.

    With ``reduced`` only one element per maximal cyclic subgroup keeps its
    relator.  This defines the same group: if g commutes with g' then every
    power of g commutes with the same power of g'.
    """
    base = entry.presentation
    k = base.ngens
    words = element_words(entry.images, base, cap)
    chosen = _maximal_cyclic_words(words) if reduced else list(words.values())
    rels = list(base.relators) + [r.shifted(k) for r in base.relators]
    for w in chosen:
        if w.letters:  # the identity's relator is vacuous
            rels.append(commutator_word(w, w.shifted(k)))
    return Presentation(list(base.generator_names) + _phi_names(base.generator_names), rels)


def nu_presentation(entry: CatalogEntry, triple_scope: str = "all_elements",
                    relator_cap: int = RELATOR_CAP,
                    cap: int = DEFAULT_ENUMERATION_CAP) -> Presentation:
    """Generators X and X' with the two conjugation relations per triple.

    ``generators``: g1, g2, g3 run over X.  ``all_elements``: g1, g2 run over
    all non-identity elements of G and g3 over X.  Letting g3 range over X
    loses nothing, since both relations for a product g3 = st follow from
    those for s and t applied to conjugated pairs.
    """
    base = entry.presentation
    k = base.ngens
    gen_words = [Word.gen(i) for i in range(k)]
    if triple_scope == "generators":
        pairs = [(a, b) for a in gen_words for b in gen_words]
    elif triple_scope == "all_elements":
        elems = [w for w in element_words(entry.images, base, cap).values() if w.letters]
        pairs = [(a, b) for a in elems for b in elems]
    else:
        raise PreconditionError(f"unknown triple scope {triple_scope!r}")
    count = 2 * len(pairs) * k + 2 * len(base.relators)
    if count > relator_cap:
        raise ResourceLimitError(
            f"nu presentation would need {count} relators (cap {relator_cap})", relator_cap)
    rels = list(base.relators) + [r.shifted(k) for r in base.relators]
    for g1, g2 in pairs:
        c = commutator_word(g1, g2.shifted(k))
        for g3 in gen_words:
            lhs = c.conjugate(g3)
            mid = commutator_word(g1.conjugate(g3), g2.conjugate(g3).shifted(k))
            rhs = c.conjugate(g3.shifted(k))
            for r in (lhs * mid.inverse(), lhs * rhs.inverse()):
                if r.letters:
                    rels.append(r)
    return Presentation(list(base.generator_names) + _phi_names(base.generator_names), rels)


# -- arithmetic in a regular representation ---------------------------------------

class RegularArithmetic:
    """Elements of a regularly realized group, represented by points.

    The element x is stored as ``0^x``.  A product ``x*y`` is found by
    tracing the spanning-tree word of ``y`` from the point of ``x``.  All
    operations take and return int arrays, so batches run vectorized.
    """

    def __init__(self, table: CosetTable):
        if not table.complete:
            raise PreconditionError("regular arithmetic needs a complete coset table")
        self.table = table
        self.rows = table.rows
        self.parent = table.parent
        self.via = table.via
        self.size = table.coset_count

    def word_codes(self, points) -> np.ndarray:
        """Column codes of the tree word of each point, left padded with -1."""
        cur = np.asarray(points, dtype=np.int64).copy()
        cols = []
        while True:
            live = cur != 0
            if not live.any():
                break
            col = np.full(cur.shape, -1, dtype=np.int32)
            col[live] = self.via[cur[live]]
            cols.append(col)
            cur[live] = self.parent[cur[live]]
        if not cols:
            return np.zeros((cur.shape[0], 0), dtype=np.int32)
        return np.stack(cols[::-1], axis=1)

    def trace_codes(self, start, codes: np.ndarray) -> np.ndarray:
        cur = np.asarray(start, dtype=np.int64).copy()
        if codes.ndim == 1:
            codes = np.broadcast_to(codes, (cur.shape[0], codes.shape[0]))
        for j in range(codes.shape[1]):
            c = codes[:, j]
            live = c >= 0
            if live.all():
                cur = self.rows[cur, c].astype(np.int64)
            elif live.any():
                cur[live] = self.rows[cur[live], c[live]]
        return cur

    def mul(self, a, b) -> np.ndarray:
        a = np.atleast_1d(np.asarray(a, dtype=np.int64))
        b = np.atleast_1d(np.asarray(b, dtype=np.int64))
        a, b = np.broadcast_arrays(a, b)
        return self.trace_codes(a, self.word_codes(b))

    def inv(self, a) -> np.ndarray:
        a = np.atleast_1d(np.asarray(a, dtype=np.int64))
        codes = self.word_codes(a)[:, ::-1]
        codes = np.where(codes >= 0, codes ^ 1, -1)
        return self.trace_codes(np.zeros(a.shape[0], dtype=np.int64), codes)

    def product(self, *xs) -> np.ndarray:
        acc = xs[0]
        for x in xs[1:]:
            acc = self.mul(acc, x)
        return np.atleast_1d(acc)

    def conj(self, a, b) -> np.ndarray:
        return self.product(self.inv(b), a, b)

    def comm(self, *xs) -> np.ndarray:
        """Left-normed commutator of point arrays."""
        acc = xs[0]
        for y in xs[1:]:
            acc = self.product(self.inv(acc), self.inv(y), acc, y)
        return np.atleast_1d(acc)

    def power(self, a, k: int) -> np.ndarray:
        a = np.atleast_1d(np.asarray(a, dtype=np.int64))
        if k < 0:
            a, k = self.inv(a), -k
        out = np.zeros(a.shape[0], dtype=np.int64)
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def of_word(self, w: Word) -> int:
        return self.table.trace(0, w)

    def of_permutation(self, p: Permutation) -> int:
        return int(p.images[0])

    def element(self, point: int) -> Permutation:
        """The full permutation of the element at ``point``."""
        codes = self.word_codes([point])[0]
        return Permutation._wrap(self.trace_codes(np.arange(self.size), codes).astype(np.int32))

    def random_products(self, gen_points: Sequence[int], count: int,
                        rng: np.random.Generator, slots: int = 10,
                        burn_in: int = 40) -> np.ndarray:
        """``count`` product-replacement samples from the subgroup generated by
        ``gen_points``, one independent chain per sample."""
        gens = [int(g) for g in gen_points if int(g) != 0]
        if not gens:
            return np.zeros(count, dtype=np.int64)
        n = max(slots, len(gens))
        state = np.array([[gens[i % len(gens)]] * count for i in range(n)], dtype=np.int64)
        acc = np.zeros(count, dtype=np.int64)
        cols = np.arange(count)
        for _ in range(burn_in):
            i = rng.integers(n, size=count)
            j = rng.integers(n - 1, size=count)
            j = np.where(j >= i, j + 1, j)
            other = state[j, cols]
            flip = rng.integers(2, size=count).astype(bool)
            if flip.any():
                other[flip] = self.inv(other[flip])
            left = rng.integers(2, size=count).astype(bool)
            cur = state[i, cols]
            new = np.empty(count, dtype=np.int64)
            if left.any():
                new[left] = self.mul(cur[left], other[left])
            if (~left).any():
                new[~left] = self.mul(other[~left], cur[~left])
            state[i, cols] = new
            acc = self.mul(acc, new)
        return acc


# -- homomorphisms --------------------------------------------------------------

@dataclass
class GroupHom:
    """A homomorphism given on generators.

    ``domain_gens`` lists the domain generators the images refer to (identity
    generators included), so words in the domain presentation evaluate
    directly.
    """

    domain: PermGroup
    codomain: PermGroup
    domain_gens: list[Permutation]
    images: list[Permutation]
    name: str = ""

    def __post_init__(self):
        if len(self.domain_gens) != len(self.images):
            raise StructuralError("one image per domain generator is required")
        for p in self.domain_gens:
            if p.degree != self.domain.degree:
                raise StructuralError("domain generator of the wrong degree")
        for p in self.images:
            if p.degree != self.codomain.degree:
                raise StructuralError("image of the wrong degree")

    def image_group(self) -> PermGroup:
        return PermGroup(self.images, self.codomain.degree)

    def check_well_defined(self, presentation: Presentation) -> Word | None:
        """First relator not killed by the images, or ``None``."""
        for r in presentation.relators:
            if not evaluate_word(r, self.images).is_identity():
                return r
        return None

    def check_image(self) -> bool:
        """Images lie in the codomain and the image order divides its order."""
        if not all(self.codomain.contains(p) for p in self.images):
            return False
        return self.codomain.order() % self.image_group().order() == 0


def _codomain_table(images: Sequence[Permutation]):
    """Enumerate ``<images>`` breadth first; right multiplication table by letters.

    Letters are the images followed by their inverses.  Elements are kept as
    rows of one array and looked up by their bytes.
    """
    letters = np.stack([p.images for p in images] + [p.inverse().images for p in images])
    degree = letters.shape[1]
    width = degree * 4
    elems = [np.arange(degree, dtype=np.int32)[None, :]]
    index = {elems[0].tobytes(): 0}
    count = 1
    rows = []
    frontier = elems[0]
    while frontier.shape[0]:
        block = np.empty((frontier.shape[0], letters.shape[0]), dtype=np.int64)
        fresh = []
        for j in range(letters.shape[0]):
            prod = np.ascontiguousarray(letters[j][frontier])
            raw = prod.tobytes()
            for i in range(prod.shape[0]):
                key = raw[i * width:(i + 1) * width]
                idx = index.get(key)
                if idx is None:
                    idx = count
                    index[key] = idx
                    count += 1
                    fresh.append(prod[i])
                block[i, j] = idx
        rows.append(block)
        frontier = np.array(fresh, dtype=np.int32).reshape(-1, degree)
    return np.concatenate(rows), count


def kernel_of_hom(h: GroupHom, label: str | None = None) -> SubgroupHandle:
    """The kernel of ``h`` as a subgroup of its domain; |K| * |im| = |domain| is checked.

    Regular domains (flagged semiregular) label every element, that is
    every point of the orbit of 0, with the index of its image and read the
    kernel off the identity label.  Other domains act on the graph of the
    map, domain points followed by codomain points, and take the pointwise
    stabilizer of the codomain part.
    """
    if not h.domain_gens:
        return SubgroupHandle(h.domain, (), label=label)
    if h.domain.semiregular:
        k = _kernel_by_labels(h)
    else:
        k = _kernel_by_graph(h)
    return SubgroupHandle(h.domain, (), k, label)


def _kernel_by_labels(h: GroupHom) -> PermGroup:
    n = h.domain.degree
    mul, image_order = _codomain_table(h.images)
    tree = _OrbitTree(h.domain_gens, n)
    labels = np.full(n, -1, dtype=np.int64)
    labels[0] = 0
    for layer in tree.layers[1:]:
        labels[layer] = mul[labels[tree.parent[layer]], tree.via[layer]]
    mask = labels == 0
    ksize = int(mask.sum())
    if ksize * image_order != tree.size:
        raise ConsistencyError(
            f"{h.name or 'hom'}: |kernel| * |image| = {ksize} * {image_order} "
            f"differs from |domain| = {tree.size}; the map is not well defined")
    k = PermGroup((), n, semiregular=True)
    while k.order() < ksize:
        missing = np.flatnonzero(mask & ~k.tree.mask)
        k = k.extended([h.domain.element_at(int(missing[0]))])
    if k.order() != ksize or not np.array_equal(k.tree.mask, mask):
        raise ConsistencyError(f"{h.name or 'hom'}: kernel labels do not form a subgroup")
    return k


def _kernel_by_graph(h: GroupHom) -> PermGroup:
    n, m = h.domain.degree, h.codomain.degree
    graph = [Permutation._wrap(np.concatenate([g.images, p.images + n]))
             for g, p in zip(h.domain_gens, h.images)]
    big = PermGroup(graph, n + m, base_prefix=range(n, n + m))
    if big.order() != PermGroup(h.domain_gens, n).order():
        raise ConsistencyError(f"{h.name or 'hom'}: the map is not well defined")
    stab = big.stabilizer_generators(m)
    k = PermGroup([Permutation._wrap(s.images[:n].copy()) for s in stab], n)
    image_order = h.image_group().order()
    if k.order() * image_order != big.order():
        raise ConsistencyError(f"{h.name or 'hom'}: |kernel| * |image| != |domain|")
    return k


def direct_images(parts: Sequence[Permutation | None], degree: int) -> Permutation:
    """Element of a direct power acting on ``len(parts)`` copies of the domain;
    ``None`` stands for the identity."""
    out = []
    for i, p in enumerate(parts):
        base = np.arange(degree, dtype=np.int32) if p is None else p.images
        out.append(base + i * degree)
    return Permutation._wrap(np.concatenate(out))


def t_group(g: PermGroup | Sequence[Permutation]) -> PermGroup:
    """T(G) inside G x G x G, generated by (g, g, 1) and (1, g, g)."""
    gens = list(g.generators) if isinstance(g, PermGroup) else list(g)
    if not gens:
        return PermGroup((), 3 * (g.degree if isinstance(g, PermGroup) else 1))
    d = gens[0].degree
    out = [direct_images([x, x, None], d) for x in gens]
    out += [direct_images([None, x, x], d) for x in gens]
    return PermGroup(out, 3 * d)


# -- chi ------------------------------------------------------------------------

@dataclass
class InvariantCheck:
    name: str
    passed: bool
    detail: str = ""


def _enumerate(presentation: Presentation, max_cosets: int, what: str) -> CosetTable:
    table = todd_coxeter(presentation, (), max_cosets=max_cosets)
    if not table.complete:
        err = ResourceLimitError(
            f"{what}: coset enumeration exceeded {max_cosets} cosets "
            f"({table.total_defined} defined, {table.coset_count} live at abort)", max_cosets)
        err.record = {"max_cosets": max_cosets, "total_defined": table.total_defined,
                      "live_at_abort": table.coset_count}
        raise err
    return table


@dataclass
class ChiComplex:
    base: BaseGroup
    presentation: Presentation
    table: CosetTable
    chi: PermGroup
    gens: list[Permutation]
    arith: RegularArithmetic
    pi: GroupHom
    rho: GroupHom
    tau: GroupHom
    T: PermGroup
    embed_G: SubgroupHandle
    embed_Gphi: SubgroupHandle
    L: SubgroupHandle
    D: SubgroupHandle
    W: SubgroupHandle
    R: SubgroupHandle
    L1: SubgroupHandle
    L2: SubgroupHandle
    L12: SubgroupHandle
    invariants: list[InvariantCheck] = field(default_factory=list)
    _points: dict = field(default_factory=dict, repr=False)

    @property
    def name(self) -> str:
        return self.base.name

    @property
    def order(self) -> int:
        return self.table.coset_count

    def subgroup(self, name: str) -> SubgroupHandle:
        return getattr(self, name)

    def element_points(self) -> tuple[np.ndarray, np.ndarray]:
        """Points of x and x' for every element x of G, in BaseGroup order."""
        if "G" not in self._points:
            k = self.base.ngens
            self._points["G"] = np.array([self.arith.of_word(w) for w in self.base.words])
            self._points["Gphi"] = np.array(
                [self.arith.of_word(w.shifted(k)) for w in self.base.words])
        return self._points["G"], self._points["Gphi"]

    def generator_points(self, name: str) -> np.ndarray:
        return np.array([int(g.images[0]) for g in self.subgroup(name).generators],
                        dtype=np.int64)

    def contains_points(self, name: str, points) -> np.ndarray:
        """Membership of elements of chi, given as points, in a named subgroup."""
        sub = self.subgroup(name)
        points = np.atleast_1d(np.asarray(points, dtype=np.int64))
        if sub.is_trivial():
            return points == 0
        return sub.group.tree.mask[points]

    def all_invariants_hold(self) -> bool:
        return all(c.passed for c in self.invariants)


def realize_chi(entry: CatalogEntry | BaseGroup, max_cosets: int = DEFAULT_MAX_COSETS,
                cap: int = DEFAULT_ENUMERATION_CAP) -> ChiComplex:
    base = entry if isinstance(entry, BaseGroup) else BaseGroup.from_entry(entry, cap)
    pres = chi_presentation(base.entry, cap)
    table = _enumerate(chi_presentation(base.entry, cap, reduced=True), max_cosets,
                       f"chi({base.name})")
    gens = coset_action(table)
    n = table.coset_count
    chi = PermGroup(gens, n, semiregular=True)
    arith = RegularArithmetic(table)
    # the action is regular, so a relator holds iff it fixes coset 0
    for r in pres.relators:
        if arith.of_word(r) != 0:
            raise ConsistencyError(
                f"chi({base.name}) does not satisfy {r.format(pres.generator_names)}")
    k = base.ngens
    d = base.degree
    g_imgs = base.images

    G = base.group
    pi = GroupHom(chi, G, gens, g_imgs + g_imgs, "pi")
    pair_imgs = ([direct_images([x, None], d) for x in g_imgs]
                 + [direct_images([None, x], d) for x in g_imgs])
    rho = GroupHom(chi, PermGroup(pair_imgs, 2 * d), gens, pair_imgs, "rho")
    T = t_group(g_imgs)
    tau = GroupHom(chi, T, gens, [direct_images([x, x, None], d) for x in g_imgs]
                   + [direct_images([None, x, x], d) for x in g_imgs], "tau")
    for h in (pi, rho, tau):
        bad = h.check_well_defined(pres)
        if bad is not None:
            raise ConsistencyError(
                f"{h.name} does not kill relator {bad.format(pres.generator_names)}")

    embed_G = subgroup_closure(chi, gens[:k], check=False).with_label("G")
    embed_Gphi = subgroup_closure(chi, gens[k:], check=False).with_label("G^phi")
    L = kernel_of_hom(pi, "L")
    D = kernel_of_hom(rho, "D")
    W = kernel_of_hom(tau, "W")
    L1 = commutator_subgroup(L, embed_G).with_label("L1")
    L2 = commutator_subgroup(L, embed_Gphi).with_label("L2")
    L12 = commutator_subgroup(L1, L2).with_label("L12")
    R = commutator_subgroup(L1, embed_Gphi).with_label("R")

    c = ChiComplex(base, pres, table, chi, gens, arith, pi, rho, tau, T, embed_G, embed_Gphi,
                   L, D, W, R, L1, L2, L12)
    c.invariants = _chi_invariants(c)
    log.info("chi(%s): order %d, |L|=%d |D|=%d |W|=%d |R|=%d", base.name, n,
             L.order(), D.order(), W.order(), R.order())
    return c


def _commute(a: SubgroupHandle, b: SubgroupHandle) -> tuple[bool, str]:
    for x in a.generators:
        for y in b.generators:
            if not commutes(x, y, semiregular=True):
                return False, "generators do not commute"
    return True, ""


def _chi_invariants(c: ChiComplex) -> list[InvariantCheck]:
    out = []
    n, g = c.order, c.base.order
    ok, why = _commute(c.L, c.D)
    out.append(InvariantCheck("L and D commute", ok, why))
    LD = join(c.L, c.D)
    ok1, _ = _commute(c.W, c.L)
    ok2, _ = _commute(c.W, c.D)
    out.append(InvariantCheck("W centralizes LD", ok1 and ok2 and is_subgroup(c.W, LD)))
    out.append(InvariantCheck("R <= W", is_subgroup(c.R, c.W)))
    out.append(InvariantCheck("L12 <= R", is_subgroup(c.L12, c.R)))
    t = c.T.order()
    out.append(InvariantCheck("|chi|/|W| = |T(G)|", n == t * c.W.order(),
                              f"{n} / {c.W.order()} vs {t}"))
    out.append(InvariantCheck("|L| = |chi|/|G|", c.L.order() * g == n))
    out.append(InvariantCheck("|D| = |chi|/|G|^2", c.D.order() * g * g == n))
    out.append(InvariantCheck("|L||D|/|<L,D>| = |W|",
                              c.L.order() * c.D.order() == c.W.order() * LD.order()))
    # generator images under the canonical maps
    k = c.base.ngens
    pi_ok = all(c.pi.images[i] == c.base.images[i] for i in range(k))
    rho_ok = all(np.array_equal(c.rho.images[i].images[c.base.degree:],
                                np.arange(c.base.degree, 2 * c.base.degree))
                 for i in range(k))
    out.append(InvariantCheck("pi is the identity on G", pi_ok))
    out.append(InvariantCheck("rho(G) has trivial second coordinate", rho_ok))
    # L is generated by the elements x^-1 x'
    xs, xphis = c.element_points()
    gen_pts = c.arith.mul(c.arith.inv(xs), xphis)
    lg = subgroup_closure(c.chi, [c.arith.element(int(p)) for p in np.unique(gen_pts) if p],
                          check=False)
    out.append(InvariantCheck("L = <x^-1 x'>", same_subgroup(lg, c.L)))
    out.append(InvariantCheck("R is normal", is_normalized_by(c.R, c.chi.generators)))
    triples = r_from_triples(c)
    out.append(InvariantCheck("R = normal closure of generator triples",
                              same_subgroup(triples, c.R),
                              f"{triples.order()} vs {c.R.order()}"))
    return out


def r_from_triples(c: ChiComplex) -> SubgroupHandle:
    """Normal closure of [g, l, h'] over generators g, h of G and l of L."""
    k = c.base.ngens
    seeds = [comm_factors(g, l, h) for g in c.gens[:k] for l in c.L.generators for h in c.gens[k:]]
    return normal_closure(c.chi, seeds, check=False)


# -- nu -------------------------------------------------------------------------

@dataclass
class NuComplex:
    base: BaseGroup
    presentation: Presentation
    triple_scope: str
    table: CosetTable
    nu: PermGroup
    gens: list[Permutation]
    arith: RegularArithmetic
    embed_G: SubgroupHandle
    embed_Gphi: SubgroupHandle
    Delta: SubgroupHandle
    Upsilon1: SubgroupHandle
    Upsilon2: SubgroupHandle
    Upsilon3: SubgroupHandle
    invariants: list[InvariantCheck] = field(default_factory=list)

    @property
    def order(self) -> int:
        return self.table.coset_count


def default_triple_scope(order: int) -> str:
    return "all_elements" if order <= NU_ALL_ELEMENTS_MAX_ORDER else "generators"


def realize_nu(entry: CatalogEntry | BaseGroup, triple_scope: str | None = None,
               max_cosets: int = DEFAULT_MAX_COSETS,
               cap: int = DEFAULT_ENUMERATION_CAP) -> NuComplex:
    base = entry if isinstance(entry, BaseGroup) else BaseGroup.from_entry(entry, cap)
    scope = triple_scope or default_triple_scope(base.order)
    pres = nu_presentation(base.entry, scope, cap=cap)
    table = _enumerate(pres, max_cosets, f"nu({base.name})")
    gens = coset_action(table)
    n = table.coset_count
    nu = PermGroup(gens, n, semiregular=True)
    arith = RegularArithmetic(table)
    k = base.ngens
    embed_G = subgroup_closure(nu, gens[:k], check=False).with_label("G")
    embed_Gphi = subgroup_closure(nu, gens[k:], check=False).with_label("G^phi")

    xs = np.array([arith.of_word(w) for w in base.words])
    xps = np.array([arith.of_word(w.shifted(k)) for w in base.words])
    m = len(xs)

    def closure(points, label):
        pts = [int(p) for p in np.unique(points) if p]
        return subgroup_closure(nu, [arith.element(p) for p in pts], check=False).with_label(label)

    delta = closure(arith.comm(xs, xps), "Delta")
    upsilon1 = commutator_subgroup(embed_G, embed_Gphi).with_label("Upsilon1")
    hh = np.repeat(np.arange(m), m)
    gg = np.tile(np.arange(m), m)
    # [h, g][g, h']  and  [h', g'][g, h']
    u2 = arith.mul(arith.comm(xs[hh], xs[gg]), arith.comm(xs[gg], xps[hh]))
    u3 = arith.mul(arith.comm(xps[hh], xps[gg]), arith.comm(xs[gg], xps[hh]))
    upsilon2 = closure(u2, "Upsilon2")
    upsilon3 = closure(u3, "Upsilon3")
    c = NuComplex(base, pres, scope, table, nu, gens, arith, embed_G, embed_Gphi,
                  delta, upsilon1, upsilon2, upsilon3)
    u1_direct = closure(arith.comm(xs[hh], xps[gg]), "Upsilon1'")
    c.invariants = [
        InvariantCheck("Delta is normal", is_normalized_by(delta, nu.generators)),
        InvariantCheck("Upsilon1 = [G, G']", same_subgroup(upsilon1, u1_direct)),
    ]
    return c


def nu_delta_index(entry: CatalogEntry | BaseGroup, triple_scope: str | None = None,
                   max_cosets: int = DEFAULT_MAX_COSETS,
                   cap: int = DEFAULT_ENUMERATION_CAP) -> int:
    """``|nu : Delta|`` by enumerating the cosets of ``<[g, g'] : g in G>`` in nu.

    This needs only the quotient to fit in the table, so it reaches groups
    whose nu is far beyond the coset cap.
    """
    base = entry if isinstance(entry, BaseGroup) else BaseGroup.from_entry(entry, cap)
    scope = triple_scope or default_triple_scope(base.order)
    pres = nu_presentation(base.entry, scope, cap=cap)
    k = base.ngens
    sub = [commutator_word(w, w.shifted(k)) for w in base.words if w.letters]
    table = todd_coxeter(pres, sub, max_cosets=max_cosets)
    if not table.complete:
        err = ResourceLimitError(
            f"nu({base.name}) over Delta: coset enumeration exceeded {max_cosets} cosets", max_cosets)
        err.record = {"max_cosets": max_cosets, "total_defined": table.total_defined,
                      "live_at_abort": table.coset_count}
        raise err
    return table.coset_count


@dataclass
class NuChiConsistency:
    group: str
    well_defined: bool
    surjective: bool
    nu_order: int
    delta_order: int
    chi_order: int
    r_order: int
    witness: str | None = None

    @property
    def orders_agree(self) -> bool:
        return self.nu_order * self.r_order == self.chi_order * self.delta_order

    @property
    def passed(self) -> bool:
        return self.well_defined and self.surjective and self.orders_agree


def first_relator_outside_R(c: ChiComplex, presentation: Presentation) -> str | None:
    """A relator of ``presentation`` whose value in chi lies outside R, if any."""
    mask = c.R.group.tree.mask if not c.R.is_trivial() else None
    for r in presentation.relators:
        p = c.arith.of_word(r)
        inside = p == 0 if mask is None else bool(mask[p])
        if not inside:
            return r.format(presentation.generator_names)
    return None


def nu_chi_consistency(c: ChiComplex, nu: NuComplex) -> NuChiConsistency:
    """Check that x -> xR, x' -> x'R induces nu/Delta = chi/R."""
    if c.presentation.generator_names != nu.presentation.generator_names:
        raise StructuralError("chi and nu presentations use different generators")
    witness = first_relator_outside_R(c, nu.presentation)
    # the images are the generators of chi, so the induced map onto chi/R is onto
    surjective = len(c.gens) == len(nu.gens)
    return NuChiConsistency(c.name, witness is None, surjective, nu.order, nu.Delta.order(),
                            c.order, c.R.order(), witness)


def quotient_order(a: SubgroupHandle, b: SubgroupHandle) -> int:
    if a.order() % b.order():
        raise PreconditionError("orders do not divide")
    return a.order() // b.order()


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, int(v))
    return out
