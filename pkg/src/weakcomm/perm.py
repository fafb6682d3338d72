"""Permutations and permutation groups with stabilizer chains.

Permutations act on the right: ``(a * b)[x] == b[a[x]]``.  Conjugation and
commutators follow the same convention, ``x ** y == y^-1 x y`` and
``comm(x, y) == x^-1 y^-1 x y``, with longer commutators left normed.

Two chain flavours exist.  Small groups get a deterministic Schreier-Sims
chain with explicit transversals.  Groups flagged *semiregular* (the regular
representation of a finitely presented group and all of its subgroups) need
a single level, because every point stabilizer is trivial; their order is an
orbit length and membership of an ambient element is a single lookup.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Iterator, Sequence

import numpy as np
from numba import njit

from .errors import ContainmentError, PreconditionError, ResourceLimitError, StructuralError

DEFAULT_ENUMERATION_CAP = 10**6


@njit(cache=True)
def _cycle_lengths_lcm(images):
    n = images.shape[0]
    seen = np.zeros(n, dtype=np.bool_)
    result = 1
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = images[x]
            length += 1
        a, b = result, length
        while b:
            a, b = b, a % b
        result = result // a * length
    return result


class Permutation:
    """A bijection of ``{0, ..., degree-1}``, stored as an int32 image array."""

    __slots__ = ("images", "_hash", "_inverse")

    def __init__(self, images: Iterable[int], *, check: bool = True):
        arr = np.array(images, dtype=np.int32)
        if arr.ndim != 1:
            raise StructuralError("permutation images must be one-dimensional")
        if check:
            n = arr.shape[0]
            if n and (arr.min() < 0 or arr.max() >= n or np.unique(arr).shape[0] != n):
                raise StructuralError("images do not form a bijection")
        arr.flags.writeable = False
        self.images = arr
        self._hash = None
        self._inverse = None

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "Permutation":
        p = cls.__new__(cls)
        if arr.dtype != np.int32:
            arr = arr.astype(np.int32)
        arr.flags.writeable = False
        p.images = arr
        p._hash = None
        p._inverse = None
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._wrap(np.arange(degree, dtype=np.int32))

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]], degree: int | None = None) -> "Permutation":
        top = max((max(c) for c in cycles if len(c)), default=-1) + 1
        if degree is None:
            degree = top
        elif top > degree:
            raise StructuralError(f"cycle point {top - 1} outside degree {degree}")
        arr = np.arange(degree, dtype=np.int32)
        touched = set()
        for cyc in cycles:
            if len(set(cyc)) != len(cyc) or touched & set(cyc):
                raise StructuralError("cycles must be disjoint")
            touched |= set(cyc)
            for i, x in enumerate(cyc):
                arr[x] = cyc[(i + 1) % len(cyc)]
        return cls._wrap(arr)

    @classmethod
    def parse(cls, text: str, degree: int | None = None, *, one_based: bool = False) -> "Permutation":
        """Parse cycle notation such as ``"(0 1)(2 3 4)"`` or ``"()"``."""
        stripped = text.strip()
        if not re.fullmatch(r"(\(\s*(\d+(\s*,?\s*\d+)*)?\s*\)\s*)+", stripped):
            raise StructuralError(f"cannot parse permutation {text!r}")
        cycles = []
        for body in re.findall(r"\(([^)]*)\)", stripped):
            pts = [int(t) for t in re.split(r"[\s,]+", body.strip()) if t]
            if one_based:
                if any(x < 1 for x in pts):
                    raise StructuralError("one-based cycle notation cannot contain 0")
                pts = [x - 1 for x in pts]
            if len(pts) > 1:
                cycles.append(pts)
        return cls.from_cycles(cycles, degree)

    @property
    def degree(self) -> int:
        return int(self.images.shape[0])

    def __len__(self):
        return self.degree

    def __getitem__(self, x):
        return int(self.images[x])

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.images.shape != self.images.shape:
            raise StructuralError(f"degree mismatch: {self.degree} vs {other.degree}")
        return Permutation._wrap(other.images[self.images])

    def inverse(self) -> "Permutation":
        if self._inverse is None:
            inv = np.empty_like(self.images)
            inv[self.images] = np.arange(self.degree, dtype=np.int32)
            p = Permutation._wrap(inv)
            p._inverse = self
            self._inverse = p
        return self._inverse

    __invert__ = inverse

    def __pow__(self, k):
        if isinstance(k, Permutation):
            return k.inverse() * self * k
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return np.array_equal(self.images, other.images)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.images.tobytes())
        return self._hash

    def key(self) -> bytes:
        return self.images.tobytes()

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(self.degree, dtype=np.int32)))

    def order(self) -> int:
        return int(_cycle_lengths_lcm(self.images))

    def first_moved(self) -> int | None:
        moved = np.flatnonzero(self.images != np.arange(self.degree, dtype=np.int32))
        return int(moved[0]) if moved.size else None

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = int(self.images[i])
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = int(self.images[j])
            out.append(tuple(cyc))
        return out

    def __repr__(self):
        if self.degree > 64:
            return f"<Permutation of degree {self.degree}>"
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles())
        return f"Permutation({body or '()'}, degree={self.degree})"


def identity(degree: int) -> Permutation:
    return Permutation.identity(degree)


def compose(a: Permutation, b: Permutation) -> Permutation:
    """``a`` followed by ``b``."""
    return a * b


def conj(x: Permutation, y: Permutation) -> Permutation:
    return y.inverse() * x * y


def comm(*xs: Permutation) -> Permutation:
    """Left-normed commutator ``[x1, x2, ..., xn]``."""
    if len(xs) < 2:
        raise StructuralError("a commutator needs at least two entries")
    acc = xs[0]
    for y in xs[1:]:
        acc = acc.inverse() * y.inverse() * acc * y
    return acc


def element_order(p: Permutation) -> int:
    return p.order()


def _common_degree(gens: Sequence[Permutation], degree: int | None) -> int:
    degrees = {g.degree for g in gens}
    if degree is not None:
        degrees.add(degree)
    if len(degrees) > 1:
        raise StructuralError(f"generators have different degrees: {sorted(degrees)}")
    if not degrees:
        return 1
    return degrees.pop()


class _OrbitTree:
    """Breadth-first spanning tree of the orbit of a point."""

    def __init__(self, gens: Sequence[Permutation], degree: int, root: int = 0):
        self.root = root
        self.gens = tuple(gens)
        self.degree = degree
        parent = np.full(degree, -1, dtype=np.int32)
        via = np.full(degree, -1, dtype=np.int32)
        parent[root] = root
        frontier = np.array([root], dtype=np.int32)
        layers = [frontier]
        while frontier.size:
            fresh_layer = []
            for gi, g in enumerate(self.gens):
                img = g.images[frontier]
                fresh = parent[img] < 0
                if not fresh.any():
                    continue
                img = img[fresh]
                src = frontier[fresh]
                img, first = np.unique(img, return_index=True)
                parent[img] = src[first]
                via[img] = gi
                fresh_layer.append(img)
            frontier = np.concatenate(fresh_layer) if fresh_layer else np.zeros(0, np.int32)
            if frontier.size:
                layers.append(frontier)
        self.parent = parent
        self.via = via
        self.layers = layers
        self.mask = parent >= 0
        self.size = int(self.mask.sum())

    @property
    def stack(self) -> np.ndarray:
        """Generator images as one array; built on demand, since it is large."""
        if not self.gens:
            return np.zeros((0, self.degree), np.int32)
        return np.stack([g.images for g in self.gens])

    def points(self) -> np.ndarray:
        return np.concatenate(self.layers)

    def word(self, point: int) -> list[int]:
        """Generator indices whose product maps the root to ``point``."""
        if self.parent[point] < 0:
            raise ContainmentError(f"point {point} is outside the orbit")
        out = []
        while point != self.root:
            out.append(int(self.via[point]))
            point = int(self.parent[point])
        out.reverse()
        return out

    def word_matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """Rows of generator letters (padded with -1), one per orbit point."""
        pts = self.points()
        depth = len(self.layers) - 1
        row_of = np.full(self.parent.shape[0], -1, dtype=np.int64)
        row_of[pts] = np.arange(pts.shape[0])
        words = np.full((pts.shape[0], max(depth, 1)), -1, dtype=np.int32)
        for d, layer in enumerate(self.layers[1:], start=1):
            rows = row_of[layer]
            words[rows] = words[row_of[self.parent[layer]]]
            words[rows, d - 1] = self.via[layer]
        return pts, words


@dataclass
class _Level:
    point: int
    transversal: dict = field(default_factory=dict)


class PermGroup:
    """A permutation group given by generators, with a lazily built chain.

    ``semiregular=True`` asserts that every point stabilizer is trivial,
    which holds for the regular representation of a group and all of its
    subgroups.  The flag is never inferred.
    """

    def __init__(self, generators: Sequence[Permutation], degree: int | None = None,
                 *, semiregular: bool = False, base_prefix: Sequence[int] = ()):
        self.degree = _common_degree(generators, degree)
        self.generators = tuple(g for g in generators if not g.is_identity())
        self.semiregular = semiregular
        self.base_prefix = tuple(int(b) for b in base_prefix)
        self._tree = None
        self._levels = None
        self._strong = None

    def __repr__(self):
        kind = "semiregular " if self.semiregular else ""
        return f"<{kind}PermGroup degree={self.degree} gens={len(self.generators)}>"

    # -- chain construction -------------------------------------------------

    @property
    def tree(self) -> _OrbitTree:
        if not self.semiregular:
            raise PreconditionError("orbit tree is only the full chain for semiregular groups")
        if self._tree is None:
            self._tree = _OrbitTree(self.generators, self.degree)
        return self._tree

    def _chain(self):
        if self._levels is None:
            self._schreier_sims()
        return self._levels

    def _orbit_transversal(self, point, gens):
        ident = Permutation.identity(self.degree)
        trans = {point: (ident, ident)}
        queue = [point]
        for x in queue:
            u = trans[x][0]
            for s in gens:
                y = int(s.images[x])
                if y not in trans:
                    v = u * s
                    trans[y] = (v, v.inverse())
                    queue.append(y)
        return trans

    def _level_gens(self, i):
        base = [lvl.point for lvl in self._levels[:i]]
        if not base:
            return list(self._strong)
        idx = np.array(base)
        return [s for s in self._strong if np.array_equal(s.images[idx], idx)]

    def _sift(self, g, start=0):
        for j in range(start, len(self._levels)):
            lvl = self._levels[j]
            b = int(g.images[lvl.point])
            entry = lvl.transversal.get(b)
            if entry is None:
                return g, j
            g = g * entry[1]
        return g, len(self._levels)

    def _schreier_sims(self):
        # prefix points come first even when their orbits are trivial
        self._levels = [_Level(b) for b in self.base_prefix]
        self._strong = []
        for g in self.generators:
            fixed = all(g.images[lvl.point] == lvl.point for lvl in self._levels)
            if fixed:
                self._levels.append(_Level(g.first_moved()))
            self._strong.append(g)
        for i in range(len(self._levels)):
            self._levels[i].transversal = self._orbit_transversal(
                self._levels[i].point, self._level_gens(i))
        i = len(self._levels) - 1
        while i >= 0:
            lvl = self._levels[i]
            gens = self._level_gens(i)
            restart = None
            for b, (u, _) in list(lvl.transversal.items()):
                for s in gens:
                    h = u * s * lvl.transversal[int(s.images[b])][1]
                    if h.is_identity():
                        continue
                    r, j = self._sift(h, i + 1)
                    if r.is_identity():
                        continue
                    if j == len(self._levels):
                        self._levels.append(_Level(r.first_moved()))
                    self._strong.append(r)
                    for m in range(i + 1, j + 1):
                        self._levels[m].transversal = self._orbit_transversal(
                            self._levels[m].point, self._level_gens(m))
                    restart = j
                    break
                if restart is not None:
                    break
            i = restart if restart is not None else i - 1

    # -- queries --------------------------------------------------------------

    @property
    def base(self) -> list[int]:
        if self.semiregular:
            return [0] if self.generators else []
        return [lvl.point for lvl in self._chain()]

    @property
    def strong_generators(self) -> list[Permutation]:
        if self.semiregular:
            return list(self.generators)
        self._chain()
        return list(self._strong)

    def transversal_sizes(self) -> list[int]:
        if self.semiregular:
            return [self.tree.size]
        return [len(lvl.transversal) for lvl in self._chain()]

    def order(self) -> int:
        return math.prod(self.transversal_sizes())

    def element_at(self, point: int) -> Permutation:
        """For semiregular groups: the unique element mapping 0 to ``point``."""
        g = Permutation.identity(self.degree)
        for letter in self.tree.word(point):
            g = g * self.generators[letter]
        return g

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise StructuralError(f"degree mismatch: {p.degree} vs {self.degree}")
        if self.semiregular:
            if not self.tree.mask[p.images[0]]:
                return False
            return self.element_at(int(p.images[0])) == p
        levels = self._chain()
        r, j = self._sift(p)
        return j == len(levels) and r.is_identity()

    __contains__ = contains

    def contains_ambient_element(self, p: Permutation) -> bool:
        """Membership test for ``p`` already known to lie in a regular overgroup.

        For semiregular groups this is a single lookup; otherwise it is the
        ordinary sift.
        """
        if self.semiregular:
            return bool(self.tree.mask[p.images[0]])
        return self.contains(p)

    def is_trivial(self) -> bool:
        return not self.generators

    def extended(self, extra: Sequence[Permutation]) -> "PermGroup":
        return PermGroup(list(self.generators) + list(extra), self.degree,
                         semiregular=self.semiregular, base_prefix=self.base_prefix)

    def stabilizer_generators(self, depth: int) -> list[Permutation]:
        """Strong generators fixing the first ``depth`` base points."""
        self._chain()
        return self._level_gens(depth)

    def elements(self, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[Permutation]:
        """Every element exactly once."""
        n = self.order()
        if n > cap:
            raise ResourceLimitError(f"group of order {n} exceeds enumeration cap {cap}", cap)
        if self.semiregular:
            tree = self.tree
            current = {tree.root: Permutation.identity(self.degree)}
            yield current[tree.root]
            for layer in tree.layers[1:]:
                nxt = {}
                for x in layer.tolist():
                    nxt[x] = current[int(tree.parent[x])] * self.generators[int(tree.via[x])]
                    yield nxt[x]
                current = nxt
            return
        levels = self._chain()

        def rec(j):
            if j < 0:
                yield Permutation.identity(self.degree)
                return
            for g in rec(j - 1):
                for u, _ in levels[j].transversal.values():
                    yield u * g
        yield from rec(len(levels) - 1)

    def power_orders(self, target_mask: np.ndarray | None = None,
                     cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
        """For each element x, the least k >= 1 with x^k in the target.

        Only for semiregular groups.  The target is a boolean mask over
        points standing for a subgroup of the same regular overgroup;
        ``None`` means the trivial subgroup, giving plain element orders.
        Each element is traced along its tree word, so no element is ever
        materialized as a full permutation.
        """
        if not self.semiregular:
            raise PreconditionError("power_orders needs a semiregular group")
        tree = self.tree
        if tree.size > cap:
            raise ResourceLimitError(
                f"group of order {tree.size} exceeds enumeration cap {cap}", cap)
        if target_mask is None:
            target_mask = np.zeros(self.degree, dtype=bool)
            target_mask[0] = True
        _, words = tree.word_matrix()
        n = words.shape[0]
        result = np.zeros(n, dtype=np.int64)
        todo = np.arange(n)
        cur = np.zeros(n, dtype=np.int32)
        stack = tree.stack
        k = 0
        while todo.size:
            k += 1
            if k > tree.size:
                raise StructuralError("power iteration did not close; target is not a subgroup")
            w = words[todo]
            for pos in range(w.shape[1]):
                letters = w[:, pos]
                live = letters >= 0
                if live.all():
                    cur = stack[letters, cur]
                elif live.any():
                    cur[live] = stack[letters[live], cur[live]]
            hit = target_mask[cur]
            result[todo[hit]] = k
            todo = todo[~hit]
            cur = cur[~hit]
        return result

    def random_source(self, rng: np.random.Generator) -> "ProductReplacement":
        return ProductReplacement(self.generators, self.degree, rng)


class ProductReplacement:
    """Product-replacement random elements, reproducible from the generator."""

    def __init__(self, gens: Sequence[Permutation], degree: int, rng: np.random.Generator,
                 slots: int = 10, burn_in: int = 50):
        self.rng = rng
        self.degree = degree
        gens = list(gens) or [Permutation.identity(degree)]
        n = max(slots, len(gens))
        self.state = [gens[i % len(gens)] for i in range(n)]
        self.acc = Permutation.identity(degree)
        for _ in range(burn_in):
            self.next()

    def next(self) -> Permutation:
        n = len(self.state)
        i = int(self.rng.integers(n))
        j = int(self.rng.integers(n - 1))
        if j >= i:
            j += 1
        other = self.state[j] if self.rng.integers(2) else self.state[j].inverse()
        if self.rng.integers(2):
            self.state[i] = self.state[i] * other
        else:
            self.state[i] = other * self.state[i]
        self.acc = self.acc * self.state[i]
        return self.acc


def build_group(gens: Sequence[Permutation], degree: int | None = None) -> PermGroup:
    return PermGroup(gens, degree)


def membership(g: PermGroup, p: Permutation) -> bool:
    return g.contains(p)


class SubgroupHandle:
    """A subgroup of a fixed ambient group, with its own chain."""

    def __init__(self, ambient: PermGroup, generators: Sequence[Permutation],
                 group: PermGroup | None = None, label: str | None = None):
        self.ambient = ambient
        if group is None:
            group = PermGroup(generators, ambient.degree,
                              semiregular=ambient.semiregular)
        self.group = group
        self.label = label

    @property
    def generators(self) -> tuple[Permutation, ...]:
        return self.group.generators

    @property
    def degree(self) -> int:
        return self.ambient.degree

    def order(self) -> int:
        return self.group.order()

    def contains(self, p: Permutation) -> bool:
        """Membership of an element of the ambient group."""
        return self.group.contains_ambient_element(p)

    __contains__ = contains

    def is_trivial(self) -> bool:
        return self.group.is_trivial()

    def with_label(self, label: str) -> "SubgroupHandle":
        return SubgroupHandle(self.ambient, (), self.group, label)

    def __repr__(self):
        name = self.label or "subgroup"
        return f"<{name} of order {self.order()}>"


def _as_group(g) -> PermGroup:
    return g.group if isinstance(g, SubgroupHandle) else g


def _grow(group: PermGroup, candidates: Iterable[Permutation]) -> PermGroup:
    """Add the candidates that are not already members, one at a time."""
    for c in candidates:
        if c.is_identity() or group.contains_ambient_element(c):
            continue
        group = group.extended([c])
    return group


def trivial_subgroup(ambient: PermGroup) -> SubgroupHandle:
    return SubgroupHandle(ambient, ())


def whole_group(ambient: PermGroup) -> SubgroupHandle:
    return SubgroupHandle(ambient, (), ambient)


def _check_degree(ambient: PermGroup, gens: Sequence[Permutation]):
    for g in gens:
        if g.degree != ambient.degree:
            raise StructuralError(f"degree mismatch: {g.degree} vs {ambient.degree}")


def subgroup_closure(ambient: PermGroup, gens: Sequence[Permutation],
                     *, check: bool = True) -> SubgroupHandle:
    _check_degree(ambient, gens)
    if check:
        for g in gens:
            if not ambient.contains(g):
                raise ContainmentError("generator outside the ambient group")
    base = PermGroup((), ambient.degree, semiregular=ambient.semiregular)
    return SubgroupHandle(ambient, (), _grow(base, gens))


def point_after(point: int, *perms: Permutation) -> int:
    """Image of ``point`` under the product of ``perms`` (left to right)."""
    for p in perms:
        point = int(p.images[point])
    return point


def _product(*perms: Permutation) -> Permutation:
    return reduce(lambda a, b: a * b, perms)


def _conj_factors(h, c):
    return (c.inverse(), h, c)


def _comm_factors(x, y):
    return (x.inverse(), y.inverse(), x, y)


def comm_factors(*xs: Permutation) -> tuple:
    """Left-normed commutator as a tuple of factors, nothing multiplied out."""
    acc = (xs[0],)
    for y in xs[1:]:
        inv = tuple(p.inverse() for p in reversed(acc))
        acc = inv + (y.inverse(),) + acc + (y,)
    return acc


def _member_lazy(group: PermGroup, factors) -> tuple[bool, Permutation | None]:
    """Is the product of ``factors`` in ``group``?  The product is only built
    when it has to be (always for non-semiregular groups)."""
    if group.semiregular:
        pt = point_after(0, *factors)
        if pt == 0 or (group.generators and group.tree.mask[pt]):
            return True, None
        return False, _product(*factors)
    x = _product(*factors)
    return (x.is_identity() or group.contains(x)), x


def _normal_closure_in(conjugators: Sequence[Permutation], seeds: Iterable,
                       start: PermGroup) -> PermGroup:
    """Close ``start`` plus the seeds under conjugation by ``conjugators``.

    Seeds are either permutations or tuples of factors whose product is
    the seed.
    """
    group = start
    queue = []
    for s in seeds:
        factors = s if isinstance(s, tuple) else (s,)
        inside, x = _member_lazy(group, factors)
        if inside:
            continue
        group = group.extended([x])
        queue.append(x)
    queue.extend(g for g in start.generators)
    while queue:
        h = queue.pop()
        for c in conjugators:
            inside, x = _member_lazy(group, _conj_factors(h, c))
            if not inside:
                group = group.extended([x])
                queue.append(x)
    return group


def normal_closure(ambient: PermGroup, gens: Sequence,
                   *, check: bool = True) -> SubgroupHandle:
    """Smallest subgroup containing ``gens`` normalized by ``ambient``.

    With ``check=False`` the entries may also be tuples of factors (see
    :func:`comm_factors`); products are then only formed when needed.
    """
    if check:
        _check_degree(ambient, gens)
        for g in gens:
            if not ambient.contains(g):
                raise ContainmentError("generator outside the ambient group")
    start = PermGroup((), ambient.degree, semiregular=ambient.semiregular)
    return SubgroupHandle(ambient, (), _normal_closure_in(ambient.generators, gens, start))


def is_normalized_by(sub, gens: Sequence[Permutation]) -> bool:
    group = _as_group(sub)
    return all(_member_lazy(group, _conj_factors(h, c))[0]
               for h in group.generators for c in gens)


def commutes(x: Permutation, y: Permutation, semiregular: bool = False) -> bool:
    """``xy == yx``; in a semiregular group comparing the image of 0 suffices."""
    if semiregular:
        return point_after(0, x, y) == point_after(0, y, x)
    return x * y == y * x


def _same_ambient(a: SubgroupHandle, b: SubgroupHandle):
    if a.ambient is not b.ambient:
        raise StructuralError("subgroups live in different ambient groups")


def commutator_subgroup(a: SubgroupHandle, b: SubgroupHandle) -> SubgroupHandle:
    """``[A, B]``: normal closure in ``<A, B>`` of the generator commutators."""
    _same_ambient(a, b)
    seeds = [_comm_factors(x, y) for x in a.generators for y in b.generators]
    conjugators = list(a.generators) + list(b.generators)
    start = PermGroup((), a.degree, semiregular=a.ambient.semiregular)
    return SubgroupHandle(a.ambient, (), _normal_closure_in(conjugators, seeds, start))


def iterated_commutator(a: SubgroupHandle, b: SubgroupHandle, n: int) -> SubgroupHandle:
    """``[A, _n B] = [A, B, ..., B]`` with ``n`` copies of ``B``."""
    if n < 1:
        raise PreconditionError("n must be positive")
    out = a
    for _ in range(n):
        out = commutator_subgroup(out, b)
    return out


def join(*parts: SubgroupHandle) -> SubgroupHandle:
    """The subgroup generated by the union of the parts."""
    for p in parts[1:]:
        _same_ambient(parts[0], p)
    ambient = parts[0].ambient
    group = parts[0].group
    for p in parts[1:]:
        group = _grow(group, p.generators)
    return SubgroupHandle(ambient, (), group)


def is_subgroup(a: SubgroupHandle, b: SubgroupHandle) -> bool:
    """``A <= B`` via generator membership."""
    return all(b.contains(x) for x in a.generators)


def same_subgroup(a: SubgroupHandle, b: SubgroupHandle) -> bool:
    return a.order() == b.order() and is_subgroup(a, b)


def enumerate_elements(g, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[Permutation]:
    return _as_group(g).elements(cap)


def group_exponent(g, cap: int = DEFAULT_ENUMERATION_CAP) -> int:
    group = _as_group(g)
    if group.is_trivial():
        return 1
    if group.semiregular:
        orders = group.power_orders(cap=cap)
        return int(reduce(math.lcm, np.unique(orders).tolist(), 1))
    return reduce(math.lcm, (x.order() for x in group.elements(cap)), 1)


@dataclass
class QuotientInfo:
    order: int
    exponent: int
    abelian: bool
    # prime -> list of counts of cosets whose order divides p, p^2, ...
    order_counts: dict = field(default_factory=dict)
    invariants: list | None = None


def prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def invariants_from_counts(order: int, order_counts: dict) -> list[int]:
    """Abelian invariants (prime powers) from counts of elements of order dividing p^k.

    For an abelian group with p-primary part ``prod Z/p^e_i`` the number of
    elements killed by ``p^k`` is ``p^(sum_i min(k, e_i))``; differencing the
    exponents recovers how many factors have ``e_i >= k``.
    """
    result = []
    for p, counts in sorted(order_counts.items()):
        logs = [0] + [round(math.log(c, p)) for c in counts]
        at_least = [logs[k] - logs[k - 1] for k in range(1, len(logs))] + [0]
        for k in range(1, len(logs)):
            result.extend([p**k] * (at_least[k - 1] - at_least[k]))
    if math.prod(result) != order:
        raise StructuralError("order statistics inconsistent with an abelian group")
    return sorted(result)


def quotient_order_and_exponent(n: SubgroupHandle, m: SubgroupHandle,
                                cap: int = DEFAULT_ENUMERATION_CAP,
                                *, check_normal: bool = True) -> QuotientInfo:
    _same_ambient(n, m)
    if not is_subgroup(m, n):
        raise PreconditionError("the divisor is not contained in the dividend")
    if check_normal and not is_normalized_by(m, n.generators):
        raise PreconditionError("the divisor is not normal in the dividend")
    order = n.order() // m.order()
    abelian = all(m.contains(comm(x, y)) for x in n.generators for y in n.generators)
    if n.group.semiregular:
        mask = m.group.tree.mask if not m.is_trivial() else None
        if mask is None:
            orders = n.group.power_orders(cap=cap)
        else:
            orders = n.group.power_orders(mask, cap=cap)
    else:
        orders = []
        for x in n.group.elements(cap):
            k, y = 1, x
            while not m.contains(y):
                y = y * x
                k += 1
            orders.append(k)
        orders = np.array(orders, dtype=np.int64)
    uniq = np.unique(orders).tolist()
    exponent = int(reduce(math.lcm, uniq, 1))
    info = QuotientInfo(order, exponent, abelian)
    if abelian:
        msize = m.order()
        for p in prime_factors(order):
            top = 0
            while exponent % p ** (top + 1) == 0:
                top += 1
            info.order_counts[p] = [int(np.count_nonzero((p**k) % orders == 0)) // msize
                                    for k in range(1, top + 1)]
        info.invariants = invariants_from_counts(order, info.order_counts)
    return info
