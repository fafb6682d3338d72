"""Words, finite presentations and Todd-Coxeter coset enumeration."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _enum
from .errors import ParseError, ResourceLimitError, StructuralError, TableStateError
from .perm import DEFAULT_ENUMERATION_CAP, Permutation


@dataclass(frozen=True)
class Word:
    """A product of signed generators, ``((index, +1 | -1), ...)``."""

    letters: tuple = ()

    @classmethod
    def gen(cls, index: int, exponent: int = 1) -> "Word":
        if exponent == 0:
            return cls()
        sign = 1 if exponent > 0 else -1
        return cls(((index, sign),) * abs(exponent))

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters).reduced()

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        return Word(self.letters * k).reduced()

    def reduced(self) -> "Word":
        out = []
        for g, e in self.letters:
            if out and out[-1] == (g, -e):
                out.pop()
            else:
                out.append((g, e))
        return Word(tuple(out))

    def is_reduced(self) -> bool:
        return self.reduced() == self

    def conjugate(self, by: "Word") -> "Word":
        return (by.inverse() * self * by).reduced()

    def shifted(self, offset: int) -> "Word":
        """Same word with every generator index moved by ``offset``."""
        return Word(tuple((g + offset, e) for g, e in self.letters))

    def codes(self) -> list[int]:
        """Column codes: ``2*i`` for a generator, ``2*i + 1`` for its inverse."""
        return [2 * g + (0 if e > 0 else 1) for g, e in self.letters]

    def max_generator(self) -> int:
        return max((g for g, _ in self.letters), default=-1)

    def format(self, names: Sequence[str]) -> str:
        if not self.letters:
            return "1"
        parts = []
        i = 0
        while i < len(self.letters):
            g, e = self.letters[i]
            j = i
            while j < len(self.letters) and self.letters[j] == (g, e):
                j += 1
            k = (j - i) * e
            parts.append(names[g] if k == 1 else f"{names[g]}^{k}")
            i = j
        return "*".join(parts)


def commutator_word(*ws: Word) -> Word:
    acc = ws[0]
    for w in ws[1:]:
        acc = (acc.inverse() * w.inverse() * acc * w).reduced()
    return acc


@dataclass
class Presentation:
    generator_names: list[str]
    relators: list[Word] = field(default_factory=list)

    def __post_init__(self):
        if len(set(self.generator_names)) != len(self.generator_names):
            raise StructuralError("generator names must be distinct")
        for r in self.relators:
            if r.max_generator() >= len(self.generator_names):
                raise StructuralError("relator uses a generator index out of range")

    @property
    def ngens(self) -> int:
        return len(self.generator_names)

    def parse(self, text: str) -> Word:
        return parse_word(text, self.generator_names)

    def __str__(self):
        rels = ", ".join(r.format(self.generator_names) for r in self.relators)
        return f"< {', '.join(self.generator_names)} | {rels} >"


# -- word grammar -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9']*)|(?P<op>[-*^(),\[\]]))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r} in {text!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.index = {n: k for k, n in enumerate(names)}

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or 'a token'} in {self.text!r}")
        self.i += 1
        return tok

    def word_list(self) -> list[Word]:
        out = [self.expr()]
        while self.peek()[1] == ",":
            self.take(",")
            out.append(self.expr())
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}")
        return out

    def expr(self) -> Word:
        w = self.power()
        while self.peek()[1] == "*":
            self.take("*")
            w = w * self.power()
        return w

    def power(self) -> Word:
        w = self.atom()
        while self.peek()[1] == "^":
            self.take("^")
            w = w ** self.exponent()
        return w

    def exponent(self) -> int:
        kind, val = self.peek()
        if val == "(":
            self.take("(")
            k = self.exponent()
            self.take(")")
            return k
        sign = 1
        if val == "-":
            self.take("-")
            sign = -1
        kind, val = self.take()
        if kind != "int":
            raise ParseError(f"exponent must be an integer in {self.text!r}")
        return sign * int(val)

    def atom(self) -> Word:
        kind, val = self.take()
        if kind == "name":
            if val not in self.index:
                raise ParseError(f"unknown generator {val!r} in {self.text!r}")
            return Word.gen(self.index[val])
        if kind == "int" and val == "1":
            return Word()
        if val == "(":
            w = self.expr()
            self.take(")")
            return w
        if val == "[":
            parts = [self.expr()]
            while self.peek()[1] == ",":
                self.take(",")
                parts.append(self.expr())
            self.take("]")
            if len(parts) < 2:
                raise ParseError(f"commutator needs two entries in {self.text!r}")
            return commutator_word(*parts)
        raise ParseError(f"unexpected {val!r} in {self.text!r}")


def parse_word(text: str, names: Sequence[str]) -> Word:
    """Parse ``a*b^-1*[a,b]^2``-style text; the result is freely reduced."""
    p = _Parser(text, names)
    if not p.toks:
        raise ParseError("empty word")
    w = p.expr()
    if p.i != len(p.toks):
        raise ParseError(f"trailing input in {text!r}")
    return w.reduced()


def parse_word_list(text: str, names: Sequence[str]) -> list[Word]:
    """Comma-separated words; commas inside brackets belong to commutators."""
    if not text.strip():
        return []
    return [w.reduced() for w in _Parser(text, names).word_list()]


# -- evaluation ---------------------------------------------------------------

def evaluate_word(w: Word, images: Sequence[Permutation]) -> Permutation:
    if not images:
        if w.letters:
            raise StructuralError("word uses generators but no images were given")
        raise StructuralError("cannot infer the degree without images")
    degree = images[0].degree
    arr = np.arange(degree, dtype=np.int32)
    for g, e in w.letters:
        if not 0 <= g < len(images):
            raise StructuralError(f"generator index {g} out of range")
        img = images[g] if e > 0 else images[g].inverse()
        arr = img.images[arr]
    return Permutation._wrap(arr)


# -- coset enumeration ----------------------------------------------------------

IN_PROGRESS = "in-progress"
COMPLETE = "complete"
LIMIT_EXCEEDED = "limit-exceeded"


@dataclass
class CosetTable:
    """Completed (or abandoned) Todd-Coxeter state.

    ``rows[c, 2*i]`` is the coset reached from ``c`` by generator ``i`` and
    ``rows[c, 2*i+1]`` the one reached by its inverse.  Complete tables are
    standardized: cosets are numbered in breadth-first order from coset 0,
    and ``parent``/``via`` record the spanning tree of that search.
    """

    presentation: Presentation
    state: str
    rows: np.ndarray
    coset_count: int
    parent: np.ndarray | None = None
    via: np.ndarray | None = None
    total_defined: int = 0
    max_cosets: int = 0
    # bytes held by the working arrays at their largest (table plus two int32 maps)
    peak_bytes: int = 0

    @property
    def complete(self) -> bool:
        return self.state == COMPLETE

    def column(self, gen: int, inverse: bool = False) -> np.ndarray:
        return self.rows[:, 2 * gen + (1 if inverse else 0)]

    def trace(self, coset: int, w: Word) -> int:
        for code in w.codes():
            coset = int(self.rows[coset, code])
        return coset

    def word_to(self, coset: int) -> Word:
        """The spanning-tree word carrying coset 0 to ``coset``."""
        if self.parent is None:
            raise TableStateError("table has no spanning tree")
        letters = []
        while coset != 0:
            code = int(self.via[coset])
            letters.append((code // 2, -1 if code % 2 else 1))
            coset = int(self.parent[coset])
        return Word(tuple(reversed(letters)))

    def check_relators(self) -> bool:
        """Every relator traces a closed loop at every coset (vectorized)."""
        start = np.arange(self.coset_count, dtype=np.int32)
        for r in self.presentation.relators:
            cur = start
            for code in r.codes():
                cur = self.rows[cur, code]
            if not np.array_equal(cur, start):
                return False
        return True

    def check_bijective(self) -> bool:
        n = self.coset_count
        idx = np.arange(n, dtype=np.int32)
        if (self.rows < 0).any():
            return False
        for g in range(self.presentation.ngens):
            fwd = self.rows[:, 2 * g]
            back = self.rows[:, 2 * g + 1]
            if not (np.array_equal(back[fwd], idx) and np.array_equal(fwd[back], idx)):
                return False
        return True

    def nbytes(self) -> int:
        return int(self.rows.nbytes)


def _flatten(words: Iterable[Word]):
    codes = []
    offsets = [0]
    for w in words:
        c = w.reduced().codes()
        codes.extend(c)
        offsets.append(len(codes))
    return np.array(codes, dtype=np.int32), np.array(offsets, dtype=np.int64)


def todd_coxeter(p: Presentation, subgroup_words: Sequence[Word] = (),
                 max_cosets: int = 10**6, initial_capacity: int = 4096) -> CosetTable:
    """HLT coset enumeration of the cosets of ``<subgroup_words>``.

    A run that cannot finish within ``max_cosets`` table rows returns a
    table in the ``limit-exceeded`` state instead of raising.
    """
    if max_cosets < 1:
        raise StructuralError("max_cosets must be at least 1")
    ncols = 2 * p.ngens
    for w in subgroup_words:
        if w.max_generator() >= p.ngens:
            raise StructuralError("subgroup word uses a generator out of range")
    if ncols == 0:
        rows = np.zeros((1, 0), dtype=np.int32)
        return CosetTable(p, COMPLETE, rows, 1, np.full(1, -1, np.int32),
                          np.full(1, -1, np.int32), 1, max_cosets)
    # rotate each relator's shortest cyclic form; trivial relators are dropped
    rels = [r for r in (_cyclic_reduce(r) for r in p.relators) if len(r)]
    rels.sort(key=len)  # short relators first close the table sooner
    rel_codes, rel_off = _flatten(rels)
    sub_codes, sub_off = _flatten([w for w in subgroup_words if len(w.reduced())])
    status, table, fwd, n, live, total = _enum.hlt_enumerate(
        rel_codes, rel_off, sub_codes, sub_off, ncols, max_cosets, initial_capacity)
    peak = int(table.nbytes + 2 * fwd.nbytes)
    if status == _enum.LIMIT_EXCEEDED:
        return CosetTable(p, LIMIT_EXCEEDED, np.zeros((0, ncols), np.int32), int(live),
                          total_defined=int(total), max_cosets=max_cosets, peak_bytes=peak)
    rows, parent, via, cnt = _enum.standardize(table, fwd, n, ncols, live)
    if cnt != live:
        raise TableStateError("standardization did not reach every live coset")
    return CosetTable(p, COMPLETE, rows, int(cnt), parent, via, int(total), max_cosets, peak)


def _cyclic_reduce(w: Word) -> Word:
    letters = list(w.reduced().letters)
    while len(letters) > 1 and letters[0] == (letters[-1][0], -letters[-1][1]):
        letters = letters[1:-1]
    return Word(tuple(letters))


def coset_action(t: CosetTable) -> list[Permutation]:
    """One permutation of the cosets per generator."""
    if not t.complete:
        raise TableStateError(f"coset table is {t.state}, not complete")
    return [Permutation._wrap(np.ascontiguousarray(t.rows[:, 2 * g]))
            for g in range(t.presentation.ngens)]


def element_words(images: Sequence[Permutation], presentation: Presentation,
                  cap: int = DEFAULT_ENUMERATION_CAP) -> dict[Permutation, Word]:
    """Shortest word for every element of ``<images>``, in breadth-first order.

    Ties go to generator order, positive letter before the inverse letter.
    """
    if len(images) != presentation.ngens:
        raise StructuralError("one image per presentation generator is required")
    if not images:
        raise StructuralError("cannot enumerate without generator images")
    ident = Permutation.identity(images[0].degree)
    letters = []
    for g, img in enumerate(images):
        letters.append(((g, 1), img))
        letters.append(((g, -1), img.inverse()))
    words = {ident: Word()}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            wx = words[x]
            for letter, img in letters:
                y = x * img
                if y not in words:
                    if len(words) >= cap:
                        raise ResourceLimitError(
                            f"group exceeds enumeration cap {cap}", cap)
                    words[y] = Word(wx.letters + (letter,))
                    nxt.append(y)
        frontier = nxt
    return words
