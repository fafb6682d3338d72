"""Catalog entries and the line-oriented ``.grp`` format.

A ``.grp`` file looks like::

    # the symmetric group of degree 3
    name = S3
    generators = a, b
    relators = a^3, b^2, (a*b)^2
    perm a = (1 2 3)
    perm b = (1 2)
    order = 6
    two_generated = true

Permutation points are one-based, as in most group-theory software.
Optional declared invariants (``order``, ``exponent``, ``derived_exponent``,
``class``, ``two_generated``, ``p``) are checked against the computed group
when the file is loaded.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError
from .fp import Presentation, Word, evaluate_word, parse_word_list
from .perm import Permutation, PermGroup

log = logging.getLogger(__name__)

_BOOL = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}
_INT_KEYS = ("order", "exponent", "derived_exponent", "p")


@dataclass
class CatalogEntry:
    name: str
    presentation: Presentation
    perm_generators: list[str]
    declared: dict = field(default_factory=dict)
    source: str | None = None
    _images: list | None = field(default=None, repr=False, compare=False)

    @property
    def images(self) -> list[Permutation]:
        """Permutation images of the presentation generators, common degree."""
        if self._images is None:
            raw = [Permutation.parse(s, one_based=True) for s in self.perm_generators]
            degree = max([p.degree for p in raw] + [1])
            self._images = [Permutation.parse(s, degree, one_based=True)
                            for s in self.perm_generators]
        return self._images

    @property
    def group(self) -> PermGroup:
        return PermGroup(self.images, self.images[0].degree if self.images else 1)

    @property
    def two_generated(self) -> bool:
        return bool(self.declared.get("two_generated", False))

    def relator_violations(self) -> list[Word]:
        return [r for r in self.presentation.relators
                if not evaluate_word(r, self.images).is_identity()]

    @classmethod
    def from_strings(cls, name: str, generators: list[str], relators: str,
                     perms: dict[str, str], **declared) -> "CatalogEntry":
        pres = Presentation(list(generators), parse_word_list(relators, generators))
        return cls(name, pres, [perms[g] for g in generators], dict(declared))


def parse_grp(text: str, source: str | None = None) -> CatalogEntry:
    """Parse one ``.grp`` document; errors carry line numbers."""
    fields: dict = {}
    perms: dict[str, tuple[str, int]] = {}
    relator_lines: list[tuple[str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key.startswith("perm "):
            gen = key[5:].strip()
            if gen in perms:
                raise ParseError(f"duplicate permutation for {gen!r}", lineno)
            perms[gen] = (value, lineno)
        elif key == "relators":
            relator_lines.append((value, lineno))
        elif key in fields:
            raise ParseError(f"duplicate key {key!r}", lineno)
        else:
            fields[key] = (value, lineno)

    for required in ("name", "generators"):
        if required not in fields:
            raise ParseError(f"missing required key {required!r}")
    name = fields.pop("name")[0]
    gen_text, gen_line = fields.pop("generators")
    gens = [g.strip() for g in gen_text.split(",") if g.strip()]
    if not gens:
        raise ParseError("at least one generator is required", gen_line)

    relators: list[Word] = []
    for value, lineno in relator_lines:
        try:
            relators.extend(parse_word_list(value, gens))
        except ParseError as exc:
            raise ParseError(str(exc), lineno) from None
    try:
        pres = Presentation(gens, relators)
    except ValueError as exc:
        raise ParseError(str(exc), gen_line) from None

    missing = [g for g in gens if g not in perms]
    if missing:
        raise ParseError(f"no permutation for generator(s) {', '.join(missing)}")
    extra = [g for g in perms if g not in gens]
    if extra:
        raise ParseError(f"permutation for unknown generator {extra[0]!r}", perms[extra[0]][1])
    for g, (value, lineno) in perms.items():
        try:
            Permutation.parse(value, one_based=True)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None

    declared: dict = {}
    for key, (value, lineno) in fields.items():
        low = value.lower()
        if key in _INT_KEYS:
            try:
                declared[key] = int(value)
            except ValueError:
                raise ParseError(f"{key} must be an integer", lineno) from None
        elif key == "class":
            declared["class"] = None if low in ("none", "-") else _int(value, key, lineno)
        elif key == "two_generated":
            if low not in _BOOL:
                raise ParseError("two_generated must be true or false", lineno)
            declared["two_generated"] = _BOOL[low]
            if _BOOL[low] and len(gens) > 2:
                raise ParseError("two_generated is declared but more than two generators are listed",
                                 lineno)
        elif key == "library_id":
            declared["library_id"] = value.replace(" ", "")
        elif key == "description":
            declared["description"] = value
        else:
            raise ParseError(f"unknown key {key!r}", lineno)
    entry = CatalogEntry(name, pres, [perms[g][0] for g in gens], declared, source)
    validate_entry(entry, relator_lines[0][1] if relator_lines else None)
    return entry


def _int(value, key, lineno):
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"{key} must be an integer or 'none'", lineno) from None


def validate_entry(entry: CatalogEntry, relator_line: int | None = None) -> None:
    """Check relators on the permutations and every declared invariant."""
    from . import series  # local: series depends on perm only, avoid cycles at import

    bad = entry.relator_violations()
    if bad:
        names = entry.presentation.generator_names
        raise ParseError(f"{entry.name}: relator {bad[0].format(names)} is not satisfied "
                         f"by the permutation generators", relator_line)
    d = entry.declared
    g = entry.group
    order = g.order()
    if "order" in d and d["order"] != order:
        raise ParseError(f"{entry.name}: declared order {d['order']} but computed {order}")
    if "exponent" in d:
        exp = series.exponent_of(g)
        if exp != d["exponent"]:
            raise ParseError(f"{entry.name}: declared exponent {d['exponent']} but computed {exp}")
    if "derived_exponent" in d:
        exp = series.exponent_of(series.derived_subgroup(g))
        if exp != d["derived_exponent"]:
            raise ParseError(f"{entry.name}: declared derived_exponent {d['derived_exponent']} "
                             f"but computed {exp}")
    if "class" in d:
        c = series.nilpotency_class(g)
        if c != d["class"]:
            raise ParseError(f"{entry.name}: declared class {d['class']} but computed {c}")
    if "p" in d:
        p = d["p"]
        k = round(math.log(order, p)) if order > 1 else 0
        if p**k != order:
            raise ParseError(f"{entry.name}: declared p = {p} but |G| = {order}")


def load_catalog(path) -> list[CatalogEntry]:
    """Every ``.grp`` file in a directory, sorted by file name."""
    root = Path(path)
    if root.is_file():
        files = [root]
    else:
        files = sorted(root.glob("*.grp"))
    if not files:
        log.warning("no .grp files found in %s", root)
        return []
    entries = []
    for f in files:
        try:
            entries.append(parse_grp(f.read_text(), str(f)))
        except ParseError as exc:
            raise ParseError(f"{f.name}: {exc}") from None
    names = [e.name for e in entries]
    dup = {n for n in names if names.count(n) > 1}
    if dup:
        raise ParseError(f"duplicate group names: {sorted(dup)}")
    return entries


def default_catalog_dir() -> Path:
    return Path(__file__).with_name("groups")
