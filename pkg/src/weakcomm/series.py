"""Lower central and derived series, iterated brackets and central products.

The helpers at the top work for any permutation group (they are used on the
small input group G).  The ``*_chi`` functions and ``bracket_table`` work
inside a realized :class:`~weakcomm.chi.ChiComplex`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PreconditionError, StructuralError
from .perm import (
    SubgroupHandle,
    comm,
    commutes,
    commutator_subgroup,
    group_exponent,
    is_normalized_by,
    is_subgroup,
    join,
    same_subgroup,
    whole_group,
)


def _handle(g) -> SubgroupHandle:
    return g if isinstance(g, SubgroupHandle) else whole_group(g)


def exponent_of(g) -> int:
    return group_exponent(g)


def derived_subgroup(g) -> SubgroupHandle:
    h = _handle(g)
    return commutator_subgroup(h, h)


def lower_central_series(g, n_max: int = 64) -> list[SubgroupHandle]:
    """``[gamma_1, gamma_2, ...]`` up to and including the first repeat."""
    whole = _handle(g)
    terms = [whole]
    while len(terms) < n_max:
        nxt = commutator_subgroup(terms[-1], whole)
        terms.append(nxt)
        if nxt.order() == terms[-2].order():
            break
    return terms


def nilpotency_class(g) -> int | None:
    """Class of a nilpotent group (0 for the trivial group), else ``None``."""
    terms = lower_central_series(g)
    if not terms[-1].is_trivial():
        return None
    return next(i for i, t in enumerate(terms) if t.is_trivial())


def derived_length(g, k_max: int = 64) -> int | None:
    h = _handle(g)
    k = 0
    while not h.is_trivial():
        nxt = commutator_subgroup(h, h)
        if nxt.order() == h.order():
            return None
        h = nxt
        k += 1
        if k > k_max:
            return None
    return k


# -- series inside chi ---------------------------------------------------------

@dataclass
class SeriesTable:
    kind: str
    terms: list[tuple[str, SubgroupHandle]] = field(default_factory=list)
    stabilized_at: int | None = None
    # per-term normality in chi; only filled for bracket tables
    normal: list[bool] = field(default_factory=list)
    start_index: int = 1

    def __getitem__(self, index: int) -> SubgroupHandle:
        """Term by its mathematical index; indices past the end repeat the last term
        when the series has stabilized."""
        pos = index - self.start_index
        if pos < 0:
            raise IndexError(index)
        if pos >= len(self.terms):
            if self.stabilized_at is None:
                raise IndexError(f"term {index} was not computed")
            pos = len(self.terms) - 1
        return self.terms[pos][1]

    @property
    def last_index(self) -> int:
        return self.start_index + len(self.terms) - 1

    def orders(self) -> list[int]:
        return [t.order() for _, t in self.terms]

    def is_descending(self) -> bool:
        return all(is_subgroup(b, a) for (_, a), (_, b) in zip(self.terms, self.terms[1:]))


def _run(kind: str, first: SubgroupHandle, step, n_max: int, start: int,
         label) -> SeriesTable:
    table = SeriesTable(kind, start_index=start)
    table.terms.append((label(start), first))
    idx = start
    while idx - start + 1 < n_max:
        prev = table.terms[-1][1]
        nxt = step(prev)
        idx += 1
        if same_subgroup(nxt, prev):
            table.stabilized_at = idx - 1
            break
        table.terms.append((label(idx), nxt))
    return table


def gamma_chi(c, n_max: int = 8) -> SeriesTable:
    """Lower central series of chi, gamma_1 = chi."""
    whole = whole_group(c.chi)
    return _run("lower_central", whole, lambda t: commutator_subgroup(t, whole),
                n_max, 1, lambda i: f"gamma_{i}")


def derived_chi(c, k_max: int = 8) -> SeriesTable:
    """Derived series of chi, chi^(0) = chi."""
    whole = whole_group(c.chi)
    return _run("derived", whole, lambda t: commutator_subgroup(t, t),
                k_max + 1, 0, lambda i: f"chi^({i})")


def bracket_table(c, base: str, against: str, n_max: int = 6) -> SeriesTable:
    """``[B, _n A]`` for n = 0..n_max (n = 0 is B itself), with normality flags."""
    if base not in ("D", "L1", "L2", "R"):
        raise PreconditionError(f"unknown base subgroup {base!r}")
    if against not in ("G", "Gphi"):
        raise PreconditionError(f"unknown bracket partner {against!r}")
    b = getattr(c, base)
    a = c.embed_G if against == "G" else c.embed_Gphi
    sym = "G" if against == "G" else "G^phi"
    table = _run("bracket", b, lambda t: commutator_subgroup(t, a), n_max + 1, 0,
                 lambda i: f"[{base},_{i} {sym}]")
    table.normal = [is_normalized_by(t, c.chi.generators) for _, t in table.terms]
    return table


# -- central products ----------------------------------------------------------

@dataclass
class CentralProductCertificate:
    passed: bool
    whole_order: int
    product_order: int
    product_equal: bool
    failing_pair: tuple[int, int] | None = None
    witness: object = None
    note: str = ""


def central_product_check(whole: SubgroupHandle, parts: list[SubgroupHandle]
                          ) -> CentralProductCertificate:
    """Certify that ``whole`` is the central product of ``parts``.

    Pairwise commutation of the parts already forces each intersection
    ``K_i & prod_{j != i} K_j`` to commute with every part, so that
    condition is certified through the pairwise checks.
    """
    if not parts:
        raise StructuralError("at least one part is required")
    product = join(*parts)
    equal = product.order() == whole.order() and is_subgroup(product, whole)
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            semi = whole.ambient.semiregular
            for x in parts[i].generators:
                for y in parts[j].generators:
                    if not commutes(x, y, semi):
                        return CentralProductCertificate(
                            False, whole.order(), product.order(), equal, (i, j), comm(x, y),
                            f"parts {i} and {j} do not commute")
    note = "" if equal else "product of parts differs from the whole"
    return CentralProductCertificate(equal, whole.order(), product.order(), equal, note=note)


def product_of(parts: list[SubgroupHandle]) -> SubgroupHandle:
    """Product of normal subgroups, as the subgroup they generate."""
    return join(*parts)

