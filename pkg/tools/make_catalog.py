"""Regenerate the bundled catalog files from presentations.

Small permutation representations are written by hand below; the rest use
the regular representation found by coset enumeration.
"""

import sys
from pathlib import Path

from weakcomm.fp import Presentation, coset_action, parse_word_list, todd_coxeter

OUT = Path(__file__).resolve().parents[1] / "src" / "weakcomm" / "groups"

GROUPS = [
    # name, generators, relators, perms or None, extra declarations
    ("Z2", "a", "a^2", ["(1 2)"], {'order': 2, 'exponent': 2, 'derived_exponent': 1, 'class': 1}),
    ("Z3", "a", "a^3", ["(1 2 3)"], {'order': 3, 'exponent': 3, 'derived_exponent': 1, 'class': 1}),
    ("Z4", "a", "a^4", ["(1 2 3 4)"], {'order': 4, 'exponent': 4, 'derived_exponent': 1, 'class': 1}),
    ("Z5", "a", "a^5", ["(1 2 3 4 5)"], {'order': 5, 'exponent': 5, 'derived_exponent': 1, 'class': 1}),
    ("Z7", "a", "a^7", ["(1 2 3 4 5 6 7)"], {'order': 7, 'exponent': 7, 'derived_exponent': 1, 'class': 1}),
    ("Z8", "a", "a^8", ["(1 2 3 4 5 6 7 8)"], {'order': 8, 'exponent': 8, 'derived_exponent': 1, 'class': 1}),
    ("Z9", "a", "a^9", ["(1 2 3 4 5 6 7 8 9)"], {'order': 9, 'exponent': 9, 'derived_exponent': 1, 'class': 1}),
    ("Z2xZ2", "a,b", "a^2, b^2, [a,b]", ["(1 2)", "(3 4)"], {'order': 4, 'exponent': 2, 'derived_exponent': 1, 'class': 1, 'two_generated': 'true'}),
    ("S3", "a,b", "a^3, b^2, (a*b)^2", ["(1 2 3)", "(1 2)"], {'order': 6, 'exponent': 6, 'derived_exponent': 3, 'class': 'none', 'two_generated': 'true'}),
    ("Z4xZ2", "a,b", "a^4, b^2, [a,b]", ["(1 2 3 4)", "(5 6)"], {'order': 8, 'exponent': 4, 'derived_exponent': 1, 'class': 1, 'two_generated': 'true'}),
    ("D4", "a,b", "a^4, b^2, (a*b)^2", ["(1 2 3 4)", "(1 3)"], {'order': 8, 'exponent': 4, 'derived_exponent': 2, 'class': 2, 'two_generated': 'true'}),
    ("Q8", "a,b", "a^4, a^2*b^-2, b^-1*a*b*a", None, {'order': 8, 'exponent': 4, 'derived_exponent': 2, 'class': 2, 'two_generated': 'true'}),
    ("Z2xZ2xZ2", "a,b,c", "a^2, b^2, c^2, [a,b], [a,c], [b,c]", ["(1 2)", "(3 4)", "(5 6)"], {'order': 8, 'exponent': 2, 'derived_exponent': 1, 'class': 1}),
    ("Z3xZ3", "a,b", "a^3, b^3, [a,b]", ["(1 2 3)", "(4 5 6)"], {'order': 9, 'exponent': 3, 'derived_exponent': 1, 'class': 1, 'two_generated': 'true'}),
    ("D5", "a,b", "a^5, b^2, (a*b)^2", ["(1 2 3 4 5)", "(2 5)(3 4)"], {'order': 10, 'exponent': 10, 'derived_exponent': 5, 'class': 'none', 'two_generated': 'true'}),
    ("A4", "a,b", "a^3, b^3, (a*b)^2", ["(1 2 3)", "(2 3 4)"], {'order': 12, 'exponent': 6, 'derived_exponent': 2, 'class': 'none', 'two_generated': 'true'}),
    ("D6", "a,b", "a^6, b^2, (a*b)^2", ["(1 2 3 4 5 6)", "(2 6)(3 5)"], {'order': 12, 'exponent': 6, 'derived_exponent': 3, 'class': 'none', 'two_generated': 'true'}),
    ("Dic3", "a,b", "a^6, a^3*b^-2, b^-1*a*b*a", None, {'order': 12, 'exponent': 12, 'derived_exponent': 3, 'class': 'none', 'two_generated': 'true'}),
    ("Z4xZ4", "a,b", "a^4, b^4, [a,b]", ["(1 2 3 4)", "(5 6 7 8)"], {'order': 16, 'exponent': 4, 'derived_exponent': 1, 'class': 1, 'two_generated': 'true'}),
    ("D8", "a,b", "a^8, b^2, (a*b)^2", ["(1 2 3 4 5 6 7 8)", "(2 8)(3 7)(4 6)"], {'order': 16, 'exponent': 8, 'derived_exponent': 4, 'class': 3, 'two_generated': 'true'}),
    ("Q16", "a,b", "a^8, a^4*b^-2, b^-1*a*b*a", None, {'order': 16, 'exponent': 8, 'derived_exponent': 4, 'class': 3, 'two_generated': 'true'}),
    ("Z2xD4", "a,b,c", "a^4, b^2, (a*b)^2, c^2, [a,c], [b,c]",
     ["(1 2 3 4)", "(1 3)", "(5 6)"], {'order': 16, 'exponent': 4, 'derived_exponent': 2, 'class': 2}),
    ("Z2xQ8", "a,b,c", "a^4, a^2*b^-2, b^-1*a*b*a, c^2, [a,c], [b,c]", None, {'order': 16, 'exponent': 4, 'derived_exponent': 2, 'class': 2}),
    ("He3", "a,b", "a^3, b^3, [a,b]^3, [a,b,a], [a,b,b]",
     None, {'order': 27, 'exponent': 3, 'derived_exponent': 3, 'class': 2, 'two_generated': 'true'}),
 ("Z3xZ3xZ3", "a,b,c", "a^3, b^3, c^3, [a,b], [a,c], [b,c]",
     ["(1 2 3)", "(4 5 6)", "(7 8 9)"], {'order': 27, 'exponent': 3, 'derived_exponent': 1, 'class': 1}),
    ("Z2^4", "a,b,c,d", "a^2, b^2, c^2, d^2, [a,b], [a,c], [a,d], [b,c], [b,d], [c,d]",
     ["(1 2)", "(3 4)", "(5 6)", "(7 8)"], {'order': 16, 'exponent': 2, 'derived_exponent': 1, 'class': 1}),
    ("Z4xZ2xZ2", "a,b,c", "a^4, b^2, c^2, [a,b], [a,c], [b,c]",
     ["(1 2 3 4)", "(5 6)", "(7 8)"], {'order': 16, 'exponent': 4, 'derived_exponent': 1, 'class': 1}),
    ("Z3xS3", "a,b,c", "a^3, b^2, (a*b)^2, c^3, [a,c], [b,c]",
     ["(1 2 3)", "(1 2)", "(4 5 6)"], {'order': 18, 'exponent': 6, 'derived_exponent': 3, 'class': 'none'}),
    ("S4", "a,b", "a^4, b^2, (a*b)^3", ["(1 2 3 4)", "(1 2)"], {'order': 24, 'exponent': 12, 'derived_exponent': 6, 'class': 'none', 'two_generated': 'true'}),
    ("SL23", "a,b", "a^3*(a*b)^-2, b^3*(a*b)^-2", None, {'order': 24, 'exponent': 12, 'derived_exponent': 4, 'class': 'none', 'two_generated': 'true'}),
    ("D16", "a,b", "a^16, b^2, (a*b)^2",
     ["(1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16)", "(2 16)(3 15)(4 14)(5 13)(6 12)(7 11)(8 10)"], {'order': 32, 'exponent': 16, 'derived_exponent': 8, 'class': 4, 'two_generated': 'true'}),
    ("Q32", "a,b", "a^16, a^8*b^-2, b^-1*a*b*a", None, {'order': 32, 'exponent': 16, 'derived_exponent': 8, 'class': 4, 'two_generated': 'true'}),
    ("Z8xZ8", "a,b", "a^8, b^8, [a,b]", ["(1 2 3 4 5 6 7 8)", "(9 10 11 12 13 14 15 16)"], {'order': 64, 'exponent': 8, 'derived_exponent': 1, 'class': 1, 'two_generated': 'true'}),
    ("D32", "a,b", "a^32, b^2, (a*b)^2", None, {'order': 64, 'exponent': 32, 'derived_exponent': 16, 'class': 5, 'two_generated': 'true'}),
    ("He3xZ3", "a,b,c", "a^3, b^3, [a,b]^3, [a,b,a], [a,b,b], c^3, [a,c], [b,c]", None,
     {"order": 81, "exponent": 3, "derived_exponent": 3, "class": 2, "library_id": "81,12",
      "description": "the only nonabelian group of order 81 and exponent 3"}),
    ("Z9sZ3", "a,b", "a^9, b^3, b^-1*a*b*a^-4", None, {'order': 27, 'exponent': 9, 'derived_exponent': 3, 'class': 2, 'two_generated': 'true'}),
    ("G243_37", "a,b,c", "a^3, b^3, c^3, [b,c], [a,b,a], [a,b,b], [a,b,c], [a,c,a], [a,c,b], [a,c,c]",
     ["(2 4 7)(5 9 8)(10 11 15)(12 13 16)(14 17 18)",
      "(1 2 5)(3 4 8)(6 7 9)(10 12 11)(13 18 16)(14 15 17)",
      "(10 11 12)(13 16 18)(14 17 15)"],
     {"order": 243, "exponent": 3, "derived_exponent": 3, "class": 2, "library_id": "243,37",
      "description": "exponent 3, class 2, three generators, derived subgroup and centre of order 9"}),
    ("D63", "a,b", "a^63, b^2, (a*b)^2",
     ["(" + " ".join(str(i) for i in range(1, 64)) + ")",
      "".join(f"({i} {65 - i})" for i in range(2, 33))],
     {"order": 126, "exponent": 126, "derived_exponent": 63, "class": "none",
      "two_generated": "true", "description": "dihedral group of order 126"}),
]


def regular(gens, rels):
    names = [g.strip() for g in gens.split(",")]
    p = Presentation(names, parse_word_list(rels, names))
    t = todd_coxeter(p)
    out = []
    for perm in coset_action(t):
        cyc = "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in perm.cycles())
        out.append(cyc or "()")
    return out


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    only = set(sys.argv[1:])
    for name, gens, rels, perms, extra in GROUPS:
        if only and name not in only:
            continue
        if perms is None:
            perms = regular(gens, rels)
        names = [g.strip() for g in gens.split(",")]
        lines = [f"name = {name}", f"generators = {', '.join(names)}", f"relators = {rels}"]
        lines += [f"perm {g} = {c}" for g, c in zip(names, perms)]
        lines += [f"{k} = {v}" for k, v in extra.items()]
        (OUT / f"{name}.grp").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
