import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakcomm.errors import ParseError, StructuralError, TableStateError
from weakcomm.fp import (
    COMPLETE,
    LIMIT_EXCEEDED,
    Presentation,
    Word,
    commutator_word,
    coset_action,
    element_words,
    evaluate_word,
    parse_word,
    parse_word_list,
    todd_coxeter,
)
from weakcomm.perm import Permutation, build_group

A = Permutation.parse("(0 1 2)")
B = Permutation.parse("(0 1)", 3)


def pres(names, rels):
    return Presentation(names, parse_word_list(rels, names) if rels else [])


def test_evaluate_word_examples():
    assert evaluate_word(Word(), [A]).is_identity()
    w = Word(((0, 1), (0, -1)))
    assert evaluate_word(w, [A]).is_identity()
    assert evaluate_word(parse_word("[a,b]", ["a", "b"]), [A, B]) == Permutation.parse("(0 1 2)")
    with pytest.raises(StructuralError):
        evaluate_word(Word.gen(2), [A, B])


def test_parse_grammar():
    names = ["a", "b"]
    assert parse_word("a*a^-1", names) == Word()
    assert parse_word("a^3", names) == Word.gen(0, 3)
    assert parse_word("(a*b)^2", names) == Word(((0, 1), (1, 1), (0, 1), (1, 1)))
    assert parse_word("[a,b,a]", names) == commutator_word(Word.gen(0), Word.gen(1), Word.gen(0))
    with pytest.raises(ParseError):
        parse_word("a*c", names)
    with pytest.raises(ParseError):
        parse_word("a^", names)


words = st.lists(st.tuples(st.integers(0, 2), st.sampled_from([1, -1])), max_size=12).map(
    lambda xs: Word(tuple(xs)))


@settings(max_examples=200, deadline=None)
@given(words)
def test_reduction_idempotent_and_inverse(w):
    r = w.reduced()
    assert r.is_reduced()
    assert r.reduced() == r
    assert (w * w.inverse()) == Word()


@settings(max_examples=100, deadline=None)
@given(words)
def test_format_parse_round_trip(w):
    names = ["a", "b", "c"]
    r = w.reduced()
    assert parse_word(r.format(names), names) == r


def test_todd_coxeter_examples():
    t = todd_coxeter(pres(["a"], "a^3"))
    assert t.complete and t.coset_count == 3
    s3 = pres(["a", "b"], "a^2, b^2, (a*b)^3")
    t = todd_coxeter(s3)
    assert t.coset_count == 6
    klein = pres(["a", "b"], "a^2, b^2, (a*b)^2")
    t = todd_coxeter(klein, [Word.gen(0)])
    assert t.coset_count == 2


def test_completed_table_invariants():
    t = todd_coxeter(pres(["a", "b"], "a^3, b^2, (a*b)^2"))
    assert t.check_relators() and t.check_bijective()
    # the spanning tree words reach their cosets
    for c in range(t.coset_count):
        assert t.trace(0, t.word_to(c)) == c


def test_deterministic():
    p = pres(["a", "b"], "a^4, b^2, (a*b)^2")
    t1, t2 = todd_coxeter(p), todd_coxeter(p)
    assert np.array_equal(t1.rows, t2.rows)


def test_limit_exceeded_and_free_group():
    t = todd_coxeter(pres(["a", "b"], "a^2"), max_cosets=50)
    assert t.state == LIMIT_EXCEEDED
    with pytest.raises(TableStateError):
        coset_action(t)
    with pytest.raises(StructuralError):
        todd_coxeter(pres(["a"], "a^2"), max_cosets=0)


def test_no_generators():
    t = todd_coxeter(Presentation([], []))
    assert t.state == COMPLETE and t.coset_count == 1


def test_coset_action_examples():
    t = todd_coxeter(pres(["a"], "a"))
    assert t.coset_count == 1
    assert all(p.is_identity() for p in coset_action(t))
    (a,) = coset_action(todd_coxeter(pres(["a"], "a^3")))
    assert a.order() == 3 and a.cycles() and len(a.cycles()[0]) == 3
    s3 = pres(["a", "b"], "a^2, b^2, (a*b)^3")
    gens = coset_action(todd_coxeter(s3))
    assert build_group(gens).order() == 6
    for r in s3.relators:
        assert evaluate_word(r, gens).is_identity()


def test_element_words_examples():
    p = pres(["a"], "a^3")
    ws = element_words([A], p)
    assert ws[Permutation.identity(3)] == Word()
    assert len(ws[A.inverse()]) == 1
    s3 = pres(["a", "b"], "a^3, b^2, (a*b)^2")
    ws = element_words([A, B], s3)
    assert len(ws) == 6
    assert len(ws[Permutation.parse("(0 2 1)")]) <= 2
    for x, w in ws.items():
        assert evaluate_word(w, [A, B]) == x


def test_tie_break_positive_first():
    p = pres(["a"], "a^4")
    c4 = Permutation.parse("(0 1 2 3)")
    ws = element_words([c4], p)
    assert ws[c4] == Word.gen(0)
    assert ws[c4.inverse()] == Word.gen(0, -1)
    assert ws[c4 * c4] == Word.gen(0, 2)
