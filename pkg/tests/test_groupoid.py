import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from levikit.diagrams import EdgeSpec, GroupElem, build_diagram
from levikit.groupoid import (
    EdgeLetter,
    RequiresIsomorphisms,
    WrongShape,
    embedding_check,
    emit_presentation,
    equal,
    invert_word,
    iota,
    make_word,
    normal_form_word,
    normal_forms,
    random_rewrite,
    random_word,
    reduce,
    vertex_group_words,
)
from levikit.groups import trivial_group
from levikit.tensor import CategoryTruncation, NonComposable, TensorCategory

X, XI = EdgeLetter("x", True), EdgeLetter("x", False)


def g(k, v="v"):
    return GroupElem(v, k)


def test_group_letter_only(hnn):
    nf = reduce(hnn, make_word(hnn, [g(3)]))
    assert nf.edge_count == 0 and nf.final == 3


def test_free_cancellation(hnn):
    nf = reduce(hnn, make_word(hnn, [X, XI]))
    assert nf.edge_count == 0 and nf.final == 0


def test_britton_no_pinch(hnn):
    nf = reduce(hnn, make_word(hnn, [XI, g(1), X]))
    assert nf.edge_count == 2


def test_pinch_collapses(hnn):
    nf = reduce(hnn, make_word(hnn, [XI, g(2), X]))
    assert nf.edge_count == 0 and nf.final == 2


def test_inserted_pair_is_equal(hnn):
    w = make_word(hnn, [g(1), X, g(3)])
    w2 = make_word(hnn, [g(1), X, X, XI, g(3)])
    assert equal(hnn, w, w2)


def test_slide_through_domain(hnn):
    assert equal(hnn, make_word(hnn, [g(2), X]), make_word(hnn, [X, g(2)]))
    assert not equal(hnn, make_word(hnn, [g(1), X]), make_word(hnn, [X, g(1)]))


def test_different_endpoints_never_equal(amalgam):
    w1 = make_word(amalgam, [GroupElem("u", 0)])
    w2 = make_word(amalgam, [EdgeLetter("x")])
    assert not equal(amalgam, w1, w2)


def test_make_word_errors(hnn, amalgam):
    with pytest.raises(NonComposable):
        make_word(amalgam, [EdgeLetter("x"), EdgeLetter("x")])
    with pytest.raises(NonComposable):
        make_word(hnn, [EdgeLetter("nope")])
    with pytest.raises(NonComposable):
        make_word(hnn, [])
    with pytest.raises(NonComposable):
        make_word(hnn, [g(9)])


def test_backward_letter_needs_injective_hom(collapse):
    with pytest.raises(RequiresIsomorphisms):
        reduce(collapse, make_word(collapse, [EdgeLetter("x", False)]))


def test_inverse_word(hnn):
    rng = random.Random(1)
    for _ in range(50):
        w = random_word(hnn, rng, rng.randint(0, 7))
        nf = reduce(hnn, w + invert_word(hnn, w))
        assert nf.edge_count == 0 and nf.final == 0


def test_normal_form_is_fixed_point(diagram):
    rng = random.Random(2)
    for _ in range(100):
        w = random_word(diagram, rng, rng.randint(0, 6))
        nf = reduce(diagram, w)
        assert reduce(diagram, normal_form_word(diagram, nf)) == nf


def test_trace_steps_are_elementary(diagram):
    rng = random.Random(5)
    for _ in range(200):
        w = random_word(diagram, rng, rng.randint(0, 7))
        trace = []
        nf = reduce(diagram, w, trace)
        assert trace[0] == w.letters
        assert list(trace[-1]) == nf.letters()
        for a, b in zip(trace, trace[1:]):
            if a != b:
                assert oracles.elementary_step(diagram, a, b), (a, b)


def test_britton_oracle_on_random_words(hnn):
    rng = random.Random(100)
    agree = 0
    for i in range(100):
        w1 = random_word(hnn, rng, rng.randint(0, 8), domain="v")
        if i % 2:
            w2 = w1
            for _ in range(rng.randint(1, 6)):
                w2 = random_rewrite(hnn, w2, rng)
        else:
            w2 = random_word(hnn, rng, rng.randint(0, 8), domain="v")
        b1 = oracles.hnn_letters_to_britton(w1.letters)
        b2 = oracles.hnn_letters_to_britton(w2.letters)
        expected = oracles.britton_trivial(b1 + oracles.britton_inverse(b2))
        assert equal(hnn, w1, w2) == expected
        agree += expected
    assert agree >= 50


def test_edge_count_matches_britton_length(hnn):
    rng = random.Random(11)
    for _ in range(200):
        w = random_word(hnn, rng, rng.randint(0, 9))
        reduced = oracles.britton_reduce(oracles.hnn_letters_to_britton(w.letters))
        assert reduce(hnn, w).edge_count == sum(1 for s, _ in reduced if s == "t")


def free_oracle_count(D, base, k):
    """Freely reduced closed paths at ``base`` in the underlying graph, at most k letters."""
    letters = [(x.id, 1, x.source, x.target) for x in D.edges] + [(x.id, -1, x.target, x.source) for x in D.edges]
    count = 0
    for n in range(k + 1):
        for seq in itertools.product(letters, repeat=n):
            v, ok = base, True
            for i, (x, s, src, tgt) in enumerate(seq):
                if src != v or (i and seq[i - 1][0] == x and seq[i - 1][1] == -s):
                    ok = False
                    break
                v = tgt
            count += ok and v == base
    return count


@pytest.mark.parametrize("k", [0, 1, 2, 3, 4])
def test_free_enumeration(free, k):
    assert len(vertex_group_words(free, "e", k)) == free_oracle_count(free, "e", k)


def test_free_enumeration_k2(free):
    # identity, a b and b^-1 a^-1
    assert len(vertex_group_words(free, "e", 2)) == 3


def test_hnn_enumeration_k1(hnn):
    assert len(vertex_group_words(hnn, "v", 1)) == 2 * 4 + 2 * 4 + 4


def test_hnn_enumeration_matches_britton(hnn):
    forms = vertex_group_words(hnn, "v", 3)
    images = {tuple(oracles.britton_reduce(oracles.hnn_letters_to_britton(nf.letters()))) for nf in forms}
    assert len(images) == len(forms)


def test_amalgam_enumeration_k2(amalgam):
    assert len(vertex_group_words(amalgam, "u", 2)) == 10


def test_normal_forms_reduce_to_themselves(diagram):
    if diagram.edges and not all(x.hom.is_iso for x in diagram.edges):
        with pytest.raises(RequiresIsomorphisms):
            list(normal_forms(diagram, diagram.vertex_ids[0], 1))
        return
    for v in diagram.vertex_ids:
        for nf in normal_forms(diagram, v, 2):
            assert reduce(diagram, normal_form_word(diagram, nf)) == nf


@pytest.mark.parametrize("name, L", [("hnn", 3), ("amalgam", 4), ("free", 4)])
def test_embedding(name, L):
    from levikit import fixtures

    D = fixtures.load(name)
    report = embedding_check(CategoryTruncation(TensorCategory(D), L))
    assert report.ok, report.lines()


def test_embedding_needs_isos(collapse):
    with pytest.raises(RequiresIsomorphisms):
        embedding_check(CategoryTruncation(TensorCategory(collapse), 1))


def test_iota_of_length_zero(hnn):
    cat = TensorCategory(hnn)
    seen = set()
    for k in range(4):
        seen.add(reduce(hnn, iota(hnn, cat.group_element(g(k)))))
    assert len(seen) == 4


def test_hnn_presentation(hnn):
    assert str(emit_presentation(hnn, "hnn")) == "⟨a, t | a^4, t^-1 a^2 t = a^2⟩"


def test_amalgam_presentation(amalgam):
    assert str(emit_presentation(amalgam, "amalgam")) == "⟨a, b | a^2, b^3⟩"


def test_presentation_shapes(amalgam, hnn):
    T = trivial_group()
    three = build_diagram([("p", T), ("q", T), ("r", T)], [EdgeSpec("x", "p", "q"), EdgeSpec("y", "q", "r")])
    with pytest.raises(WrongShape):
        emit_presentation(three, "amalgam")
    with pytest.raises(WrongShape):
        emit_presentation(three, "hnn")
    with pytest.raises(WrongShape):
        emit_presentation(amalgam, "hnn")
    with pytest.raises(WrongShape):
        emit_presentation(hnn, "tree")


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 9))
def test_rewrites_preserve_normal_form(seed, n):
    from levikit import fixtures

    rng = random.Random(seed)
    D = fixtures.load(rng.choice(fixtures.NAMES))
    w = random_word(D, rng, n)
    u = random_rewrite(D, w, rng)
    assert (u.domain, u.codomain) == (w.domain, w.codomain)
    assert reduce(D, u) == reduce(D, w)
