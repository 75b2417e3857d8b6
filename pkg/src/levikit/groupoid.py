"""Word problem in the universal groupoid of the category built from a diagram.

Words are sequences of vertex-group elements and edge letters ``x`` /
``x^-1``.  A word is reduced by one left-to-right pass that carries a group
element: before ``x`` the carry is split as ``t a`` with ``t`` in
``T_plus(x)`` and ``a`` slid across using ``a x = x phi_x(a)``; before
``x^-1`` it is split as ``s b`` over ``T_minus(x)`` and ``b`` slides back as
``phi_x^-1(b)``.  An identity representative between ``x^-1`` and ``x``
(or ``x`` and ``x^-1``) cancels the pair.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from .diagrams import Diagram, DiagramClass, GroupElem, classify, is_partial_isomorphisms
from .groups import FiniteGroup, generating_set, word_tree, Subgroup
from .tensor import CategoryTruncation, NonComposable, Report, TensorElement


class RequiresIsomorphisms(ValueError):
    pass


class WrongShape(ValueError):
    pass


class EdgeLetter(NamedTuple):
    edge: str
    forward: bool = True

    def inverse(self) -> "EdgeLetter":
        return EdgeLetter(self.edge, not self.forward)


def letter_ends(D: Diagram, letter) -> tuple[str, str]:
    if isinstance(letter, GroupElem):
        return letter.vertex, letter.vertex
    e = D.edge(letter.edge)
    return (e.source, e.target) if letter.forward else (e.target, e.source)


@dataclass(frozen=True)
class GroupoidWord:
    domain: str
    codomain: str
    letters: tuple

    def __add__(self, other: "GroupoidWord") -> "GroupoidWord":
        if self.codomain != other.domain:
            raise NonComposable(f"word ending at {self.codomain!r} cannot precede one starting at {other.domain!r}")
        return GroupoidWord(self.domain, other.codomain, self.letters + other.letters)

    @property
    def edge_count(self) -> int:
        return sum(1 for a in self.letters if isinstance(a, EdgeLetter))


def make_word(D: Diagram, letters: Sequence, domain: str | None = None) -> GroupoidWord:
    letters = tuple(letters)
    for i, a in enumerate(letters):
        if isinstance(a, GroupElem):
            if not D.has_vertex(a.vertex) or not 0 <= a.element < D.group(a.vertex).order:
                raise NonComposable(f"letter {i}: element {a.element} not in group at {a.vertex!r}")
        elif not D.has_edge(a.edge):
            raise NonComposable(f"letter {i}: unknown edge {a.edge!r}")
    if domain is None:
        if not letters:
            raise NonComposable("empty word needs an explicit domain")
        domain = letter_ends(D, letters[0])[0]
    if not D.has_vertex(domain):
        raise NonComposable(f"unknown vertex {domain!r}")
    here = domain
    for i, a in enumerate(letters):
        start, end = letter_ends(D, a)
        if start != here:
            raise NonComposable(f"letter {i} starts at {start!r} but the word is at {here!r}")
        here = end
    return GroupoidWord(domain, here, letters)


def invert_word(D: Diagram, w: GroupoidWord) -> GroupoidWord:
    out = []
    for a in reversed(w.letters):
        if isinstance(a, GroupElem):
            out.append(GroupElem(a.vertex, D.group(a.vertex).inv(a.element)))
        else:
            out.append(a.inverse())
    return GroupoidWord(w.codomain, w.domain, tuple(out))


class Syllable(NamedTuple):
    vertex: str
    rep: int
    letter: EdgeLetter


@dataclass(frozen=True)
class GroupoidNormalForm:
    """``c0 y1 c1 ... yn cn``; syllable ``i`` holds ``c_{i-1}``, the vertex it lives at, and ``y_i``."""

    domain: str
    codomain: str
    syllables: tuple[Syllable, ...]
    final: int

    @property
    def edge_count(self) -> int:
        return len(self.syllables)

    def letters(self) -> list:
        out = []
        for v, c, y in self.syllables:
            out += [GroupElem(v, c), y]
        out.append(GroupElem(self.codomain, self.final))
        return out


def normal_form_word(D: Diagram, nf: GroupoidNormalForm) -> GroupoidWord:
    return make_word(D, nf.letters(), nf.domain)


def reduce(D: Diagram, word: GroupoidWord, trace: list | None = None) -> GroupoidNormalForm:
    """Reduce ``word`` to its normal form.

    If ``trace`` is a list, every intermediate word (as a tuple of letters)
    is appended; consecutive entries differ by one elementary relation.
    """
    letters = word.letters
    vertex = word.domain
    carry = D.group(vertex).identity
    stack: list[tuple[str, int, EdgeLetter]] = []  # (vertex before, rep, letter)

    def flat():
        out = []
        for v, c, y in stack:
            out += [GroupElem(v, c), y]
        return out

    def snap(*middle, rest_from):
        if trace is not None:
            trace.append(tuple(flat() + list(middle) + list(letters[rest_from:])))

    if trace is not None:
        trace.append(tuple(letters))
    snap(GroupElem(vertex, carry), rest_from=0)

    for i, a in enumerate(letters):
        if isinstance(a, GroupElem):
            if a.vertex != vertex:
                raise NonComposable(f"letter {i} is at {a.vertex!r}, word is at {vertex!r}")
            carry = D.group(vertex).mul(carry, a.element)
            snap(GroupElem(vertex, carry), rest_from=i + 1)
            continue

        e = D.edge(a.edge)
        G = D.group(vertex)
        if a.forward:
            if e.source != vertex:
                raise NonComposable(f"letter {i} starts at {e.source!r}, word is at {vertex!r}")
            rep, part = D.T_plus(a.edge).factor(carry)
            moved = e.hom(part)
            nxt = e.target
        else:
            if e.target != vertex:
                raise NonComposable(f"letter {i} starts at {e.target!r}, word is at {vertex!r}")
            if not e.hom.is_iso:
                raise RequiresIsomorphisms(f"cannot traverse {a.edge}^-1: its partial hom is not injective")
            rep, part = D.T_minus(a.edge).factor(carry)
            moved = e.hom.preimage(part)
            nxt = e.source
        H = D.group(nxt)
        snap(GroupElem(vertex, rep), GroupElem(vertex, part), a, rest_from=i + 1)
        snap(GroupElem(vertex, rep), a, GroupElem(nxt, moved), rest_from=i + 1)

        if rep == G.identity and stack and stack[-1][2] == a.inverse():
            snap(a, GroupElem(nxt, moved), rest_from=i + 1)  # drop identity letter
            prev_vertex, prev_rep, _ = stack.pop()
            snap(GroupElem(prev_vertex, prev_rep), GroupElem(nxt, moved), rest_from=i + 1)
            vertex = prev_vertex
            carry = H.mul(prev_rep, moved)
            snap(GroupElem(vertex, carry), rest_from=i + 1)
        else:
            stack.append((vertex, rep, a))
            vertex, carry = nxt, moved

    return GroupoidNormalForm(word.domain, vertex, tuple(Syllable(*s) for s in stack), carry)


def equal(D: Diagram, w1: GroupoidWord, w2: GroupoidWord) -> bool:
    if (w1.domain, w1.codomain) != (w2.domain, w2.codomain):
        return False
    return reduce(D, w1) == reduce(D, w2)


def iota(D: Diagram, u: TensorElement) -> GroupoidWord:
    letters = []
    for x, t in u.atoms:
        letters.append(GroupElem(D.edge(x).source, t))
        letters.append(EdgeLetter(x, True))
    letters.append(GroupElem(u.codomain, u.tail))
    return GroupoidWord(u.domain, u.codomain, tuple(letters))


def embedding_check(trunc: CategoryTruncation) -> Report:
    """``iota`` is injective on the truncation and turns composition into concatenation."""
    D = trunc.diagram
    if not is_partial_isomorphisms(D):
        raise RequiresIsomorphisms("embedding check needs a diagram of partial isomorphisms")
    report = Report()
    inj, fun = report.add("injective"), report.add("functorial")
    seen = {}
    for u in trunc.elements:
        inj.checked += 1
        nf = reduce(D, iota(D, u))
        if nf in seen:
            inj.fail(seen[nf], u)
        seen[nf] = u
    for u, v in trunc.composable_pairs():
        fun.checked += 1
        if reduce(D, iota(D, trunc.compose(u, v))) != reduce(D, iota(D, u) + iota(D, v)):
            fun.fail(u, v)
    return report


def _require_isos(D: Diagram):
    if not is_partial_isomorphisms(D):
        raise RequiresIsomorphisms("normal forms in the universal groupoid need a diagram of partial isomorphisms")


def normal_forms(D: Diagram, base: str, max_edges: int, end: str | None = None) -> Iterator[GroupoidNormalForm]:
    """All normal forms starting at ``base`` with at most ``max_edges`` edge letters.

    Restricted to those ending at ``end`` when given.
    """
    _require_isos(D)

    def letters_from(v):
        for x in D.edges:
            if x.source == v:
                yield EdgeLetter(x.id, True), x.target, D.T_plus(x.id)
            if x.target == v:
                yield EdgeLetter(x.id, False), x.source, D.T_minus(x.id)

    def walk(v, syllables, last):
        if end is None or v == end:
            for c in D.group(v).elements():
                yield GroupoidNormalForm(base, v, tuple(syllables), c)
        if len(syllables) == max_edges:
            return
        ident = D.group(v).identity
        for y, w, T in letters_from(v):
            for c in T.reps:
                if c == ident and last == y.inverse():
                    continue
                yield from walk(w, syllables + [Syllable(v, c, y)], y)

    yield from walk(base, [], None)


def vertex_group_words(D: Diagram, base: str, max_edges: int) -> list[GroupoidNormalForm]:
    return list(normal_forms(D, base, max_edges, end=base))


# random words and congruence-preserving rewrites


def random_word(D: Diagram, rng: random.Random, n_letters: int, domain: str | None = None, backward: bool = True) -> GroupoidWord:
    v = domain if domain is not None else rng.choice(D.vertex_ids)
    start = v
    letters = []
    for _ in range(n_letters):
        options = [GroupElem(v, g) for g in D.group(v).elements()]
        for x in D.edges:
            if x.source == v:
                options.append(EdgeLetter(x.id, True))
            if backward and x.target == v and x.hom.is_iso:
                options.append(EdgeLetter(x.id, False))
        a = rng.choice(options)
        letters.append(a)
        v = letter_ends(D, a)[1]
    return GroupoidWord(start, v, tuple(letters))


def _vertices_along(D: Diagram, w: GroupoidWord) -> list[str]:
    vs = [w.domain]
    for a in w.letters:
        vs.append(letter_ends(D, a)[1])
    return vs


def random_rewrite(D: Diagram, w: GroupoidWord, rng: random.Random) -> GroupoidWord:
    """Apply one random defining relation (in either direction) to ``w``."""
    letters = list(w.letters)
    vs = _vertices_along(D, w)
    kinds = ["insert-pair", "split"]
    if any(isinstance(a, EdgeLetter) for a in letters):
        kinds.append("slide")
    if any(isinstance(a, GroupElem) and isinstance(b, GroupElem) for a, b in zip(letters, letters[1:])):
        kinds.append("merge")
    kind = rng.choice(kinds)

    if kind == "insert-pair":
        i = rng.randrange(len(letters) + 1)
        v = vs[i]
        # a pair y y^-1 always involves a backward letter
        choices = [EdgeLetter(x.id, True) for x in D.edges if x.source == v and x.hom.is_iso]
        choices += [EdgeLetter(x.id, False) for x in D.edges if x.target == v and x.hom.is_iso]
        if not choices:
            kind = "split"
        else:
            y = rng.choice(choices)
            letters[i:i] = [y, y.inverse()]
    if kind == "split":
        i = rng.randrange(len(letters) + 1)
        v = vs[i]
        G = D.group(v)
        g = rng.choice(list(G.elements()))
        letters[i:i] = [GroupElem(v, g), GroupElem(v, G.inv(g))]
    elif kind == "merge":
        spots = [i for i, (a, b) in enumerate(zip(letters, letters[1:])) if isinstance(a, GroupElem) and isinstance(b, GroupElem)]
        i = rng.choice(spots)
        a, b = letters[i], letters[i + 1]
        letters[i : i + 2] = [GroupElem(a.vertex, D.group(a.vertex).mul(a.element, b.element))]
    elif kind == "slide":
        spots = [i for i, a in enumerate(letters) if isinstance(a, EdgeLetter)]
        i = rng.choice(spots)
        y = letters[i]
        e = D.edge(y.edge)
        # g y = y g' with (g, g') = (a, phi(a)) for x, (phi(a), a) for x^-1
        a = rng.choice(list(e.hom.domain))
        g, g2 = (a, e.hom(a)) if y.forward else (e.hom(a), a)
        before, after = letter_ends(D, y)
        Gb, Ga = D.group(before), D.group(after)
        if rng.random() < 0.5:
            # y -> g^-1 (g y) = g^-1 y g'
            letters[i : i + 1] = [GroupElem(before, Gb.inv(g)), y, GroupElem(after, g2)]
        else:
            # y -> (y g') g'^-1 = g y g'^-1
            letters[i : i + 1] = [GroupElem(before, g), y, GroupElem(after, Ga.inv(g2))]
    return GroupoidWord(w.domain, w.codomain, tuple(letters))


# presentations


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[str, ...]

    def __str__(self):
        return f"⟨{', '.join(self.generators)} | {', '.join(self.relators)}⟩"


def _format(word: Sequence[tuple[str, int]]) -> str:
    # word: (generator, +1/-1) letters, freely reduced and run-length encoded
    reduced: list[list] = []
    for g, s in word:
        if reduced and reduced[-1][0] == g:
            reduced[-1][1] += s
            if reduced[-1][1] == 0:
                reduced.pop()
        else:
            reduced.append([g, s])
    if not reduced:
        return "1"
    return " ".join(g if k == 1 else f"{g}^{k}" for g, k in reduced)


class _GroupWords:
    def __init__(self, G: FiniteGroup, names: list[str] | None = None, gens=None):
        self.G = G
        whole = Subgroup(G, tuple(G.elements()))
        self.gens = list(gens) if gens is not None else list(generating_set(whole))
        self.names = names or [G.element_names[g] for g in self.gens]
        self.tree = word_tree(G, self.gens)

    def word(self, g: int) -> list[tuple[str, int]]:
        return [(self.names[i], 1) for i in self.tree[g]]

    def relators(self) -> list[str]:
        out = []
        G = self.G
        for g in G.elements():
            for i, s in enumerate(self.gens):
                gs = G.mul(g, s)
                if self.tree[gs] == self.tree[g] + (i,):
                    continue
                w = self.word(g) + [(self.names[i], 1)] + [(n, -k) for n, k in reversed(self.word(gs))]
                r = _format(w)
                if r != "1" and r not in out:
                    out.append(r)
        return out


def emit_presentation(D: Diagram, shape: str) -> Presentation:
    if shape == "hnn":
        if len(D.vertices) != 1:
            raise WrongShape("an HNN presentation needs exactly one vertex")
        _require_isos(D)
        (v, G), = D.vertices
        gw = _GroupWords(G)
        gens = list(gw.names)
        loops = D.edge_ids
        stable = {}
        for x in loops:
            name = "t" if len(loops) == 1 and "t" not in gens else f"t_{x}"
            stable[x] = name
        rels = gw.relators()
        for x in D.edges:
            t = stable[x.id]
            for a in generating_set(x.hom.domain):
                lhs = _format([(t, -1)] + gw.word(a) + [(t, 1)])
                rels.append(f"{lhs} = {_format(gw.word(x.hom(a)))}")
        return Presentation(tuple(gens + [stable[x] for x in loops]), tuple(rels))

    if shape == "amalgam":
        if len(D.vertices) != 2 or len(D.edges) != 1 or classify(D) is not DiagramClass.SERRE:
            raise WrongShape("an amalgam presentation needs two vertices joined by one edge of a Serre diagram")
        (v1, G1), (v2, G2) = D.vertices
        x = D.edges[0]
        words = {}
        plain = [G1.element_names[g] for g in generating_set(Subgroup(G1, tuple(G1.elements())))]
        plain2 = [G2.element_names[g] for g in generating_set(Subgroup(G2, tuple(G2.elements())))]
        clash = bool(set(plain) & set(plain2))
        for v, G, names in ((v1, G1, plain), (v2, G2, plain2)):
            words[v] = _GroupWords(G, [f"{v}_{n}" for n in names] if clash else names)
        gens = words[v1].names + words[v2].names
        rels = words[v1].relators() + words[v2].relators()
        src, tgt = words[x.source], words[x.target]
        for a in generating_set(x.hom.domain):
            rels.append(f"{_format(src.word(a))} = {_format(tgt.word(x.hom(a)))}")
        return Presentation(tuple(gens), tuple(rels))

    raise WrongShape(f"unknown shape {shape!r}; expected 'hnn' or 'amalgam'")
