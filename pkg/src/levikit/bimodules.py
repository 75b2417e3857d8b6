"""Covering bimodules and their relationship with diagrams.

The bimodule ``B(D)`` of a diagram has elements ``[g, x, h]``, classes of
triples under ``(g1,x,h1) ~ (g2,x,h2)`` iff ``a = g2^-1 g1`` lies in the
domain of ``phi_x`` and ``phi_x(a) = h2 h1^-1``.  Each class is stored in
canonical form: ``g`` replaced by its left coset representative and the
leftover pushed across ``x``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence

from .diagrams import Diagram, Edge, GroupElem, diagram_from_edges
from .groups import FiniteGroup, partial_hom_from_mapping


class WrongComponent(ValueError):
    pass


class NotATransversal(ValueError):
    pass


class RawAtom(NamedTuple):
    """An unreduced triple ``(g, x, h)``."""

    g: int
    edge: str
    h: int


@dataclass(frozen=True, order=True)
class BimoduleElement:
    edge: str
    left: int
    right: int


def canonical(D: Diagram, g: int, x: str, h: int) -> BimoduleElement:
    hom = D.edge(x).hom
    t, a = D.T_plus(x).factor(g)
    return BimoduleElement(x, t, hom.target_group.mul(hom(a), h))


def equivalent(D: Diagram, t1, t2) -> bool:
    """The defining relation on raw triples, evaluated directly."""
    g1, x1, h1 = t1
    g2, x2, h2 = t2
    if x1 != x2:
        return False
    hom = D.edge(x1).hom
    G, H = hom.source_group, hom.target_group
    a = G.mul(G.inv(g2), g1)
    return a in hom.domain and hom(a) == H.mul(h2, H.inv(h1))


class Bimodule:
    """A set with commuting left and right actions of a totally disconnected groupoid.

    Subclasses supply ``groups``, ``elements``, ``source``, ``target``,
    ``left`` and ``right``; actions take bare element indices in the group at
    ``source(x)`` (resp. ``target(x)``).
    """

    groups: Mapping[Hashable, FiniteGroup]
    elements: tuple

    def source(self, x):
        raise NotImplementedError

    def target(self, x):
        raise NotImplementedError

    def left(self, g: int, x):
        raise NotImplementedError

    def right(self, x, h: int):
        raise NotImplementedError

    def label(self, x) -> str:
        return str(x)

    def _elem(self, g, vertex) -> int:
        if isinstance(g, GroupElem):
            if g.vertex != vertex:
                raise WrongComponent(f"{g} does not act on elements over vertex {vertex!r}")
            g = g.element
        if not 0 <= g < self.groups[vertex].order:
            raise WrongComponent(f"element {g} not in the group at {vertex!r}")
        return g

    def act_left(self, g, x):
        return self.left(self._elem(g, self.source(x)), x)

    def act_right(self, x, h):
        return self.right(x, self._elem(h, self.target(x)))


class CoveringBimodule(Bimodule):
    def __init__(self, diagram: Diagram):
        self.diagram = diagram
        self.groups = dict(diagram.vertices)
        elems = []
        for x in diagram.edges:
            H = self.groups[x.target]
            for t in diagram.T_plus(x.id).reps:
                for h in H.elements():
                    elems.append(BimoduleElement(x.id, t, h))
        self.elements = tuple(elems)

    def source(self, b: BimoduleElement) -> str:
        return self.diagram.edge(b.edge).source

    def target(self, b: BimoduleElement) -> str:
        return self.diagram.edge(b.edge).target

    def left(self, g: int, b: BimoduleElement) -> BimoduleElement:
        G = self.groups[self.source(b)]
        return canonical(self.diagram, G.mul(g, b.left), b.edge, b.right)

    def right(self, b: BimoduleElement, h: int) -> BimoduleElement:
        H = self.groups[self.target(b)]
        return BimoduleElement(b.edge, b.left, H.mul(b.right, h))

    def label(self, b: BimoduleElement) -> str:
        return b.edge

    def canonical_transversal(self) -> list[BimoduleElement]:
        """``[1, x, 1]`` for every edge, in edge order."""
        out = []
        for x in self.diagram.edges:
            out.append(BimoduleElement(x.id, self.groups[x.source].identity, self.groups[x.target].identity))
        return out

    def edge_elements(self, x: str) -> list[BimoduleElement]:
        return [b for b in self.elements if b.edge == x]


def bimodule_from_diagram(D: Diagram) -> CoveringBimodule:
    return CoveringBimodule(D)


class TableBimodule(Bimodule):
    """Bimodule given by explicit action tables, for hand-built fixtures.

    ``left_table[(g, x)]`` and ``right_table[(x, h)]`` give the actions.
    """

    def __init__(self, groups, elements, source, target, left_table, right_table):
        self.groups = dict(groups)
        self.elements = tuple(elements)
        self._source = dict(source)
        self._target = dict(target)
        self._left = dict(left_table)
        self._right = dict(right_table)

    def source(self, x):
        return self._source[x]

    def target(self, x):
        return self._target[x]

    def left(self, g, x):
        return self._left[(g, x)]

    def right(self, x, h):
        return self._right[(x, h)]


def is_right_free(B: Bimodule) -> bool:
    for x in B.elements:
        H = B.groups[B.target(x)]
        for h in H.elements():
            if h != H.identity and B.right(x, h) == x:
                return False
    return True


def is_left_free(B: Bimodule) -> bool:
    for x in B.elements:
        G = B.groups[B.source(x)]
        for g in G.elements():
            if g != G.identity and B.left(g, x) == x:
                return False
    return True


def is_bifree(B: Bimodule) -> bool:
    return is_left_free(B) and is_right_free(B)


def orbit(B: Bimodule, x) -> frozenset:
    seen = {x}
    queue = deque([x])
    while queue:
        y = queue.popleft()
        G, H = B.groups[B.source(y)], B.groups[B.target(y)]
        for z in [B.left(g, y) for g in G.elements()] + [B.right(y, h) for h in H.elements()]:
            if z not in seen:
                seen.add(z)
                queue.append(z)
    return frozenset(seen)


def cohn_classes(B: Bimodule) -> list[frozenset]:
    """Partition of the elements into two-sided orbits ``GxG``."""
    classes = []
    placed = set()
    for x in B.elements:
        if x in placed:
            continue
        cls = orbit(B, x)
        placed |= cls
        classes.append(cls)
    if isinstance(B, CoveringBimodule):
        by_edge = {x.id: frozenset(B.edge_elements(x.id)) for x in B.diagram.edges}
        assert sorted(map(sorted, classes)) == sorted(map(sorted, by_edge.values()))
    return classes


def diagram_from_bimodule(B: Bimodule, transversal: Sequence) -> Diagram:
    """Read off a diagram using one chosen element from each class.

    For a chosen ``x: e -> f`` the edge carries the partial hom
    ``g -> h`` whenever ``g x = x h``.
    """
    classes = cohn_classes(B)
    transversal = list(transversal)
    hit = []
    for x in transversal:
        owners = [i for i, c in enumerate(classes) if x in c]
        if not owners:
            raise NotATransversal(f"{x!r} is not an element of the bimodule")
        hit.append(owners[0])
    if sorted(hit) != list(range(len(classes))):
        raise NotATransversal("transversal must meet every class exactly once")

    edges = []
    for x in transversal:
        e, f = B.source(x), B.target(x)
        G, H = B.groups[e], B.groups[f]
        right_of = {B.right(x, h): h for h in H.elements()}
        mapping = {}
        for g in G.elements():
            y = B.left(g, x)
            if y in right_of:
                mapping[g] = right_of[y]
        hom = partial_hom_from_mapping(G, H, mapping)
        edges.append(Edge(B.label(x), e, f, hom))
    return diagram_from_edges(list(B.groups.items()), edges)


def enumerate_triples(D: Diagram) -> Iterable[tuple[int, str, int]]:
    for x in D.edges:
        G, H = D.group(x.source), D.group(x.target)
        for g in G.elements():
            for h in H.elements():
                yield (g, x.id, h)
