"""Diagrams of partial homomorphisms.

A diagram is a directed multigraph with a finite group at each vertex and,
on each edge ``x: e -> f``, a surjective homomorphism from a subgroup of
``G_e`` onto a subgroup of ``G_f``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

import networkx as nx

from .groups import (
    CosetTransversal,
    FiniteGroup,
    PartialHom,
    left_transversal,
    partial_hom,
)


class DiagramError(ValueError):
    pass


class DanglingEdge(DiagramError):
    pass


class DuplicateId(DiagramError):
    pass


class NotConjugate(Exception):
    pass


class GroupElem(NamedTuple):
    """An element of the vertex group at ``vertex``."""

    vertex: str
    element: int


@dataclass(frozen=True)
class Edge:
    id: str
    source: str
    target: str
    hom: PartialHom


@dataclass(frozen=True)
class EdgeSpec:
    """Edge input for :func:`build_diagram`.

    ``domain_gens`` and ``images`` hold element names or indices of the
    source and target vertex groups respectively.
    """

    id: str
    source: str
    target: str
    domain_gens: Sequence = ()
    images: Sequence = ()


@dataclass(frozen=True)
class Diagram:
    vertices: tuple[tuple[str, FiniteGroup], ...]
    edges: tuple[Edge, ...]
    t_plus: tuple[tuple[str, CosetTransversal], ...] = field(repr=False)
    t_minus: tuple[tuple[str, CosetTransversal], ...] = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_groups", dict(self.vertices))
        object.__setattr__(self, "_edges", {x.id: x for x in self.edges})
        object.__setattr__(self, "_tp", dict(self.t_plus))
        object.__setattr__(self, "_tm", dict(self.t_minus))
        object.__setattr__(self, "_edge_pos", {x.id: i for i, x in enumerate(self.edges)})

    def group(self, v: str) -> FiniteGroup:
        return self._groups[v]

    def edge(self, x: str) -> Edge:
        return self._edges[x]

    def has_vertex(self, v: str) -> bool:
        return v in self._groups

    def has_edge(self, x: str) -> bool:
        return x in self._edges

    def edge_position(self, x: str) -> int:
        return self._edge_pos[x]

    def T_plus(self, x: str) -> CosetTransversal:
        return self._tp[x]

    def T_minus(self, x: str) -> CosetTransversal:
        return self._tm[x]

    @property
    def vertex_ids(self) -> list[str]:
        return [v for v, _ in self.vertices]

    @property
    def edge_ids(self) -> list[str]:
        return [x.id for x in self.edges]

    def identity(self, v: str) -> GroupElem:
        return GroupElem(v, self.group(v).identity)

    def elem_name(self, g: GroupElem) -> str:
        return self.group(g.vertex).element_names[g.element]


def _resolve(G: FiniteGroup, value, where: str) -> int:
    if isinstance(value, int):
        if not 0 <= value < G.order:
            raise DiagramError(f"{where}: element index {value} out of range")
        return value
    try:
        return G.index(value)
    except KeyError:
        raise DiagramError(f"{where}: unknown group element {value!r}") from None


def diagram_from_edges(vertices: Sequence[tuple[str, FiniteGroup]], edges: Sequence[Edge]) -> Diagram:
    """Assemble a diagram from already-built edges, computing transversals."""
    vertices = tuple((str(v), G) for v, G in vertices)
    ids = [v for v, _ in vertices]
    if len(set(ids)) != len(ids):
        raise DuplicateId("vertex ids must be unique")
    groups = dict(vertices)
    seen = set()
    for x in edges:
        if x.id in seen:
            raise DuplicateId(f"edge id {x.id!r} repeated")
        seen.add(x.id)
        for end in (x.source, x.target):
            if end not in groups:
                raise DanglingEdge(f"edge {x.id!r} refers to unknown vertex {end!r}")
        if x.hom.source_group != groups[x.source] or x.hom.target_group != groups[x.target]:
            raise DiagramError(f"edge {x.id!r}: partial hom groups do not match its endpoints")
    t_plus = tuple((x.id, left_transversal(groups[x.source], x.hom.domain)) for x in edges)
    t_minus = tuple((x.id, left_transversal(groups[x.target], x.hom.image)) for x in edges)
    return Diagram(vertices, tuple(edges), t_plus, t_minus)


def build_diagram(vertex_specs: Sequence[tuple[str, FiniteGroup]], edge_specs: Sequence[EdgeSpec]) -> Diagram:
    groups = {}
    for v, G in vertex_specs:
        if v in groups:
            raise DuplicateId(f"vertex id {v!r} repeated")
        groups[v] = G
    edges = []
    for spec in edge_specs:
        for end in (spec.source, spec.target):
            if end not in groups:
                raise DanglingEdge(f"edge {spec.id!r} refers to unknown vertex {end!r}")
        src, tgt = groups[spec.source], groups[spec.target]
        gens = [_resolve(src, g, f"edge {spec.id}") for g in spec.domain_gens]
        imgs = [_resolve(tgt, h, f"edge {spec.id}") for h in spec.images]
        edges.append(Edge(spec.id, spec.source, spec.target, partial_hom(src, tgt, gens, imgs)))
    return diagram_from_edges(list(vertex_specs), edges)


class DiagramClass(enum.Enum):
    GENERIC = "generic"
    PARTIAL_ISOMORPHISMS = "partial-isomorphisms"
    SERRE = "serre"


def is_weakly_connected(D: Diagram) -> bool:
    g = nx.MultiDiGraph()
    g.add_nodes_from(D.vertex_ids)
    g.add_edges_from((x.source, x.target) for x in D.edges)
    return len(g) > 0 and nx.is_weakly_connected(g)


def classify(D: Diagram) -> DiagramClass:
    if not all(x.hom.is_iso for x in D.edges):
        return DiagramClass.GENERIC
    # finiteness holds by construction; need at least one vertex and connectivity
    if is_weakly_connected(D):
        return DiagramClass.SERRE
    return DiagramClass.PARTIAL_ISOMORPHISMS


def is_partial_isomorphisms(D: Diagram) -> bool:
    return classify(D) is not DiagramClass.GENERIC


@dataclass(frozen=True)
class ConjugacyWitness:
    """Per-edge conjugating elements.

    For the edge pair ``(x, y)`` the entry ``(g, h)`` means
    ``alpha(a) = g a g^-1`` on the source group and ``beta(b) = h b h^-1`` on
    the target group.
    """

    pairs: tuple[tuple[str, str, int, int], ...]

    def as_dict(self) -> dict[str, tuple[str, int, int]]:
        return {x: (y, g, h) for x, y, g, h in self.pairs}


def _edge_conjugator(hx: PartialHom, hy: PartialHom):
    G, H = hx.source_group, hx.target_group
    dom_y, im_y = set(hy.domain.members), set(hy.image.members)
    for g in G.elements():
        if {G.conj(g, a) for a in hx.domain} != dom_y:
            continue
        for h in H.elements():
            if {H.conj(h, b) for b in hx.image} != im_y:
                continue
            if all(H.conj(h, hx(a)) == hy(G.conj(g, a)) for a in hx.domain):
                return g, h
    return None


def diagrams_conjugate(D1: Diagram, D2: Diagram, edge_correspondence: Mapping[str, str] | None = None) -> ConjugacyWitness:
    """Search for inner automorphisms relating corresponding edges.

    ``edge_correspondence`` maps edge ids of ``D1`` to edge ids of ``D2``;
    by default edges are matched by id.  Raises :class:`NotConjugate` when
    no witness exists.
    """
    if sorted(D1.vertex_ids) != sorted(D2.vertex_ids):
        raise DiagramError("diagrams have different vertex sets")
    for v in D1.vertex_ids:
        if D1.group(v) != D2.group(v):
            raise DiagramError(f"vertex {v!r} carries different groups")
    if edge_correspondence is None:
        edge_correspondence = {x: x for x in D1.edge_ids}
    corr = dict(edge_correspondence)
    if sorted(corr) != sorted(D1.edge_ids) or sorted(corr.values()) != sorted(D2.edge_ids):
        raise DiagramError("edge correspondence is not a bijection")

    pairs = []
    for x_id, y_id in corr.items():
        x, y = D1.edge(x_id), D2.edge(y_id)
        if (x.source, x.target) != (y.source, y.target):
            raise DiagramError(f"edges {x_id!r} and {y_id!r} have different endpoints")
        if len(x.hom.domain) != len(y.hom.domain) or len(x.hom.image) != len(y.hom.image):
            raise NotConjugate(f"edges {x_id!r}/{y_id!r}: subgroup orders differ")
        found = _edge_conjugator(x.hom, y.hom)
        if found is None:
            raise NotConjugate(f"no inner automorphisms relate edges {x_id!r} and {y_id!r}")
        pairs.append((x_id, y_id, *found))
    return ConjugacyWitness(tuple(pairs))


def check_conjugacy_witness(D1: Diagram, D2: Diagram, witness: ConjugacyWitness) -> bool:
    for x_id, y_id, g, h in witness.pairs:
        hx, hy = D1.edge(x_id).hom, D2.edge(y_id).hom
        G, H = hx.source_group, hx.target_group
        if {G.conj(g, a) for a in hx.domain} != set(hy.domain.members):
            return False
        if {H.conj(h, b) for b in hx.image} != set(hy.image.members):
            return False
        if any(H.conj(h, hx(a)) != hy(G.conj(g, a)) for a in hx.domain):
            return False
    return True


def relabel_edges(D: Diagram, mapping: Mapping[str, str]) -> Diagram:
    edges = [Edge(mapping.get(x.id, x.id), x.source, x.target, x.hom) for x in D.edges]
    return diagram_from_edges(D.vertices, edges)
