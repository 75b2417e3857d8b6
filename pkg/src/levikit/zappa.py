"""Self-similar actions of the vertex groupoid on the free category of basis atoms.

The action ``g . x`` and restriction ``g|x`` on a basis atom are read off
from the normal form of ``g x``; on longer paths they are extended atom by
atom.  :func:`check_axioms` verifies C1-C3 and SS1-SS8 on every tuple up to
a path-length bound, and :class:`ZappaSzepProduct` implements the product
``(x, g)(y, h) = (x (g . y), g|y h)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from .bimodules import RawAtom
from .diagrams import Diagram, GroupElem
from .tensor import CategoryTruncation, NonComposable, Report, TensorCategory, TensorElement


@dataclass(frozen=True)
class Path:
    """A path of basis atoms; the empty path at ``start`` is the identity there."""

    start: str
    end: str
    atoms: tuple[tuple[str, int], ...] = ()

    def __len__(self):
        return len(self.atoms)


@dataclass(frozen=True)
class ZSElement:
    path: Path
    group: GroupElem


class SelfSimilarAction:
    def __init__(self, diagram: Diagram, act_table: dict, restrict_table: dict):
        self.diagram = diagram
        self.act_table = dict(act_table)
        self.restrict_table = dict(restrict_table)

    def atom_path(self, atom) -> Path:
        e = self.diagram.edge(atom[0])
        return Path(e.source, e.target, (atom,))

    def identity_path(self, v: str) -> Path:
        return Path(v, v, ())

    def concat(self, p: Path, q: Path) -> Path:
        if p.end != q.start:
            raise NonComposable(f"path ending at {p.end!r} cannot precede one starting at {q.start!r}")
        return Path(p.start, q.end, p.atoms + q.atoms)

    def _step(self, g: GroupElem, atom):
        if self.diagram.edge(atom[0]).source != g.vertex:
            raise NonComposable(f"{g} cannot act on atom {atom}")
        return self.act_table[(g.element, atom)], self.restrict_table[(g.element, atom)]

    def act_restrict(self, g: GroupElem, p: Path) -> tuple[Path, GroupElem]:
        if g.vertex != p.start:
            raise NonComposable(f"{g} cannot act on a path starting at {p.start!r}")
        D = self.diagram
        origin = g.vertex
        atoms = []
        for atom in p.atoms:
            image, g = self._step(g, atom)
            atoms.append(image)
        # read the endpoints off the image so that a faulty table shows up in C1/C2
        start = D.edge(atoms[0][0]).source if atoms else origin
        end = D.edge(atoms[-1][0]).target if atoms else start
        return Path(start, end, tuple(atoms)), g

    def act(self, g: GroupElem, p: Path) -> Path:
        return self.act_restrict(g, p)[0]

    def restrict(self, g: GroupElem, p: Path) -> GroupElem:
        return self.act_restrict(g, p)[1]

    def groups(self):
        for v, G in self.diagram.vertices:
            for g in G.elements():
                yield GroupElem(v, g)

    def paths(self, max_length: int) -> list[Path]:
        D = self.diagram
        basis = sorted({a for (_, a) in self.act_table}, key=lambda a: (D.edge_position(a[0]), a[1]))
        layer = [self.identity_path(v) for v in D.vertex_ids]
        out = list(layer)
        for _ in range(max_length):
            layer = [Path(p.start, D.edge(a[0]).target, p.atoms + (a,)) for p in layer for a in basis if D.edge(a[0]).source == p.end]
            out.extend(layer)
        return out


def derive_action(diagram: Diagram) -> SelfSimilarAction:
    cat = TensorCategory(diagram)
    act, restrict = {}, {}
    for x, t in cat.basis_atoms():
        e = diagram.edge(x)
        G, H = diagram.group(e.source), diagram.group(e.target)
        for g in G.elements():
            u = cat.normalize([GroupElem(e.source, g), RawAtom(t, x, H.identity)])
            act[(g, (x, t))] = u.atoms[0]
            restrict[(g, (x, t))] = GroupElem(e.target, u.tail)
    return SelfSimilarAction(diagram, act, restrict)


AXIOMS = ("C1", "C2", "C3", "SS1", "SS2", "SS3", "SS4", "SS5", "SS6", "SS7", "SS8")


def check_axioms(action: SelfSimilarAction, max_path_length: int = 3) -> Report:
    """Bounded exhaustive verification of the self-similar action axioms."""
    D = action.diagram
    report = Report()
    res = {name: report.add(name) for name in AXIOMS}
    groups = list(action.groups())
    paths = action.paths(max_path_length)
    mul = lambda g, h: GroupElem(g.vertex, D.group(g.vertex).mul(g.element, h.element))

    def check(name: str, pred: Callable[[], bool], *witness):
        res[name].checked += 1
        try:
            ok = pred()
        except (NonComposable, KeyError):
            ok = False
        if not ok:
            res[name].fail(*witness)

    def d(p: Path) -> str:
        return p.start

    def r(p: Path) -> str:
        return p.end

    for g in groups:
        ident = action.identity_path(g.vertex)
        check("SS3", lambda: action.act(g, ident) == ident, g)
        check("SS5", lambda: action.restrict(g, ident) == g, g)

    for x in paths:
        one = D.identity(x.start)
        check("SS1", lambda: action.act(one, x) == x, x)
        check("SS4", lambda: action.restrict(one, x) == D.identity(x.end), x)
        for g in groups:
            if g.vertex != x.start:
                continue
            check("C1", lambda: d(action.act(g, x)) == g.vertex, g, x)
            check("C2", lambda: r(action.act(g, x)) == action.restrict(g, x).vertex, g, x)
            check("C3", lambda: r(x) == action.restrict(g, x).vertex, g, x)
            for h in groups:
                if h.vertex != g.vertex:
                    continue
                check("SS2", lambda: action.act(mul(g, h), x) == action.act(g, action.act(h, x)), g, h, x)
                check(
                    "SS7",
                    lambda: action.restrict(mul(g, h), x) == mul(action.restrict(g, action.act(h, x)), action.restrict(h, x)),
                    g, h, x,
                )

    for x, y in itertools.product(paths, repeat=2):
        if x.end != y.start or len(x) + len(y) > max_path_length:
            continue
        xy = action.concat(x, y)
        for g in groups:
            if g.vertex != x.start:
                continue
            check("SS6", lambda: action.restrict(g, xy) == action.restrict(action.restrict(g, x), y), g, x, y)
            check(
                "SS8",
                lambda: action.act(g, xy) == action.concat(action.act(g, x), action.act(action.restrict(g, x), y)),
                g, x, y,
            )
    return report


def agrees_with_normal_forms(action: SelfSimilarAction, max_path_length: int = 3) -> bool:
    """Path extension of the action matches direct normalization of ``g p``."""
    D = action.diagram
    cat = TensorCategory(D)
    for p in action.paths(max_path_length):
        for g in action.groups():
            if g.vertex != p.start:
                continue
            u = cat.compose(cat.group_element(g), TensorElement(p.start, p.end, p.atoms, D.group(p.end).identity))
            q, h = action.act_restrict(g, p)
            if (u.atoms, u.tail, u.codomain) != (q.atoms, h.element, h.vertex):
                return False
    return True


class ZappaSzepProduct:
    def __init__(self, action: SelfSimilarAction):
        self.action = action
        self.diagram = action.diagram

    def identity(self, v: str) -> ZSElement:
        return ZSElement(Path(v, v, ()), self.diagram.identity(v))

    def from_path(self, p: Path) -> ZSElement:
        return ZSElement(p, self.diagram.identity(p.end))

    def from_group(self, g: GroupElem) -> ZSElement:
        return ZSElement(Path(g.vertex, g.vertex, ()), g)

    def compose(self, a: ZSElement, b: ZSElement) -> ZSElement:
        if a.group.vertex != b.path.start:
            raise NonComposable(f"{a} cannot be followed by {b}")
        image, restr = self.action.act_restrict(a.group, b.path)
        H = self.diagram.group(restr.vertex)
        return ZSElement(self.action.concat(a.path, image), GroupElem(restr.vertex, H.mul(restr.element, b.group.element)))

    def mu(self, a: ZSElement) -> int:
        return len(a.path)

    def is_invertible(self, a: ZSElement) -> bool:
        return len(a.path) == 0

    def inverse(self, a: ZSElement) -> ZSElement:
        if len(a.path):
            raise ValueError("only elements with an identity path are invertible")
        G = self.diagram.group(a.group.vertex)
        return ZSElement(a.path, GroupElem(a.group.vertex, G.inv(a.group.element)))

    def elements(self, max_length: int) -> list[ZSElement]:
        out = []
        for p in self.action.paths(max_length):
            for h in self.diagram.group(p.end).elements():
                out.append(ZSElement(p, GroupElem(p.end, h)))
        return out


def zs_product(action: SelfSimilarAction) -> ZappaSzepProduct:
    return ZappaSzepProduct(action)


def to_zs(u: TensorElement) -> ZSElement:
    return ZSElement(Path(u.domain, u.codomain, u.atoms), GroupElem(u.codomain, u.tail))


def from_zs(z: ZSElement) -> TensorElement:
    return TensorElement(z.path.start, z.group.vertex, z.path.atoms, z.group.element)


def zs_iso_check(diagram: Diagram, max_length: int = 3) -> bool:
    """The normal-form bijection T(B(D)) <-> C x| G respects composition up to ``max_length``."""
    cat = TensorCategory(diagram)
    trunc = CategoryTruncation(cat, max_length)
    zs = ZappaSzepProduct(derive_action(diagram))
    images = {to_zs(u) for u in trunc.elements}
    if len(images) != len(trunc.elements) or images != set(zs.elements(max_length)):
        return False
    for u, v in trunc.composable_pairs():
        if to_zs(cat.compose(u, v)) != zs.compose(to_zs(u), to_zs(v)):
            return False
    return True
