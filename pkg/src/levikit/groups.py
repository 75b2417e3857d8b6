"""Finite groups given by multiplication tables.

Elements are integer indices ``0 .. order-1``.  Subgroups, coset
transversals and partial homomorphisms all refer back to a parent
:class:`FiniteGroup`.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class GroupError(ValueError):
    """Base class for invalid group data."""


class NotAssociative(GroupError):
    def __init__(self, triple):
        self.triple = triple
        super().__init__(f"table is not associative at {triple}")


class NoIdentity(GroupError):
    pass


class NoInverse(GroupError):
    pass


class DuplicateName(GroupError):
    pass


class NotAHomomorphism(GroupError):
    pass


class ImageNotClosed(GroupError):
    pass


@dataclass(frozen=True)
class FiniteGroup:
    order: int
    table: tuple[tuple[int, ...], ...]
    identity: int
    inverse: tuple[int, ...]
    element_names: tuple[str, ...]
    name: str = field(default="", compare=False)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def prod(self, *elems: int) -> int:
        out = self.identity
        for g in elems:
            out = self.table[out][g]
        return out

    def conj(self, g: int, a: int) -> int:
        """``g a g^-1``."""
        return self.table[self.table[g][a]][self.inverse[g]]

    def index(self, name: str) -> int:
        try:
            return self.element_names.index(name)
        except ValueError:
            raise KeyError(f"no element named {name!r}") from None

    def elements(self) -> range:
        return range(self.order)

    def __repr__(self):
        label = self.name or "FiniteGroup"
        return f"<{label} of order {self.order}>"


def group_from_table(names: Sequence[str], table_rows, name: str = "") -> FiniteGroup:
    """Validate a Cayley table and return the group it defines.

    ``table_rows`` may hold element names or indices.  Every group axiom is
    checked exhaustively, so this is only meant for small groups.
    """
    names = tuple(str(n) for n in names)
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise DuplicateName(f"element name {dup!r} repeated")
    n = len(names)
    if n == 0:
        raise NoIdentity("empty table has no identity")
    lookup = {nm: i for i, nm in enumerate(names)}

    rows = []
    if len(table_rows) != n:
        raise GroupError(f"expected {n} rows, got {len(table_rows)}")
    for r, row in enumerate(table_rows):
        if len(row) != n:
            raise GroupError(f"row {r} has {len(row)} entries, expected {n}")
        conv = []
        for entry in row:
            if isinstance(entry, int):
                if not 0 <= entry < n:
                    raise GroupError(f"entry {entry} out of range in row {r}")
                conv.append(entry)
            else:
                if entry not in lookup:
                    raise GroupError(f"unknown element {entry!r} in row {r}")
                conv.append(lookup[entry])
        rows.append(tuple(conv))
    table = tuple(rows)

    for a, b, c in itertools.product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise NotAssociative((names[a], names[b], names[c]))

    identity = None
    for e in range(n):
        if all(table[e][a] == a and table[a][e] == a for a in range(n)):
            identity = e
            break
    if identity is None:
        raise NoIdentity("no two-sided identity in table")

    inverse = []
    for a in range(n):
        inv = next((b for b in range(n) if table[a][b] == identity and table[b][a] == identity), None)
        if inv is None:
            raise NoInverse(f"element {names[a]!r} has no inverse")
        inverse.append(inv)

    return FiniteGroup(n, table, identity, tuple(inverse), names, name)


def cyclic_group(n: int, prefix: str = "a", name: str = "") -> FiniteGroup:
    names = ["e"] + [prefix if k == 1 else f"{prefix}{k}" for k in range(1, n)]
    rows = [[(i + j) % n for j in range(n)] for i in range(n)]
    return group_from_table(names, rows, name or f"C{n}")


def trivial_group(name: str = "1") -> FiniteGroup:
    return group_from_table(["e"], [[0]], name)


def symmetric_group(n: int, name: str = "") -> FiniteGroup:
    """S_n on ``{1..n}``; elements named by their images, e.g. ``p213``.

    Composition is left-to-right: ``(p*q)(i) = q(p(i))``.
    """
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    names = ["p" + "".join(str(k + 1) for k in p) for p in perms]
    rows = [[index[tuple(q[p[i]] for i in range(n))] for q in perms] for p in perms]
    return group_from_table(names, rows, name or f"S{n}")


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    members: tuple[int, ...]

    def __contains__(self, g: int) -> bool:
        return g in self._set

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @property
    def _set(self) -> frozenset:
        # frozen dataclass: memoize by stashing on the instance dict
        try:
            return self.__dict__["_cached_set"]
        except KeyError:
            s = frozenset(self.members)
            object.__setattr__(self, "_cached_set", s)
            return s


def subgroup_closure(G: FiniteGroup, generators: Iterable[int]) -> Subgroup:
    gens = list(generators)
    seen = {G.identity}
    queue = deque([G.identity])
    while queue:
        a = queue.popleft()
        for s in gens:
            b = G.mul(a, s)
            if b not in seen:
                seen.add(b)
                queue.append(b)
    # finite group: closure under products already gives inverses
    return Subgroup(G, tuple(sorted(seen)))


def is_subgroup(G: FiniteGroup, members: Iterable[int]) -> bool:
    s = set(members)
    if G.identity not in s:
        return False
    return all(G.mul(a, b) in s for a in s for b in s) and all(G.inv(a) in s for a in s)


def generating_set(H: Subgroup) -> tuple[int, ...]:
    """Greedy generating set: repeatedly add the least element not yet generated."""
    G = H.parent
    gens: list[int] = []
    current = {G.identity}
    for g in H.members:
        if g not in current:
            gens.append(g)
            current = set(subgroup_closure(G, gens).members)
    return tuple(gens)


@dataclass(frozen=True)
class CosetTransversal:
    subgroup: Subgroup
    side: str
    reps: tuple[int, ...]
    # element -> (rep, member); g = rep*member (left) or member*rep (right)
    factors: tuple[tuple[int, int], ...] = field(repr=False, compare=False)

    def factor(self, g: int) -> tuple[int, int]:
        return self.factors[g]

    def rep(self, g: int) -> int:
        return self.factors[g][0]

    def __len__(self):
        return len(self.reps)

    def __contains__(self, g):
        return g in self.reps


def _transversal(G: FiniteGroup, H: Subgroup, side: str) -> CosetTransversal:
    factors: list = [None] * G.order
    reps = []

    def claim(r):
        reps.append(r)
        for h in H.members:
            g = G.mul(r, h) if side == "left" else G.mul(h, r)
            factors[g] = (r, h)

    claim(G.identity)
    for g in range(G.order):
        if factors[g] is None:
            claim(g)
    return CosetTransversal(H, side, tuple(reps), tuple(factors))


def left_transversal(G: FiniteGroup, H: Subgroup) -> CosetTransversal:
    """Representatives of the cosets ``gH``: identity first, then least index per coset."""
    return _transversal(G, H, "left")


def right_transversal(G: FiniteGroup, H: Subgroup) -> CosetTransversal:
    """Representatives of the cosets ``Hg``, chosen as in :func:`left_transversal`."""
    return _transversal(G, H, "right")


@dataclass(frozen=True)
class PartialHom:
    source_group: FiniteGroup
    target_group: FiniteGroup
    domain: Subgroup
    image: Subgroup
    mapping: tuple[tuple[int, int], ...]
    is_iso: bool

    def __call__(self, a: int) -> int:
        return self._map[a]

    def preimage(self, b: int) -> int:
        if not self.is_iso:
            raise ValueError("preimage is only defined for injective partial homs")
        return self._inv[b]

    @property
    def _map(self) -> dict:
        try:
            return self.__dict__["_cached_map"]
        except KeyError:
            m = dict(self.mapping)
            object.__setattr__(self, "_cached_map", m)
            return m

    @property
    def _inv(self) -> dict:
        try:
            return self.__dict__["_cached_inv"]
        except KeyError:
            m = {b: a for a, b in self.mapping}
            object.__setattr__(self, "_cached_inv", m)
            return m


def partial_hom_from_mapping(src: FiniteGroup, tgt: FiniteGroup, mapping: Mapping[int, int]) -> PartialHom:
    """Build a :class:`PartialHom` from a fully specified map on a subgroup."""
    dom = tuple(sorted(mapping))
    if not is_subgroup(src, dom):
        raise NotAHomomorphism("domain is not a subgroup")
    for a in dom:
        for b in dom:
            if mapping[src.mul(a, b)] != tgt.mul(mapping[a], mapping[b]):
                raise NotAHomomorphism(
                    f"map({src.element_names[a]}*{src.element_names[b]}) != "
                    f"map({src.element_names[a]})*map({src.element_names[b]})"
                )
    image = tuple(sorted(set(mapping.values())))
    if not is_subgroup(tgt, image):
        raise ImageNotClosed("image is not a subgroup")
    return PartialHom(
        src,
        tgt,
        Subgroup(src, dom),
        Subgroup(tgt, image),
        tuple(sorted(mapping.items())),
        len(image) == len(dom),
    )


def partial_hom(src: FiniteGroup, tgt: FiniteGroup, domain_gens: Sequence[int], gen_images: Sequence[int]) -> PartialHom:
    """Extend ``domain_gens[i] -> gen_images[i]`` multiplicatively.

    Raises :class:`NotAHomomorphism` if the extension is inconsistent.
    """
    if len(domain_gens) != len(gen_images):
        raise NotAHomomorphism("generator and image lists differ in length")
    for b in gen_images:
        if not 0 <= b < tgt.order:
            raise ImageNotClosed(f"image {b} is not an element of the target group")
    m = {src.identity: tgt.identity}
    queue = deque([src.identity])
    while queue:
        a = queue.popleft()
        for s, t in zip(domain_gens, gen_images):
            b, img = src.mul(a, s), tgt.mul(m[a], t)
            if b in m:
                if m[b] != img:
                    raise NotAHomomorphism(
                        f"{src.element_names[b]} would map to both "
                        f"{tgt.element_names[m[b]]} and {tgt.element_names[img]}"
                    )
            else:
                m[b] = img
                queue.append(b)
    return partial_hom_from_mapping(src, tgt, m)


def trivial_hom(src: FiniteGroup, tgt: FiniteGroup) -> PartialHom:
    return partial_hom(src, tgt, [], [])


def word_tree(G: FiniteGroup, gens: Sequence[int]) -> dict[int, tuple[int, ...]]:
    """Breadth-first spanning tree of the Cayley graph: element -> generator word."""
    words = {G.identity: ()}
    queue = deque([G.identity])
    while queue:
        a = queue.popleft()
        for i, s in enumerate(gens):
            b = G.mul(a, s)
            if b not in words:
                words[b] = words[a] + (i,)
                queue.append(b)
    return words
