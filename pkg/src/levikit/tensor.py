"""The tensor category T(B(D)) in co-ordinatized normal form.

Every element is held as a list of basis atoms ``(x, t)`` with ``t`` a
left coset representative of the domain of ``phi_x`` (standing for the
bimodule element ``[t, x, 1]``), followed by one element of the vertex group
at the codomain.  Two elements are equal exactly when these data agree.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .bimodules import RawAtom, canonical
from .diagrams import Diagram, GroupElem


class NonComposable(ValueError):
    pass


class Invertible(ValueError):
    pass


class PrecompositionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class TensorElement:
    domain: str
    codomain: str
    atoms: tuple[tuple[str, int], ...]
    tail: int

    @property
    def length(self) -> int:
        return len(self.atoms)

    def __len__(self):
        return len(self.atoms)


@dataclass(frozen=True)
class Equal:
    interleaving: tuple[GroupElem, ...]


@dataclass(frozen=True)
class NotEqual:
    pass


@dataclass(frozen=True)
class Left:
    """``a = c u`` and ``d = u b``."""

    u: TensorElement


@dataclass(frozen=True)
class Right:
    """``c = a v`` and ``b = v d``."""

    v: TensorElement


class TensorCategory:
    def __init__(self, diagram: Diagram):
        self.diagram = diagram

    # construction

    def identity(self, v: str) -> TensorElement:
        return TensorElement(v, v, (), self.diagram.group(v).identity)

    def group_element(self, g: GroupElem) -> TensorElement:
        return TensorElement(g.vertex, g.vertex, (), g.element)

    def basis_atoms(self) -> list[tuple[str, int]]:
        D = self.diagram
        return [(x.id, t) for x in D.edges for t in D.T_plus(x.id).reps]

    def atom(self, x: str, t: int | None = None, tail: int | None = None) -> TensorElement:
        D = self.diagram
        e = D.edge(x)
        if t is None:
            t = D.group(e.source).identity
        if t not in D.T_plus(x):
            raise ValueError(f"{t} is not a coset representative for edge {x!r}")
        if tail is None:
            tail = D.group(e.target).identity
        return TensorElement(e.source, e.target, ((x, t),), tail)

    # normal forms

    def _sweep(self, tokens: Sequence, domain: str | None = None):
        """Normalize left to right, returning the element and the carry after each atom."""
        D = self.diagram
        vertex = domain
        carry = None if domain is None else D.group(domain).identity
        atoms = []
        carries = []
        for tok in tokens:
            if isinstance(tok, GroupElem):
                if vertex is None:
                    vertex, carry = tok.vertex, D.group(tok.vertex).identity
                if tok.vertex != vertex:
                    raise NonComposable(f"group element at {tok.vertex!r} follows an arrow ending at {vertex!r}")
                carry = D.group(vertex).mul(carry, tok.element)
            else:
                g, x, h = tok
                e = D.edge(x)
                if vertex is None:
                    vertex, carry = e.source, D.group(e.source).identity
                if e.source != vertex:
                    raise NonComposable(f"atom over {x!r} starts at {e.source!r}, not {vertex!r}")
                G = D.group(e.source)
                t, a = D.T_plus(x).factor(G.mul(carry, g))
                atoms.append((x, t))
                vertex = e.target
                carry = D.group(vertex).mul(e.hom(a), h)
                carries.append(GroupElem(vertex, carry))
        if vertex is None:
            raise NonComposable("empty token list needs an explicit domain")
        start = domain
        if start is None:
            first = tokens[0]
            start = first.vertex if isinstance(first, GroupElem) else D.edge(first[1]).source
        return TensorElement(start, vertex, tuple(atoms), carry), carries

    def normalize(self, tokens: Sequence, domain: str | None = None) -> TensorElement:
        """Normal form of a product of group elements and raw atoms ``(g, x, h)``."""
        return self._sweep(tokens, domain)[0]

    def tokens(self, u: TensorElement) -> list:
        D = self.diagram
        out = []
        for x, t in u.atoms:
            e = D.edge(x)
            out.append(RawAtom(t, x, D.group(e.target).identity))
        out.append(GroupElem(u.codomain, u.tail))
        return out

    def compose(self, u: TensorElement, v: TensorElement) -> TensorElement:
        if u.codomain != v.domain:
            raise NonComposable(f"codomain {u.codomain!r} != domain {v.domain!r}")
        D = self.diagram
        carry = u.tail
        vertex = u.codomain
        atoms = list(u.atoms)
        for x, t in v.atoms:
            e = D.edge(x)
            t2, a = D.T_plus(x).factor(D.group(vertex).mul(carry, t))
            atoms.append((x, t2))
            vertex = e.target
            carry = e.hom(a)
        return TensorElement(u.domain, v.codomain, tuple(atoms), D.group(vertex).mul(carry, v.tail))

    def compose_all(self, *elems: TensorElement) -> TensorElement:
        out = elems[0]
        for v in elems[1:]:
            out = self.compose(out, v)
        return out

    def length(self, u: TensorElement) -> int:
        return len(u.atoms)

    def is_invertible(self, u: TensorElement) -> bool:
        return not u.atoms

    def inverse(self, u: TensorElement) -> TensorElement:
        if u.atoms:
            raise ValueError("only length-0 elements are invertible")
        return TensorElement(u.domain, u.codomain, (), self.diagram.group(u.domain).inv(u.tail))

    # witnesses

    def tensor_equal_with_witness(self, xs: Sequence, ys: Sequence) -> Equal | NotEqual:
        """Decide ``x1 (x) ... (x) xn == y1 (x) ... (x) yn`` for raw atom lists.

        On equality the interleaving ``g1 .. g_{n-1}`` satisfies
        ``y1 = x1 g1``, ``yi = g_{i-1}^-1 xi gi`` and ``yn = g_{n-1}^-1 xn``.
        """
        xs, ys = [RawAtom(*a) for a in xs], [RawAtom(*a) for a in ys]
        if len(xs) != len(ys):
            return NotEqual()
        if not xs:
            return Equal(())
        u, cs = self._sweep(xs)
        v, ds = self._sweep(ys)
        if u != v:
            return NotEqual()
        gs = []
        for c, d in zip(cs[:-1], ds[:-1]):
            G = self.diagram.group(c.vertex)
            gs.append(GroupElem(c.vertex, G.mul(G.inv(c.element), d.element)))
        return Equal(tuple(gs))

    def check_interleaving(self, xs: Sequence, ys: Sequence, gs: Sequence[GroupElem]) -> bool:
        """Verify the interleaving equations in the bimodule, atom by atom."""
        D = self.diagram
        n = len(xs)
        if len(ys) != n or len(gs) != max(n - 1, 0):
            return False
        for i, (x, y) in enumerate(zip(xs, ys)):
            g, xe, h = x
            e = D.edge(xe)
            G, H = D.group(e.source), D.group(e.target)
            left = G.identity if i == 0 else G.inv(gs[i - 1].element)
            right = H.identity if i == n - 1 else gs[i].element
            if i > 0 and gs[i - 1].vertex != e.source:
                return False
            if i < n - 1 and gs[i].vertex != e.target:
                return False
            lhs = canonical(D, *y)
            rhs = canonical(D, G.mul(left, g), xe, H.mul(h, right))
            if lhs != rhs:
                return False
        return True

    def equidivisibility_witness(self, a, b, c, d) -> Left | Right:
        if self.compose(a, b) != self.compose(c, d):
            raise PrecompositionMismatch("a*b and c*d differ")
        if len(a) >= len(c):
            u = self._bridge(c, a)
            if self.compose(c, u) != a or self.compose(u, b) != d:
                raise RuntimeError("left witness failed verification")
            return Left(u)
        v = self._bridge(a, c)
        if self.compose(a, v) != c or self.compose(v, d) != b:
            raise RuntimeError("right witness failed verification")
        return Right(v)

    def _bridge(self, short: TensorElement, long: TensorElement) -> TensorElement:
        # solve long = short * w, given short's atoms are a prefix of long's
        k = len(short)
        if long.atoms[:k] != short.atoms:
            raise PrecompositionMismatch("atom prefixes disagree")
        vertex = short.codomain
        G = self.diagram.group(vertex)
        rest = [RawAtom(t, x, self.diagram.group(self.diagram.edge(x).target).identity) for x, t in long.atoms[k:]]
        toks = [GroupElem(vertex, G.inv(short.tail))] + rest + [GroupElem(long.codomain, long.tail)]
        return self.normalize(toks)

    def atomic_factorization(self, u: TensorElement) -> list[TensorElement]:
        if not u.atoms:
            raise Invertible("invertible elements have no atomic factorization")
        out = []
        D = self.diagram
        for i, (x, t) in enumerate(u.atoms):
            last = i == len(u.atoms) - 1
            out.append(self.atom(x, t, u.tail if last else None))
        return out

    def greens(self, u: TensorElement, v: TensorElement, relation: str) -> bool:
        """Green's L, R or J relation, decided by search over vertex groups."""
        relation = relation.upper()
        D = self.diagram
        if relation == "R":
            if u.domain != v.domain or u.codomain != v.codomain:
                return False
            return any(self.compose(v, self.group_element(GroupElem(v.codomain, h))) == u for h in D.group(v.codomain).elements())
        if relation == "L":
            if u.domain != v.domain or u.codomain != v.codomain:
                return False
            return any(self.compose(self.group_element(GroupElem(v.domain, g)), v) == u for g in D.group(v.domain).elements())
        if relation == "J":
            if u.domain != v.domain or u.codomain != v.codomain or len(u) != len(v):
                return False
            for g in D.group(v.domain).elements():
                gv = self.compose(self.group_element(GroupElem(v.domain, g)), v)
                for h in D.group(v.codomain).elements():
                    if self.compose(gv, self.group_element(GroupElem(v.codomain, h))) == u:
                        return True
            return False
        raise ValueError(f"unknown relation {relation!r}; expected L, R or J")


class CategoryTruncation:
    """All elements of length at most ``max_length``."""

    def __init__(self, category: TensorCategory, max_length: int = 4):
        self.category = category
        self.diagram = category.diagram
        self.max_length = max_length
        self.elements = self._enumerate()
        self._by_hom = defaultdict(list)
        for u in self.elements:
            self._by_hom[(u.domain, u.codomain)].append(u)

    def _enumerate(self) -> list[TensorElement]:
        D = self.diagram
        basis = self.category.basis_atoms()
        out = []
        paths = [(v, v, ()) for v in D.vertex_ids]
        for n in range(self.max_length + 1):
            for start, end, atoms in paths:
                for tail in D.group(end).elements():
                    out.append(TensorElement(start, end, atoms, tail))
            nxt = []
            for start, end, atoms in paths:
                for x, t in basis:
                    e = D.edge(x)
                    if e.source == end:
                        nxt.append((start, e.target, atoms + ((x, t),)))
            paths = nxt
        return out

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def compose(self, u, v):
        return self.category.compose(u, v)

    def length(self, u) -> int:
        return self.category.length(u)

    def identity(self, v: str):
        return self.category.identity(v)

    def hom(self, e: str, f: str) -> list:
        return self._by_hom.get((e, f), [])

    def starting_at(self, e: str) -> list:
        return [u for u in self.elements if u.domain == e]

    def composable_pairs(self, total: int | None = None) -> Iterable[tuple]:
        """Composable pairs, optionally with ``length(a) + length(b) <= total``."""
        starting = defaultdict(list)
        for u in self.elements:
            starting[u.domain].append(u)
        for a in self.elements:
            for b in starting[a.codomain]:
                if total is None or self.length(a) + self.length(b) <= total:
                    yield a, b


def expected_count(D: Diagram, n: int, e: str, f: str) -> int:
    """Number of length-``n`` elements from ``e`` to ``f``, counted from transversal sizes."""
    if n == 0:
        return D.group(e).order if e == f else 0
    counts = {v: 0 for v in D.vertex_ids}
    counts[e] = 1
    for _ in range(n):
        new = {v: 0 for v in D.vertex_ids}
        for x in D.edges:
            new[x.target] += counts[x.source] * len(D.T_plus(x.id))
        counts = new
    return counts[f] * D.group(f).order


@dataclass
class CheckResult:
    name: str
    passed: bool = True
    checked: int = 0
    counterexample: tuple | None = None

    def fail(self, *witness):
        if self.passed:
            self.passed = False
            self.counterexample = witness


@dataclass
class Report:
    checks: dict = field(default_factory=dict)

    def add(self, name: str) -> CheckResult:
        self.checks[name] = CheckResult(name)
        return self.checks[name]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def __bool__(self):
        return self.ok

    def failures(self) -> list[str]:
        return [n for n, c in self.checks.items() if not c.passed]

    def lines(self) -> list[str]:
        out = []
        for c in self.checks.values():
            status = "pass" if c.passed else "FAIL"
            line = f"{c.name}: {status} ({c.checked} checked)"
            if c.counterexample is not None:
                line += f" counterexample: {c.counterexample}"
            out.append(line)
        return out


def _invertible_by_search(trunc: CategoryTruncation, u) -> bool:
    idu, idc = trunc.identity(u.domain), trunc.identity(u.codomain)
    for v in trunc.hom(u.codomain, u.domain):
        if trunc.compose(u, v) == idu and trunc.compose(v, u) == idc:
            return True
    return False


def factorizations(trunc: CategoryTruncation) -> dict:
    """Map each product of length <= L to its factorizations ``(a, b)`` in the truncation."""
    out = defaultdict(list)
    for a, b in trunc.composable_pairs(trunc.max_length):
        out[trunc.compose(a, b)].append((a, b))
    return out


def verify_levi(trunc: CategoryTruncation) -> Report:
    """Exhaustively check the Levi category axioms on a truncation.

    LF1 on every composable pair, LF2/LF3 against invertibility and
    atomicity decided by search, and equidivisibility on every quadruple
    ``ab = cd`` with product inside the truncation.
    """
    report = Report()
    lf1, lf2, lf3 = report.add("LF1"), report.add("LF2"), report.add("LF3")
    eq = report.add("equidivisible")
    nonunit = report.add("has-noninvertible")

    for a, b in trunc.composable_pairs():
        lf1.checked += 1
        if trunc.length(trunc.compose(a, b)) != trunc.length(a) + trunc.length(b):
            lf1.fail(a, b)

    invertible = {u: _invertible_by_search(trunc, u) for u in trunc.elements}
    for u, inv in invertible.items():
        lf2.checked += 1
        if inv != (trunc.length(u) == 0):
            lf2.fail(u)
    nonunit.checked = len(invertible)
    if all(invertible.values()):
        nonunit.fail("every element is invertible")

    facts = factorizations(trunc)
    for u in trunc.elements:
        if trunc.length(u) > trunc.max_length:
            continue
        lf3.checked += 1
        atom = not invertible[u] and all(invertible.get(b, False) or invertible.get(c, False) for b, c in facts.get(u, []))
        if atom != (trunc.length(u) == 1):
            lf3.fail(u)

    cat = trunc.category
    for z, pairs in facts.items():
        for (a, b), (c, d) in itertools.product(pairs, repeat=2):
            eq.checked += 1
            if not _has_interpolant(trunc, cat, a, b, c, d):
                eq.fail(a, b, c, d)
    return report


def _has_interpolant(trunc, cat, a, b, c, d) -> bool:
    try:
        w = cat.equidivisibility_witness(a, b, c, d)
    except (PrecompositionMismatch, RuntimeError, NonComposable):
        w = None
    if isinstance(w, Left):
        if trunc.compose(c, w.u) == a and trunc.compose(w.u, b) == d:
            return True
    elif isinstance(w, Right):
        if trunc.compose(a, w.v) == c and trunc.compose(w.v, d) == b:
            return True
    # witness unavailable or rejected by this truncation's composition: search
    for u in trunc.hom(c.codomain, a.codomain):
        if trunc.compose(c, u) == a and trunc.compose(u, b) == d:
            return True
    for v in trunc.hom(a.codomain, c.codomain):
        if trunc.compose(a, v) == c and trunc.compose(v, d) == b:
            return True
    return False


def cancellation_witness(trunc: CategoryTruncation, side: str = "left"):
    """Return ``(a, b, c)`` with ``ab = ac, b != c`` (left) or ``ba = ca, b != c`` (right), or None."""
    starting, ending = defaultdict(list), defaultdict(list)
    for u in trunc.elements:
        starting[u.domain].append(u)
        ending[u.codomain].append(u)
    for a in trunc.elements:
        seen = {}
        others = starting[a.codomain] if side == "left" else ending[a.domain]
        for b in others:
            p = trunc.compose(a, b) if side == "left" else trunc.compose(b, a)
            if p in seen and seen[p] != b:
                return (a, seen[p], b)
            seen[p] = b
    return None


def is_left_cancellative(trunc: CategoryTruncation) -> bool:
    return cancellation_witness(trunc, "left") is None


def is_right_cancellative(trunc: CategoryTruncation) -> bool:
    return cancellation_witness(trunc, "right") is None


def is_right_rigid(trunc: CategoryTruncation) -> bool:
    """``aC`` and ``bC`` meeting forces one to contain the other, checked inside the truncation."""
    facts = factorizations(trunc)
    left_factors = {z: {a for a, _ in pairs} for z, pairs in facts.items()}
    for prefixes in left_factors.values():
        for a, b in itertools.combinations(prefixes, 2):
            if b not in left_factors.get(a, ()) and a not in left_factors.get(b, ()):
                return False
    return True


def _atom_key(D: Diagram, u: TensorElement):
    (x, t), = u.atoms
    reps = D.T_plus(x).reps
    ident = D.group(u.codomain).identity
    return (D.edge_position(x), reps.index(t), u.tail != ident, u.tail)


def atom_transversal(trunc: CategoryTruncation) -> list[TensorElement]:
    """Least atom of each J-class among the atoms of the truncation."""
    D = trunc.diagram
    cat = trunc.category
    atoms = sorted((u for u in trunc.elements if trunc.length(u) == 1), key=lambda u: _atom_key(D, u))
    chosen: list[TensorElement] = []
    for u in atoms:
        if not any(cat.greens(u, r, "J") for r in chosen):
            chosen.append(u)
    if trunc.max_length >= 1:
        expected = [cat.atom(x.id) for x in D.edges]
        assert chosen == expected, "J-classes of atoms should be exactly the edges"
    return chosen


def is_local_monoid_atom(trunc: CategoryTruncation, u: TensorElement) -> bool:
    """Is ``u`` an atom of the local monoid ``eCe`` (factorizations restricted to eCe)?"""
    e = u.domain
    if u.codomain != e:
        raise ValueError("element is not in a local monoid")
    cat = trunc.category
    local = trunc.hom(e, e)
    if cat.is_invertible(u):
        return False
    for b in local:
        for c in local:
            if trunc.compose(b, c) == u and not cat.is_invertible(b) and not cat.is_invertible(c):
                return False
    return True
