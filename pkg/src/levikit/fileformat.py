"""Text formats for diagrams and words.

Diagram files are line oriented, ``#`` starts a comment::

    group C4: e a a2 a3          # element names, identity first
    table C4:                    # followed by one row per element
    e  a  a2 a3
    ...
    vertex v group C4
    edge x: v -> v
    dom x: a2                    # generators of the domain subgroup
    map x: a2 -> a2              # their images

Words are whitespace separated tokens: ``[g]`` a group element, ``x`` an
edge, ``x^-1`` its inverse, and an optional leading ``@V`` naming the
domain vertex.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .diagrams import Diagram, DiagramError, EdgeSpec, GroupElem, build_diagram
from .groups import FiniteGroup, GroupError, generating_set, group_from_table
from .groupoid import EdgeLetter, GroupoidNormalForm, GroupoidWord, make_word
from .tensor import NonComposable, TensorElement


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class DiagramSyntaxError(FormatError):
    pass


class DiagramSemanticError(FormatError):
    pass


class WordSyntaxError(FormatError):
    pass


_TOKEN = re.compile(r"\S+")


@dataclass
class _Tok:
    text: str
    col: int


def _tokens(line: str) -> list[_Tok]:
    return [_Tok(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0]


def _header(toks: list[_Tok], lineno: int, keyword: str) -> str:
    # "keyword NAME:" possibly with the colon glued on or separate
    if len(toks) < 2:
        raise DiagramSyntaxError(f"expected '{keyword} NAME:'", lineno, toks[0].col)
    name = toks[1].text
    if name.endswith(":"):
        return name[:-1]
    if len(toks) > 2 and toks[2].text == ":":
        return name
    raise DiagramSyntaxError(f"missing ':' after {keyword} name", lineno, toks[1].col + len(name))


def _after_colon(toks: list[_Tok]) -> list[_Tok]:
    for i, t in enumerate(toks):
        if t.text.endswith(":"):
            return toks[i + 1 :]
        if t.text == ":":
            return toks[i + 1 :]
    return []


def parse_diagram(text: str) -> Diagram:
    lines = [(i + 1, _strip_comment(raw)) for i, raw in enumerate(text.splitlines())]
    lines = [(n, ln) for n, ln in lines if ln.strip()]

    group_names: dict[str, tuple[list[str], int]] = {}
    tables: dict[str, list[list[str]]] = {}
    vertices: list[tuple[str, str, int]] = []
    edges: dict[str, dict] = {}
    edge_order: list[str] = []

    i = 0
    while i < len(lines):
        lineno, line = lines[i]
        toks = _tokens(line)
        kw = toks[0].text
        i += 1
        if kw == "group":
            name = _header(toks, lineno, "group")
            elems = [t.text for t in _after_colon(toks)]
            if not elems:
                raise DiagramSyntaxError(f"group {name!r} lists no elements", lineno, toks[-1].col)
            if name in group_names:
                raise DiagramSemanticError(f"group {name!r} declared twice", lineno)
            group_names[name] = (elems, lineno)
        elif kw == "table":
            name = _header(toks, lineno, "table")
            if name not in group_names:
                raise DiagramSemanticError(f"table for undeclared group {name!r}", lineno, toks[1].col)
            n = len(group_names[name][0])
            inline = [t.text for t in _after_colon(toks)]
            if inline:
                raise DiagramSyntaxError("table rows go on the following lines", lineno, _after_colon(toks)[0].col)
            rows = []
            for _ in range(n):
                if i >= len(lines):
                    raise DiagramSyntaxError(f"table {name!r} needs {n} rows", lineno)
                rlineno, rline = lines[i]
                rtoks = _tokens(rline)
                if len(rtoks) != n:
                    raise DiagramSyntaxError(f"table row has {len(rtoks)} entries, expected {n}", rlineno, rtoks[0].col)
                rows.append([t.text for t in rtoks])
                i += 1
            tables[name] = rows
        elif kw == "vertex":
            if len(toks) != 4 or toks[2].text != "group":
                raise DiagramSyntaxError("expected 'vertex V group NAME'", lineno, toks[0].col)
            vertices.append((toks[1].text, toks[3].text, lineno))
        elif kw == "edge":
            name = _header(toks, lineno, "edge")
            rest = _after_colon(toks)
            if len(rest) != 3 or rest[1].text != "->":
                raise DiagramSyntaxError("expected 'edge X: V1 -> V2'", lineno, rest[0].col if rest else toks[-1].col)
            if name in edges:
                raise DiagramSemanticError(f"edge {name!r} declared twice", lineno)
            edges[name] = {"src": rest[0].text, "tgt": rest[2].text, "line": lineno, "dom": None, "map": None}
            edge_order.append(name)
        elif kw in ("dom", "map"):
            name = _header(toks, lineno, kw)
            if name not in edges:
                raise DiagramSemanticError(f"{kw} for undeclared edge {name!r}", lineno, toks[1].col)
            rest = _after_colon(toks)
            if kw == "dom":
                edges[name]["dom"] = ([t.text for t in rest], lineno)
            else:
                if len(rest) % 3 != 0 or any(rest[k + 1].text != "->" for k in range(0, len(rest), 3)):
                    raise DiagramSyntaxError("expected 'map X: g -> h ...'", lineno, rest[0].col if rest else toks[-1].col)
                pairs = [(rest[k].text, rest[k + 2].text) for k in range(0, len(rest), 3)]
                edges[name]["map"] = (pairs, lineno)
        else:
            raise DiagramSyntaxError(f"unknown keyword {kw!r}", lineno, toks[0].col)

    if not vertices:
        raise DiagramSemanticError("no vertices")

    groups: dict[str, FiniteGroup] = {}
    for name, (elems, lineno) in group_names.items():
        if name not in tables:
            raise DiagramSemanticError(f"group {name!r} has no table", lineno)
        try:
            groups[name] = group_from_table(elems, tables[name], name)
        except GroupError as exc:
            raise DiagramSemanticError(f"group {name!r}: {exc}", lineno) from exc

    vertex_specs = []
    vgroup = {}
    for v, gname, lineno in vertices:
        if gname not in groups:
            raise DiagramSemanticError(f"vertex {v!r} uses undeclared group {gname!r}", lineno)
        if v in vgroup:
            raise DiagramSemanticError(f"vertex {v!r} declared twice", lineno)
        vgroup[v] = groups[gname]
        vertex_specs.append((v, groups[gname]))

    edge_specs = []
    for name in edge_order:
        info = edges[name]
        lineno = info["line"]
        for end in (info["src"], info["tgt"]):
            if end not in vgroup:
                raise DiagramSemanticError(f"edge {name!r} refers to unknown vertex {end!r}", lineno)
        src, tgt = vgroup[info["src"]], vgroup[info["tgt"]]
        mapping = dict(info["map"][0]) if info["map"] else {}
        map_line = info["map"][1] if info["map"] else lineno
        if info["dom"] is not None:
            gens, dom_line = info["dom"]
        else:
            gens, dom_line = list(mapping), map_line
        for g in gens:
            if g not in src.element_names:
                raise DiagramSemanticError(f"edge {name!r}: unknown group element {g!r} in {info['src']}'s group", dom_line)
            if g not in mapping:
                raise DiagramSemanticError(f"edge {name!r}: no image given for generator {g!r}", map_line)
        for g, h in mapping.items():
            if g not in gens:
                raise DiagramSemanticError(f"edge {name!r}: {g!r} is mapped but not listed in dom", map_line)
            if h not in tgt.element_names:
                raise DiagramSemanticError(f"edge {name!r}: unknown group element {h!r} in {info['tgt']}'s group", map_line)
        edge_specs.append(EdgeSpec(name, info["src"], info["tgt"], tuple(gens), tuple(mapping[g] for g in gens)))
        try:
            build_diagram(vertex_specs, edge_specs[-1:])
        except (GroupError, DiagramError) as exc:
            raise DiagramSemanticError(f"edge {name!r}: {exc}", lineno) from exc

    return build_diagram(vertex_specs, edge_specs)


def print_diagram(D: Diagram) -> str:
    names: dict[int, str] = {}
    used: dict[str, FiniteGroup] = {}
    out = []
    for v, G in D.vertices:
        if any(G is g for g in used.values()):
            continue
        name = G.name or f"G_{v}"
        if name in used and used[name] != G:
            name = f"G_{v}"
        if name in used:
            continue
        used[name] = G
        out.append(f"group {name}: {' '.join(G.element_names)}")
        out.append(f"table {name}:")
        for row in G.table:
            out.append(" ".join(G.element_names[k] for k in row))
    for v, G in D.vertices:
        name = next(n for n, g in used.items() if g == G)
        out.append(f"vertex {v} group {name}")
    for x in D.edges:
        out.append(f"edge {x.id}: {x.source} -> {x.target}")
        gens = generating_set(x.hom.domain)
        if gens:
            G, H = x.hom.source_group, x.hom.target_group
            out.append(f"dom {x.id}: {' '.join(G.element_names[g] for g in gens)}")
            out.append(f"map {x.id}: " + " ".join(f"{G.element_names[g]} -> {H.element_names[x.hom(g)]}" for g in gens))
    return "\n".join(out) + "\n"


_WORD_TOKEN = re.compile(r"@(\S+)|\[([^\]\s]+)\]|([^\s\[\]@^]+)(\^-1)?|(\S)")


def _resolve_element(D: Diagram, v: str, name: str, col: int) -> int:
    G = D.group(v)
    if name in G.element_names:
        return G.index(name)
    if name.isdigit() and int(name) < G.order:
        return int(name)
    raise WordSyntaxError(f"unknown group element {name!r} at vertex {v!r}", None, col)


def parse_word(D: Diagram, text: str) -> GroupoidWord:
    raw = []
    domain = None
    for m in _WORD_TOKEN.finditer(text):
        col = m.start() + 1
        at, elem, edge, inv, junk = m.groups()
        if junk is not None:
            raise WordSyntaxError(f"unexpected character {junk!r}", None, col)
        if at is not None:
            if raw or domain is not None:
                raise WordSyntaxError("'@V' must come first", None, col)
            if not D.has_vertex(at):
                raise WordSyntaxError(f"unknown vertex {at!r}", None, col)
            domain = at
        elif elem is not None:
            raw.append(("g", elem, col))
        else:
            if not D.has_edge(edge):
                raise WordSyntaxError(f"unknown edge {edge!r}", None, col)
            raw.append(("x", EdgeLetter(edge, inv is None), col))

    if domain is None:
        first_edge = next((i for i, r in enumerate(raw) if r[0] == "x"), None)
        if first_edge is not None:
            y = raw[first_edge][1]
            e = D.edge(y.edge)
            domain = e.source if y.forward else e.target
        elif not raw:
            raise WordSyntaxError("empty word needs an '@V' domain annotation")
        else:
            name = raw[0][1]
            owners = [v for v in D.vertex_ids if name in D.group(v).element_names]
            if len(D.vertices) == 1:
                owners = D.vertex_ids
            if len(owners) != 1:
                raise WordSyntaxError(f"cannot tell which vertex group {name!r} belongs to; add '@V'", None, raw[0][2])
            domain = owners[0]

    letters = []
    here = domain
    for kind, val, col in raw:
        if kind == "g":
            letters.append(GroupElem(here, _resolve_element(D, here, val, col)))
        else:
            e = D.edge(val.edge)
            start, end = (e.source, e.target) if val.forward else (e.target, e.source)
            if start != here:
                raise NonComposable(f"column {col}: {val.edge}{'' if val.forward else '^-1'} starts at {start!r}, word is at {here!r}")
            letters.append(val)
            here = end
    return make_word(D, letters, domain)


def format_letters(D: Diagram, domain: str, letters) -> str:
    out = []
    for a in letters:
        if isinstance(a, GroupElem):
            G = D.group(a.vertex)
            if a.element != G.identity:
                out.append(f"[{G.element_names[a.element]}]")
        else:
            out.append(a.edge if a.forward else f"{a.edge}^-1")
    if not any(isinstance(a, EdgeLetter) for a in letters):
        if not out:
            out = [f"[{D.group(domain).element_names[D.group(domain).identity]}]"]
        out.insert(0, f"@{domain}")
    return " ".join(out)


def format_normal_form(D: Diagram, nf: GroupoidNormalForm) -> str:
    return format_letters(D, nf.domain, nf.letters())


def format_tensor(D: Diagram, u: TensorElement) -> str:
    letters = []
    for x, t in u.atoms:
        letters += [GroupElem(D.edge(x).source, t), EdgeLetter(x, True)]
    letters.append(GroupElem(u.codomain, u.tail))
    return format_letters(D, u.domain, letters)


def normal_form_json(D: Diagram, nf: GroupoidNormalForm) -> dict:
    return {
        "domain": nf.domain,
        "codomain": nf.codomain,
        "edge_count": nf.edge_count,
        "syllables": [
            {
                "vertex": s.vertex,
                "rep": D.group(s.vertex).element_names[s.rep],
                "edge": s.letter.edge,
                "direction": "forward" if s.letter.forward else "backward",
            }
            for s in nf.syllables
        ],
        "final": D.group(nf.codomain).element_names[nf.final],
        "text": format_normal_form(D, nf),
    }


def tensor_json(D: Diagram, u: TensorElement) -> dict:
    return {
        "domain": u.domain,
        "codomain": u.codomain,
        "length": u.length,
        "atoms": [{"edge": x, "rep": D.group(D.edge(x).source).element_names[t]} for x, t in u.atoms],
        "tail": D.group(u.codomain).element_names[u.tail],
        "text": format_tensor(D, u),
    }
