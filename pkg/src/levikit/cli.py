"""levikit command line front end.

Exit codes: 0 success or "true", 1 "false" for decision commands, 2 usage
error, 3 semantic error in the input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bimodules, diagrams, groupoid, groups, tensor, zappa
from .diagrams import GroupElem, classify, diagrams_conjugate
from .fileformat import (
    FormatError,
    format_normal_form,
    format_tensor,
    normal_form_json,
    parse_diagram,
    parse_word,
    tensor_json,
)
from .groupoid import EdgeLetter, GroupoidWord, reduce
from .tensor import CategoryTruncation, TensorCategory

DEFAULT_MAX_LEN = 4

SEMANTIC_ERRORS = (
    FormatError,
    groups.GroupError,
    diagrams.DiagramError,
    diagrams.NotConjugate,
    bimodules.WrongComponent,
    tensor.NonComposable,
    groupoid.RequiresIsomorphisms,
    groupoid.WrongShape,
)


class UsageError(Exception):
    pass


def default_max_len() -> int:
    value = os.environ.get("LEVIKIT_MAX_LEN")
    if value is None:
        return DEFAULT_MAX_LEN
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"LEVIKIT_MAX_LEN must be an integer, got {value!r}") from None


def load(path: str) -> diagrams.Diagram:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_diagram(text)


def as_category_element(cat: TensorCategory, w: GroupoidWord) -> tensor.TensorElement:
    D = cat.diagram
    toks = []
    for a in w.letters:
        if isinstance(a, GroupElem):
            toks.append(a)
        elif not a.forward:
            raise tensor.NonComposable(f"{a.edge}^-1 is not an arrow of the category")
        else:
            e = D.edge(a.edge)
            toks.append(bimodules.RawAtom(D.group(e.source).identity, a.edge, D.group(e.target).identity))
    return cat.normalize(toks, domain=w.domain)


class Output:
    def __init__(self, as_json: bool):
        self.as_json = as_json

    def emit(self, text: str, payload: dict):
        if self.as_json:
            print(json.dumps(payload, sort_keys=True))
        else:
            print(text)


def cmd_validate(args, out: Output) -> int:
    D = load(args.file)
    kind = classify(D)
    out.emit(
        f"valid: {len(D.vertices)} vertices, {len(D.edges)} edges; class {kind.value}",
        {"valid": True, "vertices": len(D.vertices), "edges": len(D.edges), "class": kind.value},
    )
    return 0


def cmd_classify(args, out: Output) -> int:
    kind = classify(load(args.file))
    out.emit(kind.value, {"class": kind.value})
    return 0


def cmd_normal_form(args, out: Output) -> int:
    D = load(args.file)
    w = parse_word(D, args.word)
    if args.category:
        u = as_category_element(TensorCategory(D), w)
        out.emit(format_tensor(D, u), tensor_json(D, u))
    else:
        nf = reduce(D, w)
        out.emit(format_normal_form(D, nf), normal_form_json(D, nf))
    return 0


def cmd_equal(args, out: Output) -> int:
    D = load(args.file)
    w1, w2 = parse_word(D, args.word1), parse_word(D, args.word2)
    same = groupoid.equal(D, w1, w2)
    out.emit("equal" if same else "not-equal", {"equal": same})
    return 0 if same else 1


def cmd_enumerate(args, out: Output) -> int:
    D = load(args.file)
    if not D.has_vertex(args.base):
        raise diagrams.DiagramError(f"unknown vertex {args.base!r}")
    forms = groupoid.vertex_group_words(D, args.base, args.edges)
    texts = [format_normal_form(D, nf) for nf in forms]
    out.emit("\n".join(texts + [f"count: {len(forms)}"]), {"count": len(forms), "normal_forms": [normal_form_json(D, nf) for nf in forms]})
    return 0


def cmd_axioms(args, out: Output) -> int:
    D = load(args.file)
    L = args.max_len if args.max_len is not None else default_max_len()
    ss = zappa.check_axioms(zappa.derive_action(D), L)
    levi = tensor.verify_levi(CategoryTruncation(TensorCategory(D), L))
    lines = ["self-similar action:"] + ["  " + s for s in ss.lines()] + ["Levi category:"] + ["  " + s for s in levi.lines()]
    payload = {
        "max_len": L,
        "self_similar": {n: c.passed for n, c in ss.checks.items()},
        "levi": {n: c.passed for n, c in levi.checks.items()},
        "ok": ss.ok and levi.ok,
    }
    out.emit("\n".join(lines), payload)
    return 0 if ss.ok and levi.ok else 1


def cmd_greens(args, out: Output) -> int:
    D = load(args.file)
    cat = TensorCategory(D)
    u = as_category_element(cat, parse_word(D, args.word1))
    v = as_category_element(cat, parse_word(D, args.word2))
    related = cat.greens(u, v, args.rel)
    out.emit("related" if related else "not-related", {"relation": args.rel, "related": related})
    return 0 if related else 1


def cmd_embed_check(args, out: Output) -> int:
    D = load(args.file)
    L = args.max_len if args.max_len is not None else default_max_len()
    report = groupoid.embedding_check(CategoryTruncation(TensorCategory(D), L))
    out.emit("\n".join(report.lines()), {"max_len": L, "ok": report.ok, "checks": {n: c.passed for n, c in report.checks.items()}})
    return 0 if report.ok else 1


def parse_edge_map(text: str | None) -> dict[str, str] | None:
    if not text:
        return None
    out = {}
    for part in text.split(","):
        part = part.strip()
        for sep in ("=", ":"):
            if sep in part:
                a, b = part.split(sep, 1)
                out[a.strip()] = b.strip()
                break
        else:
            raise UsageError(f"bad edge pair {part!r}; expected X=Y")
    return out


def cmd_conjugate(args, out: Output) -> int:
    D1, D2 = load(args.file1), load(args.file2)
    try:
        witness = diagrams_conjugate(D1, D2, parse_edge_map(args.edges))
    except diagrams.NotConjugate as exc:
        out.emit(f"not-conjugate: {exc}", {"conjugate": False, "reason": str(exc)})
        return 1
    lines = ["conjugate"]
    pairs = []
    for x, y, g, h in witness.pairs:
        ex = D1.edge(x)
        gn = D1.group(ex.source).element_names[g]
        hn = D1.group(ex.target).element_names[h]
        lines.append(f"  {x} -> {y}: alpha = conj by {gn}, beta = conj by {hn}")
        pairs.append({"edge": x, "to": y, "alpha": gn, "beta": hn})
    out.emit("\n".join(lines), {"conjugate": True, "witness": pairs})
    return 0


def cmd_presentation(args, out: Output) -> int:
    pres = groupoid.emit_presentation(load(args.file), args.shape)
    out.emit(str(pres), {"generators": list(pres.generators), "relators": list(pres.relators)})
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")

    parser = argparse.ArgumentParser(prog="levikit", description="Left Rees categories from diagrams of partial homomorphisms.")
    parser.add_argument("--json", action="store_true", default=False, help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="parse a diagram and report its class")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("classify", parents=[common], help="generic, partial-isomorphisms or serre")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("normal-form", parents=[common], help="normal form of a word")
    p.add_argument("file")
    p.add_argument("word")
    p.add_argument("--category", action="store_true", help="normalize in the category instead of the groupoid")
    p.set_defaults(func=cmd_normal_form)

    p = sub.add_parser("equal", parents=[common], help="decide equality of two words in the universal groupoid")
    p.add_argument("file")
    p.add_argument("word1")
    p.add_argument("word2")
    p.set_defaults(func=cmd_equal)

    p = sub.add_parser("enumerate", parents=[common], help="list normal forms of the vertex group at a base vertex")
    p.add_argument("file")
    p.add_argument("--base", required=True)
    p.add_argument("--edges", type=int, required=True, help="maximum number of edge letters")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("axioms", parents=[common], help="check self-similar action and Levi axioms")
    p.add_argument("file")
    p.add_argument("--max-len", type=int, default=None)
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("greens", parents=[common], help="Green's relation between two category elements")
    p.add_argument("file")
    p.add_argument("word1")
    p.add_argument("word2")
    p.add_argument("--rel", choices=["L", "R", "J"], required=True)
    p.set_defaults(func=cmd_greens)

    p = sub.add_parser("embed-check", parents=[common], help="check the category embeds in its universal groupoid")
    p.add_argument("file")
    p.add_argument("--max-len", type=int, default=None)
    p.set_defaults(func=cmd_embed_check)

    p = sub.add_parser("conjugate", parents=[common], help="test two diagrams for conjugacy")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--edges", default=None, help="edge correspondence, e.g. x=y,z=w (default: by id)")
    p.set_defaults(func=cmd_conjugate)

    p = sub.add_parser("presentation", parents=[common], help="HNN or amalgam presentation of the vertex group")
    p.add_argument("file")
    p.add_argument("--shape", choices=["hnn", "amalgam"], required=True)
    p.set_defaults(func=cmd_presentation)
    return parser


def _error(as_json: bool, kind: str, message: str):
    if as_json:
        print(json.dumps({"error": kind, "message": message}, sort_keys=True), file=sys.stderr)
    else:
        print(f"error: {kind}: {message}", file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.json)
    try:
        return args.func(args, out)
    except UsageError as exc:
        _error(args.json, "usage", str(exc))
        return 2
    except SEMANTIC_ERRORS as exc:
        _error(args.json, type(exc).__name__, str(exc))
        return 3


if __name__ == "__main__":
    sys.exit(main())
