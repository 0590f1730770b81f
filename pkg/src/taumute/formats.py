"""Algebra input files and poset export (JSON and DOT)."""

from __future__ import annotations

import json
from fractions import Fraction
from html import escape

from .bqa import AlgebraError, BoundQuiverAlgebra, Quiver, Relation
from .repcat import composition_label, registry
from .taut import ExchangePoset, StPair, g_vectors

ALGEBRA_KEYS = {"vertices", "arrows", "relations"}
ARROW_KEYS = {"name", "from", "to"}
TERM_KEYS = {"coef", "path"}


class FormatError(ValueError):
    """Malformed input file; the message carries a position or a JSON path."""


def _expect(cond: bool, where: str, msg: str) -> None:
    if not cond:
        raise FormatError(f"{where}: {msg}")


def _keys(obj, allowed: set[str], where: str) -> None:
    _expect(isinstance(obj, dict), where, "expected an object")
    extra = sorted(set(obj) - allowed)
    _expect(not extra, where, f"unknown key(s) {', '.join(extra)}")
    missing = sorted(allowed - set(obj))
    _expect(not missing, where, f"missing key(s) {', '.join(missing)}")


def parse_algebra(text: str, name: str = "file") -> BoundQuiverAlgebra:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"line {e.lineno} column {e.colno}: {e.msg}") from None
    _keys(data, ALGEBRA_KEYS, "$")
    n = data["vertices"]
    _expect(isinstance(n, int) and not isinstance(n, bool) and n >= 0, "$.vertices", "expected a non-negative integer")
    _expect(isinstance(data["arrows"], list), "$.arrows", "expected a list")
    edges = []
    for i, a in enumerate(data["arrows"]):
        where = f"$.arrows[{i}]"
        _keys(a, ARROW_KEYS, where)
        _expect(isinstance(a["name"], str) and a["name"], f"{where}.name", "expected a non-empty string")
        for end in ("from", "to"):
            v = a[end]
            _expect(isinstance(v, int) and not isinstance(v, bool) and 1 <= v <= n,
                    f"{where}.{end}", f"expected a vertex in 1..{n}")
        edges.append((a["name"], a["from"], a["to"]))
    _expect(isinstance(data["relations"], list), "$.relations", "expected a list")
    rels = []
    for i, r in enumerate(data["relations"]):
        where = f"$.relations[{i}]"
        _expect(isinstance(r, list) and r, where, "expected a non-empty list of terms")
        terms = []
        for j, t in enumerate(r):
            tw = f"{where}[{j}]"
            _keys(t, TERM_KEYS, tw)
            _expect(isinstance(t["coef"], str), f"{tw}.coef", "expected a rational written as a string")
            try:
                c = Fraction(t["coef"].strip())
            except (ValueError, ZeroDivisionError):
                raise FormatError(f"{tw}.coef: not a rational number: {t['coef']!r}") from None
            _expect(isinstance(t["path"], list) and t["path"] and all(isinstance(x, str) for x in t["path"]),
                    f"{tw}.path", "expected a non-empty list of arrow names")
            terms.append((c, tuple(t["path"])))
        rels.append(Relation(tuple(terms)))
    try:
        return BoundQuiverAlgebra(Quiver.from_edges(n, edges), rels, name=name)
    except AlgebraError as e:
        raise FormatError(str(e)) from None


def algebra_to_json(algebra: BoundQuiverAlgebra) -> str:
    data = {
        "vertices": algebra.n,
        "arrows": [{"name": a.name, "from": a.source, "to": a.target} for a in algebra.quiver.arrows],
        "relations": [[{"coef": str(c), "path": list(p)} for c, p in r.terms] for r in algebra.relations],
    }
    return json.dumps(data, indent=2)


# posets ------------------------------------------------------------------------

def _slot_json(slot) -> list:
    return [slot[0], slot[1]]


def poset_to_dict(poset: ExchangePoset) -> dict:
    a = poset.algebra
    reg = registry(a)
    nodes = []
    for i, p in enumerate(poset.nodes):
        nodes.append({
            "index": i,
            "module": list(p.module),
            "support": list(p.support),
            "summands": [reg.label(j) for j in p.module],
            "composition_factors": [list(reg[j].dims) for j in p.module],
            "dimension_vector": list(p.dim_vector()),
            "g_vectors": [list(g) for g in g_vectors(p)],
        })
    edges = [{"from": i, "to": j, "slot_from": _slot_json(s), "slot_to": _slot_json(t)}
             for i, j, s, t in poset.edges]
    mutations = [{"node": i, "slot": _slot_json(s), "result": j, "case": case, "new_slot": _slot_json(ns)}
                 for (i, s), (j, case, ns) in sorted(poset.mutations.items())]
    return {
        "algebra": a.name,
        "vertices": a.n,
        "complete": poset.complete,
        "cap": poset.cap,
        "nodes": nodes,
        "edges": edges,
        "mutations": mutations,
    }


def poset_to_json(poset: ExchangePoset) -> str:
    return json.dumps(poset_to_dict(poset), indent=2, sort_keys=True)


def poset_from_json(text: str, algebra: BoundQuiverAlgebra) -> ExchangePoset:
    """Rebuild a poset over ``algebra``; module ids refer to that algebra's registry."""
    data = json.loads(text)
    if data.get("vertices") != algebra.n:
        raise FormatError("poset was exported for a different number of vertices")
    nodes = [StPair(algebra, tuple(nd["module"]), tuple(nd["support"])) for nd in data["nodes"]]
    index = {p.key: i for i, p in enumerate(nodes)}
    mutations = {}
    for m in data["mutations"]:
        mutations[(m["node"], tuple(m["slot"]))] = (m["result"], m["case"], tuple(m["new_slot"]))
    return ExchangePoset(algebra, nodes, index, mutations, data["cap"], data["complete"])


def posets_equal(a: ExchangePoset, b: ExchangePoset) -> bool:
    return ([p.key for p in a.nodes] == [p.key for p in b.nodes]
            and a.mutations == b.mutations and a.complete == b.complete and a.cap == b.cap)


def slot_label(algebra: BoundQuiverAlgebra, slot) -> str:
    kind, val = slot
    return registry(algebra).label(val) if kind == "X" else f"vertex {val}"


def _html_label(p: StPair) -> str:
    reg = registry(p.algebra)
    cells = []
    for j in p.module:
        layers = composition_label(reg[j])
        cells.append("<TD>" + "<BR/>".join(escape(x) for x in layers.split("/")) + "</TD>")
    if not cells:
        cells.append("<TD>0</TD>")
    if p.support:
        cells.append("<TD>; " + escape(",".join(f"P{v}" for v in p.support)) + "</TD>")
    return "<<TABLE BORDER=\"0\" CELLBORDER=\"0\"><TR>" + "".join(cells) + "</TR></TABLE>>"


def poset_to_dot(poset: ExchangePoset) -> str:
    lines = [f"digraph \"{poset.algebra.name}\" {{", "  rankdir=LR;", "  node [shape=box];"]
    for i, p in enumerate(poset.nodes):
        lines.append(f"  n{i} [label={_html_label(p)}];")
    for i, j, s, _ in poset.edges:
        lines.append(f"  n{i} -> n{j} [label=\"{escape(slot_label(poset.algebra, s))}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"
