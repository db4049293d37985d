"""
Hypergraphs with external nodes and the types of the hypergraph calculus.

Nodes of a ``Hypergraph`` are ``0 .. nodes-1`` and edges are addressed by
their position in ``edges``. Every hypergraph here is without isolated
nodes and has pairwise distinct external nodes. Graphs inside ``HDiv`` and
``HTimes`` are stored in canonical form, so type equality is equality up
to isomorphism.

Type text syntax::

    p#2                          primitive of rank 2
    times [3 | 0 2 | p#2: 0 1 ; q#2: 1 2]
    (p#2 div [3 | 0 2 | $2: 0 1 ; r#2: 1 2])
    times @graph.json            graph given by file reference
"""

from __future__ import annotations

import json
import logging
import re
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Optional, Sequence, Union

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from necklace.errors import HypergraphError

LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class HPrim:
    name: str
    rank: int = 2

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise HypergraphError(f"negative rank for {self.name}")

    def __str__(self) -> str:
        return format_hl_type(self)


@dataclass(frozen=True)
class Placeholder:
    """The ``$k`` edge of a denominator."""

    rank: int

    def __str__(self) -> str:
        return f"${self.rank}"


@dataclass(frozen=True)
class HDiv:
    numerator: "HlType"
    denominator: "Hypergraph"

    def __post_init__(self) -> None:
        holes = [e for e in self.denominator.edges if isinstance(e.label, Placeholder)]
        if len(holes) != 1:
            raise HypergraphError(f"denominator needs exactly one $ edge, found {len(holes)}")
        if self.numerator.rank != self.denominator.rank:
            raise HypergraphError(
                f"numerator rank {self.numerator.rank} differs from denominator rank {self.denominator.rank}")
        object.__setattr__(self, "denominator", self.denominator.canonical())

    @property
    def rank(self) -> int:
        return self.denominator.edges[self.hole].label.rank

    @property
    def hole(self) -> int:
        return next(i for i, e in enumerate(self.denominator.edges) if isinstance(e.label, Placeholder))

    def __str__(self) -> str:
        return format_hl_type(self)


@dataclass(frozen=True)
class HTimes:
    body: "Hypergraph"

    def __post_init__(self) -> None:
        if any(isinstance(e.label, Placeholder) for e in self.body.edges):
            raise HypergraphError("a product body cannot contain $ edges")
        object.__setattr__(self, "body", self.body.canonical())

    @property
    def rank(self) -> int:
        return self.body.rank

    def __str__(self) -> str:
        return format_hl_type(self)


HlType = Union[HPrim, HDiv, HTimes]
Label = Union[HPrim, HDiv, HTimes, Placeholder]


def type_size(t: HlType) -> int:
    if isinstance(t, HPrim):
        return 1
    if isinstance(t, HDiv):
        return type_size(t.numerator) + sum(
            type_size(e.label) for e in t.denominator.edges if not isinstance(e.label, Placeholder)) + 1
    return sum(type_size(e.label) for e in t.body.edges) + 1


@lru_cache(maxsize=None)
def label_key(label: Label) -> tuple:
    """Total order on labels used by canonical forms."""
    if isinstance(label, HPrim):
        return (0, label.name, label.rank)
    if isinstance(label, Placeholder):
        return (1, label.rank)
    if isinstance(label, HDiv):
        return (2, label_key(label.numerator), label.denominator.as_key())
    return (3, label.body.as_key())


# ----------------------------------------------------------------------
# hypergraphs

@dataclass(frozen=True)
class Edge:
    label: Label
    att: tuple[int, ...]


@dataclass(frozen=True)
class Hypergraph:
    nodes: int
    edges: tuple[Edge, ...]
    ext: tuple[int, ...]

    def __post_init__(self) -> None:
        edges = tuple(e if isinstance(e, Edge) else Edge(e[0], tuple(e[1])) for e in self.edges)
        object.__setattr__(self, "edges", tuple(Edge(e.label, tuple(e.att)) for e in edges))
        object.__setattr__(self, "ext", tuple(self.ext))
        touched = set()
        for e in self.edges:
            if e.label.rank != len(e.att):
                raise HypergraphError(f"label {e.label} of rank {e.label.rank} attached to {len(e.att)} nodes")
            for v in e.att:
                if not 0 <= v < self.nodes:
                    raise HypergraphError(f"attachment node {v} out of range")
            touched.update(e.att)
        if len(set(self.ext)) != len(self.ext):
            raise HypergraphError(f"external nodes {list(self.ext)} are not distinct")
        if any(not 0 <= v < self.nodes for v in self.ext):
            raise HypergraphError("external node out of range")
        if len(touched) != self.nodes:
            raise HypergraphError(f"isolated nodes {sorted(set(range(self.nodes)) - touched)}")

    @property
    def rank(self) -> int:
        return len(self.ext)

    def __str__(self) -> str:
        return format_graph(self)

    @cached_property
    def incidence(self) -> list[list[tuple[int, int]]]:
        """``(edge, position)`` pairs per node."""
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.nodes)]
        for j, e in enumerate(self.edges):
            for t, v in enumerate(e.att):
                out[v].append((j, t))
        return out

    def as_key(self) -> tuple:
        return (self.nodes, self.ext, tuple((label_key(e.label), e.att) for e in self.edges))

    @cached_property
    def key(self) -> tuple:
        """Isomorphism-invariant memo key."""
        return self.canonical().as_key()

    def canonical(self) -> "Hypergraph":
        return _canonical(self)

    def is_isomorphic(self, other: "Hypergraph") -> bool:
        if (self.nodes, len(self.edges), self.rank) != (other.nodes, len(other.edges), other.rank):
            return False
        matcher = DiGraphMatcher(
            _incidence_digraph(self), _incidence_digraph(other),
            node_match=lambda a, b: a["tag"] == b["tag"],
            edge_match=lambda a, b: a["positions"] == b["positions"],
        )
        return matcher.is_isomorphic()

    def labels(self) -> list[Label]:
        return [e.label for e in self.edges]

    def replace(self, e: int, h: "Hypergraph") -> "Hypergraph":
        return replace_tracked(self, e, h)[0]


def canonical_key(g: Hypergraph) -> tuple:
    return g.key


def iso(g: Hypergraph, h: Hypergraph) -> bool:
    return g.is_isomorphic(h)


def _incidence_digraph(g: Hypergraph) -> nx.DiGraph:
    d = nx.DiGraph()
    ext_pos = {v: i for i, v in enumerate(g.ext)}
    for v in range(g.nodes):
        d.add_node(("v", v), tag=("node", ext_pos.get(v, -1)))
    for j, e in enumerate(g.edges):
        d.add_node(("e", j), tag=("edge", e.label))
        positions: dict[int, list[int]] = defaultdict(list)
        for t, v in enumerate(e.att):
            positions[v].append(t)
        for v, ts in positions.items():
            d.add_edge(("e", j), ("v", v), positions=tuple(ts))
    return d


def _canonical(g: Hypergraph) -> Hypergraph:
    n = g.nodes
    keys = [label_key(e.label) for e in g.edges]
    ext_pos = {v: i for i, v in enumerate(g.ext)}

    def refine(colors: list[int]) -> list[int]:
        while True:
            sigs = [
                (colors[v], tuple(sorted((keys[j], t, tuple(colors[u] for u in g.edges[j].att))
                                         for j, t in g.incidence[v])))
                for v in range(n)
            ]
            ranking = {s: i for i, s in enumerate(sorted(set(sigs)))}
            refined = [ranking[s] for s in sigs]
            if len(ranking) == len(set(colors)):
                return refined
            colors = refined

    best: Optional[tuple] = None
    best_order: list[int] = []

    def search(colors: list[int]) -> None:
        nonlocal best, best_order
        colors = refine(colors)
        cells: dict[int, list[int]] = defaultdict(list)
        for v, c in enumerate(colors):
            cells[c].append(v)
        split = min((c for c, members in cells.items() if len(members) > 1), default=None)
        if split is None:
            edges = tuple(sorted((keys[j], tuple(colors[u] for u in e.att)) for j, e in enumerate(g.edges)))
            candidate = (n, tuple(colors[v] for v in g.ext), edges)
            if best is None or candidate < best:
                best, best_order = candidate, colors
            return
        for v in cells[split]:
            individual = [2 * c + 1 for c in colors]
            individual[v] = 2 * colors[v]
            search(individual)

    search([ext_pos.get(v, len(g.ext)) for v in range(n)])
    order = best_order
    ordered = sorted(((keys[j], tuple(order[u] for u in e.att), e.label) for j, e in enumerate(g.edges)),
                     key=lambda item: (item[0], item[1]))
    return Hypergraph(n, tuple(Edge(label, att) for _, att, label in ordered), tuple(order[v] for v in g.ext))


def replace_tracked(g: Hypergraph, e: int, h: Hypergraph) -> tuple[Hypergraph, list[Optional[int]], list[int]]:
    """``g[e/h]`` plus the new positions of g's edges (None for e) and of h's edges."""
    target = g.edges[e]
    if len(target.att) != h.rank:
        raise HypergraphError(f"cannot plug a rank {h.rank} graph into a rank {len(target.att)} edge")
    node_map: dict[int, int] = dict(zip(h.ext, target.att))
    fresh = g.nodes
    for v in range(h.nodes):
        if v not in node_map:
            node_map[v] = fresh
            fresh += 1
    edges: list[Edge] = []
    g_map: list[Optional[int]] = []
    for j, edge in enumerate(g.edges):
        if j == e:
            g_map.append(None)
            continue
        g_map.append(len(edges))
        edges.append(edge)
    h_map = []
    for edge in h.edges:
        h_map.append(len(edges))
        edges.append(Edge(edge.label, tuple(node_map[v] for v in edge.att)))
    return Hypergraph(fresh, tuple(edges), g.ext), g_map, h_map


def sg(labels: Sequence[Label]) -> Hypergraph:
    """String graph ``v0 -l1-> v1 ... -ln-> vn`` with ext ``v0 vn``."""
    if not labels:
        raise HypergraphError("the string graph of the empty word has a repeated external node")
    for label in labels:
        if label.rank != 2:
            raise HypergraphError(f"string graph labels must have rank 2, {label} has {label.rank}")
    return Hypergraph(len(labels) + 1, tuple(Edge(a, (i, i + 1)) for i, a in enumerate(labels)), (0, len(labels)))


def loop_graph(label: Label) -> Hypergraph:
    if label.rank != 2:
        raise HypergraphError(f"loop label must have rank 2, {label} has {label.rank}")
    return Hypergraph(1, (Edge(label, (0, 0)),), ())


def handle(label: Label) -> Hypergraph:
    """Single edge attached to all nodes, each external in order."""
    return Hypergraph(label.rank, (Edge(label, tuple(range(label.rank))),), tuple(range(label.rank)))


def string_labels(g: Hypergraph) -> Optional[list[Label]]:
    """Labels read along g if g is a string graph, else None."""
    if g.rank != 2 or not g.edges or len(g.edges) != g.nodes - 1:
        return None
    out_edge = {}
    for j, e in enumerate(g.edges):
        if len(e.att) != 2 or e.att[0] in out_edge:
            return None
        out_edge[e.att[0]] = j
    labels, node, seen = [], g.ext[0], set()
    while node != g.ext[1]:
        if node in seen or node not in out_edge:
            return None
        seen.add(node)
        edge = g.edges[out_edge[node]]
        labels.append(edge.label)
        node = edge.att[1]
    return labels if len(labels) == len(g.edges) else None


# ----------------------------------------------------------------------
# text syntax

_HL_TOKEN = re.compile(
    r"\s*(?:(?P<prim>[A-Za-z_][A-Za-z0-9_]*#\d+)|(?P<hole>\$\d+)|(?P<kw>times|div)\b"
    r"|(?P<int>\d+)|(?P<ref>@[^\s\[\]|;:()]+)|(?P<op>[\[\]|;:()]))"
)


class _HlParser:
    def __init__(self, text: str, base: Path) -> None:
        self.text = text
        self.base = base
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _HL_TOKEN.match(text, pos)
            if m is None:
                raise HypergraphError(f"bad type syntax at {pos}: {text[pos:pos + 10]!r}")
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.index = 0

    def peek(self) -> Optional[tuple[str, str, int]]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def expect(self, value: str) -> None:
        tok = self.peek()
        if tok is None or tok[1] != value:
            where = tok[2] if tok else len(self.text)
            raise HypergraphError(f"expected {value!r} at {where} in {self.text!r}")
        self.index += 1

    def done(self) -> bool:
        return self.index >= len(self.tokens)

    def hl_type(self) -> HlType:
        tok = self.peek()
        if tok is None:
            raise HypergraphError(f"unexpected end of {self.text!r}")
        kind, value, _ = tok
        if kind == "prim":
            self.index += 1
            name, rank = value.rsplit("#", 1)
            return HPrim(name, int(rank))
        if value == "times":
            self.index += 1
            return HTimes(self.graph())
        if value == "(":
            self.index += 1
            numerator = self.hl_type()
            self.expect("div")
            denominator = self.graph()
            self.expect(")")
            return HDiv(numerator, denominator)
        raise HypergraphError(f"unexpected {value!r} in {self.text!r}")

    def label(self) -> Label:
        tok = self.peek()
        if tok is not None and tok[0] == "hole":
            self.index += 1
            return Placeholder(int(tok[1][1:]))
        return self.hl_type()

    def ints(self) -> list[int]:
        out = []
        while (tok := self.peek()) is not None and tok[0] == "int":
            out.append(int(tok[1]))
            self.index += 1
        return out

    def graph(self) -> Hypergraph:
        tok = self.peek()
        if tok is not None and tok[0] == "ref":
            self.index += 1
            return load_hypergraph(self.base / tok[1][1:])
        self.expect("[")
        counts = self.ints()
        if len(counts) != 1:
            raise HypergraphError(f"graph literal must start with its node count in {self.text!r}")
        self.expect("|")
        ext = self.ints()
        self.expect("|")
        edges = []
        while (tok := self.peek()) is not None and tok[1] != "]":
            if edges:
                self.expect(";")
            label = self.label()
            self.expect(":")
            edges.append(Edge(label, tuple(self.ints())))
        self.expect("]")
        return Hypergraph(counts[0], tuple(edges), tuple(ext))


def parse_hl_type(text: str, base: Union[str, Path] = ".") -> HlType:
    parser = _HlParser(text, Path(base))
    result = parser.hl_type()
    if not parser.done():
        raise HypergraphError(f"trailing input in {text!r}")
    return result


def parse_hl_label(text: str, base: Union[str, Path] = ".") -> Label:
    parser = _HlParser(text, Path(base))
    result = parser.label()
    if not parser.done():
        raise HypergraphError(f"trailing input in {text!r}")
    return result


def format_graph(g: Hypergraph) -> str:
    edges = " ; ".join(f"{format_label(e.label)}: {' '.join(map(str, e.att))}" for e in g.edges)
    return f"[{g.nodes} | {' '.join(map(str, g.ext))} | {edges}]"


def format_label(label: Label) -> str:
    return str(label) if isinstance(label, Placeholder) else format_hl_type(label)


def format_hl_type(t: HlType) -> str:
    if isinstance(t, HPrim):
        return f"{t.name}#{t.rank}"
    if isinstance(t, HTimes):
        return f"times {format_graph(t.body)}"
    return f"({format_hl_type(t.numerator)} div {format_graph(t.denominator)})"


# ----------------------------------------------------------------------
# JSON and DOT

def hypergraph_to_dict(g: Hypergraph) -> dict:
    return {
        "nodes": list(range(g.nodes)),
        "edges": [{"id": j, "att": list(e.att), "label": format_label(e.label)} for j, e in enumerate(g.edges)],
        "ext": list(g.ext),
    }


def hypergraph_from_dict(data: dict, base: Union[str, Path] = ".") -> Hypergraph:
    try:
        ids = {node: i for i, node in enumerate(data["nodes"])}
        edges = tuple(Edge(parse_hl_label(str(e["label"]), base), tuple(ids[v] for v in e["att"]))
                      for e in data["edges"])
        return Hypergraph(len(ids), edges, tuple(ids[v] for v in data["ext"]))
    except (KeyError, TypeError) as exc:
        raise HypergraphError(f"malformed hypergraph: {exc!r}") from exc


def load_hypergraph(path: Union[str, Path]) -> Hypergraph:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise HypergraphError(f"{path}: {exc}") from exc
    return hypergraph_from_dict(data, path.parent)


def to_dot(g: Hypergraph, name: str = "H") -> str:
    """Rank-2 edges become arrows; other edges become boxes with numbered tentacles."""
    lines = [f"digraph {name} {{"]
    ext_pos = {v: i for i, v in enumerate(g.ext)}
    for v in range(g.nodes):
        label = f"({ext_pos[v] + 1})" if v in ext_pos else ""
        lines.append(f'  n{v} [shape=circle, label="{label}"];')
    for j, e in enumerate(g.edges):
        text = format_label(e.label).replace('"', '\\"')
        if len(e.att) == 2:
            lines.append(f'  n{e.att[0]} -> n{e.att[1]} [label="{text}"];')
            continue
        lines.append(f'  e{j} [shape=box, label="{text}"];')
        for t, v in enumerate(e.att):
            lines.append(f'  e{j} -> n{v} [label="{t + 1}", arrowhead=none];')
    lines.append("}")
    return "\n".join(lines) + "\n"
