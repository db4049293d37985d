"""
Hypergraph Lambek calculus without isolated nodes.

``match_pattern`` is the shared decomposition engine: it finds all ways a
host graph arises from a pattern by plugging graphs into the pattern's
edges. Whole mode covers (->x); anchor mode covers (/->) around a fixed
host edge, leaving the rest of the host as context.

A k-cycle decomposes against ``loop_graph($2)`` in 2k ways: k rotations
and their k reflections. Both glue back to the cycle.
"""

from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, NamedTuple, Optional, Sequence, Union

from necklace.errors import FragmentError, HypergraphError, SearchLimitError
from necklace.formula import Brac, Formula, Over, Prim, Prod, Rev, Sequent, Shift, SystemId, Under, check_fragment
from necklace.hypergraph import (
    Edge,
    HDiv,
    HlType,
    HPrim,
    HTimes,
    Hypergraph,
    Placeholder,
    format_graph,
    format_hl_type,
    handle,
    hypergraph_from_dict,
    loop_graph,
    parse_hl_type,
    sg,
    string_labels,
    type_size,
)

LOG = logging.getLogger(__name__)

DEFAULT_NODE_LIMIT = 24
DEFAULT_HL_MEMO_LIMIT = 200_000


# ----------------------------------------------------------------------
# translation

def neck_h(t: HlType) -> HDiv:
    if t.rank != 2:
        raise HypergraphError(f"neck_h needs a rank 2 type, {format_hl_type(t)} has rank {t.rank}")
    return HDiv(HTimes(loop_graph(t)), loop_graph(Placeholder(2)))


def tr(f: Formula, *, experimental_neck: bool = False) -> HlType:
    """Translate a formula; ``^c`` only with ``experimental_neck``, as ``neck_h``."""
    if isinstance(f, Prim):
        return HPrim(f.name, 2)
    if isinstance(f, Over):
        return HDiv(tr(f.left, experimental_neck=experimental_neck),
                    sg([Placeholder(2), tr(f.right, experimental_neck=experimental_neck)]))
    if isinstance(f, Under):
        return HDiv(tr(f.right, experimental_neck=experimental_neck),
                    sg([tr(f.left, experimental_neck=experimental_neck), Placeholder(2)]))
    if isinstance(f, Prod):
        return HTimes(sg([tr(f.left, experimental_neck=experimental_neck),
                          tr(f.right, experimental_neck=experimental_neck)]))
    if isinstance(f, Brac):
        return neck_h(tr(f.inner, experimental_neck=experimental_neck))
    if isinstance(f, Rev):
        inner = tr(f.inner, experimental_neck=experimental_neck)
        return HTimes(Hypergraph(2, (Edge(inner, (0, 1)),), (1, 0)))
    if isinstance(f, Shift):
        if not experimental_neck:
            raise FragmentError("^c has no translation; use ^b, or the experimental neck flag")
        LOG.warning("translating ^c as neck_h: not faithful to the cyclic shift calculus")
        return neck_h(tr(f.inner, experimental_neck=True))
    raise TypeError(f"not a formula: {f!r}")


@dataclass(frozen=True)
class HlSequent:
    antecedent: Hypergraph
    succedent: HlType

    def __post_init__(self) -> None:
        if any(isinstance(e.label, Placeholder) for e in self.antecedent.edges):
            raise HypergraphError("antecedent contains a $ edge")
        if self.antecedent.rank != self.succedent.rank:
            raise HypergraphError(
                f"antecedent rank {self.antecedent.rank} differs from succedent rank {self.succedent.rank}")

    @classmethod
    def from_sequent(cls, s: Sequent, *, experimental_neck: bool = False) -> "HlSequent":
        labels = [tr(a, experimental_neck=experimental_neck) for a in s.antecedent]
        return cls(sg(labels), tr(s.succedent, experimental_neck=experimental_neck))

    def __str__(self) -> str:
        return f"{format_graph(self.antecedent)} -> {format_hl_type(self.succedent)}"

    def size(self) -> int:
        return sum(type_size(e.label) for e in self.antecedent.edges) + 1 + type_size(self.succedent)


def hl_sequent_from_dict(data: dict, base=".") -> HlSequent:
    try:
        return HlSequent(hypergraph_from_dict(data["antecedent"], base), parse_hl_type(data["succedent"], base))
    except KeyError as exc:
        raise HypergraphError(f"hypergraph sequent lacks {exc}") from exc


def load_hl_sequent(path) -> HlSequent:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise HypergraphError(f"{path}: {exc}") from exc
    return hl_sequent_from_dict(data, path.parent)


# ----------------------------------------------------------------------
# decompositions

class Decomposition(NamedTuple):
    image: tuple[int, ...]
    """Host node of each pattern node."""
    blocks: tuple[Hypergraph, ...]
    """One graph per pattern edge other than the anchor, in pattern order."""
    context: Optional[Hypergraph] = None
    """Anchor mode: the host with the pattern folded back into one edge (the last one)."""


def _node_maps(host: Hypergraph, pattern: Hypergraph, seed: dict[int, int], whole: bool) -> Iterator[dict[int, int]]:
    free = [z for z in range(pattern.nodes) if z not in seed]
    ext = set(pattern.ext)

    def legal(phi: dict[int, int]) -> bool:
        if whole:
            return len(set(phi.values())) == len(phi)
        internal = [phi[z] for z in phi if z not in ext]
        outer = {phi[z] for z in phi if z in ext}
        return (len(set(internal)) == len(internal) and not outer & set(internal)
                and not set(internal) & set(host.ext))

    for choice in itertools.product(range(host.nodes), repeat=len(free)):
        phi = dict(seed)
        phi.update(zip(free, choice))
        if legal(phi):
            yield phi


def _clusters(host: Hypergraph, inner: set[int], skip: Optional[int]) -> list[tuple[list[int], set[int]]]:
    """Host edges grouped through shared non-image nodes."""
    parent = {j: j for j in range(len(host.edges)) if j != skip}

    def find(j: int) -> int:
        while parent[j] != j:
            parent[j] = parent[parent[j]]
            j = parent[j]
        return j

    for v in inner:
        incident = [j for j, _ in host.incidence[v] if j != skip]
        for j in incident[1:]:
            parent[find(j)] = find(incident[0])
    groups: dict[int, list[int]] = {}
    for j in parent:
        groups.setdefault(find(j), []).append(j)
    out = []
    for edges in groups.values():
        nodes = {v for j in edges for v in host.edges[j].att if v in inner}
        out.append((sorted(edges), nodes))
    return out


def _block_graphs(host: Hypergraph, edges: Sequence[int], images: Sequence[int],
                  inner: set[int]) -> Iterator[Hypergraph]:
    """Graphs whose plugging at an edge attached to ``images`` yields ``edges``."""
    rank = len(images)
    internal = sorted({v for j in edges for v in host.edges[j].att if v in inner})
    number = {v: rank + i for i, v in enumerate(internal)}
    slots = []
    for j in edges:
        for t, v in enumerate(host.edges[j].att):
            if v not in inner:
                candidates = [i for i in range(rank) if images[i] == v]
                if not candidates:
                    return
                slots.append(((j, t), candidates))
    for choice in itertools.product(*(c for _, c in slots)):
        if set(choice) != set(range(rank)):
            continue
        picked = {slot: i for (slot, _), i in zip(slots, choice)}
        block_edges = []
        for j in edges:
            att = tuple(picked[(j, t)] if (j, t) in picked else number[v] for t, v in enumerate(host.edges[j].att))
            block_edges.append(Edge(host.edges[j].label, att))
        yield Hypergraph(rank + len(internal), tuple(block_edges), tuple(range(rank)))


def match_pattern(host: Hypergraph, pattern: Hypergraph, *,
                  anchor: Optional[tuple[int, int]] = None) -> Iterator[Decomposition]:
    """All decompositions of ``host`` along ``pattern``, without repeats up to isomorphism.

    ``anchor = (pattern_edge, host_edge)`` pins one pattern edge to a host edge
    and returns the remaining host as context.
    """
    whole = anchor is None
    if whole:
        if host.rank != pattern.rank:
            return
        seed = dict(zip(pattern.ext, host.ext))
    else:
        p_edge, h_edge = anchor
        seed = {}
        for z, x in zip(pattern.edges[p_edge].att, host.edges[h_edge].att):
            if seed.setdefault(z, x) != x:
                return
    slots = [j for j in range(len(pattern.edges)) if whole or j != anchor[0]]
    seen: set[tuple] = set()
    for phi in _node_maps(host, pattern, seed, whole):
        yield from _decompose(host, pattern, phi, slots, anchor, seen)


def _decompose(host: Hypergraph, pattern: Hypergraph, phi: dict[int, int], slots: list[int],
               anchor: Optional[tuple[int, int]], seen: set[tuple]) -> Iterator[Decomposition]:
    whole = anchor is None
    covered = set(phi.values())
    inner = set(range(host.nodes)) - covered
    hidden = {phi[z] for z in phi if z not in pattern.ext}
    clusters = _clusters(host, inner, None if whole else anchor[1])
    context = -1
    targets = []
    for edges, nodes in clusters:
        allowed = []
        touched = {v for j in edges for v in host.edges[j].att}
        if not nodes & set(host.ext):
            for slot in slots:
                images = [phi[z] for z in pattern.edges[slot].att]
                if all(v in inner or v in images for v in touched):
                    allowed.append(slot)
        if not whole and not touched & hidden:
            allowed.append(context)
        if not allowed:
            return
        targets.append(allowed)
    for assignment in itertools.product(*targets):
        if any(slot not in assignment for slot in slots):
            continue
        per_slot = []
        for slot in slots:
            edges = sorted(j for (cluster, _), t in zip(clusters, assignment) if t == slot for j in cluster)
            images = [phi[z] for z in pattern.edges[slot].att]
            per_slot.append(list(_block_graphs(host, edges, images, inner)))
        folded = None
        if not whole:
            folded = _fold_context(host, pattern, phi, anchor, clusters, assignment, context, inner)
            if folded is None:
                continue
        for blocks in itertools.product(*per_slot):
            key = (tuple(b.key for b in blocks), folded.key if folded is not None else None)
            if key in seen:
                continue
            seen.add(key)
            yield Decomposition(tuple(phi[z] for z in range(pattern.nodes)), tuple(blocks), folded)


def _fold_context(host: Hypergraph, pattern: Hypergraph, phi: dict[int, int], anchor: tuple[int, int],
                  clusters, assignment, context: int, inner: set[int]) -> Optional[Hypergraph]:
    """Host minus the pattern image and blocks, plus one edge standing for the pattern."""
    kept_edges = [j for (cluster, _), t in zip(clusters, assignment) if t == context for j in cluster]
    dropped = {phi[z] for z in phi if z not in pattern.ext}
    for (cluster, nodes), t in zip(clusters, assignment):
        if t != context:
            dropped |= nodes
    if set(host.ext) & dropped:
        return None
    keep = sorted(set(range(host.nodes)) - dropped)
    number = {v: i for i, v in enumerate(keep)}
    edges = [Edge(host.edges[j].label, tuple(number[v] for v in host.edges[j].att)) for j in kept_edges]
    numerator = host.edges[anchor[1]].label.numerator
    edges.append(Edge(numerator, tuple(number[phi[z]] for z in pattern.ext)))
    try:
        return Hypergraph(len(keep), tuple(edges), tuple(number[v] for v in host.ext))
    except HypergraphError:
        return None


# ----------------------------------------------------------------------
# proof search

@dataclass(frozen=True)
class HlProof:
    sequent: HlSequent
    rule: str
    premises: tuple["HlProof", ...] = ()

    def nodes(self) -> Iterator["HlProof"]:
        yield self
        for p in self.premises:
            yield from p.nodes()

    def pretty(self, indent: int = 0) -> str:
        lines = [" " * indent + f"{self.sequent}   [{self.rule}]"]
        lines += [p.pretty(indent + 2) for p in self.premises]
        return "\n".join(lines)


@dataclass(frozen=True)
class HlSearchConfig:
    node_limit: int = DEFAULT_NODE_LIMIT
    memo_limit: int = DEFAULT_HL_MEMO_LIMIT
    experimental_neck: bool = False


def is_axiom(s: HlSequent) -> bool:
    g, a = s.antecedent, s.succedent
    return (isinstance(a, HPrim) and len(g.edges) == 1 and g.edges[0].label == a
            and g.edges[0].att == g.ext and g.nodes == len(g.ext))


@dataclass
class HlSearcher:
    config: HlSearchConfig = field(default_factory=HlSearchConfig)

    def __post_init__(self) -> None:
        self._memo: dict[tuple, Optional[HlProof]] = {}

    def derive(self, s: HlSequent) -> Optional[HlProof]:
        proof = self._prove(s)
        LOG.debug("HL search: %d memo entries", len(self._memo))
        return proof

    def _prove(self, s: HlSequent) -> Optional[HlProof]:
        if s.antecedent.nodes > self.config.node_limit:
            raise SearchLimitError(f"antecedent with {s.antecedent.nodes} nodes exceeds the node limit")
        key = (s.antecedent.key, s.succedent)
        if key in self._memo:
            return self._memo[key]
        proof = self._search(s)
        if len(self._memo) >= self.config.memo_limit:
            raise SearchLimitError(f"memo table exceeded {self.config.memo_limit} entries")
        self._memo[key] = proof
        return proof

    def _all(self, sequents: Sequence[HlSequent]) -> Optional[tuple[HlProof, ...]]:
        proofs = []
        for s in sequents:
            p = self._prove(s)
            if p is None:
                return None
            proofs.append(p)
        return tuple(proofs)

    def _search(self, s: HlSequent) -> Optional[HlProof]:
        g, a = s.antecedent, s.succedent
        if isinstance(a, HDiv):
            premise = HlSequent(a.denominator.replace(a.hole, g), a.numerator)
            found = self._prove(premise)
            return HlProof(s, "DivR", (found,)) if found else None
        for j, e in enumerate(g.edges):
            if isinstance(e.label, HTimes):
                found = self._prove(HlSequent(g.replace(j, e.label.body), a))
                return HlProof(s, "TimesL", (found,)) if found else None
        if is_axiom(s):
            return HlProof(s, "Ax")
        if isinstance(a, HTimes):
            for d in match_pattern(g, a.body):
                premises = self._all([HlSequent(b, e.label) for b, e in zip(d.blocks, a.body.edges)])
                if premises is not None:
                    return HlProof(s, "TimesR", premises)
        for j, e in enumerate(g.edges):
            if not isinstance(e.label, HDiv):
                continue
            den = e.label.denominator
            others = [edge.label for k, edge in enumerate(den.edges) if k != e.label.hole]
            for d in match_pattern(g, den, anchor=(e.label.hole, j)):
                premises = self._all([HlSequent(d.context, a)]
                                     + [HlSequent(b, t) for b, t in zip(d.blocks, others)])
                if premises is not None:
                    return HlProof(s, "DivL", premises)
        return None


def hl_derive(s: HlSequent, config: Optional[HlSearchConfig] = None) -> Optional[HlProof]:
    return HlSearcher(config or HlSearchConfig()).derive(s)


def lbrac_decide(s: Sequent, config: Optional[HlSearchConfig] = None) -> bool:
    check_fragment(s, SystemId.LBRAC)
    return hl_derive(HlSequent.from_sequent(s), config) is not None


def hl_cut_compose(left: Union[HlProof, HlSequent], right: Union[HlProof, HlSequent], e0: int) -> HlSequent:
    """Endsequent ``G[e0/H] -> B`` of a cut of ``H -> A`` into ``G -> B``."""
    h = left.sequent if isinstance(left, HlProof) else left
    g = right.sequent if isinstance(right, HlProof) else right
    if not 0 <= e0 < len(g.antecedent.edges):
        raise HypergraphError(f"no edge {e0} in the right antecedent")
    if g.antecedent.edges[e0].label != h.succedent:
        raise HypergraphError(
            f"edge {e0} is labelled {g.antecedent.edges[e0].label}, not {format_hl_type(h.succedent)}")
    return HlSequent(g.antecedent.replace(e0, h.antecedent), g.succedent)


# ----------------------------------------------------------------------
# string-level rules for neck_h

def neck_promotion(s: HlSequent) -> HlSequent:
    """``SG(P) -> neck_h(A)`` from ``SG(P) -> A``."""
    return HlSequent(s.antecedent, neck_h(s.succedent))


def neck_rotation(s: HlSequent, k: int) -> HlSequent:
    """``SG(Q, P) -> neck_h(A)`` from ``SG(P, Q) -> neck_h(A)`` with ``|P| = k``."""
    labels = string_labels(s.antecedent)
    if labels is None:
        raise HypergraphError("rotation needs a string graph antecedent")
    return HlSequent(sg(labels[k:] + labels[:k]), s.succedent)


def neck_monotone(s: HlSequent) -> HlSequent:
    """``neck_h(B)* -> neck_h(A)`` from ``B* -> neck_h(A)``."""
    if len(s.antecedent.edges) != 1:
        raise HypergraphError("neck monotonicity needs a single-edge antecedent")
    return HlSequent(handle(neck_h(s.antecedent.edges[0].label)), s.succedent)
