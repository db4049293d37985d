"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from necklace.formula import Brac, Over, Prim, Prod, Rev, Sequent, Shift, Under
from necklace.hypergraph import Edge, HPrim, Hypergraph

BINARY = (Under, Over, Prod)


def formulas(alphabet=("p", "q"), unary=(), max_leaves=4):
    leaves = st.sampled_from([Prim(a) for a in alphabet])

    def extend(children):
        options = [st.builds(op, children, children) for op in BINARY]
        options += [st.builds(op, children) for op in unary]
        return st.one_of(options)

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@st.composite
def sequents(draw, alphabet=("p", "q"), unary=(), max_len=3, max_leaves=3):
    n = draw(st.integers(1, max_len))
    antecedent = tuple(draw(formulas(alphabet, unary, max_leaves)) for _ in range(n))
    return Sequent(antecedent, draw(formulas(alphabet, unary, max_leaves)))


NECK = (Shift,)
REV_BRAC = (Rev, Brac)


@st.composite
def hypergraphs(draw, rank, max_nodes=4, max_edges=3):
    """Hypergraphs with primitive labels; untouched nodes get a rank 1 ``u`` edge."""
    n = draw(st.integers(max(rank, 1), max_nodes))
    ext = tuple(draw(st.permutations(range(n)))[:rank])
    edges = []
    for _ in range(draw(st.integers(1, max_edges))):
        k = draw(st.integers(0, 3))
        att = tuple(draw(st.integers(0, n - 1)) for _ in range(k))
        edges.append(Edge(HPrim(draw(st.sampled_from("abc")), k), att))
    touched = {v for e in edges for v in e.att}
    edges += [Edge(HPrim("u", 1), (v,)) for v in range(n) if v not in touched]
    return Hypergraph(n, tuple(edges), ext)


@st.composite
def replacement_triples(draw):
    """``(d, d0, g, e0, h)`` with g fitting edge d0 of d and h fitting edge e0 of g."""
    d = draw(hypergraphs(draw(st.integers(0, 2))))
    d0 = draw(st.integers(0, len(d.edges) - 1))
    g = draw(hypergraphs(d.edges[d0].label.rank))
    e0 = draw(st.integers(0, len(g.edges) - 1))
    h = draw(hypergraphs(g.edges[e0].label.rank))
    return d, d0, g, e0, h
