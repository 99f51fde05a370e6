"""Brute-force pearl diagram enumeration, written independently of the package.

Every multiset of edges with bounded weight and height is generated on
labeled vertices, then filtered with networkx graph checks.
"""

import itertools

import networkx as nx

from bielliptic.diagram import Edge, PearlDiagram, Vertex


def _ok(kinds, edges):
    n = len(kinds)
    nodes = range(1, n + 1)
    flats = {i for i in nodes if kinds[i - 1] == "flat"}
    for t, h, w, hh in edges:
        if hh < (0 if t < h else 1):
            return False
    for v in nodes:
        ins = [e for e in edges if e[1] == v]
        outs = [e for e in edges if e[0] == v]
        if sum(e[2] for e in ins) != sum(e[2] for e in outs):
            return False
        if v in flats and (len(ins) != 1 or len(outs) != 1):
            return False
    g = nx.MultiGraph()
    g.add_nodes_from(nodes)
    g.add_edges_from((t, h) for t, h, _, _ in edges)
    if not nx.is_connected(g):
        return False
    b1 = g.number_of_edges() - n + 1
    if len(flats) != b1 - 1:
        return False
    rest = g.subgraph([v for v in nodes if v not in flats])
    for comp in nx.connected_components(rest):
        sub = rest.subgraph(comp)
        if sub.number_of_edges() - sub.number_of_nodes() + 1 != 1:
            return False
    return True


def brute_force_diagrams(g, a, b):
    n = g - 1
    out = []
    pairs = [(t, h) for t in range(1, n + 1) for h in range(1, n + 1)]
    cands = [(t, h, w, hh) for t, h in pairs for w in range(1, b + 1) for hh in range(0, b // w + 1)]
    for kinds in itertools.product(("flat", "nonflat"), repeat=n):
        nnf = kinds.count("nonflat")
        if nnf == 0 or nnf > a:
            continue
        b1 = g - nnf
        m = b1 + n - 1
        for edges in itertools.combinations_with_replacement(cands, m):
            if sum(w * hh for _, _, w, hh in edges) != b or not _ok(kinds, edges):
                continue
            nf = [i + 1 for i, k in enumerate(kinds) if k == "nonflat"]
            for avals in itertools.product(range(1, a + 1), repeat=nnf):
                if sum(avals) != a:
                    continue
                amap = dict(zip(nf, avals))
                verts = [Vertex(i + 1, k, amap.get(i + 1)) for i, k in enumerate(kinds)]
                out.append(PearlDiagram(verts, [Edge(*e) for e in edges]))
    return out
