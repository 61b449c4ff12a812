"""Instance-graph surgery used by mutation and property tests."""

from __future__ import annotations

import dataclasses

from bigtg import Graph, InstanceGraph


def drop_edge(g: InstanceGraph, eid: str) -> InstanceGraph:
    return dataclasses.replace(
        g,
        graph=Graph(
            nodes=g.graph.nodes,
            edges=g.graph.edges - {eid},
            src={e: s for e, s in g.graph.src.items() if e != eid},
            tgt={e: t for e, t in g.graph.tgt.items() if e != eid},
        ),
        edge_types={e: t for e, t in g.edge_types.items() if e != eid},
    )


def drop_node(g: InstanceGraph, nid: str) -> InstanceGraph:
    doomed_edges = {
        e for e in g.graph.edges if g.graph.src[e] == nid or g.graph.tgt[e] == nid
    }
    return dataclasses.replace(
        g,
        graph=Graph(
            nodes=g.graph.nodes - {nid},
            edges=g.graph.edges - doomed_edges,
            src={e: s for e, s in g.graph.src.items() if e not in doomed_edges},
            tgt={e: t for e, t in g.graph.tgt.items() if e not in doomed_edges},
        ),
        node_types={n: t for n, t in g.node_types.items() if n != nid},
        edge_types={e: t for e, t in g.edge_types.items() if e not in doomed_edges},
        attrs={(n, a): v for (n, a), v in g.attrs.items() if n != nid},
    )


def retype_node(g: InstanceGraph, nid: str, new_type: str) -> InstanceGraph:
    return dataclasses.replace(g, node_types={**g.node_types, nid: new_type})


def set_attr(g: InstanceGraph, nid: str, name: str, value) -> InstanceGraph:
    return dataclasses.replace(g, attrs={**g.attrs, (nid, name): value})


def add_edge(g: InstanceGraph, eid: str, etype: str, src: str, tgt: str) -> InstanceGraph:
    return dataclasses.replace(
        g,
        graph=Graph(
            nodes=g.graph.nodes,
            edges=g.graph.edges | {eid},
            src={**g.graph.src, eid: src},
            tgt={**g.graph.tgt, eid: tgt},
        ),
        edge_types={**g.edge_types, eid: etype},
    )


def retarget_edge(
    g: InstanceGraph, eid: str, src: str | None = None, tgt: str | None = None
) -> InstanceGraph:
    new_src = dict(g.graph.src)
    new_tgt = dict(g.graph.tgt)
    if src is not None:
        new_src[eid] = src
    if tgt is not None:
        new_tgt[eid] = tgt
    return dataclasses.replace(
        g, graph=Graph(nodes=g.graph.nodes, edges=g.graph.edges, src=new_src, tgt=new_tgt)
    )


def edges_of_type(g: InstanceGraph, etype: str) -> list[str]:
    return sorted(e for e in g.graph.edges if g.edge_types.get(e) == etype)
