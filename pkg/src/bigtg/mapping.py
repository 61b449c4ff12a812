"""The canonical bridge between bigraphs and typed graphs.

Provides the base type graph modeling bigraph anatomy, its
control-compatible extension for a signature, the encoder that turns a
bigraph into an instance graph (and the decoder back), the arity
well-formedness rule, and the soundness checks that align a bigraph with
its encoding element by element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .bigraph import (
    BASE_NODE_TYPE_NAMES,
    Bigraph,
    Interface,
    Port,
    ReservedControlName,
    Signature,
    validate_bigraph,
)
from .report import Finding, ValidationReport, report_from
from .typedgraph import (
    Graph,
    InstanceGraph,
    Multiplicity,
    TypeGraph,
    check_multiplicities,
    check_typing,
    check_validity,
    node_attrs,
    outgoing,
    symmetric_pairs,
)

# Element kinds of a bigraph; the tags realize the disjointness that the
# index/name substitutions provide on paper.
K_NODE = "node"
K_EDGE = "edge"
K_PORT = "port"
K_SITE = "site"
K_ROOT = "root"
K_INNER = "inner"
K_OUTER = "outer"

_ID_PREFIX = {
    K_NODE: "n:",
    K_EDGE: "e:",
    K_PORT: "p:",
    K_SITE: "s:",
    K_ROOT: "r:",
    K_INNER: "i:",
    K_OUTER: "o:",
}

Element = tuple[str, object]


class InvalidBigraph(Exception):
    """Raised when a bigraph handed to the encoder fails validation."""

    def __init__(self, report: ValidationReport):
        super().__init__("bigraph is not well-formed: " + "; ".join(f.message for f in report.findings))
        self.report = report


class NotCanonical(Exception):
    """The instance graph is not a canonical, fully indexed encoding."""

    def __init__(self, message: str, report: ValidationReport | None = None):
        super().__init__(message)
        self.report = report if report is not None else ValidationReport()


class UntypedControl(Exception):
    """A node is typed by the generic node type instead of a control."""


def base_type_graph() -> TypeGraph:
    """The fixed type graph describing places, links, ports and names."""
    edges = {
        # name: (src, tgt, mult)
        "bPrnt": ("BPlace", "BPlace", Multiplicity(0, 1)),
        "bChld": ("BPlace", "BPlace", Multiplicity(0, None)),
        "bLink": ("BPoint", "BLink", Multiplicity(1, 1)),
        "bPoints": ("BLink", "BPoint", Multiplicity(1, None)),
        "bPorts": ("BNode", "BPort", Multiplicity(0, None)),
        "bNode": ("BPort", "BNode", Multiplicity(1, 1)),
    }
    return TypeGraph(
        graph=Graph(
            nodes=frozenset(BASE_NODE_TYPE_NAMES),
            edges=frozenset(edges),
            src={e: s for e, (s, _, _) in edges.items()},
            tgt={e: t for e, (_, t, _) in edges.items()},
        ),
        inherits=frozenset(
            {
                ("BRoot", "BPlace"),
                ("BNode", "BPlace"),
                ("BSite", "BPlace"),
                ("BPort", "BPoint"),
                ("BInnerName", "BPoint"),
                ("BEdge", "BLink"),
                ("BOuterName", "BLink"),
            }
        ),
        abstracts=frozenset({"BPlace", "BPoint", "BLink"}),
        containments=frozenset({"bChld", "bPorts"}),
        opposites=symmetric_pairs([("bPrnt", "bChld"), ("bLink", "bPoints"), ("bPorts", "bNode")]),
        mult={e: m for e, (_, _, m) in edges.items()},
        attr_decls={
            "BRoot": {"index": "int"},
            "BSite": {"index": "int"},
            "BPort": {"index": "int"},
        },
    )


def extend_for_signature(sig: Signature) -> TypeGraph:
    """Control-compatible extension: one extra node type per control, each
    a subtype of the generic node type."""
    clash = set(sig.names) & set(BASE_NODE_TYPE_NAMES)
    if clash:
        raise ReservedControlName(f"controls collide with base node types: {sorted(clash)}")
    base = base_type_graph()
    return TypeGraph(
        graph=Graph(
            nodes=base.graph.nodes | set(sig.names),
            edges=base.graph.edges,
            src=base.graph.src,
            tgt=base.graph.tgt,
        ),
        inherits=base.inherits | {(c, "BNode") for c in sig.names},
        abstracts=base.abstracts,
        containments=base.containments,
        opposites=base.opposites,
        mult=base.mult,
        attr_decls=base.attr_decls,
    )


def check_arity_rule(g: InstanceGraph, tg: TypeGraph, sig: Signature) -> ValidationReport:
    """Every node typed by a control must own exactly ``arity`` port edges."""
    control_types = {c for c in sig.names if c in tg.node_types}
    findings: list[Finding] = []
    for n in sorted(g.graph.nodes):
        t = g.node_types.get(n)
        if t not in control_types:
            continue
        want = sig.arity(t)
        got = len(outgoing(g, n, "bPorts"))
        if got != want:
            findings.append(
                Finding(
                    "arity",
                    n,
                    f"node of control {t!r} has {got} outgoing 'bPorts' edge(s), arity is {want}",
                )
            )
    return report_from(findings)


@dataclass(frozen=True)
class ElementMap:
    """Bijection between the elements of a bigraph and instance-graph nodes."""

    forward: Mapping[Element, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "forward", dict(self.forward))

    def image(self, element: Element) -> str | None:
        return self.forward.get(element)

    def inverse(self) -> dict[str, Element]:
        return {gid: el for el, gid in self.forward.items()}


def element_id(kind: str, key: object) -> str:
    """Deterministic instance-graph node id for a bigraph element."""
    if kind == K_PORT:
        node, index = key  # type: ignore[misc]
        return f"p:{node}:{index}"
    return _ID_PREFIX[kind] + str(key)


def elements_of(b: Bigraph) -> set[Element]:
    out: set[Element] = set()
    out.update((K_NODE, v) for v in b.nodes)
    out.update((K_EDGE, e) for e in b.edges)
    out.update((K_PORT, Port(v, i)) for v in b.nodes for i in range(b.signature.arity(b.ctrl[v])))
    out.update((K_SITE, i) for i in range(b.inner.width))
    out.update((K_ROOT, i) for i in range(b.outer.width))
    out.update((K_INNER, x) for x in b.inner.names)
    out.update((K_OUTER, y) for y in b.outer.names)
    return out


def _paired_edge_ids(edge_type: str, src: str, tgt: str) -> tuple[str, str, str, str]:
    return (f"{edge_type}:{src}:{tgt}", src, tgt, edge_type)


def encode(b: Bigraph) -> tuple[InstanceGraph, ElementMap]:
    """Encode a valid bigraph as an instance graph over its signature's
    type graph, together with the element bijection.

    Nesting, linking and port ownership each become an opposite pair of
    directed edges; root, site and port indices become ``index``
    attributes. Edges or outer names without any point cannot satisfy the
    one-or-more-points multiplicity of the metamodel and will make the
    encoding fail :func:`check_multiplicities`.
    """
    rep = validate_bigraph(b)
    if not rep.ok:
        raise InvalidBigraph(rep)

    fwd: dict[Element, str] = {el: element_id(el[0], el[1]) for el in elements_of(b)}

    ntypes: dict[str, str] = {}
    attrs: dict[tuple[str, str], int | str] = {}
    for el, gid in fwd.items():
        kind, key = el
        if kind == K_NODE:
            ntypes[gid] = b.ctrl[key]  # controls map identically to node types
        elif kind == K_EDGE:
            ntypes[gid] = "BEdge"
        elif kind == K_PORT:
            ntypes[gid] = "BPort"
            attrs[(gid, "index")] = key.index  # type: ignore[union-attr]
        elif kind == K_SITE:
            ntypes[gid] = "BSite"
            attrs[(gid, "index")] = key  # type: ignore[assignment]
        elif kind == K_ROOT:
            ntypes[gid] = "BRoot"
            attrs[(gid, "index")] = key  # type: ignore[assignment]
        elif kind == K_INNER:
            ntypes[gid] = "BInnerName"
        else:
            ntypes[gid] = "BOuterName"

    edge_ids: dict[str, tuple[str, str, str]] = {}  # id -> (src, tgt, type)

    def add_pair(t_fwd: str, t_rev: str, src: str, tgt: str) -> None:
        eid, s, t, ty = _paired_edge_ids(t_fwd, src, tgt)
        edge_ids[eid] = (s, t, ty)
        eid, s, t, ty = _paired_edge_ids(t_rev, tgt, src)
        edge_ids[eid] = (s, t, ty)

    def place_id(p: object) -> str:
        if isinstance(p, int):
            return element_id(K_SITE, p)
        return element_id(K_NODE, p)

    def parent_id(p: object) -> str:
        if isinstance(p, int):
            return element_id(K_ROOT, p)
        return element_id(K_NODE, p)

    def point_id(p: object) -> str:
        if isinstance(p, Port):
            return element_id(K_PORT, p)
        return element_id(K_INNER, p)

    def target_id(t: str) -> str:
        if t in b.edges:
            return element_id(K_EDGE, t)
        return element_id(K_OUTER, t)

    for child in sorted(b.prnt, key=lambda p: (isinstance(p, str), str(p))):
        add_pair("bPrnt", "bChld", place_id(child), parent_id(b.prnt[child]))
    for point in sorted(b.link, key=lambda p: (isinstance(p, Port), str(p))):
        add_pair("bLink", "bPoints", point_id(point), target_id(b.link[point]))
    for el in sorted(fwd, key=str):
        if el[0] == K_PORT:
            port: Port = el[1]  # type: ignore[assignment]
            add_pair("bNode", "bPorts", element_id(K_PORT, port), element_id(K_NODE, port.node))

    g = InstanceGraph(
        graph=Graph(
            nodes=frozenset(fwd.values()),
            edges=frozenset(edge_ids),
            src={e: s for e, (s, _, _) in edge_ids.items()},
            tgt={e: t for e, (_, t, _) in edge_ids.items()},
        ),
        node_types=ntypes,
        edge_types={e: ty for e, (_, _, ty) in edge_ids.items()},
        attrs=attrs,
    )
    return g, ElementMap(fwd)


def _strip_prefix(kind: str, gid: str) -> str:
    prefix = _ID_PREFIX[kind]
    return gid[len(prefix) :] if gid.startswith(prefix) else gid


def _index_range(
    kind: str, nodes_with_index: list[tuple[str, object]], count_label: str
) -> dict[int, str]:
    """Map indices 0..n-1 to graph nodes, rejecting gaps and duplicates."""
    by_index: dict[int, str] = {}
    for gid, idx in nodes_with_index:
        if idx is None:
            raise NotCanonical(f"{kind} {gid} has no index attribute")
        if not isinstance(idx, int) or isinstance(idx, bool):
            raise NotCanonical(f"{kind} {gid} has a non-integer index")
        if idx in by_index:
            raise NotCanonical(f"duplicate {kind} index {idx}")
        by_index[idx] = gid
    for i in range(len(by_index)):
        if i not in by_index:
            raise NotCanonical(f"{count_label} indices are not the gap-free range 0..{len(by_index) - 1}")
    return by_index


def decode(g: InstanceGraph, sig: Signature) -> tuple[Bigraph, ElementMap]:
    """Rebuild the bigraph that a canonical instance graph encodes.

    Only defined for the canonical variant: strongly typed controls,
    explicit roots/sites/ports, and complete gap-free index attributes.
    Anything else raises :class:`NotCanonical` (or
    :class:`UntypedControl` for nodes typed ``BNode`` directly).
    """
    tg = extend_for_signature(sig)
    rep = (
        check_typing(g, tg)
        .merged(check_validity(g, tg))
        .merged(check_multiplicities(g, tg))
        .merged(check_arity_rule(g, tg, sig))
    )
    if not rep.ok:
        raise NotCanonical("instance graph fails canonical checks", rep)

    control_types = set(sig.names)
    by_type: dict[str, list[str]] = {}
    for n in sorted(g.graph.nodes):
        t = g.node_types[n]
        if t == "BNode":
            raise UntypedControl(f"node {n} is typed 'BNode' instead of a control type")
        key = t if t not in control_types else "#control"
        by_type.setdefault(key, []).append(n)

    fwd: dict[Element, str] = {}

    def recover(kind: str, gids: list[str]) -> dict[str, str]:
        out: dict[str, str] = {}
        for gid in gids:
            orig = _strip_prefix(kind, gid)
            if orig in out:
                raise NotCanonical(f"{kind} identifiers {out[orig]!r} and {gid!r} collide as {orig!r}")
            out[orig] = gid
            fwd[(kind, orig)] = gid
        return out

    nodes = recover(K_NODE, by_type.get("#control", []))
    edges = recover(K_EDGE, by_type.get("BEdge", []))
    inner_names = recover(K_INNER, by_type.get("BInnerName", []))
    outer_names = recover(K_OUTER, by_type.get("BOuterName", []))

    gid_to_node = {gid: orig for orig, gid in nodes.items()}
    ctrl = {orig: g.node_types[gid] for orig, gid in nodes.items()}

    roots = _index_range(
        K_ROOT,
        [(gid, node_attrs(g, gid).get("index")) for gid in by_type.get("BRoot", [])],
        "root",
    )
    sites = _index_range(
        K_SITE,
        [(gid, node_attrs(g, gid).get("index")) for gid in by_type.get("BSite", [])],
        "site",
    )
    for i, gid in roots.items():
        fwd[(K_ROOT, i)] = gid
    for i, gid in sites.items():
        fwd[(K_SITE, i)] = gid
    root_of_gid = {gid: i for i, gid in roots.items()}
    site_of_gid = {gid: i for i, gid in sites.items()}

    # Ports: owner via the unique ownership edge, index per owner gap-free.
    ports_by_owner: dict[str, list[tuple[str, object]]] = {}
    for gid in by_type.get("BPort", []):
        own = outgoing(g, gid, "bNode")
        if len(own) != 1:
            raise NotCanonical(f"port {gid} has {len(own)} ownership edges")
        owner_gid = g.graph.tgt[own[0]]
        if owner_gid not in gid_to_node:
            raise NotCanonical(f"port {gid} owned by non-control node {owner_gid}")
        ports_by_owner.setdefault(owner_gid, []).append((gid, node_attrs(g, gid).get("index")))
    port_of_gid: dict[str, Port] = {}
    for owner_gid, entries in sorted(ports_by_owner.items()):
        indexed = _index_range(K_PORT, entries, f"port (node {gid_to_node[owner_gid]})")
        for i, gid in indexed.items():
            port = Port(gid_to_node[owner_gid], i)
            fwd[(K_PORT, port)] = gid
            port_of_gid[gid] = port

    prnt: dict[object, object] = {}
    for e in sorted(g.graph.edges):
        if g.edge_types[e] != "bPrnt":
            continue
        s, t = g.graph.src[e], g.graph.tgt[e]
        if s in root_of_gid:
            raise NotCanonical(f"root {s} has a parent")
        child: object = site_of_gid[s] if s in site_of_gid else gid_to_node.get(s)
        parent: object = root_of_gid[t] if t in root_of_gid else gid_to_node.get(t)
        if child is None or parent is None:
            raise NotCanonical(f"parent edge {e} connects non-place nodes")
        prnt[child] = parent
    for v in sorted(gid_to_node.values()):
        if v not in prnt:
            raise NotCanonical(f"node {v} has no parent")
    for i in sites:
        if i not in prnt:
            raise NotCanonical(f"site {i} has no parent")

    link: dict[object, str] = {}
    for e in sorted(g.graph.edges):
        if g.edge_types[e] != "bLink":
            continue
        s, t = g.graph.src[e], g.graph.tgt[e]
        point: object
        if s in port_of_gid:
            point = port_of_gid[s]
        else:
            point = next((x for x, gid in inner_names.items() if gid == s), None)
        target = next((y for y, gid in edges.items() if gid == t), None)
        if target is None:
            target = next((y for y, gid in outer_names.items() if gid == t), None)
        if point is None or target is None:
            raise NotCanonical(f"link edge {e} connects non-link nodes")
        link[point] = target

    b = Bigraph(
        signature=sig,
        nodes=frozenset(nodes),
        edges=frozenset(edges),
        ctrl=ctrl,
        prnt=prnt,
        link=link,
        inner=Interface(len(sites), frozenset(inner_names)),
        outer=Interface(len(roots), frozenset(outer_names)),
    )
    return b, ElementMap(fwd)


def check_soundness(b: Bigraph, g: InstanceGraph, emap: ElementMap) -> ValidationReport:
    """Check that ``g`` represents ``b`` exactly under the element map.

    Reports proper typing of every mapped element, the two-way coincidence
    of nesting and linking with the paired directed edges, and the
    consistency of root, site and port index attributes. Defects in the
    map itself (non-bijectivity, dangling images) are reported too rather
    than assumed away.
    """
    findings: list[Finding] = []

    def flag(code: str, location: str, message: str) -> None:
        findings.append(Finding(code, location, message))

    expected = elements_of(b)
    fwd = dict(emap.forward)
    for el in sorted(expected - set(fwd), key=str):
        flag("map-domain", str(el), "bigraph element is not mapped")
    for el in sorted(set(fwd) - expected, key=str):
        flag("map-domain", str(el), "map entry for a non-element")
    images = list(fwd.values())
    if len(set(images)) != len(images):
        dupes = sorted({gid for gid in images if images.count(gid) > 1})
        for gid in dupes:
            flag("map-injective", gid, "two elements map to the same graph node")
    for el, gid in sorted(fwd.items(), key=lambda kv: str(kv[0])):
        if gid not in g.graph.nodes:
            flag("map-image", gid, f"image of {el} is not a graph node")
    for gid in sorted(g.graph.nodes - set(images)):
        flag("map-surjective", gid, "graph node is not the image of any element")

    expected_type = {
        K_EDGE: "BEdge",
        K_SITE: "BSite",
        K_ROOT: "BRoot",
        K_INNER: "BInnerName",
        K_OUTER: "BOuterName",
        K_PORT: "BPort",
    }
    for el, gid in sorted(fwd.items(), key=lambda kv: str(kv[0])):
        if gid not in g.graph.nodes or el not in expected:
            continue
        kind, key = el
        want = b.ctrl[key] if kind == K_NODE else expected_type[kind]
        got = g.node_types.get(gid)
        if got != want:
            flag("sound-typing", gid, f"{kind} element typed {got!r}, expected {want!r}")

    def mapped(el: Element) -> str | None:
        gid = fwd.get(el)
        return gid if gid in g.graph.nodes else None

    def place_el(p: object) -> Element:
        return (K_SITE, p) if isinstance(p, int) else (K_NODE, p)

    def parent_el(p: object) -> Element:
        return (K_ROOT, p) if isinstance(p, int) else (K_NODE, p)

    def point_el(p: object) -> Element:
        return (K_PORT, p) if isinstance(p, Port) else (K_INNER, p)

    def target_el(t: str) -> Element:
        return (K_EDGE, t) if t in b.edges else (K_OUTER, t)

    def check_relation(
        code: str,
        relation: list[tuple[Element, Element]],
        edge_type: str,
        what: str,
    ) -> None:
        graph_pairs = {
            (g.graph.src[e], g.graph.tgt[e])
            for e in g.graph.edges
            if g.edge_types.get(e) == edge_type
        }
        want_pairs: set[tuple[str, str]] = set()
        for child_el, parent_el_ in relation:
            s, t = mapped(child_el), mapped(parent_el_)
            if s is None or t is None:
                flag(code, str(child_el), f"{what} endpoints are not mapped into the graph")
                continue
            want_pairs.add((s, t))
            if (s, t) not in graph_pairs:
                flag(code, str(child_el), f"no {edge_type!r} edge mirrors the bigraph {what} (bigraph->graph)")
        for s, t in sorted(graph_pairs - want_pairs):
            flag(code, f"{edge_type}[{s}->{t}]", f"{edge_type!r} edge has no bigraph {what} (graph->bigraph)")

    nesting = [(place_el(c), parent_el(p)) for c, p in sorted(b.prnt.items(), key=lambda kv: str(kv[0]))]
    check_relation("sound-nesting", nesting, "bPrnt", "nesting")
    linking = [(point_el(p), target_el(t)) for p, t in sorted(b.link.items(), key=lambda kv: str(kv[0]))]
    check_relation("sound-linking", linking, "bLink", "linking")

    def check_indices(code: str, kind: str, count: int, typed_as: str) -> None:
        candidates = sorted(n for n in g.graph.nodes if g.node_types.get(n) == typed_as)
        for i in range(count):
            gid = mapped((kind, i))
            for n in candidates:
                idx = node_attrs(g, n).get("index")
                if (gid == n) != (idx == i):
                    if gid == n:
                        flag(code, n, f"{kind} {i} carries index attribute {idx!r}")
                    else:
                        flag(code, n, f"index attribute {idx!r} clashes with {kind} {i} mapped elsewhere")

    check_indices("sound-root-index", K_ROOT, b.outer.width, "BRoot")
    check_indices("sound-site-index", K_SITE, b.inner.width, "BSite")

    # Port indices are scoped per owning node: only the ports of the same
    # owner compete for the same index values.
    ports_of_owner: dict[str, list[str]] = {}
    for n in sorted(g.graph.nodes):
        if g.node_types.get(n) != "BPort":
            continue
        own = outgoing(g, n, "bNode")
        if len(own) != 1:
            flag("sound-port-index", n, f"port node has {len(own)} ownership edges")
            continue
        ports_of_owner.setdefault(g.graph.tgt[own[0]], []).append(n)
    for v in sorted(b.nodes):
        owner_gid = mapped((K_NODE, v))
        candidates = ports_of_owner.get(owner_gid, []) if owner_gid else []
        for i in range(b.signature.arity(b.ctrl[v])):
            gid = mapped((K_PORT, Port(v, i)))
            for n in candidates:
                idx = node_attrs(g, n).get("index")
                if (gid == n) != (idx == i):
                    if gid == n:
                        flag("sound-port-index", n, f"port ({v},{i}) carries index attribute {idx!r}")
                    else:
                        flag("sound-port-index", n, f"index attribute {idx!r} clashes with port ({v},{i}) mapped elsewhere")

    return report_from(findings)
