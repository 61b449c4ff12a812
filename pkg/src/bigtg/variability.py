"""Product-line variability for the graph-based bigraph representation.

The fixed feature model spans one alternative (strong vs. weak typing)
and three optional explicit/indexed element groups (roots, sites, ports).
A 150% type graph superimposes every variant behind presence conditions;
deriving a configuration keeps the elements whose condition holds.
Instance graphs are reconfigured by a fixed sequence of conditional
deltas applied to the canonical encoding.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Mapping

from .bigraph import BASE_NODE_TYPE_NAMES, Signature
from .mapping import NotCanonical
from .report import Finding, ValidationReport, report_from
from .typedgraph import Graph, InstanceGraph, Multiplicity, TypeGraph

#: Selectable leaf features: the typing alternative and the three
#: explicit-representation/index option pairs. Structuring features of the
#: model tree are implied and never part of a configuration.
FEATURE_LEAVES = ("ST", "WT", "ER", "RI", "ES", "SI", "EP", "PI")
_REQUIRES = (("RI", "ER"), ("SI", "ES"), ("PI", "EP"))

# Presence conditions: a feature name, or ("not"|"and"|"or"|"implies", ...).
Formula = str | tuple


class InvalidConfig(Exception):
    def __init__(self, report: ValidationReport):
        super().__init__("invalid feature configuration: " + "; ".join(f.message for f in report.findings))
        self.report = report


def eval_formula(formula: Formula, selected: frozenset[str] | set[str]) -> bool:
    if isinstance(formula, str):
        return formula in selected
    op, *args = formula
    if op == "not":
        return not eval_formula(args[0], selected)
    if op == "and":
        return all(eval_formula(a, selected) for a in args)
    if op == "or":
        return any(eval_formula(a, selected) for a in args)
    if op == "implies":
        return (not eval_formula(args[0], selected)) or eval_formula(args[1], selected)
    raise ValueError(f"unknown connective {op!r}")


@dataclass(frozen=True)
class FeatureConfig:
    """A set of selected leaf features."""

    selected: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "selected", frozenset(self.selected))

    @classmethod
    def canonical(cls) -> "FeatureConfig":
        return cls(frozenset({"ST", "ER", "RI", "ES", "SI", "EP", "PI"}))

    def ordered(self) -> tuple[str, ...]:
        return tuple(f for f in FEATURE_LEAVES if f in self.selected)


def validate_config(cfg: FeatureConfig) -> ValidationReport:
    """Check a configuration against the fixed feature model."""
    findings: list[Finding] = []
    for f in sorted(cfg.selected - set(FEATURE_LEAVES)):
        findings.append(Finding("cfg-unknown-feature", f, f"unknown feature {f!r}"))
    chosen = cfg.selected & {"ST", "WT"}
    if len(chosen) != 1:
        findings.append(
            Finding("cfg-alternative", "ST|WT", "alternative group requires exactly one of ST, WT")
        )
    for dependent, required in _REQUIRES:
        if dependent in cfg.selected and required not in cfg.selected:
            findings.append(Finding("cfg-requires", dependent, f"{dependent} requires {required}"))
    return report_from(findings)


def enumerate_configs() -> list[FeatureConfig]:
    """All valid configurations in a fixed, deterministic order."""
    out: list[FeatureConfig] = []
    for typing in ("ST", "WT"):
        for roots in ((), ("ER",), ("ER", "RI")):
            for sites in ((), ("ES",), ("ES", "SI")):
                for ports in ((), ("EP",), ("EP", "PI")):
                    out.append(FeatureConfig(frozenset((typing,) + roots + sites + ports)))
    return out


# Keys into the annotation table of a 150% type graph.
def node_key(t: str) -> tuple:
    return ("node", t)


def edge_key(e: str) -> tuple:
    return ("edge", e)


def inherits_key(sub: str, sup: str) -> tuple:
    return ("inherits", sub, sup)


def attr_key(t: str, a: str) -> tuple:
    return ("attr", t, a)


@dataclass(frozen=True)
class AnnotatedTypeGraph:
    """A 150% type graph: the superimposition of all variants, with
    presence conditions on the variable elements."""

    base: TypeGraph
    annotations: Mapping[tuple, Formula] = field(default_factory=dict)
    mult_overrides: Mapping[str, tuple[Formula, Multiplicity]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "annotations", dict(self.annotations))
        object.__setattr__(self, "mult_overrides", dict(self.mult_overrides))


def annotate_150(tg_sigma: TypeGraph) -> AnnotatedTypeGraph:
    """Superimpose all representation variants over a signature type graph.

    Adds the weakly-typed control attribute and the direct node-to-link
    subtyping used when ports are implicit, then annotates every variable
    element with its presence condition.
    """
    controls = sorted(set(tg_sigma.graph.nodes) - set(BASE_NODE_TYPE_NAMES))

    attr_decls = {t: dict(a) for t, a in tg_sigma.attr_decls.items()}
    attr_decls.setdefault("BNode", {})["control"] = "string"
    base = replace(
        tg_sigma,
        inherits=tg_sigma.inherits | {("BNode", "BPoint")},
        attr_decls=attr_decls,
    )

    ann: dict[tuple, Formula] = {attr_key("BNode", "control"): "WT"}
    for c in controls:
        ann[node_key(c)] = "ST"
        ann[inherits_key(c, "BNode")] = "ST"
    ann[node_key("BRoot")] = "ER"
    ann[inherits_key("BRoot", "BPlace")] = "ER"
    ann[attr_key("BRoot", "index")] = "RI"
    ann[node_key("BSite")] = "ES"
    ann[inherits_key("BSite", "BPlace")] = "ES"
    ann[attr_key("BSite", "index")] = "SI"
    ann[node_key("BPort")] = "EP"
    ann[inherits_key("BPort", "BPoint")] = "EP"
    ann[edge_key("bPorts")] = "EP"
    ann[edge_key("bNode")] = "EP"
    ann[attr_key("BPort", "index")] = "PI"
    ann[inherits_key("BNode", "BPoint")] = ("not", "EP")

    # Without explicit ports a node carries as many links as its arity,
    # so the exactly-one bound on outgoing links cannot stay.
    overrides = {"bLink": (("not", "EP"), Multiplicity(0, None))}
    return AnnotatedTypeGraph(base, ann, overrides)


def derive_type_graph(atg: AnnotatedTypeGraph, cfg: FeatureConfig) -> TypeGraph:
    """Resolve the variability: keep unannotated elements and those whose
    presence condition evaluates to true, dropping anything dangling."""
    rep = validate_config(cfg)
    if not rep.ok:
        raise InvalidConfig(rep)
    sel = cfg.selected

    def keep(key: tuple) -> bool:
        ann = atg.annotations.get(key)
        return ann is None or eval_formula(ann, sel)

    base = atg.base
    nodes = {t for t in base.graph.nodes if keep(node_key(t))}
    edges = {
        e
        for e in base.graph.edges
        if keep(edge_key(e)) and base.graph.src[e] in nodes and base.graph.tgt[e] in nodes
    }
    inherits = {
        (sub, sup)
        for sub, sup in base.inherits
        if keep(inherits_key(sub, sup)) and sub in nodes and sup in nodes
    }
    mult: dict[str, Multiplicity] = {}
    for e in edges:
        m = base.mult[e]
        override = atg.mult_overrides.get(e)
        if override is not None and eval_formula(override[0], sel):
            m = override[1]
        mult[e] = m
    attr_decls: dict[str, dict[str, str]] = {}
    for t in nodes:
        kept = {
            a: dt for a, dt in base.attr_decls.get(t, {}).items() if keep(attr_key(t, a))
        }
        if kept:
            attr_decls[t] = kept
    return TypeGraph(
        graph=Graph(
            nodes=frozenset(nodes),
            edges=frozenset(edges),
            src={e: base.graph.src[e] for e in edges},
            tgt={e: base.graph.tgt[e] for e in edges},
        ),
        inherits=frozenset(inherits),
        abstracts=base.abstracts & nodes,
        containments=base.containments & edges,
        opposites=frozenset((a, b) for a, b in base.opposites if a in edges and b in edges),
        mult=mult,
        attr_decls=attr_decls,
    )


def _delete_nodes(g: InstanceGraph, doomed: set[str]) -> InstanceGraph:
    """Remove nodes together with their incident edges."""
    keep_edges = {
        e
        for e in g.graph.edges
        if g.graph.src[e] not in doomed and g.graph.tgt[e] not in doomed
    }
    return InstanceGraph(
        graph=Graph(
            nodes=g.graph.nodes - doomed,
            edges=frozenset(keep_edges),
            src={e: g.graph.src[e] for e in keep_edges},
            tgt={e: g.graph.tgt[e] for e in keep_edges},
        ),
        node_types={n: t for n, t in g.node_types.items() if n not in doomed},
        edge_types={e: t for e, t in g.edge_types.items() if e in keep_edges},
        attrs={(n, a): v for (n, a), v in g.attrs.items() if n not in doomed},
    )


def _retype_controls(g: InstanceGraph, sig: Signature) -> InstanceGraph:
    controls = set(sig.names)
    ntypes = dict(g.node_types)
    attrs = dict(g.attrs)
    for n in sorted(g.graph.nodes):
        t = ntypes.get(n)
        if t in controls:
            ntypes[n] = "BNode"
            attrs[(n, "control")] = t
    return replace(g, node_types=ntypes, attrs=attrs)


def _unset_index(g: InstanceGraph, type_name: str) -> InstanceGraph:
    attrs = {
        (n, a): v
        for (n, a), v in g.attrs.items()
        if not (a == "index" and g.node_types.get(n) == type_name)
    }
    return replace(g, attrs=attrs)


def _delete_of_type(g: InstanceGraph, type_name: str) -> InstanceGraph:
    doomed = {n for n in g.graph.nodes if g.node_types.get(n) == type_name}
    return _delete_nodes(g, doomed) if doomed else g


def _implicit_ports(g: InstanceGraph, sig: Signature) -> InstanceGraph:
    """Rewire each port's link (and its opposite) to the owning node, then
    drop the port nodes with their ownership edges.

    Plain deletion would sever the link structure; rewiring keeps it on
    the owner, which is what the node-as-point variant represents.
    """
    ports = sorted(n for n in g.graph.nodes if g.node_types.get(n) == "BPort")
    if not ports:
        return g
    src = dict(g.graph.src)
    tgt = dict(g.graph.tgt)
    for p in ports:
        own = sorted(e for e in g.graph.edges if src[e] == p and g.edge_types.get(e) == "bNode")
        if len(own) != 1:
            raise NotCanonical(f"port {p} has {len(own)} ownership edges; cannot rewire")
        owner = tgt[own[0]]
        links = sorted(e for e in g.graph.edges if src[e] == p and g.edge_types.get(e) == "bLink")
        if len(links) != 1:
            raise NotCanonical(f"port {p} has {len(links)} link edges; cannot rewire")
        src[links[0]] = owner
        for e in sorted(g.graph.edges):
            if tgt[e] == p and g.edge_types.get(e) == "bPoints":
                tgt[e] = owner
    rewired = InstanceGraph(
        graph=Graph(nodes=g.graph.nodes, edges=g.graph.edges, src=src, tgt=tgt),
        node_types=g.node_types,
        edge_types=g.edge_types,
        attrs=g.attrs,
    )
    return _delete_nodes(rewired, set(ports))


@dataclass(frozen=True)
class Delta:
    """A conditional instance-graph patch."""

    name: str
    condition: Formula
    patch: Callable[[InstanceGraph, Signature], InstanceGraph]


#: Reconfiguration deltas in their fixed application order: retyping
#: first, then index removal before element removal per option group.
DELTAS: tuple[Delta, ...] = (
    Delta("weak-typing", "WT", _retype_controls),
    Delta("drop-root-indices", ("not", "RI"), lambda g, s: _unset_index(g, "BRoot")),
    Delta("drop-roots", ("not", "ER"), lambda g, s: _delete_of_type(g, "BRoot")),
    Delta("drop-site-indices", ("not", "SI"), lambda g, s: _unset_index(g, "BSite")),
    Delta("drop-sites", ("not", "ES"), lambda g, s: _delete_of_type(g, "BSite")),
    Delta("drop-port-indices", ("not", "PI"), lambda g, s: _unset_index(g, "BPort")),
    Delta("implicit-ports", ("not", "EP"), _implicit_ports),
)


def apply_deltas(g: InstanceGraph, cfg: FeatureConfig, sig: Signature) -> InstanceGraph:
    """Apply every delta whose condition holds, in the fixed order.

    Applying the same configuration twice is a no-op the second time, so
    already-configured graphs pass through unchanged.
    """
    rep = validate_config(cfg)
    if not rep.ok:
        raise InvalidConfig(rep)
    for delta in DELTAS:
        if eval_formula(delta.condition, cfg.selected):
            g = delta.patch(g, sig)
    return g
