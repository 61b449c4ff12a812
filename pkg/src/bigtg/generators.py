"""Seeded random construction of valid bigraphs, for tests and experiments.

The construction rules guarantee validity by design: parents are drawn
from earlier nodes and roots (so the place graph is a forest), and every
edge or outer name receives at least one point (so the encoding satisfies
the one-or-more-points multiplicity of the metamodel).
"""

from __future__ import annotations

import random

from .bigraph import Bigraph, Interface, Port, Signature, make_signature


def random_signature(rng: random.Random, max_controls: int = 6, max_arity: int = 4) -> Signature:
    count = rng.randint(1, max_controls)
    return make_signature([(f"K{i}", rng.randint(0, max_arity)) for i in range(count)])


def random_bigraph(
    rng: random.Random,
    sig: Signature | None = None,
    max_nodes: int = 30,
    max_edges: int = 10,
    max_sites: int = 5,
    max_roots: int = 5,
    max_names: int = 5,
) -> Bigraph:
    """Draw a valid bigraph. Occasionally returns the empty bigraph."""
    if sig is None:
        sig = random_signature(rng)
    if rng.random() < 0.05:
        return Bigraph(sig)

    m = rng.randint(1, max_roots)
    n_nodes = rng.randint(0, max_nodes)
    nodes = [f"v{i}" for i in range(n_nodes)]
    ctrl = {v: rng.choice(sig.names) for v in nodes}

    prnt: dict[object, object] = {}
    for i, v in enumerate(nodes):
        # Parent drawn from roots and previously placed nodes: forest by design.
        choices: list[object] = list(range(m)) + nodes[:i]
        prnt[v] = rng.choice(choices)
    k = rng.randint(0, max_sites)
    for s in range(k):
        choices = list(range(m)) + nodes
        prnt[s] = rng.choice(choices)

    inner_names = [f"x{i}" for i in range(rng.randint(0, max_names))]
    points: list[object] = list(inner_names)
    for v in nodes:
        for i in range(sig.arity(ctrl[v])):
            points.append(Port(v, i))

    edges: list[str] = []
    outer_names: list[str] = []
    link: dict[object, str] = {}
    if points:
        want_edges = rng.randint(0, max_edges)
        want_outer = rng.randint(0, max_names)
        if want_edges + want_outer == 0:
            want_edges = 1
        targets = [f"e{i}" for i in range(want_edges)] + [f"y{i}" for i in range(want_outer)]
        rng.shuffle(targets)
        targets = targets[: len(points)]  # every target must get a point
        edges = [t for t in targets if t.startswith("e")]
        outer_names = [t for t in targets if t.startswith("y")]
        shuffled = list(points)
        rng.shuffle(shuffled)
        for target, point in zip(targets, shuffled):
            link[point] = target
        for point in shuffled[len(targets) :]:
            link[point] = rng.choice(targets)

    return Bigraph(
        signature=sig,
        nodes=frozenset(nodes),
        edges=frozenset(edges),
        ctrl=ctrl,
        prnt=prnt,
        link=link,
        inner=Interface(k, frozenset(inner_names)),
        outer=Interface(m, frozenset(outer_names)),
    )
