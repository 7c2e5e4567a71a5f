"""Small builders shared by the tests."""

from __future__ import annotations

import functools

from netparadox.model import validate_network
from netparadox.workbench.fixtures import load_fixture


def small_doc(nodes, edges, products=("t1", "t2"), c0="1", **extra):
    """Build a raw document. ``nodes`` maps id -> (products, threshold or dict)."""
    entries = []
    for v, (owned, th) in nodes.items():
        ths = th if isinstance(th, dict) else {t: th for t in owned}
        entries.append({"id": v, "products": list(owned), "thresholds": ths})
    doc = {
        "products": list(products),
        "nodes": entries,
        "edges": [{"from": a, "to": b, "weight": w} for a, b, w in edges],
        "c0": c0,
    }
    doc.update(extra)
    return doc


def small_net(nodes, edges, **kw):
    return validate_network(small_doc(nodes, edges, **kw))


@functools.lru_cache(maxsize=None)
def fixture_net(name):
    return load_fixture(name).network


def random_nets(max_nodes=4, max_products=3, **kw):
    """Hypothesis strategy over seeded random networks."""
    from hypothesis import strategies as st

    from netparadox.workbench.generate import RandomNetworkParams, random_network

    return st.builds(
        lambda seed, n, k: random_network(seed, RandomNetworkParams(nodes=n, products=k, **kw)),
        st.integers(0, 10**6),
        st.integers(2 if kw.get("source_free") else 1, max_nodes),
        st.integers(1, max_products),
    )


# Acceptance outcomes, keyed by criterion number: (status, title, note).
ACCEPTANCE: dict[int, tuple[str, str, str]] = {}
