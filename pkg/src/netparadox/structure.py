"""Structural analysis: self-sustaining subgraphs, their intersections and simple cycles."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import PreconditionViolated, TooManyNodes
from .graphs import is_strongly_connected, strongly_connected_components
from .model import (
    ABSTAIN,
    DEFAULT_STATE_CAP,
    Profile,
    SocialNetwork,
    is_nash_equilibrium,
    iter_nash_equilibria,
    products_in,
)

DEFAULT_NODE_CAP = 20


@dataclass(frozen=True)
class SustainingSCS:
    product: str
    nodes: frozenset[str]
    minimal: bool = False


def source_nodes(net: SocialNetwork) -> frozenset[str]:
    return net.source_nodes


def _induced_successors(net: SocialNetwork, members: frozenset[str]):
    out = {v: [] for v in members}
    for e in net.edges:
        if e.source in members and e.target in members:
            out[e.source].append(e.target)
    return lambda v: out[v]


def _support(net: SocialNetwork, members: Iterable[str], node: str) -> Fraction:
    members = set(members)
    return sum((e.weight for e in net.in_edges(node) if e.source in members), Fraction(0))


def is_self_sustaining(net: SocialNetwork, nodes: Iterable[str], product: str) -> bool:
    """True when ``nodes`` induce a strongly connected subgraph in which every
    member offers ``product`` and gets at least its threshold from other members."""
    members = frozenset(nodes)
    if not members:
        raise PreconditionViolated("the node set must be non-empty")
    for v in members:
        if product not in net.product_sets[v]:
            return False
        if _support(net, members, v) < net.thresholds[(v, product)]:
            return False
    order = [v for v in net.nodes if v in members]
    return is_strongly_connected(order, _induced_successors(net, members))


def _candidates(net: SocialNetwork, product: str, within: Iterable[str] | None) -> list[frozenset[str]]:
    """Groups of nodes that can contain a self-sustaining set, after pruning.

    A node whose support from all remaining candidates is below its threshold
    can never be in a self-sustaining set, so it is dropped until nothing
    changes; a self-sustaining set is strongly connected, so it then lies in
    one strongly connected component of what is left.
    """
    pool = set(within if within is not None else net.nodes)
    alive = {v for v in pool if product in net.product_sets[v]}
    changed = True
    while changed:
        changed = False
        for v in sorted(alive, key=net.index):
            if _support(net, alive, v) < net.thresholds[(v, product)]:
                alive.discard(v)
                changed = True
    members = frozenset(alive)
    order = [v for v in net.nodes if v in members]
    comps = strongly_connected_components(order, _induced_successors(net, members))
    groups = [frozenset(c) for c in comps if len(c) > 1]
    return sorted(groups, key=lambda g: min(net.index(v) for v in g))


def _minimal_sets(
    net: SocialNetwork, product: str, within: Iterable[str] | None, node_cap: int
) -> list[frozenset[str]]:
    owners = [v for v in (within if within is not None else net.nodes) if product in net.product_sets[v]]
    if len(owners) > node_cap:
        raise TooManyNodes(f"{len(owners)} nodes offer {product}, the enumeration cap is {node_cap}")
    found: list[frozenset[str]] = []
    for group in _candidates(net, product, within):
        ordered = sorted(group, key=net.index)
        for size in range(2, len(ordered) + 1):
            for combo in combinations(ordered, size):
                c = frozenset(combo)
                if any(f <= c for f in found):
                    continue
                if is_self_sustaining(net, c, product):
                    found.append(c)
    return sorted(found, key=lambda c: (len(c), sorted(net.index(v) for v in c)))


def minimal_sustaining_collection(
    net: SocialNetwork, product: str, node_cap: int = DEFAULT_NODE_CAP
) -> list[SustainingSCS]:
    """All inclusion-minimal self-sustaining sets for ``product``, smallest first."""
    return [SustainingSCS(product, c, True) for c in _minimal_sets(net, product, None, node_cap)]


@dataclass(frozen=True)
class SustainingIntersections:
    collections: dict[str, tuple[SustainingSCS, ...]]
    # None when the product has no minimal self-sustaining set
    per_product: dict[str, frozenset[str] | None]
    # None when no product has a non-empty intersection
    common: frozenset[str] | None


def sustaining_intersections(
    net: SocialNetwork, node_cap: int = DEFAULT_NODE_CAP
) -> SustainingIntersections:
    collections = {t: tuple(minimal_sustaining_collection(net, t, node_cap)) for t in net.products}
    per_product: dict[str, frozenset[str] | None] = {}
    for t, family in collections.items():
        per_product[t] = frozenset.intersection(*(c.nodes for c in family)) if family else None
    nonempty = [x for x in per_product.values() if x]
    common = frozenset.intersection(*nonempty) if nonempty else None
    return SustainingIntersections(collections, per_product, common)


class Condition(enum.Enum):
    ALL_EMPTY = "AllEmpty"
    COMMON_CORE = "CommonCore"
    NONE = "None"


@dataclass(frozen=True)
class NoVulnerabilityCertificate:
    """Sufficient structural condition for a source-free network not to be exists-weak vulnerable."""

    applicable: bool
    condition: Condition
    common: frozenset[str]
    intersections: SustainingIntersections | None

    @property
    def certifies(self) -> bool:
        return self.condition is not Condition.NONE


def theorem2_certificate(
    net: SocialNetwork, node_cap: int = DEFAULT_NODE_CAP
) -> NoVulnerabilityCertificate:
    """Check the two sufficient conditions on a source-free network.

    ``AllEmpty``: no product has a self-sustaining set.  ``CommonCore``: the
    intersection of the non-empty per-product intersections is non-empty.
    """
    if net.source_nodes:
        return NoVulnerabilityCertificate(False, Condition.NONE, frozenset(), None)
    inter = sustaining_intersections(net, node_cap)
    if not any(inter.collections.values()):
        condition = Condition.ALL_EMPTY
    elif inter.common:
        condition = Condition.COMMON_CORE
    else:
        condition = Condition.NONE
    return NoVulnerabilityCertificate(True, condition, inter.common or frozenset(), inter)


def multi_product_equilibria(net: SocialNetwork, cap: int = DEFAULT_STATE_CAP) -> list[Profile]:
    """Equilibria in which at least two different products are adopted."""
    return [s for s in iter_nash_equilibria(net, cap) if len(products_in(s)) >= 2]


def has_multi_product_equilibrium(net: SocialNetwork, cap: int = DEFAULT_STATE_CAP) -> bool:
    return any(len(products_in(s)) >= 2 for s in iter_nash_equilibria(net, cap))


def ne_structure_witness(
    net: SocialNetwork,
    s: Sequence[str],
    product: str,
    node: str,
    node_cap: int = DEFAULT_NODE_CAP,
) -> SustainingSCS:
    """A minimal self-sustaining set for ``product`` inside the adopters of ``product`` in ``s``.

    Starting from ``node``, repeatedly add the in-neighbours that also play
    ``product``; a strongly connected component of that closure with no
    incoming edge from the rest of it already sustains itself, and it is
    shrunk to a minimal subset.
    """
    s = tuple(s)
    if net.source_nodes:
        raise PreconditionViolated("the network has source nodes")
    net.check_profile(s)
    if not is_nash_equilibrium(net, s):
        raise PreconditionViolated("the profile is not a Nash equilibrium")
    if product == ABSTAIN or s[net.index(node)] != product:
        raise PreconditionViolated(f"node {node} does not play {product} in the profile")

    adopters = {v for v, x in zip(net.nodes, s) if x == product}
    closure = {node}
    frontier = [node]
    while frontier:
        v = frontier.pop()
        for e in net.in_edges(v):
            if e.source in adopters and e.source not in closure:
                closure.add(e.source)
                frontier.append(e.source)

    members = frozenset(closure)
    order = [v for v in net.nodes if v in members]
    comps = [frozenset(c) for c in strongly_connected_components(order, _induced_successors(net, members))]
    owner = {v: k for k, c in enumerate(comps) for v in c}
    entered = {owner[e.target] for e in net.edges if e.source in members and e.target in members and owner[e.source] != owner[e.target]}
    roots = [c for k, c in enumerate(comps) if k not in entered]
    root = min(roots, key=lambda c: min(net.index(v) for v in c))

    minimal = _minimal_sets(net, product, root, node_cap)
    if not minimal:
        raise AssertionError("closure root is not self-sustaining")
    c = minimal[0]
    if not c <= adopters or not is_self_sustaining(net, c, product):
        raise AssertionError("witness fails re-verification")
    if not is_minimal(net, c, product):
        raise AssertionError("witness is not minimal")
    return SustainingSCS(product, c, True)


def is_minimal(net: SocialNetwork, nodes: Iterable[str], product: str) -> bool:
    """Direct check that no non-empty proper subset is self-sustaining."""
    members = sorted(nodes, key=net.index)
    return not any(
        is_self_sustaining(net, combo, product)
        for size in range(1, len(members))
        for combo in combinations(members, size)
    )


@dataclass(frozen=True)
class SimpleCycleEquilibria:
    is_simple_cycle: bool
    equilibria: tuple[Profile, ...]


def cycle_order(net: SocialNetwork) -> list[str] | None:
    """Nodes in cycle order when the graph is one directed cycle through every node."""
    n = len(net.nodes)
    if n < 2 or len(net.edges) != n:
        return None
    succ: dict[str, str] = {}
    for e in net.edges:
        if e.source in succ:
            return None
        succ[e.source] = e.target
    if len(succ) != n:
        return None
    order = [net.nodes[0]]
    while len(order) < n:
        nxt = succ[order[-1]]
        if nxt in order:
            return None
        order.append(nxt)
    return order if succ[order[-1]] == order[0] else None


def simple_cycle_equilibria(net: SocialNetwork) -> SimpleCycleEquilibria:
    """Equilibria of a simple cycle network, derived from its structure alone.

    These are the all-abstain profile and every uniform profile whose product
    every node offers and whose threshold each node's single in-edge meets.
    """
    order = cycle_order(net)
    if order is None:
        return SimpleCycleEquilibria(False, ())
    out = [net.uniform(ABSTAIN)]
    for t in net.products:
        if all(t in net.product_sets[v] for v in net.nodes) and all(
            net.in_edges(v)[0].weight >= net.thresholds[(v, t)] for v in net.nodes
        ):
            out.append(net.uniform(t))
    return SimpleCycleEquilibria(True, tuple(out))
