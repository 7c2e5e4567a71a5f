"""Networks, payoffs, best responses and Nash equilibria of social network games.

A network is a weighted directed graph whose nodes choose either a product from
their own product set or the abstain strategy ``"t0"``.  All numbers are exact
``Fraction`` values; internally every quantity is rescaled by the least common
denominator so the hot loops run on plain integers.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Iterator, Mapping, Sequence

from .errors import (
    DuplicateEdge,
    EmptyProductSet,
    InWeightSumExceedsOne,
    InvalidProfile,
    MalformedNetwork,
    MissingThreshold,
    NodeSetMismatch,
    NonPositiveC0,
    StateSpaceTooLarge,
    ThresholdOutOfRange,
    WeightOutOfRange,
)

ABSTAIN = "t0"
DEFAULT_STATE_CAP = 10**7

Profile = tuple[str, ...]


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    weight: Fraction


@dataclass(frozen=True)
class SocialNetwork:
    """A validated, immutable social network.

    Build instances with :func:`validate_network`; the constructor does not
    check invariants.  Profiles over the network are tuples of strategies
    aligned with :attr:`nodes`.
    """

    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    products: tuple[str, ...]
    product_sets: Mapping[str, tuple[str, ...]]
    thresholds: Mapping[tuple[str, str], Fraction]
    c0: Fraction = Fraction(1)
    expansion_threshold: Fraction | None = None
    name: str = field(default="", compare=False)
    notes: str = field(default="", compare=False)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {v: k for k, v in enumerate(self.nodes)}

    @cached_property
    def _in_edges(self) -> dict[str, tuple[Edge, ...]]:
        incoming: dict[str, list[Edge]] = {v: [] for v in self.nodes}
        for e in self.edges:
            incoming[e.target].append(e)
        return {v: tuple(es) for v, es in incoming.items()}

    @cached_property
    def kernel(self) -> "_Kernel":
        return _Kernel(self)

    def index(self, node: str) -> int:
        try:
            return self._index[node]
        except KeyError:
            raise KeyError(f"unknown node {node!r}") from None

    def in_edges(self, node: str) -> tuple[Edge, ...]:
        return self._in_edges[node]

    def neighbours(self, node: str) -> tuple[str, ...]:
        """N(i): nodes with an edge into ``node``."""
        return tuple(e.source for e in self._in_edges[node])

    def weight(self, source: str, target: str) -> Fraction | None:
        for e in self._in_edges[target]:
            if e.source == source:
                return e.weight
        return None

    def is_source(self, node: str) -> bool:
        return not self._in_edges[node]

    @cached_property
    def source_nodes(self) -> frozenset[str]:
        return frozenset(v for v in self.nodes if not self._in_edges[v])

    def strategies(self, node: str) -> tuple[str, ...]:
        """S_i, in the canonical order: abstain first, then P(i)."""
        return (ABSTAIN,) + self.product_sets[node]

    @property
    def state_space_size(self) -> int:
        return math.prod(len(self.product_sets[v]) + 1 for v in self.nodes)

    def threshold(self, node: str, product: str) -> Fraction:
        return self.thresholds[(node, product)]

    def uniform_threshold(self, node: str) -> Fraction | None:
        values = {self.thresholds[(node, t)] for t in self.product_sets[node]}
        return values.pop() if len(values) == 1 else None

    def profile(self, choices: Mapping[str, str] | Sequence[str]) -> Profile:
        """Build a checked profile from a node mapping or an aligned sequence."""
        if isinstance(choices, Mapping):
            unknown = set(choices) - set(self.nodes)
            if unknown:
                raise InvalidProfile(f"unknown nodes {sorted(unknown)}")
            missing = [v for v in self.nodes if v not in choices]
            if missing:
                raise InvalidProfile(f"no strategy given for nodes {missing}")
            s = tuple(choices[v] for v in self.nodes)
        else:
            s = tuple(choices)
        self.check_profile(s)
        return s

    def check_profile(self, s: Sequence[str]) -> None:
        if len(s) != len(self.nodes):
            raise InvalidProfile(
                f"profile has {len(s)} entries, network has {len(self.nodes)} nodes"
            )
        for v, x in zip(self.nodes, s):
            if x != ABSTAIN and x not in self.product_sets[v]:
                raise InvalidProfile(f"node {v!r} cannot play {x!r}")

    def as_dict(self, s: Sequence[str]) -> dict[str, str]:
        return dict(zip(self.nodes, s))

    def uniform(self, product: str, *, keep_sources: bool = False) -> Profile:
        """The profile where every node plays ``product``.

        With ``keep_sources`` set, single-product source nodes keep their own
        product instead (the "extension" convention used for the figures).
        """
        out = []
        for v in self.nodes:
            if keep_sources and self.is_source(v) and len(self.product_sets[v]) == 1:
                out.append(self.product_sets[v][0])
            else:
                out.append(product)
        return self.profile(out)

    def describe(self) -> dict[str, Any]:
        """Raw description accepted by :func:`validate_network`."""
        doc: dict[str, Any] = {
            "c0": self.c0,
            "products": list(self.products),
            "nodes": [
                {
                    "id": v,
                    "products": list(self.product_sets[v]),
                    "thresholds": {t: self.thresholds[(v, t)] for t in self.product_sets[v]},
                }
                for v in self.nodes
            ],
            "edges": [{"from": e.source, "to": e.target, "weight": e.weight} for e in self.edges],
        }
        if self.expansion_threshold is not None:
            doc["expansion_threshold"] = self.expansion_threshold
        if self.name or self.notes:
            doc["metadata"] = {"name": self.name, "notes": self.notes}
        return doc


class _Kernel:
    """Integer-scaled view of a network used by the search loops."""

    def __init__(self, net: SocialNetwork) -> None:
        denominators = [net.c0.denominator]
        denominators += [e.weight.denominator for e in net.edges]
        denominators += [q.denominator for q in net.thresholds.values()]
        if net.expansion_threshold is not None:
            denominators.append(net.expansion_threshold.denominator)
        self.scale = math.lcm(*denominators)
        index = net._index
        self.n = len(net.nodes)
        self.nodes = net.nodes
        self.c0 = int(net.c0 * self.scale)
        self.source = [net.is_source(v) for v in net.nodes]
        self.in_edges = [
            tuple((index[e.source], int(e.weight * self.scale)) for e in net.in_edges(v))
            for v in net.nodes
        ]
        self.strategies = [net.strategies(v) for v in net.nodes]
        self.theta = [
            {t: int(net.thresholds[(v, t)] * self.scale) for t in net.product_sets[v]}
            for v in net.nodes
        ]

    def values(self, s: Sequence[str], i: int) -> list[int]:
        """Scaled payoff of every strategy of node ``i`` against ``s``."""
        strategies = self.strategies[i]
        if self.source[i]:
            return [0] + [self.c0] * (len(strategies) - 1)
        support: dict[str, int] = {}
        for j, w in self.in_edges[i]:
            t = s[j]
            support[t] = support.get(t, 0) + w
        theta = self.theta[i]
        return [0] + [support.get(t, 0) - theta[t] for t in strategies[1:]]

    def payoff(self, s: Sequence[str], i: int) -> int:
        x = s[i]
        if x == ABSTAIN:
            return 0
        if self.source[i]:
            return self.c0
        total = 0
        for j, w in self.in_edges[i]:
            if s[j] == x:
                total += w
        return total - self.theta[i][x]

    def is_best(self, s: Sequence[str], i: int) -> bool:
        vals = self.values(s, i)
        return vals[self.strategies[i].index(s[i])] == max(vals)

    def is_nash(self, s: Sequence[str]) -> bool:
        return all(self.is_best(s, i) for i in range(self.n))

    def deviations(self, s: Sequence[str], best_only: bool) -> list[tuple[int, str, int, bool]]:
        """All strict improvements ``(node, target, scaled gain, is_best)``."""
        out = []
        for i in range(self.n):
            vals = self.values(s, i)
            strategies = self.strategies[i]
            current = vals[strategies.index(s[i])]
            top = max(vals)
            if top == current:
                continue
            for x, v in zip(strategies, vals):
                if v > current:
                    is_best = v == top
                    if is_best or not best_only:
                        out.append((i, x, v - current, is_best))
        return out


# -- validation -------------------------------------------------------------


def _rational(value: Any, what: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise MalformedNetwork(f"{what} must be an exact decimal string, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise MalformedNetwork(f"{what}: cannot parse {value!r} as a rational") from None
    raise MalformedNetwork(f"{what}: unsupported numeric value {value!r}")


def _ident(value: Any, what: str) -> str:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise MalformedNetwork(f"{what} must be a string, got {value!r}")
    text = str(value)
    if not text:
        raise MalformedNetwork(f"{what} must be non-empty")
    return text


def validate_network(candidate: Mapping[str, Any]) -> SocialNetwork:
    """Validate a raw network description and freeze it.

    Structural problems (unknown nodes, self-loops, duplicate edges) are
    reported first; numeric invariants are then checked in the fixed order
    weights, in-weight sums, product sets, thresholds, c0.
    """
    if not isinstance(candidate, Mapping):
        raise MalformedNetwork("network description must be a mapping")
    raw_products = candidate.get("products", [])
    raw_nodes = candidate.get("nodes")
    raw_edges = candidate.get("edges", [])
    if not isinstance(raw_nodes, Sequence) or isinstance(raw_nodes, str) or not raw_nodes:
        raise MalformedNetwork("'nodes' must be a non-empty list")
    if not isinstance(raw_edges, Sequence) or isinstance(raw_edges, str):
        raise MalformedNetwork("'edges' must be a list")

    products: list[str] = []
    for p in raw_products:
        p = _ident(p, "product id")
        if p == ABSTAIN:
            raise MalformedNetwork(f"{ABSTAIN!r} is reserved for abstaining")
        if p in products:
            raise MalformedNetwork(f"product {p!r} listed twice")
        products.append(p)

    nodes: list[str] = []
    raw_sets: dict[str, list[str]] = {}
    raw_thresholds: dict[str, Mapping[str, Any]] = {}
    for entry in raw_nodes:
        if not isinstance(entry, Mapping):
            raise MalformedNetwork(f"node entry {entry!r} is not a mapping")
        v = _ident(entry.get("id"), "node id")
        if v in raw_sets:
            raise MalformedNetwork(f"node {v!r} declared twice")
        nodes.append(v)
        owned = [_ident(p, f"product of node {v!r}") for p in entry.get("products", [])]
        for p in owned:
            if p == ABSTAIN:
                raise MalformedNetwork(f"node {v!r}: {ABSTAIN!r} cannot be in a product set")
            if p not in products:
                raise MalformedNetwork(f"node {v!r}: unknown product {p!r}")
        if len(set(owned)) != len(owned):
            raise MalformedNetwork(f"node {v!r}: repeated product")
        raw_sets[v] = owned
        th = entry.get("thresholds", {})
        if not isinstance(th, Mapping):
            raise MalformedNetwork(f"node {v!r}: thresholds must be a mapping")
        raw_thresholds[v] = th

    edges: list[tuple[str, str, Fraction]] = []
    seen: set[tuple[str, str]] = set()
    for entry in raw_edges:
        if not isinstance(entry, Mapping):
            raise MalformedNetwork(f"edge entry {entry!r} is not a mapping")
        a = _ident(entry.get("from"), "edge source")
        b = _ident(entry.get("to"), "edge target")
        for v in (a, b):
            if v not in raw_sets:
                raise MalformedNetwork(f"edge {a}->{b} mentions unknown node {v!r}")
        if a == b:
            raise MalformedNetwork(f"self-loop on node {a!r}")
        if (a, b) in seen:
            raise DuplicateEdge(f"edge {a}->{b} appears more than once")
        seen.add((a, b))
        edges.append((a, b, _rational(entry.get("weight"), f"weight of {a}->{b}")))

    for a, b, w in edges:
        if not 0 <= w <= 1:
            raise WeightOutOfRange(f"weight of {a}->{b} is {w}, must lie in [0,1]")
    in_sum: dict[str, Fraction] = {v: Fraction(0) for v in nodes}
    for _, b, w in edges:
        in_sum[b] += w
    for v in nodes:
        if in_sum[v] > 1:
            raise InWeightSumExceedsOne(f"incoming weights of node {v!r} sum to {in_sum[v]}")
    for v in nodes:
        if not raw_sets[v]:
            raise EmptyProductSet(f"node {v!r} has no products")

    # Product sets are stored in universe order so strategy order is canonical.
    product_sets = {v: tuple(p for p in products if p in raw_sets[v]) for v in nodes}
    thresholds: dict[tuple[str, str], Fraction] = {}
    for v in nodes:
        th = raw_thresholds[v]
        extra = [t for t in th if t not in product_sets[v]]
        if extra:
            raise MalformedNetwork(f"node {v!r} has thresholds for unowned products {extra}")
        for t in product_sets[v]:
            if t not in th:
                raise MissingThreshold(f"no threshold for node {v!r} and product {t!r}")
            q = _rational(th[t], f"threshold of ({v}, {t})")
            if not 0 < q <= 1:
                raise ThresholdOutOfRange(f"threshold of ({v}, {t}) is {q}, must lie in (0,1]")
            thresholds[(v, t)] = q

    c0 = _rational(candidate.get("c0", 1), "c0")
    if c0 <= 0:
        raise NonPositiveC0(f"c0 is {c0}, must be positive")

    expansion_threshold = candidate.get("expansion_threshold")
    if expansion_threshold is not None:
        expansion_threshold = _rational(expansion_threshold, "expansion_threshold")
        if not 0 < expansion_threshold <= 1:
            raise ThresholdOutOfRange(f"expansion_threshold is {expansion_threshold}")

    meta = candidate.get("metadata") or {}
    return SocialNetwork(
        nodes=tuple(nodes),
        edges=tuple(Edge(a, b, w) for a, b, w in edges),
        products=tuple(products),
        product_sets=product_sets,
        thresholds=thresholds,
        c0=c0,
        expansion_threshold=expansion_threshold,
        name=str(meta.get("name", "")),
        notes=str(meta.get("notes", "")),
    )


# -- payoffs and equilibria ---------------------------------------------------


def payoff(net: SocialNetwork, s: Sequence[str], node: str) -> Fraction:
    net.check_profile(s)
    k = net.kernel
    return Fraction(k.payoff(s, net.index(node)), k.scale)


def payoffs(net: SocialNetwork, s: Sequence[str]) -> dict[str, Fraction]:
    net.check_profile(s)
    k = net.kernel
    return {v: Fraction(k.payoff(s, i), k.scale) for i, v in enumerate(net.nodes)}


def strategy_payoffs(net: SocialNetwork, s: Sequence[str], node: str) -> dict[str, Fraction]:
    """Payoff ``node`` would get from each of its strategies, others fixed."""
    net.check_profile(s)
    k = net.kernel
    i = net.index(node)
    return {x: Fraction(v, k.scale) for x, v in zip(k.strategies[i], k.values(s, i))}


def best_responses(net: SocialNetwork, s: Sequence[str], node: str) -> tuple[str, ...]:
    net.check_profile(s)
    k = net.kernel
    i = net.index(node)
    vals = k.values(s, i)
    top = max(vals)
    return tuple(x for x, v in zip(k.strategies[i], vals) if v == top)


def is_nash_equilibrium(net: SocialNetwork, s: Sequence[str]) -> bool:
    net.check_profile(s)
    return net.kernel.is_nash(s)


def _check_cap(net: SocialNetwork, cap: int) -> None:
    size = net.state_space_size
    if size > cap:
        raise StateSpaceTooLarge(size, cap)


def iter_nash_equilibria(net: SocialNetwork, cap: int = DEFAULT_STATE_CAP) -> Iterator[Profile]:
    """Yield equilibria in lexicographic (node, strategy) order.

    Backtracks over nodes in declaration order and checks each node's
    best-response condition as soon as it and all its neighbours are fixed.
    """
    _check_cap(net, cap)
    k = net.kernel
    ready: list[list[int]] = [[] for _ in range(k.n)]
    for i in range(k.n):
        last = max([i] + [j for j, _ in k.in_edges[i]])
        ready[last].append(i)
    s: list[str] = [ABSTAIN] * k.n

    def assign(pos: int) -> Iterator[Profile]:
        for x in k.strategies[pos]:
            s[pos] = x
            if all(k.is_best(s, i) for i in ready[pos]):
                if pos + 1 == k.n:
                    yield tuple(s)
                else:
                    yield from assign(pos + 1)

    yield from assign(0)


def enumerate_nash_equilibria(net: SocialNetwork, cap: int = DEFAULT_STATE_CAP) -> list[Profile]:
    return list(iter_nash_equilibria(net, cap))


def has_nash_equilibrium(net: SocialNetwork, cap: int = DEFAULT_STATE_CAP) -> bool:
    return next(iter_nash_equilibria(net, cap), None) is not None


def all_profiles(net: SocialNetwork, cap: int = DEFAULT_STATE_CAP) -> Iterator[Profile]:
    _check_cap(net, cap)
    return itertools.product(*(net.strategies(v) for v in net.nodes))


def products_in(s: Iterable[str]) -> frozenset[str]:
    """prod(s): the distinct products used by a profile."""
    return frozenset(x for x in s if x != ABSTAIN)


def adopters(net: SocialNetwork, s: Sequence[str], product: str) -> frozenset[str]:
    """A_t(s): the nodes playing ``product``."""
    return frozenset(v for v, x in zip(net.nodes, s) if x == product)


class Relation(enum.Enum):
    STRICTLY_BETTER = "strictly_better"
    WEAKLY_BETTER = "weakly_better"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def compare_profiles(
    net_a: SocialNetwork, s_a: Sequence[str], net_b: SocialNetwork, s_b: Sequence[str]
) -> Relation:
    """How profile ``s_a`` (payoffs in ``net_a``) relates to ``s_b`` (in ``net_b``).

    WEAKLY_BETTER is reported only when the stronger STRICTLY_BETTER fails.
    """
    if tuple(net_a.nodes) != tuple(net_b.nodes):
        raise NodeSetMismatch("profiles live on different node sets")
    ka, kb = net_a.kernel, net_b.kernel
    ge = gt = True
    some_gt = False
    for i in range(ka.n):
        # Cross-multiply so differing scales compare exactly.
        a = ka.payoff(s_a, i) * kb.scale
        b = kb.payoff(s_b, i) * ka.scale
        if a < b:
            ge = False
            break
        if a > b:
            some_gt = True
        else:
            gt = False
    if not ge:
        return Relation.INCOMPARABLE
    if gt:
        return Relation.STRICTLY_BETTER
    return Relation.WEAKLY_BETTER if some_gt else Relation.EQUAL


def better(
    net_a: SocialNetwork,
    s_a: Sequence[str],
    net_b: SocialNetwork,
    s_b: Sequence[str],
    strict: bool,
) -> bool:
    """``s_a >_s s_b`` when ``strict`` else ``s_a >_w s_b``."""
    rel = compare_profiles(net_a, s_a, net_b, s_b)
    if strict:
        return rel is Relation.STRICTLY_BETTER
    return rel in (Relation.STRICTLY_BETTER, Relation.WEAKLY_BETTER)
