"""Seeded random networks for property sweeps and searches."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import InvalidParams
from ..model import SocialNetwork, validate_network

MAX_NODES = 12
MAX_PRODUCTS = 8


def _grid(*values: str) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class RandomNetworkParams:
    nodes: int = 4
    products: int = 2
    edge_density: Fraction = Fraction(1, 2)
    weight_grid: tuple[Fraction, ...] = field(default_factory=lambda: _grid("0.1", "0.2", "0.3", "0.4", "0.5"))
    threshold_grid: tuple[Fraction, ...] = field(default_factory=lambda: _grid("0.05", "0.1", "0.2", "0.3"))
    source_free: bool = False
    # "random" draws edges independently; "cycle" builds the directed cycle 1 -> 2 -> ... -> n -> 1
    topology: str = "random"
    uniform_thresholds: bool = False

    def check(self) -> None:
        if not 1 <= self.nodes <= MAX_NODES:
            raise InvalidParams(f"nodes must lie in [1, {MAX_NODES}]")
        if not 1 <= self.products <= MAX_PRODUCTS:
            raise InvalidParams(f"products must lie in [1, {MAX_PRODUCTS}]")
        if not 0 <= Fraction(self.edge_density) <= 1:
            raise InvalidParams("edge_density must lie in [0, 1]")
        if not self.weight_grid or any(not 0 < w <= 1 for w in self.weight_grid):
            raise InvalidParams("weight grid must be non-empty with values in (0, 1]")
        if not self.threshold_grid or any(not 0 < t <= 1 for t in self.threshold_grid):
            raise InvalidParams("threshold grid must be non-empty with values in (0, 1]")
        if self.topology not in ("random", "cycle"):
            raise InvalidParams(f"unknown topology {self.topology!r}")
        if (self.source_free or self.topology == "cycle") and self.nodes < 2:
            raise InvalidParams("a source-free network needs at least two nodes")


def random_network(seed: int, params: RandomNetworkParams | None = None) -> SocialNetwork:
    """A network that depends only on ``seed`` and ``params``.

    Weights come from the grid; a node whose in-weights sum above 1 has them
    scaled down exactly to sum to 1.
    """
    p = params or RandomNetworkParams()
    p.check()
    rng = random.Random(seed)
    names = [str(k + 1) for k in range(p.nodes)]
    products = [f"t{k + 1}" for k in range(p.products)]

    pairs: list[tuple[int, int]] = []
    if p.topology == "cycle":
        pairs = [(k, (k + 1) % p.nodes) for k in range(p.nodes)]
    else:
        density = Fraction(p.edge_density)
        for a in range(p.nodes):
            for b in range(p.nodes):
                if a != b and rng.random() < density:
                    pairs.append((a, b))
        if p.source_free:
            fed = {b for _, b in pairs}
            for b in range(p.nodes):
                if b not in fed:
                    a = rng.choice([k for k in range(p.nodes) if k != b])
                    pairs.append((a, b))
    pairs.sort()

    weights = {pair: rng.choice(p.weight_grid) for pair in pairs}
    for b in range(p.nodes):
        incoming = [pair for pair in pairs if pair[1] == b]
        total = sum((weights[pair] for pair in incoming), Fraction(0))
        if total > 1:
            for pair in incoming:
                weights[pair] /= total

    nodes = []
    for name in names:
        k = rng.randint(1, p.products)
        owned = sorted(rng.sample(range(p.products), k))
        if p.uniform_thresholds:
            th = rng.choice(p.threshold_grid)
            thresholds = {products[t]: th for t in owned}
        else:
            thresholds = {products[t]: rng.choice(p.threshold_grid) for t in owned}
        nodes.append({"id": name, "products": [products[t] for t in owned], "thresholds": thresholds})

    doc = {
        "products": products,
        "nodes": nodes,
        "edges": [{"from": names[a], "to": names[b], "weight": weights[(a, b)]} for a, b in pairs],
        "expansion_threshold": rng.choice(p.threshold_grid),
        "metadata": {"name": f"random-{seed}", "notes": ""},
    }
    return validate_network(doc)
