"""Expansions, contractions and the fourteen paradox classifiers.

Every classification quantifies over the Nash equilibria ``s`` of the
original game and the legal modifications ``m`` of the relevant kind, and
explores all improvement paths of the modified game from the start set of
``(s, m)``.  Positive verdicts carry replayable evidence; negative verdicts
carry the size of the exhausted search.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterator, Sequence

from .dynamics import (
    DeviationPath,
    ImprovementGraphView,
    Mode,
    explore,
    validate_path,
    witness_path,
)
from .errors import (
    IllegalModification,
    InvalidParams,
    LatticeViolation,
    MissingNewThreshold,
    StateSpaceTooLarge,
)
from .model import (
    ABSTAIN,
    DEFAULT_STATE_CAP,
    Profile,
    Relation,
    SocialNetwork,
    compare_profiles,
    enumerate_nash_equilibria,
    has_nash_equilibrium,
    is_nash_equilibrium,
    validate_network,
)


class Notion(enum.Enum):
    VULNERABLE = "vulnerable"
    FRAGILE = "fragile"
    INEFFICIENT = "inefficient"
    UNSAFE = "unsafe"

    @property
    def kind(self) -> "ModKind":
        if self in (Notion.VULNERABLE, Notion.FRAGILE):
            return ModKind.EXPANSION
        return ModKind.CONTRACTION

    @property
    def compares_outcomes(self) -> bool:
        return self in (Notion.VULNERABLE, Notion.INEFFICIENT)


class Quantifier(enum.Enum):
    EXISTS = "exists"
    FORALL = "forall"
    TOTAL = "total"


class Strength(enum.Enum):
    WEAK = "weak"
    STRICT = "strict"
    NOT_APPLICABLE = "na"


@dataclass(frozen=True)
class ParadoxQuery:
    notion: Notion
    quantifier: Quantifier
    strength: Strength = Strength.NOT_APPLICABLE

    def __post_init__(self) -> None:
        if self.notion.compares_outcomes:
            if self.strength is Strength.NOT_APPLICABLE:
                raise ValueError(f"{self.notion.value} needs a weak or strict strength")
            if self.quantifier is Quantifier.TOTAL:
                raise ValueError(f"{self.notion.value} has no total variant")
        elif self.strength is not Strength.NOT_APPLICABLE:
            raise ValueError(f"{self.notion.value} takes no strength")

    @property
    def key(self) -> str:
        parts = [self.notion.value, self.quantifier.value]
        if self.strength is not Strength.NOT_APPLICABLE:
            parts.append(self.strength.value)
        return "/".join(parts)

    @classmethod
    def parse(cls, key: str) -> "ParadoxQuery":
        parts = key.split("/")
        strength = Strength(parts[2]) if len(parts) > 2 else Strength.NOT_APPLICABLE
        return cls(Notion(parts[0]), Quantifier(parts[1]), strength)

    def __str__(self) -> str:
        return self.key


ALL_QUERIES: tuple[ParadoxQuery, ...] = tuple(
    [
        ParadoxQuery(notion, q, st)
        for notion in (Notion.VULNERABLE, Notion.INEFFICIENT)
        for q in (Quantifier.EXISTS, Quantifier.FORALL)
        for st in (Strength.WEAK, Strength.STRICT)
    ]
    + [
        ParadoxQuery(notion, q)
        for notion in (Notion.FRAGILE, Notion.UNSAFE)
        for q in (Quantifier.EXISTS, Quantifier.FORALL, Quantifier.TOTAL)
    ]
)

# (stronger, weaker): a positive stronger verdict forces a positive weaker one.
LATTICE: tuple[tuple[str, str], ...] = tuple(
    (f"{n}/{a}", f"{n}/{b}")
    for n in ("vulnerable", "inefficient")
    for a, b in (
        ("forall/strict", "exists/strict"),
        ("forall/strict", "forall/weak"),
        ("exists/strict", "exists/weak"),
        ("forall/weak", "exists/weak"),
    )
) + tuple(
    (f"{n}/{a}", f"{n}/{b}")
    for n in ("fragile", "unsafe")
    for a, b in (("total", "forall"), ("forall", "exists"))
)


# -- modifications -------------------------------------------------------------


class ModKind(enum.Enum):
    EXPANSION = "expansion"
    CONTRACTION = "contraction"


@dataclass(frozen=True)
class Modification:
    kind: ModKind
    node: str
    product: str
    threshold: Fraction | None = None

    def __str__(self) -> str:
        sign = "+" if self.kind is ModKind.EXPANSION else "-"
        return f"({self.node}, {sign}{self.product})"


def default_expansion_threshold(net: SocialNetwork, node: str) -> Fraction | None:
    """Threshold for a product newly offered to ``node``.

    The node's own threshold when all its thresholds agree, otherwise the
    network-wide ``expansion_threshold`` (``None`` when neither exists).
    """
    th = net.uniform_threshold(node)
    return th if th is not None else net.expansion_threshold


def enumerate_modifications(net: SocialNetwork, kind: ModKind) -> list[Modification]:
    out = []
    for v in net.nodes:
        owned = net.product_sets[v]
        if kind is ModKind.EXPANSION:
            th = default_expansion_threshold(net, v)
            out += [Modification(kind, v, t, th) for t in net.products if t not in owned]
        elif len(owned) >= 2:
            out += [Modification(kind, v, t) for t in owned]
    return out


def apply_modification(net: SocialNetwork, m: Modification) -> SocialNetwork:
    if m.node not in net.product_sets:
        raise IllegalModification(f"unknown node {m.node!r}")
    owned = net.product_sets[m.node]
    doc = net.describe()
    entry = doc["nodes"][net.index(m.node)]
    if m.kind is ModKind.EXPANSION:
        if m.product not in net.products:
            raise IllegalModification(f"{m.product!r} is not a product of the network")
        if m.product in owned:
            raise IllegalModification(f"node {m.node!r} already offers {m.product!r}")
        th = m.threshold if m.threshold is not None else default_expansion_threshold(net, m.node)
        if th is None:
            raise MissingNewThreshold(f"no threshold for ({m.node}, {m.product})")
        entry["products"] = list(owned) + [m.product]
        entry["thresholds"][m.product] = th
    else:
        if m.product not in owned:
            raise IllegalModification(f"node {m.node!r} does not offer {m.product!r}")
        if len(owned) < 2:
            raise IllegalModification(f"removing {m.product!r} would empty the product set of {m.node!r}")
        entry["products"] = [t for t in owned if t != m.product]
        del entry["thresholds"][m.product]
    return validate_network(doc)


def start_set(net_modified: SocialNetwork, s: Sequence[str], m: Modification) -> tuple[Profile, ...]:
    """Profiles from which improvement paths begin after applying ``m`` to ``s``.

    When a contraction removes the product node i is playing, node i moves
    first to any remaining strategy (abstaining included), whether or not
    that move improves its payoff.
    """
    s = tuple(s)
    if m.kind is ModKind.CONTRACTION:
        i = net_modified.index(m.node)
        if s[i] == m.product:
            return tuple(s[:i] + (x,) + s[i + 1 :] for x in net_modified.strategies(m.node))
    return (s,)


# -- certificates --------------------------------------------------------------


@dataclass(frozen=True)
class ForcedMove:
    node: str
    removed: str
    chosen: str


@dataclass(frozen=True)
class PathEvidence:
    """A finite improvement path to an equilibrium with the defining comparison."""

    path: DeviationPath
    relation: Relation
    forced_move: ForcedMove | None = None


@dataclass(frozen=True)
class DigestEvidence:
    """Every path is finite (no reachable cycle) and every terminal compares."""

    reached: int
    terminals: tuple[tuple[Profile, Relation], ...]


@dataclass(frozen=True)
class CycleEvidence:
    """A reachable deviation cycle; for the forall form, also no reachable terminal."""

    lead_in: DeviationPath
    cycle: DeviationPath
    forced_move: ForcedMove | None = None
    reached: int | None = None


@dataclass(frozen=True)
class ExhaustionEvidence:
    """The modified game has no Nash equilibrium at all."""

    profiles_scanned: int


Evidence = PathEvidence | DigestEvidence | CycleEvidence | ExhaustionEvidence


@dataclass(frozen=True)
class ParadoxCertificate:
    query: ParadoxQuery
    verdict: bool
    initial_ne: Profile | None = None
    modification: Modification | None = None
    evidence: Evidence | None = None
    equilibria_examined: int = 0
    modifications_examined: int = 0
    pairs_examined: int = 0


@dataclass
class _Pair:
    s: Profile
    m: Modification
    net: SocialNetwork
    starts: tuple[Profile, ...]
    view: ImprovementGraphView
    # terminal -> (relation of s to it, relation of it to s)
    relations: dict[Profile, tuple[Relation, Relation]]


def _holds(rel: Relation, strength: Strength) -> bool:
    if strength is Strength.STRICT:
        return rel is Relation.STRICTLY_BETTER
    return rel in (Relation.STRICTLY_BETTER, Relation.WEAKLY_BETTER)


class ParadoxAnalyzer:
    """Shared state for answering many queries about one network.

    Equilibria, modified networks and per-pair explorations are computed once
    and reused across queries.
    """

    def __init__(self, net: SocialNetwork, cap: int = DEFAULT_STATE_CAP, threads: int = 1) -> None:
        self.net = net
        self.cap = cap
        self.threads = max(1, threads)
        self._modified: dict[Modification, SocialNetwork] = {}
        self._pairs: dict[tuple[int, int, ModKind], _Pair] = {}
        self._has_ne: dict[Modification, bool] = {}

    @cached_property
    def equilibria(self) -> list[Profile]:
        return enumerate_nash_equilibria(self.net, self.cap)

    @cached_property
    def _modifications(self) -> dict[ModKind, list[Modification]]:
        return {kind: enumerate_modifications(self.net, kind) for kind in ModKind}

    def modifications(self, kind: ModKind) -> list[Modification]:
        return self._modifications[kind]

    def modified(self, m: Modification) -> SocialNetwork:
        if m not in self._modified:
            self._modified[m] = apply_modification(self.net, m)
        return self._modified[m]

    def _compute_pair(self, si: int, mi: int, kind: ModKind) -> _Pair:
        s = self.equilibria[si]
        m = self.modifications(kind)[mi]
        net2 = self.modified(m)
        starts = start_set(net2, s, m)
        try:
            view = explore(net2, starts, Mode.ANY, self.cap)
        except StateSpaceTooLarge as exc:
            exc.args = (f"{exc.args[0]} while exploring from {s} after {m}",)
            raise
        relations = {
            t: (compare_profiles(self.net, s, net2, t), compare_profiles(net2, t, self.net, s))
            for t in view.terminals
        }
        return _Pair(s, m, net2, starts, view, relations)

    def pair(self, si: int, mi: int, kind: ModKind) -> _Pair:
        key = (si, mi, kind)
        if key not in self._pairs:
            self._pairs[key] = self._compute_pair(si, mi, kind)
        return self._pairs[key]

    def pairs(self, kind: ModKind) -> Iterator[_Pair]:
        """All pairs of a kind in (equilibrium, modification) order."""
        keys = [
            (si, mi, kind)
            for si in range(len(self.equilibria))
            for mi in range(len(self.modifications(kind)))
        ]
        missing = [k for k in keys if k not in self._pairs]
        for m in {self.modifications(kind)[mi] for _, mi, _ in missing}:
            self.modified(m)
        if self.threads > 1 and len(missing) > 1:
            with ThreadPoolExecutor(self.threads) as pool:
                for k, p in zip(missing, pool.map(lambda k: self._compute_pair(*k), missing)):
                    self._pairs[k] = p
        for k in keys:
            yield self.pair(*k)

    def has_equilibrium_after(self, m: Modification) -> bool:
        if m not in self._has_ne:
            self._has_ne[m] = has_nash_equilibrium(self.modified(m), self.cap)
        return self._has_ne[m]

    def classify(self, query: ParadoxQuery) -> ParadoxCertificate:
        kind = query.notion.kind
        n_ne = len(self.equilibria)
        n_mod = len(self.modifications(kind))
        bound = dict(equilibria_examined=n_ne, modifications_examined=n_mod)

        if query.quantifier is Quantifier.TOTAL:
            if n_ne:
                for m in self.modifications(kind):
                    if not self.has_equilibrium_after(m):
                        evidence = ExhaustionEvidence(self.modified(m).state_space_size)
                        return ParadoxCertificate(query, True, self.equilibria[0], m, evidence, **bound)
            return ParadoxCertificate(query, False, **bound, pairs_examined=0)

        examined = 0
        for p in self.pairs(kind):
            examined += 1
            evidence = self._evidence(query, p)
            if evidence is not None:
                return ParadoxCertificate(query, True, p.s, p.m, evidence, **bound, pairs_examined=examined)
        return ParadoxCertificate(query, False, **bound, pairs_examined=examined)

    def _forced(self, p: _Pair, start: Profile) -> ForcedMove | None:
        if len(p.starts) == 1 and p.starts[0] == p.s:
            return None
        i = p.net.index(p.m.node)
        return ForcedMove(p.m.node, p.m.product, start[i])

    def _evidence(self, query: ParadoxQuery, p: _Pair) -> Evidence | None:
        view = p.view
        if query.notion.compares_outcomes:
            # index 0: s compared to terminal (vulnerability); 1: terminal to s.
            side = 0 if query.notion is Notion.VULNERABLE else 1
            good = [t for t in view.terminals if _holds(p.relations[t][side], query.strength)]
            if query.quantifier is Quantifier.EXISTS:
                if not good:
                    return None
                goal = set(good)
                path = witness_path(p.net, p.starts, goal.__contains__, Mode.ANY, self.cap)
                return PathEvidence(path, p.relations[path.end][side], self._forced(p, path.start))
            if view.has_cycle or not view.terminals or len(good) != len(view.terminals):
                return None
            return DigestEvidence(view.reached, tuple((t, p.relations[t][side]) for t in view.terminals))

        if query.quantifier is Quantifier.EXISTS and not view.has_cycle:
            return None
        if query.quantifier is Quantifier.FORALL and view.terminals:
            return None
        assert view.cycle_witness is not None and view.cycle_lead_in is not None
        lead_in = view.cycle_lead_in
        return CycleEvidence(
            lead_in,
            view.cycle_witness,
            self._forced(p, lead_in.start),
            view.reached if query.quantifier is Quantifier.FORALL else None,
        )


def classify(
    net: SocialNetwork, query: ParadoxQuery, cap: int = DEFAULT_STATE_CAP
) -> ParadoxCertificate:
    return ParadoxAnalyzer(net, cap).classify(query)


@dataclass(frozen=True)
class FullReport:
    network: SocialNetwork
    certificates: dict[str, ParadoxCertificate]
    equilibria: tuple[Profile, ...]
    lattice_violations: tuple[tuple[str, str], ...] = field(default_factory=tuple)

    @property
    def verdicts(self) -> dict[str, bool]:
        return {k: c.verdict for k, c in self.certificates.items()}


def lattice_violations(verdicts: dict[str, bool]) -> list[tuple[str, str]]:
    return [(a, b) for a, b in LATTICE if verdicts.get(a) and verdicts.get(b) is False]


def full_report(
    net: SocialNetwork, cap: int = DEFAULT_STATE_CAP, threads: int = 1
) -> FullReport:
    """All fourteen verdicts; raises ``LatticeViolation`` if they are inconsistent."""
    analyzer = ParadoxAnalyzer(net, cap, threads)
    certs = {q.key: analyzer.classify(q) for q in ALL_QUERIES}
    bad = lattice_violations({k: c.verdict for k, c in certs.items()})
    if bad:
        raise LatticeViolation(f"implication(s) violated: {bad}")
    return FullReport(net, certs, tuple(analyzer.equilibria))


# -- certificate re-verification -----------------------------------------------


def verify_certificate(
    net: SocialNetwork, cert: ParadoxCertificate, cap: int = DEFAULT_STATE_CAP
) -> None:
    """Independently re-check a positive certificate; raise ``AssertionError`` if unsound.

    Negative verdicts are re-derived by running the classifier again.
    """
    query = cert.query
    if not cert.verdict:
        again = classify(net, query, cap)
        if again.verdict:
            raise AssertionError(f"{query}: negative verdict, but a witness exists")
        return
    s, m, ev = cert.initial_ne, cert.modification, cert.evidence
    if s is None or m is None or ev is None:
        raise AssertionError("positive certificate without witness")
    if not is_nash_equilibrium(net, s):
        raise AssertionError("initial profile is not an equilibrium")
    if m.kind is not query.notion.kind:
        raise AssertionError("modification of the wrong kind")
    net2 = apply_modification(net, m)
    starts = start_set(net2, s, m)

    def check_forced(start: Profile, forced: ForcedMove | None) -> None:
        if start not in starts:
            raise AssertionError("evidence does not begin at a legal start profile")
        if forced is not None:
            i = net.index(forced.node)
            if s[i] != forced.removed or start[i] != forced.chosen:
                raise AssertionError("forced move does not match the start profile")
            if forced.chosen != ABSTAIN and forced.chosen not in net2.product_sets[forced.node]:
                raise AssertionError("forced move picks an unavailable product")

    if isinstance(ev, ExhaustionEvidence):
        if has_nash_equilibrium(net2, cap):
            raise AssertionError("modified game still has an equilibrium")
        return
    if isinstance(ev, PathEvidence):
        check_forced(ev.path.start, ev.forced_move)
        validate_path(net2, ev.path)
        if not is_nash_equilibrium(net2, ev.path.end):
            raise AssertionError("path does not end in an equilibrium")
        rel = (
            compare_profiles(net, s, net2, ev.path.end)
            if query.notion is Notion.VULNERABLE
            else compare_profiles(net2, ev.path.end, net, s)
        )
        if rel is not ev.relation or not _holds(rel, query.strength):
            raise AssertionError("end profile does not satisfy the comparison")
        return
    if isinstance(ev, DigestEvidence):
        view = explore(net2, starts, Mode.ANY, cap)
        if view.has_cycle or not view.terminals:
            raise AssertionError("re-exploration found a cycle or no terminal")
        if set(view.terminals) != {t for t, _ in ev.terminals}:
            raise AssertionError("terminal set differs from the digest")
        for t, _ in ev.terminals:
            rel = (
                compare_profiles(net, s, net2, t)
                if query.notion is Notion.VULNERABLE
                else compare_profiles(net2, t, net, s)
            )
            if not _holds(rel, query.strength):
                raise AssertionError(f"terminal {t} fails the comparison")
        return
    if isinstance(ev, CycleEvidence):
        check_forced(ev.lead_in.start, ev.forced_move)
        validate_path(net2, ev.lead_in)
        validate_path(net2, ev.cycle)
        if not ev.cycle.steps or ev.cycle.start != ev.cycle.end or ev.cycle.start != ev.lead_in.end:
            raise AssertionError("cycle evidence is not a closed walk joined to the lead-in")
        if query.quantifier is Quantifier.FORALL and explore(net2, starts, Mode.ANY, cap).terminals:
            raise AssertionError("a terminal is reachable, so not every path is infinite")
        return
    raise AssertionError(f"unknown evidence type {type(ev).__name__}")


# -- search for forall-strict vulnerability --------------------------------------


@dataclass(frozen=True)
class SearchOutcome:
    """Result of a bounded random search; ``hit`` is ``None`` when the budget ran out."""

    hit: ParadoxCertificate | None
    hit_seed: int | None
    hit_network: SocialNetwork | None
    instances: int
    first_seed: int
    last_seed: int | None

    @property
    def exhausted(self) -> bool:
        return self.hit is None


def search_forall_s_vulnerable(
    params: Any, budget: int, first_seed: int = 0, cap: int = DEFAULT_STATE_CAP
) -> SearchOutcome:
    """Classify ``budget`` seeded random networks, stopping at the first hit.

    ``params`` is a :class:`~netparadox.workbench.generate.RandomNetworkParams`;
    it must use at least three products, since with two products no network is
    even forall-weak vulnerable.
    """
    from .workbench.generate import random_network

    if params.products < 3:
        raise InvalidParams("the search needs at least three products")
    if budget < 0:
        raise InvalidParams("budget must be non-negative")
    query = ParadoxQuery(Notion.VULNERABLE, Quantifier.FORALL, Strength.STRICT)
    for n in range(budget):
        seed = first_seed + n
        net = random_network(seed, params)
        cert = classify(net, query, cap)
        if cert.verdict:
            return SearchOutcome(cert, seed, net, n + 1, first_seed, seed)
    return SearchOutcome(None, None, None, budget, first_seed, first_seed + budget - 1 if budget else None)
