"""Improvement paths: deviations, reachable deviation graphs and witness paths."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import (
    InvalidProfile,
    NotReachable,
    NotTwoProducts,
    StartNotEquilibrium,
    StateSpaceTooLarge,
)
from .graphs import strongly_connected_components
from .model import ABSTAIN, DEFAULT_STATE_CAP, Profile, SocialNetwork, is_nash_equilibrium


# (node index, target strategy, scaled gain, is best response)
_Raw = tuple[int, str, int, bool]


class Mode(enum.Enum):
    ANY = "any"
    BEST_RESPONSE = "br"


@dataclass(frozen=True)
class Deviation:
    node: str
    from_: str
    to: str
    gain: Fraction
    is_best_response: bool

    def label(self) -> str:
        return f"{self.node}:{self.to}"


@dataclass(frozen=True)
class DeviationPath:
    start: Profile
    steps: tuple[Deviation, ...]
    end: Profile

    def __len__(self) -> int:
        return len(self.steps)

    def labels(self) -> list[str]:
        return [d.label() for d in self.steps]

    def states(self, net: SocialNetwork) -> list[Profile]:
        out = [self.start]
        for d in self.steps:
            out.append(apply_move(net, out[-1], d.node, d.to))
        return out


def apply_move(net: SocialNetwork, s: Sequence[str], node: str, strategy: str) -> Profile:
    t = list(s)
    t[net.index(node)] = strategy
    return tuple(t)


def _deviation(net: SocialNetwork, s: Profile, raw: _Raw) -> Deviation:
    i, x, gain, br = raw
    return Deviation(net.nodes[i], s[i], x, Fraction(gain, net.kernel.scale), br)


def _step(s: Profile, i: int, x: str) -> Profile:
    return s[:i] + (x,) + s[i + 1 :]


def _trace(
    net: SocialNetwork, parents: Mapping[Profile, tuple[Profile, _Raw] | None], target: Profile
) -> DeviationPath:
    steps = []
    cur = target
    while parents[cur] is not None:
        prev, raw = parents[cur]
        steps.append(_deviation(net, prev, raw))
        cur = prev
    steps.reverse()
    return DeviationPath(cur, tuple(steps), target)


def profitable_deviations(
    net: SocialNetwork, s: Sequence[str], mode: Mode = Mode.ANY
) -> list[Deviation]:
    """Every single-node strict improvement from ``s``, ordered by node then strategy."""
    s = tuple(s)
    raw = net.kernel.deviations(s, mode is Mode.BEST_RESPONSE)
    return [_deviation(net, s, r) for r in raw]


def validate_path(net: SocialNetwork, path: DeviationPath) -> None:
    """Replay ``path`` under exact arithmetic; raise ``ValueError`` on any bad step."""
    k = net.kernel
    net.check_profile(path.start)
    s = tuple(path.start)
    for n, d in enumerate(path.steps):
        i = net.index(d.node)
        if s[i] != d.from_:
            raise ValueError(f"step {n}: node {d.node} plays {s[i]}, not {d.from_}")
        if d.to not in k.strategies[i]:
            raise ValueError(f"step {n}: {d.to} is not a strategy of node {d.node}")
        vals = k.values(s, i)
        pos = k.strategies[i].index
        gain = vals[pos(d.to)] - vals[pos(d.from_)]
        if gain <= 0:
            raise ValueError(f"step {n} ({d.label()}) is not a profitable deviation")
        if Fraction(gain, k.scale) != d.gain:
            raise ValueError(f"step {n} ({d.label()}) records the wrong gain")
        if d.is_best_response != (vals[pos(d.to)] == max(vals)):
            raise ValueError(f"step {n} ({d.label()}) misreports best-response status")
        s = _step(s, i, d.to)
    if s != tuple(path.end):
        raise ValueError("replaying the steps does not reach the recorded end profile")


def _as_starts(net: SocialNetwork, starts: Sequence[str] | Iterable[Sequence[str]]) -> list[Profile]:
    if isinstance(starts, tuple) and starts and isinstance(starts[0], str):
        items = [starts]
    else:
        items = [tuple(s) for s in starts]
    out: list[Profile] = []
    for s in items:
        net.check_profile(s)
        if s not in out:
            out.append(tuple(s))
    if not out:
        raise InvalidProfile("no start profiles given")
    return out


@dataclass(frozen=True)
class ImprovementGraphView:
    """The part of the deviation graph reachable from a set of start profiles."""

    start_profiles: tuple[Profile, ...]
    mode: Mode
    order: tuple[Profile, ...]
    successors: Mapping[Profile, tuple[_Raw, ...]]
    parents: Mapping[Profile, tuple[Profile, _Raw] | None]
    terminals: tuple[Profile, ...]
    has_cycle: bool
    cycle_witness: DeviationPath | None
    cycle_lead_in: DeviationPath | None

    @property
    def reached(self) -> int:
        return len(self.order)

    @property
    def all_paths_infinite(self) -> bool:
        return not self.terminals

    def deviations(self, net: SocialNetwork, s: Profile) -> list[Deviation]:
        return [_deviation(net, s, r) for r in self.successors[s]]

    def targets(self, s: Profile) -> list[Profile]:
        return [_step(s, i, x) for i, x, _, _ in self.successors[s]]

    def path_to(self, net: SocialNetwork, target: Profile) -> DeviationPath:
        """Shortest path (BFS tree) from some start profile to ``target``."""
        if target not in self.parents:
            raise NotReachable(f"{target} was not reached")
        return _trace(net, self.parents, target)


def explore(
    net: SocialNetwork,
    starts: Sequence[str] | Iterable[Sequence[str]],
    mode: Mode = Mode.ANY,
    cap: int = DEFAULT_STATE_CAP,
) -> ImprovementGraphView:
    """Breadth-first exploration of every improvement path from ``starts``.

    On a finite state space an infinite improvement path exists iff a cycle is
    reachable, and every path is infinite iff no terminal is reachable.
    """
    k = net.kernel
    best_only = mode is Mode.BEST_RESPONSE
    start_list = _as_starts(net, starts)
    parents: dict[Profile, tuple[Profile, _Raw] | None] = {}
    successors: dict[Profile, tuple[_Raw, ...]] = {}
    order: list[Profile] = []
    queue: deque[Profile] = deque()
    for s in start_list:
        parents[s] = None
        queue.append(s)
    while queue:
        s = queue.popleft()
        order.append(s)
        if len(order) > cap:
            raise StateSpaceTooLarge(len(order), cap)
        raw = tuple(k.deviations(s, best_only))
        successors[s] = raw
        for r in raw:
            t = _step(s, r[0], r[1])
            if t not in parents:
                parents[t] = (s, r)
                queue.append(t)

    terminals = tuple(s for s in order if not successors[s])

    def succ(s: Profile) -> list[Profile]:
        return [_step(s, i, x) for i, x, _, _ in successors[s]]

    components = strongly_connected_components(order, succ)
    cyclic = [c for c in components if len(c) > 1]
    witness = lead_in = None
    if cyclic:
        position = {s: n for n, s in enumerate(order)}
        comp = min(cyclic, key=lambda c: min(position[s] for s in c))
        anchor = min(comp, key=position.__getitem__)
        witness = _cycle_through(net, anchor, set(comp), successors)
        lead_in = _trace(net, parents, anchor)

    return ImprovementGraphView(
        start_profiles=tuple(start_list),
        mode=mode,
        order=tuple(order),
        successors=successors,
        parents=parents,
        terminals=terminals,
        has_cycle=bool(cyclic),
        cycle_witness=witness,
        cycle_lead_in=lead_in,
    )


def _cycle_through(
    net: SocialNetwork,
    anchor: Profile,
    component: set[Profile],
    successors: Mapping[Profile, tuple[_Raw, ...]],
) -> DeviationPath:
    # Shortest closed walk through anchor inside its strongly connected component.
    back: dict[Profile, tuple[Profile, _Raw]] = {}
    queue = deque([anchor])
    closing = None
    while queue and closing is None:
        s = queue.popleft()
        for r in successors[s]:
            t = _step(s, r[0], r[1])
            if t not in component:
                continue
            if t == anchor:
                closing = (s, r)
                break
            if t not in back:
                back[t] = (s, r)
                queue.append(t)
    assert closing is not None
    steps = [_deviation(net, closing[0], closing[1])]
    cur = closing[0]
    while cur != anchor:
        prev, r = back[cur]
        steps.append(_deviation(net, prev, r))
        cur = prev
    steps.reverse()
    return DeviationPath(anchor, tuple(steps), anchor)


def witness_path(
    net: SocialNetwork,
    from_: Sequence[str] | Iterable[Sequence[str]],
    to_predicate: Callable[[Profile], bool],
    mode: Mode = Mode.ANY,
    cap: int = DEFAULT_STATE_CAP,
) -> DeviationPath:
    """Shortest improvement path from ``from_`` to a profile satisfying ``to_predicate``.

    ``from_`` may be one profile or several (multi-source search).  Ties break
    by start order, then by deviation order.
    """
    k = net.kernel
    best_only = mode is Mode.BEST_RESPONSE
    parents: dict[Profile, tuple[Profile, _Raw] | None] = {}
    queue: deque[Profile] = deque()
    for s in _as_starts(net, from_):
        parents[s] = None
        queue.append(s)
    while queue:
        s = queue.popleft()
        if to_predicate(s):
            return _trace(net, parents, s)
        if len(parents) > cap:
            raise StateSpaceTooLarge(len(parents), cap)
        for r in k.deviations(s, best_only):
            t = _step(s, r[0], r[1])
            if t not in parents:
                parents[t] = (s, r)
                queue.append(t)
    raise NotReachable("no reachable profile satisfies the predicate")


def is_terminal(net: SocialNetwork, mode: Mode = Mode.ANY) -> Callable[[Profile], bool]:
    best_only = mode is Mode.BEST_RESPONSE
    return lambda s: not net.kernel.deviations(s, best_only)


def phase_path(
    net_expanded: SocialNetwork,
    s0: Sequence[str],
    product: str,
    *,
    base: SocialNetwork | None = None,
) -> DeviationPath:
    """Alternate ``product``-phases and abstain-phases until neither moves.

    A phase is a maximal run of best-response deviations to one fixed
    strategy, applied in ascending node order.  ``product`` is the product
    added by the expansion.  When ``base`` (the network before expansion) is
    given, ``s0`` must be one of its equilibria; otherwise only the weaker
    necessary condition is checked: no node improves by moving to anything
    other than ``product``.
    """
    net = net_expanded
    if len(net.products) != 2:
        raise NotTwoProducts(f"phase procedure needs exactly two products, got {len(net.products)}")
    if product not in net.products:
        raise NotTwoProducts(f"{product!r} is not a product of the network")
    s = tuple(s0)
    net.check_profile(s)
    if base is not None:
        if not is_nash_equilibrium(base, s):
            raise StartNotEquilibrium("start profile is not an equilibrium of the base network")
    elif any(d.to != product for d in profitable_deviations(net, s)):
        raise StartNotEquilibrium("start profile has deviations unrelated to the added product")

    k = net.kernel
    steps: list[Deviation] = []
    seen_rounds = {s}

    def run_phase(target: str) -> bool:
        nonlocal s
        moved = False
        changed = True
        while changed:
            changed = False
            for i in range(k.n):
                if s[i] == target or target not in k.strategies[i]:
                    continue
                vals = k.values(s, i)
                pos = k.strategies[i].index
                v, cur = vals[pos(target)], vals[pos(s[i])]
                if v > cur and v == max(vals):
                    steps.append(Deviation(net.nodes[i], s[i], target, Fraction(v - cur, k.scale), True))
                    s = _step(s, i, target)
                    changed = moved = True
        return moved

    while True:
        a = run_phase(product)
        b = run_phase(ABSTAIN)
        if not (a or b):
            break
        if s in seen_rounds:
            raise RuntimeError("phase procedure revisited a profile")
        seen_rounds.add(s)
    return DeviationPath(tuple(s0), tuple(steps), s)
