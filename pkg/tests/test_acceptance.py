"""The fourteen acceptance criteria, at exact rational equality.

Each test records a PASS or FAIL line that is printed in the terminal summary.
"""

import functools
from fractions import Fraction

import networkx as nx
import pytest

from helpers import ACCEPTANCE, fixture_net
from netparadox.dynamics import (
    Mode,
    apply_move,
    explore,
    phase_path,
    profitable_deviations,
    validate_path,
    witness_path,
)
from netparadox.model import (
    ABSTAIN,
    Relation,
    best_responses,
    compare_profiles,
    enumerate_nash_equilibria,
    is_nash_equilibrium,
    payoffs,
)
from netparadox.paradox import (
    ModKind,
    Modification,
    ParadoxQuery,
    apply_modification,
    classify,
    enumerate_modifications,
    full_report,
    lattice_violations,
    start_set,
    verify_certificate,
)
from netparadox.structure import Condition, ne_structure_witness, theorem2_certificate
from netparadox.workbench.fixtures import FIXTURE_NAMES, load_fixture
from netparadox.workbench.generate import RandomNetworkParams, random_network
from oracle import Game, modified_games, verdicts
from test_dynamics import replay

_notes: dict[int, str] = {}


def criterion(n, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                ACCEPTANCE[n] = ("FAIL", title, _notes.get(n, ""))
                raise
            ACCEPTANCE[n] = ("PASS", title, _notes.get(n, ""))

        return run

    return wrap


def verdict(net, key):
    return classify(net, ParadoxQuery.parse(key)).verdict


def fixture_start(name):
    entry = load_fixture(name)
    net = entry.network
    kind, node, product = entry.modification
    m = apply_modification(net, Modification(ModKind(kind), node, product)), Modification(ModKind(kind), node, product)
    return net, net.profile(entry.initial), m[0], m[1]


def with_sources(net, choices):
    """Profile from ``choices``; unnamed single-product nodes play their product."""
    full = {v: net.product_sets[v][0] for v in net.nodes if len(net.product_sets[v]) == 1}
    full.update(choices)
    return net.profile(full)


def uniform_on(net, product, nodes):
    return with_sources(net, {v: product for v in nodes})


def walk(net, start, labels):
    """Replay ``node:strategy`` labels and return the visited profiles."""
    states = [tuple(start)]
    for label in labels:
        node, to = label.split(":")
        states.append(apply_move(net, states[-1], node, to))
    return states


def maximal_paths(net, start, mode, limit=10_000):
    """Every maximal improvement path from ``start`` (each as a tuple of labels)."""
    out, stack = [], [(tuple(start), ())]
    while stack:
        s, labels = stack.pop()
        devs = profitable_deviations(net, s, mode)
        if not devs:
            out.append((labels, s))
        for d in devs:
            assert len(labels) < limit
            stack.append((apply_move(net, s, d.node, d.to), labels + (f"{d.node}:{d.to}",)))
    return out


@criterion(1, "fig1 payoffs and two-step improvement path")
def test_criterion_01_fig1():
    net = fixture_net("fig1")
    s = net.profile(load_fixture("fig1").initial)
    p = payoffs(net, s)
    assert (p["1"], p["2"], p["3"]) == (Fraction(1, 5), Fraction(1, 10), Fraction(1, 10))
    path = replay(net, s, ["3:t3", "1:t0"])
    validate_path(net, path)


@criterion(2, "fig3 forall-weak vulnerable via the unique best-response path; printed weights inert")
def test_criterion_02_fig3():
    net, s, net2, m = fixture_start("fig3")
    assert verdict(net, "vulnerable/forall/weak") is True
    assert verdict(net, "vulnerable/exists/strict") is False
    paths = maximal_paths(net2, s, Mode.BEST_RESPONSE)
    assert len(paths) == 1
    labels, end = paths[0]
    assert labels == ("4:t1", "3:t2", "5:t2", "6:t0", "4:t3", "3:t3", "5:t0")
    assert end == ("t2", "t3", "t3", "t3", ABSTAIN, ABSTAIN)
    validate_path(net2, replay(net2, s, labels))
    assert compare_profiles(net, s, net2, end) is Relation.WEAKLY_BETTER
    printed, s_p, printed2, _ = fixture_start("fig3-printed")
    assert is_nash_equilibrium(printed, s_p) and profitable_deviations(printed2, s_p) == []


@criterion(3, "fig4 exists-strict vulnerable to all-abstain; source variant only weak")
def test_criterion_03_fig4():
    net, s, net2, _ = fixture_start("fig4")
    assert verdict(net, "vulnerable/exists/strict") is True
    assert verdict(net, "vulnerable/forall/weak") is False
    t0 = net.uniform(ABSTAIN)
    labels = ["4:t2", "3:t3", "5:t3", "6:t0", "2:t2", "1:t0", "4:t0", "2:t0", "3:t0", "5:t0"]
    path = replay(net2, s, labels)
    validate_path(net2, path)
    assert path.end == t0 and is_nash_equilibrium(net2, t0)
    # another improvement path stops at an equilibrium that is not comparable
    other = replay(net2, s, ["4:t2", "2:t2", "1:t0", "3:t0"])
    validate_path(net2, other)
    assert is_nash_equilibrium(net2, other.end)
    assert compare_profiles(net, s, net2, other.end) is Relation.INCOMPARABLE
    assert compare_profiles(net, s, net2, t0) is Relation.STRICTLY_BETTER
    assert witness_path(net2, s, lambda q: q == t0).end == t0
    src = fixture_net("fig4-src")
    assert verdict(src, "vulnerable/exists/weak") is True
    assert verdict(src, "vulnerable/exists/strict") is False
    assert verdict(src, "vulnerable/forall/weak") is False


FIG5_TABLE = {
        ("t1", "t1", "t2"): "1",
        ("t1", "t1", "t3"): "3",
        ("t1", "t3", "t2"): "3",
        ("t1", "t3", "t3"): "2",
        ("t2", "t1", "t2"): "2",
        ("t2", "t1", "t3"): "2",
        ("t2", "t3", "t2"): "3",
        ("t2", "t3", "t3"): "1",
}


def off_best_response(net, s):
    return [v for v in net.nodes if s[net.index(v)] not in best_responses(net, s, v)]


def test_fig5_total_fragility():
    net, _, net2, _ = fixture_start("fig5")
    assert verdict(net, "fragile/total") is True
    assert enumerate_nash_equilibria(net2) == []
    assert len(Game.of(net2).equilibria()) == 0
    for (a, b, c), culprit in FIG5_TABLE.items():
        off = off_best_response(net2, with_sources(net2, {"1": a, "2": b, "3": c}))
        if (a, b, c) in (("t1", "t3", "t2"), ("t2", "t1", "t3")):
            # each node copies a different neighbour than the one feeding it
            assert off == ["1", "2", "3"]
        else:
            assert off == [culprit]


@pytest.mark.xfail(
    strict=True,
    reason="in (t1,t3,t2) and (t2,t1,t3) all three triangle nodes can improve, for any 0 < theta < w1 < w2",
)
@criterion(4, "fig5 total fragility: no equilibrium after expansion, one non-best-responder per profile")
def test_criterion_04_fig5():
    _notes[4] = "unattainable: two of the eight profiles have three non-best-responders; ledgered"
    net, _, net2, _ = fixture_start("fig5")
    assert verdict(net, "fragile/total") is True
    assert enumerate_nash_equilibria(net2) == []
    for (a, b, c), culprit in FIG5_TABLE.items():
        assert off_best_response(net2, with_sources(net2, {"1": a, "2": b, "3": c})) == [culprit], (a, b, c)


FIG6_CYCLE = ["1:t2", "2:t3", "3:t3", "1:t1", "2:t1", "3:t2"]


@criterion(5, "fig6 forall fragility with the six-state cycle; expanded game keeps an equilibrium")
def test_criterion_05_fig6():
    net, s, net2, _ = fixture_start("fig6")
    assert verdict(net, "fragile/forall") is True
    assert verdict(net, "fragile/total") is False
    states = walk(net2, s, FIG6_CYCLE)
    assert [net2.as_dict(q)["1"] + net2.as_dict(q)["2"] + net2.as_dict(q)["3"] for q in states] == [
        "t1t1t2",
        "t2t1t2",
        "t2t3t2",
        "t2t3t3",
        "t1t3t3",
        "t1t1t3",
        "t1t1t2",
    ]
    validate_path(net2, replay(net2, s, FIG6_CYCLE))
    view = explore(net2, s)
    assert view.has_cycle and not view.terminals
    assert set(states) <= set(view.order)
    ne = with_sources(net2, {"1": "t1", "2": "t1", "3": ABSTAIN, "t2a": ABSTAIN, "t2b": ABSTAIN})
    assert is_nash_equilibrium(net2, ne)


@criterion(6, "fig7 exists fragility by a six-cycle, a finite path to all-t4, one-step path to all-t3")
def test_criterion_06_fig7():
    net, s, net2, _ = fixture_start("fig7")
    assert verdict(net, "fragile/exists") is True
    assert verdict(net, "fragile/forall") is False
    cyc = ["3:t2", "1:t2", "2:t3", "3:t3", "1:t1", "2:t1"]
    entry = with_sources(net2, {"1": "t1", "2": "t1", "3": "t3"})
    assert entry in explore(net2, s).order
    states = walk(net2, entry, cyc)
    assert states[-1] == entry and len(set(states)) == 6
    validate_path(net2, replay(net2, entry, cyc))
    # a finite path to all-t4, found in the full deviation graph
    all_t4 = uniform_on(net2, "t4", ["1", "2", "3"])
    g = Game.of(net2).graph()
    route = nx.shortest_path(g, s, all_t4)
    labels = []
    for a, b in zip(route, route[1:]):
        (k,) = [k for k in range(len(a)) if a[k] != b[k]]
        labels.append(f"{net2.nodes[k]}:{b[k]}")
    path = replay(net2, s, labels)
    validate_path(net2, path)
    assert is_nash_equilibrium(net2, all_t4)
    m3 = Modification(ModKind.EXPANSION, "1", "t3")
    net3 = apply_modification(net, m3)
    path = replay(net3, s, ["1:t3"])
    validate_path(net3, path)
    assert path.end == uniform_on(net3, "t3", ["1", "2", "3"]) and is_nash_equilibrium(net3, path.end)


@criterion(7, "fig8 forall-strict inefficient: every path from both forced starts reaches all-t2")
def test_criterion_07_fig8():
    net, s, net2, m = fixture_start("fig8")
    assert verdict(net, "inefficient/forall/strict") is True
    starts = start_set(net2, s, m)
    assert len(starts) == 2
    all_t2 = net.uniform("t2")
    for start in starts:
        view = explore(net2, start)
        assert not view.has_cycle and view.terminals == (all_t2,)
        assert all(end == all_t2 for _, end in maximal_paths(net2, start, Mode.ANY))
    assert set(payoffs(net, s).values()) == {Fraction(1, 5)}
    assert set(payoffs(net2, all_t2).values()) == {Fraction(1, 2)}
    assert compare_profiles(net2, all_t2, net, s) is Relation.STRICTLY_BETTER


@criterion(8, "fig9 exists-strict inefficient via 3:t2, 4:t2, 5:t2; forall-weak taken from brute force")
def test_criterion_08_fig9():
    net, s, net2, m = fixture_start("fig9")
    assert verdict(net, "inefficient/exists/strict") is True
    forced = apply_move(net2, s, "3", "t2")
    assert forced in start_set(net2, s, m)
    path = replay(net2, forced, ["4:t2", "5:t2"])
    validate_path(net2, path)
    assert path.end == net.uniform("t2") and is_nash_equilibrium(net2, path.end)
    assert compare_profiles(net2, path.end, net, s) is Relation.STRICTLY_BETTER
    brute = verdicts(net)["inefficient/forall/weak"]
    assert verdict(net, "inefficient/forall/weak") is brute
    if brute:
        _notes[8] = "inefficient/forall/weak = true by exhaustive search; divergence ledgered"


@criterion(9, "fig5u/fig6u/fig7u unsafety, each contraction reproducing the matching expanded game")
def test_criterion_09_unsafe():
    for name, base, key in (("fig5u", "fig5", "unsafe/total"), ("fig6u", "fig6", "unsafe/forall"), ("fig7u", "fig7", "unsafe/exists")):
        net, s, net2, m = fixture_start(name)
        _, s_base, base2, _ = fixture_start(base)
        assert verdict(net, key) is True, name
        assert base2.describe()["nodes"] == net2.describe()["nodes"]
        assert set(base2.edges) == set(net2.edges)
        cert = classify(net, ParadoxQuery.parse(key))
        verify_certificate(net, cert)
    # the forced move lands on (or reaches) the base example's start
    net, s, net2, m = fixture_start("fig6u")
    _, s6, _, _ = fixture_start("fig6")
    assert any(s6 in explore(net2, q).order for q in start_set(net2, s, m))


def _lattice_networks():
    for seed in range(300):
        params = RandomNetworkParams(nodes=2 + seed % 4, products=1 + seed % 3, edge_density=Fraction(1, 2))
        yield random_network(seed, params)


@criterion(10, "implication lattice on every fixture and 300 random networks")
def test_criterion_10_lattice():
    bad = []
    for name in FIXTURE_NAMES:
        bad += [(name, v) for v in lattice_violations(full_report(fixture_net(name)).verdicts)]
    for net in _lattice_networks():
        bad += [(net.name, v) for v in lattice_violations(full_report(net).verdicts)]
    assert bad == []


@criterion(11, "two products: never forall-weak vulnerable; phase procedure ends at an equilibrium")
def test_criterion_11_two_products():
    for seed in range(200):
        params = RandomNetworkParams(nodes=2 + seed % 4, products=2, edge_density=Fraction(3, 5))
        net = random_network(seed, params)
        assert verdict(net, "vulnerable/forall/weak") is False, seed
        eqs = enumerate_nash_equilibria(net)
        for m in enumerate_modifications(net, ModKind.EXPANSION):
            net2 = apply_modification(net, m)
            for s in eqs:
                path = phase_path(net2, s, m.product, base=net)
                validate_path(net2, path)
                assert is_nash_equilibrium(net2, path.end)


@criterion(12, "source-free networks: certificate excludes vulnerability; every equilibrium has a witness")
def test_criterion_12_source_free():
    counts = {c: 0 for c in Condition}
    for seed in range(200):
        params = RandomNetworkParams(nodes=2 + seed % 4, products=1 + seed % 3, edge_density=Fraction(3, 5), source_free=True)
        net = random_network(seed, params)
        cert = theorem2_certificate(net)
        assert cert.applicable
        counts[cert.condition] += 1
        if cert.certifies:
            assert verdict(net, "vulnerable/exists/weak") is False, seed
        for s in enumerate_nash_equilibria(net):
            for v, t in zip(net.nodes, s):
                if t != ABSTAIN:
                    witness = ne_structure_witness(net, s, t, v)
                    assert witness.minimal
                    assert all(s[net.index(u)] == t for u in witness.nodes)
    assert counts[Condition.ALL_EMPTY] and counts[Condition.COMMON_CORE]


@criterion(13, "simple cycles: no vulnerability, no fragility or unsafety; fig10 and fig11 examples")
def test_criterion_13_simple_cycles():
    keys = [
        "vulnerable/exists/weak",
        "vulnerable/exists/strict",
        "vulnerable/forall/weak",
        "vulnerable/forall/strict",
        "fragile/exists",
        "inefficient/forall/weak",
        "unsafe/forall",
    ]
    for seed in range(100):
        params = RandomNetworkParams(nodes=2 + seed % 5, products=1 + seed % 3, topology="cycle")
        got = full_report(random_network(seed, params)).verdicts
        assert [k for k in keys if got[k]] == [], seed
    assert verdict(fixture_net("fig10"), "inefficient/exists/strict") is True
    net, s, net2, m = fixture_start("fig11")
    assert verdict(net, "unsafe/exists") is True
    labels = ["1:t0", "3:t", "2:t0", "1:t", "3:t0", "2:t"]
    entry = net2.profile({"1": "t", "2": "t", "3": ABSTAIN})
    states = walk(net2, entry, labels)
    assert states[-1] == entry and len(set(states)) == 6
    validate_path(net2, replay(net2, entry, labels))
    assert entry in explore(net2, start_set(net2, s, m)).order


@criterion(14, "lazy exploration agrees with the full deviation graph on every fixture")
def test_criterion_14_oracle_equivalence():
    for name in FIXTURE_NAMES:
        net = fixture_net(name)
        eqs = Game.of(net).equilibria()
        assert eqs == sorted(enumerate_nash_equilibria(net))
        for kind in ModKind:
            games = dict(modified_games(net, kind.value))
            for m in enumerate_modifications(net, kind):
                net2 = apply_modification(net, m)
                g2 = games[(m.node, m.product)]
                for s in eqs:
                    starts = start_set(net2, s, m)
                    view = explore(net2, starts)
                    reached, terminals, cyclic = g2.reach(starts)
                    assert set(view.order) == reached, (name, m)
                    assert set(view.terminals) == terminals and view.has_cycle == cyclic, (name, m)
