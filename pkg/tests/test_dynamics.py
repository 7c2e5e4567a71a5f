from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import fixture_net, random_nets
from netparadox import errors
from netparadox.dynamics import (
    Deviation,
    DeviationPath,
    Mode,
    apply_move,
    explore,
    is_terminal,
    phase_path,
    profitable_deviations,
    validate_path,
    witness_path,
)
from netparadox.model import ABSTAIN, Relation, compare_profiles, enumerate_nash_equilibria, is_nash_equilibrium
from netparadox.paradox import ModKind, apply_modification, enumerate_modifications, start_set
from netparadox.workbench.fixtures import FIXTURE_NAMES
from netparadox.workbench.generate import RandomNetworkParams, random_network
from oracle import Game


def fig1_profile():
    net = fixture_net("fig1")
    return net, net.profile({"1": "t2", "2": "t3", "3": "t2", "src_t2": "t2", "src_t3": "t3"})


def replay(net, start, labels):
    """Build a DeviationPath from ``node:strategy`` labels using the engine's own gains."""
    s = tuple(start)
    steps = []
    for label in labels:
        node, to = label.split(":")
        devs = {d.to: d for d in profitable_deviations(net, s) if d.node == node}
        assert to in devs, f"{label} is not profitable at {s}"
        steps.append(devs[to])
        s = apply_move(net, s, node, to)
    return DeviationPath(tuple(start), tuple(steps), s)


def test_fig1_two_step_path_validates():
    net, s = fig1_profile()
    path = replay(net, s, ["3:t3", "1:t0"])
    validate_path(net, path)
    assert net.as_dict(path.end)["1"] == ABSTAIN
    assert path.steps[0].gain == Fraction(1, 10)


def test_profitable_deviations_match_brute_force():
    net, s = fig1_profile()
    ours = {apply_move(net, s, d.node, d.to) for d in profitable_deviations(net, s)}
    assert ours == set(Game.of(net).moves(s))


def test_best_response_mode_is_a_subset():
    net, s = fig1_profile()
    br = profitable_deviations(net, s, Mode.BEST_RESPONSE)
    assert set(br) <= set(profitable_deviations(net, s))
    assert all(d.is_best_response for d in br)


def test_validate_path_rejects_tampering():
    net, s = fig1_profile()
    good = replay(net, s, ["3:t3", "1:t0"])
    d0 = good.steps[0]
    bad_gain = Deviation(d0.node, d0.from_, d0.to, d0.gain + 1, d0.is_best_response)
    bad_br = Deviation(d0.node, d0.from_, d0.to, d0.gain, not d0.is_best_response)
    unprofitable = Deviation("1", "t2", "t0", Fraction(-1, 5), False)
    for path in (
        DeviationPath(s, (bad_gain,) + good.steps[1:], good.end),
        DeviationPath(s, (bad_br,) + good.steps[1:], good.end),
        DeviationPath(s, (unprofitable,), apply_move(net, s, "1", "t0")),
        DeviationPath(s, good.steps, s),
    ):
        with pytest.raises(ValueError):
            validate_path(net, path)


def test_cycle_from_an_equilibrium_start_is_a_single_terminal():
    net = fixture_net("fig8")
    s = ("t2", "t2", "t1", "t1")
    view = explore(net, s)
    assert view.reached == 1 and view.terminals == (s,) and not view.has_cycle


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_exploration_matches_full_deviation_graph(name):
    net = fixture_net(name)
    game = Game.of(net)
    for m in enumerate_modifications(net, ModKind.EXPANSION)[:4] + enumerate_modifications(net, ModKind.CONTRACTION)[:4]:
        net2 = apply_modification(net, m)
        g2 = Game.of(net2)
        for s in game.equilibria()[:3]:
            starts = start_set(net2, s, m)
            view = explore(net2, starts)
            reached, terminals, cyclic = g2.reach(starts)
            assert set(view.order) == reached
            assert set(view.terminals) == terminals
            assert view.has_cycle == cyclic


@given(random_nets(max_nodes=5), st.data())
def test_exploration_matches_full_graph_on_random_networks(net, data):
    s = tuple(data.draw(st.sampled_from(net.strategies(v))) for v in net.nodes)
    for mode in Mode:
        view = explore(net, s, mode)
        g = Game.of(net)
        reached, terminals, cyclic = g.reach([s]) if mode is Mode.ANY else (None, None, None)
        if mode is Mode.ANY:
            assert set(view.order) == reached and set(view.terminals) == terminals and view.has_cycle == cyclic
        for t in view.order:
            path = view.path_to(net, t)
            validate_path(net, path)
            assert all(d.is_best_response for d in path.steps) or mode is Mode.ANY
        if view.has_cycle:
            validate_path(net, view.cycle_witness)
            validate_path(net, view.cycle_lead_in)
            assert view.cycle_witness.start == view.cycle_witness.end == view.cycle_lead_in.end
            assert len(view.cycle_witness) >= 2


def _all_maximal_paths_finite(net, start, limit):
    # depth-first over every improvement path; a repeat on the current path is a cycle
    stack = [(start, (start,))]
    count = 0
    while stack:
        s, seen = stack.pop()
        count += 1
        if count > limit:
            return None
        for d in profitable_deviations(net, s):
            t = apply_move(net, s, d.node, d.to)
            if t in seen:
                return False
            stack.append((t, seen + (t,)))
    return True


@pytest.mark.parametrize("name", ["fig3", "fig4", "fig8", "fig9", "fig10"])
def test_acyclic_reachable_set_means_every_path_is_finite(name):
    net = fixture_net(name)
    for m in enumerate_modifications(net, ModKind.EXPANSION)[:6]:
        net2 = apply_modification(net, m)
        for s in enumerate_nash_equilibria(net)[:2]:
            view = explore(net2, s)
            if view.reached > 10**4:
                continue
            result = _all_maximal_paths_finite(net2, s, 10**5)
            if result is not None:
                assert result == (not view.has_cycle)


def test_witness_path_is_shortest_and_errors_when_unreachable():
    net, s = fig1_profile()
    path = witness_path(net, s, is_terminal(net))
    validate_path(net, path)
    assert is_nash_equilibrium(net, path.end)
    view = explore(net, s)
    assert len(path) == min(len(view.path_to(net, t)) for t in view.terminals)
    with pytest.raises(errors.NotReachable):
        witness_path(net, s, lambda t: False)


def test_witness_path_from_several_starts():
    net = fixture_net("fig8")
    net2 = apply_modification(net, enumerate_modifications(net, ModKind.CONTRACTION)[0])
    starts = [("t2", "t2", ABSTAIN, "t1"), ("t2", "t2", "t2", "t1")]
    path = witness_path(net2, starts, is_terminal(net2))
    assert path.start in starts


def test_explore_respects_the_cap():
    net, s = fig1_profile()
    with pytest.raises(errors.StateSpaceTooLarge):
        explore(net, s, cap=1)


def test_empty_start_list_is_rejected():
    net, _ = fig1_profile()
    with pytest.raises(errors.InvalidProfile):
        explore(net, [])


# -- the two-product phase procedure -----------------------------------------------


def test_phase_path_preconditions():
    with pytest.raises(errors.NotTwoProducts):
        phase_path(fixture_net("fig4"), fixture_net("fig4").uniform(ABSTAIN), "t1")
    net = fixture_net("fig8")
    with pytest.raises(errors.StartNotEquilibrium):
        phase_path(net, ("t2", "t2", "t2", "t1"), "t1", base=net)


def _two_product_cases(seeds):
    params = RandomNetworkParams(nodes=5, products=2, edge_density=Fraction(3, 5))
    for seed in seeds:
        net = random_network(seed, params)
        for m in enumerate_modifications(net, ModKind.EXPANSION):
            yield net, m


def test_phase_path_terminates_at_an_equilibrium_no_worse():
    for net, m in _two_product_cases(range(40)):
        net2 = apply_modification(net, m)
        for s in enumerate_nash_equilibria(net):
            path = phase_path(net2, s, m.product, base=net)
            validate_path(net2, path)
            assert all(d.is_best_response for d in path.steps)
            assert is_nash_equilibrium(net2, path.end)
            rel = compare_profiles(net, s, net2, path.end)
            assert rel not in (Relation.STRICTLY_BETTER, Relation.WEAKLY_BETTER)
