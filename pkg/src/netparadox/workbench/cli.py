"""Command line interface.

Exit codes: 0 success, 1 usage error, 2 invalid input, 3 search cap exceeded.
"""

from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence, TextIO

from ..dynamics import Mode, explore, is_terminal, witness_path
from ..errors import (
    IllegalModification,
    InvalidParams,
    InvalidProfile,
    MissingNewThreshold,
    NotReachable,
    StateSpaceTooLarge,
    TooManyNodes,
    UnknownFixture,
    ValidationError,
)
from ..model import (
    DEFAULT_STATE_CAP,
    Profile,
    SocialNetwork,
    best_responses,
    enumerate_nash_equilibria,
    is_nash_equilibrium,
    payoffs,
)
from ..paradox import (
    ModKind,
    Modification,
    Notion,
    ParadoxAnalyzer,
    ParadoxQuery,
    Quantifier,
    Strength,
    apply_modification,
    full_report,
    search_forall_s_vulnerable,
    start_set,
)
from .dot import export_dot
from .fixtures import FIXTURE_NAMES, load_fixture
from .generate import RandomNetworkParams, random_network
from .io import format_rational, read_network, serialize_network
from .report import certificate_json, dumps, path_json, profile_json, report_json

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def load_network(spec: str) -> SocialNetwork:
    """``spec`` is a path to a network document or the name of a fixture."""
    path = Path(spec)
    if path.is_file():
        return read_network(path)
    if spec in FIXTURE_NAMES:
        return load_fixture(spec).network
    raise UsageError(f"{spec!r} is neither a readable file nor a fixture ({', '.join(FIXTURE_NAMES)})")


def parse_profile(net: SocialNetwork, text: str) -> Profile:
    """Parse ``node=strategy`` pairs separated by commas or spaces.

    Source nodes offering a single product default to that product.
    """
    choices: dict[str, str] = {}
    for item in re.split(r"[,\s]+", text.strip()):
        if not item:
            continue
        node, sep, strategy = item.partition("=")
        if not sep or not node or not strategy:
            raise InvalidProfile(f"expected node=strategy, got {item!r}")
        if node in choices:
            raise InvalidProfile(f"node {node!r} given twice")
        choices[node] = strategy
    for v in net.nodes:
        if v not in choices and net.is_source(v) and len(net.product_sets[v]) == 1:
            choices[v] = net.product_sets[v][0]
    return net.profile(choices)


def parse_modification(text: str, kind: ModKind) -> Modification:
    node, sep, product = text.rpartition(":")
    if not sep or not node or not product:
        raise UsageError(f"expected NODE:PRODUCT, got {text!r}")
    return Modification(kind, node, product)


def _fmt_profile(net: SocialNetwork, s: Sequence[str]) -> str:
    return " ".join(f"{v}={x}" for v, x in zip(net.nodes, s))


# -- subcommands ---------------------------------------------------------------


def cmd_validate(args, out: TextIO) -> int:
    net = load_network(args.file)
    print(
        f"ok: {len(net.nodes)} nodes, {len(net.edges)} edges, {len(net.products)} products, "
        f"{net.state_space_size} profiles",
        file=out,
    )
    return EXIT_OK


def cmd_equilibria(args, out: TextIO) -> int:
    net = load_network(args.file)
    eqs = enumerate_nash_equilibria(net, args.cap)
    if args.json:
        out.write(dumps({"nodes": list(net.nodes), "equilibria": [profile_json(net, s) for s in eqs]}))
    else:
        print(f"{len(eqs)} Nash equilibria", file=out)
        for s in eqs:
            print(_fmt_profile(net, s), file=out)
    return EXIT_OK


def cmd_payoffs(args, out: TextIO) -> int:
    net = load_network(args.file)
    s = parse_profile(net, args.profile)
    pay = payoffs(net, s)
    if args.json:
        doc = {
            "profile": profile_json(net, s),
            "payoffs": {v: format_rational(p) for v, p in pay.items()},
            "best_responses": {v: list(best_responses(net, s, v)) for v in net.nodes},
            "nash": is_nash_equilibrium(net, s),
        }
        out.write(dumps(doc))
        return EXIT_OK
    for v, x in zip(net.nodes, s):
        br = best_responses(net, s, v)
        mark = "" if x in br else "  (not a best response)"
        print(f"{v}={x}  payoff {format_rational(pay[v])}  best {','.join(br)}{mark}", file=out)
    print("Nash equilibrium" if is_nash_equilibrium(net, s) else "not a Nash equilibrium", file=out)
    return EXIT_OK


def _modified(net: SocialNetwork, args) -> tuple[SocialNetwork, Modification | None]:
    m = None
    if getattr(args, "expand", None):
        m = parse_modification(args.expand, ModKind.EXPANSION)
    elif getattr(args, "contract", None):
        m = parse_modification(args.contract, ModKind.CONTRACTION)
    if m is None:
        return net, None
    return apply_modification(net, m), m


def cmd_path(args, out: TextIO) -> int:
    base = load_network(args.file)
    net, m = _modified(base, args)
    s = parse_profile(base, args.from_)
    starts = list(start_set(net, s, m)) if m else [s]
    mode = Mode(args.mode)
    view = explore(net, starts, mode, args.cap)
    path = None
    if view.terminals:
        path = witness_path(net, starts, is_terminal(net, mode), mode, args.cap)
    if args.json:
        doc = {
            "reached": view.reached,
            "terminals": [profile_json(net, t) for t in view.terminals],
            "has_cycle": view.has_cycle,
            "path": None if path is None else path_json(net, path),
            "cycle": None if view.cycle_witness is None else path_json(net, view.cycle_witness),
        }
        out.write(dumps(doc))
        return EXIT_OK
    print(f"reached {view.reached} profiles, {len(view.terminals)} equilibria, cycle: {'yes' if view.has_cycle else 'no'}", file=out)
    if path is not None:
        print(f"shortest path to an equilibrium ({len(path)} steps): {' '.join(path.labels()) or '(empty)'}", file=out)
        print(f"ends at {_fmt_profile(net, path.end)}", file=out)
    else:
        print("no equilibrium is reachable: every improvement path is infinite", file=out)
    if view.cycle_witness is not None:
        print(f"cycle: {' '.join(view.cycle_witness.labels())}", file=out)
    return EXIT_OK


def _query_from_args(args) -> ParadoxQuery:
    notion = Notion(args.notion)
    quantifier = Quantifier(args.quantifier)
    if notion.compares_outcomes:
        strength = Strength(args.strength or "weak")
    else:
        if args.strength:
            raise UsageError(f"{notion.value} takes no --strength")
        strength = Strength.NOT_APPLICABLE
    try:
        return ParadoxQuery(notion, quantifier, strength)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_classify(args, out: TextIO) -> int:
    query = _query_from_args(args)
    net = load_network(args.file)
    cert = ParadoxAnalyzer(net, args.cap).classify(query)
    doc = certificate_json(net, cert)
    if args.json:
        out.write(dumps(doc))
        return EXIT_OK
    print(f"{query.key}: {'true' if cert.verdict else 'false'}", file=out)
    w = doc["witness"]
    if w:
        print(f"  equilibrium: {_fmt_profile(net, cert.initial_ne)}", file=out)
        print(f"  modification: {cert.modification}", file=out)
        ev = w["evidence"]
        print(f"  evidence: {ev['kind']}", file=out)
        if ev.get("forced_move"):
            f = ev["forced_move"]
            print(f"  forced move: {f['node']}:{f['chosen']}", file=out)
        for key in ("path", "lead_in", "cycle"):
            if key in ev:
                labels = [f"{st['node']}:{st['to']}" for st in ev[key]["steps"]]
                print(f"  {key}: {' '.join(labels) or '(empty)'}", file=out)
        if ev["kind"] == "digest":
            print(f"  {ev['reached']} profiles reached, {len(ev['terminals'])} equilibria, all compare", file=out)
    else:
        s = doc["searched"]
        print(f"  searched {s['equilibria']} equilibria x {s['modifications']} modifications", file=out)
    return EXIT_OK


def cmd_report(args, out: TextIO) -> int:
    net = load_network(args.file)
    report = full_report(net, args.cap, args.threads)
    if args.json:
        out.write(dumps(report_json(report)))
        return EXIT_OK
    print(f"{len(report.equilibria)} Nash equilibria", file=out)
    width = max(len(k) for k in report.certificates)
    for k, c in report.certificates.items():
        print(f"{k:<{width}}  {'true' if c.verdict else 'false'}", file=out)
    return EXIT_OK


def cmd_fixture(args, out: TextIO) -> int:
    entry = load_fixture(args.name)
    if args.emit:
        out.write(serialize_network(entry.network))
        return EXIT_OK
    print(f"{entry.name}: {entry.figure}", file=out)
    for note in entry.notes:
        print(f"  note: {note}", file=out)
    for k, v in entry.expected.items():
        print(f"  expect {k} = {'true' if v else 'false'}", file=out)
    return EXIT_OK


def cmd_generate(args, out: TextIO) -> int:
    params = RandomNetworkParams(
        nodes=args.nodes,
        products=args.products,
        edge_density=Fraction(args.density),
        source_free=args.source_free,
        topology=args.topology,
    )
    out.write(serialize_network(random_network(args.seed, params)))
    return EXIT_OK


def _seed_range(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"(\d+)\.\.(\d+)", text)
    if not m or int(m.group(1)) > int(m.group(2)):
        raise UsageError(f"expected --seeds A..B with A <= B, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def cmd_search(args, out: TextIO) -> int:
    a, b = _seed_range(args.seeds)
    params = RandomNetworkParams(nodes=args.nodes, products=args.products, edge_density=Fraction(args.density))
    outcome = search_forall_s_vulnerable(params, b - a + 1, a, args.cap)
    if outcome.hit is None:
        print(f"no forall-strict vulnerable network among seeds {a}..{b} ({outcome.instances} classified)", file=out)
    else:
        print(f"seed {outcome.hit_seed} is forall-strict vulnerable", file=out)
        out.write(dumps(certificate_json(outcome.hit_network, outcome.hit)))
    return EXIT_OK


def cmd_export_dot(args, out: TextIO) -> int:
    base = load_network(args.file)
    if not args.improvement:
        out.write(export_dot(base))
        return EXIT_OK
    if not args.from_:
        raise UsageError("--improvement needs --from")
    net, m = _modified(base, args)
    s = parse_profile(base, args.from_)
    starts = list(start_set(net, s, m)) if m else [s]
    out.write(export_dot(net, explore(net, starts, Mode(args.mode), args.cap)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="netparadox", description="Paradoxes in social network games with multiple products.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_file(name: str, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help)
        sp.add_argument("file", metavar="FILE", help="network document path or fixture name")
        sp.add_argument("--cap", type=int, default=DEFAULT_STATE_CAP, help="state-space cap")
        return sp

    def with_modification(sp: argparse.ArgumentParser) -> None:
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--expand", metavar="NODE:PRODUCT", help="add a product to a node first")
        g.add_argument("--contract", metavar="NODE:PRODUCT", help="remove a product from a node first")

    sp = with_file("validate", "check a network document")
    sp.set_defaults(func=cmd_validate)

    sp = with_file("equilibria", "list all Nash equilibria")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_equilibria)

    sp = with_file("payoffs", "payoffs and best responses at a profile")
    sp.add_argument("--profile", required=True, help="node=strategy pairs")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_payoffs)

    sp = with_file("path", "explore improvement paths from a profile")
    sp.add_argument("--from", dest="from_", required=True, help="node=strategy pairs")
    sp.add_argument("--mode", choices=[m.value for m in Mode], default="any")
    sp.add_argument("--json", action="store_true")
    with_modification(sp)
    sp.set_defaults(func=cmd_path)

    sp = with_file("classify", "decide one paradox notion")
    sp.add_argument("--notion", required=True, choices=[n.value for n in Notion])
    sp.add_argument("--quantifier", choices=[q.value for q in Quantifier], default="exists")
    sp.add_argument("--strength", choices=["weak", "strict"])
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_classify)

    sp = with_file("report", "decide all fourteen paradox notions")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--threads", type=int, default=1)
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("fixture", help="describe or emit a built-in network")
    sp.add_argument("name", choices=FIXTURE_NAMES)
    sp.add_argument("--emit", action="store_true", help="print the network document")
    sp.set_defaults(func=cmd_fixture)

    sp = sub.add_parser("generate", help="print a seeded random network document")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--nodes", type=int, required=True)
    sp.add_argument("--products", type=int, required=True)
    sp.add_argument("--density", default="1/2")
    sp.add_argument("--topology", choices=["random", "cycle"], default="random")
    sp.add_argument("--source-free", action="store_true")
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("search-forall-s", help="search random networks for forall-strict vulnerability")
    sp.add_argument("--seeds", required=True, metavar="A..B")
    sp.add_argument("--nodes", type=int, required=True)
    sp.add_argument("--products", type=int, default=3)
    sp.add_argument("--density", default="1/2")
    sp.add_argument("--cap", type=int, default=DEFAULT_STATE_CAP)
    sp.set_defaults(func=cmd_search)

    sp = with_file("export-dot", "Graphviz DOT for a network or its improvement graph")
    sp.add_argument("--improvement", action="store_true")
    sp.add_argument("--from", dest="from_", help="start profile for --improvement")
    sp.add_argument("--mode", choices=[m.value for m in Mode], default="any")
    with_modification(sp)
    sp.set_defaults(func=cmd_export_dot)
    return p


def run_cli(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_USAGE
    except (StateSpaceTooLarge, TooManyNodes) as exc:
        print(f"cap exceeded: {exc}", file=err)
        return EXIT_CAP
    except (
        ValidationError,
        InvalidProfile,
        IllegalModification,
        MissingNewThreshold,
        InvalidParams,
        NotReachable,
        UnknownFixture,
    ) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
