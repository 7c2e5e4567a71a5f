"""Graphviz DOT text for networks and improvement graphs."""

from __future__ import annotations

from ..dynamics import ImprovementGraphView, _step
from ..graphs import strongly_connected_components
from ..model import SocialNetwork
from .io import format_rational


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def network_dot(net: SocialNetwork) -> str:
    lines = [f"digraph {_quote(net.name or 'network')} {{", "  node [shape=circle];"]
    for v in net.nodes:
        label = f"{v}\\n{{{','.join(net.product_sets[v])}}}"
        shape = ' shape=box' if net.is_source(v) else ""
        lines.append(f'  {_quote(v)} [label="{label}"{shape}];')
    index = {v: k for k, v in enumerate(net.nodes)}
    for e in sorted(net.edges, key=lambda e: (index[e.source], index[e.target])):
        lines.append(f"  {_quote(e.source)} -> {_quote(e.target)} [label={_quote(format_rational(e.weight))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def improvement_dot(net: SocialNetwork, view: ImprovementGraphView) -> str:
    """Reachable profiles as nodes, deviations as ``node:strategy`` edges.

    Equilibria are double circles, start profiles are bold, and edges inside
    a cycle are drawn red.
    """
    ids = {s: f"s{k}" for k, s in enumerate(view.order)}
    components = strongly_connected_components(view.order, view.targets)
    comp_of = {s: n for n, c in enumerate(components) for s in c}
    cyclic = {n for n, c in enumerate(components) if len(c) > 1}
    terminals = set(view.terminals)
    starts = set(view.start_profiles)

    lines = ["digraph improvement {", "  node [shape=ellipse];"]
    for s in view.order:
        attrs = [f"label={_quote(','.join(s))}"]
        if s in terminals:
            attrs.append("shape=doublecircle")
        if s in starts:
            attrs.append("style=bold")
        lines.append(f"  {ids[s]} [{' '.join(attrs)}];")
    for s in view.order:
        for i, x, _, _ in view.successors[s]:
            t = _step(s, i, x)
            attrs = [f"label={_quote(f'{net.nodes[i]}:{x}')}"]
            if comp_of[s] == comp_of[t] and comp_of[s] in cyclic:
                attrs.append("color=red penwidth=2")
            lines.append(f"  {ids[s]} -> {ids[t]} [{' '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(net: SocialNetwork, view: ImprovementGraphView | None = None) -> str:
    """DOT for ``net`` or, when ``view`` is given, for its improvement graph."""
    return network_dot(net) if view is None else improvement_dot(net, view)
