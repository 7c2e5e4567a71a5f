"""Catalog of the example networks (Figures 1 and 3-11) as network documents.

Free parameters (weights written as symbols in the figures, thresholds given
only by inequalities) are fixed to representative values that satisfy the
stated inequalities.  Each entry records the verdicts asserted for it in the
literature; verdicts not asserted there are left out of ``expected``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from ..errors import UnknownFixture
from ..model import SocialNetwork, validate_network
from .io import FORMAT


@dataclass(frozen=True)
class FixtureEntry:
    name: str
    figure: str
    document: Mapping[str, Any]
    expected: Mapping[str, bool] = field(default_factory=dict)
    notes: tuple[str, ...] = ()
    initial: Mapping[str, str] | None = None
    modification: tuple[str, str, str] | None = None

    @property
    def network(self) -> SocialNetwork:
        return validate_network(self.document)


def _document(
    name: str,
    products: list[str],
    nodes: list[tuple[str, list[str], str | dict[str, str]]],
    edges: list[tuple[str, str, str]],
    notes: str = "",
    expansion_threshold: str | None = None,
) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "format": FORMAT,
        "c0": "1",
        "products": products,
        "nodes": [
            {
                "id": v,
                "products": owned,
                "thresholds": th if isinstance(th, dict) else {t: th for t in owned},
            }
            for v, owned, th in nodes
        ],
        "edges": [{"from": a, "to": b, "weight": w} for a, b, w in edges],
        "metadata": {"name": name, "notes": notes},
    }
    if expansion_threshold is not None:
        doc["expansion_threshold"] = expansion_threshold
    return doc


T123 = ["t1", "t2", "t3"]


def _fig1() -> FixtureEntry:
    th = "0.3"
    doc = _document(
        "fig1",
        T123,
        [
            ("1", ["t1", "t2"], th),
            ("2", ["t1", "t3"], th),
            ("3", ["t2", "t3"], th),
            ("src_t2", ["t2"], th),
            ("src_t3", ["t3"], th),
        ],
        [("1", "2", "0.5"), ("2", "3", "0.5"), ("3", "1", "0.5"), ("src_t2", "3", "0.4"), ("src_t3", "2", "0.4")],
        notes="threshold 0.3 for all nodes",
    )
    return FixtureEntry(
        "fig1", "Fig. 1", doc,
        initial={"1": "t2", "2": "t3", "3": "t2", "src_t2": "t2", "src_t3": "t3"},
    )


def _fig3(weight_64: str, name: str) -> FixtureEntry:
    th = "0.05"
    doc = _document(
        name,
        T123,
        [
            ("1", ["t2"], th),
            ("2", ["t3"], th),
            ("3", ["t2", "t3"], th),
            ("4", ["t3"], th),
            ("5", ["t1", "t2"], th),
            ("6", ["t1"], th),
        ],
        [
            ("1", "3", "0.1"),
            ("2", "4", "0.1"),
            ("3", "4", "0.2"),
            ("4", "3", "0.2"),
            ("3", "5", "0.3"),
            ("5", "6", "0.2"),
            ("6", "5", "0.2"),
            ("6", "4", weight_64),
        ],
        notes=f"theta=0.05; w(6->4)={weight_64}",
    )
    initial = {"1": "t2", "2": "t3", "3": "t3", "4": "t3", "5": "t1", "6": "t1"}
    if name == "fig3":
        return FixtureEntry(
            name, "Fig. 3", doc,
            expected={"vulnerable/forall/weak": True, "vulnerable/exists/strict": False},
            notes=(
                "w(6->4) raised from the printed 0.3 to 0.35: with 0.3 the triggering "
                "deviation 4:t1 ties with t3 and is not profitable",
            ),
            initial=initial,
            modification=("expansion", "4", "t1"),
        )
    return FixtureEntry(
        name, "Fig. 3 (printed weights)", doc,
        notes=("printed weights: the expansion (4, +t1) leaves the initial profile an equilibrium",),
        initial=initial,
        modification=("expansion", "4", "t1"),
    )


def _fig4_nodes(th: str) -> list[tuple[str, list[str], str]]:
    return [
        ("1", ["t3"], th),
        ("2", ["t2", "t3"], th),
        ("3", ["t1", "t3"], th),
        ("4", ["t1"], th),
        ("5", ["t2", "t3"], th),
        ("6", ["t2"], th),
    ]


FIG4_EDGES = [
    ("1", "3", "0.1"),
    ("1", "2", "0.1"),
    ("2", "1", "0.1"),
    ("3", "5", "0.2"),
    ("3", "4", "0.2"),
    ("4", "3", "0.2"),
    ("4", "2", "0.2"),
    ("5", "6", "0.1"),
    ("6", "5", "0.1"),
    ("6", "4", "0.3"),
]


def _fig4() -> FixtureEntry:
    doc = _document("fig4", T123, _fig4_nodes("0.05"), FIG4_EDGES, notes="theta=0.05")
    return FixtureEntry(
        "fig4", "Fig. 4", doc,
        expected={
            "vulnerable/exists/strict": True,
            "vulnerable/forall/weak": False,
            "vulnerable/exists/weak": True,
        },
        initial={"1": "t3", "2": "t3", "3": "t1", "4": "t1", "5": "t2", "6": "t2"},
        modification=("expansion", "4", "t2"),
    )


def _fig4_source() -> FixtureEntry:
    nodes = _fig4_nodes("0.05") + [("7", ["t1"], "0.05")]
    doc = _document(
        "fig4-src", T123, nodes, FIG4_EDGES + [("7", "1", "0.1")],
        notes="Fig. 4 plus a t1 source node 7 feeding node 1 (weight 0.1)",
    )
    return FixtureEntry(
        "fig4-src", "Fig. 4 + source node", doc,
        expected={
            "vulnerable/exists/weak": True,
            "vulnerable/exists/strict": False,
            "vulnerable/forall/weak": False,
        },
        initial={"1": "t3", "2": "t3", "3": "t1", "4": "t1", "5": "t2", "6": "t2", "7": "t1"},
        modification=("expansion", "4", "t2"),
    )


# Triangle used by Figs. 5 and 6: theta < w1 < w2.
TRIANGLE_TH, W1, W2 = "0.1", "0.2", "0.3"


def _triangle_nodes(p1: list[str], src_t1: list[str]) -> list[tuple[str, list[str], str]]:
    th = TRIANGLE_TH
    return [
        ("1", p1, th),
        ("2", ["t1", "t3"], th),
        ("3", ["t2", "t3"], th),
        ("src_t1", src_t1, th),
    ]


TRIANGLE_EDGES = [("1", "2", W2), ("2", "3", W2), ("3", "1", W2), ("src_t1", "1", W1), ("src_t3", "2", W1)]


def _fig5(unsafe: bool = False) -> FixtureEntry:
    th = TRIANGLE_TH
    nodes = _triangle_nodes(["t1", "t2"] if unsafe else ["t1"], ["t1", "t2"] if unsafe else ["t1"])
    nodes += [("src_t2", ["t2"], th), ("src_t3", ["t3"], th)]
    edges = TRIANGLE_EDGES + [("src_t2", "3", W1)]
    if not unsafe:
        doc = _document("fig5", T123, nodes, edges, notes="theta=0.1, w1=0.2, w2=0.3")
        return FixtureEntry(
            "fig5", "Fig. 5", doc,
            expected={"fragile/total": True},
            initial={"1": "t1", "2": "t1", "3": "t2", "src_t1": "t1", "src_t2": "t2", "src_t3": "t3"},
            modification=("expansion", "1", "t2"),
        )
    doc = _document(
        "fig5u", T123, nodes, edges,
        notes="Fig. 5 with node 1 and the t1 source offering {t1,t2}",
    )
    return FixtureEntry(
        "fig5u", "Fig. 5 (unsafe variant)", doc,
        expected={"unsafe/total": True},
        initial={"1": "t2", "2": "t3", "3": "t3", "src_t1": "t2", "src_t2": "t2", "src_t3": "t3"},
        modification=("contraction", "src_t1", "t2"),
    )


def _fig6(unsafe: bool = False) -> FixtureEntry:
    th = TRIANGLE_TH
    nodes = _triangle_nodes(["t1", "t2"] if unsafe else ["t1"], ["t1", "t2"] if unsafe else ["t1"])
    nodes += [("t2a", ["t2"], th), ("t2b", ["t2"], th), ("src_t3", ["t3"], th)]
    edges = TRIANGLE_EDGES + [("t2a", "3", W1), ("t2a", "t2b", W1), ("t2b", "t2a", W1)]
    if not unsafe:
        doc = _document(
            "fig6", T123, nodes, edges,
            notes="theta=0.1, w1=0.2, w2=0.3; t2a/t2b are the two mutually linked t2 nodes",
        )
        return FixtureEntry(
            "fig6", "Fig. 6", doc,
            expected={"fragile/forall": True, "fragile/total": False},
            initial={"1": "t1", "2": "t1", "3": "t2", "src_t1": "t1", "t2a": "t2", "t2b": "t2", "src_t3": "t3"},
            modification=("expansion", "1", "t2"),
        )
    doc = _document(
        "fig6u", T123, nodes, edges,
        notes="Fig. 6 with node 1 and the t1 source offering {t1,t2}",
    )
    return FixtureEntry(
        "fig6u", "Fig. 6 (unsafe variant)", doc,
        expected={"unsafe/forall": True, "unsafe/total": False},
        initial={"1": "t2", "2": "t3", "3": "t3", "src_t1": "t2", "t2a": "t2", "t2b": "t2", "src_t3": "t3"},
        modification=("contraction", "src_t1", "t2"),
    )


def _fig7(unsafe: bool = False) -> FixtureEntry:
    # theta < w3 < w1 < w2
    th, w1, w2, w3 = "0.05", "0.2", "0.3", "0.1"
    products = ["t1", "t2", "t3", "t4"]
    nodes = [
        ("1", ["t1", "t2", "t4"], th),
        ("2", ["t1", "t3", "t4"] if unsafe else ["t3", "t4"], th),
        ("3", ["t2", "t3", "t4"], th),
        ("src_t1", ["t1"], th),
        ("src_t2", ["t2"], th),
        ("src_t3", ["t1", "t3"] if unsafe else ["t3"], th),
        ("src_t4", ["t4"], th),
    ]
    edges = [
        ("1", "2", w2), ("2", "3", w2), ("3", "1", w2),
        ("src_t1", "1", w1), ("src_t4", "1", w3), ("src_t2", "3", w1), ("src_t3", "2", w1),
    ]
    if not unsafe:
        doc = _document("fig7", products, nodes, edges, notes="theta=0.05, w3=0.1, w1=0.2, w2=0.3")
        return FixtureEntry(
            "fig7", "Fig. 7", doc,
            expected={"fragile/exists": True, "fragile/forall": False},
            notes=(
                "the printed finite path 2:t1, 3:t2, 1:t4, 2:t4, 3:t4 contains 1:t4, which is not "
                "profitable when w3 < w1; a different finite path to (t4,t4,t4) is used instead",
            ),
            initial={"1": "t1", "2": "t3", "3": "t3", "src_t1": "t1", "src_t2": "t2", "src_t3": "t3", "src_t4": "t4"},
            modification=("expansion", "2", "t1"),
        )
    doc = _document(
        "fig7u", products, nodes, edges,
        notes="Fig. 7 with node 2 offering {t1,t3,t4} and the t3 source offering {t1,t3}",
    )
    return FixtureEntry(
        "fig7u", "Fig. 7 (unsafe variant)", doc,
        expected={"unsafe/exists": True},
        notes=(
            "The drawn pair only yields some infinite path, but the all-t4 equilibrium with t4 "
            "removed from node 1 reaches 29 profiles and no equilibrium, so the network is "
            "also forall-unsafe.",
        ),
        initial={"1": "t2", "2": "t1", "3": "t2", "src_t1": "t1", "src_t2": "t2", "src_t3": "t1", "src_t4": "t4"},
        modification=("contraction", "src_t3", "t1"),
    )


FIG8_EDGES = [
    ("1", "2", "0.3"), ("2", "1", "0.3"), ("2", "3", "0.3"), ("2", "4", "0.3"),
    ("3", "1", "0.3"), ("3", "2", "0.3"), ("3", "4", "0.3"), ("4", "3", "0.3"),
]


def _fig8() -> FixtureEntry:
    th = "0.1"
    nodes = [("1", ["t2"], th), ("2", ["t2"], th), ("3", ["t1", "t2"], th), ("4", ["t1", "t2"], th)]
    doc = _document("fig8", ["t1", "t2"], nodes, FIG8_EDGES, notes="w=0.3, theta=0.1")
    return FixtureEntry(
        "fig8", "Fig. 8", doc,
        expected={"inefficient/forall/strict": True},
        initial={"1": "t2", "2": "t2", "3": "t1", "4": "t1"},
        modification=("contraction", "3", "t1"),
    )


def _fig8_source() -> FixtureEntry:
    th = "0.1"
    nodes = [("1", ["t2"], th), ("2", ["t2"], th), ("3", ["t1", "t2"], th), ("4", ["t1", "t2"], th), ("5", ["t1"], th)]
    doc = _document(
        "fig8-src", ["t1", "t2"], nodes, FIG8_EDGES + [("5", "1", "0.3")],
        notes="Fig. 8 plus a t1 source node 5 feeding node 1 (w=0.3, theta=0.1)",
    )
    return FixtureEntry(
        "fig8-src", "Fig. 8 + source node", doc,
        expected={"inefficient/forall/weak": True, "inefficient/exists/strict": False},
        initial={"1": "t2", "2": "t2", "3": "t1", "4": "t1", "5": "t1"},
        modification=("contraction", "3", "t1"),
    )


def _fig9(printed: bool = False) -> FixtureEntry:
    w = "0.4"
    th = "0.2"
    nodes = [
        ("1", ["t2"], {"t2": th}) if printed else ("1", ["t2", "t3"], {"t2": th, "t3": "0.1"}),
        ("2", ["t2", "t3"], th),
        ("3", T123, th),
        ("4", T123, th),
        ("5", T123, {"t1": th, "t2": "0.3", "t3": "0.3"}),
    ]
    edges = [
        ("1", "2", w), ("1", "3", w), ("1", "5", w), ("2", "1", w), ("2", "4", w),
        ("3", "1", w), ("3", "2", w), ("3", "4", w), ("4", "5", w), ("5", "3", w),
    ]
    name = "fig9-printed" if printed else "fig9"
    doc = _document(
        name, T123, nodes, edges,
        notes="w=0.4, theta=0.2, theta(1,t3)=0.1, theta(5,t2)=theta(5,t3)=0.3",
        expansion_threshold=th,
    )
    initial = {"1": "t2", "2": "t2", "3": "t1", "4": "t1", "5": "t1"}
    if printed:
        return FixtureEntry(
            name, "Fig. 9 (printed product sets)", doc,
            notes=("P(1)={t2} as drawn; the text's step 1:t3 is then unavailable",),
            initial=initial,
            modification=("contraction", "3", "t1"),
        )
    return FixtureEntry(
        name, "Fig. 9", doc,
        expected={"inefficient/exists/strict": True},
        notes=(
            "P(1) widened to {t2,t3} so the threshold theta(1,t3) and the step 1:t3 used in "
            "the text exist; the not-forall-weak claim is re-derived by exhaustive search",
        ),
        initial=initial,
        modification=("contraction", "3", "t1"),
    )


CYCLE3 = [("1", "2", "0.5"), ("2", "3", "0.5"), ("3", "1", "0.5")]


def _fig10() -> FixtureEntry:
    th = {"t1": "0.3", "t2": "0.2"}
    nodes = [(v, ["t1", "t2"], th) for v in ("1", "2", "3")]
    doc = _document("fig10", ["t1", "t2"], nodes, CYCLE3, notes="w=0.5, theta(i,t1)=0.3, theta(i,t2)=0.2")
    return FixtureEntry(
        "fig10", "Fig. 10", doc,
        expected={"inefficient/exists/strict": True, "inefficient/forall/weak": False},
        initial={"1": "t1", "2": "t1", "3": "t1"},
        modification=("contraction", "1", "t1"),
    )


def _fig11(printed: bool = False) -> FixtureEntry:
    th = "0.3"
    if printed:
        nodes = [("1", ["t"], th), ("2", ["t"], th), ("3", ["t", "t1"], th)]
        doc = _document("fig11-printed", ["t", "t1"], nodes, CYCLE3, notes="w=0.5, theta=0.3; product sets as drawn")
        return FixtureEntry(
            "fig11-printed", "Fig. 11 (printed product sets)", doc,
            notes=(
                "removing t from node 3 as drawn leaves node 3 unable to play t, yet every "
                "state of the drawn cycle has node 3 playing t at some point",
            ),
            initial={"1": "t", "2": "t", "3": "t"},
            modification=("contraction", "3", "t"),
        )
    nodes = [(v, ["t", "t1"], th) for v in ("1", "2", "3")]
    doc = _document("fig11", ["t", "t1"], nodes, CYCLE3, notes="w=0.5, theta=0.3; every node offers {t,t1}")
    return FixtureEntry(
        "fig11", "Fig. 11", doc,
        expected={"unsafe/exists": True, "unsafe/forall": False},
        notes=(
            "product sets widened to {t,t1} everywhere and the contraction removes t1 from node 3 "
            "while all nodes play t1; only then is the drawn six-state cycle over t/t0 reachable",
        ),
        initial={"1": "t1", "2": "t1", "3": "t1"},
        modification=("contraction", "3", "t1"),
    )


_BUILDERS: dict[str, Callable[[], FixtureEntry]] = {
    "fig1": _fig1,
    "fig3": lambda: _fig3("0.35", "fig3"),
    "fig3-printed": lambda: _fig3("0.3", "fig3-printed"),
    "fig4": _fig4,
    "fig4-src": _fig4_source,
    "fig5": _fig5,
    "fig6": _fig6,
    "fig7": _fig7,
    "fig8": _fig8,
    "fig8-src": _fig8_source,
    "fig9": _fig9,
    "fig9-printed": lambda: _fig9(printed=True),
    "fig10": _fig10,
    "fig11": _fig11,
    "fig11-printed": lambda: _fig11(printed=True),
    "fig5u": lambda: _fig5(unsafe=True),
    "fig6u": lambda: _fig6(unsafe=True),
    "fig7u": lambda: _fig7(unsafe=True),
}

FIXTURE_NAMES: tuple[str, ...] = tuple(_BUILDERS)


def load_fixture(name: str) -> FixtureEntry:
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise UnknownFixture(f"unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}") from None
    return builder()
