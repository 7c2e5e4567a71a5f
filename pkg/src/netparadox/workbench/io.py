"""Reading and writing network documents (JSON, format ``sng/1``).

Numbers travel as decimal strings (``"0.35"``) or exact fractions (``"3/11"``),
never as binary floats.  Bare JSON numbers are accepted on input and parsed
from their literal text, so ``0.3`` still becomes exactly 3/10.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from ..errors import DocumentSyntaxError, MalformedNetwork
from ..model import SocialNetwork, validate_network

FORMAT = "sng/1"


def format_rational(q: Fraction) -> str:
    """Shortest exact text for ``q``: a decimal when one exists, else ``p/q``."""
    q = Fraction(q)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{q.numerator}/{q.denominator}"
    digits = max(twos, fives)
    scaled = abs(q.numerator) * 10**digits // q.denominator
    sign = "-" if q < 0 else ""
    if digits == 0:
        return f"{sign}{scaled}"
    text = str(scaled).rjust(digits + 1, "0")
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


def load_document(text: str) -> dict[str, Any]:
    try:
        doc = json.loads(text, parse_float=str)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise MalformedNetwork("top-level JSON value must be an object")
    fmt = doc.get("format", FORMAT)
    if fmt != FORMAT:
        raise MalformedNetwork(f"unsupported document format {fmt!r}, expected {FORMAT!r}")
    return doc


def parse_network(text: str) -> SocialNetwork:
    return validate_network(load_document(text))


def read_network(path: str | Path) -> SocialNetwork:
    return parse_network(Path(path).read_text(encoding="utf-8"))


def network_document(net: SocialNetwork) -> dict[str, Any]:
    """Canonical document: node order kept, edges sorted by endpoint order."""
    index = {v: k for k, v in enumerate(net.nodes)}
    doc: dict[str, Any] = {
        "format": FORMAT,
        "c0": format_rational(net.c0),
        "products": list(net.products),
        "nodes": [
            {
                "id": v,
                "products": list(net.product_sets[v]),
                "thresholds": {t: format_rational(net.thresholds[(v, t)]) for t in net.product_sets[v]},
            }
            for v in net.nodes
        ],
        "edges": [
            {"from": e.source, "to": e.target, "weight": format_rational(e.weight)}
            for e in sorted(net.edges, key=lambda e: (index[e.source], index[e.target]))
        ],
    }
    if net.expansion_threshold is not None:
        doc["expansion_threshold"] = format_rational(net.expansion_threshold)
    if net.name or net.notes:
        doc["metadata"] = {"name": net.name, "notes": net.notes}
    return doc


def serialize_network(net: SocialNetwork) -> str:
    return json.dumps(network_document(net), sort_keys=True, indent=2) + "\n"
