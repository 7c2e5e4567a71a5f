"""JSON shapes for profiles, paths, certificates and full reports."""

from __future__ import annotations

import json
from typing import Any, Sequence

from ..dynamics import DeviationPath
from ..model import SocialNetwork
from ..paradox import (
    CycleEvidence,
    DigestEvidence,
    ExhaustionEvidence,
    FullReport,
    ParadoxCertificate,
    PathEvidence,
)
from .io import format_rational

REPORT_FORMAT = "sng-report/1"


def profile_json(net: SocialNetwork, s: Sequence[str]) -> dict[str, str]:
    return net.as_dict(s)


def path_json(net: SocialNetwork, path: DeviationPath) -> dict[str, Any]:
    return {
        "start": profile_json(net, path.start),
        "steps": [
            {
                "node": d.node,
                "from": d.from_,
                "to": d.to,
                "gain": format_rational(d.gain),
                "best_response": d.is_best_response,
            }
            for d in path.steps
        ],
        "end": profile_json(net, path.end),
    }


def _evidence_json(net: SocialNetwork, ev: Any) -> dict[str, Any]:
    def forced(f):
        return None if f is None else {"node": f.node, "removed": f.removed, "chosen": f.chosen}

    if isinstance(ev, PathEvidence):
        return {
            "kind": "path",
            "forced_move": forced(ev.forced_move),
            "path": path_json(net, ev.path),
            "relation": ev.relation.value,
        }
    if isinstance(ev, DigestEvidence):
        return {
            "kind": "digest",
            "acyclic": True,
            "reached": ev.reached,
            "terminals": [{"profile": profile_json(net, t), "relation": r.value} for t, r in ev.terminals],
        }
    if isinstance(ev, CycleEvidence):
        out = {
            "kind": "cycle",
            "forced_move": forced(ev.forced_move),
            "lead_in": path_json(net, ev.lead_in),
            "cycle": path_json(net, ev.cycle),
        }
        if ev.reached is not None:
            out["reached"] = ev.reached
            out["terminals"] = 0
        return out
    if isinstance(ev, ExhaustionEvidence):
        return {"kind": "no_equilibrium", "profiles_scanned": ev.profiles_scanned}
    raise TypeError(f"unknown evidence {type(ev).__name__}")


def certificate_json(net: SocialNetwork, cert: ParadoxCertificate) -> dict[str, Any]:
    witness = None
    if cert.verdict:
        m = cert.modification
        assert m is not None and cert.initial_ne is not None
        witness = {
            "initial_ne": profile_json(net, cert.initial_ne),
            "modification": {
                "kind": m.kind.value,
                "node": m.node,
                "product": m.product,
                "threshold": None if m.threshold is None else format_rational(m.threshold),
            },
            "evidence": _evidence_json(net, cert.evidence),
        }
    return {
        "query": cert.query.key,
        "verdict": cert.verdict,
        "witness": witness,
        "searched": {
            "equilibria": cert.equilibria_examined,
            "modifications": cert.modifications_examined,
            "pairs": cert.pairs_examined,
        },
    }


def report_json(report: FullReport) -> dict[str, Any]:
    net = report.network
    return {
        "format": REPORT_FORMAT,
        "network": net.name,
        "nodes": list(net.nodes),
        "equilibria": [profile_json(net, s) for s in report.equilibria],
        "verdicts": report.verdicts,
        "certificates": {k: certificate_json(net, c) for k, c in report.certificates.items()},
    }


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
