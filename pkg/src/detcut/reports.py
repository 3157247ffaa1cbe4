"""Report assembly: every metric is recomputed from the graph, never
copied out of algorithm internals."""
from __future__ import annotations

import json
from typing import Iterable

from .graph import Cut, Graph, SeparationTriple


def graph_fingerprint(g: Graph) -> dict:
    return {"n": g.n, "m": g.m, "hash": g.fingerprint()}


def cut_metrics(g: Graph, members: Iterable[int]) -> dict:
    cut = Cut.from_members(g, members)
    return {
        "boundary": cut.boundary,
        "volume": cut.volume_in,
        "conductance": cut.conductance,
        "sparsity": cut.sparsity(g.n),
        "size": len(cut.members),
    }


def triple_metrics(g: Graph, triple: SeparationTriple) -> dict:
    return {
        "left_size": len(triple.left),
        "separator_size": len(triple.separator),
        "right_size": len(triple.right),
        "expansion": triple.expansion,
    }


def cut_report(
    g: Graph,
    algorithm: str,
    parameters: dict,
    outcome: str,
    members: Iterable[int] | None = None,
    triple: SeparationTriple | None = None,
    extra: dict | None = None,
    wall_clock: float | None = None,
) -> dict:
    report: dict = {
        "algorithm": algorithm,
        "parameters": parameters,
        "outcome": outcome,
        "graph": graph_fingerprint(g),
    }
    if members is not None:
        report["cut"] = sorted(int(v) for v in members)
        report["metrics"] = cut_metrics(g, members)
    if triple is not None:
        report["triple"] = {
            "left": sorted(triple.left),
            "separator": sorted(triple.separator),
            "right": sorted(triple.right),
        }
        report["metrics"] = triple_metrics(g, triple)
    if extra:
        report["detail"] = extra
    if wall_clock is not None:
        report["wall_clock_s"] = wall_clock
    return report


def render_json(report: dict) -> str:
    """Canonical serialization: sorted keys, fixed separators, newline."""
    return json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"
