"""FastAPI service wrapping the cut toolkit.

Requests carry the graph as edge-list text plus algorithm parameters;
responses carry the canonical report object. Everything is deterministic,
so identical requests produce identical response bodies.
"""
from __future__ import annotations

import math
import time

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .cutmatching import ExpansionCertificate, approx_vertex_expansion
from .expanders import KappaApproxReport, recursive_sparsify, sparsifier_edge_budget
from .generators import FAMILIES, make_instance
from .graph import (
    DetcutError,
    DomainError,
    Graph,
    WeightedGraph,
    as_weighted,
    dump_graph,
    parse_graph,
)
from .jtree import pipeline_cut
from .oracle import (
    brute_conductance,
    brute_kappa,
    brute_most_balanced,
    brute_sparsity,
    brute_vertex_expansion,
)
from .pagerank import most_balanced_edge_cut
from .reports import cut_report, graph_fingerprint
from .vconn import main_vc

app = FastAPI(title="detcut", version=__version__)


class CutRequest(BaseModel):
    graph: str
    algo: str = "pagerank"  # pagerank | jtree | recursive
    phi: float
    k: int | None = None
    allow_loops: bool = False
    timings: bool = False


class VexpRequest(BaseModel):
    graph: str
    eta: float
    allow_loops: bool = False
    timings: bool = False


class VCRequest(BaseModel):
    graph: str
    k: int
    a: float = 0.25
    allow_loops: bool = False
    timings: bool = False


class SparsifyRequest(BaseModel):
    graph: str
    weighted: bool = False
    b: int | None = None
    timings: bool = False


class OracleRequest(BaseModel):
    graph: str
    metric: str  # conductance | sparsity | vexp | kappa | most-balanced
    phi: float | None = None
    allow_loops: bool = False


class BenchRequest(BaseModel):
    family: str
    sizes: list[int]
    algos: list[str] = Field(default_factory=lambda: ["pagerank"])
    phi: float = 0.2


class ReportResponse(BaseModel):
    report: dict


class SparsifyResponse(BaseModel):
    report: dict
    weighted_graph: str


class BenchResponse(BaseModel):
    csv: str
    rows: int


@app.exception_handler(DetcutError)
async def detcut_error_handler(_, exc: DetcutError):
    kind = {2: "domain", 3: "budget"}.get(getattr(exc, "exit_code", 1), "internal")
    return JSONResponse(
        status_code=400, content={"error": str(exc), "kind": kind}
    )


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, float):
        return float(value) if math.isfinite(value) else repr(value)
    if hasattr(value, "item"):
        return _jsonable(value.item())
    return value


def _validate_phi(phi: float) -> None:
    if not (0.0 < phi <= 1.0):
        raise DomainError(f"phi must lie in (0, 1], got {phi}")


@app.post("/cut", response_model=ReportResponse)
def cut_endpoint(req: CutRequest) -> ReportResponse:
    _validate_phi(req.phi)
    g = parse_graph(req.graph, allow_loops=req.allow_loops)
    started = time.perf_counter()
    if req.algo == "pagerank":
        result = most_balanced_edge_cut(g, req.phi)
        params = {"phi": req.phi}
    elif req.algo == "jtree":
        result = pipeline_cut(g, req.phi, "one-shot")
        params = {"phi": req.phi, "profile": "one-shot"}
    elif req.algo == "recursive":
        result = pipeline_cut(g, req.phi, "recursive")
        params = {"phi": req.phi, "profile": "recursive"}
    else:
        raise DomainError(f"unknown algorithm {req.algo!r}")
    if req.k is not None:
        params["k"] = req.k
    elapsed = time.perf_counter() - started
    report = cut_report(
        g,
        f"cut/{req.algo}",
        params,
        result.outcome,
        members=None if result.cut is None else result.cut.members,
        extra=_jsonable(result.detail),
        wall_clock=elapsed if req.timings else None,
    )
    return ReportResponse(report=report)


@app.post("/vexp", response_model=ReportResponse)
def vexp_endpoint(req: VexpRequest) -> ReportResponse:
    g = parse_graph(req.graph, allow_loops=req.allow_loops)
    started = time.perf_counter()
    outcome = approx_vertex_expansion(g, req.eta)
    elapsed = time.perf_counter() - started
    if isinstance(outcome, ExpansionCertificate):
        report = cut_report(
            g,
            "vexp",
            {"eta": req.eta},
            "certificate",
            extra=_jsonable(
                {
                    "certified": True,
                    "eta_cert": outcome.eta_cert,
                    "rounds": outcome.rounds,
                    "congestion": outcome.congestion,
                }
            ),
            wall_clock=elapsed if req.timings else None,
        )
    else:
        report = cut_report(
            g,
            "vexp",
            {"eta": req.eta},
            "triple",
            triple=outcome,
            wall_clock=elapsed if req.timings else None,
        )
    return ReportResponse(report=report)


@app.post("/vc", response_model=ReportResponse)
def vc_endpoint(req: VCRequest) -> ReportResponse:
    g = parse_graph(req.graph, allow_loops=req.allow_loops)
    started = time.perf_counter()
    cut = main_vc(g, req.k, req.a)
    elapsed = time.perf_counter() - started
    body = {"k_connected": cut is None}
    if cut is not None:
        body["cut"] = sorted(cut)
    report = cut_report(
        g,
        "vc",
        {"k": req.k, "a": req.a},
        "certificate" if cut is None else "cut",
        members=cut,
        extra=body,
        wall_clock=elapsed if req.timings else None,
    )
    return ReportResponse(report=report)


def _measure_kappa(g: WeightedGraph, h: WeightedGraph) -> dict:
    rep = KappaApproxReport.measure(g, h)
    return {
        "mode": rep.mode,
        "max_ratio": rep.max_ratio,
        "min_ratio": rep.min_ratio,
        "kappa": rep.kappa_measured,
    }


@app.post("/sparsify", response_model=SparsifyResponse)
def sparsify_endpoint(req: SparsifyRequest) -> SparsifyResponse:
    parsed = parse_graph(req.graph, weighted=req.weighted)
    wg = parsed if isinstance(parsed, WeightedGraph) else as_weighted(parsed)
    started = time.perf_counter()

    def balcut(graph: Graph, p: float):
        res = most_balanced_edge_cut(graph, min(1.0, max(p, 1e-9)))
        if res.is_certificate:
            return ("certificate", res.phi)
        return ("cut", res.cut.members)

    sparse = recursive_sparsify(wg, balcut, b=req.b)
    elapsed = time.perf_counter() - started
    report = {
        "algorithm": "sparsify",
        "parameters": {"b": req.b},
        "input": {"n": wg.n, "m": wg.m},
        "output": {"n": sparse.n, "m": sparse.m},
        "edge_budget": sparsifier_edge_budget(wg.n),
        "kappa": _jsonable(_measure_kappa(wg, sparse)),
    }
    if req.timings:
        report["wall_clock_s"] = elapsed
    return SparsifyResponse(report=report, weighted_graph=dump_graph(sparse))


@app.post("/oracle", response_model=ReportResponse)
def oracle_endpoint(req: OracleRequest) -> ReportResponse:
    g = parse_graph(req.graph, allow_loops=req.allow_loops)
    metric = req.metric
    if metric == "conductance":
        value, side = brute_conductance(g)
        body = {"value": value, "argmin": sorted(side)}
    elif metric == "sparsity":
        value, side = brute_sparsity(g)
        body = {"value": value, "argmin": sorted(side)}
    elif metric == "vexp":
        value, triple = brute_vertex_expansion(g)
        body = {"value": _jsonable(value)}
        if triple is not None:
            left, sep, right = triple
            body["argmin"] = {
                "left": sorted(left),
                "separator": sorted(sep),
                "right": sorted(right),
            }
    elif metric == "kappa":
        body = {"value": brute_kappa(g)}
    elif metric == "most-balanced":
        if req.phi is None:
            raise DomainError("most-balanced oracle needs phi")
        vol, side = brute_most_balanced(g, req.phi)
        body = {"volume": vol, "argmax": sorted(side)}
    else:
        raise DomainError(f"unknown oracle metric {req.metric!r}")
    report = {
        "algorithm": f"oracle/{metric}",
        "graph": graph_fingerprint(g),
        "result": body,
    }
    return ReportResponse(report=report)


BENCH_ALGOS = ("pagerank", "jtree", "recursive")


def run_bench_cell(family: str, n: int, algo: str, phi: float) -> dict:
    g, seed = make_instance(family, n)
    started = time.perf_counter()
    if algo == "pagerank":
        result = most_balanced_edge_cut(g, phi)
    elif algo == "jtree":
        result = pipeline_cut(g, phi, "one-shot")
    elif algo == "recursive":
        result = pipeline_cut(g, phi, "recursive")
    else:
        raise DomainError(f"unknown bench algorithm {algo!r}")
    elapsed = time.perf_counter() - started
    row = {
        "family": family,
        "n": g.n,
        "m": g.m,
        "seed": seed,
        "algo": algo,
        "phi": phi,
        "outcome": result.outcome,
        "achieved_phi": "" if result.cut is None else result.cut.conductance,
        "balance": ""
        if result.cut is None
        else min(result.cut.volume_in, result.cut.volume_out) / g.m,
        "seconds": elapsed,
    }
    return row


@app.post("/bench", response_model=BenchResponse)
def bench_endpoint(req: BenchRequest) -> BenchResponse:
    if req.family not in FAMILIES:
        raise DomainError(
            f"unknown family {req.family!r}; known: {', '.join(FAMILIES)}"
        )
    for algo in req.algos:
        if algo not in BENCH_ALGOS:
            raise DomainError(f"unknown bench algorithm {algo!r}")
    header = "family,n,m,seed,algo,phi,outcome,achieved_phi,balance,seconds"
    lines = [header]
    for n in req.sizes:
        for algo in req.algos:
            row = run_bench_cell(req.family, n, algo, req.phi)
            lines.append(
                ",".join(str(row[c]) for c in header.split(","))
            )
    return BenchResponse(csv="\n".join(lines) + "\n", rows=len(lines) - 1)
