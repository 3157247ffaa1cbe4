"""detcut command line: a thin client of the service.

Subcommands map one-to-one onto service endpoints. By default the request
is served in-process (no socket); --server points the same client at a
running instance. Reports are printed as canonical JSON on stdout; exit
codes: 0 definitive answer, 2 domain error, 3 budget error, 64 usage.
"""
from __future__ import annotations

import argparse
import json
import sys

import httpx

USAGE_EXIT = 64
ERROR_EXITS = {"domain": 2, "budget": 3}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="detcut",
        description="Deterministic graph cuts, vertex expansion, and k-vertex-connectivity.",
    )
    parser.add_argument("--server", help="URL of a running detcut service", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    cut = sub.add_parser("cut", help="balanced low-conductance cut or certificate")
    cut.add_argument("graph", help="edge-list file")
    cut.add_argument("--algo", choices=["pagerank", "jtree", "recursive"], default="pagerank")
    cut.add_argument("--phi", type=float, required=True)
    cut.add_argument("--k", type=int, default=None)
    cut.add_argument("--allow-loops", action="store_true")
    cut.add_argument("--timings", action="store_true")

    vexp = sub.add_parser("vexp", help="vertex-expansion certificate or separation triple")
    vexp.add_argument("graph")
    vexp.add_argument("--eta", type=float, required=True)
    vexp.add_argument("--allow-loops", action="store_true")
    vexp.add_argument("--timings", action="store_true")

    vc = sub.add_parser("vc", help="k-vertex-connectivity decision")
    vc.add_argument("graph")
    vc.add_argument("--k", type=int, required=True)
    vc.add_argument("--a", type=float, default=0.25)
    vc.add_argument("--allow-loops", action="store_true")
    vc.add_argument("--timings", action="store_true")

    sp = sub.add_parser("sparsify", help="cut-approximating sparsifier")
    sp.add_argument("graph")
    sp.add_argument("--b", type=int, default=None)
    sp.add_argument("--weighted", action="store_true")
    sp.add_argument("--out", required=True, help="path for the weighted edge list")
    sp.add_argument("--timings", action="store_true")

    orc = sub.add_parser("oracle", help="brute-force reference metrics")
    orc.add_argument(
        "metric",
        choices=["conductance", "sparsity", "vexp", "kappa", "most-balanced"],
    )
    orc.add_argument("graph")
    orc.add_argument("--phi", type=float, default=None)
    orc.add_argument("--allow-loops", action="store_true")

    bench = sub.add_parser("bench", help="benchmark harness (CSV)")
    bench.add_argument("--family", required=True)
    bench.add_argument("--sizes", required=True, help="comma-separated vertex counts")
    bench.add_argument("--algos", default="pagerank", help="comma-separated algorithms")
    bench.add_argument("--phi", type=float, default=0.2)
    bench.add_argument("--out", required=True, help="path for the CSV")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def make_client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=None)
    # in-process ASGI transport: same handlers, no socket
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DeprecationWarning)
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app, raise_server_exceptions=False)


def canonical(report: dict) -> str:
    return json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"


def read_graph_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise SystemExit(f"detcut: cannot read {path}: {exc.strerror}") from exc


def handle_response(response: httpx.Response) -> dict:
    if response.status_code == 400:
        payload = response.json()
        sys.stderr.write(f"detcut: {payload.get('error', 'request failed')}\n")
        raise SystemExit(ERROR_EXITS.get(payload.get("kind"), 1))
    response.raise_for_status()
    return response.json()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage problems; the contract says 64
        if exc.code not in (0, None):
            raise SystemExit(USAGE_EXIT) from exc
        raise
    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    with make_client(args.server) as client:
        if args.command == "cut":
            payload = {
                "graph": read_graph_file(args.graph),
                "algo": args.algo,
                "phi": args.phi,
                "k": args.k,
                "allow_loops": args.allow_loops,
                "timings": args.timings,
            }
            body = handle_response(client.post("/cut", json=payload))
            sys.stdout.write(canonical(body["report"]))
        elif args.command == "vexp":
            payload = {
                "graph": read_graph_file(args.graph),
                "eta": args.eta,
                "allow_loops": args.allow_loops,
                "timings": args.timings,
            }
            body = handle_response(client.post("/vexp", json=payload))
            sys.stdout.write(canonical(body["report"]))
        elif args.command == "vc":
            payload = {
                "graph": read_graph_file(args.graph),
                "k": args.k,
                "a": args.a,
                "allow_loops": args.allow_loops,
                "timings": args.timings,
            }
            body = handle_response(client.post("/vc", json=payload))
            sys.stdout.write(canonical(body["report"]))
        elif args.command == "sparsify":
            payload = {
                "graph": read_graph_file(args.graph),
                "weighted": args.weighted,
                "b": args.b,
                "timings": args.timings,
            }
            body = handle_response(client.post("/sparsify", json=payload))
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(body["weighted_graph"])
            sys.stdout.write(canonical(body["report"]))
        elif args.command == "oracle":
            payload = {
                "graph": read_graph_file(args.graph),
                "metric": args.metric,
                "phi": args.phi,
                "allow_loops": args.allow_loops,
            }
            body = handle_response(client.post("/oracle", json=payload))
            sys.stdout.write(canonical(body["report"]))
        elif args.command == "bench":
            payload = {
                "family": args.family,
                "sizes": [int(s) for s in args.sizes.split(",") if s],
                "algos": [a for a in args.algos.split(",") if a],
                "phi": args.phi,
            }
            body = handle_response(client.post("/bench", json=payload))
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(body["csv"])
            sys.stdout.write(
                canonical({"rows": body["rows"], "out": args.out, "family": args.family})
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
