"""detcut: deterministic graph cuts, vertex expansion, and k-vertex-connectivity."""

from .graph import (
    BudgetError,
    Cut,
    DetcutError,
    DomainError,
    Graph,
    ParseError,
    SeparationTriple,
    WeightedGraph,
    as_weighted,
    conductance,
    dump_graph,
    load_graph,
    parse_graph,
    sparsity,
    triple_expansion,
    validate_triple,
)

__all__ = [
    "BudgetError",
    "Cut",
    "DetcutError",
    "DomainError",
    "Graph",
    "ParseError",
    "SeparationTriple",
    "WeightedGraph",
    "as_weighted",
    "conductance",
    "dump_graph",
    "load_graph",
    "parse_graph",
    "sparsity",
    "triple_expansion",
    "validate_triple",
    "approx_vertex_expansion",
    "most_balanced_edge_cut",
    "pipeline_cut",
    "main_vc",
]

__version__ = "0.1.0"


def __getattr__(name):
    # heavier submodules load lazily so `import detcut` stays light
    if name == "most_balanced_edge_cut":
        from .pagerank import most_balanced_edge_cut

        return most_balanced_edge_cut
    if name == "pipeline_cut":
        from .jtree import pipeline_cut

        return pipeline_cut
    if name == "approx_vertex_expansion":
        from .cutmatching import approx_vertex_expansion

        return approx_vertex_expansion
    if name == "main_vc":
        from .vconn import main_vc

        return main_vc
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
