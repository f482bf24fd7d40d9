"""Subsystem recovery by hierarchical clustering of software facts."""

from ._core import (
    DegenerateInput,
    FactsDocument,
    InputError,
    NetworkError,
    agreement,
    classify_maintenance,
    cluster,
    cut,
    euclidean_distance,
    load_facts,
    parse_facts,
    plan_tasks,
    run_pipeline,
    serve_worker,
    similarity,
    similarity_matrix,
    to_newick,
    update_similarity,
)

__all__ = [
    "DegenerateInput",
    "FactsDocument",
    "InputError",
    "NetworkError",
    "agreement",
    "classify_maintenance",
    "cluster",
    "cut",
    "euclidean_distance",
    "load_facts",
    "parse_facts",
    "plan_tasks",
    "run_pipeline",
    "serve_worker",
    "similarity",
    "similarity_matrix",
    "to_newick",
    "update_similarity",
]
