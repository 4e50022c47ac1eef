"""JSON graph documents: a dependency-light, bit-exact on-disk format.

A document is ``{"directed": bool, "nodes": [...], "edges": [...]}`` where
nodes are ``{"id": int, "attr": [...], "null": true}`` (attr and null
optional) and edges are ``{"i": int, "j": int, "w": float}``.  Node ids
must be 0..n-1 in ascending order, undirected documents list each edge
once with i < j, weights are finite and nonzero, and duplicate edges are
rejected.  The writer is canonical (sorted edges, fixed key order, indent
2), so save-then-load-then-save reproduces files byte for byte.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .graphs import Graph

__all__ = [
    "ValidationError",
    "document_to_graph",
    "graph_to_document",
    "load_graph",
    "save_graph",
    "dumps_graph",
    "pca_model_document",
    "pca_model_from_document",
]


class ValidationError(ValueError):
    """A document violates the graph-document schema."""


_DOC_KEYS = {"directed", "nodes", "edges"}
_NODE_KEYS = {"id", "attr", "null"}
_EDGE_KEYS = {"i", "j", "w"}


def _fail(msg: str):
    raise ValidationError(msg)


def _check_number(x, what: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        _fail(f"{what}: expected a number, got {type(x).__name__}")
    x = float(x)
    if not np.isfinite(x):
        _fail(f"{what}: value must be finite, got {x}")
    return x


def document_to_graph(doc) -> Graph:
    """Validate a parsed JSON document and build the Graph it describes."""
    if not isinstance(doc, dict):
        _fail(f"document must be a JSON object, got {type(doc).__name__}")
    unknown = set(doc) - _DOC_KEYS
    if unknown:
        _fail(f"unknown document keys: {sorted(unknown)}")
    missing = _DOC_KEYS - set(doc)
    if missing:
        _fail(f"missing document keys: {sorted(missing)}")
    directed = doc["directed"]
    if not isinstance(directed, bool):
        _fail("'directed' must be a boolean")

    nodes = doc["nodes"]
    if not isinstance(nodes, list) or not nodes:
        _fail("'nodes' must be a non-empty list")
    n = len(nodes)
    attr_dim = None
    attrs = []
    null_mask = np.zeros(n, dtype=bool)
    for pos, node in enumerate(nodes):
        if not isinstance(node, dict):
            _fail(f"node at position {pos}: expected an object")
        unknown = set(node) - _NODE_KEYS
        if unknown:
            _fail(f"node at position {pos}: unknown keys {sorted(unknown)}")
        if node.get("id") != pos:
            _fail(
                f"node at position {pos}: ids must be 0..n-1 in ascending order, "
                f"got {node.get('id')!r}"
            )
        has_attr = "attr" in node
        if has_attr and (not isinstance(node["attr"], list) or not node["attr"]):
            _fail(f"node {pos}: attr must be a non-empty list of numbers")
        if attr_dim is None:
            attr_dim = len(node["attr"]) if has_attr else 0
        if has_attr != (attr_dim > 0):
            _fail(f"node {pos}: all nodes must carry attributes, or none")
        if has_attr:
            vec = node["attr"]
            if len(vec) != attr_dim:
                _fail(f"node {pos}: attr must have {attr_dim} entries, got {len(vec)}")
            attrs.append([_check_number(v, f"node {pos} attr") for v in vec])
        if "null" in node:
            if node["null"] is not True:
                _fail(f"node {pos}: 'null' may only be true (omit otherwise)")
            null_mask[pos] = True
            if has_attr and any(v != 0.0 for v in attrs[-1]):
                _fail(f"node {pos}: null nodes must have zero attributes")

    edges = doc["edges"]
    if not isinstance(edges, list):
        _fail("'edges' must be a list")
    adjacency = np.zeros((n, n))
    seen = set()
    for pos, edge in enumerate(edges):
        if not isinstance(edge, dict) or set(edge) != _EDGE_KEYS:
            _fail(f"edge at position {pos}: expected keys {sorted(_EDGE_KEYS)}")
        i, j = edge["i"], edge["j"]
        for name, v in (("i", i), ("j", j)):
            if isinstance(v, bool) or not isinstance(v, int):
                _fail(f"edge at position {pos}: '{name}' must be an integer")
            if not 0 <= v < n:
                _fail(f"edge at position {pos}: node id {v} out of range 0..{n - 1}")
        if i == j:
            _fail(f"edge at position {pos}: self-loop at node {i}")
        if not directed and i > j:
            _fail(f"edge at position {pos}: undirected edges must have i < j, got ({i}, {j})")
        if (i, j) in seen:
            _fail(f"edge at position {pos}: duplicate edge ({i}, {j})")
        seen.add((i, j))
        w = _check_number(edge["w"], f"edge ({i}, {j}) weight")
        if w == 0.0:
            _fail(f"edge at position {pos}: zero-weight edge ({i}, {j}); omit it instead")
        if null_mask[i] or null_mask[j]:
            _fail(f"edge at position {pos}: edge ({i}, {j}) touches a null node")
        adjacency[i, j] = w
        if not directed:
            adjacency[j, i] = w

    node_attrs = np.array(attrs) if attr_dim else None
    try:
        return Graph(adjacency, node_attrs=node_attrs, directed=directed,
                     null_mask=null_mask)
    except ValueError as exc:  # pragma: no cover - schema checks should catch first
        raise ValidationError(str(exc)) from exc


def graph_to_document(g: Graph) -> dict:
    """Canonical document for a graph (sorted edges, fixed key order)."""
    nodes = []
    for i in range(g.n):
        node: dict = {"id": i}
        if g.node_attrs is not None:
            node["attr"] = [float(v) for v in g.node_attrs[i]]
        if bool(g.null_mask[i]):
            node["null"] = True
        nodes.append(node)
    if g.directed:
        rows, cols = np.nonzero(g.adjacency)
    else:
        rows, cols = np.nonzero(np.triu(g.adjacency, k=1))
    edges = [
        {"i": int(i), "j": int(j), "w": float(g.adjacency[i, j])}
        for i, j in zip(rows, cols)
    ]
    return {"directed": bool(g.directed), "nodes": nodes, "edges": edges}


def dumps_graph(g: Graph) -> str:
    return json.dumps(graph_to_document(g), indent=2) + "\n"


def save_graph(g: Graph, path) -> None:
    Path(path).write_text(dumps_graph(g), encoding="utf-8")


def load_graph(path) -> Graph:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: malformed JSON ({exc})") from exc
    try:
        return document_to_graph(doc)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def pca_model_document(model) -> dict:
    """Serializable form of a fitted PCA model: mean document plus basis,
    singular values, and per-sample scores."""
    return {
        "size": model.size,
        "directed": model.directed,
        "lambda": model.lam,
        "include_nodes": model.include_nodes,
        "attr_dim": model.attr_dim,
        "nonnegative": model.nonnegative,
        "mean_graph": graph_to_document(model.mean.mu),
        "center": [float(v) for v in model.center],
        "basis": [[float(v) for v in row] for row in model.basis],
        "singular_values": [float(v) for v in model.singular_values],
        "component_variances": [float(v) for v in model.component_variances],
        "explained_variance_ratio": [float(v) for v in model.explained_variance_ratio],
        "scores": [[float(v) for v in row] for row in model.scores],
    }


def pca_model_from_document(doc):
    """Rebuild a PCA model from its document (registrations are not stored)."""
    from .stats import GraphMean, GraphPcaModel

    if not isinstance(doc, dict):
        _fail("PCA model must be a JSON object")
    required = {
        "size", "directed", "lambda", "include_nodes", "attr_dim", "nonnegative",
        "mean_graph", "center", "basis", "singular_values",
        "component_variances", "explained_variance_ratio", "scores",
    }
    missing = required - set(doc)
    if missing:
        _fail(f"PCA model is missing keys: {sorted(missing)}")
    mu = document_to_graph(doc["mean_graph"])
    size = int(doc["size"])
    if mu.n != size:
        _fail(f"mean graph has {mu.n} nodes but model declares size {size}")
    directed = bool(doc["directed"])
    include_nodes = bool(doc["include_nodes"])
    attr_dim = int(doc["attr_dim"])
    n_edges = size * (size - 1) // (1 if directed else 2)
    dim = n_edges + (size * attr_dim if include_nodes else 0)

    basis = np.array(doc["basis"], dtype=float)
    if basis.ndim == 1:
        basis = basis.reshape(0, dim)
    scores = np.array(doc["scores"], dtype=float)
    if scores.ndim == 1:
        scores = scores.reshape(len(doc["scores"]), 0)
    center = np.array(doc["center"], dtype=float)
    svals = np.array(doc["singular_values"], dtype=float)
    if basis.shape != (len(svals), dim):
        _fail(f"basis shape {basis.shape} does not match {len(svals)} x {dim}")
    if center.shape != (dim,):
        _fail(f"center length {center.shape} does not match dimension {dim}")
    if scores.shape[1] != len(svals):
        _fail("scores must have one column per component")

    mean = GraphMean(mu=mu, registrations=(), energy_trace=(), converged=True)
    return GraphPcaModel(
        mean=mean,
        basis=basis,
        singular_values=svals,
        component_variances=np.array(doc["component_variances"], dtype=float),
        explained_variance_ratio=np.array(doc["explained_variance_ratio"], dtype=float),
        scores=scores,
        center=center,
        lam=float(doc["lambda"]),
        include_nodes=include_nodes,
        directed=directed,
        size=size,
        attr_dim=attr_dim,
        nonnegative=bool(doc["nonnegative"]),
    )
