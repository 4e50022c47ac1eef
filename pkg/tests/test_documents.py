import json

import numpy as np
import pytest

from conftest import random_nonnegative_graph, random_symmetric_graph
from graphspace import (
    Graph,
    MatchConfig,
    ValidationError,
    document_to_graph,
    dumps_graph,
    graph_pca,
    load_graph,
    node_distance_matrix,
    pca_model_document,
    pca_model_from_document,
    reconstruct,
    save_graph,
)
from conftest import perturbed_corpus

MINIMAL = {
    "directed": False,
    "nodes": [{"id": 0}, {"id": 1}],
    "edges": [{"i": 0, "j": 1, "w": 1.0}],
}


class TestDocumentToGraph:
    def test_minimal_document(self):
        g = document_to_graph(MINIMAL)
        assert np.array_equal(g.adjacency, [[0.0, 1.0], [1.0, 0.0]])
        assert not g.directed and g.node_attrs is None

    def test_attributes_loaded(self):
        doc = {
            "directed": False,
            "nodes": [{"id": 0, "attr": [0.0, 0.0]}, {"id": 1, "attr": [3.0, 4.0]}],
            "edges": [],
        }
        g = document_to_graph(doc)
        assert node_distance_matrix(g, g)[0, 1] == 25.0

    def test_directed_document(self):
        doc = {
            "directed": True,
            "nodes": [{"id": 0}, {"id": 1}],
            "edges": [{"i": 1, "j": 0, "w": 2.0}],
        }
        g = document_to_graph(doc)
        assert g.adjacency[1, 0] == 2.0 and g.adjacency[0, 1] == 0.0

    def test_null_nodes(self):
        doc = {
            "directed": False,
            "nodes": [{"id": 0}, {"id": 1, "null": True}],
            "edges": [],
        }
        g = document_to_graph(doc)
        assert g.null_mask.tolist() == [False, True]

    @pytest.mark.parametrize(
        "mutate,message",
        [
            (lambda d: d.pop("nodes"), "missing document keys"),
            (lambda d: d.update(extra=1), "unknown document keys"),
            (lambda d: d.update(directed="no"), "boolean"),
            (lambda d: d["nodes"].__setitem__(0, {"id": 1}), "ascending"),
            (lambda d: d["edges"].append({"i": 0, "j": 0, "w": 1.0}), "self-loop"),
            (lambda d: d["edges"].append({"i": 1, "j": 0, "w": 1.0}), "i < j"),
            (lambda d: d["edges"].append({"i": 0, "j": 1, "w": 2.0}), "duplicate"),
            (lambda d: d["edges"].append({"i": 0, "j": 5, "w": 1.0}), "out of range"),
            (lambda d: d["edges"].__setitem__(0, {"i": 0, "j": 1, "w": 0.0}), "zero-weight"),
            (lambda d: d["edges"].append({"i": 0, "j": 1}), "expected keys"),
            (
                lambda d: d["edges"].__setitem__(0, {"i": 0, "j": 1, "w": float("nan")}),
                "finite",
            ),
            (lambda d: d["nodes"][0].update(attr=[1.0]), "all nodes"),
        ],
    )
    def test_validation_errors(self, mutate, message):
        doc = json.loads(json.dumps(MINIMAL))
        mutate(doc)
        with pytest.raises(ValidationError, match=message):
            document_to_graph(doc)

    def test_null_node_with_edge_rejected(self):
        doc = {
            "directed": False,
            "nodes": [{"id": 0, "null": True}, {"id": 1}],
            "edges": [{"i": 0, "j": 1, "w": 1.0}],
        }
        with pytest.raises(ValidationError, match="null"):
            document_to_graph(doc)

    def test_null_node_with_nonzero_attr_rejected(self):
        doc = {
            "directed": False,
            "nodes": [{"id": 0, "attr": [1.0], "null": True}, {"id": 1, "attr": [2.0]}],
            "edges": [],
        }
        with pytest.raises(ValidationError, match="zero attributes"):
            document_to_graph(doc)


class TestRoundTrip:
    def test_graph_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        g = random_symmetric_graph(20, rng)
        path = tmp_path / "g.json"
        save_graph(g, path)
        back = load_graph(path)
        assert np.array_equal(back.adjacency, g.adjacency)

    def test_document_bytes_stable(self, tmp_path):
        rng = np.random.default_rng(1)
        g = random_nonnegative_graph(20, rng)
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        save_graph(g, p1)
        save_graph(load_graph(p1), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_attrs_and_nulls_round_trip(self, tmp_path):
        g = Graph(
            np.zeros((3, 3)),
            node_attrs=[[1.5, -2.25], [0.0, 0.0], [1e-17, 3.0]],
            null_mask=[False, True, False],
        )
        path = tmp_path / "g.json"
        save_graph(g, path)
        back = load_graph(path)
        assert np.array_equal(back.node_attrs, g.node_attrs)
        assert np.array_equal(back.null_mask, g.null_mask)

    def test_golden_bytes(self):
        g = Graph([[0.0, 0.5], [0.5, 0.0]])
        expected = (
            '{\n'
            '  "directed": false,\n'
            '  "nodes": [\n'
            '    {\n      "id": 0\n    },\n'
            '    {\n      "id": 1\n    }\n'
            '  ],\n'
            '  "edges": [\n'
            '    {\n      "i": 0,\n      "j": 1,\n      "w": 0.5\n    }\n'
            '  ]\n'
            '}\n'
        )
        assert dumps_graph(g) == expected

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{nope", encoding="utf-8")
        with pytest.raises(ValidationError, match="malformed JSON"):
            load_graph(path)

    def test_error_names_offending_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"directed": False, "nodes": [], "edges": []}))
        with pytest.raises(ValidationError, match="bad.json"):
            load_graph(path)


class TestPcaModelDocument:
    def test_round_trip_reconstruction(self):
        rng = np.random.default_rng(2)
        corpus = perturbed_corpus(random_symmetric_graph(5, rng), 6, rng)
        model = graph_pca(corpus, MatchConfig(refinement=True))
        doc = pca_model_document(model)
        # must survive a JSON round trip
        loaded = pca_model_from_document(json.loads(json.dumps(doc)))
        for i in range(model.n_samples):
            a = reconstruct(model, model.scores[i])
            b = reconstruct(loaded, loaded.scores[i])
            assert np.array_equal(a.adjacency, b.adjacency)

    def test_missing_keys_rejected(self):
        with pytest.raises(ValidationError, match="missing keys"):
            pca_model_from_document({"size": 3})

    def test_shape_mismatch_rejected(self):
        rng = np.random.default_rng(3)
        corpus = perturbed_corpus(random_symmetric_graph(4, rng), 3, rng)
        doc = pca_model_document(graph_pca(corpus))
        doc["basis"] = [row[:-1] for row in doc["basis"]]
        with pytest.raises(ValidationError, match="basis shape"):
            pca_model_from_document(doc)
