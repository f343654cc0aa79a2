"""Unit tests for dataset bundle storage."""

import numpy as np
import pytest

from cgnn.exceptions import DataFormatError
from cgnn.models.graph import AttributedGraph
from cgnn.repositories.bundle_repository import BundleRepository, DatasetBundle


@pytest.fixture
def bundle(two_type_graph):
    labels = np.array(two_type_graph.labels, copy=True)
    labels[0] = np.nan
    graph = two_type_graph.with_labels(labels)
    return DatasetBundle(
        graph=graph,
        splits={"train": np.arange(1, 12), "val": np.arange(12, 18), "test": np.arange(18, graph.n)},
    )


class TestBundleRepository:
    """Tests for BundleRepository read/write."""

    def test_round_trip(self, tmp_path, bundle):
        """Should read back the graph, missing labels and splits."""
        repo = BundleRepository(tmp_path / "b")
        repo.write(bundle)

        loaded = repo.read()

        assert loaded.graph.n == bundle.graph.n
        assert loaded.graph.edge_type_count == 2
        np.testing.assert_array_equal(loaded.graph.edges, bundle.graph.edges)
        np.testing.assert_allclose(loaded.graph.features, bundle.graph.features)
        assert np.isnan(loaded.graph.labels[0])
        np.testing.assert_allclose(loaded.graph.labels[1:], bundle.graph.labels[1:])
        np.testing.assert_array_equal(loaded.split("val"), bundle.splits["val"])

    def test_rewrite_is_byte_stable(self, tmp_path, bundle):
        """Should write identical files when a read bundle is written again."""
        first = BundleRepository(tmp_path / "first")
        first.write(bundle)
        second = BundleRepository(tmp_path / "second")
        second.write(first.read())

        for name in ("edges.tsv", "features.csv", "labels.csv", "splits.json", "metadata.json"):
            assert (first.root / name).read_bytes() == (second.root / name).read_bytes()

    def test_round_trip_keeps_type_without_edges(self, tmp_path):
        """Should keep an edge type that has no edges of its own."""
        graph = AttributedGraph(4, [(0, 1, 0), (1, 2, 0), (2, 3, 0)], np.ones((4, 1)), edge_type_count=3)
        repo = BundleRepository(tmp_path)
        repo.write(DatasetBundle(graph=graph))

        loaded = repo.read().graph

        assert loaded.edge_type_count == 3
        assert loaded.adjacency(2).nnz == 0

    def test_bundle_without_metadata_infers_types(self, tmp_path):
        """Should infer the type count from edges.tsv when metadata.json is absent."""
        (tmp_path / "features.csv").write_text("vertex_id,x0\n0,1.0\n1,3.0\n2,0.5\n")
        (tmp_path / "edges.tsv").write_text("0\t1\t0\n1\t2\t1\n")

        assert BundleRepository(tmp_path).read().graph.edge_type_count == 2

    def test_rejects_type_count_below_edge_types(self, tmp_path):
        """Should reject metadata that does not cover every edge type."""
        (tmp_path / "features.csv").write_text("vertex_id,x0\n0,1.0\n1,3.0\n2,0.5\n")
        (tmp_path / "edges.tsv").write_text("0\t1\t0\n1\t2\t1\n")
        (tmp_path / "metadata.json").write_text('{"edge_type_count": 1}')

        with pytest.raises(DataFormatError):
            BundleRepository(tmp_path).read()

    def test_rejects_non_integer_type_count(self, tmp_path):
        """Should reject a malformed edge_type_count."""
        (tmp_path / "features.csv").write_text("vertex_id,x0\n0,1.0\n")
        (tmp_path / "edges.tsv").write_text("")
        (tmp_path / "metadata.json").write_text('{"edge_type_count": "two"}')

        with pytest.raises(DataFormatError):
            BundleRepository(tmp_path).read()

    def test_unlabeled_graph_has_no_labels_file(self, tmp_path):
        """Should skip labels.csv and read labels back as None."""
        repo = BundleRepository(tmp_path)
        repo.write(DatasetBundle(graph=AttributedGraph(3, [(0, 1), (1, 2)], np.ones((3, 1)))))

        assert not (tmp_path / "labels.csv").exists()
        assert repo.read().graph.labels is None

    def test_missing_directory(self, tmp_path):
        """Should raise DataFormatError for a missing directory."""
        with pytest.raises(DataFormatError):
            BundleRepository(tmp_path / "absent").read()

    def test_missing_edges_file(self, tmp_path, bundle):
        """Should raise DataFormatError when edges.tsv is gone."""
        repo = BundleRepository(tmp_path)
        repo.write(bundle)
        (tmp_path / "edges.tsv").unlink()

        with pytest.raises(DataFormatError):
            repo.read()

    def test_rejects_gap_in_vertex_ids(self, tmp_path):
        """Should require vertex ids 0..n-1."""
        (tmp_path / "features.csv").write_text("vertex_id,x0\n0,1.0\n2,3.0\n")
        (tmp_path / "edges.tsv").write_text("")

        with pytest.raises(DataFormatError):
            BundleRepository(tmp_path).read()

    def test_rejects_split_out_of_range(self, tmp_path):
        """Should reject split indices outside [0, n)."""
        (tmp_path / "features.csv").write_text("vertex_id,x0\n0,1.0\n1,3.0\n")
        (tmp_path / "edges.tsv").write_text("0\t1\n")
        (tmp_path / "splits.json").write_text('{"train": [0, 5]}')

        with pytest.raises(DataFormatError):
            BundleRepository(tmp_path).read()

    def test_rejects_self_loop(self, tmp_path):
        """Should wrap graph validation failures as DataFormatError."""
        (tmp_path / "features.csv").write_text("vertex_id,x0\n0,1.0\n1,3.0\n")
        (tmp_path / "edges.tsv").write_text("1\t1\n")

        with pytest.raises(DataFormatError) as exc_info:
            BundleRepository(tmp_path).read()

        assert "Self-loops" in exc_info.value.details["reason"]

    def test_missing_split(self, bundle):
        """Should raise MISSING_SPLIT for an absent split name."""
        with pytest.raises(DataFormatError) as exc_info:
            bundle.split("holdout")

        assert exc_info.value.error_code == "MISSING_SPLIT"
