"""Dataset bundle directories: edges.tsv, features.csv, labels.csv, splits.json, metadata.json."""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from cgnn.exceptions import DataFormatError
from cgnn.logging_config import setup_logger
from cgnn.models.graph import AttributedGraph

logger = setup_logger(__name__)

EDGES_FILE = "edges.tsv"
FEATURES_FILE = "features.csv"
LABELS_FILE = "labels.csv"
SPLITS_FILE = "splits.json"
METADATA_FILE = "metadata.json"


@dataclass
class DatasetBundle:
    graph: AttributedGraph
    splits: dict[str, np.ndarray] = field(default_factory=dict)

    def split(self, name: str) -> np.ndarray:
        if name not in self.splits:
            raise DataFormatError(
                error_code="MISSING_SPLIT",
                message=f"Bundle has no '{name}' split",
                details={"available": sorted(self.splits)},
            )
        return self.splits[name]


class BundleRepository:
    """Reads and writes dataset bundles under a root directory."""

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)

    def write(self, bundle: DatasetBundle) -> Path:
        graph = bundle.graph
        self.root.mkdir(parents=True, exist_ok=True)

        edges = pd.DataFrame(graph.edges, columns=["u", "v", "type"])
        edges.to_csv(self.root / EDGES_FILE, sep="\t", header=False, index=False)

        features = pd.DataFrame(
            graph.features, columns=[f"x{i}" for i in range(graph.feature_dim)]
        )
        features.insert(0, "vertex_id", np.arange(graph.n))
        features.to_csv(self.root / FEATURES_FILE, index=False)

        if graph.labels is not None:
            labels = pd.DataFrame({"vertex_id": np.arange(graph.n), "label": graph.labels})
            labels.to_csv(self.root / LABELS_FILE, index=False, na_rep="")

        splits = {name: [int(i) for i in indices] for name, indices in sorted(bundle.splits.items())}
        (self.root / SPLITS_FILE).write_text(json.dumps(splits, indent=2, sort_keys=True) + "\n")

        metadata = {"edge_type_count": graph.edge_type_count}
        (self.root / METADATA_FILE).write_text(json.dumps(metadata, indent=2, sort_keys=True) + "\n")

        logger.info(f"Wrote bundle to {self.root}: {graph!r}")
        return self.root

    def read(self) -> DatasetBundle:
        if not self.root.is_dir():
            raise DataFormatError(
                message="Bundle directory does not exist",
                details={"path": str(self.root)},
            )

        features = self._read_table(FEATURES_FILE)
        n = len(features)
        self._check_vertex_ids(features, FEATURES_FILE, n)
        feature_values = features.drop(columns="vertex_id").to_numpy(dtype=np.float64)

        labels = None
        if (self.root / LABELS_FILE).exists():
            label_table = self._read_table(LABELS_FILE)
            self._check_vertex_ids(label_table, LABELS_FILE, n)
            if "label" not in label_table.columns:
                raise DataFormatError(
                    message="labels.csv needs a 'label' column",
                    details={"columns": list(label_table.columns)},
                )
            labels = label_table["label"].to_numpy(dtype=np.float64)

        edges = self._read_edges(n)
        splits = self._read_splits(n)
        edge_type_count = self._read_edge_type_count()

        try:
            graph = AttributedGraph(n, edges, feature_values, labels, edge_type_count)
        except Exception as exc:
            raise DataFormatError(
                message="Bundle does not describe a valid graph",
                details={"path": str(self.root), "reason": str(exc)},
            ) from exc

        logger.info(f"Read bundle from {self.root}: {graph!r}")
        return DatasetBundle(graph=graph, splits=splits)

    def _read_table(self, name: str) -> pd.DataFrame:
        path = self.root / name
        if not path.exists():
            raise DataFormatError(message=f"Bundle is missing {name}", details={"path": str(path)})
        try:
            table = pd.read_csv(path, float_precision="round_trip")
        except (ValueError, pd.errors.ParserError) as exc:
            raise DataFormatError(
                message=f"Could not parse {name}",
                details={"path": str(path), "reason": str(exc)},
            ) from exc
        if "vertex_id" not in table.columns:
            raise DataFormatError(
                message=f"{name} needs a 'vertex_id' first column",
                details={"columns": list(table.columns)},
            )
        return table.sort_values("vertex_id", kind="stable").reset_index(drop=True)

    @staticmethod
    def _check_vertex_ids(table: pd.DataFrame, name: str, n: int) -> None:
        ids = table["vertex_id"].to_numpy()
        if len(ids) != n or not np.array_equal(ids, np.arange(n)):
            raise DataFormatError(
                message=f"{name} must list vertex ids 0..n-1 exactly once",
                details={"file": name, "n": n},
            )

    def _read_edges(self, n: int) -> np.ndarray:
        path = self.root / EDGES_FILE
        if not path.exists():
            raise DataFormatError(message=f"Bundle is missing {EDGES_FILE}", details={"path": str(path)})
        if path.stat().st_size == 0:
            return np.zeros((0, 3), dtype=np.int64)
        try:
            table = pd.read_csv(path, sep="\t", header=None, comment="#")
        except (ValueError, pd.errors.ParserError) as exc:
            raise DataFormatError(
                message=f"Could not parse {EDGES_FILE}",
                details={"path": str(path), "reason": str(exc)},
            ) from exc
        if table.shape[1] == 2:
            table[2] = 0
        if table.shape[1] != 3 or table.isna().any().any():
            raise DataFormatError(
                message="Edge records must be 'u<TAB>v[<TAB>type]'",
                details={"columns": int(table.shape[1])},
            )
        return table.to_numpy(dtype=np.int64)

    def _read_splits(self, n: int) -> dict[str, np.ndarray]:
        path = self.root / SPLITS_FILE
        if not path.exists():
            return {}
        try:
            raw = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise DataFormatError(
                message=f"Could not parse {SPLITS_FILE}",
                details={"reason": str(exc)},
            ) from exc
        splits = {}
        for name, indices in raw.items():
            arr = np.asarray(indices, dtype=np.int64).reshape(-1)
            if arr.size and (arr.min() < 0 or arr.max() >= n):
                raise DataFormatError(
                    message="Split indices must lie in [0, n)",
                    details={"split": name, "n": n},
                )
            splits[name] = np.sort(arr)
        return splits

    def _read_edge_type_count(self) -> Optional[int]:
        """Stored type count, or None to infer it from the edge records."""
        path = self.root / METADATA_FILE
        if not path.exists():
            return None
        try:
            raw = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise DataFormatError(
                message=f"Could not parse {METADATA_FILE}",
                details={"reason": str(exc)},
            ) from exc
        count = raw.get("edge_type_count") if isinstance(raw, dict) else None
        if count is None:
            return None
        if not isinstance(count, int) or isinstance(count, bool) or count < 1:
            raise DataFormatError(
                message="edge_type_count must be a positive integer",
                details={"edge_type_count": count},
            )
        return count
