"""Unit tests for regressor checkpoints and model files."""

import json

import numpy as np
import pytest

from cgnn.exceptions import DataFormatError
from cgnn.models.cgnn_model import CGNNModel, TrainingMetadata
from cgnn.models.params import CorrelationParams
from cgnn.regressors.checkpoint import ParameterCheckpoint, load_parameters, save_parameters
from cgnn.regressors.networks import REGRESSOR_KINDS
from cgnn.schemas.estimator import EstimatorConfig
from cgnn.schemas.training import RegressorSpec


@pytest.fixture
def spec() -> RegressorSpec:
    return RegressorSpec(kind="sage_mean", hidden_width=4, representation_dim=3, layers=2, seed=1)


@pytest.fixture
def params(spec):
    return REGRESSOR_KINDS[spec.kind](spec, 3).init_parameters()


class TestParameterCheckpoint:
    """Tests for save_parameters / load_parameters."""

    def test_save_and_load(self, tmp_path, spec, params):
        """Should restore spec, layout and values exactly."""
        path = save_parameters(tmp_path / "weights.json", spec, 3, params)

        checkpoint = load_parameters(path)
        restored = checkpoint.to_parameters()

        assert checkpoint.spec == spec
        assert restored.layout == params.layout
        np.testing.assert_array_equal(restored.values, params.values)

    def test_unsupported_version(self, tmp_path, spec, params):
        """Should refuse checkpoints from another format version."""
        body = ParameterCheckpoint.from_parameters(spec, 3, params).model_dump()
        body["version"] = 99
        path = tmp_path / "weights.json"
        path.write_text(json.dumps(body))

        with pytest.raises(DataFormatError) as exc_info:
            load_parameters(path)

        assert exc_info.value.error_code == "UNSUPPORTED_CHECKPOINT_VERSION"

    def test_invalid_file(self, tmp_path):
        """Should raise INVALID_CHECKPOINT for unreadable content."""
        path = tmp_path / "weights.json"
        path.write_text("not json")

        with pytest.raises(DataFormatError) as exc_info:
            load_parameters(path)

        assert exc_info.value.error_code == "INVALID_CHECKPOINT"


class TestCGNNModelFile:
    """Tests for CGNNModel.save / load."""

    def test_save_and_load(self, tmp_path, spec, params):
        """Should restore the regressor, correlation and metadata."""
        model = CGNNModel(
            regressor=ParameterCheckpoint.from_parameters(spec, 3, params),
            correlation=CorrelationParams(alphas=(0.3, -0.2), beta=1.5),
            estimator=EstimatorConfig(probes=16),
            metadata=TrainingMetadata(epochs_run=2, loss_trace=[1.0, 0.5], val_trace=[None, 0.2]),
        )
        path = model.save(tmp_path / "model.json")

        loaded = CGNNModel.load(path)
        regressor, restored = loaded.build_regressor()

        assert loaded.correlation == model.correlation
        assert loaded.metadata.val_trace == [None, 0.2]
        assert regressor.kind == "sage_mean"
        np.testing.assert_array_equal(restored.values, params.values)

    def test_missing_file(self, tmp_path):
        """Should raise INVALID_MODEL_FILE for a missing path."""
        with pytest.raises(DataFormatError) as exc_info:
            CGNNModel.load(tmp_path / "absent.json")

        assert exc_info.value.error_code == "INVALID_MODEL_FILE"

    def test_unsupported_version(self, tmp_path, spec, params):
        """Should refuse model files from another format version."""
        model = CGNNModel(
            version=2,
            regressor=ParameterCheckpoint.from_parameters(spec, 3, params),
            correlation=CorrelationParams.uniform(0.0, 1.0),
            estimator=EstimatorConfig(),
        )
        path = model.save(tmp_path / "model.json")

        with pytest.raises(DataFormatError) as exc_info:
            CGNNModel.load(path)

        assert exc_info.value.error_code == "UNSUPPORTED_MODEL_VERSION"
