"""Trained model entity and its versioned JSON file."""

from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, Field
from pydantic import ValidationError as PydanticValidationError

from cgnn.exceptions import DataFormatError
from cgnn.models.params import CorrelationParams
from cgnn.regressors.base import BaseRegressor, ParameterSet
from cgnn.regressors.checkpoint import ParameterCheckpoint
from cgnn.regressors.networks import REGRESSOR_KINDS
from cgnn.schemas.estimator import EstimatorConfig
from cgnn.schemas.training import TrainConfig

MODEL_VERSION = 1


class TrainingMetadata(BaseModel):
    """What happened during training; the final-epoch state is kept alongside the selected one."""

    epochs_run: int = 0
    steps_run: int = 0
    loss_trace: list[float] = Field(default_factory=list)
    val_trace: list[Optional[float]] = Field(default_factory=list)
    best_epoch: Optional[int] = None
    best_val_score: Optional[float] = None
    final_correlation: Optional[CorrelationParams] = None
    final_regressor_values: Optional[list[float]] = None
    train_config: Optional[TrainConfig] = None


class CGNNModel(BaseModel):
    """Base regressor, correlation parameters and estimator settings."""

    version: int = MODEL_VERSION
    method: str = "c-gnn"
    regressor: ParameterCheckpoint
    correlation: CorrelationParams
    estimator: EstimatorConfig
    metadata: TrainingMetadata = Field(default_factory=TrainingMetadata)

    def build_regressor(self) -> tuple[BaseRegressor, ParameterSet]:
        spec = self.regressor.spec
        regressor = REGRESSOR_KINDS[spec.kind](spec, self.regressor.feature_dim)
        return regressor, self.regressor.to_parameters()

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.model_dump_json(indent=2))
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "CGNNModel":
        path = Path(path)
        try:
            model = cls.model_validate_json(path.read_text())
        except (OSError, PydanticValidationError) as exc:
            raise DataFormatError(
                error_code="INVALID_MODEL_FILE",
                message="Could not read model file",
                details={"path": str(path), "reason": str(exc)},
            ) from exc
        if model.version != MODEL_VERSION:
            raise DataFormatError(
                error_code="UNSUPPORTED_MODEL_VERSION",
                message="Model file version is not supported",
                details={"version": model.version, "supported": MODEL_VERSION},
            )
        return model
