"""Regressor checkpoint files: spec, layout and flat weights as JSON."""

from pathlib import Path
from typing import Union

import numpy as np
from pydantic import BaseModel, Field
from pydantic import ValidationError as PydanticValidationError

from cgnn.exceptions import DataFormatError
from cgnn.regressors.base import ParameterSet
from cgnn.schemas.training import RegressorSpec

CHECKPOINT_VERSION = 1


class ParameterCheckpoint(BaseModel):
    version: int = CHECKPOINT_VERSION
    spec: RegressorSpec
    feature_dim: int = Field(..., ge=0)
    layout: list[tuple[str, list[int]]]
    values: list[float]

    @classmethod
    def from_parameters(cls, spec: RegressorSpec, feature_dim: int, params: ParameterSet) -> "ParameterCheckpoint":
        return cls(
            spec=spec,
            feature_dim=feature_dim,
            layout=[(name, list(shape)) for name, shape in params.layout],
            values=[float(v) for v in params.values],
        )

    def to_parameters(self) -> ParameterSet:
        layout = tuple((name, tuple(shape)) for name, shape in self.layout)
        return ParameterSet(np.array(self.values, dtype=np.float64), layout)


def save_parameters(
    path: Union[str, Path],
    spec: RegressorSpec,
    feature_dim: int,
    params: ParameterSet,
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    checkpoint = ParameterCheckpoint.from_parameters(spec, feature_dim, params)
    path.write_text(checkpoint.model_dump_json(indent=2))
    return path


def load_parameters(path: Union[str, Path]) -> ParameterCheckpoint:
    path = Path(path)
    try:
        checkpoint = ParameterCheckpoint.model_validate_json(path.read_text())
    except (OSError, PydanticValidationError) as exc:
        raise DataFormatError(
            error_code="INVALID_CHECKPOINT",
            message="Could not read regressor checkpoint",
            details={"path": str(path), "reason": str(exc)},
        ) from exc
    if checkpoint.version != CHECKPOINT_VERSION:
        raise DataFormatError(
            error_code="UNSUPPORTED_CHECKPOINT_VERSION",
            message="Checkpoint version is not supported",
            details={"version": checkpoint.version, "supported": CHECKPOINT_VERSION},
        )
    return checkpoint
