"""Experiment report schemas."""

from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator


class ExperimentReport(BaseModel):
    """Result of one method on one dataset across seed repetitions."""

    method: str
    dataset: str
    seed: int = Field(..., description="Base seed; repetition i uses seed + i")
    metric: str = Field(..., description="'accuracy' or 'r2'")
    values: List[float] = Field(default_factory=list)
    mean: Optional[float] = None
    std: Optional[float] = None
    alphas: List[List[float]] = Field(
        default_factory=list,
        description="Learned alpha per edge type for every repetition",
    )
    betas: List[float] = Field(default_factory=list)
    timings: List[float] = Field(default_factory=list, description="Seconds per repetition")
    config: Dict[str, Any] = Field(default_factory=dict)
    notes: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def fill_summary(self) -> "ExperimentReport":
        if self.values:
            self.mean = float(np.mean(self.values))
            self.std = float(np.std(self.values))
        return self


class EstimatorValidationCell(BaseModel):
    """Accuracy of the estimators at one (T, k) grid point."""

    probes: int
    lanczos_steps: int
    runs: int
    logdet_rms_rel_error: float
    dalpha_rms_rel_error: float
    dbeta_rms_rel_error: float
    dalpha_mean: float
    dalpha_stderr: float
    dbeta_mean: float
    dbeta_stderr: float
    dalpha_exact: float
    dbeta_exact: float
    logdet_exact: float


class EstimatorValidationReport(BaseModel):
    """Estimator accuracy grid on a fixed graph and parametrization."""

    vertices: int
    edges: int
    alpha: float
    beta: float
    labeled_fraction: float
    seed: int
    cells: List[EstimatorValidationCell] = Field(default_factory=list)


class ScalingReport(BaseModel):
    """Timing of one loss+gradient evaluation against graph size."""

    mean_degree: int
    vertices: List[int] = Field(default_factory=list)
    edges: List[int] = Field(default_factory=list)
    seconds: List[float] = Field(default_factory=list)
    slope: Optional[float] = Field(
        default=None,
        description="Least-squares slope of log(seconds) against log(edges)",
    )
    notes: List[str] = Field(default_factory=list)
