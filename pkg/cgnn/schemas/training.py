"""Regressor architecture and training schedule schemas."""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from cgnn.config import get_settings

settings = get_settings()

RegressorKind = Literal["linear", "mlp", "sage_mean", "gcn"]
OptimizerName = Literal["adam", "sgd"]


class RegressorSpec(BaseModel):
    """Architecture of a base regressor.

    Hidden widths are ``hidden_width`` repeated ``layers`` times followed by
    ``representation_dim``; a linear output layer maps the representation to
    the prediction. Graph kinds aggregate neighbours in front of each of the
    first ``layers`` hidden layers only. The ``linear`` kind has no hidden
    layers.
    """

    model_config = ConfigDict(frozen=True)

    kind: RegressorKind = "sage_mean"
    hidden_width: int = Field(default=settings.hidden_width, ge=1)
    representation_dim: int = Field(default=settings.representation_dim, ge=1)
    layers: int = Field(default=settings.layers, ge=1)
    activation: Literal["relu"] = "relu"
    seed: int = Field(default=0, ge=0)

    def hidden_widths(self) -> list[int]:
        if self.kind == "linear":
            return []
        return [self.hidden_width] * self.layers + [self.representation_dim]


class TrainConfig(BaseModel):
    """Training schedule shared by squared-error and C-GNN training."""

    model_config = ConfigDict(frozen=True)

    epochs: int = Field(default=settings.epochs, ge=0)
    batch_size: Optional[int] = Field(
        default=None,
        ge=1,
        description="Labeled vertices per step; None means the full training set",
    )
    lr_theta: float = Field(default=settings.lr_theta, gt=0.0)
    lr_alpha_beta: float = Field(default=settings.lr_alpha_beta, gt=0.0)
    theta_optimizer: OptimizerName = "adam"
    correlation_optimizer: OptimizerName = Field(
        default="sgd",
        description="Update rule for the unconstrained alphas and log beta",
    )
    seed: int = Field(default=0, ge=0)
    init_alpha: float = Field(default=0.0, gt=-1.0, lt=1.0)
    init_beta: float = Field(default=1.0, gt=0.0)
    eta: float = Field(
        default=settings.eta,
        gt=0.0,
        lt=1.0,
        description="Margin keeping every |alpha| at or below 1 - eta",
    )
    freeze_alpha: Optional[float] = Field(default=None, gt=-1.0, lt=1.0)
    freeze_beta: Optional[float] = Field(default=None, gt=0.0)
    select_on_validation: bool = Field(
        default=True,
        description="Keep the checkpoint with the best validation score",
    )
