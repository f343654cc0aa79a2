"""Correlation parameters of the residual precision model."""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from cgnn.config import get_settings

settings = get_settings()


class CorrelationParams(BaseModel):
    """Scalars defining ``Gamma = beta * (I - sum_i alpha_i S_i)``.

    Every ``|alpha_i|`` is kept at or below ``1 - eta`` so the precision is
    positive definite with condition number at most ``(2 - eta) / eta``.
    """

    model_config = ConfigDict(frozen=True)

    alphas: Tuple[float, ...] = Field(..., min_length=1)
    beta: float = Field(..., gt=0.0)
    eta: float = Field(default=settings.eta, gt=0.0, lt=1.0)

    @model_validator(mode="after")
    def check_alpha_range(self) -> "CorrelationParams":
        limit = 1.0 - self.eta
        for i, alpha in enumerate(self.alphas):
            if not np.isfinite(alpha) or abs(alpha) > limit:
                raise ValueError(
                    f"alphas[{i}]={alpha} violates |alpha| <= 1 - eta = {limit}"
                )
        if not np.isfinite(self.beta):
            raise ValueError("beta must be finite")
        return self

    @classmethod
    def uniform(cls, alpha: float, beta: float, types: int = 1, **kwargs) -> "CorrelationParams":
        return cls(alphas=(float(alpha),) * types, beta=float(beta), **kwargs)

    @property
    def type_count(self) -> int:
        return len(self.alphas)

    @property
    def max_abs_alpha(self) -> float:
        return float(max(abs(a) for a in self.alphas))


@dataclass(frozen=True)
class Reparametrization:
    """Constrained parameters plus the local chain-rule factors."""

    params: CorrelationParams
    dalpha_draw: np.ndarray
    dbeta_draw: float


def reparametrize(
    raw_alpha: np.ndarray,
    raw_beta: float,
    eta: float = settings.eta,
) -> Reparametrization:
    """Map unconstrained coordinates to valid parameters.

    ``alpha_i = (1 - eta) * tanh(raw_alpha_i)`` and ``beta = exp(raw_beta)``.
    """
    raw_alpha = np.atleast_1d(np.asarray(raw_alpha, dtype=np.float64))
    tanh = np.tanh(raw_alpha)
    scale = 1.0 - eta
    alphas = scale * tanh
    beta = float(np.exp(raw_beta))
    params = CorrelationParams(
        alphas=tuple(float(a) for a in alphas), beta=beta, eta=eta
    )
    return Reparametrization(
        params=params,
        dalpha_draw=scale * (1.0 - tanh**2),
        dbeta_draw=beta,
    )


def to_raw(params: CorrelationParams) -> Tuple[np.ndarray, float]:
    """Inverse of :func:`reparametrize`."""
    scale = 1.0 - params.eta
    ratio = np.clip(np.asarray(params.alphas) / scale, -1.0 + 1e-15, 1.0 - 1e-15)
    return np.arctanh(ratio), float(np.log(params.beta))
