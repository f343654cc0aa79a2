"""First-order optimizers over flat parameter vectors."""

from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from cgnn.config import get_settings
from cgnn.exceptions import ValidationError

settings = get_settings()


class Optimizer(ABC):
    """Stateful update rule ``values -> values - step(grad)``."""

    def __init__(self, lr: float):
        self.lr = lr

    @abstractmethod
    def step(self, values: np.ndarray, grad: np.ndarray) -> np.ndarray:
        """Return updated values; inputs are not modified."""
        pass

    def reset(self) -> None:
        pass


class GradientDescent(Optimizer):
    def step(self, values: np.ndarray, grad: np.ndarray) -> np.ndarray:
        return values - self.lr * grad


class Adam(Optimizer):
    """Adaptive moment estimation with bias-corrected moments."""

    def __init__(
        self,
        lr: float = settings.lr_theta,
        beta1: float = settings.adam_beta1,
        beta2: float = settings.adam_beta2,
        eps: float = settings.adam_eps,
    ):
        super().__init__(lr)
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.reset()

    def reset(self) -> None:
        self._m: Optional[np.ndarray] = None
        self._v: Optional[np.ndarray] = None
        self._t = 0

    def step(self, values: np.ndarray, grad: np.ndarray) -> np.ndarray:
        if self._m is None:
            self._m = np.zeros_like(values)
            self._v = np.zeros_like(values)
        self._t += 1
        self._m = self.beta1 * self._m + (1.0 - self.beta1) * grad
        self._v = self.beta2 * self._v + (1.0 - self.beta2) * grad**2
        m_hat = self._m / (1.0 - self.beta1**self._t)
        v_hat = self._v / (1.0 - self.beta2**self._t)
        return values - self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


OPTIMIZERS: dict[str, type[Optimizer]] = {
    "adam": Adam,
    "sgd": GradientDescent,
}


def build_optimizer(name: str, lr: float) -> Optimizer:
    if name not in OPTIMIZERS:
        raise ValidationError(
            error_code="UNKNOWN_OPTIMIZER",
            message=f"Unknown optimizer '{name}'",
            details={"allowed": sorted(OPTIMIZERS)},
        )
    return OPTIMIZERS[name](lr=lr)
