"""Abstract interface for the linear-algebra estimators behind the likelihood."""

from abc import ABC, abstractmethod

import numpy as np

from cgnn.schemas.estimator import EstimatorConfig
from cgnn.services.precision import PrecisionOperator


class EstimatorBackend(ABC):
    """Solves, log-determinants and derivative traces on principal blocks of Gamma.

    Enables swapping the stochastic estimators for dense factorizations
    without modifying the likelihood or training services.
    """

    def __init__(self, cfg: EstimatorConfig):
        self.cfg = cfg

    @abstractmethod
    def solve(self, precision: PrecisionOperator, rows: np.ndarray, rhs: np.ndarray) -> np.ndarray:
        """Return ``Gamma_RR^-1 rhs``.

        Args:
            precision: Operator holding the current parameters
            rows: Sorted vertex indices ``R`` of the principal block
            rhs: Right-hand side indexed by ``R``
        """
        pass

    @abstractmethod
    def logdet(self, precision: PrecisionOperator, rows: np.ndarray, stream: int = 0) -> float:
        """Return ``log det Gamma_RR``."""
        pass

    @abstractmethod
    def trace_inverse_derivatives(
        self,
        precision: PrecisionOperator,
        rows: np.ndarray,
        stream: int = 0,
    ) -> np.ndarray:
        """Return ``tr(Gamma_RR^-1 dGamma_RR/dc)`` for every channel ``c``.

        Channels follow ``precision.channels``: each alpha_i, then beta.
        """
        pass

    @property
    def is_exact(self) -> bool:
        return False
