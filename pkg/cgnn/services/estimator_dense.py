"""Dense-factorization backend for verification on small graphs."""

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from cgnn.exceptions import NotPositiveDefiniteError
from cgnn.services.estimator_backend import EstimatorBackend
from cgnn.services.precision import PrecisionOperator


class DenseEstimatorBackend(EstimatorBackend):
    """Exact Cholesky-based replacements for every stochastic estimator.

    Materializes Gamma, so it is cubic in the vertex count. Not suitable
    for anything beyond test-sized graphs.
    """

    def _factor(self, precision: PrecisionOperator, rows: np.ndarray):
        block = precision.dense_block(rows, rows)
        try:
            return cho_factor(block, lower=True)
        except LinAlgError as exc:
            raise NotPositiveDefiniteError(
                message="Cholesky factorization failed",
                details={"rows": int(len(rows)), "reason": str(exc)},
            ) from exc

    def solve(self, precision: PrecisionOperator, rows: np.ndarray, rhs: np.ndarray) -> np.ndarray:
        if len(rows) == 0:
            return np.zeros(0)
        return cho_solve(self._factor(precision, rows), np.asarray(rhs, dtype=np.float64))

    def logdet(self, precision: PrecisionOperator, rows: np.ndarray, stream: int = 0) -> float:
        if len(rows) == 0:
            return 0.0
        chol, _ = self._factor(precision, rows)
        return float(2.0 * np.sum(np.log(np.diag(chol))))

    def trace_inverse_derivatives(
        self,
        precision: PrecisionOperator,
        rows: np.ndarray,
        stream: int = 0,
    ) -> np.ndarray:
        if len(rows) == 0:
            return np.zeros(len(precision.channels))
        factor = self._factor(precision, rows)
        return np.array(
            [
                float(np.trace(cho_solve(factor, precision.dense_derivative(c, rows, rows))))
                for c in precision.channels
            ]
        )

    @property
    def is_exact(self) -> bool:
        return True
