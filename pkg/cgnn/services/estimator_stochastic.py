"""Matrix-free estimator backend: CG solves, SLQ log-determinants, Hutchinson traces."""

import numpy as np

from cgnn.linalg.estimators import hutchinson_traces, slq_logdet
from cgnn.services.estimator_backend import EstimatorBackend
from cgnn.services.precision import PrecisionOperator


class StochasticEstimatorBackend(EstimatorBackend):
    """Linear-cost backend used for training at any graph size.

    Within one call, every probe's ``Gamma_RR^-1 z`` is solved once and
    contracted with all derivative channels.
    """

    def solve(self, precision: PrecisionOperator, rows: np.ndarray, rhs: np.ndarray) -> np.ndarray:
        if len(rows) == 0:
            return np.zeros(0)
        return precision.solve_block(rows, rhs, self.cfg).solution

    def logdet(self, precision: PrecisionOperator, rows: np.ndarray, stream: int = 0) -> float:
        return slq_logdet(precision.restricted(rows), len(rows), self.cfg, stream)

    def trace_inverse_derivatives(
        self,
        precision: PrecisionOperator,
        rows: np.ndarray,
        stream: int = 0,
    ) -> np.ndarray:
        derivative_applies = [
            (lambda v, c=channel: precision.apply_derivative(c, rows, rows, v))
            for channel in precision.channels
        ]
        return hutchinson_traces(
            lambda z: self.solve(precision, rows, z),
            derivative_applies,
            len(rows),
            self.cfg,
            stream,
        )
