"""Negative log marginal likelihood of the observed labels and its gradients."""

from dataclasses import dataclass

import numpy as np

from cgnn.exceptions import NumericalError, ValidationError
from cgnn.services.estimator_backend import EstimatorBackend
from cgnn.services.precision import PrecisionOperator


@dataclass
class NLLResult:
    """Loss ``r^T Gbar r - log det Gamma + log det Gamma_UU`` and its gradients."""

    loss: float
    dalphas: np.ndarray
    dbeta: float
    dyhat_l: np.ndarray
    quadratic: float
    logdet_full: float
    logdet_unlabeled: float


def marginal_nll_and_grads(
    precision: PrecisionOperator,
    residual_l: np.ndarray,
    backend: EstimatorBackend,
    stream: int = 0,
) -> NLLResult:
    """Evaluate the marginal NLL for residuals ``r_L = y_L - yhat_L``.

    The vector ``u = Gamma_UU^-1 Gamma_UL r_L`` is solved once and reused
    in the quadratic term, in ``Gbar r`` and in every derivative contraction
    ``r^T dGamma_LL r - 2 r^T dGamma_LU u + u^T dGamma_UU u``.

    Args:
        precision: Gamma with the step's labeled/unlabeled partition
        residual_l: Residuals on the labeled vertices, in partition order
        backend: Solves, log-determinants and traces
        stream: Probe stream shared by every estimator in this evaluation

    Raises:
        ValidationError: If the labeled set is empty or shapes disagree
        NumericalError: If the loss is not finite
    """
    partition = precision.require_partition()
    labeled, unlabeled = partition.labeled, partition.unlabeled
    r = np.asarray(residual_l, dtype=np.float64).reshape(-1)
    if labeled.size == 0:
        raise ValidationError(
            error_code="EMPTY_LABELED_SET",
            message="The marginal likelihood needs at least one labeled vertex",
        )
    if r.size != labeled.size:
        raise ValidationError(
            error_code="RESIDUAL_SHAPE_MISMATCH",
            message="Residual length must equal the labeled set size",
            details={"residual": int(r.size), "labeled": int(labeled.size)},
        )

    coupling = precision.apply_block(unlabeled, labeled, r)
    u = backend.solve(precision, unlabeled, coupling)
    marginal_r = precision.apply_block(labeled, labeled, r) - precision.apply_block(labeled, unlabeled, u)
    quadratic = float(r @ marginal_r)

    all_vertices = np.arange(precision.dimension, dtype=np.int64)
    logdet_full = backend.logdet(precision, all_vertices, stream)
    logdet_unlabeled = backend.logdet(precision, unlabeled, stream)
    trace_full = backend.trace_inverse_derivatives(precision, all_vertices, stream)
    trace_unlabeled = backend.trace_inverse_derivatives(precision, unlabeled, stream)

    grads = np.zeros(len(precision.channels))
    for idx, channel in enumerate(precision.channels):
        quad_grad = float(r @ precision.apply_derivative(channel, labeled, labeled, r))
        quad_grad -= 2.0 * float(r @ precision.apply_derivative(channel, labeled, unlabeled, u))
        quad_grad += float(u @ precision.apply_derivative(channel, unlabeled, unlabeled, u))
        grads[idx] = quad_grad - trace_full[idx] + trace_unlabeled[idx]

    loss = quadratic - logdet_full + logdet_unlabeled
    if not np.isfinite(loss) or not np.all(np.isfinite(grads)):
        raise NumericalError(
            message="Marginal likelihood is not finite",
            details={"loss": float(loss), "params": precision.params.model_dump()},
        )

    return NLLResult(
        loss=float(loss),
        dalphas=grads[:-1],
        dbeta=float(grads[-1]),
        dyhat_l=-2.0 * marginal_r,
        quadratic=quadratic,
        logdet_full=float(logdet_full),
        logdet_unlabeled=float(logdet_unlabeled),
    )
