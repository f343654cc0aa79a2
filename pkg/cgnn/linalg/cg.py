"""Conjugate gradients on matrix-free symmetric operators."""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from cgnn.exceptions import NumericalError
from cgnn.logging_config import setup_logger
from cgnn.schemas.estimator import EstimatorConfig

logger = setup_logger(__name__)


@dataclass
class CGResult:
    """Outcome of a CG solve; for a block, the slowest column's iterations and residual."""

    solution: np.ndarray
    iterations: int
    residual: float
    converged: bool


def _column_dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("i...,i...->...", a, b)


def conjugate_gradient(
    apply: Callable[[np.ndarray], np.ndarray],
    rhs: np.ndarray,
    x0: Optional[np.ndarray] = None,
    cfg: Optional[EstimatorConfig] = None,
    tol: Optional[float] = None,
    max_iters: Optional[int] = None,
) -> CGResult:
    """Solve ``A x = rhs`` for symmetric positive semi-definite ``A``.

    ``rhs`` is a vector or an ``(n, T)`` block; block columns are independent
    systems advanced in lockstep, and ``apply`` receives the same shape. A
    column stops when ``||A x - b|| / ||b|| <= tol``. Hitting ``max_iters``
    is not an error: the result carries ``converged=False`` and the largest
    column residual. Started from zero on a singular consistent system,
    iterates stay in the range of ``A`` and converge to the minimal-norm
    solution.

    Args:
        apply: Matrix-vector (or matrix-block) product of ``A``
        rhs: Right-hand side vector or block
        x0: Initial guess, zero when omitted
        cfg: Supplies ``cg_tolerance`` and ``cg_max_iters`` defaults
        tol: Overrides the relative residual tolerance
        max_iters: Overrides the iteration cap

    Raises:
        NumericalError: If the rhs or an iterate is NaN/Inf
    """
    cfg = cfg or EstimatorConfig()
    tol = cfg.cg_tolerance if tol is None else tol
    max_iters = cfg.cg_max_iters if max_iters is None else max_iters

    b = np.asarray(rhs, dtype=np.float64)
    if not np.all(np.isfinite(b)):
        raise NumericalError(message="CG right-hand side is not finite")
    if b.size == 0:
        return CGResult(np.zeros_like(b), 0, 0.0, True)

    b_norm = np.sqrt(_column_dot(b, b))
    if not np.any(b_norm > 0.0):
        return CGResult(np.zeros_like(b), 0, 0.0, True)
    # zero columns start converged at x = 0
    scale = np.where(b_norm > 0.0, b_norm, 1.0)

    if x0 is None:
        x = np.zeros_like(b)
        r = b.copy()
    else:
        x = np.array(x0, dtype=np.float64, copy=True)
        r = b - apply(x)

    p = r.copy()
    rs_old = _column_dot(r, r)
    residual = np.sqrt(rs_old) / scale
    active = residual > tol
    iterations = 0

    while np.any(active) and iterations < max_iters:
        ap = apply(p)
        curvature = _column_dot(p, ap)
        if not np.all(np.isfinite(curvature)):
            raise NumericalError(
                message="CG encountered a non-finite value",
                details={"iteration": iterations},
            )
        # Search direction in the nullspace; nothing more to gain.
        active = active & (curvature > 0.0)
        if not np.any(active):
            break
        step = np.where(active, rs_old / np.where(active, curvature, 1.0), 0.0)
        x += step * p
        r -= step * ap
        rs_new = _column_dot(r, r)
        iterations += 1
        residual = np.where(active, np.sqrt(rs_new) / scale, residual)
        ratio = np.where(active, rs_new / np.where(rs_old > 0.0, rs_old, 1.0), 0.0)
        p = r + ratio * p
        rs_old = rs_new
        active = active & (residual > tol)

    if not np.all(np.isfinite(x)):
        raise NumericalError(
            message="CG produced a non-finite solution",
            details={"iteration": iterations},
        )

    worst = float(np.max(residual))
    converged = bool(np.all(residual <= tol))
    if not converged:
        logger.warning(
            f"CG did not converge: iterations={iterations}, "
            f"relative_residual={worst:.3e}, tol={tol:.1e}"
        )
    return CGResult(x, iterations, worst, converged)
