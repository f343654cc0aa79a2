"""Lanczos tridiagonalization and the small tridiagonal eigensolve."""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal

from cgnn.config import get_settings
from cgnn.exceptions import NumericalError, ValidationError
from cgnn.logging_config import setup_logger

settings = get_settings()
logger = setup_logger(__name__)


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Symmetric tridiagonal matrix stored as its diagonals."""

    diag: np.ndarray
    offdiag: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=np.float64).reshape(-1)
        offdiag = np.asarray(self.offdiag, dtype=np.float64).reshape(-1)
        if diag.size < 1 or offdiag.size != diag.size - 1:
            raise ValidationError(
                error_code="INVALID_TRIDIAGONAL",
                message="Tridiagonal matrix needs k >= 1 diagonal and k - 1 off-diagonal entries",
                details={"diag": int(diag.size), "offdiag": int(offdiag.size)},
            )
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", offdiag)

    @property
    def size(self) -> int:
        return int(self.diag.size)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


def lanczos_tridiagonalize(
    apply: Callable[[np.ndarray], np.ndarray],
    v0: np.ndarray,
    k: int,
    breakdown_tol: float = settings.lanczos_breakdown_tol,
) -> TridiagonalMatrix:
    """Run up to ``k`` Lanczos steps from ``v0`` with full reorthogonalization.

    Stops early (lucky breakdown) when the next off-diagonal falls below
    ``breakdown_tol`` times a running estimate of the operator norm; the
    returned matrix is then smaller than ``k``. Steps never exceed the
    dimension of ``v0``.
    """
    v = np.asarray(v0, dtype=np.float64).reshape(-1, 1)
    return lanczos_tridiagonalize_block(lambda block: apply(block[:, 0])[:, None], v, k, breakdown_tol)[0]


def lanczos_tridiagonalize_block(
    apply: Callable[[np.ndarray], np.ndarray],
    v0: np.ndarray,
    k: int,
    breakdown_tol: float = settings.lanczos_breakdown_tol,
) -> list[TridiagonalMatrix]:
    """Independent Lanczos runs from every column of ``v0``, advanced in lockstep.

    ``apply`` maps an ``(n, T)`` block to the operator applied to each column.
    A column that breaks down is zeroed and stops contributing, so its
    tridiagonal matrix comes back shorter than the others.
    """
    v = np.asarray(v0, dtype=np.float64)
    if v.ndim != 2:
        raise ValidationError(message="Block Lanczos needs an (n, T) start block")
    n, width = v.shape
    norms = np.linalg.norm(v, axis=0)
    if n == 0 or width == 0 or np.any(norms == 0.0):
        raise ValidationError(
            error_code="ZERO_START_VECTOR",
            message="Lanczos needs a nonzero starting vector",
        )

    steps = min(int(k), n)
    basis = np.zeros((steps, n, width))
    basis[0] = v / norms
    alphas = np.zeros((steps, width))
    betas = np.zeros((steps, width))
    lengths = np.full(width, steps)
    active = np.ones(width, dtype=bool)
    norm_estimate = np.zeros(width)

    for j in range(steps):
        w = apply(basis[j])
        a = np.einsum("nt,nt->t", basis[j], w)
        w = w - a * basis[j]
        if j > 0:
            w = w - betas[j - 1] * basis[j - 1]
        # Two passes of Gram-Schmidt keep the basis orthonormal to roundoff.
        for _ in range(2):
            w = w - np.einsum("jnt,jt->nt", basis[: j + 1], np.einsum("jnt,nt->jt", basis[: j + 1], w))
        alphas[j] = np.where(active, a, 0.0)

        if not np.all(np.isfinite(a)) or not np.all(np.isfinite(w)):
            raise NumericalError(
                message="Lanczos encountered a non-finite value",
                details={"step": j},
            )

        prev_beta = betas[j - 1] if j > 0 else 0.0
        norm_estimate = np.maximum(norm_estimate, np.abs(a) + prev_beta)
        if j == steps - 1:
            break

        b = np.linalg.norm(w, axis=0)
        broke = active & (b <= breakdown_tol * np.maximum(norm_estimate, 1e-300))
        if np.any(broke):
            logger.debug(f"Lanczos breakdown in {int(broke.sum())} column(s) at step {j + 1} of {steps}")
            lengths[broke] = j + 1
            active &= ~broke
            if not np.any(active):
                break
        betas[j] = np.where(active, b, 0.0)
        basis[j + 1] = np.where(active, w / np.where(active, b, 1.0), 0.0)

    return [
        TridiagonalMatrix(alphas[: lengths[t], t], betas[: lengths[t] - 1, t])
        for t in range(width)
    ]


def tridiag_eig(t: TridiagonalMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and first components of the eigenvectors."""
    if t.size == 1:
        return t.diag.copy(), np.ones(1)
    eigenvalues, eigenvectors = eigh_tridiagonal(t.diag, t.offdiag)
    return eigenvalues, eigenvectors[0].copy()
