"""Stochastic trace and log-determinant estimators.

Probe ``t`` of stream ``s`` is a standard Gaussian vector drawn from
``default_rng([seed, s, t, dim])``, so every probe is reproducible on its own.
Probes are processed in fixed blocks whose width depends only on the probe
count, the Lanczos depth, the dimension and the block settings. Blocks run
sequentially or on joblib threads and per-probe values are summed in probe
order, so both schedules give identical estimates.
"""

from typing import Callable, Optional, Sequence, Union

import numpy as np
from joblib import Parallel, delayed

from cgnn.config import get_settings
from cgnn.exceptions import NotPositiveDefiniteError, ValidationError
from cgnn.linalg.lanczos import lanczos_tridiagonalize_block, tridiag_eig
from cgnn.models.params import CorrelationParams
from cgnn.schemas.estimator import EstimatorConfig

settings = get_settings()

Apply = Callable[[np.ndarray], np.ndarray]


def probe_vector(seed: int, stream: int, index: int, dim: int) -> np.ndarray:
    rng = np.random.default_rng([seed, stream, index, dim])
    return rng.standard_normal(dim)


def probe_blocks(cfg: EstimatorConfig, dim: int) -> list[np.ndarray]:
    """Consecutive probe indices, ``probe_block_size`` per block.

    Blocks shrink when their Lanczos bases would hold more than
    ``probe_block_floats`` values.
    """
    per_probe = max(cfg.lanczos_steps, 1) * max(dim, 1)
    width = int(max(1, min(cfg.probes, settings.probe_block_size, settings.probe_block_floats // per_probe)))
    return [np.arange(start, min(start + width, cfg.probes)) for start in range(0, cfg.probes, width)]


def probe_block(cfg: EstimatorConfig, stream: int, indices: np.ndarray, dim: int) -> np.ndarray:
    """``(dim, len(indices))`` block whose columns are the indexed probes."""
    return np.column_stack([probe_vector(cfg.seed, stream, int(t), dim) for t in indices])


def _run_blocks(per_block: Callable[[np.ndarray], list], blocks: list[np.ndarray], cfg: EstimatorConfig) -> list:
    if cfg.n_jobs > 1 and len(blocks) > 1:
        results = Parallel(n_jobs=cfg.n_jobs, prefer="threads")(delayed(per_block)(b) for b in blocks)
    else:
        results = [per_block(b) for b in blocks]
    return [value for block in results for value in block]


def hutchinson_traces(
    solve_a: Apply,
    apply_bs: Sequence[Apply],
    dim: int,
    cfg: EstimatorConfig,
    stream: int = 0,
) -> np.ndarray:
    """Estimate ``tr(A^-1 B_j)`` for several ``B_j`` with one solve per probe.

    ``solve_a`` and every ``apply_b`` receive ``(dim, width)`` probe blocks.
    """
    if dim == 0:
        return np.zeros(len(apply_bs))

    def per_block(indices: np.ndarray) -> list[np.ndarray]:
        z = probe_block(cfg, stream, indices, dim)
        solved = solve_a(z)
        products = np.array([np.einsum("nt,nt->t", solved, apply_b(z)) for apply_b in apply_bs])
        return list(products.T)

    samples = _run_blocks(per_block, probe_blocks(cfg, dim), cfg)
    total = np.zeros(len(apply_bs))
    for sample in samples:
        total += sample
    return total / cfg.probes


def hutchinson_trace(
    solve_a: Apply,
    apply_b: Apply,
    dim: int,
    cfg: EstimatorConfig,
    stream: int = 0,
) -> float:
    """Unbiased estimate ``(1/T) sum_t (A^-1 z_t)^T (B z_t)`` of ``tr(A^-1 B)``."""
    return float(hutchinson_traces(solve_a, [apply_b], dim, cfg, stream)[0])


def slq_logdet(
    apply: Apply,
    dim: int,
    cfg: EstimatorConfig,
    stream: int = 0,
) -> float:
    """Stochastic Lanczos quadrature estimate of ``log det A`` for SPD ``A``.

    Lanczos runs on the unit probes ``z / ||z||``, a block of them at a time
    through ``apply``; each probe's quadrature sum is scaled by ``dim`` or by
    ``||z||^2`` depending on ``cfg.probe_scaling``.

    Raises:
        NotPositiveDefiniteError: If a quadrature node is not positive
    """
    if dim == 0:
        return 0.0

    def per_block(indices: np.ndarray) -> list[float]:
        z = probe_block(cfg, stream, indices, dim)
        values = []
        for t, tri, column in zip(indices, lanczos_tridiagonalize_block(apply, z, cfg.lanczos_steps), z.T):
            nodes, first = tridiag_eig(tri)
            if np.any(nodes <= 0.0):
                raise NotPositiveDefiniteError(
                    message="Quadrature node is not positive",
                    details={"probe": int(t), "min_node": float(nodes.min())},
                )
            scale = float(dim) if cfg.probe_scaling == "dimension" else float(column @ column)
            values.append(scale * float(np.sum(first**2 * np.log(nodes))))
        return values

    samples = _run_blocks(per_block, probe_blocks(cfg, dim), cfg)
    total = 0.0
    for sample in samples:
        total += sample
    return total / cfg.probes


def condition_bound(params: Union[CorrelationParams, float]) -> float:
    """Upper bound ``(1 + a) / (1 - a)`` on the condition number of Gamma and Gamma_UU."""
    if isinstance(params, CorrelationParams):
        a = params.max_abs_alpha
    else:
        a = abs(float(params))
    if not a < 1.0:
        raise ValidationError(
            error_code="ALPHA_OUT_OF_RANGE",
            message="Condition bound requires max |alpha| < 1",
            details={"max_abs_alpha": a},
        )
    return (1.0 + a) / (1.0 - a)


def cg_iteration_budget(params: Union[CorrelationParams, float], c: float = 10.0, c0: float = 20.0) -> int:
    """Iteration budget ``c * sqrt(kappa) + c0`` implied by the condition bound."""
    return int(np.ceil(c * np.sqrt(condition_bound(params)) + c0))


def standard_error(samples: Optional[Sequence[float]]) -> float:
    values = np.asarray(samples if samples is not None else [], dtype=np.float64)
    if values.size < 2:
        return float("nan")
    return float(values.std(ddof=1) / np.sqrt(values.size))
