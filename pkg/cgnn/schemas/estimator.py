"""Configuration of the stochastic estimators."""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from cgnn.config import get_settings

settings = get_settings()


class EstimatorConfig(BaseModel):
    """Probe count, Krylov depth, CG stopping rule and seed.

    Identical configs (seed included) give bit-identical estimates when
    probes run sequentially.
    """

    model_config = ConfigDict(frozen=True)

    probes: int = Field(
        default=settings.probes,
        ge=1,
        description="Number of Gaussian probe vectors T",
    )
    lanczos_steps: int = Field(
        default=settings.lanczos_steps,
        ge=1,
        description="Lanczos steps k per probe",
    )
    cg_tolerance: float = Field(
        default=settings.cg_tolerance,
        gt=0.0,
        description="Relative residual at which CG stops",
    )
    cg_max_iters: int = Field(
        default=settings.cg_max_iters,
        ge=1,
        description="Iteration cap for CG",
    )
    seed: int = Field(default=0, ge=0, description="Root seed for all probes")
    probe_scaling: Literal["dimension", "norm"] = Field(
        default="dimension",
        description="Quadrature weight scaling: operator dimension or squared probe norm",
    )
    oracle_mode: bool = Field(
        default=False,
        description="Replace stochastic estimators by dense factorizations",
    )
    n_jobs: int = Field(
        default=settings.n_jobs,
        ge=1,
        description="Workers used to run probes concurrently",
    )
