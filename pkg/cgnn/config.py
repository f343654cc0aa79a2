from functools import lru_cache
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="CGNN_",
        case_sensitive=False,
    )

    app_name: str = "Correlated GNN Regression"
    app_version: str = "1.0.0"

    log_level: str = "INFO"
    log_file: Optional[str] = None

    # Stochastic estimation
    probes: int = 128
    lanczos_steps: int = 32
    cg_tolerance: float = 1e-6
    cg_max_iters: int = 256
    lanczos_breakdown_tol: float = 1e-12
    probe_block_size: int = 16
    probe_block_floats: int = 1 << 25
    n_jobs: int = 1
    oracle_max_vertices: int = 500

    # Label propagation solves a possibly singular Laplacian block
    lp_cg_tolerance: float = 1e-8
    lp_cg_max_iters: int = 2000

    # Correlation parameters
    eta: float = 1e-3

    # Base regressors
    hidden_width: int = 16
    representation_dim: int = 8
    layers: int = 2

    # Training
    epochs: int = 75
    lr_theta: float = 1e-3
    lr_alpha_beta: float = 1.0
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    fine_tune_epochs: int = 25
    fine_tune_lr: float = 5e-4

    # Experiments
    repetitions: int = 10
    train_fraction: float = 0.6
    val_fraction: float = 0.2
    test_fraction: float = 0.2

    # Ising simulation
    ising_burn_in: int = 1000
    ising_sample_gap: int = 10
    ising_field_scale: float = 0.35
    ising_coupling: float = 0.1
    ising_coupling_scale: float = 4.0


@lru_cache
def get_settings() -> Settings:
    return Settings()
