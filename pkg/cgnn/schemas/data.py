"""Schemas for synthetic data generation and vertex splits."""

from pydantic import BaseModel, ConfigDict, Field, model_validator

from cgnn.config import get_settings

settings = get_settings()


class IsingConfig(BaseModel):
    """Grid Ising model with uniform coupling and an XNOR external field.

    The field at vertex i is ``field_scale * x_1 * x_2`` where ``x`` are the
    vertex coordinates rescaled to [-1, 1]. Neighbouring spins interact with
    strength ``coupling * coupling_scale``; a scale of 1 gives the bare
    Hamiltonian, the default puts the +0.1 grid near its ordering point.
    """

    model_config = ConfigDict(frozen=True)

    rows: int = Field(default=35, ge=1)
    cols: int = Field(default=35, ge=1)
    coupling: float = Field(default=settings.ising_coupling)
    coupling_scale: float = Field(default=settings.ising_coupling_scale, ge=0.0)
    field_scale: float = Field(default=settings.ising_field_scale)
    burn_in: int = Field(default=settings.ising_burn_in, ge=1)
    sample_gap: int = Field(default=settings.ising_sample_gap, ge=1)
    seed: int = Field(default=0, ge=0)


class SplitConfig(BaseModel):
    """Random train/validation/test fractions."""

    model_config = ConfigDict(frozen=True)

    train: float = Field(default=settings.train_fraction, ge=0.0)
    val: float = Field(default=settings.val_fraction, ge=0.0)
    test: float = Field(default=settings.test_fraction, ge=0.0)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def check_total(self) -> "SplitConfig":
        total = self.train + self.val + self.test
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"Split fractions must sum to 1, got {total}")
        return self
