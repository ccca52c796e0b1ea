"""Modelos de dominio para distribuciones de fading.

Las ganancias son siempre de potencia (z = |g|²), nunca amplitudes: el fading
Rayleigh corresponde a una z exponencial.
"""

import math
from typing import Annotated, Literal, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

PROBABILITY_SUM_TOL = 1e-12


class RayleighFading(BaseModel):
    """Fading Rayleigh: z ~ Exponencial(mean).

    Attributes:
        mean (float): E{z} (> 0).
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["rayleigh"] = "rayleigh"
    mean: float = Field(default=1.0, gt=0, allow_inf_nan=False)

    @property
    def min_gain(self) -> float:
        return 0.0

    @property
    def max_gain(self) -> float:
        return math.inf


class ConstantFading(BaseModel):
    """Canal sin fading: z = z0 con probabilidad 1."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["constant"] = "constant"
    z0: float = Field(..., ge=0, allow_inf_nan=False)

    @property
    def min_gain(self) -> float:
        return self.z0

    @property
    def max_gain(self) -> float:
        return self.z0


class DiscreteFading(BaseModel):
    """Ley discreta finita de la ganancia.

    Attributes:
        atoms (Tuple[Tuple[float, float], ...]): Pares (z_k, p_k) con z_k >= 0,
            p_k > 0 y Σ p_k = 1 (tolerancia 1e-12).
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["discrete"] = "discrete"
    atoms: Tuple[Tuple[float, float], ...] = Field(..., min_length=1)

    @field_validator("atoms")
    @classmethod
    def validate_atoms(cls, v):
        """Valida ganancias no negativas y probabilidades que suman 1."""
        for z, p in v:
            if not math.isfinite(z) or z < 0:
                raise ValueError(f"Ganancia inválida: {z}. Debe ser finita y >= 0")
            if not math.isfinite(p) or p <= 0:
                raise ValueError(f"Probabilidad inválida: {p}. Debe ser > 0")
        total = math.fsum(p for _, p in v)
        if abs(total - 1.0) > PROBABILITY_SUM_TOL:
            raise ValueError(f"Las probabilidades suman {total!r}, deben sumar 1")
        return v

    @property
    def gains(self) -> Tuple[float, ...]:
        return tuple(z for z, _ in self.atoms)

    @property
    def probabilities(self) -> Tuple[float, ...]:
        return tuple(p for _, p in self.atoms)

    @property
    def min_gain(self) -> float:
        return min(self.gains)

    @property
    def max_gain(self) -> float:
        return max(self.gains)


# Unión etiquetada por "kind"
FadingDistribution = Annotated[
    Union[RayleighFading, ConstantFading, DiscreteFading], Field(discriminator="kind")
]
