"""Modelos de dominio para enlaces y exigencias de QoS.

Unidades: tasas y colas en bits (por bloque), exponentes θ en 1/bits.
"""

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from relaycap.core.units import db_to_linear

from ..fading.models import FadingDistribution, RayleighFading

LN2 = math.log(2.0)


class LinkParams(BaseModel):
    """Un salto del enlace (S–H o H–D).

    El servicio por bloque es la capacidad de Shannon instantánea:
    c(z) = T·B·log₂(1 + snr·z), no negativa para todo z >= 0.

    Attributes:
        snr (float): SNR lineal (> 0).
        block_s (float): Duración T del bloque en segundos (> 0).
        bandwidth_hz (float): Ancho de banda B en Hz (> 0).
        fading (FadingDistribution): Ley de la ganancia de potencia.
    """

    model_config = ConfigDict(frozen=True)

    snr: float = Field(..., gt=0, allow_inf_nan=False)
    block_s: float = Field(default=0.002, gt=0, allow_inf_nan=False)
    bandwidth_hz: float = Field(default=1e5, gt=0, allow_inf_nan=False)
    fading: FadingDistribution = Field(default_factory=RayleighFading)

    @classmethod
    def from_db(cls, snr_db: float, **kwargs) -> "LinkParams":
        """Crea el enlace a partir de la SNR en dB."""
        return cls(snr=db_to_linear(snr_db), **kwargs)

    @property
    def tb(self) -> float:
        """Símbolos por bloque T·B."""
        return self.block_s * self.bandwidth_hz

    def service_bits(self, z):
        """Servicio por bloque c(z) en bits (acepta arrays)."""
        return self.tb * np.log1p(self.snr * np.asarray(z)) / LN2


class QosPair(BaseModel):
    """Exponentes de QoS de la fuente (θ₁) y del relay (θ₂), en 1/bits."""

    model_config = ConfigDict(frozen=True)

    theta1: float = Field(..., gt=0, allow_inf_nan=False)
    theta2: float = Field(..., gt=0, allow_inf_nan=False)
