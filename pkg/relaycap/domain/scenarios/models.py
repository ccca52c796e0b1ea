"""Modelos de escenario.

Valores por defecto: T = 2 ms, B = 10⁵ Hz, θ₁ = θ₂ = 0.01, SNR₁ = 0 dB, SNR₂ = 10 dB,
fading Rayleigh de media 1.
"""

from typing import Literal, Optional, Tuple

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationInfo,
    field_validator,
    model_validator,
)

from ..fading.models import FadingDistribution, RayleighFading
from ..lmgf.models import LinkParams, QosPair

SweepVariable = Literal["theta2", "snr2_db", "theta"]


class LinkSpec(BaseModel):
    """Un salto tal como se describe en el escenario (SNR en dB)."""

    model_config = ConfigDict(frozen=True)

    snr_db: float = Field(..., allow_inf_nan=False)
    block_s: float = Field(default=0.002, gt=0, allow_inf_nan=False)
    bandwidth_hz: float = Field(default=1e5, gt=0, allow_inf_nan=False)
    fading: FadingDistribution = Field(default_factory=RayleighFading)

    def to_link(self, snr_db: Optional[float] = None) -> LinkParams:
        """Enlace del dominio; snr_db sustituye a la SNR del escenario (barridos)."""
        return LinkParams.from_db(
            self.snr_db if snr_db is None else snr_db,
            block_s=self.block_s,
            bandwidth_hz=self.bandwidth_hz,
            fading=self.fading,
        )


class SweepSpec(BaseModel):
    """Barrido VAR:LO:HI:N:log|lin.

    Attributes:
        variable (SweepVariable): theta2, snr2_db o theta (curvas).
        lo (float): Extremo inferior.
        hi (float): Extremo superior (>= lo; igual solo con un punto).
        points (int): Número de puntos.
        spacing (str): "log" o "lin".
    """

    model_config = ConfigDict(frozen=True)

    variable: SweepVariable
    lo: float = Field(..., allow_inf_nan=False)
    hi: float = Field(..., allow_inf_nan=False)
    points: int = Field(..., ge=1)
    spacing: Literal["log", "lin"] = "log"

    @model_validator(mode="after")
    def validate_range(self) -> "SweepSpec":
        if self.hi < self.lo or (self.points > 1 and self.hi == self.lo):
            raise ValueError("El rango del barrido debe ser ascendente")
        if self.variable != "snr2_db" and self.lo <= 0:
            raise ValueError("Los barridos de θ deben ser positivos")
        if self.spacing == "log" and self.lo <= 0:
            raise ValueError("El espaciado log necesita lo > 0")
        return self

    def grid(self) -> np.ndarray:
        """Puntos del barrido en orden ascendente."""
        if self.points == 1:
            return np.array([self.lo])
        if self.spacing == "log":
            return np.geomspace(self.lo, self.hi, self.points)
        return np.linspace(self.lo, self.hi, self.points)


class SimulationSpec(BaseModel):
    """Bloque de simulación del escenario.

    Attributes:
        rate_frac (float): R como fracción de r_e (o de la capacidad efectiva de la
            fuente en modo de cola única).
        blocks (int): Bloques por réplica.
        seed (int): Semilla de la primera réplica.
        thresholds (Optional[Tuple[float, ...]]): Umbrales; None = por defecto.
        warmup (Optional[int]): Bloques de warmup; None = sim_warmup_fraction.
        replications (int): Réplicas independientes.
        single_queue (bool): Desactiva el enlace H–D.
    """

    model_config = ConfigDict(frozen=True)

    rate_frac: float = Field(default=0.999, gt=0, allow_inf_nan=False)
    blocks: int = Field(default=10**6, gt=0)
    seed: int = Field(default=0, ge=0)
    thresholds: Optional[Tuple[float, ...]] = None
    warmup: Optional[int] = Field(default=None, ge=0)
    replications: int = Field(default=1, ge=1)
    single_queue: bool = False

    @field_validator("thresholds")
    @classmethod
    def validate_thresholds(cls, v: Optional[Tuple[float, ...]]) -> Optional[Tuple[float, ...]]:
        """Umbrales positivos y estrictamente ascendentes."""
        if v is None:
            return v
        if not v or v[0] <= 0 or any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("Los umbrales deben ser positivos y estrictamente ascendentes")
        return v

    @field_validator("warmup")
    @classmethod
    def validate_warmup(cls, v: Optional[int], info: ValidationInfo) -> Optional[int]:
        """El warmup debe dejar bloques que contar."""
        blocks = info.data.get("blocks")
        if v is not None and blocks is not None and v >= blocks:
            raise ValueError(f"warmup debe ser < blocks ({blocks})")
        return v


class Scenario(BaseModel):
    """Escenario completo tras combinar archivo y flags."""

    model_config = ConfigDict(frozen=True)

    link1: LinkSpec = Field(default_factory=lambda: LinkSpec(snr_db=0.0))
    link2: LinkSpec = Field(default_factory=lambda: LinkSpec(snr_db=10.0))
    theta1: float = Field(default=0.01, gt=0, allow_inf_nan=False)
    theta2: float = Field(default=0.01, gt=0, allow_inf_nan=False)
    sweep: Optional[SweepSpec] = None
    simulation: SimulationSpec = Field(default_factory=SimulationSpec)
    output_format: Literal["csv", "json"] = "csv"
    tol: Optional[float] = Field(default=None, gt=0, lt=1)

    @property
    def qos(self) -> QosPair:
        return QosPair(theta1=self.theta1, theta2=self.theta2)
