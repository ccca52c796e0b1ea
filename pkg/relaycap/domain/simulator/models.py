"""Modelos de dominio del simulador en tándem.

Colas fluidas (bits reales), una extracción de fading por bloque y enlace.
"""

from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from relaycap.core.exceptions import DomainException

from ..lmgf.models import LinkParams


class QueueSelector(str, Enum):
    """Cola sobre la que se mide el decaimiento."""

    SOURCE = "source"
    RELAY = "relay"


class SimConfig(BaseModel):
    """Parámetros de una réplica.

    Attributes:
        link1 (LinkParams): Enlace S–H.
        link2 (Optional[LinkParams]): Enlace H–D; None = modo de cola única.
        arrival_rate (float): R en bits por bloque.
        num_blocks (int): Bloques simulados.
        seed (int): Semilla explícita.
        thresholds (Tuple[float, ...]): Umbrales q en bits, estrictamente ascendentes.
        warmup_blocks (int): Bloques iniciales que no cuentan.
    """

    model_config = ConfigDict(frozen=True)

    link1: LinkParams
    link2: Optional[LinkParams] = None
    arrival_rate: float = Field(..., gt=0, allow_inf_nan=False)
    num_blocks: int = Field(..., gt=0)
    seed: int = Field(..., ge=0, lt=2**64)
    thresholds: Tuple[float, ...] = Field(..., min_length=1)
    warmup_blocks: int = Field(default=0, ge=0)

    @field_validator("thresholds")
    @classmethod
    def validate_thresholds(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        """Los umbrales deben ser positivos y estrictamente ascendentes."""
        if v[0] <= 0:
            raise ValueError("Los umbrales deben ser > 0")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("Los umbrales deben ser estrictamente ascendentes")
        return v

    @model_validator(mode="after")
    def validate_warmup(self) -> "SimConfig":
        if self.warmup_blocks >= self.num_blocks:
            raise ValueError("warmup_blocks debe ser < num_blocks")
        return self

    @property
    def single_queue(self) -> bool:
        return self.link2 is None


class QueueStats(BaseModel):
    """Estadísticas empíricas de una cola tras el warmup.

    Attributes:
        thresholds (Tuple[float, ...]): Umbrales q.
        probabilities (Tuple[float, ...]): P̂(Q > q), no creciente en q.
        mean_length (float): Longitud media en bits.
        max_length (float): Mayor longitud observada.
        departure_rate (float): Bits servidos por bloque.
    """

    model_config = ConfigDict(frozen=True)

    thresholds: Tuple[float, ...]
    probabilities: Tuple[float, ...]
    mean_length: float = Field(..., ge=0)
    max_length: float = Field(..., ge=0)
    departure_rate: float = Field(..., ge=0)


class SimResult(BaseModel):
    """Resultado de una réplica.

    Attributes:
        source (QueueStats): Cola de la fuente.
        relay (Optional[QueueStats]): Cola del relay (None en modo de cola única).
        arrival_rate (float): R usada.
        counted_blocks (int): Bloques tras el warmup.
        seed (int): Semilla de la réplica.
        stable (bool): False si R o la carga del relay superan la capacidad ergódica.
    """

    model_config = ConfigDict(frozen=True)

    source: QueueStats
    relay: Optional[QueueStats] = None
    arrival_rate: float
    counted_blocks: int
    seed: int
    stable: bool = True

    def queue(self, selector: QueueSelector) -> QueueStats:
        """Estadísticas de la cola seleccionada."""
        if selector == QueueSelector.RELAY:
            if self.relay is None:
                raise DomainException("La simulación es de cola única: no hay relay")
            return self.relay
        return self.source


class DecayEstimate(BaseModel):
    """Pendiente ajustada de log P̂(Q > q) frente a q (ya negada)."""

    model_config = ConfigDict(frozen=True)

    slope: float
    stderr: float = Field(..., ge=0)
    usable_points: int = Field(..., ge=0)
