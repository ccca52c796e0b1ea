"""Configuración global de relaycap.

Gestiona variables de entorno (prefijo ``RELAYCAP_``) y los valores por defecto de
tolerancias numéricas, simulación y logging.
"""

from typing import Tuple

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Configuración de la aplicación cargada desde variables de entorno."""

    model_config = SettingsConfigDict(
        env_prefix="RELAYCAP_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # ==================== Aplicación ====================
    app_name: str = "relaycap"

    # ==================== Numérica ====================
    # Tolerancia relativa de los problemas de raíz (θ̃, θ̂, θ*, θ'₂, θ̃₀)
    root_tol: float = Field(default=1e-9, gt=0, lt=1)
    # Tolerancia relativa de las cuadraturas
    quad_tol: float = Field(default=1e-10, gt=0, lt=1)
    # Tolerancia de las comprobaciones de continuidad entre casos
    continuity_tol: float = Field(default=1e-6, gt=0, lt=1)

    laguerre_nodes: int = Field(default=200, ge=8)
    quad_limit: int = Field(default=200, ge=50)  # Subintervalos máximos de scipy.quad

    # Bracket inicial [lo, hi] que se expande geométricamente
    bracket_lo: float = Field(default=1e-8, gt=0)
    bracket_hi: float = Field(default=1e-2, gt=0)
    bracket_cap: float = Field(default=1e4, gt=0)  # Mayor exponente θ explorado
    bisect_maxiter: int = Field(default=200, ge=60)

    # Por debajo de este θ se usa la rama analítica (capacidad ergódica)
    theta_zero_eps: float = Field(default=1e-12, gt=0)
    # Paso relativo de la diferencia central en la búsqueda de θ**
    derivative_step: float = Field(default=1e-6, gt=0)

    # ==================== Simulación ====================
    sim_chunk_blocks: int = Field(default=2**20, ge=1024)
    sim_threshold_count: int = Field(default=16, ge=4)
    # Umbrales en bits para T·B = 200; se reescalan con T·B/200
    sim_threshold_span: Tuple[float, float] = (5.0, 5000.0)
    sim_warmup_fraction: float = Field(default=0.01, ge=0, lt=1)
    sim_pass_margin: float = Field(default=0.9, gt=0, le=1)

    # Ventana de probabilidades usada en la regresión del decaimiento
    decay_window: Tuple[float, float] = (1e-5, 1e-1)
    decay_min_points: int = Field(default=4, ge=2)

    # 1 = secuencial; >1 reparte puntos de barrido y réplicas en procesos
    max_workers: int = Field(default=1, ge=1)

    # ==================== Logging ====================
    log_level: str = "INFO"
    log_format: str = "text"  # "text" | "json"
    log_to_file: bool = False
    log_directory: str = "logs"
    log_max_file_size_mb: int = 10
    log_backup_count: int = 5

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v: str) -> str:
        """Solo se aceptan los formatos text y json."""
        v = v.lower()
        if v not in ("text", "json"):
            raise ValueError(f"Formato de log inválido: {v}. Debe ser: text o json")
        return v

    @field_validator("sim_threshold_span", "decay_window")
    @classmethod
    def validate_interval(cls, v: Tuple[float, float]) -> Tuple[float, float]:
        """Los intervalos deben ser positivos y ascendentes."""
        lo, hi = v
        if not 0 < lo < hi:
            raise ValueError(f"Intervalo inválido: {v}. Debe cumplir 0 < lo < hi")
        return v


# Instancia global de configuración
settings = Settings()
