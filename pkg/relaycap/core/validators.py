"""Validadores comunes de precondiciones numéricas.

Lanzan DomainException si algo no es válido.
"""

import math

from .exceptions import DomainException


def require_finite(name: str, value: float) -> None:
    """Valida que un valor sea finito (ni NaN ni ±∞)."""
    if not math.isfinite(value):
        raise DomainException(f"{name} debe ser finito", **{name: value})


def require_positive(name: str, value: float, allow_inf: bool = False) -> None:
    """Valida que un valor sea estrictamente positivo.

    Args:
        name (str): Nombre del parámetro (aparece en el mensaje).
        value (float): Valor a validar.
        allow_inf (bool): Si es True, +∞ se acepta.

    Raises:
        DomainException: Si el valor es NaN, <= 0 o infinito sin permitirlo.

    Ejemplo:
        require_positive("theta", 0.01)  # OK
        require_positive("rate", 0.0)  # Error
    """
    if math.isnan(value) or value <= 0:
        raise DomainException(f"{name} debe ser > 0", **{name: value})
    if math.isinf(value) and not allow_inf:
        raise DomainException(f"{name} debe ser finito", **{name: value})


def require_nonnegative(name: str, value: float) -> None:
    """Valida que un valor sea >= 0 y finito."""
    if math.isnan(value) or value < 0:
        raise DomainException(f"{name} debe ser >= 0", **{name: value})
    require_finite(name, value)
