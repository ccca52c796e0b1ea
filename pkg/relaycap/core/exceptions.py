"""Excepciones propias de relaycap.

Cada excepción lleva el código de salida que usa el CLI.
"""

from typing import Any, Optional


class RelayCapException(Exception):
    """Excepción base del paquete.

    Todas las demás heredan de esta.
    """

    def __init__(self, message: str, exit_code: int = 1, details: Optional[Any] = None):
        self.message = message
        self.exit_code = exit_code
        self.details = details
        super().__init__(self.message)


class ConfigurationException(RelayCapException):
    """Escenario o flag inválido (exit 2).

    Ejemplo:
        raise ConfigurationException("snr1_db", "debe ser un número")
        # Mensaje: "Configuración inválida en 'snr1_db': debe ser un número"
    """

    def __init__(self, key: str, reason: str):
        self.key = key
        super().__init__(
            message=f"Configuración inválida en '{key}': {reason}", exit_code=2, details=key
        )


class DomainException(RelayCapException):
    """Violación de una precondición (exit 3).

    Ejemplo:
        raise DomainException("theta debe ser >= theta1", theta=0.005, theta1=0.01)
    """

    def __init__(self, message: str, **details):
        super().__init__(message=message, exit_code=3, details=details or None)


class NoSolutionException(RelayCapException):
    """La ecuación no tiene raíz en el dominio buscado (exit 3)."""

    def __init__(self, message: str, details: Optional[Any] = None):
        super().__init__(message=message, exit_code=3, details=details)


class InstabilityException(RelayCapException):
    """La cola del relay no es estable para la tasa pedida (exit 3)."""

    def __init__(self, message: str, details: Optional[Any] = None):
        super().__init__(message=message, exit_code=3, details=details)


class QuadratureException(RelayCapException):
    """La cuadratura no converge (exit 4).

    Attributes:
        partial (float): Mejor estimación disponible en el momento del fallo.
    """

    def __init__(self, message: str, partial: float, details: Optional[Any] = None):
        self.partial = partial
        super().__init__(message=message, exit_code=4, details=details)


class InsufficientDataException(RelayCapException):
    """No hay suficientes umbrales útiles para ajustar una pendiente (exit 5).

    Attributes:
        usable (int): Umbrales con probabilidad dentro de la ventana.
    """

    def __init__(self, usable: int, required: int):
        self.usable = usable
        self.required = required
        super().__init__(
            message=(
                f"Datos insuficientes para estimar el decaimiento: "
                f"{usable} umbrales útiles, se necesitan {required}"
            ),
            exit_code=5,
            details={"usable": usable, "required": required},
        )
