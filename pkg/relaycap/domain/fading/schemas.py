"""Codec de texto para distribuciones de fading.

Formatos aceptados (config y CLI):
- ``rayleigh:<mean>``
- ``constant:<z0>``
- ``discrete:<z1>@<p1>,<z2>@<p2>,...``
"""

from pydantic import ValidationError

from relaycap.core.exceptions import ConfigurationException

from .models import ConstantFading, DiscreteFading, FadingDistribution, RayleighFading


def parse_fading(text: str, key: str = "fading") -> FadingDistribution:
    """Convierte un descriptor de texto en una distribución.

    Args:
        text (str): Descriptor, p. ej. "rayleigh:1" o "discrete:0.5@0.5,1.5@0.5".
        key (str): Nombre de la clave de configuración (para el mensaje de error).

    Returns:
        FadingDistribution: Distribución validada.

    Raises:
        ConfigurationException: Si el descriptor no es válido.
    """
    kind, sep, body = text.strip().partition(":")
    kind = kind.lower()
    if not sep or not body:
        raise ConfigurationException(key, f"descriptor '{text}' sin parámetros")

    try:
        if kind == "rayleigh":
            return RayleighFading(mean=float(body))
        if kind == "constant":
            return ConstantFading(z0=float(body))
        if kind == "discrete":
            atoms = []
            for item in body.split(","):
                z, at, p = item.partition("@")
                if not at:
                    raise ValueError(f"átomo '{item}' sin '@'")
                atoms.append((float(z), float(p)))
            return DiscreteFading(atoms=tuple(atoms))
    except (ValueError, ValidationError) as e:
        raise ConfigurationException(key, f"descriptor '{text}' inválido ({e})") from e

    raise ConfigurationException(
        key, f"tipo '{kind}' no válido. Válidos: rayleigh, constant, discrete"
    )


def _exact(x: float) -> str:
    # repr da el decimal más corto que vuelve al mismo float
    return repr(float(x))


def format_fading(dist: FadingDistribution) -> str:
    """Inversa exacta de parse_fading: parse_fading(format_fading(d)) == d."""
    if isinstance(dist, RayleighFading):
        return f"rayleigh:{_exact(dist.mean)}"
    if isinstance(dist, ConstantFading):
        return f"constant:{_exact(dist.z0)}"
    return "discrete:" + ",".join(f"{_exact(z)}@{_exact(p)}" for z, p in dist.atoms)
