"""Service de LMGF del servicio por bloque y curvas derivadas.

Convenio de signo: Λ(θ) = log E{e^(θ·c)} con exponente positivo. La capacidad
efectiva de un enlace es −Λ(−θ)/θ y la LMGF de salida de la cola fuente compone
Λ(θ − θ̃) con el mismo convenio.
"""

import math
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from relaycap.config.settings import settings
from relaycap.core.exceptions import DomainException
from relaycap.core.validators import require_finite, require_nonnegative, require_positive

from ..fading.models import RayleighFading
from ..fading.service import expectation, log_expectation_exp, quadrature_key
from .models import LN2, LinkParams


def _integrand_hints(link: LinkParams, power: float) -> Tuple[Optional[float], Optional[float]]:
    """Pico y anchura de z ↦ power·ln(1+snr·z) − z/mean para fading Rayleigh.

    e^(θ·c) = (1+snr·z)^power con power = θ·T·B/ln 2.
    """
    if not isinstance(link.fading, RayleighFading):
        return None, None
    mean, snr = link.fading.mean, link.snr
    if power > 0:
        peak = power * mean - 1.0 / snr
        if peak > 0:
            return peak, mean * math.sqrt(power)
        return 0.0, mean
    return 0.0, 1.0 / (-power * snr + 1.0 / mean)


def service_lmgf(link: LinkParams, theta: float) -> float:
    """LMGF del servicio por bloque: Λ(θ) = log E_z{e^(θ·T·B·log₂(1+snr·z))}.

    Args:
        link (LinkParams): Enlace.
        theta (float): Exponente real finito.

    Returns:
        float: Λ(θ). Λ(0) = 0 exactamente; finito para todo θ real (el exponente
            crece como log z frente a la cola exponencial).
    """
    require_finite("theta", theta)
    if theta == 0.0:
        return 0.0
    return _service_lmgf(link, theta, quadrature_key())


@lru_cache(maxsize=65536)
def _service_lmgf(link: LinkParams, theta: float, _quadrature: Tuple[float, int, int]) -> float:
    power = theta * link.tb / LN2
    peak, width = _integrand_hints(link, power)
    snr = link.snr
    return log_expectation_exp(
        link.fading, lambda z: power * np.log1p(snr * z), peak=peak, width=width
    )


def ergodic_capacity(link: LinkParams) -> float:
    """Capacidad ergódica E_z{T·B·log₂(1+snr·z)} en bits por bloque."""
    return _ergodic_capacity(link, quadrature_key())


@lru_cache(maxsize=4096)
def _ergodic_capacity(link: LinkParams, _quadrature: Tuple[float, int, int]) -> float:
    return expectation(link.fading, link.service_bits)


def clear_caches():
    """Vacía las cachés de LMGF y capacidad ergódica."""
    _service_lmgf.cache_clear()
    _ergodic_capacity.cache_clear()


def delay_limited_capacity(link: LinkParams) -> float:
    """Límite θ → ∞ de la capacidad efectiva: T·B·log₂(1+snr·ess inf z).

    Es 0 para Rayleigh (la ganancia tiene masa cerca de cero).
    """
    return float(link.service_bits(link.fading.min_gain))


def peak_service(link: LinkParams) -> float:
    """Mayor servicio por bloque T·B·log₂(1+snr·ess sup z) (+∞ para Rayleigh)."""
    if math.isinf(link.fading.max_gain):
        return math.inf
    return float(link.service_bits(link.fading.max_gain))


def link_effective_capacity(link: LinkParams, theta: float) -> float:
    """Capacidad efectiva −Λ(−θ)/θ en bits por bloque.

    Aplicada al enlace H–D es la capacidad efectiva virtual E_C(θ).
    Decreciente en θ y creciente en snr; para θ < theta_zero_eps devuelve el
    límite ergódico sin dividir 0/0.

    Raises:
        DomainException: Si theta <= 0.
    """
    require_positive("theta", theta)
    if theta < settings.theta_zero_eps:
        return ergodic_capacity(link)
    return -service_lmgf(link, -theta) / theta


def virtual_effective_bandwidth(link1: LinkParams, theta: float, theta1: float) -> float:
    """Ancho de banda efectivo virtual E_B(θ − θ₁) del enlace S–H.

    E_B = (1 − θ₁/θ)·Λ_C(θ − θ₁)/(θ − θ₁), que se simplifica a Λ_C(θ − θ₁)/θ; en
    θ = θ₁ vale exactamente 0. No decreciente en θ y tiende al mayor servicio del
    enlace cuando θ → ∞.

    Raises:
        DomainException: Si theta < theta1 o theta1 <= 0.
    """
    require_positive("theta1", theta1)
    require_finite("theta", theta)
    if theta < theta1:
        raise DomainException("theta debe ser >= theta1", theta=theta, theta1=theta1)
    if theta == theta1:
        return 0.0
    return service_lmgf(link1, theta - theta1) / theta


def departure_lmgf(link1: LinkParams, rate: float, theta_tilde: float, theta: float) -> float:
    """LMGF del proceso de salida de la fuente (llegadas al relay).

    Λ_B(θ) = R·θ para 0 <= θ <= θ̃ y R·θ̃ + Λ_C(θ − θ̃) para θ > θ̃; continua en θ̃.
    Con θ̃ = +∞ (servicio determinista que nunca congestiona) solo existe la rama
    lineal.

    Raises:
        DomainException: Si theta < 0.
    """
    require_nonnegative("theta", theta)
    if theta <= theta_tilde:
        return rate * theta
    return rate * theta_tilde + service_lmgf(link1, theta - theta_tilde)


def relay_objective(link1: LinkParams, link2: LinkParams, theta1: float, theta: float) -> float:
    """Objetivo del caso θ₁ < θ₂: g(θ) = −(Λ_H(−θ) + Λ_C(θ − θ₁))/θ₁.

    Equivale a (θ/θ₁)·(E_C(θ) − E_B(θ − θ₁)); es cóncava en θ, vale E_C(θ₁) en
    θ = θ₁ y se anula en el cruce θ*.
    """
    return -(service_lmgf(link2, -theta) + service_lmgf(link1, theta - theta1)) / theta1


def normalize(bits_per_block: float, link: LinkParams) -> float:
    """Bits por bloque a bits/s/Hz (÷ T·B)."""
    return bits_per_block / link.tb
