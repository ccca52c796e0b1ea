"""
Fixtures y configuración compartida para todos los tests.

Este archivo contiene:
- Enlaces con los parámetros de referencia (T = 2 ms, B = 10⁵ Hz, Rayleigh)
- Enlaces deterministas con servicio c exacto por bloque
- Enlaces con fading discreto
- Utilidades de testing
"""

import math

import pytest

from relaycap.domain.fading.models import ConstantFading, DiscreteFading, RayleighFading
from relaycap.domain.lmgf import service as lmgf_service
from relaycap.domain.lmgf.models import LinkParams, QosPair
from relaycap.domain.solver import service as solver_service

# T·B de los enlaces por defecto
TB = 200.0


def constant_link(bits: float) -> LinkParams:
    """Enlace sin fading que sirve exactamente `bits` por bloque."""
    return LinkParams(snr=2.0 ** (bits / TB) - 1.0, fading=ConstantFading(z0=1.0))


@pytest.fixture(autouse=True)
def clear_caches():
    """Cada test arranca con las cachés de LMGF y del solver vacías"""
    yield
    lmgf_service.clear_caches()
    solver_service.clear_caches()


# =============================================================================
# FIXTURES DE ENLACES RAYLEIGH
# =============================================================================


@pytest.fixture
def source_link() -> LinkParams:
    """Enlace S-H de referencia: SNR 0 dB, Rayleigh(1)"""
    return LinkParams.from_db(0.0, fading=RayleighFading(mean=1.0))


@pytest.fixture
def relay_link() -> LinkParams:
    """Enlace H-D de referencia: SNR 10 dB, Rayleigh(1)"""
    return LinkParams.from_db(10.0, fading=RayleighFading(mean=1.0))


@pytest.fixture
def reference_qos() -> QosPair:
    """θ₁ = θ₂ = 0.01"""
    return QosPair(theta1=0.01, theta2=0.01)


# =============================================================================
# FIXTURES DE ENLACES DETERMINISTAS
# =============================================================================


@pytest.fixture
def link_200() -> LinkParams:
    """Servicio constante de 200 bits por bloque"""
    return constant_link(200.0)


@pytest.fixture
def link_300() -> LinkParams:
    """Servicio constante de 300 bits por bloque"""
    return constant_link(300.0)


@pytest.fixture
def link_150() -> LinkParams:
    """Servicio constante de 150 bits por bloque"""
    return constant_link(150.0)


@pytest.fixture
def link_100() -> LinkParams:
    """Servicio constante de 100 bits por bloque"""
    return constant_link(100.0)


# =============================================================================
# FIXTURES DE FADING DISCRETO
# =============================================================================


@pytest.fixture
def on_off_link() -> LinkParams:
    """Servicio 0 o 200 bits con probabilidad 1/2 (snr = 1)"""
    return LinkParams(snr=1.0, fading=DiscreteFading(atoms=((0.0, 0.5), (1.0, 0.5))))


@pytest.fixture
def two_level_link() -> LinkParams:
    """Servicio 200·log₂(1.5) o 200·log₂(2.5) con probabilidad 1/2"""
    return LinkParams(snr=1.0, fading=DiscreteFading(atoms=((0.5, 0.5), (1.5, 0.5))))


def two_level_lmgf(theta: float) -> float:
    """Λ(θ) cerrada del enlace two_level_link."""
    c_lo = TB * math.log2(1.5)
    c_hi = TB * math.log2(2.5)
    return math.log(0.5 * math.exp(theta * c_lo) + 0.5 * math.exp(theta * c_hi))
