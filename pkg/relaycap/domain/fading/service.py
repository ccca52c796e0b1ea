"""Service para distribuciones de fading.

Evalúa esperanzas E_z{f(z)} (forma cerrada para leyes finitas, cuadratura para
Rayleigh) y genera muestras i.i.d. reproducibles.

Para Rayleigh la regla principal es Gauss–Laguerre (el peso e^(−x) es el natural
para z exponencial); se contrasta con cuadratura adaptativa de scipy y solo se
acepta cuando ambas coinciden. Si no coinciden pero la adaptativa converge, gana
la adaptativa (integrandos muy picudos o con el pico lejos del origen).
"""

import math
from functools import lru_cache
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy import integrate
from scipy.special import logsumexp, roots_laguerre

from relaycap.config.settings import settings
from relaycap.core.exceptions import QuadratureException
from relaycap.core.logger import logger

from .models import ConstantFading, DiscreteFading, FadingDistribution, RayleighFading

# Función escalar o vectorizada de la ganancia z
GainFunction = Callable[[np.ndarray], np.ndarray]

# Tramo [0, TRUNCATION·mean] del contraste adaptativo; el resto va a [.., ∞)
TRUNCATION = 40.0
# Semiancho (en unidades de width) de la zona del pico
PEAK_HALF_WIDTH = 40.0


def quadrature_key() -> Tuple[float, int, int]:
    """Ajustes de cuadratura activos; entran en la clave de las cachés derivadas."""
    return settings.quad_tol, settings.quad_limit, settings.laguerre_nodes


@lru_cache(maxsize=8)
def _laguerre_rule(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodos y log-pesos de Gauss–Laguerre (se descartan pesos que dan underflow)."""
    x, w = roots_laguerre(nodes)
    keep = w > 0
    return x[keep], np.log(w[keep])


def _quad_segments(integrand: Callable[[float], float], segments: List[Tuple[float, float]]):
    """Integra por tramos con scipy.quad.

    Los tramos se integran en el orden dado (el de más masa primero); los
    siguientes solo necesitan precisión absoluta relativa a lo ya acumulado.
    Un aviso de quad en un tramo cuya masa (|valor| + error) es despreciable
    frente al total no invalida la integral.

    Returns:
        Tuple[float, float, bool]: (valor, error absoluto acumulado, convergió).
    """
    total, abserr = 0.0, 0.0
    flagged: List[float] = []
    for a, b in segments:
        if b <= a:
            continue
        value, err, _info, *message = integrate.quad(
            integrand,
            a,
            b,
            epsabs=1e-3 * settings.quad_tol * abs(total),
            epsrel=settings.quad_tol,
            limit=settings.quad_limit,
            full_output=1,
        )
        total += value
        abserr += err
        # quad solo añade un mensaje cuando algo fue mal
        if message:
            flagged.append(abs(value) + err)
    negligible = settings.quad_tol * abs(total)
    converged = all(mass <= negligible for mass in flagged)
    return total, abserr, converged and math.isfinite(total)


def _accept_adaptive(estimate: float, abserr: float, converged: bool) -> bool:
    return converged and abserr <= 10.0 * settings.quad_tol * max(abs(estimate), 1e-300)


def expectation(dist: FadingDistribution, f: GainFunction) -> float:
    """Calcula E_z{f(z)}.

    Args:
        dist (FadingDistribution): Ley de la ganancia.
        f (GainFunction): Función de z; debe aceptar arrays de numpy.

    Returns:
        float: La esperanza. Constant → f(z0); Discrete → Σ p_k f(z_k);
            Rayleigh → cuadratura con error relativo <= quad_tol.

    Raises:
        QuadratureException: Si el integrando no es integrable (lleva la
            estimación parcial).

    Ejemplo:
        expectation(ConstantFading(z0=1.0), lambda z: z)  # 1.0
    """
    if isinstance(dist, ConstantFading):
        return float(f(np.asarray(dist.z0)))
    if isinstance(dist, DiscreteFading):
        values = np.asarray(f(np.asarray(dist.gains)), dtype=float)
        return math.fsum(np.asarray(dist.probabilities) * values)
    return _rayleigh_expectation(dist, f)


def _rayleigh_expectation(dist: RayleighFading, f: GainFunction) -> float:
    x, log_w = _laguerre_rule(settings.laguerre_nodes)
    with np.errstate(over="ignore", invalid="ignore"):
        laguerre = float(np.dot(np.exp(log_w), f(dist.mean * x)))

    def integrand(z: float) -> float:
        return float(f(z)) * math.exp(-z / dist.mean) / dist.mean

    cut = TRUNCATION * dist.mean
    adaptive, abserr, converged = _quad_segments(integrand, [(0.0, cut), (cut, math.inf)])

    scale = max(abs(adaptive), abs(laguerre), 1e-300)
    if math.isfinite(laguerre) and abs(laguerre - adaptive) <= settings.quad_tol * scale:
        return laguerre

    if _accept_adaptive(adaptive, abserr, converged):
        logger.debug(
            "Gauss-Laguerre no coincide; se usa la cuadratura adaptativa",
            laguerre=laguerre,
            adaptive=adaptive,
        )
        return adaptive

    raise QuadratureException(
        "La esperanza no converge bajo fading Rayleigh",
        partial=adaptive if math.isfinite(adaptive) else laguerre,
        details={"laguerre": laguerre, "adaptive": adaptive, "abserr": abserr},
    )


def log_expectation_exp(
    dist: FadingDistribution,
    log_f: GainFunction,
    peak: Optional[float] = None,
    width: Optional[float] = None,
) -> float:
    """Calcula log E_z{exp(log_f(z))} en espacio logarítmico.

    Es la primitiva de todas las LMGF: el exponente se evalúa primero y se resta
    su máximo antes de exponenciar (log-sum-exp), así que T·B grandes no
    desbordan.

    Args:
        dist (FadingDistribution): Ley de la ganancia.
        log_f (GainFunction): Logaritmo del integrando, vectorizado.
        peak (Optional[float]): Para Rayleigh, abscisa aproximada del máximo de
            log_f(z) − z/mean (por defecto 0).
        width (Optional[float]): Para Rayleigh, anchura aproximada del pico
            (por defecto mean).

    Returns:
        float: log E{e^{log_f(z)}}.

    Raises:
        QuadratureException: Si la cuadratura no converge.
    """
    if isinstance(dist, ConstantFading):
        return float(log_f(np.asarray(dist.z0)))
    if isinstance(dist, DiscreteFading):
        exponents = np.asarray(log_f(np.asarray(dist.gains)), dtype=float)
        return float(logsumexp(exponents, b=np.asarray(dist.probabilities)))
    return _rayleigh_log_expectation_exp(dist, log_f, peak, width)


def _rayleigh_log_expectation_exp(
    dist: RayleighFading,
    log_f: GainFunction,
    peak: Optional[float],
    width: Optional[float],
) -> float:
    x, log_w = _laguerre_rule(settings.laguerre_nodes)
    with np.errstate(over="ignore", invalid="ignore"):
        laguerre = float(logsumexp(log_w + log_f(dist.mean * x)))

    mean = dist.mean
    center = max(peak or 0.0, 0.0)
    scale = width if width and width > 0 else mean
    lo = max(0.0, center - PEAK_HALF_WIDTH * scale)
    hi = center + PEAK_HALF_WIDTH * scale

    def phi(z):
        return log_f(z) - z / mean - math.log(mean)

    # Desplazamiento = máximo observado del exponente en la zona del pico
    grid = np.concatenate(([0.0], np.linspace(lo, hi, 129)))
    shift = float(np.max(phi(grid)))

    def integrand(z: float) -> float:
        return math.exp(min(float(phi(z)) - shift, 700.0))

    # Primero los tramos del pico, después las colas
    segments = [(lo, center), (center, hi), (0.0, lo), (hi, math.inf)]
    total, abserr, converged = _quad_segments(integrand, segments)

    if total <= 0 or not math.isfinite(total):
        raise QuadratureException(
            "La LMGF no converge bajo fading Rayleigh",
            partial=laguerre,
            details={"shift": shift, "total": total},
        )
    adaptive = shift + math.log(total)

    # En escala log, error absoluto = error relativo de la esperanza
    if math.isfinite(laguerre) and abs(laguerre - adaptive) <= settings.quad_tol:
        return laguerre

    if _accept_adaptive(total, abserr, converged):
        logger.debug(
            "Gauss-Laguerre no coincide en la LMGF; se usa la cuadratura adaptativa",
            laguerre=laguerre,
            adaptive=adaptive,
            peak=center,
        )
        return adaptive

    raise QuadratureException(
        "La LMGF no converge bajo fading Rayleigh",
        partial=adaptive,
        details={"laguerre": laguerre, "abserr": abserr, "total": total},
    )


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Generador Philox (basado en contador) para una semilla y un flujo.

    Cada enlace usa su propio flujo, así que la ganancia del bloque i no depende
    de cómo se troceen las extracciones.

    Args:
        seed (int): Semilla explícita de 64 bits (>= 0).
        stream (int): Índice de flujo (0 = enlace S–H, 1 = enlace H–D).
    """
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(stream,))
    return np.random.Generator(np.random.Philox(sequence))


def sample(dist: FadingDistribution, rng: np.random.Generator) -> float:
    """Una extracción i.i.d. de z."""
    if isinstance(dist, ConstantFading):
        return dist.z0
    return float(sample_many(dist, rng, 1)[0])


def sample_many(dist: FadingDistribution, rng: np.random.Generator, size: int) -> np.ndarray:
    """Extracciones i.i.d. vectorizadas de z (misma secuencia que llamadas sucesivas)."""
    if isinstance(dist, ConstantFading):
        return np.full(size, dist.z0)
    if isinstance(dist, DiscreteFading):
        return rng.choice(np.asarray(dist.gains), size=size, p=np.asarray(dist.probabilities))
    return rng.exponential(dist.mean, size=size)
