"""Service del simulador Monte Carlo en tándem.

Recursión fluida por bloques:
- Fuente: Q₁[i+1] = max(Q₁[i] + R − c₁[i], 0), salidas d₁[i] = Q₁[i] + R − Q₁[i+1].
- Relay (store-and-forward): los bits d₁[i] solo se pueden servir desde el bloque
  i+1, Q₂[i+1] = max(Q₂[i] − c₂[i], 0) + d₁[i].

El backlog del relay que se mide es el residuo tras servir, max(Q₂[i] − c₂[i], 0):
no cuenta los bits recién llegados que aún no han tenido ocasión de servicio.

Ambas colas son recursiones de Lindley y se vectorizan por trozos con
cumsum + minimum.accumulate, arrastrando el estado entre trozos.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.stats import linregress

from relaycap.config.settings import settings
from relaycap.core.exceptions import DomainException, InsufficientDataException
from relaycap.core.logger import logger

from ..fading.service import make_rng, sample_many
from ..lmgf.models import LinkParams
from ..lmgf.service import ergodic_capacity
from .models import DecayEstimate, QueueSelector, QueueStats, SimConfig, SimResult

SOURCE_STREAM = 0
RELAY_STREAM = 1
# Escala de referencia de los umbrales por defecto (T·B = 200)
REFERENCE_TB = 200.0


class _TandemState(NamedTuple):
    """Estado arrastrado entre trozos."""

    source: float = 0.0  # Q₁ al final del último bloque
    residual: float = 0.0  # max(Q₂ − c₂, 0) del último bloque
    last_departure: float = 0.0  # d₁ del último bloque, aún sin servir


class _Chunk(NamedTuple):
    c1: np.ndarray
    c2: Optional[np.ndarray]
    d1: np.ndarray
    d2: Optional[np.ndarray]
    q1: np.ndarray
    q2: Optional[np.ndarray]


def _lindley(start: float, increments: np.ndarray) -> np.ndarray:
    """Q[k] = max(Q[k−1] + x[k], 0) con Q[−1] = start, sin bucle de Python."""
    walk = np.cumsum(increments)
    return walk - np.minimum(np.minimum.accumulate(walk), -start)


def _advance(
    rate: float, c1: np.ndarray, c2: Optional[np.ndarray], state: _TandemState
) -> Tuple[_Chunk, _TandemState]:
    """Avanza la recursión en tándem un trozo de bloques."""
    q1 = _lindley(state.source, rate - c1)
    before = np.concatenate(([state.source], q1[:-1]))
    d1 = before + rate - q1

    if c2 is None:
        return _Chunk(c1, None, d1, None, q1, None), _TandemState(source=float(q1[-1]))

    # Llegadas al relay desplazadas un bloque
    arrivals = np.concatenate(([state.last_departure], d1[:-1]))
    residual = _lindley(state.residual, arrivals - c2)
    previous = np.concatenate(([state.residual], residual[:-1]))
    d2 = previous + arrivals - residual

    new_state = _TandemState(
        source=float(q1[-1]), residual=float(residual[-1]), last_departure=float(d1[-1])
    )
    return _Chunk(c1, c2, d1, d2, q1, residual), new_state


def _draw_service(link: LinkParams, rng: np.random.Generator, size: int) -> np.ndarray:
    return link.service_bits(sample_many(link.fading, rng, size))


def default_thresholds(link: LinkParams, count: Optional[int] = None) -> Tuple[float, ...]:
    """Umbrales log-espaciados sobre sim_threshold_span escalado por T·B/200."""
    lo, hi = settings.sim_threshold_span
    scale = link.tb / REFERENCE_TB
    points = np.geomspace(lo * scale, hi * scale, count or settings.sim_threshold_count)
    return tuple(float(q) for q in points)


def _is_stable(config: SimConfig) -> bool:
    """Estabilidad analítica: R bajo la capacidad ergódica de cada salto que atraviesa."""
    source_rate = ergodic_capacity(config.link1)
    if config.arrival_rate >= source_rate:
        return False
    if config.link2 is None:
        return True
    return min(config.arrival_rate, source_rate) < ergodic_capacity(config.link2)


class _Tally:
    """Acumula contadores de desbordamiento y medias de una cola."""

    def __init__(self, thresholds: np.ndarray):
        self.thresholds = thresholds
        self.exceed = np.zeros(len(thresholds), dtype=np.int64)
        self.total_length = 0.0
        self.max_length = 0.0
        self.served = 0.0

    def add(self, queue: np.ndarray, departures: np.ndarray):
        if queue.size == 0:
            return
        # below[i] = número de umbrales estrictamente menores que queue[i]
        below = np.searchsorted(self.thresholds, queue, side="left")
        histogram = np.bincount(below, minlength=len(self.thresholds) + 1)
        self.exceed += np.cumsum(histogram[::-1])[::-1][1:]
        self.total_length += math.fsum(queue)
        self.max_length = max(self.max_length, float(queue.max()))
        self.served += math.fsum(departures)

    def stats(self, blocks: int) -> QueueStats:
        return QueueStats(
            thresholds=tuple(float(q) for q in self.thresholds),
            probabilities=tuple(float(c) / blocks for c in self.exceed),
            mean_length=self.total_length / blocks,
            max_length=self.max_length,
            departure_rate=self.served / blocks,
        )


def run(config: SimConfig) -> SimResult:
    """Simula una réplica completa.

    Determinista dado config (incluida la semilla): cada enlace tiene su propio
    flujo Philox y el tamaño de trozo es fijo.

    Args:
        config (SimConfig): Parámetros de la réplica.

    Returns:
        SimResult: Probabilidades empíricas de desbordamiento y medias por cola.
    """
    stable = _is_stable(config)
    if not stable:
        logger.warning(
            "Simulación inestable: la tasa supera la capacidad ergódica",
            arrival_rate=config.arrival_rate,
            seed=config.seed,
        )

    source_rng = make_rng(config.seed, SOURCE_STREAM)
    relay_rng = make_rng(config.seed, RELAY_STREAM)
    thresholds = np.asarray(config.thresholds, dtype=float)
    source_tally = _Tally(thresholds)
    relay_tally = _Tally(thresholds)
    state = _TandemState()

    for start in range(0, config.num_blocks, settings.sim_chunk_blocks):
        size = min(settings.sim_chunk_blocks, config.num_blocks - start)
        c1 = _draw_service(config.link1, source_rng, size)
        c2 = None if config.link2 is None else _draw_service(config.link2, relay_rng, size)
        chunk, state = _advance(config.arrival_rate, c1, c2, state)

        skip = max(0, config.warmup_blocks - start)
        if skip >= size:
            continue
        source_tally.add(chunk.q1[skip:], chunk.d1[skip:])
        if chunk.q2 is not None:
            relay_tally.add(chunk.q2[skip:], chunk.d2[skip:])

    counted = config.num_blocks - config.warmup_blocks
    result = SimResult(
        source=source_tally.stats(counted),
        relay=None if config.link2 is None else relay_tally.stats(counted),
        arrival_rate=config.arrival_rate,
        counted_blocks=counted,
        seed=config.seed,
        stable=stable,
    )
    logger.info(
        "Simulación completada",
        seed=config.seed,
        blocks=config.num_blocks,
        source_mean=result.source.mean_length,
        relay_mean=result.relay.mean_length if result.relay else None,
    )
    return result


def run_replications(
    config: SimConfig, replications: int = 1, max_workers: Optional[int] = None
) -> List[SimResult]:
    """Réplicas independientes con semillas seed, seed+1, ...

    El resultado sigue el orden de réplica aunque se ejecuten en paralelo.
    """
    if replications < 1:
        raise DomainException("replications debe ser >= 1", replications=replications)
    configs = [config.model_copy(update={"seed": config.seed + k}) for k in range(replications)]
    workers = max_workers or settings.max_workers
    if workers > 1 and replications > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run, configs))
    return [run(c) for c in configs]


def trace(config: SimConfig) -> pd.DataFrame:
    """Traza bloque a bloque (c₁, c₂, d₁, d₂, q₁, q₂) de una réplica corta.

    q₁ es la cola de la fuente al final del bloque y q₂ el residuo del relay tras
    servir. Ignora el warmup.
    """
    c1 = _draw_service(config.link1, make_rng(config.seed, SOURCE_STREAM), config.num_blocks)
    c2 = None
    if config.link2 is not None:
        c2 = _draw_service(config.link2, make_rng(config.seed, RELAY_STREAM), config.num_blocks)
    chunk, _ = _advance(config.arrival_rate, c1, c2, _TandemState())

    frame = pd.DataFrame(
        {"block": np.arange(config.num_blocks), "c1": chunk.c1, "d1": chunk.d1, "q1": chunk.q1}
    )
    if chunk.c2 is not None:
        frame["c2"] = chunk.c2
        frame["d2"] = chunk.d2
        frame["q2"] = chunk.q2
    return frame


def fit(
    thresholds: Sequence[float],
    probabilities: Sequence[float],
    window: Optional[Tuple[float, float]] = None,
) -> DecayEstimate:
    """Ajuste por mínimos cuadrados de log P̂(Q > q) frente a q.

    Solo entran los umbrales con probabilidad dentro de window (por defecto
    settings.decay_window).

    Raises:
        InsufficientDataException: Si quedan menos de decay_min_points umbrales.

    Ejemplo:
        q = np.arange(100, 900, 100)
        fit(q, np.exp(-0.01 * q)).slope  # 0.01
    """
    lo, hi = window or settings.decay_window
    q = np.asarray(thresholds, dtype=float)
    p = np.asarray(probabilities, dtype=float)
    mask = (p >= lo) & (p <= hi)
    usable = int(mask.sum())
    if usable < settings.decay_min_points:
        raise InsufficientDataException(usable=usable, required=settings.decay_min_points)

    regression = linregress(q[mask], np.log(p[mask]))
    return DecayEstimate(slope=-regression.slope, stderr=regression.stderr, usable_points=usable)


def estimate_decay(
    result: SimResult,
    selector: QueueSelector = QueueSelector.SOURCE,
    window: Optional[Tuple[float, float]] = None,
) -> DecayEstimate:
    """Tasa de decaimiento (1/bits) de la cola seleccionada con su error estándar."""
    stats = result.queue(selector)
    estimate = fit(stats.thresholds, stats.probabilities, window)
    logger.debug(
        "Decaimiento estimado",
        queue=selector.value,
        slope=estimate.slope,
        stderr=estimate.stderr,
        usable=estimate.usable_points,
    )
    return estimate


def pool_decay(estimates: Sequence[DecayEstimate]) -> DecayEstimate:
    """Combina pendientes de réplicas ponderando por el inverso de la varianza."""
    if not estimates:
        raise DomainException("No hay estimaciones que combinar")
    exact = [e for e in estimates if e.stderr == 0]
    usable = sum(e.usable_points for e in estimates)
    if exact:
        return DecayEstimate(
            slope=math.fsum(e.slope for e in exact) / len(exact), stderr=0.0, usable_points=usable
        )
    weights = [1.0 / e.stderr**2 for e in estimates]
    total = math.fsum(weights)
    slope = math.fsum(w * e.slope for w, e in zip(weights, estimates)) / total
    return DecayEstimate(slope=slope, stderr=math.sqrt(1.0 / total), usable_points=usable)
