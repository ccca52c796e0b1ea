"""Service de escenarios: convierte un Scenario en las tablas que emite el CLI.

Todas las tablas son DataFrames de pandas en el orden de entrada; con
max_workers > 1 los puntos de barrido se reparten en procesos pero el orden de
salida no cambia.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from relaycap.config.settings import settings
from relaycap.core.exceptions import (
    ConfigurationException,
    DomainException,
    InsufficientDataException,
    NoSolutionException,
)
from relaycap.core.logger import logger

from ..lmgf.models import LinkParams, QosPair
from ..lmgf.service import link_effective_capacity, normalize, virtual_effective_bandwidth
from ..simulator.models import QueueSelector, SimConfig, SimResult
from ..simulator.service import default_thresholds, estimate_decay, pool_decay, run_replications
from ..solver.service import check_stability, crossing_theta_star, effective_capacity, theta2_prime
from .models import Scenario, SweepSpec

DEFAULT_CURVE_POINTS = 200
DEFAULT_CURVE_SPAN = 100.0  # La malla por defecto cubre [θ₁, 100·θ₁]

PASS = "PASS"
FAIL = "FAIL"
UNMEASURABLE = "UNMEASURABLE"


def compute_record(scenario: Scenario) -> Dict[str, Any]:
    """Registro único con r_e, su versión normalizada, la rama y los exponentes auxiliares."""
    link1 = scenario.link1.to_link()
    link2 = scenario.link2.to_link()
    result = effective_capacity(link1, link2, scenario.qos)
    return {
        "theta1": scenario.theta1,
        "theta2": scenario.theta2,
        "r_e": result.r_e,
        "r_e_norm": normalize(result.r_e, link1),
        "case_tag": result.case_tag.value,
        "theta_tilde": result.theta_tilde,
        "theta_hat": result.theta_hat,
        "theta_star": result.theta_star,
        "theta_star_star": result.theta_star_star,
        "theta2_prime": result.theta2_prime,
        "theta_tilde_0": result.theta_tilde_0,
    }


def _sweep_of(scenario: Scenario, allowed: Tuple[str, ...]) -> Optional[SweepSpec]:
    sweep = scenario.sweep
    if sweep is not None and sweep.variable not in allowed:
        raise ConfigurationException(
            "sweep", f"variable '{sweep.variable}' no válida aquí. Válidas: {', '.join(allowed)}"
        )
    return sweep


def curves_table(scenario: Scenario) -> Tuple[pd.DataFrame, float]:
    """Curvas E_C(θ) del enlace H–D y E_B(θ − θ₁) del S–H, normalizadas por T·B.

    Returns:
        Tuple[pd.DataFrame, float]: Tabla (theta, E_C_norm, E_B_norm) y θ* (+∞ si
            E_C domina siempre).

    Raises:
        ConfigurationException: Si la malla tiene menos de 2 puntos o empieza por
            debajo de θ₁.
    """
    sweep = _sweep_of(scenario, ("theta",))
    theta1 = scenario.theta1
    if sweep is None:
        grid = np.geomspace(theta1, DEFAULT_CURVE_SPAN * theta1, DEFAULT_CURVE_POINTS)
    else:
        grid = sweep.grid()
        if len(grid) < 2:
            raise ConfigurationException("sweep", "las curvas necesitan al menos 2 puntos")
        if grid[0] < theta1:
            raise ConfigurationException("sweep", f"la malla debe empezar en θ >= theta1 ({theta1})")

    link1 = scenario.link1.to_link()
    link2 = scenario.link2.to_link()
    table = pd.DataFrame(
        {
            "theta": grid,
            "E_C_norm": [normalize(link_effective_capacity(link2, t), link2) for t in grid],
            "E_B_norm": [
                normalize(virtual_effective_bandwidth(link1, t, theta1), link1) for t in grid
            ],
        }
    )

    try:
        theta_star = crossing_theta_star(link1, link2, theta1)
    except NoSolutionException as e:
        logger.info("E_C y E_B no se cruzan", details=e.details)
        theta_star = math.inf
    return table, theta_star


def _theta2_point(link1: LinkParams, link2: LinkParams, qos: QosPair) -> Dict[str, Any]:
    result = effective_capacity(link1, link2, qos, solve_exponents=False)
    return {
        "theta2": qos.theta2,
        "r_e": result.r_e,
        "r_e_norm": normalize(result.r_e, link1),
        "case_tag": result.case_tag.value,
    }


def _snr2_point(link1: LinkParams, link2: LinkParams, theta1: float, snr2_db: float) -> Dict[str, Any]:
    if not check_stability(link1, link2):
        logger.warning("Punto inestable en el barrido de SNR2", snr2_db=snr2_db)
        return {"snr2_db": snr2_db, "theta2_prime": math.nan}
    return {"snr2_db": snr2_db, "theta2_prime": theta2_prime(link1, link2, theta1)}


def _evaluate(function, arguments: List[tuple]) -> List[Dict[str, Any]]:
    """Evalúa los puntos en orden; en paralelo si max_workers > 1."""
    if settings.max_workers > 1 and len(arguments) > 1:
        with ProcessPoolExecutor(max_workers=settings.max_workers) as pool:
            return list(pool.map(function, *zip(*arguments)))
    return [function(*a) for a in arguments]


def sweep_table(scenario: Scenario) -> pd.DataFrame:
    """Barrido en θ₂ (theta2, r_e, r_e_norm, case_tag) o en SNR₂ (snr2_db, theta2_prime).

    Sin barrido se evalúa el único punto θ₂ del escenario.
    """
    sweep = _sweep_of(scenario, ("theta2", "snr2_db"))
    link1 = scenario.link1.to_link()

    if sweep is not None and sweep.variable == "snr2_db":
        arguments = [
            (link1, scenario.link2.to_link(snr_db=float(s)), scenario.theta1, float(s))
            for s in sweep.grid()
        ]
        return pd.DataFrame(_evaluate(_snr2_point, arguments))

    link2 = scenario.link2.to_link()
    grid = [scenario.theta2] if sweep is None else sweep.grid()
    arguments = [(link1, link2, QosPair(theta1=scenario.theta1, theta2=float(t))) for t in grid]
    return pd.DataFrame(_evaluate(_theta2_point, arguments))


def _pooled_probabilities(results: List[SimResult], selector: QueueSelector) -> List[float]:
    """Media de P̂(Q > q) entre réplicas (todas cuentan los mismos bloques)."""
    stacked = np.array([r.queue(selector).probabilities for r in results])
    return [float(p) for p in stacked.mean(axis=0)]


def _queue_summary(
    results: List[SimResult], selector: QueueSelector, target: float, rate: float
) -> Dict[str, Any]:
    estimates = []
    for result in results:
        try:
            estimates.append(estimate_decay(result, selector))
        except InsufficientDataException as e:
            logger.warning(
                "Réplica sin umbrales útiles", queue=selector.value, seed=result.seed, usable=e.usable
            )

    summary = {
        "queue": selector.value,
        "rate": rate,
        "target": target,
        "mean_length": float(np.mean([r.queue(selector).mean_length for r in results])),
        "departure_rate": float(np.mean([r.queue(selector).departure_rate for r in results])),
    }
    if not estimates:
        return {**summary, "slope": math.nan, "stderr": math.nan, "verdict": UNMEASURABLE}

    pooled = pool_decay(estimates)
    verdict = PASS if pooled.slope >= settings.sim_pass_margin * target else FAIL
    return {**summary, "slope": pooled.slope, "stderr": pooled.stderr, "verdict": verdict}


def simulate_tables(scenario: Scenario) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """Simula el escenario a R = rate_frac·r_e y compara las pendientes con θ₁, θ₂.

    En modo de cola única R = rate_frac · (capacidad efectiva S–H en θ₁) y solo se
    evalúa la fuente.

    Returns:
        Tuple[pd.DataFrame, pd.DataFrame]: Tabla (queue, threshold, probability) y
            resumen por cola (slope, stderr, target, verdict, ...).

    Raises:
        DomainException: Si la capacidad de referencia es 0 (no hay tasa que simular).
    """
    sim = scenario.simulation
    link1 = scenario.link1.to_link()
    link2 = None if sim.single_queue else scenario.link2.to_link()

    if link2 is None:
        reference = link_effective_capacity(link1, scenario.theta1)
    else:
        reference = effective_capacity(link1, link2, scenario.qos, solve_exponents=False).r_e
    rate = sim.rate_frac * reference
    if rate <= 0:
        raise DomainException("La capacidad de referencia es 0: no hay tasa que simular")

    config = SimConfig(
        link1=link1,
        link2=link2,
        arrival_rate=rate,
        num_blocks=sim.blocks,
        seed=sim.seed,
        thresholds=sim.thresholds or default_thresholds(link1),
        warmup_blocks=(
            sim.warmup if sim.warmup is not None else int(settings.sim_warmup_fraction * sim.blocks)
        ),
    )
    results = run_replications(config, sim.replications)

    targets = [(QueueSelector.SOURCE, scenario.theta1)]
    if link2 is not None:
        targets.append((QueueSelector.RELAY, scenario.theta2))

    rows = []
    summaries = []
    for selector, target in targets:
        probabilities = _pooled_probabilities(results, selector)
        rows.extend(
            {"queue": selector.value, "threshold": q, "probability": p}
            for q, p in zip(config.thresholds, probabilities)
        )
        summaries.append(_queue_summary(results, selector, target, rate))

    return pd.DataFrame(rows), pd.DataFrame(summaries)
