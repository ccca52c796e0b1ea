"""Service del solver de capacidad efectiva de dos saltos.

Resuelve el despacho por casos (θ₁ >= θ₂, θ₁ < θ₂ <= θ'₂, θ₂ > θ'₂) y todos los
subproblemas de raíz. Todas las raíces se buscan con bisección sobre brackets que
crecen geométricamente: cada función objetivo es monótona o convexa con signo
definido, así que no se usan derivadas.
"""

import math
from functools import lru_cache
from typing import Callable, Optional, Tuple

from scipy.optimize import bisect

from relaycap.config.settings import settings
from relaycap.core.exceptions import (
    DomainException,
    InstabilityException,
    NoSolutionException,
    RelayCapException,
)
from relaycap.core.logger import logger
from relaycap.core.validators import require_positive

from ..fading.service import quadrature_key
from ..lmgf.models import LinkParams, QosPair
from ..lmgf.service import (
    delay_limited_capacity,
    departure_lmgf,
    ergodic_capacity,
    link_effective_capacity,
    peak_service,
    relay_objective,
    service_lmgf,
    virtual_effective_bandwidth,
)
from .models import CaseTag, CaseTwoGeometry, EffCapResult

BRACKET_GROWTH = 4.0


def _bisect(func: Callable[[float], float], lo: float, hi: float) -> float:
    """Bisección de scipy con las tolerancias configuradas."""
    return bisect(
        func,
        lo,
        hi,
        xtol=1e-300,
        rtol=max(settings.root_tol * 1e-3, 1e-15),
        maxiter=settings.bisect_maxiter,
    )


def _grow_bracket(
    func: Callable[[float], float], lo: float, hi: float
) -> Tuple[float, Optional[float]]:
    """Hace crecer hi hasta que func(hi) <= 0, con func(lo) > 0.

    Returns:
        Tuple[float, Optional[float]]: (lo, hi); hi es None si func sigue
            positiva al llegar a bracket_cap.
    """
    while func(hi) > 0:
        if hi >= settings.bracket_cap:
            return hi, None
        lo, hi = hi, min(hi * BRACKET_GROWTH, settings.bracket_cap)
    return lo, hi


def check_stability(link1: LinkParams, link2: LinkParams) -> bool:
    """Las colas son estables si la capacidad ergódica S–H es estrictamente menor que la H–D.

    Se compara en bits por bloque, que coincide con la comparación por símbolo
    cuando ambos enlaces comparten T y B.
    """
    return ergodic_capacity(link1) < ergodic_capacity(link2)


def solve_theta_tilde(link1: LinkParams, rate: float) -> float:
    """Exponente θ̃ de la cola fuente para la tasa constante R.

    Resuelve −Λ_C(−θ̃)/θ̃ = R. Como la capacidad efectiva es decreciente en θ,
    basta una bisección.

    Args:
        link1 (LinkParams): Enlace S–H.
        rate (float): R en bits por bloque.

    Returns:
        float: θ̃ > 0, o +∞ si R no supera la capacidad de retardo limitado (el
            servicio determinista con R < c nunca forma cola).

    Raises:
        DomainException: Si R <= 0.
        NoSolutionException: Si R >= capacidad ergódica.
    """
    require_positive("rate", rate)
    ergodic = ergodic_capacity(link1)
    if rate >= ergodic:
        raise NoSolutionException(
            "La tasa no es menor que la capacidad ergódica del enlace S-H",
            details={"rate": rate, "ergodic_capacity": ergodic},
        )
    if rate <= delay_limited_capacity(link1):
        return math.inf

    def excess(theta: float) -> float:
        return link_effective_capacity(link1, theta) - rate

    lo = settings.bracket_lo
    while excess(lo) <= 0:
        lo /= 10.0
        if lo < settings.theta_zero_eps:
            return lo

    lo, hi = _grow_bracket(excess, lo, settings.bracket_hi)
    if hi is None:
        raise NoSolutionException(
            "La capacidad efectiva no baja de la tasa antes de bracket_cap",
            details={"rate": rate, "cap": settings.bracket_cap},
        )
    theta = _bisect(excess, lo, hi)
    logger.debug("theta_tilde resuelto", rate=rate, theta_tilde=theta)
    return theta


def solve_theta_hat(
    link1: LinkParams, link2: LinkParams, rate: float, theta_tilde: float
) -> float:
    """Exponente θ̂ de la cola del relay.

    Raíz positiva de f(θ) = Λ_B(θ) + Λ_H(−θ), función convexa con f(0) = 0 y
    negativa justo después de 0 cuando el relay es estable.

    Returns:
        float: θ̂ > 0, o +∞ si f sigue negativa hasta bracket_cap (el relay no
            restringe).

    Raises:
        InstabilityException: Si R >= capacidad ergódica H–D (f(0⁺) > 0).
    """
    require_positive("rate", rate)
    require_positive("theta_tilde", theta_tilde, allow_inf=True)
    ergodic = ergodic_capacity(link2)
    if rate >= ergodic:
        raise InstabilityException(
            "La tasa no es menor que la capacidad ergódica del enlace H-D",
            details={"rate": rate, "ergodic_capacity": ergodic},
        )

    def f(theta: float) -> float:
        return departure_lmgf(link1, rate, theta_tilde, theta) + service_lmgf(link2, -theta)

    lo = settings.bracket_lo
    while f(lo) >= 0:
        lo /= 10.0
        if lo < settings.theta_zero_eps:
            raise InstabilityException(
                "f(θ) no es negativa cerca de 0", details={"rate": rate, "theta": lo}
            )

    hi = settings.bracket_hi
    while f(hi) < 0:
        if hi >= settings.bracket_cap:
            logger.debug("theta_hat sin raíz hasta bracket_cap", rate=rate)
            return math.inf
        lo, hi = hi, min(hi * BRACKET_GROWTH, settings.bracket_cap)

    theta = _bisect(f, lo, hi)
    logger.debug("theta_hat resuelto", rate=rate, theta_tilde=theta_tilde, theta_hat=theta)
    return theta


def crossing_theta_star(link1: LinkParams, link2: LinkParams, theta1: float) -> float:
    """Cruce θ* > θ₁ de E_C(θ) (enlace H–D) y E_B(θ − θ₁) (enlace S–H).

    E_C es decreciente y E_B creciente, así que el cruce es único; para θ > θ*
    se cumple E_C(θ) < E_B(θ − θ₁).

    Raises:
        NoSolutionException: Si no hay cruce antes de bracket_cap; details indica
            qué curva domina.
    """
    require_positive("theta1", theta1)

    def gap(theta: float) -> float:
        return link_effective_capacity(link2, theta) - virtual_effective_bandwidth(
            link1, theta, theta1
        )

    if gap(theta1) <= 0:
        return theta1

    lo, hi = _grow_bracket(gap, theta1, 2.0 * theta1)
    if hi is None:
        raise NoSolutionException(
            "E_C domina a E_B: no hay cruce antes de bracket_cap",
            details={
                "dominant": "E_C",
                "delay_limited_capacity_link2": delay_limited_capacity(link2),
                "peak_service_link1": peak_service(link1),
            },
        )
    theta = _bisect(gap, lo, hi)
    logger.debug("theta_star resuelto", theta1=theta1, theta_star=theta)
    return theta


def _objective_slope(link1: LinkParams, link2: LinkParams, theta1: float, theta: float) -> float:
    """Derivada por diferencia central del objetivo del caso θ₁ < θ₂."""
    step = settings.derivative_step * theta
    upper = relay_objective(link1, link2, theta1, theta + step)
    lower = relay_objective(link1, link2, theta1, theta - step)
    return (upper - lower) / (2.0 * step)


def _stationary_point(
    link1: LinkParams, link2: LinkParams, theta1: float, theta_star: float
) -> Optional[float]:
    """Punto estacionario θ** del objetivo en [θ₁, θ*], o None si decrece desde θ₁."""
    if _objective_slope(link1, link2, theta1, theta1) <= 0:
        return None
    if _objective_slope(link1, link2, theta1, theta_star) >= 0:
        logger.warning(
            "El objetivo sigue creciendo en theta_star; se toma theta_star como máximo",
            theta1=theta1,
            theta_star=theta_star,
        )
        return theta_star
    theta = _bisect(lambda t: _objective_slope(link1, link2, theta1, t), theta1, theta_star)
    logger.debug("theta_star_star resuelto", theta1=theta1, theta_star_star=theta)
    return theta


def case_two_geometry(link1: LinkParams, link2: LinkParams, theta1: float) -> CaseTwoGeometry:
    """θ*, θ** y θ'₂, que dependen de θ₁ y de los enlaces pero no de θ₂.

    El objetivo g(θ) = −(Λ_H(−θ) + Λ_C(θ − θ₁))/θ₁ es cóncavo, así que su
    supremo sobre θ >= θ₂ está en θ** (si θ₂ < θ**) o en la frontera θ₂. θ'₂ es
    la raíz de g(θ) = E_C1(θ₁) en el tramo decreciente [max(θ₁, θ**), θ*].
    """
    return _case_two_geometry(link1, link2, theta1, quadrature_key(), settings.root_tol)


@lru_cache(maxsize=1024)
def _case_two_geometry(
    link1: LinkParams,
    link2: LinkParams,
    theta1: float,
    _quadrature: Tuple[float, int, int],
    _root_tol: float,
) -> CaseTwoGeometry:
    level = link_effective_capacity(link1, theta1)

    def objective(theta: float) -> float:
        return relay_objective(link1, link2, theta1, theta)

    try:
        theta_star = crossing_theta_star(link1, link2, theta1)
    except NoSolutionException as e:
        # Sin cruce el objetivo no está acotado: el relay nunca limita
        logger.debug("Sin cruce E_C/E_B; theta2_prime = inf", details=e.details)
        return CaseTwoGeometry(theta2_prime=math.inf, objective_max=math.inf)

    theta_star_star = _stationary_point(link1, link2, theta1, theta_star)
    start = theta_star_star if theta_star_star is not None else theta1
    objective_max = objective(start)

    if level <= 0:
        theta2_prime = math.inf
    elif objective_max < level:
        theta2_prime = 0.0
    else:
        theta2_prime = _bisect(lambda t: objective(t) - level, start, theta_star)

    logger.debug(
        "Geometría del caso II",
        theta1=theta1,
        theta_star=theta_star,
        theta_star_star=theta_star_star,
        theta2_prime=theta2_prime,
    )
    return CaseTwoGeometry(
        theta_star=theta_star,
        theta_star_star=theta_star_star,
        theta2_prime=theta2_prime,
        objective_max=objective_max,
    )


def clear_caches():
    """Vacía la caché de geometría del caso II."""
    _case_two_geometry.cache_clear()


def theta2_prime(link1: LinkParams, link2: LinkParams, theta1: float) -> float:
    """Mayor θ₂ para el que la capacidad efectiva es la de la fuente sola.

    Returns:
        float: θ'₂ (>= θ₁ cuando existe), 0 si la zona plana es vacía, +∞ si
            E_C nunca cruza a E_B.
    """
    require_positive("theta1", theta1)
    return case_two_geometry(link1, link2, theta1).theta2_prime


def _balance_point(
    link1: LinkParams, link2: LinkParams, theta1: float, theta2: float
) -> Tuple[float, float]:
    """θ̃₀ en [θ₁, θ₂] y la capacidad efectiva resultante.

    El primer término (capacidad efectiva S–H en θ̃) decrece con θ̃ y el segundo
    −(Λ_H(−θ₂) + Λ_C(θ₂ − θ̃))/θ̃ crece; el máximo del mínimo está en su cruce o
    en un extremo del intervalo.
    """
    lam_h = service_lmgf(link2, -theta2)

    def first(theta: float) -> float:
        return link_effective_capacity(link1, theta)

    def second(theta: float) -> float:
        return -(lam_h + service_lmgf(link1, theta2 - theta)) / theta

    if second(theta2) <= 0:
        return theta2, 0.0

    def difference(theta: float) -> float:
        return first(theta) - second(theta)

    if difference(theta1) <= 0:
        theta0 = theta1
    elif difference(theta2) >= 0:
        theta0 = theta2
    else:
        theta0 = _bisect(difference, theta1, theta2)

    return theta0, max(0.0, min(first(theta0), second(theta0)))


def theta_tilde_0(link1: LinkParams, link2: LinkParams, theta1: float, theta2: float) -> float:
    """Punto de equilibrio θ̃₀ del caso θ₂ > θ'₂.

    Raises:
        DomainException: Si θ₂ <= θ₁ o θ₂ <= θ'₂.
    """
    require_positive("theta1", theta1)
    require_positive("theta2", theta2)
    if theta2 <= theta1:
        raise DomainException("theta2 debe ser > theta1", theta1=theta1, theta2=theta2)
    boundary = theta2_prime(link1, link2, theta1)
    if theta2 <= boundary:
        raise DomainException(
            "theta2 debe ser > theta2_prime", theta2=theta2, theta2_prime=boundary
        )
    theta0, _ = _balance_point(link1, link2, theta1, theta2)
    return theta0


def _operating_exponents(
    link1: LinkParams,
    link2: LinkParams,
    r_e: float,
    theta1: float,
    theta0: Optional[float],
) -> Tuple[Optional[float], Optional[float]]:
    """θ̃ y θ̂ resueltos para R = r_e (comprobación a posteriori de las restricciones)."""
    if r_e <= 0:
        return math.inf, math.inf
    try:
        if r_e == link_effective_capacity(link1, theta1):
            theta_tilde = theta1
        elif theta0 is not None and r_e == link_effective_capacity(link1, theta0):
            theta_tilde = theta0
        else:
            theta_tilde = solve_theta_tilde(link1, r_e)
        theta_hat = solve_theta_hat(link1, link2, r_e, theta_tilde)
    except RelayCapException as e:
        logger.warning("No se pudieron resolver los exponentes de operación", error=e.message)
        return None, None
    return theta_tilde, theta_hat


def effective_capacity(
    link1: LinkParams, link2: LinkParams, qos: QosPair, solve_exponents: bool = True
) -> EffCapResult:
    """Capacidad efectiva R_E(θ₁, θ₂) del enlace de dos saltos.

    Reglas:
    - Unstable (r_e = 0) si la capacidad ergódica S–H no es menor que la H–D.
    - CaseI (θ₁ >= θ₂): mínimo de las dos capacidades efectivas de enlace en θ₁ y θ₂.
    - CaseII_1 (θ₁ < θ₂ <= θ'₂): capacidad efectiva S–H en θ₁.
    - CaseII_2 (θ₂ > θ'₂): valor en el punto de equilibrio θ̃₀.

    Args:
        link1 (LinkParams): Enlace S–H.
        link2 (LinkParams): Enlace H–D.
        qos (QosPair): Exponentes θ₁ y θ₂.
        solve_exponents (bool): Si es False no se resuelven θ̃ y θ̂ (barridos).

    Returns:
        EffCapResult: r_e en bits por bloque con la rama y los exponentes auxiliares.
    """
    theta1, theta2 = qos.theta1, qos.theta2

    if not check_stability(link1, link2):
        logger.warning(
            "Enlace inestable: capacidad ergódica S-H >= H-D",
            ergodic1=ergodic_capacity(link1),
            ergodic2=ergodic_capacity(link2),
        )
        return EffCapResult(r_e=0.0, case_tag=CaseTag.UNSTABLE)

    source_capacity = link_effective_capacity(link1, theta1)
    geometry: Optional[CaseTwoGeometry] = None
    theta0: Optional[float] = None

    if theta1 >= theta2:
        case_tag = CaseTag.CASE_I
        r_e = min(source_capacity, link_effective_capacity(link2, theta2))
    else:
        geometry = case_two_geometry(link1, link2, theta1)
        if theta2 <= geometry.theta2_prime:
            case_tag = CaseTag.CASE_II_1
            r_e = source_capacity
        else:
            case_tag = CaseTag.CASE_II_2
            theta0, r_e = _balance_point(link1, link2, theta1, theta2)

    r_e = max(r_e, 0.0)
    theta_tilde, theta_hat = (None, None)
    if solve_exponents:
        theta_tilde, theta_hat = _operating_exponents(link1, link2, r_e, theta1, theta0)

    return EffCapResult(
        r_e=r_e,
        case_tag=case_tag,
        theta_tilde=theta_tilde,
        theta_hat=theta_hat,
        theta_star=geometry.theta_star if geometry else None,
        theta_star_star=geometry.theta_star_star if geometry else None,
        theta2_prime=geometry.theta2_prime if geometry else None,
        theta_tilde_0=theta0,
    )
