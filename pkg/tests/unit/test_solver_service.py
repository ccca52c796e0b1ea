"""
Tests unitarios para el solver de capacidad efectiva de dos saltos.

Los casos deterministas tienen solución exacta a mano; los Rayleigh usan los
parámetros de referencia (T = 2 ms, B = 10⁵ Hz, SNR 0 / 10 dB).
"""

import math

import numpy as np
import pytest

from relaycap.config.settings import settings
from relaycap.core.exceptions import (
    DomainException,
    InstabilityException,
    NoSolutionException,
)
from relaycap.domain.lmgf.models import LinkParams, QosPair
from relaycap.domain.lmgf.service import link_effective_capacity
from relaycap.domain.solver.models import CaseTag
from relaycap.domain.solver.service import (
    case_two_geometry,
    check_stability,
    crossing_theta_star,
    effective_capacity,
    solve_theta_hat,
    solve_theta_tilde,
    theta2_prime,
    theta_tilde_0,
)


@pytest.mark.unit
class TestStability:
    """Tests de la condición de estabilidad"""

    def test_stronger_relay_link_is_stable(self, source_link, relay_link):
        """SNR₂ > SNR₁ con el mismo fading → estable"""
        assert check_stability(source_link, relay_link) is True

    def test_identical_links_are_unstable(self, source_link):
        """Capacidades ergódicas iguales → inestable"""
        assert check_stability(source_link, source_link) is False

    def test_misordered_links_are_unstable(self, source_link, relay_link):
        """SNR₁ > SNR₂ → inestable"""
        assert check_stability(relay_link, source_link) is False


@pytest.mark.unit
class TestSolveThetaTilde:
    """Tests de θ̃(R)"""

    def test_inverts_effective_capacity(self, source_link):
        """θ̃(E_C(0.01)) = 0.01"""
        rate = link_effective_capacity(source_link, 0.01)

        assert solve_theta_tilde(source_link, rate) == pytest.approx(0.01, rel=1e-6)

    def test_decreasing_in_rate(self, source_link):
        """Más tasa → exponente menor"""
        assert solve_theta_tilde(source_link, 150.0) < solve_theta_tilde(source_link, 100.0)

    def test_deterministic_service_never_queues(self, link_200):
        """R < c con servicio constante → +∞"""
        assert math.isinf(solve_theta_tilde(link_200, 100.0))

    @pytest.mark.edge_case
    def test_rate_at_ergodic_capacity(self, link_200):
        """R >= capacidad ergódica → sin solución"""
        with pytest.raises(NoSolutionException):
            solve_theta_tilde(link_200, 200.0)

    @pytest.mark.edge_case
    def test_nonpositive_rate(self, source_link):
        """R <= 0 → error de dominio"""
        with pytest.raises(DomainException):
            solve_theta_tilde(source_link, 0.0)


@pytest.mark.unit
class TestSolveThetaHat:
    """Tests de θ̂(R, θ̃)"""

    def test_dominant_relay_never_queues(self, link_200, link_300):
        """c₁ = 200, c₂ = 300, R = 100 → +∞"""
        assert math.isinf(solve_theta_hat(link_200, link_300, 100.0, math.inf))

    def test_on_off_relay_closed_form(self, link_200, on_off_link):
        """Relay on-off (0 / 200 bits), R = 50, llegadas constantes

        x = e^{−50θ} cumple x³ + x² + x − 1 = 0.
        """
        roots = np.roots([1.0, 1.0, 1.0, -1.0])
        x = float(next(r.real for r in roots if abs(r.imag) < 1e-12 and 0 < r.real < 1))

        result = solve_theta_hat(link_200, on_off_link, 50.0, math.inf)

        assert result == pytest.approx(-math.log(x) / 50.0, rel=1e-7)

    @pytest.mark.edge_case
    def test_rate_above_relay_ergodic_capacity(self, link_200, link_100):
        """R >= capacidad ergódica H-D → inestable"""
        with pytest.raises(InstabilityException):
            solve_theta_hat(link_200, link_100, 150.0, math.inf)


@pytest.mark.unit
class TestCrossing:
    """Tests del cruce θ*"""

    def test_constant_links_100(self, link_200, link_100):
        """c₁ = 200, c₂ = 100, θ₁ = 0.01 → θ* = 0.02"""
        assert crossing_theta_star(link_200, link_100, 0.01) == pytest.approx(0.02, rel=1e-8)

    def test_constant_links_150(self, link_200, link_150):
        """c₁ = 200, c₂ = 150, θ₁ = 0.01 → θ* = 0.04"""
        assert crossing_theta_star(link_200, link_150, 0.01) == pytest.approx(0.04, rel=1e-8)

    def test_reference_links_cross(self, source_link, relay_link):
        """Con Rayleigh siempre hay cruce por encima de θ₁"""
        theta_star = crossing_theta_star(source_link, relay_link, 0.01)

        assert theta_star > 0.01
        assert link_effective_capacity(relay_link, theta_star) > 0

    @pytest.mark.edge_case
    def test_dominant_relay_has_no_crossing(self, link_200, link_300):
        """c₂ > c₁ constantes → E_C domina siempre"""
        with pytest.raises(NoSolutionException) as exc_info:
            crossing_theta_star(link_200, link_300, 0.01)

        assert exc_info.value.details["dominant"] == "E_C"


@pytest.mark.unit
class TestThetaTwoPrime:
    """Tests de la frontera θ'₂"""

    def test_empty_flat_region(self, link_200, link_150):
        """c₁ = 200, c₂ = 150 → el objetivo nunca alcanza E_C1(θ₁): θ'₂ = 0"""
        assert theta2_prime(link_200, link_150, 0.01) == 0.0

    def test_no_crossing_gives_infinity(self, link_200, link_300):
        """Sin cruce → θ'₂ = +∞"""
        assert math.isinf(theta2_prime(link_200, link_300, 0.01))

    def test_reference_links(self, source_link, relay_link):
        """θ₁ < θ'₂ < θ* con los enlaces de referencia"""
        geometry = case_two_geometry(source_link, relay_link, 0.01)

        assert 0.01 < geometry.theta2_prime < geometry.theta_star

    def test_geometry_is_cached_per_tolerance(self, source_link, relay_link, monkeypatch):
        """Cambiar root_tol o quad_tol obliga a resolver de nuevo"""
        # Configurar
        first = case_two_geometry(source_link, relay_link, 0.01)

        # Ejecutar
        again = case_two_geometry(source_link, relay_link, 0.01)
        monkeypatch.setattr(settings, "root_tol", 1e-3)
        loose_root = case_two_geometry(source_link, relay_link, 0.01)
        monkeypatch.setattr(settings, "quad_tol", 1e-8)
        loose_quad = case_two_geometry(source_link, relay_link, 0.01)

        # Verificar
        assert again is first
        assert loose_root is not first
        assert loose_quad is not loose_root
        assert loose_root.theta2_prime == pytest.approx(first.theta2_prime, rel=1e-2)

    def test_nondecreasing_in_relay_snr(self, source_link):
        """θ'₂ no decrece con SNR₂"""
        values = [
            theta2_prime(source_link, LinkParams.from_db(snr2_db), 0.01)
            for snr2_db in (5.0, 10.0, 15.0)
        ]

        assert values[0] <= values[1] <= values[2]


@pytest.mark.unit
class TestThetaTildeZero:
    """Tests del punto de equilibrio θ̃₀"""

    def test_first_term_dominates(self, link_200, link_150):
        """c₁ = 200, c₂ = 150, θ₂ = 0.02 → θ̃₀ = θ₂"""
        assert theta_tilde_0(link_200, link_150, 0.01, 0.02) == pytest.approx(0.02)

    def test_inside_interval(self, source_link, relay_link):
        """Con Rayleigh θ̃₀ cae en [θ₁, θ₂]"""
        boundary = theta2_prime(source_link, relay_link, 0.01)
        theta2 = 2.0 * boundary

        assert 0.01 <= theta_tilde_0(source_link, relay_link, 0.01, theta2) <= theta2

    @pytest.mark.edge_case
    def test_requires_theta2_above_theta1(self, link_200, link_150):
        """θ₂ <= θ₁ → error de dominio"""
        with pytest.raises(DomainException):
            theta_tilde_0(link_200, link_150, 0.01, 0.01)

    @pytest.mark.edge_case
    def test_requires_theta2_above_boundary(self, source_link, relay_link):
        """θ₂ <= θ'₂ → error de dominio"""
        boundary = theta2_prime(source_link, relay_link, 0.01)

        with pytest.raises(DomainException):
            theta_tilde_0(source_link, relay_link, 0.01, 0.5 * (0.01 + boundary))


@pytest.mark.unit
class TestEffectiveCapacity:
    """Tests del despacho por casos"""

    def test_case_one_reference(self, source_link, relay_link):
        """θ₂ = 0.001 < θ₁ → CaseI, r_e = E_C1(θ₁) ≈ 117.88"""
        result = effective_capacity(source_link, relay_link, QosPair(theta1=0.01, theta2=0.001))

        assert result.case_tag == CaseTag.CASE_I
        assert result.r_e == pytest.approx(117.88, abs=0.05)
        assert result.theta_tilde == 0.01
        assert result.theta_hat is not None and result.theta_hat > 0.001

    def test_case_one_deterministic(self, link_200, link_300):
        """Constantes: r_e = min(c₁, c₂)"""
        result = effective_capacity(link_200, link_300, QosPair(theta1=0.01, theta2=0.005))

        assert result.case_tag == CaseTag.CASE_I
        assert result.r_e == pytest.approx(200.0, rel=1e-12)
        assert math.isinf(result.theta_hat)

    def test_case_two_deterministic_flat(self, link_200, link_300):
        """Constantes sin cruce → CaseII_1 con r_e = c₁"""
        result = effective_capacity(link_200, link_300, QosPair(theta1=0.01, theta2=0.5))

        assert result.case_tag == CaseTag.CASE_II_1
        assert result.r_e == pytest.approx(200.0, rel=1e-12)
        assert math.isinf(result.theta2_prime)

    def test_unstable(self, source_link, relay_link):
        """SNR₁ > SNR₂ → Unstable, r_e = 0"""
        result = effective_capacity(relay_link, source_link, QosPair(theta1=0.01, theta2=0.01))

        assert result.case_tag == CaseTag.UNSTABLE
        assert result.r_e == 0.0

    def test_flat_then_decreasing_in_theta2(self, source_link, relay_link):
        """r_e(θ₂) es plano hasta θ'₂ y estrictamente menor después"""
        source_only = link_effective_capacity(source_link, 0.01)
        boundary = theta2_prime(source_link, relay_link, 0.01)
        grid = np.geomspace(1e-4, 1.0, 50)

        values = [
            effective_capacity(
                source_link, relay_link, QosPair(theta1=0.01, theta2=float(t)), solve_exponents=False
            ).r_e
            for t in grid
        ]

        assert all(b <= a for a, b in zip(values, values[1:]))
        for theta2, r_e in zip(grid, values):
            if theta2 <= boundary:
                assert r_e == pytest.approx(source_only, rel=1e-6)
            else:
                assert r_e < source_only

    def test_case_two_two_solves_exponents(self, source_link, relay_link):
        """En CaseII_2 θ̂ alcanza θ₂ (la restricción del relay es activa o holgada)"""
        boundary = theta2_prime(source_link, relay_link, 0.01)
        theta2 = 3.0 * boundary
        result = effective_capacity(source_link, relay_link, QosPair(theta1=0.01, theta2=theta2))

        assert result.case_tag == CaseTag.CASE_II_2
        assert 0.01 <= result.theta_tilde_0 <= theta2
        assert result.theta_tilde >= 0.01 * (1 - 1e-6)
        assert result.theta_hat >= theta2 * (1 - 1e-4)

    @pytest.mark.parametrize("theta2", [0.001, 0.01, 0.02, 0.05, 0.2])
    def test_rate_just_below_r_e_meets_both_constraints(self, source_link, relay_link, theta2):
        """R = r_e·(1 − 1e-6) → θ̃ >= θ₁ y θ̂ >= θ₂ en todos los casos"""
        # Configurar
        qos = QosPair(theta1=0.01, theta2=theta2)
        r_e = effective_capacity(source_link, relay_link, qos, solve_exponents=False).r_e
        rate = r_e * (1 - 1e-6)

        # Ejecutar
        theta_tilde = solve_theta_tilde(source_link, rate)
        theta_hat = solve_theta_hat(source_link, relay_link, rate, theta_tilde)

        # Verificar
        assert theta_tilde >= qos.theta1
        assert theta_hat >= theta2 * (1 - 1e-9)

    @pytest.mark.parametrize("snr1_db", [0.0, 5.0])
    @pytest.mark.parametrize("snr_gap_db", [0.1, 5.0])
    @pytest.mark.parametrize("ratio", [0.1, 0.5, 1.0])
    def test_relay_does_no_harm_in_case_one(self, snr1_db, snr_gap_db, ratio):
        """Mismo fading, SNR₂ >= SNR₁ y θ₂ <= θ₁ → capacidad de la fuente sola"""
        link1 = LinkParams.from_db(snr1_db)
        link2 = LinkParams.from_db(snr1_db + snr_gap_db)
        qos = QosPair(theta1=0.01, theta2=0.01 * ratio)

        result = effective_capacity(link1, link2, qos, solve_exponents=False)

        assert result.r_e == pytest.approx(link_effective_capacity(link1, 0.01), rel=1e-9)

    def test_continuous_across_theta1(self, source_link, relay_link):
        """Continuidad en θ₂ = θ₁"""
        below = effective_capacity(
            source_link, relay_link, QosPair(theta1=0.01, theta2=0.01 * (1 - 1e-6))
        ).r_e
        above = effective_capacity(
            source_link, relay_link, QosPair(theta1=0.01, theta2=0.01 * (1 + 1e-6))
        ).r_e

        assert above == pytest.approx(below, rel=settings.continuity_tol)

    def test_continuous_across_boundary(self, source_link, relay_link):
        """Continuidad en θ₂ = θ'₂"""
        boundary = theta2_prime(source_link, relay_link, 0.01)
        below = effective_capacity(
            source_link, relay_link, QosPair(theta1=0.01, theta2=boundary * (1 - 1e-6))
        ).r_e
        above = effective_capacity(
            source_link, relay_link, QosPair(theta1=0.01, theta2=boundary * (1 + 1e-6))
        ).r_e

        assert above == pytest.approx(below, rel=settings.continuity_tol)

    @pytest.mark.slow
    def test_vanishes_for_large_theta2(self, source_link, relay_link):
        """Con Rayleigh r_e → 0 al crecer θ₂"""
        values = [
            effective_capacity(
                source_link, relay_link, QosPair(theta1=0.01, theta2=t), solve_exponents=False
            ).r_e
            for t in (1.0, 5.0, 50.0)
        ]

        assert values[0] > values[1] > values[2]
        assert values[2] < 1.0
