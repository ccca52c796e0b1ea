"""Modelos de dominio del solver de capacidad efectiva de dos saltos."""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class CaseTag(str, Enum):
    """Rama del resultado aplicada."""

    CASE_I = "CaseI"  # θ₁ >= θ₂
    CASE_II_1 = "CaseII_1"  # θ₁ < θ₂ <= θ'₂ (zona plana)
    CASE_II_2 = "CaseII_2"  # θ₂ > θ'₂
    UNSTABLE = "Unstable"  # capacidad ergódica S–H >= H–D


class CaseTwoGeometry(BaseModel):
    """Puntos del caso θ₁ < θ₂ que solo dependen de (θ₁, enlaces), no de θ₂.

    Attributes:
        theta_star (Optional[float]): Cruce E_C(θ*) = E_B(θ* − θ₁); None si E_C
            domina siempre.
        theta_star_star (Optional[float]): Punto estacionario del objetivo en
            [θ₁, θ*]; None si el objetivo decrece desde θ₁.
        theta2_prime (float): Mayor θ₂ que deja intacta la capacidad de la fuente;
            0 si la zona plana es vacía, +∞ si no hay cruce.
        objective_max (float): Valor del objetivo en su máximo sobre θ >= θ₁.
    """

    model_config = ConfigDict(frozen=True)

    theta_star: Optional[float] = None
    theta_star_star: Optional[float] = None
    theta2_prime: float = Field(..., ge=0)
    objective_max: float


class EffCapResult(BaseModel):
    """Capacidad efectiva R_E y todos los exponentes auxiliares resueltos.

    Attributes:
        r_e (float): Capacidad efectiva en bits por bloque (>= 0).
        case_tag (CaseTag): Rama aplicada.
        theta_tilde (Optional[float]): Exponente de la fuente para R = r_e.
        theta_hat (Optional[float]): Exponente del relay para R = r_e (+∞ si el
            relay nunca congestiona).
        theta_star (Optional[float]): Cruce E_C/E_B.
        theta_star_star (Optional[float]): Punto estacionario del objetivo.
        theta2_prime (Optional[float]): Frontera entre CaseII_1 y CaseII_2.
        theta_tilde_0 (Optional[float]): Punto de equilibrio de CaseII_2.
    """

    model_config = ConfigDict(frozen=True)

    r_e: float = Field(..., ge=0)
    case_tag: CaseTag
    theta_tilde: Optional[float] = None
    theta_hat: Optional[float] = None
    theta_star: Optional[float] = None
    theta_star_star: Optional[float] = None
    theta2_prime: Optional[float] = None
    theta_tilde_0: Optional[float] = None
