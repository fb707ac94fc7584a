"""Parameters, derived coefficients, thresholds, and equilibria.

The model couples an infected-bird density U and an infected-mosquito
density V on a habitat (g(t), h(t)) with moving ends:

    U_t = D1 U_xx - mu U_x + a1 (N1 - U) V - gamma U
    V_t = D2 V_xx           + a2 (N2 - V) U - d V
    U = V = 0 on the fronts,  g' = -nu U_x(g,t),  h' = -nu U_x(h,t)

with composite infection coefficients a1 = alpha1*beta/N1 and
a2 = alpha2*beta/N1.  Everything downstream (eigen solves, the Stefan
integrator, wave speeds, the CLI) consumes the two parameter records
defined here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple


class ValidationError(ValueError):
    """Model parameters violate their admissibility constraints."""


MU_STAR_CONVENTIONS = ("definition", "alternate")


@dataclass(frozen=True)
class RawParams:
    """Physical parameters of the bird/mosquito transmission system.

    Diffusivities are length^2/time, rates 1/time, carrying capacities
    individuals/length, mu length/time (signed), nu length^2/(time*individuals).
    """

    D1: float       # bird diffusion
    D2: float       # mosquito diffusion
    mu: float       # bird advection (may be negative)
    alpha1: float   # per-bite transmission probability to birds
    alpha2: float   # per-bite transmission probability to mosquitoes
    beta: float     # biting rate
    gamma: float    # bird recovery rate
    d: float        # mosquito death rate
    N1: float       # bird carrying capacity
    N2: float       # mosquito carrying capacity
    nu: float       # boundary expanding capability (0 freezes the fronts)
    h0: float       # initial habitat half-width

    _FIELDS = ("D1", "D2", "mu", "alpha1", "alpha2", "beta", "gamma", "d",
               "N1", "N2", "nu", "h0")

    def validate(self) -> None:
        for name in self._FIELDS:
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ValidationError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value!r}")
        for name in ("D1", "D2", "gamma", "d", "N1", "N2", "h0"):
            if getattr(self, name) <= 0:
                raise ValidationError(
                    f"{name} must be positive, got {getattr(self, name)}")
        if self.beta < 0:
            raise ValidationError(f"beta must be nonnegative, got {self.beta}")
        # nu = 0 is the degenerate Stefan case (frozen fronts) and is accepted.
        if self.nu < 0:
            raise ValidationError(f"nu must be nonnegative, got {self.nu}")
        for name in ("alpha1", "alpha2"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class DerivedParams:
    """Quantities computed once from RawParams.

    mu_star_def solves R0(mu) = 1 for the far-field reproduction number,
    mu_star_def = 2*sqrt(D1*(a1 a2 N1 N2/d - gamma)).  mu_star_alt is the
    alternate published convention with gamma and d interchanged,
    2*sqrt(D1*(a1 a2 N1 N2/gamma - d)).  Both are 0 when the radicand is
    negative; the harness flag mu_star_convention selects which one gates
    the small-advection hypothesis.
    """

    a1: float
    a2: float
    R_bulk: float        # a1 a2 N1 N2 / (gamma d)
    mu_star_def: float
    mu_star_alt: float
    U_star: float        # endemic equilibrium, 0 when it does not exist
    V_star: float
    R0_mu: float         # far-field sqrt(a1 a2 N1 N2 / ((mu^2/4D1 + gamma) d))


def derive_params(raw: RawParams) -> DerivedParams:
    """Populate composite coefficients, thresholds, and the equilibrium.

    U* = (a1 a2 N1 N2 - gamma d)/(a1 a2 N2 + a2 gamma) and
    V* = (a1 a2 N1 N2 - gamma d)/(a1 a2 N1 + a1 d) whenever the bulk
    product exceeds gamma*d; otherwise the endemic state does not exist
    and both are reported as 0.
    """
    raw.validate()
    a1 = raw.alpha1 * raw.beta / raw.N1
    a2 = raw.alpha2 * raw.beta / raw.N1
    product = a1 * a2 * raw.N1 * raw.N2
    R_bulk = product / (raw.gamma * raw.d)
    rad_def = raw.D1 * (product / raw.d - raw.gamma)
    rad_alt = raw.D1 * (product / raw.gamma - raw.d)
    mu_star_def = 2.0 * math.sqrt(rad_def) if rad_def > 0.0 else 0.0
    mu_star_alt = 2.0 * math.sqrt(rad_alt) if rad_alt > 0.0 else 0.0
    if product > raw.gamma * raw.d:
        U_star = (product - raw.gamma * raw.d) / (a1 * a2 * raw.N2 + a2 * raw.gamma)
        V_star = (product - raw.gamma * raw.d) / (a1 * a2 * raw.N1 + a1 * raw.d)
    else:
        U_star = 0.0
        V_star = 0.0
    R0_mu = math.sqrt(
        product / ((raw.mu * raw.mu / (4.0 * raw.D1) + raw.gamma) * raw.d))
    return DerivedParams(a1=a1, a2=a2, R_bulk=R_bulk,
                         mu_star_def=mu_star_def, mu_star_alt=mu_star_alt,
                         U_star=U_star, V_star=V_star, R0_mu=R0_mu)


class R0Value(NamedTuple):
    """Reproduction number in both reporting conventions.

    value is the square root of the spectral ratio; inner is the ratio
    itself (the squared form is common in reported tables).  Both cross 1
    together, so threshold conclusions are identical.
    """

    value: float
    inner: float


def r0_closed_form(dp: DerivedParams, raw: RawParams,
                   left: float, right: float, mu: float) -> R0Value:
    """Closed-form reproduction number on (left, right) under advection mu.

    inner = a1 a2 N1 N2 / ([D1 (pi/L)^2 + mu^2/(4 D1) + gamma]
                           [D2 (pi/L)^2 + d]),    L = right - left.
    """
    if not left < right:
        raise ValueError(f"interval requires left < right, got ({left}, {right})")
    L = right - left
    k2 = (math.pi / L) ** 2
    denom = ((raw.D1 * k2 + mu * mu / (4.0 * raw.D1) + raw.gamma)
             * (raw.D2 * k2 + raw.d))
    inner = dp.a1 * dp.a2 * raw.N1 * raw.N2 / denom
    return R0Value(math.sqrt(inner), inner)


def risk_index(dp: DerivedParams, raw: RawParams,
               g: float, h: float, mu: float) -> R0Value:
    """Risk index at the current front positions: r0_closed_form on (g, h)."""
    if not g < h:
        raise ValueError(f"front positions require g < h, got ({g}, {h})")
    return r0_closed_form(dp, raw, g, h, mu)


def select_mu_star(dp: DerivedParams, convention: str) -> float:
    if convention == "definition":
        return dp.mu_star_def
    if convention == "alternate":
        return dp.mu_star_alt
    raise ValidationError(
        f"mu_star_convention must be one of {MU_STAR_CONVENTIONS}, got {convention!r}")


def check_hypothesis_H(dp: DerivedParams, raw: RawParams,
                       mu_star_convention: str = "definition") -> tuple[bool, bool]:
    """Truth values of the standing hypothesis: high risk and small advection.

    Returns (a1 a2 N1 N2 > gamma d, |mu| < mu* under the selected convention).
    """
    mu_star = select_mu_star(dp, mu_star_convention)
    high_risk = dp.a1 * dp.a2 * raw.N1 * raw.N2 > raw.gamma * raw.d
    small_advection = abs(raw.mu) < mu_star
    return high_risk, small_advection
