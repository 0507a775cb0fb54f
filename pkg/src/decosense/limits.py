"""Standard-quantum-limit formulas for force sensing under momentum diffusion.

Everything here is closed-form algebra on experiment parameters: the weakest
force resolvable with a free test mass in time T, the diffusion level that
masks such a force, preparation/measurement widths that saturate the limit,
and the hbar -> 0 scaling experiment that keeps the decoherence signal fixed
while the force signal-to-noise dies off.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import NamedTuple

__all__ = [
    "ExperimentConfig",
    "force_sql",
    "diffusion_sql",
    "d_min",
    "OptimalWidths",
    "optimal_widths",
    "DiffusionSpreads",
    "diffusion_spreads",
    "decoherence_exponents",
    "HbarScaling",
    "hbar_scaling",
]


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name}: must be a positive finite number, got {value!r}")
    return value


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters of one free-mass sensing run.

    m, T, hbar are mandatory and positive; L is the superposition separation
    (optional, needed only by interferometric quantities); F is an applied
    force and D a momentum diffusion coefficient (d<p^2>/dt = 2D).
    """

    m: float = 1.0
    T: float = 1.0
    hbar: float = 1.0
    L: float | None = None
    F: float = 0.0
    D: float = 0.0

    def __post_init__(self) -> None:
        _require_positive("m", self.m)
        _require_positive("T", self.T)
        _require_positive("hbar", self.hbar)
        if self.L is not None:
            _require_positive("L", self.L)
        if not math.isfinite(self.F):
            raise ValueError(f"F: must be finite, got {self.F!r}")
        if not math.isfinite(self.D) or self.D < 0.0:
            raise ValueError(f"D: must be a nonnegative finite number, got {self.D!r}")

    def require_L(self) -> float:
        if self.L is None:
            raise ValueError("L: required for this quantity but not set")
        return self.L


def force_sql(m: float, T: float, hbar: float = 1.0) -> float:
    """Weakest force resolvable at unit signal-to-noise in time T: 2*sqrt(hbar m / T^3)."""
    return 2.0 * math.sqrt(hbar * m / T**3)


def diffusion_sql(m: float, T: float, hbar: float = 1.0) -> float:
    """Momentum diffusion whose position spread equals the SQL force displacement.

    D_SQL = 9 hbar m / (8 T^2). At this level the diffusive spread
    sqrt(8 D T^3)/(3 m) equals the displacement F_SQL T^2 / (2 m).
    """
    return 9.0 * hbar * m / (8.0 * T**2)


def d_min(T: float, L: float, hbar: float = 1.0) -> float:
    """Smallest diffusion detectable interferometrically with separation L: hbar^2/(T L^2)."""
    return hbar**2 / (T * L**2)


class OptimalWidths(NamedTuple):
    sigma_x_prep: float
    sigma_p_prep: float
    sigma_x_disp: float
    sigma_x_meas: float


def optimal_widths(m: float, T: float, hbar: float = 1.0) -> OptimalWidths:
    """Preparation width minimizing the final position spread, and its companions.

    The preparation spread sigma_x_prep = sqrt(hbar T / 2m) balances against
    the dispersion spread hbar T/(2 m sigma_x_prep); at the optimum the two are
    equal and the measured spread is sigma_x_meas = sqrt(2) * sigma_x_prep.
    """
    sigma_x = math.sqrt(hbar * T / (2.0 * m))
    sigma_p = hbar / (2.0 * sigma_x)
    sigma_disp = hbar * T / (2.0 * m * sigma_x)
    sigma_meas = math.sqrt(hbar * T / m)
    return OptimalWidths(sigma_x, sigma_p, sigma_disp, sigma_meas)


class DiffusionSpreads(NamedTuple):
    sigma_p_diff: float
    sigma_x_diff: float


def diffusion_spreads(D: float, T: float, m: float) -> DiffusionSpreads:
    """Heuristic momentum and position spreads accumulated by diffusion alone.

    sigma_p_diff = sqrt(2 D T); sigma_x_diff = sqrt(8 D T^3)/(3 m), the
    time-integral of sigma_p_diff(t)/m (a spread of spreads, not the variance
    growth 2 D T^3/(3 m^2) of the full covariance law).
    """
    sigma_p = math.sqrt(2.0 * D * T)
    sigma_x = math.sqrt(8.0 * D * T**3) / (3.0 * m)
    return DiffusionSpreads(sigma_p, sigma_x)


def decoherence_exponents(config: ExperimentConfig) -> tuple[float, float]:
    """(s, theta) for a separation-L superposition held for time T.

    s = D L^2 T / hbar^2 is the contrast-loss exponent, theta = F L T / hbar
    the relative phase wound by a uniform force.
    """
    L = config.require_L()
    s = config.D * L**2 * config.T / config.hbar**2
    theta = config.F * L * config.T / config.hbar
    return s, theta


@dataclass(frozen=True)
class HbarScaling:
    """One step of the classical-limit scaling kappa: hbar, F scale by kappa, D by kappa^2."""

    scaled: ExperimentConfig
    gamma_before: complex
    gamma_after: complex

    @property
    def gamma_drift(self) -> float:
        return abs(self.gamma_after - self.gamma_before)


def _gamma(config: ExperimentConfig) -> complex:
    s, theta = decoherence_exponents(config)
    return cmath.exp(complex(-s, theta))


def hbar_scaling(config: ExperimentConfig, kappa: float) -> HbarScaling:
    """Rescale (hbar, F, D) -> (kappa*hbar, kappa*F, kappa^2*D) at fixed L, T.

    This holds F/hbar and D/hbar^2 fixed, so the decoherence factor gamma is
    invariant while F/F_SQL shrinks like sqrt(kappa): the same environment
    that is flagrant interferometrically becomes force-undetectable.
    """
    _require_positive("kappa", kappa)
    before = _gamma(config)
    scaled = replace(
        config,
        hbar=kappa * config.hbar,
        F=kappa * config.F,
        D=kappa**2 * config.D,
    )
    return HbarScaling(scaled, before, _gamma(scaled))
