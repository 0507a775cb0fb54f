"""Exact propagation of analytic states under frictionless momentum diffusion.

The evolution solved here is the phase-space transport equation

    dW/dt = -(p/m) dW/dx + D d^2W/dp^2,

whose exact solution is a free-streaming shear followed by convolution with a
Gaussian kernel of covariance C_t. Everything in this module is closed-form;
the finite-difference integrator in the grid module exists to check it, not
the other way around.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import CatState, ComplexGaussian, ComponentState, GaussianState, cat_wigner_value

__all__ = [
    "PropagatorKernel",
    "EvolvedCat",
    "shear_matrix",
    "propagator_kernel",
    "propagate_gaussian",
    "propagate_gaussian_with_force",
    "propagate_cat",
    "decoherence_time",
    "off_diagonal_decay",
    "cat_wigner_value",
]


def shear_matrix(t: float, m: float) -> np.ndarray:
    """Forward free-flight map R_t: (x, p) -> (x + p t/m, p)."""
    return np.array([[1.0, t / m], [0.0, 1.0]])


@dataclass(frozen=True)
class PropagatorKernel:
    """Gaussian smoothing kernel of the exact solution, with its shear time."""

    cov: np.ndarray
    t: float
    m: float

    def __post_init__(self) -> None:
        c = np.asarray(self.cov, dtype=float)
        if c.shape != (2, 2) or not np.all(np.isfinite(c)):
            raise ValueError("cov: expected a finite 2x2 matrix")
        c = 0.5 * (c + c.T)
        eigs = np.linalg.eigvalsh(c)
        if eigs[0] < -1e-12 * max(1.0, float(eigs[-1])):
            raise ValueError(f"cov: kernel covariance not PSD (eigenvalue {eigs[0]:.6g})")
        c.setflags(write=False)
        object.__setattr__(self, "cov", c)

    @property
    def shear(self) -> np.ndarray:
        return shear_matrix(self.t, self.m)


def propagator_kernel(D: float, m: float, t: float) -> PropagatorKernel:
    """Kernel covariance C_t for diffusion D over duration t.

    C_t = 2Dt * [[t^2/(3m^2), t/(2m)], [t/(2m), 1]]. The normalization is
    fixed by the moment equations d Var(p)/dt = 2D, d Cov/dt = Var(p)/m,
    d Var(x)/dt = 2 Cov/m, so the pp entry is 2Dt exactly.
    """
    if D < 0:
        raise ValueError(f"D: diffusion coefficient must be >= 0, got {D!r}")
    if t < 0:
        raise ValueError(f"t: duration must be >= 0, got {t!r}")
    if m <= 0:
        raise ValueError(f"m: mass must be positive, got {m!r}")
    tau = t / m
    cov = 2.0 * D * t * np.array([[tau * tau / 3.0, tau / 2.0], [tau / 2.0, 1.0]])
    return PropagatorKernel(cov, t, m)


def propagate_gaussian(state: GaussianState, D: float, m: float, t: float) -> GaussianState:
    """Exact evolution of a Gaussian: shear the mean, Sigma -> R S R^T + C_t."""
    kernel = propagator_kernel(D, m, t)
    r = kernel.shear
    mean = r @ state.mean
    cov = r @ state.cov @ r.T + kernel.cov
    return GaussianState(float(mean[0]), float(mean[1]), cov, state.hbar)


def propagate_gaussian_with_force(state: GaussianState, F: float, m: float, t: float) -> GaussianState:
    """Free flight plus a uniform force: mean gains (F t^2/(2m), F t).

    A uniform force translates the wavepacket without touching the
    covariance, so the covariance law is that of propagate_gaussian at D=0.
    """
    out = propagate_gaussian(state, 0.0, m, t)
    return GaussianState(
        out.x0 + F * t * t / (2.0 * m),
        out.p0 + F * t,
        out.cov,
        out.hbar,
    )


@dataclass(frozen=True)
class EvolvedCat:
    """Cat-state geometry after diffusive evolution.

    Branches are GaussianStates (generally mixed, so this is not a CatState),
    and the interference term is carried as an explicit phase-space component
    with its exact post-convolution amplitude. gamma is the closed-form
    decoherence factor exp(-D L^2 t / hbar^2); the interference component's
    own damping agrees with |gamma| to leading order and additionally contains
    the small envelope-spreading corrections.
    """

    packet1: GaussianState
    packet2: GaussianState
    amp2: complex
    comps: tuple
    gamma: complex

    @property
    def hbar(self) -> float:
        return self.packet1.hbar

    @property
    def separation(self) -> float:
        return abs(self.packet1.x0 - self.packet2.x0)

    @property
    def interference(self) -> ComplexGaussian:
        return self.comps[2]

    def packets(self) -> list:
        return [self.packet1, self.packet2]

    def components(self) -> list:
        return list(self.comps)

    def incoherent_components(self) -> list:
        return list(self.comps[:2])

    def incoherent(self) -> ComponentState:
        return ComponentState(tuple(self.comps[:2]), (self.packet1, self.packet2), self.hbar)

    def wigner(self, x, p):
        total = None
        for comp in self.components():
            v = comp.value(x, p)
            total = v if total is None else total + v
        return total

    def marginal(self, axis: int, coords):
        total = None
        for comp in self.components():
            v = comp.marginal(axis, coords)
            total = v if total is None else total + v
        return total


def propagate_cat(cat: CatState, D: float, m: float, t: float):
    """Evolve a cat exactly; returns (geometry, decoherence factor gamma).

    Each branch follows propagate_gaussian. The interference component is
    sheared and convolved exactly, and the reported gamma is the closed-form
    exp(-D L^2 t / hbar^2) valid for equal branch momenta (static separation).
    Cats with unequal branch momenta are rejected here: their separation is
    time-dependent and the closed form does not apply (evolve them on a grid
    instead).
    """
    dp = abs(cat.packet1.p0 - cat.packet2.p0)
    pscale = max(1.0, abs(cat.packet1.p0), abs(cat.packet2.p0))
    if dp > 1e-12 * pscale:
        raise ValueError(
            "propagate_cat: branch momenta differ; the closed-form decoherence "
            "factor needs a static separation. Use the grid integrator."
        )
    kernel = propagator_kernel(D, m, t)
    r = kernel.shear
    p1 = propagate_gaussian(cat.packet1, D, m, t)
    p2 = propagate_gaussian(cat.packet2, D, m, t)
    comps = tuple(c.affine(r, np.zeros(2)).convolve(kernel.cov) for c in cat.components())
    sep = cat.separation
    gamma = complex(math.exp(-D * t * (sep * sep) / (cat.hbar * cat.hbar)))
    return EvolvedCat(p1, p2, complex(cat.amp2), comps, gamma), gamma


def decoherence_time(D: float, L: float, hbar: float = 1.0):
    """tau_D = hbar^2 / (D L^2); infinity when D = 0 (no decoherence, ever)."""
    if D < 0:
        raise ValueError(f"D: diffusion coefficient must be >= 0, got {D!r}")
    if L <= 0:
        raise ValueError(f"L: separation must be positive, got {L!r}")
    if D == 0:
        return math.inf
    return hbar * hbar / (D * L * L)


def off_diagonal_decay(x: float, xp: float, D: float, t: float, hbar: float = 1.0) -> float:
    """Coherence suppression exp[-D t (x - x')^2 / hbar^2] of rho(x, x')."""
    if D < 0 or t < 0:
        raise ValueError("D and t must be >= 0")
    sep = abs(x - xp)
    return math.exp(-D * t * (sep * sep) / (hbar * hbar))
