"""Detection statistics: the two-level decoherence channel and Chernoff tests.

Two routes to a per-trial error exponent are implemented. Gaussian
preparations are discriminated through their final position distributions;
cat preparations through the interferometer outcome, whose statistics depend
on the decoherence factor gamma = e^{-s+i theta} alone. Both reduce to
chernoff_exponent over SampledDistributions, so the comparison between them
(the SQL-beating claim) runs through one code path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize_scalar

from .dynamics import propagate_gaussian, propagate_gaussian_with_force
from .limits import ExperimentConfig, decoherence_exponents, optimal_widths
from .states import CatState, GaussianState, gaussian_wavepacket

__all__ = [
    "DecoherenceFactor",
    "TwoLevelChannel",
    "SampledDistribution",
    "apply_channel",
    "decoherence_factor_from_config",
    "interferometer_probabilities",
    "chernoff_exponent",
    "detection_error_exponent",
    "optimize_gaussian_preparation",
]


@dataclass(frozen=True)
class DecoherenceFactor:
    """gamma = <E1|E2>, the overlap of the environment branches."""

    gamma: complex

    def __post_init__(self) -> None:
        g = complex(self.gamma)
        if not (math.isfinite(g.real) and math.isfinite(g.imag)):
            raise ValueError("gamma: must be finite")
        if abs(g) > 1.0 + 1e-12:
            raise ValueError(f"gamma: |gamma| = {abs(g):.6g} exceeds 1")
        object.__setattr__(self, "gamma", g)

    @property
    def s(self) -> float:
        """Contrast-loss exponent -ln|gamma| >= 0."""
        mag = abs(self.gamma)
        if mag == 0.0:
            return math.inf
        return max(0.0, -math.log(mag))

    @property
    def theta(self) -> float:
        return cmath.phase(self.gamma)


@dataclass(frozen=True)
class TwoLevelChannel:
    """Phi acting on the branch subspace: diagonal kept, coherences times gamma."""

    gamma: DecoherenceFactor


def _check_density(rho) -> np.ndarray:
    r = np.asarray(rho, dtype=complex)
    if r.shape != (2, 2):
        raise ValueError(f"rho: expected 2x2, got shape {r.shape}")
    scale = float(np.max(np.abs(r))) or 1.0
    if np.max(np.abs(r - r.conj().T)) > 1e-10 * scale:
        raise ValueError("rho: not Hermitian")
    if abs(np.trace(r).real - 1.0) > 1e-9 or abs(np.trace(r).imag) > 1e-12:
        raise ValueError(f"rho: trace {np.trace(r):.6g} is not 1")
    eigs = np.linalg.eigvalsh(0.5 * (r + r.conj().T))
    if eigs[0] < -1e-10:
        raise ValueError(f"rho: negative eigenvalue {eigs[0]:.3e}")
    return r


def apply_channel(channel: TwoLevelChannel, rho) -> np.ndarray:
    """Multiply the off-diagonal block by gamma (and gamma* on the mirror)."""
    r = _check_density(rho)
    g = channel.gamma.gamma
    out = r.copy()
    out[0, 1] = g * r[0, 1]
    out[1, 0] = np.conj(out[0, 1])
    return out


def decoherence_factor_from_config(config: ExperimentConfig) -> DecoherenceFactor:
    """gamma = exp(-D L^2 T / hbar^2 + i F L T / hbar) for the configured run."""
    s, theta = decoherence_exponents(config)
    return DecoherenceFactor(cmath.exp(complex(-s, theta)))


def interferometer_probabilities(gamma) -> tuple[float, float]:
    """Recombination outcome probabilities P_± = (1 ± Re gamma)/2."""
    g = gamma.gamma if isinstance(gamma, DecoherenceFactor) else complex(gamma)
    if abs(g) > 1.0 + 1e-12:
        raise ValueError(f"gamma: |gamma| = {abs(g):.6g} exceeds 1")
    p_plus = 0.5 * (1.0 + g.real)
    return p_plus, 1.0 - p_plus


@dataclass(frozen=True)
class SampledDistribution:
    """Probability weights on a finite support grid.

    For continuous densities the weights are density * cell width, so
    discrete outcomes (interferometer ports) and sampled marginals go through
    the same Chernoff machinery.
    """

    support: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        s = np.asarray(self.support, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if s.shape != w.shape or s.ndim != 1 or s.size == 0:
            raise ValueError("distribution: support and weights must be equal-length 1D arrays")
        if float(w.min()) < -1e-12:
            raise ValueError(f"distribution: negative weight {w.min():.3e}")
        w = np.maximum(w, 0.0)
        total = float(w.sum())
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"distribution: total weight {total:.8f} not within 1e-6 of 1")
        w = w / total
        s.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "support", s)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_density(cls, coords, density) -> "SampledDistribution":
        coords = np.asarray(coords, dtype=float)
        density = np.asarray(density, dtype=float)
        spacing = float(coords[1] - coords[0])
        return cls(coords, density * spacing)

    @classmethod
    def from_marginal(cls, marg) -> "SampledDistribution":
        return cls.from_density(marg.coords, marg.density)


def chernoff_exponent(p: SampledDistribution, q: SampledDistribution) -> float:
    """C(P,Q) = -ln min_{a in [0,1]} sum_i P_i^a Q_i^{1-a}.

    The sum runs over the common support; if the supports are disjoint one
    sample decides perfectly and the exponent is +inf.
    """
    if p.support.shape != q.support.shape or not np.allclose(p.support, q.support, rtol=1e-12, atol=0.0):
        raise ValueError("chernoff_exponent: distributions must share a support grid")
    mask = (p.weights > 0.0) & (q.weights > 0.0)
    if not mask.any():
        return math.inf
    lp = np.log(p.weights[mask])
    lq = np.log(q.weights[mask])

    def log_h(alpha: float) -> float:
        # log-sum-exp of a*lp + (1-a)*lq; terms are <= 0 so plain exp is safe
        return math.log(float(np.exp(alpha * lp + (1.0 - alpha) * lq).sum()))

    res = minimize_scalar(log_h, bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-8})
    best = min(log_h(0.0), log_h(1.0), float(res.fun))
    return max(0.0, -best)


def _final_position_distribution(
    prep: GaussianState, config: ExperimentConfig, D: float, F: float, coords: np.ndarray
) -> SampledDistribution:
    state = propagate_gaussian(prep, D, config.m, config.T)
    if F != 0.0:
        shifted = propagate_gaussian_with_force(prep, F, config.m, config.T)
        state = GaussianState(shifted.x0, shifted.p0, state.cov, state.hbar)
    density = state.marginal(0, coords)
    return SampledDistribution.from_density(coords, density)


def _position_window(prep: GaussianState, config: ExperimentConfig, hypotheses) -> np.ndarray:
    """Shared sampling grid covering every hypothesis to 12 sigma."""
    lo, hi = math.inf, -math.inf
    for D, F in hypotheses:
        state = propagate_gaussian(prep, D, config.m, config.T)
        mean = state.x0 + F * config.T**2 / (2.0 * config.m)
        sx = math.sqrt(float(state.cov[0, 0]))
        lo = min(lo, mean - 12.0 * sx)
        hi = max(hi, mean + 12.0 * sx)
    n = 2048
    dx = (hi - lo) / n
    return lo + (np.arange(n) + 0.5) * dx


def detection_error_exponent(prep, config: ExperimentConfig, D_alt: float, F_alt: float | None = None) -> float:
    """Per-trial Chernoff exponent for null (config.D, config.F) vs the
    alternative (D_alt, F_alt or config.F).

    Gaussian preparations are read out by a final position measurement; cat
    preparations by the interferometer outcome, where only gamma matters.
    """
    if D_alt < 0:
        raise ValueError(f"D_alt: must be >= 0, got {D_alt!r}")
    f_null = config.F
    f_alt = config.F if F_alt is None else float(F_alt)
    if isinstance(prep, CatState):
        base = replace(config, L=prep.separation, hbar=prep.hbar)
        g0 = decoherence_factor_from_config(base)
        g1 = decoherence_factor_from_config(replace(base, D=D_alt, F=f_alt))
        support = np.array([1.0, -1.0])
        p = SampledDistribution(support, np.array(interferometer_probabilities(g0)))
        q = SampledDistribution(support, np.array(interferometer_probabilities(g1)))
        return chernoff_exponent(p, q)
    if isinstance(prep, GaussianState):
        coords = _position_window(prep, config, [(config.D, f_null), (D_alt, f_alt)])
        p = _final_position_distribution(prep, config, config.D, f_null, coords)
        q = _final_position_distribution(prep, config, D_alt, f_alt, coords)
        return chernoff_exponent(p, q)
    raise TypeError(f"detection_error_exponent: unsupported preparation {type(prep).__name__}")


def optimize_gaussian_preparation(
    config: ExperimentConfig,
    D_alt: float,
    allow_contractive: bool = False,
    F_alt: float | None = None,
    n_sigma: int = 41,
    n_r: int = 41,
    r_max: float = 0.999,
):
    """Sweep Heisenberg-saturating Gaussians over (sigma_x, correlation r).

    sigma_x is log-spaced over +-2 decades around the analytic optimum
    sqrt(hbar T / 2m); r is linear over [0, r_max] or [-r_max, r_max] when
    contractive states are allowed. Returns (best GaussianState, surface) with
    surface rows (sigma_x, r, exponent) in sweep order. Ties resolve to the
    smallest sigma_x, then the smallest r.
    """
    sigma_opt = optimal_widths(config.m, config.T, config.hbar).sigma_x_prep
    sigmas = sigma_opt * np.logspace(-2.0, 2.0, n_sigma)
    r_lo = -r_max if allow_contractive else 0.0
    rs = np.linspace(r_lo, r_max, n_r)
    surface = []
    best = None
    best_exponent = -math.inf
    for sigma in sigmas:
        for r in rs:
            prep = gaussian_wavepacket(0.0, 0.0, float(sigma), config.hbar, float(r))
            exponent = detection_error_exponent(prep, config, D_alt, F_alt)
            surface.append((float(sigma), float(r), exponent))
            if exponent > best_exponent:
                best_exponent = exponent
                best = prep
    return best, surface
