"""Analytic phase-space states: Gaussian wavepackets and two-branch cats.

States are represented by their Wigner functions. A Gaussian state is a single
real Gaussian; a cat is two branch Gaussians plus a complex interference
component centered at the midpoint. All three are instances of one algebra of
"complex Gaussian" components

    w(alpha) = Re[ amp * exp(-(alpha-mu)^T S^{-1} (alpha-mu)/2 + i k.(alpha-mu)) ]

which is closed under the exact dynamics used in this package: affine
phase-space maps (free shear, force displacement) and convolution with the
diffusion kernel. That closure is what makes the analytic propagation exact
rather than leading-order.

Wavefunction phase convention for cat branches: psi_j(x) ~ exp(i p_j x / hbar),
so amp2 is the relative amplitude of branch 2 in that gauge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GaussianState",
    "CatState",
    "ComponentState",
    "gaussian_wavepacket",
    "cat_wigner_value",
]


def _check_cov(cov, hbar: float) -> np.ndarray:
    c = np.asarray(cov, dtype=float)
    if c.shape != (2, 2):
        raise ValueError(f"cov: expected a 2x2 matrix, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValueError("cov: entries must be finite")
    if abs(c[0, 1] - c[1, 0]) > 1e-12 * max(1.0, float(np.max(np.abs(c)))):
        raise ValueError("cov: not symmetric")
    c = 0.5 * (c + c.T)
    eigs = np.linalg.eigvalsh(c)
    if eigs[0] <= 0.0:
        raise ValueError(f"cov: not positive definite (eigenvalue {eigs[0]:.6g})")
    det = float(np.linalg.det(c))
    # Heisenberg bound. The slack has two parts: a relative hair so exactly
    # saturating pure states survive construction, and an absolute term
    # scaling with max|entry|^2 because that is the best determinant
    # accuracy double precision can deliver for strongly squeezed or
    # sheared covariances.
    scale = float(np.max(np.abs(c)))
    slack = max((hbar**2 / 4.0) * 1e-9, 32.0 * np.finfo(float).eps * scale * scale)
    if det < hbar**2 / 4.0 - slack:
        raise ValueError(f"cov: det = {det:.6g} violates the uncertainty bound hbar^2/4 = {hbar**2/4:.6g}")
    c.setflags(write=False)
    return c


@dataclass(frozen=True)
class ComplexGaussian:
    """One Wigner component. Internal; see the module docstring for the form.

    The stored amplitude already includes any combinatorial factor (the cat
    cross term carries a 2 from amp + conj), so the full Wigner function is
    simply the sum of Re[component] over components.
    """

    mu: np.ndarray          # (2,) real center
    cov: np.ndarray         # (2,2) real SPD envelope covariance S
    k: np.ndarray           # (2,) real oscillation wavevector
    amp: complex            # complex amplitude, phase included

    def value(self, x, p):
        x = np.asarray(x, dtype=float)
        p = np.asarray(p, dtype=float)
        minv = np.linalg.inv(self.cov)
        ux = x - self.mu[0]
        up = p - self.mu[1]
        quad = 0.5 * (minv[0, 0] * ux * ux + 2.0 * minv[0, 1] * ux * up + minv[1, 1] * up * up)
        phase = self.k[0] * ux + self.k[1] * up
        return (self.amp * np.exp(-quad + 1j * phase)).real

    def integral(self) -> complex:
        """Exact integral over phase space."""
        s = self.cov
        damp = math.exp(-0.5 * float(self.k @ s @ self.k))
        return self.amp * 2.0 * math.pi * math.sqrt(float(np.linalg.det(s))) * damp

    def affine(self, a: np.ndarray, b: np.ndarray) -> "ComplexGaussian":
        """Push forward along alpha -> A alpha + b (A invertible, det A = 1 flows)."""
        ainv_t = np.linalg.inv(a).T
        return ComplexGaussian(
            mu=a @ self.mu + b,
            cov=a @ self.cov @ a.T,
            k=ainv_t @ self.k,
            amp=self.amp,
        )

    def convolve(self, c: np.ndarray) -> "ComplexGaussian":
        """Convolve with a centered real Gaussian of covariance C (PSD).

        Envelope covariances add; the oscillation is damped by
        exp(-k^T (S - S T^{-1} S) k / 2) with T = S + C and its wavevector
        shrinks to T^{-1} S k. For C small against S this reduces to the
        familiar exp(-k^T C k / 2) fringe damping.
        """
        c = np.asarray(c, dtype=float)
        if not np.any(c):
            return self
        s = self.cov
        t = s + c
        tinv = np.linalg.inv(t)
        sk = s @ self.k
        damp_quad = float(self.k @ sk) - float(sk @ tinv @ sk)
        scale = math.sqrt(float(np.linalg.det(s)) / float(np.linalg.det(t)))
        return ComplexGaussian(
            mu=self.mu,
            cov=t,
            k=tinv @ sk,
            amp=self.amp * scale * math.exp(-0.5 * damp_quad),
        )

    def marginal(self, axis: int, coords):
        """Exact marginal along the other axis, evaluated at coords.

        axis=0 gives the position marginal, axis=1 the momentum marginal.
        Returns the real contribution of this component.
        """
        coords = np.asarray(coords, dtype=float)
        other = 1 - axis
        minv = np.linalg.inv(self.cov)
        # Integrating out `other` leaves variance cov[axis, axis] for the
        # envelope; the oscillation picks up a cross-phase and extra damping
        # when k has a component along the integrated direction.
        var = self.cov[axis, axis]
        k_eff = self.k[axis] - minv[axis, other] * self.k[other] / minv[other, other]
        damp = 0.5 * self.k[other] ** 2 / minv[other, other]
        pref = self.amp * math.sqrt(2.0 * math.pi / minv[other, other]) * math.exp(-damp)
        u = coords - self.mu[axis]
        return (pref * np.exp(-0.5 * u * u / var + 1j * k_eff * u)).real


def _wigner_sum(components, x, p):
    total = None
    for comp in components:
        v = comp.value(x, p)
        total = v if total is None else total + v
    return total


def _marginal_sum(components, axis, coords):
    total = None
    for comp in components:
        v = comp.marginal(axis, coords)
        total = v if total is None else total + v
    return total


@dataclass(frozen=True)
class GaussianState:
    """Gaussian Wigner function with mean (x0, p0) and covariance Sigma.

    det Sigma >= hbar^2/4 is enforced; equality (within float slack) marks a
    pure state. A contractive state is one with cov[0, 1] < 0.
    """

    x0: float
    p0: float
    cov: np.ndarray
    hbar: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.hbar) and self.hbar > 0):
            raise ValueError(f"hbar: must be positive, got {self.hbar!r}")
        if not (math.isfinite(self.x0) and math.isfinite(self.p0)):
            raise ValueError("mean: entries must be finite")
        object.__setattr__(self, "cov", _check_cov(self.cov, self.hbar))

    @property
    def mean(self) -> np.ndarray:
        return np.array([self.x0, self.p0])

    @property
    def is_pure(self) -> bool:
        return abs(float(np.linalg.det(self.cov)) - self.hbar**2 / 4.0) <= 1e-9 * self.hbar**2

    def components(self) -> list:
        norm = 1.0 / (2.0 * math.pi * math.sqrt(float(np.linalg.det(self.cov))))
        return [ComplexGaussian(self.mean, self.cov, np.zeros(2), norm)]

    def packets(self) -> list:
        return [self]

    def wigner(self, x, p):
        return _wigner_sum(self.components(), x, p)

    def marginal(self, axis: int, coords):
        return _marginal_sum(self.components(), axis, coords)

    def position_wavefunction(self, xs) -> np.ndarray:
        """psi(x) for a pure state, in the e^{i p0 x / hbar} gauge."""
        if not self.is_pure:
            raise ValueError("position wavefunction defined only for pure states")
        xs = np.asarray(xs, dtype=float)
        sx2 = float(self.cov[0, 0])
        sxp = float(self.cov[0, 1])
        # Pure Gaussian: psi ~ exp(-(x-x0)^2 (1 - 2 i sxp/hbar)/(4 sx2) + i p0 x/hbar).
        alpha = (1.0 - 2.0j * sxp / self.hbar) / (4.0 * sx2)
        psi = (2.0 * math.pi * sx2) ** -0.25 * np.exp(-alpha * (xs - self.x0) ** 2 + 1j * self.p0 * xs / self.hbar)
        return psi


def gaussian_wavepacket(x0: float, p0: float, sigma_x: float, hbar: float = 1.0, r: float = 0.0) -> GaussianState:
    """Pure Gaussian with position spread sigma_x and x-p correlation r.

    The covariance saturates the uncertainty bound: sigma_p is chosen so that
    det Sigma = hbar^2/4 for every r in (-1, 1). r < 0 gives a contractive
    state (it narrows before it spreads).
    """
    if not -1.0 < r < 1.0:
        raise ValueError(f"r: correlation must lie in (-1, 1), got {r!r}")
    if sigma_x <= 0:
        raise ValueError(f"sigma_x: must be positive, got {sigma_x!r}")
    sigma_p = hbar / (2.0 * sigma_x * math.sqrt(1.0 - r * r))
    c = r * sigma_x * sigma_p
    cov = np.array([[sigma_x**2, c], [c, sigma_p**2]])
    return GaussianState(x0, p0, cov, hbar)


@dataclass(frozen=True)
class CatState:
    """Superposition of two pure, uncorrelated Gaussian branches.

    |psi> = (|g1> + amp2 |g2>)/sqrt(N). Branches must share covariance and
    hbar, be pure and uncorrelated (the interference term then has the closed
    form coded in components()), and be essentially orthogonal:
    |<g1|g2>| < 1e-6. Separation L is the branch distance in x.
    """

    packet1: GaussianState
    packet2: GaussianState
    amp2: complex = 1.0

    def __post_init__(self) -> None:
        p1, p2 = self.packet1, self.packet2
        if p1.hbar != p2.hbar:
            raise ValueError("branches must share hbar")
        if not np.allclose(p1.cov, p2.cov, rtol=1e-12, atol=0.0):
            raise ValueError("branches must share a covariance matrix")
        if abs(p1.cov[0, 1]) > 1e-12 * max(1.0, float(np.max(np.abs(p1.cov)))):
            raise ValueError("branches must be uncorrelated (diagonal covariance)")
        if not (p1.is_pure and p2.is_pure):
            raise ValueError("branches must be pure (det cov = hbar^2/4)")
        ov = abs(self.branch_overlap())
        if not ov < 1e-6:
            raise ValueError(f"branches not essentially orthogonal: |<g1|g2>| = {ov:.3e} >= 1e-6")

    @property
    def hbar(self) -> float:
        return self.packet1.hbar

    @property
    def separation(self) -> float:
        """L = |x0(1) - x0(2)|."""
        return abs(self.packet1.x0 - self.packet2.x0)

    def branch_overlap(self) -> complex:
        """<g1|g2> in the module's phase gauge."""
        p1, p2 = self.packet1, self.packet2
        dx = p2.x0 - p1.x0
        dp = p2.p0 - p1.p0
        xbar = 0.5 * (p1.x0 + p2.x0)
        sx2 = float(p1.cov[0, 0])
        hbar = self.hbar
        mag = math.exp(-dx * dx / (8.0 * sx2) - sx2 * dp * dp / (2.0 * hbar**2))
        return mag * complex(math.cos(dp * xbar / hbar), math.sin(dp * xbar / hbar))

    @property
    def normalization(self) -> float:
        """N = 1 + |amp2|^2 + 2 Re(amp2 <g1|g2>)."""
        c = complex(self.amp2)
        return 1.0 + abs(c) ** 2 + 2.0 * (c * self.branch_overlap()).real

    def components(self) -> list:
        p1, p2 = self.packet1, self.packet2
        cov = p1.cov
        hbar = self.hbar
        n = self.normalization
        peak = 1.0 / (2.0 * math.pi * math.sqrt(float(np.linalg.det(cov))))
        c = complex(self.amp2)
        mid = 0.5 * (p1.mean + p2.mean)
        dmu = p2.mean - p1.mean
        # Interference wavevector J.dmu/hbar: position separation oscillates
        # along p with wavenumber L/hbar, momentum separation along x.
        k = np.array([dmu[1], -dmu[0]]) / hbar
        phase0 = dmu[1] * mid[0] / hbar
        cross_amp = 2.0 * (c / n) * peak * complex(math.cos(phase0), math.sin(phase0))
        return [
            ComplexGaussian(p1.mean, cov, np.zeros(2), peak / n),
            ComplexGaussian(p2.mean, cov, np.zeros(2), peak * abs(c) ** 2 / n),
            ComplexGaussian(mid, cov, k, cross_amp),
        ]

    def incoherent_components(self) -> list:
        """Branches only, same normalization: the no-interference envelope."""
        return self.components()[:2]

    @property
    def interference(self) -> ComplexGaussian:
        return self.components()[2]

    def incoherent(self) -> "ComponentState":
        return ComponentState(tuple(self.incoherent_components()), (self.packet1, self.packet2), self.hbar)

    def packets(self) -> list:
        return [self.packet1, self.packet2]

    def wigner(self, x, p):
        return _wigner_sum(self.components(), x, p)

    def marginal(self, axis: int, coords):
        return _marginal_sum(self.components(), axis, coords)

    def position_wavefunction(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        psi = self.packet1.position_wavefunction(xs) + complex(self.amp2) * self.packet2.position_wavefunction(xs)
        return psi / math.sqrt(self.normalization)


@dataclass(frozen=True)
class ComponentState:
    """Bag of Wigner components acting like a state; used for incoherent
    mixtures and other derived distributions that are not literal CatStates.
    """

    comps: tuple
    packet_list: tuple
    hbar: float

    def components(self) -> list:
        return list(self.comps)

    def packets(self) -> list:
        return list(self.packet_list)

    def wigner(self, x, p):
        return _wigner_sum(self.comps, x, p)

    def marginal(self, axis: int, coords):
        return _marginal_sum(self.comps, axis, coords)


def cat_wigner_value(cat: CatState, x, p):
    """W(x, p) of a cat state; vectorizes over array-valued x, p."""
    return cat.wigner(x, p)
