"""Rasterized Wigner distributions and the finite-difference oracle.

This module deliberately knows nothing about the closed-form propagation in
`dynamics`: its integrator discretizes the transport PDE directly (operator
splitting: exact shear remap + explicit momentum diffusion) so the two paths
can check each other. It also provides the discrete Wigner <-> density-matrix
transform pair on dual grids, marginal extraction, and the fringe-visibility
estimator used to read decoherence off simulated data.

Grid conventions: values[i, j] = W(x_i, p_j) with cell-centered coordinates,
x ascending along axis 0 and p ascending along axis 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "WignerGrid",
    "PositionDensityMatrix",
    "MarginalSamples",
    "WindowTooSmall",
    "GridInstability",
    "PeriodNotResolved",
    "auto_window",
    "rasterize",
    "wigner_from_density",
    "density_from_wigner",
    "evolve_grid",
    "position_marginal",
    "momentum_marginal",
    "fringe_visibility",
    "grid_moments",
    "marginal_moments",
]


class WindowTooSmall(ValueError):
    """Raised when a phase-space window fails the coverage precondition."""


class GridInstability(RuntimeError):
    """Raised when the integrator detects mass drift or non-finite values."""


class PeriodNotResolved(ValueError):
    """Raised when a marginal undersamples the fringe period (< 8 per fringe)."""


@dataclass(frozen=True)
class WignerGrid:
    nx: int
    np: int
    xmin: float
    xmax: float
    pmin: float
    pmax: float
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.nx < 2 or self.np < 2:
            raise ValueError(f"grid: resolution must be at least 2x2, got {self.nx}x{self.np}")
        if not (self.xmin < self.xmax and self.pmin < self.pmax):
            raise ValueError("grid: window bounds must be strictly ordered")
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.nx, self.np):
            raise ValueError(f"grid: values shape {v.shape} does not match {self.nx}x{self.np}")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid: values must be finite")
        v = np.ascontiguousarray(v)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def dx(self) -> float:
        return (self.xmax - self.xmin) / self.nx

    @property
    def dp(self) -> float:
        return (self.pmax - self.pmin) / self.np

    @property
    def x_centers(self) -> np.ndarray:
        return self.xmin + (np.arange(self.nx) + 0.5) * self.dx

    @property
    def p_centers(self) -> np.ndarray:
        return self.pmin + (np.arange(self.np) + 0.5) * self.dp

    @property
    def mass(self) -> float:
        return float(self.values.sum()) * self.dx * self.dp

    def with_values(self, values: np.ndarray) -> "WignerGrid":
        return WignerGrid(self.nx, self.np, self.xmin, self.xmax, self.pmin, self.pmax, values)


@dataclass(frozen=True)
class PositionDensityMatrix:
    """rho(x, x') sampled on a uniform x grid; continuum-normalized, so the
    trace quadrature is sum(diag) * dx = 1."""

    n: int
    grid: np.ndarray
    rho: np.ndarray

    def __post_init__(self) -> None:
        g = np.asarray(self.grid, dtype=float)
        r = np.asarray(self.rho, dtype=complex)
        if g.shape != (self.n,) or r.shape != (self.n, self.n):
            raise ValueError("density matrix: shape mismatch between grid and rho")
        if self.n < 2:
            raise ValueError("density matrix: need at least 2 grid points")
        steps = np.diff(g)
        if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0) or steps[0] <= 0:
            raise ValueError("density matrix: grid must be uniform and ascending")
        scale = float(np.max(np.abs(r))) or 1.0
        if np.max(np.abs(r - r.conj().T)) > 1e-10 * scale:
            raise ValueError("density matrix: not Hermitian")
        r = 0.5 * (r + r.conj().T)
        tr = float(np.real(np.trace(r))) * float(steps[0])
        if abs(tr - 1.0) > 1e-6:
            raise ValueError(f"density matrix: trace quadrature {tr:.8f} not within 1e-6 of 1")
        eigs = np.linalg.eigvalsh(r)
        if eigs[0] < -1e-8 * max(eigs[-1], 1.0):
            raise ValueError(f"density matrix: negative eigenvalue {eigs[0]:.3e}")
        g.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "rho", r)

    @property
    def dx(self) -> float:
        return float(self.grid[1] - self.grid[0])


@dataclass(frozen=True)
class MarginalSamples:
    """1D probability density on uniform cell centers; negatives clipped."""

    coords: np.ndarray
    density: np.ndarray
    clipped: float = 0.0

    @property
    def spacing(self) -> float:
        return float(self.coords[1] - self.coords[0])

    @property
    def mass(self) -> float:
        return float(self.density.sum()) * self.spacing


def make_marginal(coords: np.ndarray, density: np.ndarray) -> MarginalSamples:
    """Clip tiny negative densities (tolerance -1e-9) and record the loss."""
    coords = np.asarray(coords, dtype=float)
    density = np.asarray(density, dtype=float)
    spacing = float(coords[1] - coords[0])
    floor = float(density.min())
    if floor < -1e-9:
        raise ValueError(f"marginal: density at {floor:.3e} below the -1e-9 clip tolerance")
    clipped = -float(density[density < 0].sum()) * spacing
    density = np.maximum(density, 0.0)
    coords.setflags(write=False)
    density.setflags(write=False)
    return MarginalSamples(coords, density, clipped)


def _coverage_requirements(state) -> list:
    """(center, cov) pairs that the window must cover: every packet, plus the
    interference envelope when the state has one."""
    reqs = [(pk.mean, pk.cov) for pk in state.packets()]
    inter = getattr(state, "interference", None)
    if inter is not None:
        reqs.append((inter.mu, inter.cov))
    return reqs


def suggest_window(state, nsigma: float = 6.0, p_extra: float = 0.0):
    """Window covering every requirement at nsigma, padded by p_extra in p."""
    xs, ps = [], []
    for mu, cov in _coverage_requirements(state):
        sx = math.sqrt(float(cov[0, 0]))
        sp = math.sqrt(float(cov[1, 1]))
        xs += [float(mu[0]) - nsigma * sx, float(mu[0]) + nsigma * sx]
        ps += [float(mu[1]) - nsigma * sp - p_extra, float(mu[1]) + nsigma * sp + p_extra]
    return min(xs), max(xs), min(ps), max(ps)


def auto_window(state, D: float, m: float, t: float, nsigma: float = 6.0):
    """Window sized for evolution: covers the state now and after (D, m, t),
    with an extra 3*sqrt(2Dt) momentum margin for diffusive growth."""
    from .dynamics import propagate_cat, propagate_gaussian
    from .states import CatState, GaussianState

    if isinstance(state, GaussianState):
        final = propagate_gaussian(state, D, m, t)
    elif isinstance(state, CatState):
        final, _ = propagate_cat(state, D, m, t)
    else:
        raise TypeError(f"auto_window: unsupported state {type(state).__name__}")
    extra = 3.0 * math.sqrt(2.0 * D * t)
    w0 = suggest_window(state, nsigma)
    w1 = suggest_window(final, nsigma, p_extra=extra)
    return min(w0[0], w1[0]), max(w0[1], w1[1]), min(w0[2], w1[2]), max(w0[3], w1[3])


def rasterize(state, window, nx: int, np_: int) -> WignerGrid:
    """Sample the analytic Wigner function of `state` on cell centers.

    The window must cover >= 5 sigma around every branch and around the
    interference envelope; otherwise WindowTooSmall reports suggested bounds.
    """
    xmin, xmax, pmin, pmax = (float(b) for b in window)
    if not (xmin < xmax and pmin < pmax):
        raise ValueError("rasterize: window bounds must be strictly ordered")
    for mu, cov in _coverage_requirements(state):
        sx = 5.0 * math.sqrt(float(cov[0, 0]))
        sp = 5.0 * math.sqrt(float(cov[1, 1]))
        if mu[0] - sx < xmin or mu[0] + sx > xmax or mu[1] - sp < pmin or mu[1] + sp > pmax:
            sug = suggest_window(state)
            raise WindowTooSmall(
                "window does not cover 5 sigma around every component; "
                f"suggested bounds: x in [{sug[0]:.6g}, {sug[1]:.6g}], "
                f"p in [{sug[2]:.6g}, {sug[3]:.6g}]"
            )
    dx = (xmax - xmin) / nx
    dp = (pmax - pmin) / np_
    x = xmin + (np.arange(nx) + 0.5) * dx
    p = pmin + (np.arange(np_) + 0.5) * dp
    values = state.wigner(x[:, None], p[None, :])
    grid = WignerGrid(nx, np_, xmin, xmax, pmin, pmax, values)
    if abs(grid.mass - 1.0) > 1e-3:
        raise WindowTooSmall(
            f"rasterized mass {grid.mass:.6f} deviates from 1 by more than 1e-3; "
            "the window likely truncates the state"
        )
    return grid


# ---------------------------------------------------------------------------
# Discrete Wigner transform pair.
#
# For a density matrix on n uniform x points with spacing dx, the Wigner
# samples live on the dual grid: 2n-1 half-step position centers (every pair
# midpoint (x_a + x_b)/2) and n momenta p_j = (j - n//2) * pi*hbar/(n*dx).
# Along each anti-diagonal a + b = u the transform is a length-n DFT, hence
# exactly invertible; the position marginal at even centers reproduces the
# diagonal of rho identically.
# ---------------------------------------------------------------------------


def wigner_from_density(dm: PositionDensityMatrix, hbar: float = 1.0) -> WignerGrid:
    n = dm.n
    dx = dm.dx
    j0 = n // 2
    dp_ = math.pi * hbar / (n * dx)
    w = np.zeros((2 * n - 1, n))
    jshift = np.arange(n) - j0
    for u in range(2 * n - 1):
        a_lo = max(0, u - (n - 1))
        a_hi = min(n - 1, u)
        v = np.zeros(n, dtype=complex)
        a = np.arange(a_lo, a_hi + 1)
        v[a] = dm.rho[a, u - a]
        f = np.fft.fft(v)
        # W[u, j] = (dx/pi hbar) e^{i pi (j-j0) u / n} F[(j-j0) mod n]
        w[u, :] = (dx / (math.pi * hbar)) * np.real(
            np.exp(1j * math.pi * jshift * u / n) * f[np.mod(jshift, n)]
        )
    xmin = float(dm.grid[0]) - dx / 4.0
    xmax = float(dm.grid[-1]) + dx / 4.0
    pmin = (-j0 - 0.5) * dp_
    pmax = (n - 1 - j0 + 0.5) * dp_
    return WignerGrid(2 * n - 1, n, xmin, xmax, pmin, pmax, w)


def density_from_wigner(grid: WignerGrid, hbar: float = 1.0) -> PositionDensityMatrix:
    if grid.nx % 2 == 0 or grid.np != (grid.nx + 1) // 2:
        raise ValueError(
            "density_from_wigner: expected a dual grid with nx = 2n-1 and np = n, "
            f"got {grid.nx}x{grid.np}"
        )
    n = grid.np
    dx = 2.0 * grid.dx
    j0 = n // 2
    dp_expected = math.pi * hbar / (n * dx)
    if abs(grid.dp - dp_expected) > 1e-9 * dp_expected:
        raise ValueError(
            "density_from_wigner: momentum spacing is not the Fourier dual of the "
            f"position grid (got {grid.dp!r}, expected {dp_expected!r})"
        )
    p0 = grid.p_centers[j0]
    if abs(p0) > 1e-9 * dp_expected:
        raise ValueError("density_from_wigner: momentum grid must be centered on p = 0")
    jshift = np.arange(n) - j0
    rho = np.zeros((n, n), dtype=complex)
    for u in range(2 * n - 1):
        f = np.zeros(n, dtype=complex)
        f[np.mod(jshift, n)] = (math.pi * hbar / dx) * np.exp(-1j * math.pi * jshift * u / n) * grid.values[u, :]
        v = np.fft.ifft(f)
        a_lo = max(0, u - (n - 1))
        a_hi = min(n - 1, u)
        a = np.arange(a_lo, a_hi + 1)
        rho[a, u - a] = v[a]
    # even cell centers of the dual grid are the original rho sample points
    x = grid.xmin + grid.dx / 2.0 + dx * np.arange(n)
    return PositionDensityMatrix(n, x, rho)


# ---------------------------------------------------------------------------
# Split-step integrator.
# ---------------------------------------------------------------------------


def _diffuse(w: np.ndarray, D: float, tau: float, dp: float) -> np.ndarray:
    """Explicit centered diffusion along p with zero-inflow ghosts.

    Substeps target D*dt = dp^2/6, the ratio at which the stencil's leading
    spatial and temporal truncation errors cancel, so every Fourier mode
    decays at a rate accurate to O(dp^4); this keeps fringe contrast honest
    on coarse momentum grids. Always within the D*dt <= 0.4*dp^2 stability
    bound (the fallback branch only triggers when one substep already
    under-resolves, where the absolute error is negligible).
    """
    if D == 0.0 or tau == 0.0:
        return w
    nsub = max(1, math.floor(6.0 * D * tau / (dp * dp)))
    if D * (tau / nsub) > 0.4 * dp * dp:
        nsub = max(nsub, math.ceil(D * tau / (0.4 * dp * dp)))
    dt = tau / nsub
    coef = D * dt / (dp * dp)
    for _ in range(nsub):
        padded = np.pad(w, ((0, 0), (1, 1)))
        w = w + coef * (padded[:, 2:] - 2.0 * w + padded[:, :-2])
    return w


def _shear(w: np.ndarray, p: np.ndarray, tau: float, m: float, dx: float) -> np.ndarray:
    """Conservative per-row translation by p*tau/m: integer shift plus a
    flux-form piecewise-linear (Fromm) fractional remap.

    The flux form preserves mass, mean, and variance of each row exactly in
    the interior, which is what lets the grid adjudicate the kernel moments.
    """
    out = np.empty_like(w)
    nx = w.shape[0]
    for j in range(w.shape[1]):
        delta = p[j] * tau / (m * dx)
        n0 = math.floor(delta)
        frac = delta - n0
        col = w[:, j]
        if n0 != 0:
            shifted = np.zeros(nx)
            if 0 < n0 < nx:
                shifted[n0:] = col[:-n0]
            elif -nx < n0 < 0:
                shifted[:n0] = col[-n0:]
            col = shifted
        if frac > 0.0:
            slope = np.zeros(nx)
            slope[1:-1] = 0.5 * (col[2:] - col[:-2])
            flux = frac * col + (0.5 * frac * (1.0 - frac)) * slope
            new = col - flux
            new[1:] += flux[:-1]
            col = new
        out[:, j] = col
    return out


def evolve_grid(grid: WignerGrid, D: float, m: float, t: float, steps: int) -> WignerGrid:
    """Integrate dW/dt = -(p/m) dW/dx + D d2W/dp2 by Strang splitting.

    Each outer step is half-diffusion, exact shear remap, half-diffusion
    (merged between steps). Mass must be conserved to 1e-6 over the run;
    larger drift means the window truncates the state and raises
    GridInstability rather than returning silently wrong data.
    """
    if D < 0:
        raise ValueError(f"D: diffusion coefficient must be >= 0, got {D!r}")
    if m <= 0:
        raise ValueError(f"m: mass must be positive, got {m!r}")
    if t < 0:
        raise ValueError(f"t: duration must be >= 0, got {t!r}")
    if steps < 1:
        raise ValueError(f"steps: need at least one step, got {steps!r}")
    if t == 0:
        return grid.with_values(grid.values.copy())
    w = grid.values.copy()
    dx, dp = grid.dx, grid.dp
    p = grid.p_centers
    dt = t / steps
    mass0 = float(w.sum()) * dx * dp
    w = _diffuse(w, D, dt / 2.0, dp)
    for k in range(steps):
        w = _shear(w, p, dt, m, dx)
        w = _diffuse(w, D, dt if k < steps - 1 else dt / 2.0, dp)
        if not np.all(np.isfinite(w)):
            raise GridInstability(f"non-finite values after step {k + 1}/{steps}")
    mass1 = float(w.sum()) * dx * dp
    drift = abs(mass1 - mass0)
    if drift > 1e-6 * max(1.0, abs(mass0)):
        raise GridInstability(
            f"mass drift {drift:.3e} over the run (from {mass0:.9f} to {mass1:.9f}); "
            "the window is too small for this evolution"
        )
    return grid.with_values(w)


# ---------------------------------------------------------------------------
# Marginals and visibility.
# ---------------------------------------------------------------------------


def position_marginal(grid: WignerGrid) -> MarginalSamples:
    return make_marginal(grid.x_centers, grid.values.sum(axis=1) * grid.dp)


def momentum_marginal(grid: WignerGrid) -> MarginalSamples:
    return make_marginal(grid.p_centers, grid.values.sum(axis=0) * grid.dx)


def grid_moments(grid: WignerGrid):
    """(mass, mean (2,), covariance (2,2)) by midpoint quadrature."""
    w = grid.values
    x = grid.x_centers
    p = grid.p_centers
    cell = grid.dx * grid.dp
    mass = float(w.sum()) * cell
    wx = w.sum(axis=1) * cell
    wp = w.sum(axis=0) * cell
    mx = float(wx @ x) / mass
    mp = float(wp @ p) / mass
    vxx = float(wx @ (x - mx) ** 2) / mass
    vpp = float(wp @ (p - mp) ** 2) / mass
    vxp = float((x - mx) @ w @ (p - mp)) * cell / mass
    return mass, np.array([mx, mp]), np.array([[vxx, vxp], [vxp, vpp]])


def marginal_moments(marg: MarginalSamples, lo: float | None = None, hi: float | None = None):
    """(mass, mean, variance) of a marginal restricted to [lo, hi]."""
    c = marg.coords
    d = marg.density
    sel = np.ones(c.shape, dtype=bool)
    if lo is not None:
        sel &= c >= lo
    if hi is not None:
        sel &= c <= hi
    c = c[sel]
    d = d[sel]
    mass = float(d.sum()) * marg.spacing
    if mass <= 0:
        raise ValueError("marginal_moments: no mass in the requested range")
    mean = float(d @ c) * marg.spacing / mass
    var = float(d @ (c - mean) ** 2) * marg.spacing / mass
    return mass, mean, var


def _refine_extremum(a: float, b: float, c: float) -> float:
    """Vertex value of the parabola through (-1,a), (0,b), (1,c)."""
    denom = a - 2.0 * b + c
    if denom == 0.0:
        return b
    return b - (c - a) ** 2 / (8.0 * denom)


def fringe_visibility(marginal: MarginalSamples, envelope=None, period: float | None = None) -> float:
    """(max - min)/(max + min) of marginal/envelope over the central fringe.

    The envelope is the incoherent (no-interference) marginal; pass it when
    available — e.g. from evolving the incoherent mixture through the same
    pipeline — so that shared grid biases cancel in the ratio. Without it, a
    Gaussian envelope is fitted from the marginal's moments, which is exact
    for equal-momentum cat families (the oscillatory part integrates to
    nothing against polynomial weights).

    `period` is only used for the sampling diagnostic: fewer than 8 samples
    per fringe raises PeriodNotResolved. When omitted, the period is measured
    from the bracketing minima of the central fringe.
    """
    p_ = marginal.density
    c = marginal.coords
    dc = marginal.spacing
    if period is not None and period / dc < 8.0:
        raise PeriodNotResolved(
            f"{period / dc:.2f} samples per fringe period; need at least 8"
        )
    if envelope is None:
        mass = float(p_.sum()) * dc
        mean = float(p_ @ c) * dc / mass
        var = float(p_ @ (c - mean) ** 2) * dc / mass
        env = mass / math.sqrt(2.0 * math.pi * var) * np.exp(-0.5 * (c - mean) ** 2 / var)
    else:
        env = envelope.density if isinstance(envelope, MarginalSamples) else np.asarray(envelope, dtype=float)
        if env.shape != p_.shape:
            raise ValueError("fringe_visibility: envelope shape does not match the marginal")
    keep = env >= 0.2 * float(env.max())
    idx = np.nonzero(keep)[0]
    i0, i1 = int(idx[0]), int(idx[-1])
    r = p_[i0 : i1 + 1] / env[i0 : i1 + 1]
    if r.size < 5:
        raise PeriodNotResolved("marginal has too few samples inside the envelope")
    span = float(r.max() - r.min())
    if span < 5e-3:
        # No resolvable fringes: incoherent data. Report the residual ripple.
        v = span / float(r.max() + r.min())
        return min(max(v, 0.0), 1.0)
    imax = int(np.argmax(r))
    ilo = imax
    while ilo > 0 and r[ilo - 1] < r[ilo]:
        ilo -= 1
    ihi = imax
    while ihi < r.size - 1 and r[ihi + 1] < r[ihi]:
        ihi += 1
    if period is None:
        measured = (ihi - ilo) * dc
        if 0 < measured / dc < 8.0:
            raise PeriodNotResolved(
                f"measured fringe period spans {ihi - ilo} samples; need at least 8"
            )
    rmax = r[imax]
    if 0 < imax < r.size - 1:
        rmax = _refine_extremum(r[imax - 1], r[imax], r[imax + 1])
    mins = []
    for i in (ilo, ihi):
        val = r[i]
        if 0 < i < r.size - 1:
            val = _refine_extremum(r[i - 1], r[i], r[i + 1])
        mins.append(max(float(val), 0.0))
    rmin = min(mins)
    v = (rmax - rmin) / (rmax + rmin)
    return min(max(float(v), 0.0), 1.0)
