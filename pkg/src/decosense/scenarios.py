"""Named experiment scenarios behind the CLI and the HTTP service.

Each run_* function takes the typed parameter dict produced by
config.coerce and returns a ScenarioResult: an ordered key/value table for
display plus rendered output files. All numeric formatting uses repr so
repeated runs are byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import ConfigError
from .detection import detection_error_exponent, optimize_gaussian_preparation
from .dynamics import decoherence_time, propagate_cat, propagate_gaussian
from .grid import (
    auto_window,
    evolve_grid,
    fringe_visibility,
    momentum_marginal,
    position_marginal,
    rasterize,
)
from .gridio import eps_table_to_text, grid_to_text, marginal_to_text, surface_to_text
from .limits import (
    ExperimentConfig,
    d_min,
    decoherence_exponents,
    diffusion_sql,
    force_sql,
    hbar_scaling,
    optimal_widths,
)
from .perturbation import purity_deficit, random_system
from .states import CatState, gaussian_wavepacket

__all__ = [
    "ScenarioResult",
    "run_sql",
    "run_simulate",
    "run_detect",
    "run_first_order",
    "run_scale_hbar",
]


@dataclass(frozen=True)
class ScenarioResult:
    table: tuple  # ordered (key, value-string) pairs
    files: tuple  # (relative path, text content) pairs

    def render_table(self) -> str:
        return "\n".join(f"{k} = {v}" for k, v in self.table) + "\n"


def _f(x) -> str:
    return repr(float(x))


def _c(z) -> str:
    return repr(complex(z))


def run_sql(params: dict) -> ScenarioResult:
    cfg = ExperimentConfig(
        m=params["m"], T=params["T"], hbar=params["hbar"],
        L=params["L"], F=params["F"], D=params["D"],
    )
    fsql = force_sql(cfg.m, cfg.T, cfg.hbar)
    dsql = diffusion_sql(cfg.m, cfg.T, cfg.hbar)
    widths = optimal_widths(cfg.m, cfg.T, cfg.hbar)
    rows = [
        ("m", _f(cfg.m)),
        ("T", _f(cfg.T)),
        ("hbar", _f(cfg.hbar)),
        ("F_SQL", _f(fsql)),
        ("D_SQL", _f(dsql)),
        ("sigma_x_prep", _f(widths.sigma_x_prep)),
        ("sigma_p_prep", _f(widths.sigma_p_prep)),
        ("sigma_x_disp", _f(widths.sigma_x_disp)),
        ("sigma_x_meas", _f(widths.sigma_x_meas)),
        ("F", _f(cfg.F)),
        ("D", _f(cfg.D)),
        ("F_over_F_SQL", _f(cfg.F / fsql)),
        ("D_over_D_SQL", _f(cfg.D / dsql)),
    ]
    if cfg.L is not None:
        rows.append(("L", _f(cfg.L)))
        rows.append(("D_min", _f(d_min(cfg.T, cfg.L, cfg.hbar))))
        rows.append(("tau_D", _f(decoherence_time(cfg.D, cfg.L, cfg.hbar))))
    return ScenarioResult(tuple(rows), ())


def _simulate_state(params: dict):
    """Initial state plus resolved (sigma, L, D, np) defaults."""
    m, T, hbar = params["m"], params["T"], params["hbar"]
    kind = params["state"]
    if kind == "cat":
        sigma = params["sigma_x"] or math.sqrt(hbar * T / m)
        L = params["L"] or 12.0 * sigma
        D = params["D"] if params["D"] is not None else hbar**2 / (L**2 * T)
        state = CatState(
            gaussian_wavepacket(-0.5 * L, 0.0, sigma, hbar),
            gaussian_wavepacket(+0.5 * L, 0.0, sigma, hbar),
        )
        np_default = 1024
    else:
        sigma = params["sigma_x"] or math.sqrt(hbar * T / (2.0 * m))
        L = None
        D = params["D"] if params["D"] is not None else diffusion_sql(m, T, hbar)
        state = gaussian_wavepacket(0.0, 0.0, sigma, hbar)
        np_default = params["nx"]
    np_ = params["np"] or np_default
    return state, sigma, L, D, np_


def run_simulate(params: dict) -> ScenarioResult:
    m, T, hbar = params["m"], params["T"], params["hbar"]
    state, sigma, L, D, np_ = _simulate_state(params)
    nx, steps, mode = params["nx"], params["steps"], params["mode"]

    window = auto_window(state, D, m, T)
    initial = rasterize(state, window, nx, np_)
    if mode == "grid":
        free = evolve_grid(initial, 0.0, m, T, steps)
        diffused = evolve_grid(initial, D, m, T, steps)
    else:
        if isinstance(state, CatState):
            free_state, _ = propagate_cat(state, 0.0, m, T)
            diff_state, _ = propagate_cat(state, D, m, T)
        else:
            free_state = propagate_gaussian(state, 0.0, m, T)
            diff_state = propagate_gaussian(state, D, m, T)
        free = rasterize(free_state, window, nx, np_)
        diffused = rasterize(diff_state, window, nx, np_)

    files = []
    for name, grid in (("initial", initial), ("free", free), ("diffused", diffused)):
        files.append((f"{name}.grid", grid_to_text(grid)))
        files.append((f"{name}_x.csv", marginal_to_text(position_marginal(grid))))
        files.append((f"{name}_p.csv", marginal_to_text(momentum_marginal(grid))))

    rows = [
        ("state", params["state"]),
        ("mode", mode),
        ("m", _f(m)),
        ("T", _f(T)),
        ("hbar", _f(hbar)),
        ("sigma_x", _f(sigma)),
        ("D", _f(D)),
        ("nx", str(nx)),
        ("np", str(np_)),
        ("steps", str(steps)),
        ("xmin", _f(window[0])),
        ("xmax", _f(window[1])),
        ("pmin", _f(window[2])),
        ("pmax", _f(window[3])),
        ("mass_initial", _f(initial.mass)),
        ("mass_free", _f(free.mass)),
        ("mass_diffused", _f(diffused.mass)),
    ]
    if isinstance(state, CatState):
        rows.insert(6, ("L", _f(L)))
        _, gamma = propagate_cat(state, D, m, T)
        visibility = fringe_visibility(momentum_marginal(diffused))
        rows.append(("gamma_analytic", _c(gamma)))
        rows.append(("visibility_grid", _f(visibility)))
    return ScenarioResult(tuple(rows), tuple(files))


def run_detect(params: dict) -> ScenarioResult:
    m, T, hbar = params["m"], params["T"], params["hbar"]
    cfg = ExperimentConfig(m=m, T=T, hbar=hbar)
    dsql = diffusion_sql(m, T, hbar)
    d_alt = params["D_alt"] if params["D_alt"] is not None else dsql / 100.0
    family = params["family"]

    rows = [
        ("family", family),
        ("m", _f(m)),
        ("T", _f(T)),
        ("hbar", _f(hbar)),
        ("D_alt", _f(d_alt)),
    ]
    files = []
    if family == "cat":
        widths = optimal_widths(m, T, hbar)
        L = params["L"] or 20.0 * widths.sigma_x_meas
        prep = CatState(
            gaussian_wavepacket(-0.5 * L, 0.0, widths.sigma_x_prep, hbar),
            gaussian_wavepacket(+0.5 * L, 0.0, widths.sigma_x_prep, hbar),
        )
        exponent = detection_error_exponent(prep, cfg, d_alt)
        best_gauss, surface = optimize_gaussian_preparation(
            cfg, d_alt, allow_contractive=False,
            n_sigma=params["n_sigma"], n_r=params["n_r"], r_max=params["r_max"],
        )
        gauss_exponent = max(row[2] for row in surface)
        rows.append(("L", _f(L)))
        rows.append(("exponent", _f(exponent)))
        rows.append(("best_gaussian_exponent", _f(gauss_exponent)))
        ratio = exponent / gauss_exponent if gauss_exponent > 0 else math.inf
        rows.append(("cat_over_gaussian", _f(ratio)))
    else:
        best, surface = optimize_gaussian_preparation(
            cfg, d_alt, allow_contractive=(family == "contractive"),
            n_sigma=params["n_sigma"], n_r=params["n_r"], r_max=params["r_max"],
        )
        exponent = max(row[2] for row in surface)
        sigma_best = math.sqrt(float(best.cov[0, 0]))
        cov = best.cov
        r_best = float(cov[0, 1] / math.sqrt(cov[0, 0] * cov[1, 1]))
        rows.append(("exponent", _f(exponent)))
        rows.append(("best_sigma_x", _f(sigma_best)))
        rows.append(("best_r", _f(r_best)))
        files.append(("surface.csv", surface_to_text(surface)))
    for n in (1, 10, 100):
        rows.append((f"error_bound_n{n}", _f(math.exp(-n * exponent))))
    return ScenarioResult(tuple(rows), tuple(files))


def run_first_order(params: dict) -> ScenarioResult:
    eps = params["eps"]
    if len(eps) < 3:
        raise ConfigError("eps", f"need at least 3 values for a slope fit, got {len(eps)}")
    if any(e <= 0 for e in eps):
        raise ConfigError("eps", "all values must be positive")
    dp, de = params["dims"]
    sys = random_system(dp, de, params["seed"])
    t = params["t"]
    deficits = [purity_deficit(sys, e, t) for e in eps]
    if any(d <= 0 for d in deficits):
        raise ConfigError("eps", "purity deficit underflowed to 0; use larger eps values")
    slope = float(np.polyfit(np.log(eps), np.log(deficits), 1)[0])
    rows = [
        ("dims", f"{dp}x{de}"),
        ("seed", str(params["seed"])),
        ("t", _f(t)),
    ]
    table_rows = []
    for e, d in zip(eps, deficits):
        rows.append((f"deficit[{_f(e)}]", _f(d)))
        table_rows.append((e, d))
    rows.append(("slope", _f(slope)))
    return ScenarioResult(tuple(rows), (("deficits.csv", eps_table_to_text(table_rows)),))


def run_scale_hbar(params: dict) -> ScenarioResult:
    if params["L"] is None:
        raise ConfigError("L", "required: superposition separation sets the decoherence exponent")
    cfg = ExperimentConfig(
        m=params["m"], T=params["T"], hbar=params["hbar"],
        L=params["L"], F=params["F"], D=params["D"],
    )
    rows = [
        ("m", _f(cfg.m)),
        ("T", _f(cfg.T)),
        ("hbar", _f(cfg.hbar)),
        ("L", _f(cfg.L)),
        ("F", _f(cfg.F)),
        ("D", _f(cfg.D)),
    ]
    max_drift = 0.0
    for kappa in params["kappa"]:
        hs = hbar_scaling(cfg, kappa)
        s, theta = decoherence_exponents(hs.scaled)
        fs = force_sql(hs.scaled.m, hs.scaled.T, hs.scaled.hbar)
        ds = diffusion_sql(hs.scaled.m, hs.scaled.T, hs.scaled.hbar)
        tag = _f(kappa)
        rows.append((f"gamma[{tag}]", _c(hs.gamma_after)))
        rows.append((f"s[{tag}]", _f(s)))
        rows.append((f"theta[{tag}]", _f(theta)))
        rows.append((f"F_over_F_SQL[{tag}]", _f(hs.scaled.F / fs)))
        rows.append((f"D_over_D_SQL[{tag}]", _f(hs.scaled.D / ds)))
        max_drift = max(max_drift, hs.gamma_drift)
    rows.append(("max_gamma_drift", _f(max_drift)))
    rows.append(("gamma_invariant", "yes" if max_drift <= 1e-12 else "NO"))
    return ScenarioResult(tuple(rows), ())
