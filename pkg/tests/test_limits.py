import math

import pytest

from decosense.limits import (
    DiffusionSpreads,
    ExperimentConfig,
    d_min,
    decoherence_exponents,
    diffusion_spreads,
    diffusion_sql,
    force_sql,
    hbar_scaling,
    optimal_widths,
)


def test_sql_natural_units_exact():
    assert force_sql(1.0, 1.0, 1.0) == 2.0
    assert diffusion_sql(1.0, 1.0, 1.0) == 1.125


def test_force_sql_scaling():
    # F_SQL = 2 sqrt(hbar m / T^3)
    assert force_sql(4.0, 1.0, 1.0) == pytest.approx(4.0, rel=1e-15)
    assert force_sql(1.0, 4.0, 1.0) == pytest.approx(2.0 / 8.0, rel=1e-15)
    assert force_sql(1.0, 1.0, 9.0) == pytest.approx(6.0, rel=1e-15)


def test_diffusion_sql_scaling():
    # D_SQL = 9 hbar m / (8 T^2)
    assert diffusion_sql(2.0, 1.0, 1.0) == pytest.approx(2.25, rel=1e-15)
    assert diffusion_sql(1.0, 2.0, 1.0) == pytest.approx(9.0 / 32.0, rel=1e-15)


def test_d_min_formula_and_tradeoff():
    assert d_min(1.0, 1.0, 1.0) == 1.0
    # at L = sigma_x_meas = sqrt(hbar T / m) the bound is (8/9) D_SQL exactly
    w = optimal_widths(1.0, 1.0, 1.0)
    assert d_min(1.0, w.sigma_x_meas, 1.0) == (8.0 / 9.0) * diffusion_sql(1.0, 1.0, 1.0)
    # larger separation lowers the detectable-diffusion floor as 1/L^2
    assert d_min(1.0, 10.0, 1.0) == pytest.approx(0.01, rel=1e-15)


def test_optimal_widths_relations():
    m, T, hbar = 3.0, 2.0, 0.7
    w = optimal_widths(m, T, hbar)
    assert w.sigma_x_prep == pytest.approx(math.sqrt(hbar * T / (2.0 * m)), rel=1e-15)
    assert w.sigma_p_prep == pytest.approx(hbar / (2.0 * w.sigma_x_prep), rel=1e-15)
    # dispersion over T of the minimum-uncertainty packet equals the prep width
    assert w.sigma_x_disp == pytest.approx(w.sigma_p_prep * T / m, rel=1e-15)
    # measured width: prep and dispersion in quadrature
    assert w.sigma_x_meas == pytest.approx(
        math.hypot(w.sigma_x_prep, w.sigma_x_disp), rel=1e-14
    )


def test_diffusion_spreads():
    s = diffusion_spreads(1.125, 1.0, 1.0)
    assert isinstance(s, DiffusionSpreads)
    assert s.sigma_p_diff == pytest.approx(math.sqrt(2.0 * 1.125), rel=1e-15)
    assert s.sigma_x_diff == pytest.approx(math.sqrt(8.0 * 1.125) / 3.0, rel=1e-15)
    # at D = D_SQL the diffusive spread exactly equals the quantum-limited
    # measured width: that equality is what defines the SQL
    w = optimal_widths(1.0, 1.0, 1.0)
    assert s.sigma_x_diff == pytest.approx(w.sigma_x_meas, rel=1e-12)


def test_config_validation_names_offending_key():
    with pytest.raises(ValueError, match="m"):
        ExperimentConfig(m=-1.0)
    with pytest.raises(ValueError, match="T"):
        ExperimentConfig(T=0.0)
    with pytest.raises(ValueError, match="hbar"):
        ExperimentConfig(hbar=float("nan"))
    with pytest.raises(ValueError, match="L"):
        ExperimentConfig(L=0.0)
    with pytest.raises(ValueError, match="D"):
        ExperimentConfig(D=-0.5)


def test_require_L():
    cfg = ExperimentConfig()
    with pytest.raises(ValueError, match="L"):
        cfg.require_L()
    assert ExperimentConfig(L=2.0).require_L() == 2.0


def test_decoherence_exponents():
    cfg = ExperimentConfig(m=1.0, T=2.0, hbar=0.5, L=3.0, F=0.25, D=0.125)
    s, theta = decoherence_exponents(cfg)
    assert s == pytest.approx(0.125 * 9.0 * 2.0 / 0.25, rel=1e-15)
    assert theta == pytest.approx(0.25 * 3.0 * 2.0 / 0.5, rel=1e-15)


def test_hbar_scaling_invariance():
    cfg = ExperimentConfig(L=12.0, F=1.0, D=1.0 / 144.0)
    base = hbar_scaling(cfg, 1.0)
    assert base.gamma_drift == 0.0
    for kappa in (0.1, 0.01):
        hs = hbar_scaling(cfg, kappa)
        assert hs.scaled.hbar == pytest.approx(kappa, rel=1e-15)
        assert hs.scaled.F == pytest.approx(kappa * cfg.F, rel=1e-15)
        assert hs.scaled.D == pytest.approx(kappa**2 * cfg.D, rel=1e-15)
        assert abs(hs.gamma_after - base.gamma_after) <= 1e-12 * abs(base.gamma_after)
        ratio = (hs.scaled.F / force_sql(1.0, 1.0, hs.scaled.hbar)) / (
            cfg.F / force_sql(1.0, 1.0, 1.0)
        )
        assert ratio == pytest.approx(math.sqrt(kappa), rel=1e-12)


def test_hbar_scaling_rejects_bad_kappa():
    cfg = ExperimentConfig(L=1.0)
    with pytest.raises(ValueError, match="kappa"):
        hbar_scaling(cfg, 0.0)
