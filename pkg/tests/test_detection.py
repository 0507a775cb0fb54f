import cmath
import math

import numpy as np
import pytest

from decosense.detection import (
    DecoherenceFactor,
    SampledDistribution,
    TwoLevelChannel,
    apply_channel,
    chernoff_exponent,
    decoherence_factor_from_config,
    detection_error_exponent,
    interferometer_probabilities,
    optimize_gaussian_preparation,
)
from decosense.limits import ExperimentConfig, diffusion_sql, optimal_widths
from decosense.states import CatState, gaussian_wavepacket

D_SQL = diffusion_sql(1.0, 1.0)  # 1.125 in natural units


def test_decoherence_factor_exponents():
    g = DecoherenceFactor(cmath.exp(complex(-0.7, 0.3)))
    assert g.s == pytest.approx(0.7, abs=1e-14)
    assert g.theta == pytest.approx(0.3, abs=1e-14)
    assert DecoherenceFactor(0.0).s == math.inf
    assert DecoherenceFactor(1.0).s == 0.0


def test_decoherence_factor_rejects_unphysical():
    with pytest.raises(ValueError, match="exceeds 1"):
        DecoherenceFactor(1.0 + 1e-6)
    with pytest.raises(ValueError, match="finite"):
        DecoherenceFactor(complex(math.nan, 0.0))


def test_decoherence_factor_from_config():
    cfg = ExperimentConfig(L=3.0, D=0.05, F=0.2)
    g = decoherence_factor_from_config(cfg)
    assert g.s == pytest.approx(0.05 * 9.0, abs=1e-12)
    assert g.theta == pytest.approx(0.2 * 3.0, abs=1e-12)


def test_apply_channel_damps_coherences():
    rho = np.array([[0.6, 0.2 + 0.1j], [0.2 - 0.1j, 0.4]])
    ch = TwoLevelChannel(DecoherenceFactor(0.5j))
    out = apply_channel(ch, rho)
    assert out[0, 0] == 0.6 and out[1, 1] == 0.4
    assert out[0, 1] == pytest.approx(0.5j * (0.2 + 0.1j))
    assert out[1, 0] == pytest.approx(np.conj(out[0, 1]))
    # gamma = 1 is the identity
    same = apply_channel(TwoLevelChannel(DecoherenceFactor(1.0)), rho)
    assert np.allclose(same, rho)


def test_apply_channel_validates_density():
    ch = TwoLevelChannel(DecoherenceFactor(0.5))
    with pytest.raises(ValueError, match="2x2"):
        apply_channel(ch, np.eye(3) / 3.0)
    with pytest.raises(ValueError, match="Hermitian"):
        apply_channel(ch, np.array([[0.5, 0.5], [0.0, 0.5]]))
    with pytest.raises(ValueError, match="trace"):
        apply_channel(ch, np.eye(2))
    with pytest.raises(ValueError, match="negative eigenvalue"):
        apply_channel(ch, np.array([[1.2, 0.5], [0.5, -0.2]]))


def test_interferometer_probabilities():
    assert interferometer_probabilities(1.0) == pytest.approx((1.0, 0.0))
    assert interferometer_probabilities(-1.0) == pytest.approx((0.0, 1.0))
    assert interferometer_probabilities(0.0) == pytest.approx((0.5, 0.5))
    # purely imaginary gamma leaves the ports balanced
    assert interferometer_probabilities(0.9j) == pytest.approx((0.5, 0.5))
    g = DecoherenceFactor(0.3 - 0.2j)
    assert interferometer_probabilities(g)[0] == pytest.approx(0.65)
    with pytest.raises(ValueError, match="exceeds 1"):
        interferometer_probabilities(1.5)


def test_sampled_distribution_validation():
    with pytest.raises(ValueError, match="equal-length"):
        SampledDistribution(np.array([0.0, 1.0]), np.array([1.0]))
    with pytest.raises(ValueError, match="negative weight"):
        SampledDistribution(np.array([0.0, 1.0]), np.array([1.1, -0.1]))
    with pytest.raises(ValueError, match="total weight"):
        SampledDistribution(np.array([0.0, 1.0]), np.array([0.4, 0.4]))
    d = SampledDistribution(np.array([0.0, 1.0]), np.array([0.25, 0.75]))
    assert d.weights.sum() == pytest.approx(1.0)


def test_sampled_distribution_from_density():
    xs = np.linspace(-10.0, 10.0, 2000)
    xs = xs + (xs[1] - xs[0]) / 2.0
    dens = np.exp(-xs**2 / 2.0) / math.sqrt(2.0 * math.pi)
    d = SampledDistribution.from_density(xs, dens)
    assert float(d.weights @ xs) == pytest.approx(0.0, abs=1e-3)


def test_chernoff_identical_distributions_is_zero():
    d = SampledDistribution(np.array([0.0, 1.0]), np.array([0.3, 0.7]))
    assert chernoff_exponent(d, d) == 0.0


def test_chernoff_disjoint_supports_is_infinite():
    s = np.array([0.0, 1.0])
    p = SampledDistribution(s, np.array([1.0, 0.0]))
    q = SampledDistribution(s, np.array([0.0, 1.0]))
    assert chernoff_exponent(p, q) == math.inf


def test_chernoff_requires_shared_support():
    p = SampledDistribution(np.array([0.0, 1.0]), np.array([0.5, 0.5]))
    q = SampledDistribution(np.array([0.0, 2.0]), np.array([0.5, 0.5]))
    with pytest.raises(ValueError, match="share a support"):
        chernoff_exponent(p, q)


def test_chernoff_one_sided_support_closed_form():
    # p concentrates where q has weight 1/2: the best exponent is ln 2
    s = np.array([0.0, 1.0])
    p = SampledDistribution(s, np.array([1.0, 0.0]))
    q = SampledDistribution(s, np.array([0.5, 0.5]))
    assert chernoff_exponent(p, q) == pytest.approx(math.log(2.0), abs=1e-9)
    assert chernoff_exponent(q, p) == pytest.approx(math.log(2.0), abs=1e-9)


def test_chernoff_equal_variance_gaussians():
    # N(0,1) vs N(1,1): exponent is (mu1 - mu0)^2 / 8 = 1/8
    xs = np.linspace(-12.0, 13.0, 4000)
    xs = xs + (xs[1] - xs[0]) / 2.0
    p = SampledDistribution.from_density(xs, np.exp(-xs**2 / 2) / math.sqrt(2 * math.pi))
    q = SampledDistribution.from_density(xs, np.exp(-((xs - 1.0) ** 2) / 2) / math.sqrt(2 * math.pi))
    assert chernoff_exponent(p, q) == pytest.approx(0.125, abs=1e-10)


def test_gaussian_exponent_matches_closed_form():
    # null D = 0 vs alt D = D_SQL, read out in position: both hypotheses are
    # zero-mean Gaussians with variances 1 and 1 + 2 D_SQL / 3
    prep = gaussian_wavepacket(0.0, 0.0, math.sqrt(0.5))
    got = detection_error_exponent(prep, ExperimentConfig(), D_SQL)
    assert got == pytest.approx(0.019488567578504902, abs=1e-12)

    from scipy.optimize import minimize_scalar

    v0, v1 = 1.0 + 2.0 * D_SQL / 3.0, 1.0

    def negk(a):
        t = a / v0 + (1.0 - a) / v1
        return -0.5 * (math.log(t) + a * math.log(v0) + (1.0 - a) * math.log(v1))

    res = minimize_scalar(negk, bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-12})
    assert got == pytest.approx(-float(res.fun), abs=1e-12)


def test_cat_exponent_closed_form():
    # null: gamma = 1, the minus port never fires; alt: s = 4.5. The Chernoff
    # bound is then -ln P_plus(alt) = -ln((1 + e^{-4.5})/2).
    cat = CatState(gaussian_wavepacket(-10.0, 0.0, 1.0), gaussian_wavepacket(10.0, 0.0, 1.0))
    got = detection_error_exponent(cat, ExperimentConfig(L=20.0), D_SQL / 100.0)
    assert got == pytest.approx(-math.log((1.0 + math.exp(-4.5)) / 2.0), abs=1e-12)
    assert got == pytest.approx(0.6820994357113516, abs=1e-12)


def test_cat_exponent_ignores_branch_width():
    narrow = CatState(gaussian_wavepacket(-10.0, 0.0, 0.3), gaussian_wavepacket(10.0, 0.0, 0.3))
    wide = CatState(gaussian_wavepacket(-10.0, 0.0, 1.0), gaussian_wavepacket(10.0, 0.0, 1.0))
    cfg = ExperimentConfig(L=20.0)
    assert detection_error_exponent(narrow, cfg, D_SQL / 100.0) == detection_error_exponent(
        wide, cfg, D_SQL / 100.0
    )


def test_force_discrimination_exact():
    # equal variances, means split by F T^2 / 2m: exponent = dmu^2 / 8 v
    prep = gaussian_wavepacket(0.0, 0.0, math.sqrt(0.5))
    got = detection_error_exponent(prep, ExperimentConfig(), 0.0, F_alt=1.0)
    assert got == pytest.approx(1.0 / 32.0, abs=1e-12)


def test_detection_error_exponent_validation():
    prep = gaussian_wavepacket(0.0, 0.0, 1.0)
    with pytest.raises(ValueError, match="D_alt"):
        detection_error_exponent(prep, ExperimentConfig(), -1.0)
    with pytest.raises(TypeError, match="unsupported preparation"):
        detection_error_exponent("nope", ExperimentConfig(), 0.1)


def test_optimize_gaussian_preparation_small_sweep():
    best, surface = optimize_gaussian_preparation(ExperimentConfig(), D_SQL / 100.0, n_sigma=7, n_r=5)
    assert len(surface) == 35
    arr = np.array(surface)
    # sweep order: sigma outer (log-spaced around the analytic optimum), r inner
    sigma_opt = optimal_widths(1.0, 1.0).sigma_x_prep
    assert arr[0, 0] == pytest.approx(sigma_opt / 100.0)
    assert arr[0, 1] == 0.0
    assert arr[-1, 0] == pytest.approx(sigma_opt * 100.0)
    # best row is the reported preparation
    i = int(np.argmax(arr[:, 2]))
    assert math.sqrt(best.cov[0, 0]) == pytest.approx(arr[i, 0])
    # diffusion discrimination without contractive states peaks at r = 0 and
    # at the free-mass optimal width
    assert arr[i, 1] == 0.0
    assert arr[i, 0] == pytest.approx(sigma_opt)


def test_optimize_gaussian_contractive_sweep_extends_range():
    _, surface = optimize_gaussian_preparation(
        ExperimentConfig(), D_SQL / 100.0, allow_contractive=True, n_sigma=3, n_r=5, r_max=0.9
    )
    rs = sorted({row[1] for row in surface})
    assert rs[0] == pytest.approx(-0.9)
    assert rs[-1] == pytest.approx(0.9)
