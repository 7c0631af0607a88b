import numpy as np
import pytest
from scipy import optimize
from scipy import stats as spstats

from gigwalk.gig import GigParams, gig_pdf, gig_sample, gig_scale
from gigwalk.kernels import (GridCoverageError, KernelDensity, LogGrid,
                             characterization_discrepancy,
                             check_detailed_balance, check_intertwining,
                             check_stationarity, compose,
                             conditional_x2_given_z2,
                             conditional_x3_given_z3_z2, ktilde_density,
                             lambda_density, my_generator_coefficients,
                             p_density, pi_density, q_density, residual_record)
from gigwalk.stats import ks_one_sample

SEED = 27182818
GRID = LogGrid.make()


def test_loggrid_weights_integrate_log_scale_densities():
    # lognormal density is a Gaussian in u = log x: integral is exactly 1
    u = np.log(GRID.points)
    vals = np.exp(-0.5 * u * u) / (np.sqrt(2.0 * np.pi) * GRID.points)
    assert GRID.integrate(vals) == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.diff(GRID.points) > 0)


def test_loggrid_validation():
    with pytest.raises(ValueError):
        LogGrid.make(1.0, 0.1)
    with pytest.raises(ValueError):
        LogGrid.make(0.0, 10.0)


@pytest.mark.parametrize("family", ["Q", "P", "Lambda", "Ktilde"])
def test_kernel_normalization_box(family):
    kern = {"Q": q_density, "P": p_density, "Lambda": lambda_density,
            "Ktilde": ktilde_density}[family]
    for lam in (0.5, 1.0, 2.0):
        for a in (0.5, 1.0, 2.0):
            for src in (0.1, 1.0, 10.0):
                total = GRID.integrate(kern(lam, a, src, GRID.points))
                assert total == pytest.approx(1.0, abs=1e-8), \
                    f"{family} lam={lam} a={a} src={src}"


def test_kernel_domain_errors():
    with pytest.raises(ValueError):
        q_density(1.0, 1.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        lambda_density(1.0, 1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        pi_density(-1.0, 1.0, 1.0)


def test_q_symmetry_rearrangement():
    # q(x,y) K(a^2/x)/K(a^2/y) * y is symmetric under (x, y) swap
    from gigwalk.specfun import bessel_k
    lam, a, x, y = 1.0, 1.0, 0.5, 2.0
    a2 = a * a

    def g(u, v):
        return q_density(lam, a, u, v) * bessel_k(lam, a2 / u) \
            / bessel_k(lam, a2 / v) * v

    assert g(x, y) == pytest.approx(g(y, x), rel=1e-12)


def test_p_is_scaled_gig_density():
    lam, a, x, y = 2.0, 1.5, 0.7, 1.1
    oracle = gig_pdf(gig_scale(GigParams.symmetric(lam, a), x), y)
    assert p_density(lam, a, x, y) == pytest.approx(oracle, rel=1e-12)


def test_p_multiplicative_invariance():
    lam, a, x, y, c = 1.0, 1.0, 0.8, 1.7, 3.0
    assert p_density(lam, a, c * x, c * y) * c == pytest.approx(
        p_density(lam, a, x, y), rel=1e-12)


def test_lambda_matches_gig_parameters():
    lam, a, z, x = 1.0, 1.0, 2.0, 0.5
    oracle = gig_pdf(GigParams.symmetric(lam, a / np.sqrt(z)), x)
    assert lambda_density(lam, a, z, x) == pytest.approx(oracle, rel=1e-12)


def test_ktilde_pushforward_oracle():
    # density of gamma^2 x + gamma, gamma ~ GIG(-lam, a, a), by numerically
    # inverting the map and differencing the inverse
    lam, a, x, y = 1.0, 1.0, 1.0, 2.0

    def gamma_of(yv):
        return optimize.brentq(lambda g: g * g * x + g - yv, 1e-12, 1e6,
                               xtol=1e-14, rtol=1e-15)

    h = 1e-6
    dgdy = (gamma_of(y + h) - gamma_of(y - h)) / (2.0 * h)
    oracle = gig_pdf(GigParams.symmetric(-lam, a), gamma_of(y)) * abs(dgdy)
    assert ktilde_density(lam, a, x, y) == pytest.approx(oracle, rel=1e-8)
    # the stable-root form also holds where 4xy is tiny
    val = ktilde_density(lam, a, 1e-8, 1e-8)
    g = 1e-8  # gamma ~ y when xy -> 0
    assert val == pytest.approx(gig_pdf(GigParams.symmetric(-lam, a), g),
                                rel=1e-6)


def test_detailed_balance_pointwise():
    assert check_detailed_balance(1.0, 1.0, [[1.0, 2.0]]) < 1e-12
    rng = np.random.default_rng(SEED)
    pairs = np.exp(rng.normal(0.0, 1.0, (100, 2)))
    for lam in (0.5, 1.0, 2.0):
        assert check_detailed_balance(lam, 1.0, pairs) < 1e-12


def test_pi_is_inverse_gamma_alias():
    from gigwalk.gig import InvGammaParams, inverse_gamma_pdf
    xs = np.array([0.2, 1.0, 4.0])
    assert pi_density(1.5, 2.0, xs) == pytest.approx(
        inverse_gamma_pdf(InvGammaParams(1.5, 2.0), xs), rel=1e-15)


def test_compose_normalizes():
    table = compose(KernelDensity("Q", 1.0, 1.0), KernelDensity("Q", 1.0, 1.0),
                    1.0, GRID)
    assert GRID.integrate(table) == pytest.approx(1.0, abs=2e-8)


def test_compose_grid_refinement():
    fine = GRID.refined(2)
    coarse_tab = compose(KernelDensity("Lambda", 1.0, 1.0),
                         KernelDensity("P", 1.0, 1.0), 1.0, GRID)
    fine_tab = compose(KernelDensity("Lambda", 1.0, 1.0),
                       KernelDensity("P", 1.0, 1.0), 1.0, fine)
    # compare on the shared points (every other fine point is a coarse point)
    on_coarse = np.interp(np.log(GRID.points), np.log(fine.points), fine_tab)
    assert np.max(np.abs(on_coarse - coarse_tab)) < 1e-9


def test_compose_boundary_diagnostic():
    narrow = LogGrid.make(1e-2, 1e2, 400)
    with pytest.raises(GridCoverageError):
        compose(KernelDensity("P", 1.0, 1.0), KernelDensity("P", 1.0, 1.0),
                1e-5, narrow)


def test_intertwining_residuals():
    assert check_intertwining(1.0, 1.0, 1.0, GRID) < 1e-6
    assert check_intertwining(0.5, 2.0, 3.0, GRID) < 1e-6


def test_intertwining_sensitivity_to_perturbed_link():
    # shifting lambda by 0.2 inside Lambda only must break the identity
    lam, a, z = 1.0, 1.0, 1.0
    wrong = KernelDensity("Lambda", lam + 0.2, a)
    lp = compose(wrong, KernelDensity("P", lam, a), z, GRID)
    ql = compose(KernelDensity("Q", lam, a), wrong, z, GRID)
    assert np.max(np.abs(lp - ql)) > 1e-3


def test_stationarity_residuals():
    assert check_stationarity(1.0, np.sqrt(2.0), GRID) < 1e-7
    assert check_stationarity(3.0, 0.8, GRID) < 1e-7
    wide = LogGrid.make(1e-8, 1e8, 5000)
    assert check_stationarity(0.1, 1.0, wide) < 1e-6


def test_conditional_x2_matches_link_kernel():
    lam, a, z = 1.0, 1.0, 2.0
    params = GigParams.symmetric(lam, a)
    got = conditional_x2_given_z2(lambda t: gig_pdf(params, t), z, 1.0, GRID)
    assert got == pytest.approx(lambda_density(lam, a, z, 1.0), abs=1e-9)
    probe = np.linspace(0.05, 20.0, 50)
    got = conditional_x2_given_z2(lambda t: gig_pdf(params, t), z, probe, GRID)
    assert np.max(np.abs(got - lambda_density(lam, a, z, probe))) < 1e-9


def test_conditional_normalization_with_injected_uniform():
    def uniform(t):
        t = np.asarray(t, dtype=float)
        return np.where((t >= 0.5) & (t <= 2.0), 1.0 / 1.5, 0.0)

    total = GRID.integrate(conditional_x2_given_z2(uniform, 2.0, GRID.points,
                                                   GRID))
    assert total == pytest.approx(1.0, rel=1e-12)
    total = GRID.integrate(conditional_x3_given_z3_z2(uniform, 2.0, 1.5,
                                                      GRID.points, GRID))
    assert total == pytest.approx(1.0, rel=1e-12)


def test_conditional_tail_vanishes():
    params = GigParams.symmetric(1.0, 1.0)
    val = conditional_x2_given_z2(lambda t: gig_pdf(params, t), 2.0, 1e5, GRID)
    assert val < 1e-30


def test_conditional_x3_equals_x2_for_gig():
    params = GigParams.symmetric(1.0, 1.0)
    f = lambda t: gig_pdf(params, t)
    a3 = conditional_x3_given_z3_z2(f, 2.0, 1.5, 0.8, GRID)
    a2 = conditional_x2_given_z2(f, 2.0, 0.8, GRID)
    assert a3 == pytest.approx(a2, abs=1e-8)


def test_conditional_x3_differs_for_lognormal():
    f = lambda t: spstats.lognorm.pdf(t, 1.0)
    c2 = conditional_x2_given_z2(f, 2.0, GRID.points, GRID)
    c3 = conditional_x3_given_z3_z2(f, 2.0, 1.5, GRID.points, GRID)
    assert np.max(np.abs(c2 - c3)) > 1e-2


def test_characterization_separation():
    params = GigParams.symmetric(0.7, 1.2)
    f_gig = lambda t: gig_pdf(params, t)
    f_ln = lambda t: spstats.lognorm.pdf(t, 0.5)
    f_gam = lambda t: spstats.gamma.pdf(t, 2.0)
    for (z, u) in [(1.5, 2.0), (2.0, 1.5)]:
        assert characterization_discrepancy(f_gig, z, u, GRID) < 1e-7
        assert characterization_discrepancy(f_ln, z, u, GRID) > 1e-3
        assert characterization_discrepancy(f_gam, z, u, GRID) > 1e-3


def test_generator_coefficients():
    drift, diffusion = my_generator_coefficients(1.0, 3.0)
    assert diffusion == 9.0
    drift, diffusion = my_generator_coefficients(0.5, 1.0)
    assert drift == pytest.approx(2.0, rel=1e-12)  # K_{1/2}/K_{1/2} = 1
    assert diffusion == 1.0
    with pytest.raises(ValueError):
        my_generator_coefficients(1.0, 0.0)


def test_kernel_density_validation():
    with pytest.raises(ValueError):
        KernelDensity("X", 1.0, 1.0)
    k = KernelDensity("Q", 1.0, 1.0)
    assert k(1.0, 1.0) == q_density(1.0, 1.0, 1.0, 1.0)


def test_residual_record_shape():
    rec = residual_record("Q", 1.0, 1.0, 1.0, 1e-9, GRID, 1e-6)
    assert rec["pass"] is True
    assert rec["grid_spec"]["n"] == GRID.size


def _simulate_z2_z3_x3(lam, a, n_paths, seed):
    params = GigParams.symmetric(lam, a)
    rng = np.random.default_rng(seed)
    g = gig_sample(params, rng, 3 * n_paths).reshape(3, n_paths)
    z2 = 1.0 / g[0] + g[1]
    x2 = g[0] * g[1]
    x3 = x2 * g[2]
    z3 = (x3 * z2 + 1.0) / x2
    return z2, z3, x3


def test_q_kernel_against_simulation_chi2():
    # histogram of Z_3 given Z_2 in a narrow window vs the Q density
    lam, a, z = 1.0, 1.0, 2.0
    z2, z3, _ = _simulate_z2_z3_x3(lam, a, 10**6, SEED)
    eps = 0.01 * z
    sel = z3[np.abs(z2 - z) < eps]
    assert sel.size > 5000
    # equal-probability bins from the theoretical conditional
    cdf_grid = np.cumsum(GRID.weights * q_density(lam, a, z, GRID.points))
    cdf_grid /= cdf_grid[-1]
    n_bins = 25
    edges = np.interp(np.linspace(0, 1, n_bins + 1)[1:-1], cdf_grid, GRID.points)
    counts = np.histogram(sel, bins=np.concatenate(([0.0], edges, [np.inf])))[0]
    expected = sel.size / n_bins
    chi2 = float(np.sum((counts - expected) ** 2 / expected))
    assert chi2 < spstats.chi2.ppf(0.999, n_bins - 1), chi2


def test_lambda_kernel_against_simulation_ks():
    # X_3 given Z_3 in a narrow window follows Lambda(z, .)
    lam, a, z = 1.0, 1.0, 1.5
    _, z3, x3 = _simulate_z2_z3_x3(lam, a, 10**6, SEED + 1)
    eps = 0.03 * z
    sel = np.sort(x3[np.abs(z3 - z) < eps])
    assert sel.size > 4000
    cdf_grid = np.cumsum(GRID.weights * lambda_density(lam, a, z, GRID.points))
    cdf_grid /= cdf_grid[-1]
    res = ks_one_sample(sel, lambda x: np.interp(x, GRID.points, cdf_grid))
    assert res.passed, f"KS={res.statistic} crit={res.critical_1pct}"
