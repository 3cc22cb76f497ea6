import json
import math

import numpy as np
import pytest
from scipy import integrate, stats

from soundnet import distfit
from soundnet.distfit import ALL_FAMILIES, DistFamily, FittedDistribution
from soundnet.errors import DegenerateData, InsufficientData, NonConvergence


def repeat(values, times=7):
    return np.asarray(list(values) * times, dtype=np.float64)


# --- closed-form MLE anchors ---------------------------------------------------

def test_exponential_closed_form():
    fit = distfit.fit_mle(DistFamily.EXPONENTIAL, repeat([1.0, 2.0, 3.0]))
    assert fit.loc == 1.0
    assert fit.scale == 1.0


def test_normal_closed_form():
    fit = distfit.fit_mle(DistFamily.NORMAL, repeat([-1.0, 0.0, 1.0]))
    assert fit.loc == 0.0
    assert abs(fit.scale - math.sqrt(2.0 / 3.0)) < 1e-12


def test_lognormal_closed_form(rng):
    x = rng.lognormal(mean=1.0, sigma=0.5, size=50_000)
    fit = distfit.fit_mle(DistFamily.LOG_NORMAL, x)
    assert abs(fit.shape_params[0] - 0.5) < 0.02
    assert abs(fit.scale - math.e) < 0.05
    assert fit.loc == 0.0


def test_pareto_hill_estimator(rng):
    b_true = 2.5
    x = 3.0 * (1.0 - rng.random(50_000)) ** (-1.0 / b_true)  # inverse-CDF oracle
    fit = distfit.fit_mle(DistFamily.PARETO, x)
    assert abs(fit.shape_params[0] - b_true) / b_true < 0.03
    assert fit.scale == x.min()


def test_powerlaw_closed_form(rng):
    a_true = 1.8
    x = 10.0 * rng.random(50_000) ** (1.0 / a_true)  # z = u^(1/a) oracle
    fit = distfit.fit_mle(DistFamily.POWER_LAW, x)
    assert abs(fit.shape_params[0] - a_true) / a_true < 0.03
    assert fit.scale == x.max()


def test_exponential_recovery_large_sample():
    draws = np.random.default_rng(2024).exponential(scale=50.0, size=100_000)
    fit = distfit.fit_mle(DistFamily.EXPONENTIAL, draws)
    assert abs(fit.scale - 50.0) / 50.0 < 0.01


def test_gibrat_fit_recovers_standard_lognormal():
    draws = np.random.default_rng(9).lognormal(mean=0.0, sigma=1.0, size=10_000)
    fit = distfit.fit_mle(DistFamily.GIBRAT, draws)
    assert abs(fit.loc) < 0.1
    assert abs(fit.scale - 1.0) < 0.1


def test_expweib_nests_exponential():
    draws = np.random.default_rng(10).exponential(scale=5.0, size=10_000)
    fit = distfit.fit_mle(DistFamily.EXPONENTIATED_WEIBULL, draws)
    a, c = fit.shape_params
    assert abs(a - 1.0) < 0.2
    assert abs(c - 1.0) < 0.2


def test_insufficient_and_degenerate():
    with pytest.raises(InsufficientData):
        distfit.fit_mle(DistFamily.NORMAL, [1.0] * 19)
    with pytest.raises(DegenerateData):
        distfit.fit_mle(DistFamily.NORMAL, [2.5] * 25)
    with pytest.raises(DegenerateData):
        distfit.best_fit([2.5] * 25)


def test_nonconvergence_carries_partial_fit(monkeypatch):
    from soundnet import simplex

    def capped(fn, x0, max_iter=10_000, diameter_tol=1e-9):
        return simplex.nelder_mead(fn, x0, max_iter=1, diameter_tol=0.0)

    monkeypatch.setattr(distfit, "nelder_mead", capped)
    draws = np.random.default_rng(0).lognormal(size=1000)
    with pytest.raises(NonConvergence) as err:
        distfit.fit_mle(DistFamily.GIBRAT, draws)
    assert err.value.fit is not None
    report = distfit.best_fit(draws)
    assert not report.per_family[DistFamily.GIBRAT].converged
    assert report.best not in (DistFamily.GIBRAT, DistFamily.EXPONENTIATED_WEIBULL)


# --- KS test ---------------------------------------------------------------------

def test_ks_single_point():
    fit = FittedDistribution(DistFamily.EXPONENTIAL, (), 0.0, 1.0)
    res = distfit.ks_test(fit, [math.log(2.0)])
    assert abs(res.statistic_d - 0.5) < 1e-15
    assert res.n == 1


def test_ks_quantile_grid_midpoints():
    # samples at F^-1((i-0.5)/n) make D = 1/(2n) exactly
    n = 100
    scale = 50.0
    p = (np.arange(1, n + 1) - 0.5) / n
    x = -scale * np.log1p(-p)
    fit = FittedDistribution(DistFamily.EXPONENTIAL, (), 0.0, scale)
    res = distfit.ks_test(fit, x)
    assert abs(res.statistic_d - 0.005) < 1e-12


def test_ks_p_value_against_tabulated():
    assert abs(distfit._kolmogorov_q(1.36) - 0.049) < 1e-3
    # scipy's kstwobign is the same asymptotic law
    for lam in (0.5, 0.9, 1.36, 2.0):
        assert abs(distfit._kolmogorov_q(lam) - stats.kstwobign.sf(lam)) < 1e-6


def test_ks_self_fit_p_value(rng):
    draws = rng.exponential(scale=50.0, size=10_000)
    fit = distfit.fit_mle(DistFamily.EXPONENTIAL, draws)
    res = distfit.ks_test(fit, draws)
    assert res.p_value > 0.01


def test_ks_statistic_matches_scipy(rng):
    draws = rng.lognormal(size=500)
    fit = distfit.fit_mle(DistFamily.GIBRAT, draws)
    mine = distfit.ks_test(fit, draws).statistic_d
    ref = stats.kstest(draws, lambda v: fit.cdf(v)).statistic
    assert abs(mine - ref) < 1e-12


def test_ks_loc_scale_equivariance(rng):
    draws = rng.normal(3.0, 2.0, size=200)
    for family in (DistFamily.NORMAL, DistFamily.EXPONENTIAL, DistFamily.GIBRAT):
        fit = distfit._FITTERS[family](np.abs(draws) + 0.5)[0]
        base = distfit.ks_test(fit, np.abs(draws) + 0.5).statistic_d
        a, b = 3.5, 11.0
        moved = FittedDistribution(family, fit.shape_params, a * fit.loc + b, a * fit.scale)
        shifted = distfit.ks_test(moved, a * (np.abs(draws) + 0.5) + b).statistic_d
        assert abs(base - shifted) < 1e-12


# --- distribution shape invariants -------------------------------------------------

def _fitted_instances(rng):
    x = rng.lognormal(mean=1.2, sigma=0.7, size=5_000) + 0.5
    return [distfit._FITTERS[family](x)[0] for family in ALL_FAMILIES]


def test_pdf_nonnegative_cdf_monotone(rng):
    for fit in _fitted_instances(rng):
        grid = np.linspace(-1.0, 200.0, 10_000)
        pdf = fit.pdf(grid)
        cdf = fit.cdf(grid)
        assert np.all(pdf >= 0.0), fit.family
        assert np.all(np.diff(cdf) >= -1e-12), fit.family
        assert np.all((cdf >= 0.0) & (cdf <= 1.0)), fit.family
        assert fit.cdf(np.array([-np.inf]))[0] == 0.0
        assert fit.cdf(np.array([np.inf]))[0] == 1.0


def test_pdf_integrates_to_one(rng):
    # independent quadrature oracle
    for fit in _fitted_instances(rng):
        lo = fit.loc if fit.family is not DistFamily.NORMAL else -np.inf
        hi = fit.loc + fit.scale if fit.family is DistFamily.POWER_LAW else np.inf
        total, _ = integrate.quad(lambda v: float(fit.pdf(np.array([v]))[0]), lo, hi, limit=300)
        assert 0.9999 <= total <= 1.0001, (fit.family, total)


def test_pdf_cdf_match_scipy_conventions(rng):
    grid = np.linspace(0.05, 40.0, 400)
    pairs = [
        (FittedDistribution(DistFamily.NORMAL, (), 3.0, 2.0), stats.norm(3.0, 2.0)),
        (FittedDistribution(DistFamily.LOG_NORMAL, (0.8,), 0.0, 3.0), stats.lognorm(0.8, 0.0, 3.0)),
        (FittedDistribution(DistFamily.EXPONENTIAL, (), 0.1, 5.0), stats.expon(0.1, 5.0)),
        (FittedDistribution(DistFamily.PARETO, (1.7,), 0.0, 2.0), stats.pareto(1.7, 0.0, 2.0)),
        (FittedDistribution(DistFamily.GIBRAT, (), 0.5, 2.0), stats.gibrat(0.5, 2.0)),
        (FittedDistribution(DistFamily.POWER_LAW, (1.4,), 0.0, 20.0), stats.powerlaw(1.4, 0.0, 20.0)),
        (
            FittedDistribution(DistFamily.EXPONENTIATED_WEIBULL, (1.3, 0.9), 0.0, 5.0),
            stats.exponweib(1.3, 0.9, 0.0, 5.0),
        ),
    ]
    for mine, ref in pairs:
        assert np.max(np.abs(mine.cdf(grid) - ref.cdf(grid))) < 1e-12, mine.family
        assert np.max(np.abs(mine.pdf(grid) - ref.pdf(grid))) < 1e-10, mine.family


def test_fit_is_local_likelihood_optimum(rng):
    x = rng.lognormal(mean=1.0, sigma=0.6, size=2_000) + 1.0
    for family in ALL_FAMILIES:
        fit = distfit._FITTERS[family](x)[0]
        base = fit.loglike(x)
        probe_rng = np.random.default_rng(99)
        for _ in range(100):
            shapes = tuple(s * (1.0 + 0.005 * probe_rng.standard_normal()) for s in fit.shape_params)
            loc = fit.loc + 0.005 * fit.scale * probe_rng.standard_normal()
            scale = fit.scale * (1.0 + 0.005 * probe_rng.standard_normal())
            if family in (DistFamily.LOG_NORMAL, DistFamily.PARETO, DistFamily.POWER_LAW, DistFamily.EXPONENTIATED_WEIBULL):
                loc = fit.loc  # loc pinned in these parameterizations
            if family is DistFamily.POWER_LAW and scale < x.max():
                continue  # support would exclude the sample maximum
            if family is DistFamily.PARETO and scale > x.min():
                continue
            probed = FittedDistribution(family, shapes, loc, scale)
            assert probed.loglike(x) <= base + 1e-6, family


# --- best_fit -------------------------------------------------------------------

def test_best_fit_exponential_data(rng):
    wins = 0
    for seed in range(3):
        draws = np.random.default_rng(seed).exponential(scale=50.0, size=10_000)
        report = distfit.best_fit(draws)
        d = {fam: ff.ks.statistic_d for fam, ff in report.per_family.items()}
        wins += d[DistFamily.EXPONENTIAL] < d[DistFamily.NORMAL]
        assert report.best in (DistFamily.EXPONENTIAL, DistFamily.EXPONENTIATED_WEIBULL)
    assert wins == 3


def test_best_fit_lognormal_prefers_gibrat_over_exponential():
    wins = 0
    for seed in range(20):
        draws = np.random.default_rng(400 + seed).lognormal(mean=0.0, sigma=1.0, size=10_000)
        report = distfit.best_fit(draws)
        d = {fam: ff.ks.statistic_d for fam, ff in report.per_family.items()}
        wins += d[DistFamily.GIBRAT] < d[DistFamily.EXPONENTIAL]
    assert wins >= 19


def test_best_fit_runs_all_seven_families(rng):
    draws = rng.exponential(scale=30.0, size=2_000) + 20.0
    report = distfit.best_fit(draws)
    assert set(report.per_family) | set(report.failed) == set(ALL_FAMILIES)
    assert not report.failed


def test_best_fit_all_failed(monkeypatch):
    def boom(x):
        raise ValueError("forced failure")

    monkeypatch.setattr(distfit, "_FITTERS", {fam: boom for fam in ALL_FAMILIES})
    with pytest.raises(distfit.AllFitsFailed):
        distfit.best_fit(np.linspace(1.0, 9.0, 40))


def test_best_fit_deterministic_report(rng):
    draws = rng.exponential(scale=42.0, size=5_000)
    first = json.dumps(distfit.report_to_dict(distfit.best_fit(draws)), sort_keys=True)
    second = json.dumps(distfit.report_to_dict(distfit.best_fit(draws)), sort_keys=True)
    assert first == second


def test_report_dict_shape(rng):
    draws = rng.exponential(scale=42.0, size=1_000) + 5.0
    payload = distfit.report_to_dict(distfit.best_fit(draws))
    assert payload["n"] == 1_000
    assert payload["best"] in payload["families"]
    exp = payload["families"]["exponential"]
    assert len(exp["params"]) == 2  # (loc, scale)
    assert len(payload["families"]["exponentiated_weibull"]["params"]) == 4
    assert len(payload["families"]["gibrat"]["params"]) == 2
    for entry in payload["families"].values():
        assert set(entry) >= {"params", "ks_d", "ks_p", "converged"}
