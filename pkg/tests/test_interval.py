"""Tent/Ulam-von Neumann calculus: symbolic transfer, decay, Lyapunov."""

import math

import numpy as np
import pytest
from numpy.polynomial import chebyshev

from toraldecay import interval
from toraldecay.errors import InputError, TooLarge, TruncationTooSmall


def random_series(rng, top=9):
    coeffs = {0: float(rng.normal())}
    for k in range(1, top + 1):
        coeffs[k] = float(rng.normal())
    sines = {m: float(rng.normal()) for m in (1, 3, 5)}
    return interval.CosineSeries(coeffs, sines)


def gauss_legendre_pair(f_vals_fun, g_vals_fun, panels=((-1.0, 0.0), (0.0, 1.0)), n=80):
    # <f, g> in L^2([-1,1], dx/2), split at the tent kink
    total = 0.0
    for a, b in panels:
        x, w = np.polynomial.legendre.leggauss(n)
        x = 0.5 * (b - a) * x + 0.5 * (a + b)
        w = 0.5 * (b - a) * w
        total += float(np.sum(w * f_vals_fun(x) * g_vals_fun(x)))
    return 0.5 * total


def chebyshev_gauss_pair(f_vals_fun, g_vals_fun, n=256):
    # <f, g> against the arcsine law via Chebyshev-Gauss nodes
    y = np.cos((2.0 * np.arange(1, n + 1) - 1.0) * math.pi / (2.0 * n))
    return float(np.mean(f_vals_fun(y) * g_vals_fun(y)))


def test_conjugacy_intertwines_maps():
    x = np.linspace(-1.0, 1.0, 2001)
    lhs = interval.uvn_map(interval.conjugacy(x))
    rhs = interval.conjugacy(interval.tent_map(x))
    assert np.max(np.abs(lhs - rhs)) < 1e-14


def test_cosine_series_norm_and_inner_vs_quadrature():
    rng = np.random.default_rng(40)
    f = random_series(rng)
    g = random_series(rng)
    norm_quad = math.sqrt(gauss_legendre_pair(f.evaluate, f.evaluate))
    assert f.norm_l2() == pytest.approx(norm_quad, abs=1e-12)
    assert f.inner(g) == pytest.approx(gauss_legendre_pair(f.evaluate, g.evaluate), abs=1e-12)
    assert f.mean() == f.coeffs[0]


def test_tent_transfer_matches_pointwise_oracle():
    rng = np.random.default_rng(41)
    y = np.linspace(-0.99, 0.99, 101)
    for _ in range(5):
        f = random_series(rng)
        symbolic = interval.tent_transfer(f, 1).evaluate(y)
        direct = interval.tent_transfer_pointwise(f.evaluate, y)
        assert np.max(np.abs(symbolic - direct)) < 1e-12


def test_tent_transfer_step_table():
    # cos(2 pi x) = cos(pi 2 x) -> -cos(pi x); cos(pi 4 x) -> +cos(pi 2 x)
    f = interval.CosineSeries({2: 1.0})
    assert interval.tent_transfer(f, 1).coeffs == {1: -1.0}
    f = interval.CosineSeries({4: 1.0})
    assert interval.tent_transfer(f, 1).coeffs == {2: 1.0}
    # odd cosines become transient half-frequency sines, then vanish
    f = interval.CosineSeries({1: 1.0})
    once = interval.tent_transfer(f, 1)
    assert once.coeffs == {}
    assert once.sine_part == {1: 1.0}
    assert interval.tent_transfer(f, 2).norm_l2() == 0.0
    f = interval.CosineSeries({3: 2.0})
    assert interval.tent_transfer(f, 1).sine_part == {3: -2.0}
    const = interval.CosineSeries({0: 5.0})
    assert interval.tent_transfer(const, 7).coeffs == {0: 5.0}


def test_tent_transfer_is_adjoint_of_composition():
    # <L f, g> = <f, g o T> in L^2(dx/2)
    rng = np.random.default_rng(42)
    for _ in range(4):
        f = random_series(rng, top=6)
        g = random_series(rng, top=6)
        lhs = gauss_legendre_pair(interval.tent_transfer(f, 1).evaluate, g.evaluate)
        rhs = gauss_legendre_pair(
            f.evaluate, lambda x: g.evaluate(interval.tent_map(x))
        )
        assert lhs == pytest.approx(rhs, abs=1e-10)


def test_tent_transfer_contracts_and_preserves_mean():
    rng = np.random.default_rng(43)
    f = random_series(rng)
    g = interval.tent_transfer(f, 1)
    assert g.mean() == f.mean()
    assert g.norm_l2() <= f.norm_l2() + 1e-12
    with pytest.raises(InputError):
        interval.tent_transfer(f, -1)


def test_chebyshev_pullback_matches_composition():
    rng = np.random.default_rng(44)
    x = np.linspace(-1.0, 1.0, 401)
    h = interval.conjugacy(x)
    for _ in range(5):
        deg = int(rng.integers(1, 9))
        cheb = {k: float(rng.normal()) for k in range(deg + 1)}
        series = interval.chebyshev_pullback(cheb)
        direct = chebyshev.chebval(h, [cheb.get(k, 0.0) for k in range(deg + 1)])
        assert np.max(np.abs(series.evaluate(x) - direct)) < 1e-12
    with pytest.raises(InputError):
        interval.chebyshev_pullback({-1: 1.0})


def test_uvn_transfer_is_adjoint_for_arcsine_law():
    # the balanced branch average is the adjoint of U-composition in L^2(mu)
    rng = np.random.default_rng(45)
    for _ in range(4):
        fc = [float(rng.normal()) for _ in range(7)]
        gc = [float(rng.normal()) for _ in range(7)]
        F = lambda y: chebyshev.chebval(y, fc)
        G = lambda y: chebyshev.chebval(y, gc)
        lhs = chebyshev_gauss_pair(
            lambda y: interval.uvn_transfer_pointwise(F, y), G
        )
        rhs = chebyshev_gauss_pair(F, lambda y: G(interval.uvn_map(y)))
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_conjugacy_transports_transfer():
    # <L_U F, G>_mu computed upstairs equals the tent-side symbolic pairing
    rng = np.random.default_rng(46)
    for _ in range(4):
        fc = {k: float(rng.normal()) for k in range(8)}
        gc = {k: float(rng.normal()) for k in range(8)}
        F = lambda y: chebyshev.chebval(y, [fc[k] for k in range(8)])
        G = lambda y: chebyshev.chebval(y, [gc[k] for k in range(8)])
        upstairs = chebyshev_gauss_pair(
            lambda y: interval.uvn_transfer_pointwise(F, y), G
        )
        downstairs = interval.tent_transfer(interval.chebyshev_pullback(fc), 1).inner(
            interval.chebyshev_pullback(gc)
        )
        assert upstairs == pytest.approx(downstairs, abs=1e-12)


def test_uvn_pullback_log_pointwise():
    g = interval.uvn_pullback_log(10**4)
    for x in (0.3, 0.5, -0.71, 0.97):
        want = math.log(abs(math.sin(0.5 * math.pi * x))) + math.log(2.0)
        assert abs(g.evaluate(np.array([x]))[0] - want) < 1e-3
    with pytest.raises(InputError):
        interval.uvn_pullback_log(0)


def test_uvn_decay_norms_exact_ratio():
    report = interval.uvn_decay_norms(12, truncation=10**6)
    assert report.rows[0].value == pytest.approx(math.pi / math.sqrt(12.0))
    for row in report.rows[1:]:
        assert row.ratio == pytest.approx(math.pi / math.sqrt(3.0), abs=1e-12)
    assert report.fit is not None
    assert report.fit.model == "exponential"
    assert report.fit.param == pytest.approx(0.5, abs=1e-9)


def test_uvn_decay_norms_truncation_guard():
    with pytest.raises(TruncationTooSmall):
        interval.uvn_decay_norms(10, truncation=2**13)
    with pytest.raises(InputError):
        interval.uvn_decay_norms(-1)


def test_uvn_decay_norms_vs_symbolic_transfer():
    # finite-truncation symbolic route plus the exact trigamma completion
    # must reproduce the reported infinite-series values
    k = 2**14
    g = interval.uvn_pullback_log(k)
    report = interval.uvn_decay_norms(6, truncation=k)
    for n in range(7):
        sym = interval.tent_transfer(g, n).norm_l2()
        if n == 0:
            completion = 0.5 * interval._trigamma(k + 1)
        else:
            j_max = k >> n
            m_max = k >> (n - 1)
            odd_first = m_max + 1 if m_max % 2 == 0 else m_max + 2
            completion = 0.5 * (
                0.25**n * interval._trigamma(j_max + 1)
                + 4.0 * 0.25**n * interval._odd_inverse_square_tail(odd_first)
            )
        assert report.rows[n].value**2 == pytest.approx(
            sym**2 + completion, abs=1e-13
        )


def test_alternating_tail_matches_direct_sum():
    for j in (0, 1, 2, 7, 100):
        direct = sum((-1) ** i / i**2 for i in range(j + 1, 200000))
        assert interval._alternating_tail(j) == pytest.approx(direct, abs=1e-9)


def test_sqrt_modulus_closed_form_vs_series():
    deltas = [0.5, 0.1, 0.01, 0.001]
    result = interval.uvn_modulus_sqrt_delta(deltas)
    n = np.arange(1, 10**6, dtype=float)
    for delta, value in zip(result.curve.radii, result.curve.values):
        direct = math.sqrt(float(np.sum(2.0 * np.sin(0.5 * math.pi * n * delta) ** 2 / n**2)))
        assert value == pytest.approx(direct, abs=2e-5)
    assert 0.45 <= result.exponent <= 0.55
    assert result.curve.check_invariants(math.pi / math.sqrt(12.0))


def test_sqrt_modulus_validation():
    with pytest.raises(InputError):
        interval.uvn_modulus_sqrt_delta([])
    with pytest.raises(InputError):
        interval.uvn_modulus_sqrt_delta([0.0, 0.1])
    with pytest.raises(InputError):
        interval.uvn_modulus_sqrt_delta([0.7])


def test_lyapunov_sigma2_is_degenerate():
    assert interval.lyapunov_sigma2() == 0.0
    assert interval.lyapunov_sigma2(truncation=10**4) == 0.0


def test_lyapunov_clt_recovers_log2():
    report = interval.lyapunov_clt(1000, 800, seed=2)
    assert report.sigma2 == 0.0
    assert report.ks_stat is None
    assert abs(report.mean_log_derivative - math.log(2.0)) < 0.01
    a = interval.lyapunov_clt(200, 600, seed=3, threads=1)
    b = interval.lyapunov_clt(200, 600, seed=3, threads=4)
    assert np.array_equal(a.samples, b.samples)


def test_lyapunov_clt_custom_observable():
    report = interval.lyapunov_clt(300, 500, seed=4, observable=lambda y: y)
    assert report.sigma2 is None
    assert report.ks_stat is None
    # int y dmu = 0: the empirical mean of S_n/n stays small
    assert abs(report.mean_log_derivative) < 0.05
    with pytest.raises(TooLarge):
        interval.lyapunov_clt(10**6, 10**4, seed=0)
    with pytest.raises(InputError):
        interval.lyapunov_clt(0, 5, seed=0)


def test_log_abs_mean():
    assert interval.log_abs_mean() == pytest.approx(-math.log(2.0), abs=1e-9)
