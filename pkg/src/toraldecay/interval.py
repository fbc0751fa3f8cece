"""Tent map and Ulam-von Neumann map via an exact cosine-basis calculus.

U(y) = 1 - 2y^2 on [-1, 1] is conjugate to the tent map T(x) = 1 - 2|x|
through h(x) = sin(pi x / 2), which carries normalized Lebesgue measure
dx/2 to the invariant arcsine law. One transfer step acts symbolically on
the basis {1, cos(pi k x)}: even indices halve with a sign, odd indices
move into transient half-frequency sines that die on the next step. That
makes the decay of the pulled-back observable log|y| + log 2 exactly
computable: its norm ratio against 2^-n is the constant pi/sqrt(3).
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import integrate, special

from . import analysis, rng
from .errors import InputError, InternalError, TooLarge, TruncationTooSmall

DEFAULT_TRUNCATION = 10**5
SERIES_TOL = 1e-12
ZERO_VARIANCE_TOL = 1e-10
LOG_FLOOR = 1e-300
ORBIT_GUARD = 10**9
REFRESH_PERIOD = 40
REFRESH_SCALE = 2.0**-40


def tent_map(x):
    return 1.0 - 2.0 * np.abs(x)


def uvn_map(y):
    return 1.0 - 2.0 * y * y


def conjugacy(x):
    """h(x) = sin(pi x / 2); U o h = h o T."""
    return np.sin(0.5 * math.pi * np.asarray(x, dtype=float))


def tent_transfer_pointwise(f, y):
    """Two-branch transfer sum for T with respect to dx/2 (quadrature oracle)."""
    y = np.asarray(y, dtype=float)
    z = 0.5 * (1.0 - y)
    return 0.5 * (f(z) + f(-z))


def uvn_transfer_pointwise(f, y):
    """Transfer for U as the adjoint of composition on L^2 of the arcsine law.

    The preimage branches +-sqrt((1-y)/2) carry equal invariant mass, so the
    operator is the balanced branch average.
    """
    y = np.asarray(y, dtype=float)
    z = np.sqrt(0.5 * (1.0 - y))
    return 0.5 * (f(z) + f(-z))


@dataclass
class CosineSeries:
    """f(x) = c_0 + sum c_k cos(pi k x) + sum s_m sin(pi m x / 2) on [-1, 1].

    coeffs maps k >= 0 to c_k; sine_part maps odd m >= 1 to s_m. The sine
    terms appear only as one-step transients of odd cosine indices; they are
    odd functions, so a further transfer step annihilates them.
    """

    coeffs: dict = field(default_factory=dict)
    sine_part: dict = field(default_factory=dict)

    def norm_l2(self):
        """Norm in L^2([-1,1], dx/2); the stored basis is orthogonal there."""
        c0 = self.coeffs.get(0, 0.0)
        total = c0 * c0
        total += 0.5 * sum(c * c for k, c in self.coeffs.items() if k)
        total += 0.5 * sum(s * s for s in self.sine_part.values())
        return math.sqrt(total)

    def inner(self, other):
        """L^2(dx/2) inner product, exactly from shared coefficients."""
        total = self.coeffs.get(0, 0.0) * other.coeffs.get(0, 0.0)
        for k, c in self.coeffs.items():
            if k and k in other.coeffs:
                total += 0.5 * c * other.coeffs[k]
        for m, s in self.sine_part.items():
            if m in other.sine_part:
                total += 0.5 * s * other.sine_part[m]
        return total

    def mean(self):
        return self.coeffs.get(0, 0.0)

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape, self.coeffs.get(0, 0.0))
        for k, c in self.coeffs.items():
            if k:
                out += c * np.cos(math.pi * k * x)
        for m, s in self.sine_part.items():
            out += s * np.sin(0.5 * math.pi * m * x)
        return out


def chebyshev_pullback(cheb_coeffs):
    """Pull a Chebyshev combination sum a_k T_k(y) back through y = h(x).

    T_k(h(x)) = cos(k pi/2 - k pi x/2): even k lands on (-1)^(k/2) cos(pi k x/2)
    with integer frequency k/2, odd k on a half-frequency sine.
    """
    series = CosineSeries()
    for k, a in cheb_coeffs.items():
        k = int(k)
        if k < 0:
            raise InputError("Chebyshev index must be >= 0")
        if a == 0:
            continue
        if k == 0:
            series.coeffs[0] = series.coeffs.get(0, 0.0) + a
        elif k % 2 == 0:
            j = k // 2
            sign = -1.0 if j % 2 else 1.0
            series.coeffs[j] = series.coeffs.get(j, 0.0) + sign * a
        else:
            sign = -1.0 if (k - 1) // 2 % 2 else 1.0
            series.sine_part[k] = series.sine_part.get(k, 0.0) + sign * a
    return series


def tent_transfer(f, n):
    """n exact symbolic transfer steps for the tent map.

    Per step: c_0 is fixed; cos(pi 2j x) -> (-1)^j cos(pi j x); odd k goes to
    sin(pi k/2) sin(pi k x/2); the previous sine part vanishes (odd
    functions average to zero over the two branches). Only sign flips and
    copies, so the arithmetic is exact.
    """
    if n < 0:
        raise InputError("steps must be >= 0")
    coeffs = dict(f.coeffs)
    sines = dict(f.sine_part)
    for _ in range(int(n)):
        new_coeffs = {}
        new_sines = {}
        if 0 in coeffs:
            new_coeffs[0] = coeffs[0]
        for k, c in coeffs.items():
            if k == 0:
                continue
            if k % 2 == 0:
                j = k // 2
                new_coeffs[j] = new_coeffs.get(j, 0.0) + (-c if j % 2 else c)
            else:
                # sin(pi k / 2) = (-1)^((k-1)/2) for odd k
                sign = -1.0 if (k - 1) // 2 % 2 else 1.0
                new_sines[k] = new_sines.get(k, 0.0) + sign * c
        coeffs, sines = new_coeffs, new_sines
    return CosineSeries(coeffs, sines)


def uvn_pullback_log(truncation=DEFAULT_TRUNCATION):
    """The centered pullback log|h(x)| + log 2 = -sum_{k>=1} cos(pi k x)/k."""
    k = int(truncation)
    if k < 1:
        raise InputError("truncation must be >= 1")
    return CosineSeries({j: -1.0 / j for j in range(1, k + 1)})


def _trigamma(x):
    return float(special.polygamma(1, x))


def _odd_inverse_square_tail(first):
    """sum of 1/m^2 over odd m >= first (first odd)."""
    return 0.25 * _trigamma(0.5 * first)


def _alternating_tail(j):
    """sum over i > j of (-1)^i / i^2, split into even and odd trigamma tails."""
    even_first = j + 2 if j % 2 == 0 else j + 1
    odd_first = j + 1 if j % 2 == 0 else j + 2
    even_tail = 0.25 * _trigamma(0.5 * even_first)
    return even_tail - _odd_inverse_square_tail(odd_first)


def uvn_decay_norms(n_max, truncation=10**6):
    """||L_T^n (log|h| + log 2)||_2 for n = 0..n_max, with the 2^-n ratio.

    Surviving coefficients at step n sit at source indices k = 2^n j (cosines)
    and k = 2^(n-1) m, m odd (transient sines); their inverse-square sums are
    taken explicitly up to the truncation and completed with exact trigamma
    tails, so the reported values are those of the full infinite series. The
    ratio value / 2^-n equals pi/sqrt(3) for every n >= 1.
    """
    n_max = int(n_max)
    if n_max < 0:
        raise InputError("n_max must be >= 0")
    k = int(truncation)
    if k < 2 ** (n_max + 4):
        raise TruncationTooSmall(
            "need truncation >= 2^(n_max+4) = %d, got %d" % (2 ** (n_max + 4), k)
        )
    rows = []
    for n in range(n_max + 1):
        if n == 0:
            js = np.arange(1, k + 1, dtype=float)
            value_sq = 0.5 * (float(np.sum(1.0 / js[::-1] ** 2)) + _trigamma(k + 1))
        else:
            j_max = k >> n
            js = np.arange(1, j_max + 1, dtype=float)
            cos_sum = float(np.sum(1.0 / js[::-1] ** 2)) + _trigamma(j_max + 1)
            m_max = k >> (n - 1)
            ms = np.arange(1, m_max + 1, 2, dtype=float)
            odd_first = m_max + 1 if m_max % 2 == 0 else m_max + 2
            odd_sum = float(np.sum(1.0 / ms[::-1] ** 2))
            odd_sum += _odd_inverse_square_tail(odd_first)
            value_sq = 0.5 * (0.25**n * cos_sum + 4.0 * 0.25**n * odd_sum)
        value = math.sqrt(value_sq)
        bound = 2.0**-n
        rows.append(analysis.DecayRow(n, value, bound, value / bound))
    report = analysis.DecayReport(rows, "uvn_decay", 2, rows[0].ratio, False)
    positive = sum(1 for row in rows if row.n >= 1 and row.value > 0)
    if positive >= 8:
        report.fit = analysis.fit_rate(report)
    return report


class SqrtModulusResult(NamedTuple):
    curve: object  # spectral.ModulusCurve over the requested radii
    exponent: float  # fitted p in Omega ~ delta^p


def uvn_modulus_sqrt_delta(deltas):
    """L^2 modulus of log|h| on the length-2 circle, with a power-law fit.

    Parseval gives Omega^2(u) = 2 sum sin^2(pi n u / 2)/n^2, which sums in
    closed form to pi^2 u (2 - u) / 4 for u in [0, 2]; a scan over |u| <= delta
    (the expression is increasing there) gives the modulus, of order
    sqrt(delta) as delta -> 0.
    """
    from .spectral import ModulusCurve

    radii = [float(d) for d in deltas]
    if not radii:
        raise InputError("empty delta list")
    if any(not 0.0 < d <= 0.5 for d in radii):
        raise InputError("deltas must lie in (0, 1/2]")
    values = []
    for delta in radii:
        grid = np.linspace(0.0, delta, 1025)[1:]
        omega_sq = math.pi**2 * grid * (2.0 - grid) / 4.0
        values.append(math.sqrt(float(np.max(omega_sq))))
    curve = ModulusCurve(radii, values, 2, 1, {"method": "closed-form scan", "grid": 1024})
    x = np.log(radii)
    y = np.log(values)
    coeffs, *_ = np.linalg.lstsq(
        np.stack([np.ones_like(x), x], axis=1), y, rcond=None
    )
    return SqrtModulusResult(curve, float(coeffs[1]))


def lyapunov_sigma2(truncation=DEFAULT_TRUNCATION, tol=SERIES_TOL):
    """Variance series of the pulled-back Lyapunov observable, term by term.

    Each term pairs L_T^j applied to the truncated series against the series
    itself, plus an exact trigamma completion of the alternating tail, so
    every term matches the infinite series. Terms are -2^-j pi^2/24, the sum
    telescopes to zero: the observable is an L^2 coboundary, and the report
    treats any |sigma^2| below 1e-10 as exactly degenerate.
    """
    k = int(truncation)
    g = uvn_pullback_log(k)
    current = g
    total = 0.0
    j = 0
    while True:
        stored = current.inner(g)
        surviving = k >> j
        if j == 0:
            term = stored + 0.5 * _trigamma(k + 1)
        else:
            term = stored + 0.5 * 2.0**-j * _alternating_tail(surviving)
        total += term if j == 0 else 2.0 * term
        if j > 0 and abs(term) < tol:
            break
        current = tent_transfer(current, 1)
        j += 1
        if j > 256:
            raise InternalError("Lyapunov variance series did not settle")
    if total < -ZERO_VARIANCE_TOL:
        raise InternalError("Lyapunov variance series summed to %g < 0" % total)
    return 0.0 if abs(total) < ZERO_VARIANCE_TOL else total


@dataclass
class LyapunovReport:
    horizon: int
    sample_count: int
    seed: int
    sigma2: float
    samples: np.ndarray  # normalized fluctuations (S_n - n log 2)/sqrt(n)
    mean_log_derivative: float  # average over samples of S_n / n
    ks_stat: float = None

    @property
    def sample_mean(self):
        return float(np.mean(self.samples)) if len(self.samples) else 0.0

    @property
    def sample_var(self):
        return float(np.var(self.samples)) if len(self.samples) else 0.0


def lyapunov_clt(horizon, samples, seed, observable=None, threads=None):
    """Sample (1/sqrt(n)) [log|(U^n)'(y)| - n log 2] from mu-distributed starts.

    Starting points are y = sin(pi x / 2) with x uniform; the orbit iterates
    U in double precision with the same low-bit refresh policy as the toral
    sampler. log|U'(y)| = log(4|y|) is clamped away from the y = 0
    singularity (measure-zero, log-integrable). An explicit observable
    replaces the Lyapunov summand, with no mean subtraction. The limit
    variance of the default observable is zero (coboundary), so the KS
    column is skipped exactly as in the degenerate toral case.
    """
    horizon = int(horizon)
    count = int(samples)
    if horizon < 1 or count < 1:
        raise InputError("horizon and sample count must be >= 1")
    if horizon * count > ORBIT_GUARD:
        raise TooLarge(
            "horizon * samples = %d exceeds %d" % (horizon * count, ORBIT_GUARD)
        )
    if observable is None:
        sigma2 = lyapunov_sigma2()
        step_value = lambda y: np.log(4.0 * np.maximum(np.abs(y), LOG_FLOOR))
        shift = horizon * math.log(2.0)
    else:
        sigma2 = None
        step_value = observable
        shift = 0.0
    scale = 1.0 / math.sqrt(horizon)

    def worker(block, start, stop):
        gen = rng.substream(seed, block)
        m = stop - start
        y = np.sin(0.5 * math.pi * (2.0 * gen.random(m) - 1.0))
        acc = np.zeros(m)
        for step in range(horizon):
            acc += step_value(y)
            y = 1.0 - 2.0 * y * y
            if (step + 1) % REFRESH_PERIOD == 0 and step + 1 < horizon:
                y = np.clip(y + (gen.random(m) - 0.5) * REFRESH_SCALE, -1.0, 1.0)
        return acc

    parts = rng.map_blocks(count, worker, threads)
    sums = np.concatenate(parts) if parts else np.zeros(0)
    fluct = (sums - shift) * scale
    mean_log = float(np.mean(sums)) / horizon if len(sums) else 0.0
    report = LyapunovReport(horizon, count, seed, sigma2, fluct, mean_log)
    if sigma2 is not None and sigma2 > 0:
        from . import stochastic

        report.ks_stat = stochastic.ks_statistic(report)
    return report


def log_abs_mean():
    """Quadrature of the Lyapunov-side mean: integral of log|y| d(arcsine law).

    Computed as the conjugated integral of log|sin(pi x/2)| over [-1,1] with
    dx/2, splitting at the x = 0 singularity; the series identity gives the
    exact value -log 2.
    """
    value, _ = integrate.quad(
        lambda x: math.log(abs(math.sin(0.5 * math.pi * x))), -1.0, 1.0, points=[0.0]
    )
    return 0.5 * value
