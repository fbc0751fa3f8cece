"""Correlation sequences, decay-bound verification, and rate fitting.

Correlations are computed exactly on the Fourier side; Monte Carlo
estimation exists only as an independent diagnostic cross-check. The
decay bound is made falsifiable by fitting its constant at n=1 and then
demanding it hold, with 5 percent slack, at every later step.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import lattice, rng, spectral
from .errors import DegenerateBound, InputError

LOG_FIT_MIN_N = 10  # log log n is too flat (and near 0) below this


def pairing(g, h):
    """Exact L^2(mu) pairing: integral of g * h = sum ghat(-k) hhat(k)."""
    if g.dim != h.dim:
        raise InputError("dimension mismatch in pairing")
    total = 0j
    for k, c in h.coeffs.items():
        neg = tuple(-v for v in k)
        total += g.coeffs.get(neg, 0j) * c
    return total


def correlation(f, g, matrix, n, mc_samples=None, seed=0, threads=None):
    """rho_{f,g}(n) = integral of f * (g o A^n) minus the mean product.

    Exact Fourier-side evaluation: sum over k != 0 of ghat(-k) fhat(A*^n k).
    Passing mc_samples switches to the Monte Carlo cross-check estimator,
    which is sampling-noisy and intended only for validating the exact path.
    """
    if f.dim != matrix.dim or g.dim != matrix.dim:
        raise InputError("function and matrix dimensions differ")
    if n < 0:
        raise InputError("steps must be >= 0")
    if mc_samples is not None:
        return _correlation_mc(f, g, matrix, n, int(mc_samples), seed, threads)
    star_n = lattice.mat_pow(matrix.star(), n)
    zero = (0,) * matrix.dim
    total = 0j
    for m, gm in g.coeffs.items():
        if m == zero:
            continue
        freq = lattice.mat_vec(star_n, tuple(-v for v in m))
        fk = f.coeffs.get(freq)
        if fk is not None:
            total += gm * fk
    return total


def _correlation_mc(f, g, matrix, n, samples, seed, threads):
    a_n = np.array(lattice.mat_pow(matrix.entries, n), dtype=float)

    def worker(block, start, stop):
        x = rng.substream(seed, block).random((stop - start, matrix.dim))
        y = (x @ a_n.T) % 1.0
        return complex(np.sum(f.evaluate(x) * g.evaluate(y)))

    parts = rng.map_blocks(samples, worker, threads)
    total = 0j
    for p in parts:  # fixed block order keeps the float reduction reproducible
        total += p
    return total / samples - f.mean() * g.mean()


@dataclass
class DecayRow:
    n: int
    value: float
    bound: float
    ratio: float


@dataclass
class FitResult:
    model: str  # "power", "log", "exponential", or "all-zero"
    param: float  # exponent p, or base theta for the exponential model
    amplitude: float
    residual: float
    candidates: dict = field(default_factory=dict)


@dataclass
class DecayReport:
    rows: list
    mode: str
    r: object
    c_fitted: float
    centered: bool
    fit: FitResult = None

    @property
    def fitted_model(self):
        return self.fit.model if self.fit else None

    @property
    def fitted_params(self):
        if not self.fit:
            return None
        return (self.fit.param, self.fit.amplitude, self.fit.residual)

    def values(self):
        return [row.value for row in self.rows]

    def check_bound(self, slack=0.05):
        """Every ratio stays within (1 + slack) of the n=1 constant."""
        for row in self.rows:
            if row.ratio > self.c_fitted * (1.0 + slack) + 1e-300:
                return False
        return True


def decay_report(f, g, matrix, n_max, mode="correlation", r=2, fit=True):
    """Per-step decay values against the modulus bound.

    mode="correlation": value = |rho_{f,g}(n)|, bound = ||g||_2 *
    Omega_{f,2}(lambda^-n). mode="transfer_norm": value = ||L^n f||_r,
    bound = Omega_{f,r}(lambda^-n). f is centered automatically; the
    constant C is the n=1 ratio, so later rows make the bound
    falsifiable rather than tautological.
    """
    if n_max < 1:
        raise InputError("n_max must be >= 1")
    if mode not in ("correlation", "transfer_norm"):
        raise InputError("mode must be correlation or transfer_norm")
    centered = abs(f.mean()) > 0
    fc = f.centered() if centered else f
    lam = matrix.lambda_min
    g_norm = spectral.norm(g, 2) if mode == "correlation" else 1.0
    rows = []
    for n in range(1, int(n_max) + 1):
        delta = lam ** (-n)
        omega = spectral.modulus_value(fc, 2 if mode == "correlation" else r, delta,
                                       saturate=True)
        if mode == "correlation":
            value = abs(correlation(fc, g, matrix, n))
            bound = g_norm * omega
        else:
            value = spectral.norm(spectral.transfer_fourier(fc, matrix, n), r)
            bound = omega
        if bound <= 0.0 and value > 1e-12:
            raise DegenerateBound(
                "modulus bound is 0 at n=%d while the value is %g" % (n, value)
            )
        ratio = value / bound if bound > 0 else 0.0
        rows.append(DecayRow(n, value, bound, ratio))
    report = DecayReport(rows, mode, r, rows[0].ratio if rows else 0.0, centered)
    if fit:
        nonzero = sum(1 for row in rows if row.value > 0)
        if nonzero == 0:
            report.fit = FitResult("all-zero", float("nan"), 0.0, 0.0)
        elif nonzero >= 8:
            report.fit = fit_rate(report)
    return report


def _linear_fit(x, y):
    """Least squares y = a + b x; returns (a, b, rms residual)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    coeffs, *_ = np.linalg.lstsq(np.stack([np.ones_like(x), x], axis=1), y, rcond=None)
    resid = y - (coeffs[0] + coeffs[1] * x)
    return coeffs[0], coeffs[1], float(np.sqrt(np.mean(resid**2)))


def fit_rate(report_or_rows):
    """Fit power n^-p, log (log n)^-p, and exponential theta^n models.

    Least squares on transformed coordinates; the model with the
    smallest log-space residual wins. The log model only sees rows with
    n >= 10. All-zero inputs are reported, not fitted.
    """
    if isinstance(report_or_rows, DecayReport):
        rows = [(row.n, row.value) for row in report_or_rows.rows]
    else:
        rows = [(int(n), float(v)) for n, v in report_or_rows]
    if not rows:
        raise InputError("empty report")
    nonzero = [(n, v) for n, v in rows if v > 0 and n >= 1]
    if not nonzero:
        return FitResult("all-zero", float("nan"), 0.0, 0.0)
    if len(nonzero) < 8:
        raise InputError("rate fitting needs at least 8 nonzero rows")
    ns = np.array([n for n, _ in nonzero], dtype=float)
    logv = np.log([v for _, v in nonzero])
    candidates = {}
    a, b, res = _linear_fit(np.log(ns), logv)
    candidates["power"] = (-b, math.exp(a), res)
    a, b, res = _linear_fit(ns, logv)
    candidates["exponential"] = (math.exp(b), math.exp(a), res)
    mask = ns >= LOG_FIT_MIN_N
    if int(mask.sum()) >= 8:
        a, b, res = _linear_fit(np.log(np.log(ns[mask])), logv[mask])
        candidates["log"] = (-b, math.exp(a), res)
    best = min(candidates, key=lambda name: candidates[name][2])
    p, amp, res = candidates[best]
    return FitResult(best, p, amp, res, candidates)
