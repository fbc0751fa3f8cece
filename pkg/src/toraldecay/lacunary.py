"""Lacunary exponential series with exactly computable transfer-norm decay.

The series is sum over k >= 1 of a_k * e(2 pi i <A*^k h, x>). Because the
adjoint orbit A*^k h never revisits a frequency, every transfer step just
drops the leading term, so L^p decay reduces to coefficient tails. The three
coefficient families (power, logpower, geometric) realize polynomial,
logarithmic, and exponential rates; the designer inverts the telescoping to
hit an arbitrary prescribed decreasing rate.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate, special

from . import lattice
from .errors import InputError, InternalError, NotDecreasing, NotSimilarity
from .spectral import TrigPolynomial

FAMILIES = ("power", "logpower", "geometric", "explicit")
TRUNCATION_CAP = 10**5
TAIL_FRACTION = 1e-10
# switch point between explicit summation and the analytic tail correction
SUM_SPLIT = 10**6


@dataclass
class LacunarySpec:
    """Base frequency h, adjoint matrix orbit, and coefficient family.

    param is the family parameter: alpha for power (alpha > 1), beta for
    logpower (beta > 1), theta for geometric (1/lambda < theta < 1), or the
    coefficient list itself for explicit. truncation=None means the ideal
    infinite series; tails are then true infinite tails.
    """

    h: tuple
    matrix: object
    family: str
    param: object
    truncation: int = None

    def __post_init__(self):
        self.h = tuple(int(v) for v in self.h)
        if len(self.h) != self.matrix.dim:
            raise InputError("base frequency dimension does not match matrix")
        if not any(self.h):
            raise InputError("base frequency must be nonzero")
        if self.family not in FAMILIES:
            raise InputError("unknown coefficient family %r" % (self.family,))
        if self.family == "explicit":
            coeffs = [float(a) for a in self.param]
            if any(a < 0 for a in coeffs):
                raise InputError("explicit coefficients must be nonnegative")
            self.param = coeffs
            self.truncation = len(coeffs)
        else:
            p = float(self.param)
            self.param = p
            if self.family == "power" and p <= 1:
                raise InputError("power family needs alpha > 1")
            if self.family == "logpower" and p <= 1:
                raise InputError("logpower family needs beta > 1")
            if self.family == "geometric":
                lo = 1.0 / self.matrix.lambda_min
                if not lo < p < 1:
                    raise InputError(
                        "geometric family needs 1/lambda < theta < 1, got %g"
                        " with 1/lambda = %g" % (p, lo)
                    )
        if self.truncation is not None:
            self.truncation = int(self.truncation)
            if self.truncation < 0:
                raise InputError("truncation must be >= 0")


def coefficients(spec, kmax):
    """a_1..a_kmax as an array, zero beyond the truncation if one is set."""
    ks = np.arange(1, kmax + 1, dtype=float)
    if spec.family == "power":
        a = ks ** (-spec.param)
    elif spec.family == "logpower":
        a = 1.0 / (ks * np.log(ks + 1.0) ** spec.param)
    elif spec.family == "geometric":
        a = spec.param**ks
    else:
        a = np.zeros(kmax)
        m = min(kmax, len(spec.param))
        a[:m] = spec.param[:m]
    if spec.truncation is not None and spec.truncation < kmax:
        a[spec.truncation :] = 0.0
    return a


def default_truncation(spec):
    """Smallest K whose l1 tail drops below 1e-10 of the full sum, capped."""
    if spec.family == "explicit":
        return len(spec.param)
    ideal = LacunarySpec(spec.h, spec.matrix, spec.family, spec.param)
    full = tail_norms(ideal, 0).l1
    target = TAIL_FRACTION * full
    if tail_norms(ideal, TRUNCATION_CAP).l1 >= target:
        return TRUNCATION_CAP
    lo, hi = 1, TRUNCATION_CAP  # tail(hi) < target <= tail(lo-1)
    while lo < hi:
        mid = (lo + hi) // 2
        if tail_norms(ideal, mid).l1 < target:
            hi = mid
        else:
            lo = mid + 1
    return lo


def lacunary_build(spec):
    """Truncated series as a TrigPolynomial with exact integer frequencies."""
    k = spec.truncation if spec.truncation is not None else default_truncation(spec)
    a = coefficients(spec, k) if k else np.array([])
    star = spec.matrix.star()
    freq = spec.h
    coeffs = {}
    for i in range(k):
        freq = lattice.mat_vec(star, freq)
        if a[i] == 0.0:
            continue
        if freq in coeffs:
            raise InternalError("adjoint orbit revisited frequency %r" % (freq,))
        coeffs[freq] = complex(a[i])
    return TrigPolynomial(spec.matrix.dim, coeffs)


class TailNorms(NamedTuple):
    l2: float
    l1: float


def tail_norms(spec, n):
    """(sqrt(sum_{k>n} a_k^2), sum_{k>n} a_k), honoring the truncation.

    truncation=None gives the infinite-series tails: closed form for the
    geometric family, Hurwitz zeta for the power family, and explicit
    summation with an Euler-Maclaurin correction for the logpower family.
    """
    if n < 0:
        raise InputError("tail index must be >= 0")
    n = int(n)
    if spec.truncation is not None:
        k = spec.truncation
        if n >= k:
            return TailNorms(0.0, 0.0)
        a = coefficients(spec, k)[n:]
        # ascending summation: smallest terms first
        return TailNorms(math.sqrt(np.sum(a[::-1] ** 2)), float(np.sum(a[::-1])))
    if spec.family == "geometric":
        t = spec.param
        return TailNorms(t ** (n + 1) / math.sqrt(1 - t * t), t ** (n + 1) / (1 - t))
    if spec.family == "power":
        alpha = spec.param
        return TailNorms(
            math.sqrt(float(special.zeta(2 * alpha, n + 1))),
            float(special.zeta(alpha, n + 1)),
        )
    beta = spec.param
    return TailNorms(
        math.sqrt(_logpower_tail(2.0, 2.0 * beta, n)),
        _logpower_tail(1.0, beta, n),
    )


def _logpower_tail(p, b, n):
    """sum_{k>n} 1/(k^p log^b(k+1)) for p in {1,2}.

    Terms up to SUM_SPLIT are summed directly (ascending); the remainder is
    Euler-Maclaurin: integral + g(M)/2 - g'(M)/12, whose next correction is
    O(g'''(M)) and far below 1e-14 of the total at M = 1e6.
    """
    m = SUM_SPLIT if n < SUM_SPLIT else 2 * (n + 1)
    ks = np.arange(n + 1, m, dtype=float)
    head = float(np.sum(1.0 / (ks[::-1] ** p * np.log(ks[::-1] + 1.0) ** b)))

    def g(t):
        return 1.0 / (t**p * math.log(t + 1.0) ** b)

    def dg(t):
        log1 = math.log(t + 1.0)
        return -g(t) * (p / t + b / ((t + 1.0) * log1))

    if p == 1:
        # t = e^w turns the integrand into (w + log(1+e^-w))^-b
        w0 = math.log(m)
        integral, _ = integrate.quad(
            lambda w: (w + math.log1p(math.exp(-w))) ** (-b), w0, math.inf
        )
    else:
        # u = 1/t; integrand log(1/u + 1)^-b is smooth and bounded near 0
        integral, _ = integrate.quad(
            lambda u: math.log(1.0 / u + 1.0) ** (-b), 0.0, 1.0 / m
        )
    return head + integral + g(m) / 2.0 - dg(m) / 12.0


class Prop2Bounds(NamedTuple):
    sup_bound: float
    l2_bound: float
    constant: float  # the head-bracket factor 2 pi |h|_2


def modulus_bounds_prop2(spec, n):
    """Two-bracket modulus bounds at delta = lambda^-n for similarity matrices.

    Head terms k <= n contribute a_k * min(2, 2 pi |h| lambda^(k-n)) to the
    sup bound (squared entries with ceiling 4 on the L2 side, exact by
    Parseval); the tail bracket carries the factor 2 from |e(phi) - 1| <= 2,
    so n = 0 reduces to twice the pure l1 tail.
    """
    if n < 0:
        raise InputError("steps must be >= 0")
    c = spec.matrix.similarity_factor()
    if c is None:
        raise NotSimilarity(
            "modulus bounds require A^T A proportional to the identity"
        )
    lam = math.sqrt(c)
    h_norm = math.sqrt(sum(v * v for v in spec.h))
    const = 2.0 * math.pi * h_norm
    n = int(n)
    a = coefficients(spec, n) if n else np.array([])
    phase = const * lam ** (np.arange(1, n + 1) - n)
    l2_tail, l1_tail = tail_norms(spec, n)
    sup = float(np.sum(np.minimum(2.0, phase) * a)) + 2.0 * l1_tail
    l2_sq = float(np.sum(np.minimum(4.0, phase**2) * a**2)) + 4.0 * l2_tail**2
    return Prop2Bounds(sup, math.sqrt(l2_sq), const)


def design_for_rate(targets, norm="sup"):
    """Coefficients whose tails reproduce the target sequence exactly.

    sup mode: a_n = delta_{n-1} - delta_n with delta_0 = 1; l2 mode:
    a_n = sqrt(delta_{n-1}^2 - delta_n^2). A closing coefficient
    a_{N+1} = delta_N makes the telescoping exact at every n <= N.
    """
    if norm not in ("sup", "l2"):
        raise InputError("norm must be sup or l2")
    deltas = [float(t) for t in targets]
    if not deltas:
        raise InputError("empty target sequence")
    if deltas[0] >= 1.0:
        raise NotDecreasing("targets must start below delta_0 = 1")
    prev = 1.0
    coeffs = []
    for d in deltas:
        if not 0.0 < d <= prev:
            raise NotDecreasing("targets must stay in (0, 1) and never increase")
        if norm == "sup":
            coeffs.append(prev - d)
        else:
            coeffs.append(math.sqrt(prev * prev - d * d))
        prev = d
    coeffs.append(prev)
    return coeffs
