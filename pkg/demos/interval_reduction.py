"""The quadratic interval map, reduced to symbolic cosine arithmetic.

U(y) = 1 - 2y^2 on [-1, 1] is conjugate to the tent map by
h(x) = sin(pi x / 2), which turns its transfer operator into exact
index bookkeeping on cosine coefficients. Everything below is either
closed form or a finite symbolic computation: the L2 decay of
log|h| + log 2, its square-root modulus of continuity, and the exact
mean of log|y| under the invariant arcsine law. The Lyapunov
fluctuations are degenerate (the variance vanishes: the log-derivative
is a coboundary plus the constant log 2), so the empirical CLT run
reports sigma^2 = 0 and skips the KS comparison.
"""

import math

import numpy as np

from toraldecay import interval


def main():
    report = interval.uvn_decay_norms(8, truncation=10**6)
    print("||L^n (log|h| + log 2)||_2 and the exact 2^-n ratio:")
    for row in report.rows:
        print("  n=%-2d value %.12f  value/2^-n = %.12f" % (row.n, row.value, row.ratio))
    print("  pi/sqrt(3) =        %.12f" % (math.pi / math.sqrt(3)))

    result = interval.uvn_modulus_sqrt_delta(np.logspace(-4, -1, 25))
    print("\nL2 modulus of log|h|: fitted exponent %.4f (sqrt-delta law)" % result.exponent)

    print("\nmean of log|y| under the arcsine law: %.12f" % interval.log_abs_mean())
    print("-log 2 =                               %.12f" % -math.log(2))

    rep = interval.lyapunov_clt(1500, 3000, seed=4)
    print(
        "\nLyapunov run: mean log|U'| = %.6f (log 2 = %.6f), sigma^2 = %g, KS = %s"
        % (rep.mean_log_derivative, math.log(2), rep.sigma2, rep.ks_stat)
    )


if __name__ == "__main__":
    main()
