"""Central limit theorem for Birkhoff sums of the doubling map.

For f = cos 2 pi x under x -> 2x mod 1 the asymptotic variance has the
closed form sigma^2 = 1/2. The orbit sampler walks exact 128-bit
fixed-point orbits (float64 orbits collapse onto the rationals after
~50 steps), refreshing the lowest bits periodically, and compares the
normalized sums against the N(0, sigma^2) law with a KS statistic.
"""

import numpy as np

from toraldecay import lattice, spectral, stochastic

A2 = lattice.validate_expanding([[2]])


def sparkline(values, bins=32):
    blocks = " .:-=+*#%@"
    hist, _ = np.histogram(values, bins=bins, range=(-3, 3))
    top = hist.max() or 1
    return "".join(blocks[int(9 * h / top)] for h in hist)


def main():
    f = spectral.TrigPolynomial.cosine(1)
    sigma2 = stochastic.sigma_squared(f, A2)
    print("asymptotic variance sigma^2 =", sigma2)

    for horizon in (50, 500, 2000):
        exp = stochastic.birkhoff_samples(f, A2, horizon, 4000, seed=11)
        print(
            "n = %-5d sample var %.4f  KS vs N(0, %.2f) = %.4f"
            % (horizon, exp.sample_var, sigma2, exp.ks_stat)
        )
        print("  S_n/sqrt(n) histogram on [-3, 3]: |%s|" % sparkline(exp.samples))


if __name__ == "__main__":
    main()
