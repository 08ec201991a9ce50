"""Monte Carlo acceptance bands for sample-moment estimators.

For each catalog shape, draws ``REPS`` independent samples of N = 1e6 and
records the sample mean / sd / skewness / kurtosis of each.  The printed
band per estimator is [min - range, max + range] over the reps (range =
max - min): a fixed-seed sample in the test must land inside.

Quantile bands rather than mean +/- k*SD because the heavy log-normal
shapes make these estimators wildly non-Gaussian at this N; their sample
skewness sits far below the theoretical value in almost every sample, so
a band centered on theory would be a broken test, not a strict one.

Kurtosis bands for the two heaviest log-normals are printed but unused:
the test skips a fourth sample moment of those tails entirely.

Run:  python3 tests/oracles/sampling_se_oracle.py   (a few minutes)
"""

import numpy as np

N = 1_000_000
REPS = 200
SEED = 424283


def sample_moments(v):
    mu = v.mean()
    c = v - mu
    m2 = np.mean(c * c)
    m3 = np.mean(c**3)
    m4 = np.mean(c**4)
    sd = np.sqrt(m2)
    return mu, sd, m3 / sd**3, m4 / (m2 * m2)


DRAWERS = {
    "normal": lambda g, size: g.standard_normal(size),
    "uniform": lambda g, size: g.random(size),
    "laplace": lambda g, size: g.laplace(0.0, 1.0, size),
    "beta_0.1_0.1": lambda g, size: g.beta(0.1, 0.1, size),
    "beta_5_2": lambda g, size: g.beta(5.0, 2.0, size),
    "beta_5_1": lambda g, size: g.beta(5.0, 1.0, size),
    "beta_5_0.5": lambda g, size: g.beta(5.0, 0.5, size),
    "lognormal_0.5": lambda g, size: g.lognormal(0.0, 0.5, size),
    "lognormal_1": lambda g, size: g.lognormal(0.0, 1.0, size),
    "lognormal_1.5": lambda g, size: g.lognormal(0.0, 1.5, size),
    "lognormal_2": lambda g, size: g.lognormal(0.0, 2.0, size),
}


def main():
    rng = np.random.Generator(np.random.PCG64(SEED))
    print(f"# N={N} reps={REPS} seed={SEED}")
    print("# label: ((mean_lo, mean_hi), (sd_lo, sd_hi), (skew_lo, skew_hi), (kurt_lo, kurt_hi))")
    for label, drawer in DRAWERS.items():
        stats = np.array([sample_moments(drawer(rng, N)) for _ in range(REPS)])
        lo = stats.min(axis=0)
        hi = stats.max(axis=0)
        pad = hi - lo
        bands = ", ".join(
            f"({a:.6g}, {b:.6g})" for a, b in zip(lo - pad, hi + pad)
        )
        print(f'    "{label}": ({bands}),')


if __name__ == "__main__":
    main()
