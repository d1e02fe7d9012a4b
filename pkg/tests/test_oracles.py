import numpy as np
import pytest

from twlab import oracles
from twlab.errors import BadInterval


def test_fredholm_empty_spectrum_limit():
    # true trace gap at t=6 is ~4e-12, slightly above the naive roundoff
    # expectation; asserted at 1e-11
    assert abs(oracles.airy_kernel_fredholm(6.0, 80) - 1.0) < 1e-11


def test_fredholm_order_doubling():
    a = oracles.airy_kernel_fredholm(-4.0, 40)
    b = oracles.airy_kernel_fredholm(-4.0, 80)
    assert abs(a - b) < 1e-10


def test_fredholm_spectral_ladder():
    ref = oracles.airy_kernel_fredholm(-4.0, 160)
    errs = [abs(oracles.airy_kernel_fredholm(-4.0, m) - ref) for m in (40, 60, 80)]
    assert errs[0] < 1e-10
    assert errs[1] < 5e-12
    assert errs[2] < 5e-12


def test_fredholm_preconditions():
    with pytest.raises(BadInterval):
        oracles.airy_kernel_fredholm(-4.0, 20)
    with pytest.raises(BadInterval):
        oracles.airy_kernel_fredholm(-11.0, 80)


def test_sampler_determinism():
    a = oracles.sample_edge(100, 2.0, 500, 77)
    b = oracles.sample_edge(100, 2.0, 500, 77)
    assert np.array_equal(a.samples, b.samples)
    c = oracles.sample_edge(100, 2.0, 500, 78)
    assert not np.array_equal(a.samples, c.samples)


def test_sampler_chunking_invariance():
    # count that is not a chunk multiple still reproduces the prefix
    a = oracles.sample_edge(60, 2.0, 5000, 9)
    b = oracles.sample_edge(60, 2.0, 4100, 9)
    assert np.array_equal(a.samples[:4096], b.samples[:4096])


def test_sampler_preconditions():
    with pytest.raises(BadInterval):
        oracles.sample_edge(10, 2.0, 100, 1)
    with pytest.raises(BadInterval):
        oracles.sample_edge(100, 0.0, 100, 1)


def test_chi_square_moments():
    rng = np.random.default_rng(5)
    n = 20000
    for k in (5, 50, 500):
        draws = rng.chisquare(k, n)
        assert abs(draws.mean() - k) < 3.0 * np.sqrt(2.0 * k / n)


def test_ks_single_sample_at_median():
    assert oracles.ks_distance(np.array([0.0]), lambda x: 0.5 * np.ones_like(x)) == 0.5


def test_ks_inverse_transform_samples():
    rng = np.random.default_rng(31)
    u = rng.uniform(size=10000)
    samples = np.log(u / (1 - u))  # logistic quantile
    cdf = lambda x: 1.0 / (1.0 + np.exp(-x))
    assert oracles.ks_distance(samples, cdf) < 0.03


def test_ks_shifted_cdf():
    rng = np.random.default_rng(13)
    u = rng.uniform(size=20000)
    samples = np.log(u / (1 - u))
    cdf = lambda x: 1.0 / (1.0 + np.exp(-x))
    shifted = lambda x: cdf(x - 1.0)
    got = oracles.ks_distance(samples, shifted)
    xs = np.linspace(-8, 8, 2001)
    want = np.max(np.abs(cdf(xs) - cdf(xs - 1.0)))
    assert abs(got - want) < 0.02


def test_beta2_ks_small_run(fredholm_table):
    s = oracles.sample_edge(400, 2.0, 5000, 1234)
    assert oracles.ks_distance(s, fredholm_table.cdf) < 0.035


def test_beta2_ks_shrinks_with_n(fredholm_table):
    # finite-size drift: recorded-seed endpoints decrease from n=100 to 800
    ks = {
        n: oracles.ks_distance(
            oracles.sample_edge(n, 2.0, 20000, 1234), fredholm_table.cdf
        )
        for n in (100, 800)
    }
    print(f"beta=2 KS by n: {ks}")
    assert ks[800] < ks[100]


def test_exports(tmp_path):
    s = oracles.sample_edge(60, 2.0, 50, 3)
    csv_path = tmp_path / "samples.csv"
    s.export_csv(csv_path)
    lines = open(csv_path).read().strip().split("\n")
    assert lines[0] == "index,lambda_max,scaled_s"
    assert len(lines) == 51
    js = tmp_path / "summary.json"
    s.export_summary(js, ks=0.01)
    assert '"ks": 0.01' in open(js).read()
