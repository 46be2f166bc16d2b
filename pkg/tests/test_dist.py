import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sps
from scipy import stats

from surveydrift import special
from surveydrift.dist import (
    Beta,
    EmpiricalDistribution,
    Normal,
    parse_distribution,
    sample_mean_distribution,
)
from surveydrift.dynamics import init_beliefs


@settings(max_examples=200, deadline=None)
@given(st.floats(0.2, 30), st.floats(0.2, 30), st.floats(0, 1))
def test_betainc_matches_scipy(a, b, x):
    assert special.betainc(a, b, x) == pytest.approx(sps.betainc(a, b, x), abs=1e-13)


def test_norm_cdf_matches_scipy():
    z = np.linspace(-9, 9, 301)
    assert np.allclose(special.norm_cdf(z), stats.norm.cdf(z), rtol=1e-13, atol=1e-300)
    assert float(special.norm_cdf(0.0)) == 0.5


@pytest.mark.parametrize("d, ref", [(Beta(2, 2), stats.beta(2, 2)), (Beta(2, 5), stats.beta(2, 5)),
                                    (Beta(0.5, 0.5), stats.beta(0.5, 0.5)), (Normal(0, 1), stats.norm()),
                                    (Normal(3, 2), stats.norm(3, 2))])
def test_cdf_pdf_quantile_against_scipy(d, ref):
    q = np.linspace(0.001, 0.999, 97)
    assert np.allclose(d.quantile(q), ref.ppf(q), atol=1e-10)
    x = ref.ppf(q)
    assert np.allclose(d.cdf(x), q, atol=1e-12)
    assert np.allclose(d.pdf(x), ref.pdf(x), rtol=1e-10)
    assert d.mean == pytest.approx(ref.mean()) and d.sd == pytest.approx(ref.std())


@pytest.mark.parametrize("d, ref", [(Beta(2, 5), stats.beta(2, 5)), (Normal(0.3, 1.7), stats.norm(0.3, 1.7))])
def test_partial_expectation(d, ref):
    for t in (ref.ppf(0.1), ref.ppf(0.5), ref.ppf(0.93)):
        expected = ref.expect(lambda x: x, ub=t)
        assert d.partial_expectation(t) == pytest.approx(expected, abs=1e-9)


def test_quantile_rejects_out_of_range():
    for d in (Beta(2, 2), Normal()):
        with pytest.raises(ValueError):
            d.quantile(0.0)
        with pytest.raises(ValueError):
            d.quantile(1.2)


def test_invalid_parameters():
    with pytest.raises(ValueError):
        Beta(0, 1)
    with pytest.raises(ValueError):
        Normal(0, 0)


def test_empirical_distribution():
    e = EmpiricalDistribution.from_sample([3.0, 1.0, 2.0, 2.0])
    assert list(e.sorted_values) == [1, 2, 2, 3]
    assert list(e.cdf([0.5, 1, 2, 3])) == [0, 0.25, 0.75, 1]
    assert list(e.quantile([0.25, 0.26, 1.0])) == [1, 2, 3]
    assert e.mean == 2.0 and e.sd == pytest.approx(math.sqrt(0.5))
    with pytest.raises(ValueError):
        EmpiricalDistribution(np.array([np.nan]))


def test_sample_mean_normal_is_exact():
    assert sample_mean_distribution(Normal(1, 2), 4) == Normal(1, 1)


def test_sample_mean_beta_moments():
    law = sample_mean_distribution(Beta(2, 2), 5, m=200_000, seed=1)
    assert law.mean == pytest.approx(0.5, abs=2e-3)
    assert law.sd == pytest.approx(Beta(2, 2).sd / math.sqrt(5), rel=1e-2)
    assert sample_mean_distribution(Beta(2, 2), 5, m=200_000, seed=1) is law


def test_parse_distribution():
    assert parse_distribution("beta(2,5)") == Beta(2, 5)
    assert parse_distribution(" Normal( 0 , 1 ) ") == Normal(0, 1)
    with pytest.raises(ValueError):
        parse_distribution("gamma(1,1)")


def test_init_beliefs_deterministic():
    a = init_beliefs(Beta(2, 2), 3, seed=11)
    assert np.array_equal(a, init_beliefs(Beta(2, 2), 3, seed=11))
    assert np.all((a > 0) & (a < 1))
    with pytest.raises(ValueError):
        init_beliefs(Normal(), 0, seed=1)
