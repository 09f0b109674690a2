import itertools
import json
from math import pi, sqrt

import numpy as np
import pytest

from _helpers import fd_mean_square, random_pce
from pcedgsm.errors import UndefinedIndicesError
from pcedgsm.inputmodel import Gamma, Gaussian, InputModel, Uniform
from pcedgsm.pce import PCEModel, TruncationSet, total_degree_set
from pcedgsm.sensitivity import (
    derivative_expansion,
    dgsm,
    hermite_dgsm,
    nu,
    pce_mean,
    pce_variance,
    sensitivity_report,
    sobol_first,
    sobol_group,
    sobol_total,
)


def one_dim(marginal, coefs):
    return PCEModel(InputModel((marginal,)), total_degree_set(1, len(coefs) - 1), coefs)


def two_dim_example():
    basis = TruncationSet(2, 2, np.array([[0, 0], [1, 0], [0, 1], [1, 1]]))
    return PCEModel(InputModel.iid(Gaussian(), 2), basis, [0.0, 1.0, 2.0, 2.0])


def test_moments():
    p = one_dim(Gaussian(), [3.0])
    assert pce_mean(p) == 3.0 and pce_variance(p) == 0.0
    q = one_dim(Gaussian(), [0.5, 2.0, 1.0])
    assert pce_mean(q) == 0.5 and pce_variance(q) == 5.0


def test_variance_matches_monte_carlo():
    rng = np.random.default_rng(0)
    pce = random_pce(rng, max_dim=3, max_degree=3)
    from _helpers import sample_physical

    y = pce(sample_physical(pce.input, 100_000, rng))
    se = y.var() * np.sqrt(2 / len(y)) + np.sqrt(np.mean((y - y.mean()) ** 4) / len(y))
    assert abs(y.var() - pce_variance(pce)) < 3 * se


def test_sobol_example():
    p = two_dim_example()
    assert sobol_group(p, [0]) == pytest.approx(1 / 9, abs=1e-15)
    assert sobol_group(p, [1]) == pytest.approx(4 / 9, abs=1e-15)
    assert sobol_group(p, [0, 1]) == pytest.approx(4 / 9, abs=1e-15)
    assert sobol_first(p, 0) == pytest.approx(1 / 9, abs=1e-15)
    assert sobol_total(p, 0) == pytest.approx(5 / 9, abs=1e-15)
    assert sobol_total(p, 1) == pytest.approx(8 / 9, abs=1e-15)


def test_sobol_edge_groups():
    basis = total_degree_set(3, 2)
    coef = np.zeros(len(basis))
    coef[basis.position((1, 1, 0))] = 2.0
    p = PCEModel(InputModel.iid(Uniform(), 3), basis, coef)
    assert sobol_group(p, [0, 1]) == 1.0
    assert sobol_group(p, [2]) == 0.0
    assert sobol_group(p, [0]) == 0.0
    with pytest.raises(ValueError):
        sobol_group(p, [])
    with pytest.raises(IndexError):
        sobol_total(p, 3)


def test_constant_model_raises():
    p = one_dim(Gaussian(), [2.0, 0.0])
    with pytest.raises(UndefinedIndicesError):
        sobol_first(p, 0)
    with pytest.raises(UndefinedIndicesError):
        dgsm(p, 0)
    assert nu(p, 0) == 0.0


def test_additive_model_first_equals_total():
    basis = total_degree_set(3, 3)
    coef = np.array([1.0 if np.count_nonzero(a) <= 1 else 0.0 for a in basis.indices])
    p = PCEModel(InputModel.iid(Gaussian(), 3), basis, coef)
    for i in range(3):
        assert sobol_first(p, i) == pytest.approx(sobol_total(p, i), abs=1e-15)
    assert sum(sobol_first(p, i) for i in range(3)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_partition_of_variance(seed):
    p = random_pce(np.random.default_rng(seed), max_dim=5, max_degree=4)
    groups = itertools.chain.from_iterable(
        itertools.combinations(range(p.dim), k) for k in range(1, p.dim + 1)
    )
    assert sum(sobol_group(p, u) for u in groups) == pytest.approx(1.0, abs=1e-12)
    assert sum(sobol_first(p, i) for i in range(p.dim)) <= 1 + 1e-12


def test_derivative_expansion_examples():
    assert derivative_expansion(one_dim(Gaussian(), [0, 0, 1]), 0).as_dict() == pytest.approx(
        {(1,): sqrt(2)}
    )
    assert derivative_expansion(one_dim(Uniform(-1, 1), [0, 0, 1]), 0).as_dict() == pytest.approx(
        {(1,): sqrt(15)}
    )
    assert derivative_expansion(one_dim(Uniform(-1, 1), [0, 0, 0, 1]), 0).as_dict() == pytest.approx(
        {(0,): sqrt(7), (2,): sqrt(35)}
    )
    assert len(derivative_expansion(one_dim(Uniform(), [1.0]), 0)) == 0


def test_derivative_expansion_merges_duplicates():
    # Legendre a_(1) and a_(3) both feed beta = (0)
    d = derivative_expansion(one_dim(Uniform(-1, 1), [0, 1, 0, 1]), 0).as_dict()
    assert d[(0,)] == pytest.approx(sqrt(3) + sqrt(7))
    assert len(d) == 2


def test_derivative_expansion_mixed_dims():
    model = InputModel((Gaussian(), Uniform(-1, 1)))
    basis = total_degree_set(2, 3)
    coef = np.zeros(len(basis))
    coef[basis.position((1, 2))] = 1.0
    assert derivative_expansion(PCEModel(model, basis, coef), 0).as_dict() == pytest.approx({(0, 2): 1.0})
    assert derivative_expansion(PCEModel(model, basis, coef), 1).as_dict() == pytest.approx(
        {(1, 1): sqrt(15)}
    )


def test_nu_and_dgsm_examples():
    g = one_dim(Gaussian(), [0, 2, 1])
    assert nu(g, 0) == pytest.approx(6.0, rel=1e-14)
    assert dgsm(g, 0) == pytest.approx(1.2, rel=1e-14)
    assert sobol_total(g, 0) == 1.0
    u = one_dim(Uniform(-1, 1), [0, 0, 1])
    assert nu(u, 0) == pytest.approx(15.0, rel=1e-14)
    assert dgsm(u, 0) == pytest.approx(4 * 15 / pi**2, rel=1e-14)
    assert dgsm(u, 0) == pytest.approx(6.07927, abs=5e-6)
    for c in (0.1, -3.0, 7e5):
        assert dgsm(one_dim(Gaussian(4, 2), [1.0, c]), 0) == pytest.approx(1.0, rel=1e-14)


def test_nu_uses_original_units():
    # x = 3 + 2 z, M = z = (x - 3)/2 -> dM/dx = 1/2
    assert nu(one_dim(Gaussian(3, 2), [0, 1]), 0) == pytest.approx(0.25)
    # Uniform[0, 4]: z = (x - 2)/2, M = sqrt(3) z -> (sqrt(3)/2)^2
    assert nu(one_dim(Uniform(0, 4), [0, 1]), 0) == pytest.approx(0.75)
    # Gamma rate 2: z = 2x, Laguerre alpha=1 psi_1 = 1 - z -> dM/dx = -2
    assert nu(one_dim(Gamma(1, 2), [0, 1]), 0) == pytest.approx(4.0)


@pytest.mark.parametrize("seed", range(20))
def test_hermite_two_routes(seed):
    p = random_pce(np.random.default_rng(100 + seed), kinds=("hermite",))
    for i in range(p.dim):
        closed = hermite_dgsm(p, i)
        assert dgsm(p, i) == pytest.approx(closed, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_scale_invariance(seed):
    p = random_pce(np.random.default_rng(200 + seed))
    q = PCEModel(p.input, p.basis, -37.5 * p.coefficients)
    for i in range(p.dim):
        for f in (sobol_first, sobol_total, dgsm):
            assert f(q, i) == pytest.approx(f(p, i), rel=1e-12, abs=1e-12)


def test_bound_property_random_models():
    rng = np.random.default_rng(300)
    for _ in range(100):
        p = random_pce(rng)
        for i in range(p.dim):
            s_first, s_total = sobol_first(p, i), sobol_total(p, i)
            assert 0 <= s_first <= s_total + 1e-15
            assert s_total <= dgsm(p, i) + 1e-12


@pytest.mark.parametrize("kind", ["hermite", "legendre", "laguerre"])
def test_nu_matches_finite_differences(kind):
    rng = np.random.default_rng({"hermite": 1, "legendre": 2, "laguerre": 3}[kind])
    for _ in range(3):
        p = random_pce(rng, kinds=(kind,), max_dim=3, max_degree=4)
        for i in range(p.dim):
            est, se = fd_mean_square(p, i, 20_000, rng)
            assert abs(est - nu(p, i)) <= 3 * se + 1e-6 * nu(p, i)


def test_report_formats():
    rep = sensitivity_report(two_dim_example(), names=["a", "b"])
    assert rep.variance == 9.0
    doc = json.loads(rep.to_json())
    assert [v["name"] for v in doc["variables"]] == ["a", "b"]
    assert set(doc["variables"][0]) == {"name", "S_first", "S_total", "nu", "S_dgsm"}
    lines = rep.to_csv().splitlines()
    assert lines[0] == "variable,S_first,S_total,nu,S_dgsm"
    assert lines[1].startswith("a,")
    assert float(lines[1].split(",")[2]) == pytest.approx(5 / 9, abs=1e-15)
    with pytest.raises(ValueError):
        sensitivity_report(two_dim_example(), names=["a"])
