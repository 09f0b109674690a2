import json
from math import comb, sqrt

import numpy as np
import pytest

from pcedgsm.errors import CapacityError, DomainError, IllConditionedError, UnderdeterminedError
from pcedgsm.inputmodel import Design, Gamma, Gaussian, InputModel, Uniform, sample
from pcedgsm.pce import (
    PCEModel,
    TruncationSet,
    eval_basis,
    eval_model,
    fit_lar,
    fit_least_squares,
    lar_order,
    total_degree_set,
)
from pcedgsm.polyfamilies import PolynomialFamily


def test_total_degree_small():
    assert total_degree_set(1, 3).indices.tolist() == [[0], [1], [2], [3]]
    assert total_degree_set(2, 2).indices.tolist() == [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]]


@pytest.mark.parametrize("dim, degree", [(20, 2), (3, 5), (5, 4), (15, 3)])
def test_total_degree_cardinality(dim, degree):
    basis = total_degree_set(dim, degree)
    assert len(basis) == comb(dim + degree, degree)
    assert len({tuple(r) for r in basis.indices.tolist()}) == len(basis)
    assert basis.indices.sum(axis=1).max() == degree
    assert np.all(np.diff(basis.indices.sum(axis=1)) >= 0)


def test_total_degree_capacity():
    with pytest.raises(CapacityError):
        total_degree_set(100, 6)


def test_truncation_set_validation():
    with pytest.raises(ValueError):
        TruncationSet(2, 1, np.array([[1, 0]]))
    with pytest.raises(ValueError):
        TruncationSet(2, 1, np.array([[0, 0], [1, 0], [1, 0]]))
    with pytest.raises(ValueError):
        TruncationSet(2, 1, np.array([[0, 0], [2, 0]]))
    basis = total_degree_set(3, 2)
    assert basis.position((1, 1, 0)) == 5
    assert basis.zero_position == 0
    assert (0, 0, 2) in basis


def test_eval_basis_examples():
    leg = (PolynomialFamily.legendre(),) * 2
    her = (PolynomialFamily.hermite(),) * 2
    basis = total_degree_set(2, 2)
    v = eval_basis(basis, leg, [0.5, 0.5])
    assert v[0] == 1.0
    assert v[basis.position((1, 1))] == pytest.approx(0.75, rel=1e-15)
    w = eval_basis(basis, her, [0.0, 1.7])
    assert w[basis.position((2, 0))] == pytest.approx(-1 / sqrt(2), rel=1e-15)
    with pytest.raises(DomainError):
        eval_basis(basis, leg, [np.nan, 0.0])


def test_eval_model_examples():
    gauss = InputModel((Gaussian(2, 3),))
    basis = total_degree_set(1, 2)
    assert PCEModel(gauss, basis, [0, 0, 0])(np.array([[1.0], [5.0]])).tolist() == [0.0, 0.0]
    np.testing.assert_array_equal(PCEModel(gauss, basis, [3, 0, 0])(np.array([[-4.0], [9.0]])), 3.0)
    uni = InputModel((Uniform(-1, 1),))
    assert eval_model(PCEModel(uni, basis, [0, 1, 0]), [[0.2]])[0] == pytest.approx(0.34641, abs=5e-6)


def test_model_coefficient_count_checked():
    with pytest.raises(ValueError):
        PCEModel(InputModel.iid(Gaussian(), 2), total_degree_set(2, 1), [1.0, 2.0])


def gaussian_design(dim, n, seed, scheme="iid"):
    model = InputModel.iid(Gaussian(), dim)
    return model, sample(model, n, scheme, seed=seed)


def test_ols_exact_recovery():
    model, design = gaussian_design(1, 50, 1)
    basis = total_degree_set(1, 3)
    pce = fit_least_squares(design, design.points[:, 0], basis, model)
    np.testing.assert_allclose(pce.coefficients, [0, 1, 0, 0], atol=1e-10)
    assert pce.residual <= 1e-10


def test_ols_constant_data():
    model, design = gaussian_design(2, 30, 2)
    pce = fit_least_squares(design, np.full(30, 4.25), total_degree_set(2, 2), model)
    np.testing.assert_allclose(pce.coefficients, [4.25, 0, 0, 0, 0, 0], atol=1e-10)


def test_ols_underdetermined():
    model, design = gaussian_design(2, 5, 3)
    with pytest.raises(UnderdeterminedError):
        fit_least_squares(design, np.ones(5), total_degree_set(2, 2), model)


def test_ols_ill_conditioned():
    model = InputModel.iid(Uniform(-1, 1), 1)
    pts = np.repeat([[-0.5], [0.5]], 10, axis=0)
    with pytest.raises(IllConditionedError, match="condition"):
        fit_least_squares(Design(pts, 0, "file"), np.ones(20), total_degree_set(1, 4), model)


def test_ols_row_permutation_invariance():
    model = InputModel((Uniform(0, 2), Gaussian(1, 0.5), Gamma(2.0, 1.5)))
    design = sample(model, 80, "lhs", seed=4)
    x = design.physical(model)
    y = np.exp(0.3 * x[:, 0]) + x[:, 1] * x[:, 2]
    basis = total_degree_set(3, 3)
    a = fit_least_squares(design, y, basis, model)
    perm = np.random.default_rng(0).permutation(80)
    b = fit_least_squares(Design(design.points[perm], 0, "lhs"), y[perm], basis, model)
    np.testing.assert_allclose(a.coefficients, b.coefficients, rtol=1e-12, atol=1e-12)


def test_residual_small_for_data_in_span():
    model = InputModel.iid(Uniform(-1, 1), 3)
    design = sample(model, 100, "lhs", seed=6)
    basis = total_degree_set(3, 3)
    coef = np.random.default_rng(1).normal(size=len(basis))
    y = eval_basis(basis, model.families, design.points) @ coef
    pce = fit_least_squares(design, y, basis, model)
    assert pce.residual <= 1e-10
    np.testing.assert_allclose(pce.coefficients, coef, atol=1e-10)


def test_lar_single_predictor():
    model, design = gaussian_design(20, 100, 7, "lhs")
    basis = total_degree_set(20, 2)
    y = 2 * design.points[:, 0]
    pce = fit_lar(design, y, basis, model)
    assert pce.basis.indices.tolist() == [[0] * 20, [1] + [0] * 19]
    np.testing.assert_allclose(pce.coefficients, [0.0, 2.0], atol=1e-8)


def test_lar_orders_orthonormal_terms_by_magnitude():
    model, design = gaussian_design(4, 200, 8)
    basis = total_degree_set(4, 2)
    psi = eval_basis(basis, model.families, design.points)
    picks = {basis.position((0, 1, 0, 0)): 3.0, basis.position((1, 0, 1, 0)): -2.0,
             basis.position((0, 0, 0, 2)): 1.0}
    y = sum(c * psi[:, k] for k, c in picks.items())
    order = lar_order(psi[:, 1:], y, 10)
    assert [k + 1 for k in order[:3]] == list(picks)
    pce = fit_lar(design, y, basis, model)
    active = {tuple(r) for r in pce.basis.indices.tolist()}
    assert {(0, 1, 0, 0), (1, 0, 1, 0), (0, 0, 0, 2)} <= active
    got = {tuple(r): c for r, c in zip(pce.basis.indices.tolist(), pce.coefficients)}
    assert got[(0, 1, 0, 0)] == pytest.approx(3.0, abs=1e-8)
    assert got[(1, 0, 1, 0)] == pytest.approx(-2.0, abs=1e-8)


def test_lar_zero_response():
    model, design = gaussian_design(3, 40, 9)
    pce = fit_lar(design, np.zeros(40), total_degree_set(3, 2), model)
    assert pce.coefficients.tolist() == [0.0]
    assert pce.warning == "constant response"
    np.testing.assert_array_equal(pce(np.ones((3, 3))), 0.0)


def test_lar_matches_ols_on_full_path():
    model = InputModel.iid(Uniform(-1, 1), 2)
    design = sample(model, 400, "lhs", seed=10)
    basis = total_degree_set(2, 2)
    coef = np.array([0.5, 1.0, -2.0, 0.7, 1.5, -0.9])
    y = eval_basis(basis, model.families, design.points) @ coef
    y = y + 1e-3 * np.random.default_rng(2).normal(size=400)
    lar = fit_lar(design, y, basis, model)
    ols = fit_least_squares(design, y, basis, model)
    assert len(lar.basis) == len(basis)
    np.testing.assert_allclose(lar.coefficients, ols.coefficients, atol=1e-8)


def test_lar_is_deterministic():
    model, design = gaussian_design(5, 60, 11)
    y = np.sin(design.points).sum(axis=1)
    basis = total_degree_set(5, 3)
    a, b = fit_lar(design, y, basis, model), fit_lar(design, y, basis, model)
    assert a.to_json() == b.to_json()


def test_json_round_trip_bit_exact():
    model = InputModel((Uniform(0, 1), Gamma(2.5, 0.3)))
    design = sample(model, 60, "lhs", seed=12)
    y = np.random.default_rng(5).normal(size=60)
    pce = fit_least_squares(design, y, total_degree_set(2, 3), model)
    text = pce.to_json()
    back = PCEModel.from_json(text)
    assert back.coefficients.tobytes() == pce.coefficients.tobytes()
    assert back.input == pce.input
    assert back.basis.indices.tolist() == pce.basis.indices.tolist()
    doc = json.loads(text)
    assert set(doc) == {"version", "marginals", "degree", "indices", "coefficients", "residual", "loo"}
    with pytest.raises(ValueError):
        PCEModel.from_dict({**doc, "version": 99})


@pytest.mark.slow
def test_orthonormality_transfer():
    model = InputModel((Uniform(-2, 3), Gaussian(1, 2), Gamma(1.7, 0.8)))
    design = sample(model, 100_000, "iid", seed=13)
    basis = total_degree_set(3, 2)
    psi = eval_basis(basis, model.families, design.points)
    prods = psi[:, :, None] * psi[:, None, :]
    mean = prods.mean(axis=0)
    band = 3 * np.sqrt(prods.var(axis=0) / psi.shape[0])
    assert np.all(np.abs(mean - np.eye(len(basis))) <= band)
