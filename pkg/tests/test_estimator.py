import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import FunctionTransformer

from sica_nsfd import INITIAL_CONDITIONS, InvalidParameters, SICATransformer, simulate


@pytest.fixture
def X():
    return np.array([INITIAL_CONDITIONS[k].as_array() for k in (1, 2, 3, 4)])


def test_get_params_roundtrip():
    est = SICATransformer(beta=0.1, n_steps=5)
    params = est.get_params()
    assert params["beta"] == 0.1 and params["n_steps"] == 5
    assert set(params) >= {"Lambda", "mu", "eta_A", "h", "denominator"}
    assert clone(est).get_params() == params


def test_fit_attributes(X, cv):
    est = SICATransformer().fit(X)
    assert est.params_ == cv
    assert est.r0_ == pytest.approx(4.5304, rel=1e-2)
    assert est.psi_ == pytest.approx(1.0072247, abs=1e-7)
    assert est.endemic_ is not None and est.n_features_in_ == 4


def test_low_beta_has_no_endemic_point():
    est = SICATransformer(beta=0.1).fit()
    assert est.endemic_ is None and est.r0_ < 1


def test_transform_matches_simulate(X, cv):
    out = SICATransformer(n_steps=7).fit(X).transform(X)
    for row, got in zip(X, out):
        np.testing.assert_array_equal(got, simulate(cv, row, 1.0, 7).final)


def test_set_params_changes_output(X):
    est = SICATransformer(n_steps=3).fit(X)
    a = est.transform(X)
    b = est.set_params(n_steps=4).fit(X).transform(X)
    assert not np.array_equal(a, b)


def test_not_fitted(X):
    with pytest.raises(NotFittedError):
        SICATransformer().transform(X)


@pytest.mark.parametrize("bad", [
    np.ones((2, 3)),
    -np.ones((1, 4)),
    np.array([[1.0, np.nan, 0.0, 0.0]]),
])
def test_rejects_bad_input(bad):
    with pytest.raises(ValueError):
        SICATransformer().fit().transform(bad)


def test_invalid_hyperparameters():
    with pytest.raises(InvalidParameters):
        SICATransformer(mu=0.0).fit()
    with pytest.raises(InvalidParameters):
        SICATransformer(n_steps=-1).fit()


def test_pipeline(X):
    pipe = make_pipeline(SICATransformer(n_steps=2), FunctionTransformer(lambda Z: Z.sum(axis=1,
                                                                                       keepdims=True)))
    out = pipe.fit_transform(X)
    assert out.shape == (4, 1)
    assert np.all(out > 0)


def test_feature_names_and_trajectories(X):
    est = SICATransformer(n_steps=3).fit(X)
    assert list(est.get_feature_names_out()) == ["S", "I", "C", "A"]
    trajs = est.trajectories(X[:2])
    assert len(trajs) == 2 and len(trajs[0]) == 4
