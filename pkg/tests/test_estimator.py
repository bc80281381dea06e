import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from ellip import PerturbationSolver
from ellip.bipoly import exact_solution
from ellip.conformal import BoundaryDataSpec
from ellip.exceptions import NotUnivalent, SampleCountMismatch


def test_params_round_trip():
    est = PerturbationSolver(tau=0.3, max_mode=12)
    params = est.get_params()
    assert params["tau"] == 0.3 and params["max_mode"] == 12
    est.set_params(tau=0.6)
    assert est.tau == 0.6
    cl = clone(est)
    assert cl.get_params() == est.get_params() and cl is not est


def test_predict_before_fit():
    with pytest.raises(NotFittedError):
        PerturbationSolver().predict([0.1])


def test_fit_exact_spec_and_score():
    tau = 0.5
    spec = BoundaryDataSpec.from_exact([0, 0, 0, 1], [0, 0, 1], tau)
    est = PerturbationSolver(tau=tau, n_radial=48, max_mode=24).fit(spec)
    z = 0.8 * np.exp(1j * np.linspace(0, 6, 25)) * np.linspace(0.1, 1, 25)
    f = spec.exact_function()
    assert np.max(np.abs(est.predict(z) - f(z))) < 1e-10
    assert est.score(z, f(z)) > -1e-10
    assert est.n_terms_ == est.report_.m + 1
    assert np.allclose(est.transform(z), est.predict(z))


def test_fit_samples_on_mapped_domain():
    tau = 0.5
    est = PerturbationSolver(tau=tau, n_radial=64, max_mode=48, map_coeffs=[0, 1, 0.3])
    M = 256
    theta = 2 * np.pi * np.arange(M) / M
    f = exact_solution([0, 0, 0, 1], [0, 0, 1], tau)
    w = np.exp(1j * theta)
    est.fit(f(w + 0.3 * w ** 2))
    z = np.array([0.0, 0.5, -0.4j, 0.3 + 0.6j])
    assert np.max(np.abs(est.predict(z) - f(z + 0.3 * z ** 2))) < 1e-5


def test_predict_accepts_xy_pairs():
    est = PerturbationSolver(tau=0.2, n_radial=32, max_mode=8).fit({1: 1})
    xy = np.array([[0.1, 0.2], [-0.3, 0.0]])
    assert np.allclose(est.predict(xy), [0.1 + 0.2j, -0.3])
    with pytest.raises(ValueError):
        est.predict([1.5])


@pytest.mark.parametrize("params,field", [
    ({"tau": 1.0}, "tau"),
    ({"tau": "x"}, "tau"),
    ({"tol": -1.0}, "tol"),
    ({"n_radial": 4}, "J"),
    ({"max_mode": 0}, "max_mode"),
    ({"n_angular": 48}, "M"),
])
def test_invalid_params_name_the_field(params, field):
    with pytest.raises(ValueError, match=field):
        PerturbationSolver(**{"n_radial": 32, "max_mode": 8, **params}).fit({0: 1})


def test_non_univalent_map():
    with pytest.raises(NotUnivalent):
        PerturbationSolver(map_coeffs=[0, 1, 0.6], n_radial=32, max_mode=8).fit({0: 1})


def test_wrong_sample_count():
    with pytest.raises(SampleCountMismatch):
        PerturbationSolver(n_radial=32, max_mode=8).fit(np.ones(10))


def test_module_docstring_example():
    import doctest

    import ellip.estimator
    assert doctest.testmod(ellip.estimator).failed == 0
