import json

import numpy as np
import pytest

from ellip import bipoly, operators, solver
from ellip.bipoly import BiPolynomial, TrigPolynomial, exact_solution
from ellip.conformal import BoundaryDataSpec, ConformalMap, transport_boundary
from ellip.exceptions import ModeOverflow, NonContractive
from ellip.field import from_bipoly, norms

Z = BiPolynomial.z()
ZB = BiPolynomial.zbar()


def test_init_examples(grid):
    F0, d, db = solver.init(TrigPolynomial({0: 1}), grid)
    assert np.allclose(F0.samples(), 1) and norms(d) == 0 and norms(db) == 0
    F0, d, db = solver.init({1: 1}, grid)
    assert F0.max_abs_diff(from_bipoly(Z, grid)) < 1e-15
    assert np.allclose(d.samples(), 1) and norms(db) == 0
    F0, d, db = solver.init({-2: 1}, grid)
    assert F0.max_abs_diff(from_bipoly(ZB ** 2, grid)) < 1e-15
    assert db.max_abs_diff(from_bipoly(2 * ZB, grid)) < 1e-15 and norms(d) == 0


def test_init_overflow(grid):
    with pytest.raises(ModeOverflow):
        solver.init({grid.K_max + 1: 1}, grid)


def test_step_terminates_on_anti_analytic_data(grid):
    state = solver.start({-1: 1}, grid, 0.5)
    solver.step(state, None)
    assert norms(state.F[1]) == 0 and state.terminated()


def test_step_linear_data(grid):
    state = solver.start({1: 1}, grid, 0.5)
    solver.step(state, None)
    assert norms(state.F[1]) < 1e-13 and state.terminated()
    assert state.S.max_abs_diff(from_bipoly(Z, grid)) < 1e-13


def test_step_derivative_fields_match_spectral_derivatives(grid):
    from ellip.field import dz, dzbar
    H = TrigPolynomial({3: 1, -2: 0.5j, 1: -0.3})
    state = solver.start(H, grid, 0.4)
    for _ in range(3):
        solver.step(state, None)
    for n in range(1, 4):
        assert state.dF[n].max_abs_diff(dz(state.F[n])) < 1e-9
        assert state.dbarF[n].max_abs_diff(dzbar(state.F[n])) < 1e-9


def test_run_constant_data(grid):
    S, rep = solver.run({0: 1}, None, 0.7, grid=grid)
    assert rep.m == 0 and rep.boundary_error == 0
    assert np.allclose(S.samples(), 1)


@pytest.mark.parametrize("tau", [0.2, 0.5, 0.8])
def test_run_reproduces_exact_solution(big_grid, tau):
    spec = BoundaryDataSpec.from_exact([0, 0, 0, 1], [0, 0, 1], tau)
    H = transport_boundary(spec, None, big_grid.M, big_grid.K_max)
    S, rep = solver.run(H, None, tau, tol=1e-9, grid=big_grid)
    assert solver.interior_error(S, spec.exact_function(), 100, 0) <= 1e-7
    assert rep.boundary_error <= 1e-9
    assert rep.residual <= 1e-6
    assert rep.terminated


def test_run_non_disk(big_grid):
    omega = ConformalMap([0, 1, 0.3])
    f = exact_solution([0, 0, 0, 1], [0, 0, 1], 0.5)
    theta = 2 * np.pi * np.arange(big_grid.M) / big_grid.M
    H = transport_boundary(BoundaryDataSpec.from_samples(f(omega(np.exp(1j * theta)))), omega,
                           big_grid.M, big_grid.K_max)
    S, rep = solver.run(H, omega, 0.5, grid=big_grid)
    assert solver.interior_error(S, f, 100, 0, omega=omega) <= 1e-5
    assert rep.residual <= 1e-6
    assert rep.tail_bound is not None and rep.tail_bound <= 1e-9


def test_tau_zero_is_the_harmonic_extension(grid):
    H = TrigPolynomial({2: 1, -3: 1j})
    S, rep = solver.run(H, None, 0.0, grid=grid)
    assert rep.m == 0
    assert S.max_abs_diff(operators.apply_P(H, grid)) == 0


def test_series_matches_symbolic_terms(grid):
    H = TrigPolynomial({k: 1 / (1 + abs(k)) for k in range(-6, 7)})
    state = solver.start(H, grid, 0.5)
    for _ in range(12):
        solver.step(state, None)
    _, _, terms = bipoly.solve_disk_exact(H, 0.5, 12, return_terms=True)
    for Fn, exact in zip(state.F, terms):
        assert np.max(np.abs(Fn.samples() - bipoly.evaluate(exact, grid.points))) < 1e-9


def test_non_contractive(monkeypatch, grid):
    monkeypatch.setattr(operators, "apply_Kz", lambda f: f * 3.0)
    with pytest.raises(NonContractive):
        solver.run({1: 1, 2: 0.5}, None, 0.5, grid=grid)


def test_run_rejects_bad_arguments(grid):
    with pytest.raises(ValueError):
        solver.run({0: 1}, None, 1.0, grid=grid)
    with pytest.raises(ValueError):
        solver.run({0: 1}, None, 0.5, tol=0, grid=grid)


def test_residual_examples(big_grid):
    exact = from_bipoly(exact_solution([0, 0, 1], [], 0.5), big_grid)
    assert solver.residual(exact, 0.5) <= 1e-6
    assert solver.residual(from_bipoly(Z ** 2, big_grid), 0.5) == pytest.approx(1.0, abs=0.01)
    assert solver.residual(from_bipoly(ZB ** 3, big_grid), 0.3) <= 1e-6


def test_residual_callable_and_point_checks():
    f = exact_solution([0, 1, 0.5], [0, 1j], 0.4)
    assert solver.residual(f, 0.4, scale=1.0) <= 1e-6
    with pytest.raises(ValueError):
        solver.residual(f, 0.4)
    with pytest.raises(ValueError):
        solver.residual(f, 0.4, points=[0.95], scale=1.0)


def test_boundary_error_of_poisson_extension(grid):
    H = TrigPolynomial({4: 1, -1: 2j})
    assert solver.boundary_error(operators.apply_P(H, grid), H) <= 1e-12


def test_interior_points_seeded():
    a = solver.interior_points(50, seed=3)
    assert np.array_equal(a, solver.interior_points(50, seed=3))
    assert np.all(np.abs(a) <= 0.9)


def test_report_serialization(grid):
    _, rep = solver.run({2: 1, -1: 0.5}, None, 0.5, grid=grid)
    d = json.loads(rep.to_json(timings=False))
    assert "timings" not in d
    assert d["grid"] == {"J": grid.J, "M": grid.M, "K_max": grid.K_max}
    assert len(d["term_sup_norms"]) == rep.m + 1
    assert "timings" in rep.to_dict()


def test_decay_ratios_bounded_on_random_data(big_grid):
    rng = np.random.default_rng(0)
    H = TrigPolynomial({k: complex(*rng.uniform(-1, 1, 2)) for k in range(-8, 9)})
    _, rep = solver.run(H, None, 0.5, grid=big_grid)
    d = rep.term_d_l2_norms
    assert all(d[n] / d[n - 1] <= 1.02 for n in range(2, len(d)) if d[n] > 1e-12 * d[0])
