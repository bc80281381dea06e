import numpy as np
import pytest
from _quadrature import quad_K, quad_Kz, quad_Kzbar

from ellip import bipoly, operators
from ellip.bipoly import BiPolynomial, TrigPolynomial
from ellip.exceptions import ModeOverflow
from ellip.field import FourierRadialField, PolarGrid, dz, dzbar, from_bipoly, from_function, synthesize
from ellip.operators import (
    RadialIntegrator, apply_K, apply_Kz, apply_Kzbar, apply_P, estimate_operator_norm, random_field,
)

Z = BiPolynomial.z()
ZB = BiPolynomial.zbar()
ONE = BiPolynomial.constant(1.0)


def _zero_except(f, keep, tol=1e-12):
    for k in f.grid.ks:
        if k not in keep:
            assert np.max(np.abs(f.mode(k))) < tol, k


def test_apply_P_examples(grid):
    f = apply_P(TrigPolynomial({0: 1}), grid)
    _zero_except(f, {0})
    assert np.allclose(f.mode(0), 1)
    f = apply_P({2: 1}, grid)
    assert np.allclose(f.mode(2), grid.r ** 2)
    f = apply_P({-1: 1}, grid)
    assert np.allclose(f.mode(-1), grid.r)
    H = TrigPolynomial({-3: 1j, 0: 2, 5: -0.5})
    assert np.max(np.abs(apply_P(H, grid).trace() - H.samples(grid.M))) < 1e-12


def test_apply_P_overflow(grid):
    with pytest.raises(ModeOverflow):
        apply_P({grid.K_max + 1: 1}, grid)


def test_K_examples(grid):
    r = grid.r
    assert np.max(np.abs(apply_K(from_bipoly(ONE, grid)).values)) < 1e-13
    f = apply_K(from_bipoly(Z, grid))
    _zero_except(f, {0})
    assert np.max(np.abs(f.mode(0) - (1 - r ** 2))) < 1e-13
    f = apply_K(from_bipoly(Z ** 2, grid))
    _zero_except(f, {1})
    assert np.max(np.abs(f.mode(1) - (r - r ** 3))) < 1e-13


def test_Kz_examples(grid):
    r = grid.r
    assert np.max(np.abs(apply_Kz(from_bipoly(ONE, grid)).values)) < 1e-13
    f = apply_Kz(from_bipoly(Z, grid))
    _zero_except(f, {-1})
    assert np.max(np.abs(f.mode(-1) + r)) < 1e-13
    f = apply_Kz(from_bipoly(Z ** 2, grid))
    _zero_except(f, {0})
    assert np.max(np.abs(f.mode(0) - (1 - 2 * r ** 2))) < 1e-13


def test_Kzbar_examples(grid):
    r = grid.r
    f = apply_Kzbar(from_bipoly(ONE, grid))
    _zero_except(f, {0})
    assert np.max(np.abs(f.mode(0) - 1)) < 1e-13
    f = apply_Kzbar(from_bipoly(ZB, grid))
    _zero_except(f, {-1})
    assert np.max(np.abs(f.mode(-1) - r)) < 1e-13
    assert np.max(np.abs(apply_Kzbar(from_bipoly(Z, grid)).values)) < 1e-13


def test_oracle_equivalence_random(grid):
    rng = np.random.default_rng(42)
    for _ in range(10):
        p = BiPolynomial.random(rng, 6, 6)
        f = from_bipoly(p, grid)
        for num, exact in ((apply_K, bipoly.K_exact), (apply_Kz, bipoly.Kz_exact),
                           (apply_Kzbar, bipoly.Kzbar_exact)):
            assert np.max(np.abs(num(f).samples() - bipoly.evaluate(exact(p), grid.points))) < 1e-10


def test_high_modes_stay_finite():
    grid = PolarGrid.for_modes(64, 48)
    for p in (Z ** 40, ZB ** 40, Z ** 30 * ZB ** 12):
        f = from_bipoly(p, grid)
        for num, exact in ((apply_K, bipoly.K_exact), (apply_Kz, bipoly.Kz_exact),
                           (apply_Kzbar, bipoly.Kzbar_exact)):
            out = num(f).samples()
            assert np.all(np.isfinite(out))
            assert np.max(np.abs(out - bipoly.evaluate(exact(p), grid.points))) < 1e-9


def test_derivative_identities(grid):
    rng = np.random.default_rng(7)
    for _ in range(5):
        f = from_bipoly(BiPolynomial.random(rng, 5, 5), grid)
        Kf = apply_K(f)
        assert apply_Kz(f).max_abs_diff(dz(Kf)) < 1e-8
        assert (apply_Kzbar(f) - f).max_abs_diff(dzbar(Kf)) < 1e-8


def test_zero_trace(grid):
    rng = np.random.default_rng(8)
    for _ in range(10):
        f = random_field(grid, rng)
        assert np.max(np.abs(apply_K(f).trace())) < 1e-12


def _smooth(w):
    return np.exp(w) * np.conj(w) + 1 / (2.5 - w)


@pytest.mark.parametrize("z", [0.0, 0.25 + 0.3j, -0.6j, 0.7 - 0.1j])
def test_non_polynomial_data_against_kernel_quadrature(z, big_grid):
    f = from_function(_smooth, big_grid)
    r, t = abs(z), np.angle(z)
    assert abs(synthesize(apply_K(f), r, t) - quad_K(_smooth, z)) < 1e-6
    assert abs(synthesize(apply_Kz(f), r, t) - quad_Kz(_smooth, z)) < 1e-6
    assert abs(synthesize(apply_Kzbar(f), r, t) - quad_Kzbar(_smooth, z)) < 1e-6


def test_norm_estimates(grid):
    nz = estimate_operator_norm("Kz", trials=50, seed=0, grid=grid)
    nzb = estimate_operator_norm("Kzbar", trials=50, seed=0, grid=grid)
    assert 0.8 <= nz <= 1.005
    assert nzb <= 1.005


def test_norm_single_trial_examples(grid):
    assert estimate_operator_norm("Kz", fields=[from_bipoly(Z, grid)], grid=grid) == pytest.approx(1, abs=1e-10)
    assert estimate_operator_norm("Kzbar", fields=[from_bipoly(ONE, grid)], grid=grid) == pytest.approx(1, abs=1e-10)


def test_norm_estimate_is_seeded(grid):
    a = estimate_operator_norm("Kz", trials=5, seed=3, grid=grid)
    b = estimate_operator_norm("Kz", trials=5, seed=3, grid=grid)
    assert a == b


def test_unknown_operator_name(grid):
    with pytest.raises(ValueError):
        estimate_operator_norm("Kx", grid=grid)


def test_patched_operator_is_used(monkeypatch, grid):
    monkeypatch.setattr(operators, "apply_Kz", lambda f: f * 3.0)
    assert estimate_operator_norm("Kz", trials=3, grid=grid) == pytest.approx(3.0)


class TestRadialIntegrator:
    def test_cumulative_integrals_of_monomials(self, grid):
        R = RadialIntegrator(grid)
        r = grid.r
        for n in range(6):
            prof = (r ** n)[None, :]
            assert np.max(np.abs(R.lower(prof)[0] - r ** (n + 1) / (n + 1))) < 1e-13
            assert np.max(np.abs(R.upper(prof)[0] - (1 - r ** (n + 1)) / (n + 1))) < 1e-13
            assert R.full(prof)[0] == pytest.approx(1 / (n + 1), abs=1e-14)

    def test_lower_plus_upper_is_full(self, grid):
        R = RadialIntegrator(grid)
        prof = np.cos(3 * grid.r)[None, :]
        assert np.max(np.abs(R.lower(prof) + R.upper(prof) - R.full(prof))) < 1e-13

    def test_boundary_and_ratios(self, grid):
        R = RadialIntegrator(grid)
        one = np.ones((1, grid.n_r))
        assert R.upper(one)[0, -1] == 0.0
        assert np.all(R.ratio_hi() <= 1) and np.all(R.ratio_lo() <= 1)

    def test_cached_per_grid(self, grid):
        assert operators.radial_integrator(grid) is operators.radial_integrator(PolarGrid.for_modes(48, 24))


def test_constant_field_helper(grid):
    assert np.allclose(FourierRadialField.constant(grid, 2.0).samples(), 2.0)
