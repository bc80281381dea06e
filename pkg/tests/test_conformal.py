import json

import numpy as np
import pytest

from ellip.bipoly import TrigPolynomial
from ellip.conformal import (
    BoundaryDataSpec, ConformalMap, eval_dmap, eval_map, quotient_field, transport_boundary,
    univalence_check,
)
from ellip.exceptions import DerivativeVanishes, NotUnivalent, SampleCountMismatch
from ellip.field import PolarGrid


def test_eval_examples():
    ident = ConformalMap.identity()
    assert eval_map(ident, 0.5j) == 0.5j and eval_dmap(ident, 0.5j) == 1
    w = ConformalMap([0, 1, 0.3])
    assert eval_map(w, 1) == pytest.approx(1.3) and eval_dmap(w, 1) == pytest.approx(1.6)
    w = ConformalMap([0, 1, 0.5])
    assert eval_map(w, -1) == pytest.approx(-0.5) and abs(eval_dmap(w, -1)) < 1e-15


def test_map_validation_and_trimming():
    with pytest.raises(ValueError):
        ConformalMap([1, 0, 2])
    w = ConformalMap([0, 1, 0.2, 0, 0])
    assert w.degree == 2
    assert ConformalMap([0, 1, 0]).is_identity
    assert not ConformalMap([0, 2]).is_identity


def test_map_json_round_trip():
    w = ConformalMap([0.1j, 1, 0.2 - 0.1j])
    back = ConformalMap.from_json(w.to_json())
    assert np.array_equal(back.coeffs, w.coeffs)
    assert json.loads(w.to_json())["coeffs"][2] == [0.2, -0.1]


@pytest.mark.parametrize("coeffs,passed", [
    ([0, 1], True),
    ([0, 1, 0.3], True),
    ([0, 1, 0.5], False),
    ([0, 1, 0.6], False),
    ([0, 2, 0.1j, 0.05], True),
])
def test_univalence_check(coeffs, passed):
    rep = univalence_check(ConformalMap(coeffs))
    assert rep.passed is passed
    assert bool(rep.reasons) is not passed


def test_univalence_details():
    assert univalence_check(ConformalMap([0, 1, 0.3])).min_abs_derivative == pytest.approx(0.4, abs=1e-12)
    rep = univalence_check(ConformalMap([0, 1, 0.6]))
    assert rep.interior_critical_points == 1
    with pytest.raises(NotUnivalent) as info:
        rep.require()
    assert info.value.report is rep
    assert set(rep.to_dict()) >= {"passed", "min_abs_derivative", "self_intersections", "reasons"}


def test_self_intersecting_boundary_rejected():
    # z + z^4 / 2 folds the boundary: |omega'| reaches zero inside, curve loops
    rep = univalence_check(ConformalMap([0, 1, 0, 0, 0.5]))
    assert not rep.passed


def test_quotient_examples(grid, big_grid):
    one = quotient_field(ConformalMap.identity(), grid)
    assert np.max(np.abs(one.samples() - 1)) < 1e-15
    assert np.max(np.abs(quotient_field(ConformalMap([0, 2]), grid).samples() - 1)) < 1e-15
    w = ConformalMap([0, 1, 0.3])
    r = np.linspace(0, 1, 11)
    assert np.max(np.abs(w.quotient(r) - 1)) < 1e-15
    # the analyzed field is band-limited, so it only matches up to the ~0.6**(K_max+1) tail
    q = quotient_field(w, big_grid)
    assert np.max(np.abs(q.samples()[0] - 1)) < 1e-9  # theta = 0 is the positive real axis
    assert np.max(np.abs(np.abs(w.quotient(grid.points)) - 1)) < 1e-14


def test_quotient_vanishing_derivative(grid):
    with pytest.raises(DerivativeVanishes):
        quotient_field(ConformalMap([0, 1, 0.5]), grid)


def test_transport_examples():
    H = transport_boundary(BoundaryDataSpec.from_modes({1: 1}), None, 32)
    assert H == TrigPolynomial({1: 1})
    H = transport_boundary(BoundaryDataSpec.from_exact([0, 1], [], 0.5), None, 32)
    assert H == TrigPolynomial({1: 1, -1: -0.5})
    H = transport_boundary(BoundaryDataSpec.from_samples(np.ones(32)), None, 32)
    assert H == TrigPolynomial({0: 1})


def test_transport_sample_count():
    with pytest.raises(SampleCountMismatch):
        transport_boundary(BoundaryDataSpec.from_samples(np.ones(30)), None, 32)


def test_transport_through_map_matches_samples():
    w = ConformalMap([0, 1, 0.3])
    spec = BoundaryDataSpec.from_exact([0, 0, 1], [0, 1], 0.5)
    M = 64
    theta = 2 * np.pi * np.arange(M) / M
    vals = spec.exact_function()(w(np.exp(1j * theta)))
    H1 = transport_boundary(spec, w, M, 15)
    H2 = transport_boundary(BoundaryDataSpec.from_samples(vals), w, M, 15)
    assert H1.max_abs_diff(H2) < 1e-14
    assert np.max(np.abs(H1.samples(M) - vals)) < 1e-12


@pytest.mark.parametrize("spec", [
    BoundaryDataSpec.from_modes({-2: 1j, 3: 0.5}),
    BoundaryDataSpec.from_samples([1, 2j, 3, 4]),
    BoundaryDataSpec.from_exact([0, 1], [0, 0, 1j], 0.25),
])
def test_boundary_spec_dict_round_trip(spec):
    d = json.loads(json.dumps(spec.to_dict()))
    back = BoundaryDataSpec.from_dict(d)
    assert back.to_dict() == spec.to_dict()


@pytest.mark.parametrize("bad", [
    {"type": "wavelets"},
    {"type": "modes"},
    {"type": "samples"},
])
def test_boundary_spec_rejects(bad):
    with pytest.raises((ValueError, KeyError)):
        BoundaryDataSpec.from_dict(bad)


def test_exact_function_requires_exact_kind():
    with pytest.raises(ValueError):
        BoundaryDataSpec.from_modes({0: 1}).exact_function(0.5)
