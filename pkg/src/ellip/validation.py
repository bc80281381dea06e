"""Self-check suites run by ``ellip validate``.

Each suite returns ``(passed, detail)``; exceptions count as failures. Library
functions are looked up through their modules at call time so a patched
operator is what gets exercised.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import bipoly, classification, conformal, field, operators, solver


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _close(value: float, tol: float, label: str) -> tuple[bool, str]:
    return value <= tol, f"{label} = {value:.3g} (tol {tol:g})"


def suite_classify_examples(grid):
    c = classification
    ok = True
    r = c.classify(c.EquationCoefficients(1, 0, 1))
    ok &= r.elliptic and r.strongly_elliptic
    r = c.classify(c.EquationCoefficients(1, 1j, -1))
    ok &= r.elliptic and not r.strongly_elliptic
    try:
        c.classify(c.EquationCoefficients(1, 0, -1))
        ok = False
    except c.Inconclusive:
        pass
    for tau in (0.0, 0.3, 0.7, 0.99):
        ok &= c.classify(c.canonical_coefficients(tau)).strongly_elliptic
    return bool(ok), "Laplace / Bitsadze / wave / canonical family"


def suite_root_residuals(grid):
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(200):
        a, b, cc = rng.normal(size=3) + 1j * rng.normal(size=3)
        co = classification.EquationCoefficients(a, b, cc)
        for root in classification.characteristic_roots(co):
            worst = max(worst, classification.root_residual(co, root))
    return _close(worst, 1e-12, "max scaled root residual")


def suite_kernel_of_L(grid):
    rng = np.random.default_rng(2)
    worst = 0.0
    for deg in range(9):
        g = rng.uniform(-1, 1, deg + 1) + 1j * rng.uniform(-1, 1, deg + 1)
        h = rng.uniform(-1, 1, deg + 1) + 1j * rng.uniform(-1, 1, deg + 1)
        tau = rng.uniform(0, 1)
        p = bipoly.exact_solution(g, h, tau)
        worst = max(worst, bipoly.apply_L(p, tau).max_abs_diff(bipoly.BiPolynomial()))
    return _close(worst, 1e-12, "max |L f| coefficient")


def suite_green_identity(grid):
    rng = np.random.default_rng(3)
    worst_green = worst_trace = 0.0
    for _ in range(20):
        p = bipoly.BiPolynomial.random(rng, 6, 6)
        Kp = bipoly.K_exact(p)
        worst_green = max(worst_green, (bipoly.dz(bipoly.dzbar(Kp)) + bipoly.dz(p)).max_abs_diff(bipoly.BiPolynomial()))
        worst_trace = max(worst_trace, max((abs(v) for v in Kp.on_circle().values()), default=0.0))
    ok = worst_green <= 1e-12 and worst_trace <= 1e-12
    return ok, f"dd_bar K p + d p = {worst_green:.3g}, trace of K p = {worst_trace:.3g}"


def suite_poisson_harmonic(grid):
    rng = np.random.default_rng(4)
    H = bipoly.TrigPolynomial({k: complex(*rng.uniform(-1, 1, 2)) for k in range(-6, 7)})
    P = bipoly.P_exact(H)
    harm = bipoly.dz(bipoly.dzbar(P)).max_abs_diff(bipoly.BiPolynomial())
    trace = P.trace().max_abs_diff(H)
    return harm <= 1e-13 and trace <= 1e-13, f"dd_bar P = {harm:.3g}, trace error = {trace:.3g}"


def suite_field_roundtrip(grid):
    rng = np.random.default_rng(5)
    d = min(6, grid.K_max)
    p = bipoly.BiPolynomial.random(rng, d, d)
    f = field.from_bipoly(p, grid)
    rt = field.analyze(f.samples(), grid).max_abs_diff(f)
    l2s = field.norms(f, 2)
    l2m = field.l2_norm_modes(f)
    ok = rt <= 1e-12 and abs(l2s - l2m) <= 1e-10 * max(1.0, l2m)
    return ok, f"round trip = {rt:.3g}, Parseval gap = {abs(l2s - l2m):.3g}"


def suite_radial_integrator(grid):
    R = operators.RadialIntegrator(grid)
    one = np.ones((1, grid.n_r))
    lo = R.lower(one)[0]
    hi = R.upper(one)[0]
    e1 = np.max(np.abs(lo - grid.r))
    e2 = np.max(np.abs(hi - (1 - grid.r)))
    e3 = np.max(np.abs(lo + hi - R.full(one)[0]))
    return max(e1, e2) <= 1e-12 and e3 <= 1e-13, f"cumulative errors {e1:.2g}, {e2:.2g}, sum {e3:.2g}"


def suite_operator_oracle(grid):
    pairs = [(operators.apply_K, bipoly.K_exact), (operators.apply_Kz, bipoly.Kz_exact),
             (operators.apply_Kzbar, bipoly.Kzbar_exact)]
    polys = [bipoly.BiPolynomial.monomial(a, b) for a in range(11) for b in range(11 - a)]
    rng = np.random.default_rng(6)
    polys += [bipoly.BiPolynomial.random(rng, 6, 6) for _ in range(20)]
    worst = 0.0
    pts = grid.points
    for p in polys:
        f = field.from_bipoly(p, grid)
        for num, ex in pairs:
            worst = max(worst, float(np.max(np.abs(num(f).samples() - bipoly.evaluate(ex(p), pts)))))
    return _close(worst, 1e-10, "max grid deviation from exact operators")


def suite_derivative_identities(grid):
    rng = np.random.default_rng(7)
    d = min(5, grid.K_max // 2)
    worst_z = worst_zb = 0.0
    for _ in range(5):
        f = field.from_bipoly(bipoly.BiPolynomial.random(rng, d, d), grid)
        Kf = operators.apply_K(f)
        worst_z = max(worst_z, operators.apply_Kz(f).max_abs_diff(field.dz(Kf)))
        worst_zb = max(worst_zb, (operators.apply_Kzbar(f) - f).max_abs_diff(field.dzbar(Kf)))
    ok = worst_z <= 1e-8 and worst_zb <= 1e-8
    return ok, f"K_z - dK = {worst_z:.3g}, (K_zbar - I) - dbar K = {worst_zb:.3g}"


def suite_zero_trace(grid):
    rng = np.random.default_rng(8)
    d = min(6, grid.K_max)
    worst = 0.0
    for _ in range(10):
        f = field.from_bipoly(bipoly.BiPolynomial.random(rng, d, d), grid)
        worst = max(worst, float(np.max(np.abs(operators.apply_K(f).trace()))))
    return _close(worst, 1e-10, "sup |K phi| on the circle")


def suite_norm_bound(grid):
    nz = operators.estimate_operator_norm("Kz", 50, 0, grid)
    nzb = operators.estimate_operator_norm("Kzbar", 50, 0, grid)
    ok = 0.8 <= nz <= 1.005 and nzb <= 1.005
    return ok, f"||K_z|| ~ {nz:.4f}, ||K_zbar|| ~ {nzb:.4f}"


def suite_termwise_solver(grid):
    rng = np.random.default_rng(9)
    d = min(6, grid.K_max)
    worst = 0.0
    for tau in (0.2, 0.5, 0.8):
        H = bipoly.TrigPolynomial({k: complex(*rng.uniform(-1, 1, 2)) for k in range(-d, d + 1)})
        state = solver.start(H, grid, tau)
        for _ in range(12):
            solver.step(state, None)
        _, _, terms = bipoly.solve_disk_exact(H, tau, 12, return_terms=True)
        for Fn, ex in zip(state.F, terms):
            worst = max(worst, float(np.max(np.abs(Fn.samples() - bipoly.evaluate(ex, grid.points)))))
    return _close(worst, 1e-9, "max |F_n - exact F_n|")


def suite_disk_solution(grid):
    worst_i = worst_b = 0.0
    for tau in (0.2, 0.5, 0.8):
        spec = conformal.BoundaryDataSpec.from_exact([0, 0, 0, 1], [0, 0, 1], tau)
        H = conformal.transport_boundary(spec, None, grid.M, grid.K_max)
        S, rep = solver.run(H, None, tau, 1e-9, 500, grid)
        worst_i = max(worst_i, solver.interior_error(S, spec.exact_function(), 100, 0))
        worst_b = max(worst_b, rep.boundary_error)
    ok = worst_i <= 1e-7 and worst_b <= 1e-9
    return ok, f"interior error {worst_i:.3g}, boundary error {worst_b:.3g}"


def suite_quotient_unimodular(grid):
    omega = conformal.ConformalMap([0, 1, 0.3])
    d = omega.derivative(grid.points)
    dev = float(np.max(np.abs(np.abs(np.conj(d) / d) - 1)))
    ident = conformal.quotient_field(conformal.ConformalMap.identity(), grid)
    dev_id = ident.max_abs_diff(field.FourierRadialField.constant(grid))
    ok = dev <= 1e-12 and dev_id <= 1e-14 and conformal.univalence_check(omega).passed
    ok &= not conformal.univalence_check(conformal.ConformalMap([0, 1, 0.6])).passed
    return ok, f"| |q| - 1 | = {dev:.2g}, identity quotient deviation = {dev_id:.2g}"


def suite_residual_control(grid):
    spec = conformal.BoundaryDataSpec.from_exact([0, 0, 1], [], 0.5)
    S = field.from_bipoly(spec.exact_function(), grid)
    good = solver.residual(S, 0.5)
    bad = solver.residual(field.from_bipoly(bipoly.BiPolynomial.monomial(2, 0), grid), 0.5)
    ok = good <= 1e-6 and abs(bad - 1.0) <= 0.01
    return ok, f"solution residual {good:.2g}, z^2 control {bad:.4f}"


SUITES = [
    ("classify examples", suite_classify_examples),
    ("characteristic root residuals", suite_root_residuals),
    ("kernel of L", suite_kernel_of_L),
    ("Green and boundary identities", suite_green_identity),
    ("Poisson harmonicity", suite_poisson_harmonic),
    ("field round trip / Parseval", suite_field_roundtrip),
    ("radial integrator", suite_radial_integrator),
    ("operator-oracle equivalence", suite_operator_oracle),
    ("discrete derivative identities", suite_derivative_identities),
    ("zero boundary trace", suite_zero_trace),
    ("L2 norm bound", suite_norm_bound),
    ("term-wise solver vs oracle", suite_termwise_solver),
    ("disk exact-solution reproduction", suite_disk_solution),
    ("quotient field / univalence", suite_quotient_unimodular),
    ("residual control", suite_residual_control),
]


def run_suites(J: int = 48, K_max: int = 24, M: int | None = None) -> list[SuiteResult]:
    grid = field.PolarGrid.for_modes(J, K_max, M)
    results = []
    for name, fn in SUITES:
        t0 = time.perf_counter()
        try:
            passed, detail = fn(grid)
        except Exception as exc:  # reported, never raised
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(SuiteResult(name, bool(passed), detail, time.perf_counter() - t0))
    return results


def format_table(results: list[SuiteResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'suite':<{width}}  result  detail"]
    for r in results:
        lines.append(f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL':<6}  {r.detail}")
    n_pass = sum(r.passed for r in results)
    lines.append(f"{n_pass}/{len(results)} suites passed")
    return "\n".join(lines)
