"""Perturbation-series solver for dd_bar f + tau d^2 f = 0 with Dirichlet data.

On the disk the solution is ``F = sum_n F_n tau**n`` with

* ``F_0`` the harmonic extension of the boundary data ``H``;
* ``F_n = K[q dF_{n-1}]`` where ``q = conj(omega')/omega'``.

The derivative fields follow the same recursion (they are never recomputed by
differentiating ``F_n``)::

    dF_n    = K_z[q dF_{n-1}]
    dbarF_n = -q dF_{n-1} + K_zbar[q dF_{n-1}]

The minus sign on the identity term is the one that agrees with the exact
monomial algebra in :mod:`ellip.bipoly`.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from . import operators
from .bipoly import TrigPolynomial
from .conformal import ConformalMap, quotient_field
from .exceptions import ModeOverflow, NonContractive
from .field import FourierRadialField, PolarGrid, multiply, norms, synthesize

#: a term whose derivative norm falls below this fraction of ||dF_0|| ends the series
TERMINATION_RTOL = 1e-13
#: consecutive steps with tau*rho >= 1 tolerated before giving up
NONCONTRACTIVE_PATIENCE = 5


@dataclass
class SeriesState:
    tau: float
    F: list[FourierRadialField]
    dF: list[FourierRadialField]
    dbarF: list[FourierRadialField]
    S: FourierRadialField
    dS: FourierRadialField
    dbarS: FourierRadialField
    sup_norms: list[float]
    d_l2_norms: list[float]

    @property
    def m(self) -> int:
        return len(self.F) - 1

    @property
    def grid(self) -> PolarGrid:
        return self.S.grid

    def decay_ratios(self) -> list[float]:
        d = self.d_l2_norms
        return [d[n] / d[n - 1] if d[n - 1] > 0 else 0.0 for n in range(1, len(d))]

    def sup_ratios(self) -> list[float]:
        s = self.sup_norms
        return [s[n] / s[n - 1] if s[n - 1] > 0 else 0.0 for n in range(1, len(s))]

    def terminated(self) -> bool:
        """True once the latest derivative term is negligible (all later terms vanish)."""
        scale = max(self.d_l2_norms[0], 1e-300)
        return self.d_l2_norms[-1] <= TERMINATION_RTOL * scale


@dataclass
class SolveReport:
    m: int
    tau: float
    decay_ratios: list[float]
    sup_ratios: list[float]
    empirical_K_norm: float | None
    boundary_error: float
    residual: float | None
    tail_bound: float | None
    terminated: bool
    term_sup_norms: list[float]
    term_d_l2_norms: list[float]
    grid: dict[str, int]
    alpha: float | None = None
    interior_error: float | None = None
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self, timings: bool = True) -> dict[str, Any]:
        d = asdict(self)
        if not timings:
            d.pop("timings")
        return d

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=True)


def init(H: TrigPolynomial, grid: PolarGrid):
    """``(F_0, dF_0, dbarF_0)`` from boundary modes by term-wise differentiation."""
    if not isinstance(H, TrigPolynomial):
        H = TrigPolynomial(H)
    if H.max_mode > grid.K_max:
        raise ModeOverflow(f"boundary data has mode {H.max_mode} > K_max={grid.K_max}")
    F0 = operators.apply_P(H, grid)
    K = grid.K_max
    d = np.zeros((grid.n_modes, grid.n_r), dtype=complex)
    db = np.zeros_like(d)
    for k, c in H.items():
        if k >= 1:
            d[k - 1 + K] = k * c * grid.r ** (k - 1)
        elif k <= -1:
            db[k + 1 + K] = -k * c * grid.r ** (-k - 1)
    return F0, FourierRadialField(grid, d), FourierRadialField(grid, db)


def start(H: TrigPolynomial, grid: PolarGrid, tau: float) -> SeriesState:
    F0, dF0, dbF0 = init(H, grid)
    return SeriesState(
        tau=float(tau), F=[F0], dF=[dF0], dbarF=[dbF0], S=F0, dS=dF0, dbarS=dbF0,
        sup_norms=[norms(F0, "sup")], d_l2_norms=[norms(dF0, 2)],
    )


def step(state: SeriesState, q: FourierRadialField | None) -> SeriesState:
    """Append the next term of the recursion; ``q=None`` means the identity map."""
    prev = state.dF[-1]
    phi = prev if q is None else multiply(q, prev)
    Fn = operators.apply_K(phi)
    dFn = operators.apply_Kz(phi)
    dbFn = operators.apply_Kzbar(phi) - phi
    w = state.tau ** (state.m + 1)
    state.F.append(Fn)
    state.dF.append(dFn)
    state.dbarF.append(dbFn)
    state.S = state.S + w * Fn
    state.dS = state.dS + w * dFn
    state.dbarS = state.dbarS + w * dbFn
    state.sup_norms.append(norms(Fn, "sup"))
    state.d_l2_norms.append(norms(dFn, 2))
    return state


def tail_estimate(state: SeriesState) -> tuple[float | None, float | None]:
    """``(rho_hat, tail)`` with rho_hat the max of the last three decay ratios.

    ``tail = ||F_m|| tau**m * tau rho_hat / (1 - tau rho_hat)``; None when the
    ratio is unavailable or the geometric bound does not apply.
    """
    ratios = state.decay_ratios()
    if not ratios:
        return None, None
    rho = max(ratios[-3:])
    x = state.tau * rho
    if x >= 1:
        return rho, None
    return rho, state.sup_norms[-1] * state.tau ** state.m * x / (1.0 - x)


def boundary_error(solution: FourierRadialField, H: TrigPolynomial) -> float:
    """Sup over the grid angles of |S(1, theta) - H(theta)|."""
    return float(np.max(np.abs(solution.trace() - H.samples(solution.grid.M))))


def _fd1(fun, z, h):
    fx = (-fun(z + 2 * h) + 8 * fun(z + h) - 8 * fun(z - h) + fun(z - 2 * h)) / (12 * h)
    ih = 1j * h
    fy = (-fun(z + 2 * ih) + 8 * fun(z + ih) - 8 * fun(z - ih) + fun(z - 2 * ih)) / (12 * h)
    return fx, fy


def _fd_laplacian(fun, z, h):
    f0 = fun(z)
    out = -60 * f0
    for e in (h, 1j * h):
        out = out - fun(z + 2 * e) + 16 * fun(z + e) + 16 * fun(z - e) - fun(z - 2 * e)
    return out / (12 * h * h)


def interior_points(n: int, seed: int = 0, r_max: float = 0.9) -> np.ndarray:
    """``n`` seeded points uniform in area on the disk of radius ``r_max``."""
    rng = np.random.default_rng(seed)
    r = r_max * np.sqrt(rng.random(n))
    return r * np.exp(2j * np.pi * rng.random(n))


def residual(S, tau: float, omega: ConformalMap | None = None, points=None, h: float = 1e-3,
             scale: float | None = None) -> float:
    """Max over ``points`` of |dd_bar S + tau d(q dS)| / ||S||_sup by fourth-order differences.

    ``S`` is a :class:`FourierRadialField` or any vectorized callable of the
    complex disk coordinate (then ``scale`` must be given). Points must satisfy
    ``|z| <= 0.9``.
    """
    if points is None:
        points = interior_points(20)
    z = np.asarray(points, dtype=complex).ravel()
    if np.any(np.abs(z) > 0.9 + 1e-12):
        raise ValueError("residual points must satisfy |z| <= 0.9")
    if isinstance(S, FourierRadialField):
        fun = lambda w: synthesize(S, np.abs(w), np.angle(w))  # noqa: E731
        if scale is None:
            scale = norms(S, "sup")
    else:
        fun = S
        if scale is None:
            raise ValueError("scale is required when S is a callable")
    q = (lambda w: 1.0) if omega is None else omega.quotient

    def dS(w):
        fx, fy = _fd1(fun, w, h)
        return 0.5 * (fx - 1j * fy)

    ddbar = 0.25 * _fd_laplacian(fun, z, h)
    gx, gy = _fd1(lambda w: q(w) * dS(w), z, h)
    val = np.abs(ddbar + tau * 0.5 * (gx - 1j * gy))
    if scale == 0:
        return float(np.max(val))
    return float(np.max(val) / scale)


def interior_error(S: FourierRadialField, exact, n_points: int = 100, seed: int = 0,
                   r_max: float = 0.95, omega: ConformalMap | None = None) -> float:
    """Max |S(z) - exact(omega(z))| over seeded interior points."""
    z = interior_points(n_points, seed, r_max)
    w = z if omega is None else omega(z)
    return float(np.max(np.abs(synthesize(S, np.abs(z), np.angle(z)) - exact(w))))


def run(H: TrigPolynomial, omega: ConformalMap | None, tau: float, tol: float = 1e-9,
        n_max: int = 500, grid: PolarGrid | None = None, residual_points=None,
        alpha: float | None = None, return_state: bool = False):
    """Sum the series until the estimated tail drops below ``tol`` or ``n_max`` terms.

    Returns ``(S, report)`` (and the :class:`SeriesState` with
    ``return_state=True``). Raises :class:`NonContractive` when
    ``tau * rho_hat >= 1`` for five consecutive steps.
    """
    if not 0.0 <= tau < 1.0:
        raise ValueError(f"tau must lie in [0, 1), got {tau}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if grid is None:
        grid = PolarGrid.for_modes(64, 48)
    if not isinstance(H, TrigPolynomial):
        H = TrigPolynomial(H)
    identity = omega is None or omega.is_identity
    timings = {}
    t0 = time.perf_counter()
    q = None if identity else quotient_field(omega, grid)
    state = start(H, grid, tau)
    timings["init"] = time.perf_counter() - t0

    t1 = time.perf_counter()
    tail = 0.0 if tau == 0 or state.terminated() else None
    stalled = 0
    while tail is None or tail > tol:
        if state.m >= n_max:
            break
        step(state, q)
        if state.terminated():
            tail = 0.0
            break
        rho, tail = tail_estimate(state)
        if tail is None:
            stalled += 1
            if stalled >= NONCONTRACTIVE_PATIENCE:
                raise NonContractive(
                    f"tau*rho = {tau * rho:.4f} >= 1 for {stalled} consecutive steps (n={state.m})"
                )
        else:
            stalled = 0
    timings["series"] = time.perf_counter() - t1

    t2 = time.perf_counter()
    b_err = boundary_error(state.S, H)
    timings["boundary"] = time.perf_counter() - t2
    t3 = time.perf_counter()
    res = residual(state.S, tau, None if identity else omega, residual_points)
    timings["residual"] = time.perf_counter() - t3
    timings["total"] = time.perf_counter() - t0

    ratios = state.decay_ratios()
    report = SolveReport(
        m=state.m,
        tau=float(tau),
        decay_ratios=ratios,
        sup_ratios=state.sup_ratios(),
        empirical_K_norm=max(ratios) if ratios else None,
        boundary_error=b_err,
        residual=res,
        tail_bound=tail,
        terminated=state.terminated(),
        term_sup_norms=list(state.sup_norms),
        term_d_l2_norms=list(state.d_l2_norms),
        grid={"J": grid.J, "M": grid.M, "K_max": grid.K_max},
        alpha=alpha,
        timings=timings,
    )
    if return_state:
        return state.S, report, state
    return state.S, report
