"""Spectral action of the disk operators P, K, K_z and K_zbar on Fourier-radial fields.

Each operator is diagonal in a shifted angular index once its kernel is
expanded in geometric series (``1/(zeta - z)`` inside and outside
``|zeta| = |z|``, ``zbar/(1 - zeta zbar)``, ``1/(1 - zeta zbar)**2``), so a
field's action reduces to radial integrals per mode:

``K``: input mode ``m+1 -> m`` (m >= 0)::

    A_m(r) = 2 int_r^1 phi_{m+1}(t) (r/t)**m dt

``K``: input mode ``-n -> -(n+1)`` (n >= 0)::

    A(r) = -2 int_0^r phi_{-n}(t) (t/r)**(n+1) dt + 2 r**(n+1) int_0^1 phi_{-n}(t) t**(n+1) dt

``K_z`` (the z-derivative of ``K``, principal value included as the local
term ``-phi_{mu+2}(r)``): input mode ``mu+2 -> mu``::

    mu >= 0 : 2(mu+1) int_r^1 phi(t) (r/t)**mu dt/t - phi(r)
    mu = -1 : -phi(r)
    mu <= -2: 2(-mu-1)/r int_0^r phi(t) (t/r)**(-mu-1) dt - phi(r)

``K_zbar``: input mode ``mu -> mu`` for ``mu <= 0``, positive modes annihilated::

    2(1-mu) r**(-mu) int_0^1 phi_mu(t) t**(1-mu) dt

All kernels are written with ratios ``r/t <= 1`` or ``t/r <= 1`` so nothing
overflows at high mode numbers.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .bipoly import BiPolynomial, TrigPolynomial
from .exceptions import ModeOverflow
from .field import FourierRadialField, PolarGrid, from_bipoly, norms


class RadialIntegrator:
    """Cumulative radial integrals ``int_0^{r_j}`` and ``int_{r_j}^1`` on a grid.

    For every output radius ``r_j`` a ``Q``-point Gauss-Legendre rule is laid
    on ``[0, r_j]`` and on ``[r_j, 1]``; profile values are carried to those
    sub-nodes by barycentric interpolation through all radial nodes and the
    resulting interpolant is integrated (optionally against a per-mode factor).
    """

    def __init__(self, grid: PolarGrid, Q: int | None = None):
        self.grid = grid
        self.Q = Q if Q is not None else grid.n_r + 8
        x, w = np.polynomial.legendre.leggauss(self.Q)
        u, wu = 0.5 * (x + 1.0), 0.5 * w
        r = grid.r[:, None]
        self.t_lo = r * u[None, :]
        self.w_lo = r * wu[None, :]
        self.t_hi = r + (1.0 - r) * u[None, :]
        self.w_hi = (1.0 - r) * wu[None, :]
        n = grid.n_r
        self.E_lo = grid.interp_matrix(self.t_lo.ravel())
        self.E_hi = grid.interp_matrix(self.t_hi.ravel())
        self._shape = (n, self.Q)

    def _at_subnodes(self, E, profiles):
        profiles = np.atleast_2d(profiles)
        vals = E @ profiles.T  # (n*Q, nm)
        return vals.T.reshape(profiles.shape[0], *self._shape)

    def lower(self, profiles, factor=None) -> np.ndarray:
        """``int_0^{r_j} q(t) * factor[.., j, t] dt`` for each profile row."""
        v = self._at_subnodes(self.E_lo, profiles)
        if factor is not None:
            v = v * factor
        return np.sum(v * self.w_lo[None], axis=-1)

    def upper(self, profiles, factor=None) -> np.ndarray:
        """``int_{r_j}^1 q(t) * factor[.., j, t] dt`` for each profile row."""
        v = self._at_subnodes(self.E_hi, profiles)
        if factor is not None:
            v = v * factor
        return np.sum(v * self.w_hi[None], axis=-1)

    def full(self, profiles) -> np.ndarray:
        """``int_0^1 q(t) dt`` using the grid's own Gauss-Legendre nodes."""
        return np.atleast_2d(profiles) @ self.grid.gl_weights

    @staticmethod
    def _powers(ratio, exponents):
        # ratio in (0, 1], exponents >= 0
        return np.power(ratio[None, :, :], np.asarray(exponents, dtype=float)[:, None, None])

    def ratio_hi(self) -> np.ndarray:
        """``r_j / t`` on the upper sub-nodes."""
        return self.grid.r[:, None] / self.t_hi

    def ratio_lo(self) -> np.ndarray:
        """``t / r_j`` on the lower sub-nodes."""
        return self.t_lo / self.grid.r[:, None]


@lru_cache(maxsize=16)
def radial_integrator(grid: PolarGrid) -> RadialIntegrator:
    return RadialIntegrator(grid)


def apply_P(H: TrigPolynomial, grid: PolarGrid) -> FourierRadialField:
    """Harmonic extension: mode k gets profile ``H_k * r**|k|``."""
    if not isinstance(H, TrigPolynomial):
        H = TrigPolynomial(H)
    if H.max_mode > grid.K_max:
        raise ModeOverflow(f"boundary data has mode {H.max_mode} > K_max={grid.K_max}")
    v = np.zeros((grid.n_modes, grid.n_r), dtype=complex)
    for k, c in H.items():
        v[k + grid.K_max] = c * grid.r ** abs(k)
    return FourierRadialField(grid, v)


def apply_K(phi: FourierRadialField) -> FourierRadialField:
    """Zero-trace solution u of dd_bar u = -d phi (volume potential with the disk Green kernel)."""
    g = phi.grid
    K = g.K_max
    R = radial_integrator(g)
    out = np.zeros_like(phi.values)
    if K == 0:
        # only mode 0 input, which feeds mode -1 (outside the band)
        return FourierRadialField(g, out)

    # output modes m = 0..K-1 from input m+1
    m = np.arange(0, K)
    src = phi.values[m + 1 + K]
    out[m + K] = 2.0 * R.upper(src, R._powers(R.ratio_hi(), m))

    # output modes -(n+1) for n = 0..K-1 from input -n
    n = np.arange(0, K)
    src = phi.values[-n + K]
    inner = R.lower(src, R._powers(R.ratio_lo(), n + 1))
    # full-disk moment taken at the boundary node, so the trace cancels exactly
    moment = inner[:, -1]
    out[-(n + 1) + K] = -2.0 * inner + 2.0 * moment[:, None] * g.r[None, :] ** (n + 1)[:, None]
    return FourierRadialField(g, out)


def apply_Kz(phi: FourierRadialField) -> FourierRadialField:
    """Principal-value operator with kernel 1/(pi (zeta - z)**2) on the disk."""
    g = phi.grid
    K = g.K_max
    R = radial_integrator(g)
    out = np.zeros_like(phi.values)
    r = g.r

    # mu = 0..K-2 from input mu+2
    mu = np.arange(0, K - 1)
    if mu.size:
        src = phi.values[mu + 2 + K]
        fac = R._powers(R.ratio_hi(), mu) / R.t_hi[None]
        out[mu + K] = 2.0 * (mu + 1)[:, None] * R.upper(src, fac) - src

    # mu = -1 from input 1
    if K >= 1:
        out[-1 + K] = -phi.values[1 + K]

    # mu = -2..-K from input mu+2 in [-K+2, 0]
    mu = np.arange(-2, -K - 1, -1)
    if mu.size:
        src = phi.values[mu + 2 + K]
        e = -mu - 1
        inner = R.lower(src, R._powers(R.ratio_lo(), e))
        out[mu + K] = 2.0 * e[:, None] * inner / r[None, :] - src
    return FourierRadialField(g, out)


def apply_Kzbar(phi: FourierRadialField) -> FourierRadialField:
    """Smooth-kernel operator 1/(pi (1 - zeta zbar)**2); acts on non-positive modes only."""
    g = phi.grid
    K = g.K_max
    R = radial_integrator(g)
    out = np.zeros_like(phi.values)
    mu = np.arange(-K, 1)
    src = phi.values[mu + K]
    moments = R.full(src * g.r[None, :] ** (1 - mu)[:, None])
    out[mu + K] = 2.0 * (1 - mu)[:, None] * moments[:, None] * g.r[None, :] ** (-mu)[:, None]
    return FourierRadialField(g, out)


OPERATORS = {"K": apply_K, "Kz": apply_Kz, "Kzbar": apply_Kzbar}


def _resolve(op):
    if callable(op):
        return op
    name = {"k": "apply_K", "kz": "apply_Kz", "kzbar": "apply_Kzbar"}.get(
        str(op).lower().replace("_", ""))
    if name is None:
        raise ValueError(f"unknown operator {op!r}; expected one of {sorted(OPERATORS)}")
    # looked up at call time so patched operators are honoured
    return lambda f: globals()[name](f)


def random_field(grid: PolarGrid, rng: np.random.Generator, max_degree: int | None = None) -> FourierRadialField:
    """Random band-limited field: a random bi-polynomial with exponents up to ``max_degree``."""
    if max_degree is None:
        max_degree = min(6, grid.K_max)
    p = BiPolynomial.random(rng, max_degree, max_degree)
    return from_bipoly(p, grid)


def estimate_operator_norm(op, trials: int = 50, seed: int = 0, grid: PolarGrid | None = None,
                           max_degree: int | None = None, fields=None) -> float:
    """Largest observed ``||op phi||_2 / ||phi||_2`` over random band-limited fields.

    ``op`` is ``"Kz"``, ``"Kzbar"``, ``"K"`` or a callable on fields. Passing
    ``fields`` replaces the random draws.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    apply = _resolve(op)
    if grid is None:
        grid = PolarGrid.for_modes(48, 24)
    if fields is None:
        rng = np.random.default_rng(seed)
        fields = [random_field(grid, rng, max_degree) for _ in range(trials)]
    best = 0.0
    for phi in fields:
        denom = norms(phi, 2)
        if denom == 0:
            continue
        best = max(best, norms(apply(phi), 2) / denom)
    return best
