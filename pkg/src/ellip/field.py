"""Fields on the closed unit disk stored as angular Fourier modes times radial profiles.

A field ``f(r, theta) = sum_k f_k(r) exp(i k theta)`` is kept as the array of
profile values ``f_k(r_j)`` for ``|k| <= K_max`` on a fixed set of radial nodes:
``J`` Gauss-Legendre nodes on (0, 1) followed by the boundary node ``r = 1``.
The boundary node carries no quadrature weight; it exists so traces on the
unit circle are read off exactly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from .bipoly import BiPolynomial, TrigPolynomial
from .exceptions import DimensionMismatch, ModeOverflow

#: boundary data on the unit circle, stored as Fourier modes
BoundaryModes = TrigPolynomial


def barycentric_weights(x: np.ndarray) -> np.ndarray:
    """Barycentric weights for arbitrary distinct nodes in [0, 1].

    Products are scaled by 4 (the inverse capacity of a unit interval) to
    stay inside the floating-point range for a few hundred nodes.
    """
    x = np.asarray(x, dtype=float)
    diff = 4.0 * (x[:, None] - x[None, :])
    np.fill_diagonal(diff, 1.0)
    w = 1.0 / np.prod(diff, axis=1)
    return w / np.max(np.abs(w))


def interpolation_matrix(x: np.ndarray, w: np.ndarray, t) -> np.ndarray:
    """Matrix mapping node values at ``x`` to interpolant values at ``t``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    d = t[:, None] - x[None, :]
    exact = d == 0.0
    d[exact] = 1.0
    c = w[None, :] / d
    E = c / c.sum(axis=1, keepdims=True)
    rows = np.nonzero(exact.any(axis=1))[0]
    for i in rows:
        E[i] = exact[i].astype(float)
    return E


def differentiation_matrix(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    """First-derivative matrix of the polynomial interpolant through ``x``."""
    d = x[:, None] - x[None, :]
    np.fill_diagonal(d, 1.0)
    D = (w[None, :] / w[:, None]) / d
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -D.sum(axis=1))
    return D


@dataclass(frozen=True, eq=False)
class PolarGrid:
    """Tensor grid of radial nodes and ``M`` uniform angles.

    Parameters
    ----------
    J : int
        Number of Gauss-Legendre radial nodes in (0, 1). The boundary node is
        appended, so fields store ``J + 1`` radial values per mode.
    M : int
        Number of uniform angular samples (power of two).
    K_max : int
        Largest retained angular mode. Must satisfy ``4 * K_max <= M`` so
        products of two band-limited fields do not alias.
    """

    J: int
    M: int
    K_max: int
    r: np.ndarray = dc_field(init=False, repr=False)
    gl_weights: np.ndarray = dc_field(init=False, repr=False)

    def __post_init__(self):
        J, M, K = int(self.J), int(self.M), int(self.K_max)
        if J < 2:
            raise ValueError(f"J must be >= 2, got {J}")
        if M < 4 or M & (M - 1):
            raise ValueError(f"M must be a power of two >= 4, got {M}")
        if K < 0 or 4 * K > M:
            raise ValueError(f"K_max must satisfy 0 <= 4*K_max <= M, got K_max={K}, M={M}")
        x, wx = np.polynomial.legendre.leggauss(J)
        r = np.append(0.5 * (x + 1.0), 1.0)
        gw = np.append(0.5 * wx, 0.0)
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "K_max", K)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "gl_weights", gw)

    @classmethod
    def for_modes(cls, J: int, K_max: int, M: int | None = None) -> "PolarGrid":
        """Grid with the smallest power-of-two ``M >= max(4*K_max, 8)``."""
        if M is None:
            M = 8
            while M < 4 * K_max:
                M *= 2
        return cls(J, M, K_max)

    @property
    def n_r(self) -> int:
        return self.J + 1

    @property
    def n_modes(self) -> int:
        return 2 * self.K_max + 1

    @property
    def ks(self) -> np.ndarray:
        return np.arange(-self.K_max, self.K_max + 1)

    @property
    def theta(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.M) / self.M

    @property
    def area_weights(self) -> np.ndarray:
        """Weights w_j with sum_j w_j q(r_j) ~ int_0^1 q(rho) rho drho."""
        return self.gl_weights * self.r

    @cached_property
    def bary_weights(self) -> np.ndarray:
        return barycentric_weights(self.r)

    @cached_property
    def diff_matrix(self) -> np.ndarray:
        return differentiation_matrix(self.r, self.bary_weights)

    @cached_property
    def points(self) -> np.ndarray:
        """Complex grid points, shape ``(M, n_r)``."""
        return np.exp(1j * self.theta)[:, None] * self.r[None, :]

    def interp_matrix(self, t) -> np.ndarray:
        return interpolation_matrix(self.r, self.bary_weights, t)

    def key(self) -> tuple[int, int, int]:
        return (self.J, self.M, self.K_max)

    def __eq__(self, other):
        return isinstance(other, PolarGrid) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


class FourierRadialField:
    """Mode array ``values[k + K_max, j] = f_k(r_j)`` on a :class:`PolarGrid`."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: PolarGrid, values):
        values = np.array(values, dtype=complex)
        if values.shape != (grid.n_modes, grid.n_r):
            raise DimensionMismatch(
                f"mode array has shape {values.shape}, grid expects {(grid.n_modes, grid.n_r)}"
            )
        values.setflags(write=False)
        self.grid = grid
        self.values = values

    @classmethod
    def zeros(cls, grid: PolarGrid) -> "FourierRadialField":
        return cls(grid, np.zeros((grid.n_modes, grid.n_r), dtype=complex))

    @classmethod
    def constant(cls, grid: PolarGrid, value: complex = 1.0) -> "FourierRadialField":
        v = np.zeros((grid.n_modes, grid.n_r), dtype=complex)
        v[grid.K_max] = value
        return cls(grid, v)

    def mode(self, k: int) -> np.ndarray:
        if abs(k) > self.grid.K_max:
            return np.zeros(self.grid.n_r, dtype=complex)
        return self.values[k + self.grid.K_max]

    def _check(self, other: "FourierRadialField"):
        if self.grid != other.grid:
            raise DimensionMismatch(f"grids differ: {self.grid.key()} vs {other.grid.key()}")

    def __add__(self, other):
        self._check(other)
        return FourierRadialField(self.grid, self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return FourierRadialField(self.grid, self.values - other.values)

    def __neg__(self):
        return FourierRadialField(self.grid, -self.values)

    def __mul__(self, s):
        if isinstance(s, FourierRadialField):
            return multiply(self, s)
        return FourierRadialField(self.grid, complex(s) * self.values)

    __rmul__ = __mul__

    def samples(self) -> np.ndarray:
        """Values at the grid points, shape ``(M, n_r)``."""
        g = self.grid
        spec = np.zeros((g.M, g.n_r), dtype=complex)
        spec[g.ks % g.M] = self.values
        return np.fft.ifft(spec, axis=0) * g.M

    def trace(self) -> np.ndarray:
        """Samples on the unit circle at the ``M`` grid angles."""
        return self.samples()[:, -1]

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return synthesize(self, np.abs(z), np.angle(z))

    def max_abs_diff(self, other: "FourierRadialField") -> float:
        self._check(other)
        return float(np.max(np.abs(self.samples() - other.samples())))

    def __repr__(self):
        return f"FourierRadialField(grid={self.grid.key()})"


def analyze(samples, grid: PolarGrid) -> FourierRadialField:
    """Per-radius discrete Fourier analysis of ``(M, n_r)`` samples."""
    samples = np.asarray(samples, dtype=complex)
    if samples.shape != (grid.M, grid.n_r):
        raise DimensionMismatch(
            f"samples have shape {samples.shape}, grid expects {(grid.M, grid.n_r)}"
        )
    spec = np.fft.fft(samples, axis=0) / grid.M
    return FourierRadialField(grid, spec[grid.ks % grid.M])


def synthesize(f: FourierRadialField, r, theta) -> np.ndarray:
    """Evaluate ``sum_k f_k(r) exp(i k theta)`` at arbitrary polar points.

    Radial profiles are evaluated with barycentric interpolation over all
    radial nodes; ``r`` and ``theta`` broadcast against each other.
    """
    r, theta = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(theta, dtype=float))
    shape = r.shape
    r, theta = r.ravel(), theta.ravel()
    if np.any(r < 0) or np.any(r > 1 + 1e-12):
        raise ValueError("synthesize requires 0 <= r <= 1")
    g = f.grid
    prof = g.interp_matrix(r) @ f.values.T  # (npts, n_modes)
    phase = np.exp(1j * np.outer(theta, g.ks))
    return np.sum(prof * phase, axis=1).reshape(shape)


def from_bipoly(p: BiPolynomial, grid: PolarGrid) -> FourierRadialField:
    """Exact placement of ``z**a conj(z)**b`` into mode ``a-b`` with profile ``r**(a+b)``."""
    if p.max_mode > grid.K_max:
        raise ModeOverflow(f"bi-polynomial has mode {p.max_mode} > K_max={grid.K_max}")
    v = np.zeros((grid.n_modes, grid.n_r), dtype=complex)
    for (a, b), c in p.items():
        v[a - b + grid.K_max] += c * grid.r ** (a + b)
    return FourierRadialField(grid, v)


def from_function(func, grid: PolarGrid) -> FourierRadialField:
    """Analyze a vectorized callable of the complex coordinate."""
    return analyze(func(grid.points), grid)


def multiply(f: FourierRadialField, g: FourierRadialField) -> FourierRadialField:
    """Pointwise product in sample space, truncated back to ``K_max``."""
    f._check(g)
    return analyze(f.samples() * g.samples(), f.grid)


def norms(f: FourierRadialField, p="sup") -> float:
    """L_p(D) norm by grid quadrature, or the sampled sup norm for ``p='sup'``."""
    s = f.samples()
    if p in ("sup", "inf", np.inf):
        return float(np.max(np.abs(s)))
    p = float(p)
    if p < 1:
        raise ValueError("p must be >= 1")
    g = f.grid
    w = g.area_weights[None, :] * (2 * np.pi / g.M)
    return float(np.sum(np.abs(s) ** p * w) ** (1.0 / p))


def l2_norm_modes(f: FourierRadialField) -> float:
    """L2 norm by Parseval: 2*pi * sum_k int |f_k|^2 rho drho."""
    return float(np.sqrt(2 * np.pi * np.sum(np.abs(f.values) ** 2 * f.grid.area_weights[None, :])))


def dz(f: FourierRadialField) -> FourierRadialField:
    """Spectral d/dz: mode k profile u -> mode k-1 profile (u' + k u / r) / 2."""
    g = f.grid
    du = f.values @ g.diff_matrix.T
    out = np.zeros_like(f.values)
    ks = g.ks[:, None]
    src = 0.5 * (du + ks * f.values / g.r[None, :])
    out[:-1] = src[1:]
    return FourierRadialField(g, out)


def dzbar(f: FourierRadialField) -> FourierRadialField:
    """Spectral d/dzbar: mode k profile u -> mode k+1 profile (u' - k u / r) / 2."""
    g = f.grid
    du = f.values @ g.diff_matrix.T
    out = np.zeros_like(f.values)
    ks = g.ks[:, None]
    src = 0.5 * (du - ks * f.values / g.r[None, :])
    out[1:] = src[:-1]
    return FourierRadialField(g, out)


def to_csv(f: FourierRadialField, path, mapping=None) -> None:
    """Write grid samples as ``r,theta,re,im`` (or ``x,y,re,im`` through ``mapping``).

    ``mapping`` is any callable of the complex disk coordinate, typically a
    :class:`~ellip.conformal.ConformalMap`.
    """
    g = f.grid
    s = f.samples()
    R, T = np.meshgrid(g.r, g.theta)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        if mapping is None:
            w.writerow(["r", "theta", "re", "im"])
            for r, t, v in zip(R.ravel(), T.ravel(), s.ravel()):
                w.writerow([repr(float(r)), repr(float(t)), repr(float(v.real)), repr(float(v.imag))])
        else:
            zz = mapping(g.points).ravel()
            w.writerow(["x", "y", "re", "im"])
            for p, v in zip(zz, s.ravel()):
                w.writerow([repr(float(p.real)), repr(float(p.imag)), repr(float(v.real)), repr(float(v.imag))])


def read_csv(path) -> np.ndarray:
    """Read back a field CSV as an ``(N, 4)`` float array."""
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
