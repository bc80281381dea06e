"""Estimator-style front end to the perturbation solver.

>>> from ellip import PerturbationSolver
>>> est = PerturbationSolver(tau=0.5, n_radial=32, max_mode=8).fit({0: 1.0})
>>> float(round(abs(est.predict([0.3j])[0]), 12))
1.0
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import solver
from ._validation import (
    as_boundary_spec, as_map, check_grid, check_int, check_positive, check_tau, default_angular,
)
from .conformal import transport_boundary, univalence_check
from .field import PolarGrid, synthesize


class PerturbationSolver(BaseEstimator):
    """Dirichlet solver for ``dd_bar f + tau d^2 f = 0`` on ``omega(D)``.

    ``fit`` takes the boundary data, ``predict`` evaluates the solution at
    disk coordinates ``z`` (the physical point is ``omega(z)``).

    Parameters
    ----------
    tau : float
        Perturbation parameter in [0, 1).
    tol : float
        Target for the estimated series tail.
    n_max : int
        Hard cap on the number of series terms.
    n_radial : int
        Gauss-Legendre radial nodes ``J``.
    max_mode : int
        Largest retained angular mode ``K_max``.
    n_angular : int or None
        Angular samples ``M``; defaults to the smallest power of two
        ``>= 4 * max_mode``. Sampled boundary data must have this length.
    map_coeffs : array-like, dict or ConformalMap, optional
        Power-series coefficients of the conformal map; identity if None.
    alpha : float, optional
        Declared Hoelder exponent of the boundary data (reported only).
    """

    def __init__(self, tau=0.5, tol=1e-9, n_max=500, n_radial=64, max_mode=48,
                 n_angular=None, map_coeffs=None, alpha=None):
        self.tau = tau
        self.tol = tol
        self.n_max = n_max
        self.n_radial = n_radial
        self.max_mode = max_mode
        self.n_angular = n_angular
        self.map_coeffs = map_coeffs
        self.alpha = alpha

    def _validate_params(self):
        tau = check_tau(self.tau)
        check_positive(self.tol, "tol")
        check_int(self.n_max, "n_max")
        K = check_int(self.max_mode, "max_mode", 1)
        M = self.n_angular if self.n_angular is not None else default_angular(K)
        J, M, K = check_grid(self.n_radial, M, K, prefix="")
        return tau, PolarGrid(J, M, K)

    def fit(self, X, y=None):
        """Solve for boundary data ``X``.

        ``X`` may be a mapping of Fourier modes, a :class:`TrigPolynomial`, a
        :class:`BoundaryDataSpec`, or ``M`` samples of ``h`` at
        ``omega(exp(2 pi i m / M))``.
        """
        tau, grid = self._validate_params()
        omega = as_map(self.map_coeffs)
        self.univalence_ = univalence_check(omega).require()
        spec = as_boundary_spec(X)
        H = transport_boundary(spec, omega, grid.M, grid.K_max, tau=tau)
        S, report, state = solver.run(
            H, omega, tau, tol=self.tol, n_max=self.n_max, grid=grid,
            alpha=self.alpha if self.alpha is not None else spec.alpha, return_state=True,
        )
        self.grid_ = grid
        self.map_ = omega
        self.boundary_ = H
        self.solution_ = S
        self.report_ = report
        self.state_ = state
        self.n_terms_ = report.m + 1
        return self

    def predict(self, X):
        """Solution values at disk points ``X`` (complex, ``|z| <= 1``)."""
        check_is_fitted(self, "solution_")
        z = np.asarray(X)
        if z.ndim == 2 and z.shape[1] == 2 and not np.iscomplexobj(z):
            z = z[:, 0] + 1j * z[:, 1]
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) > 1 + 1e-12):
            raise ValueError("predict expects disk coordinates with |z| <= 1")
        return synthesize(self.solution_, np.abs(z), np.angle(z))

    def transform(self, X):
        """Alias of :meth:`predict` for pipeline use."""
        return self.predict(X)

    def score(self, X, y):
        """Negative max abs error of ``predict(X)`` against reference values ``y``."""
        return -float(np.max(np.abs(self.predict(X) - np.asarray(y, dtype=complex))))
