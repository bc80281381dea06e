"""Input checks shared by the estimator and the command-line front end.

Every helper raises ``ValueError`` whose message starts with the offending
parameter name, so callers can surface it verbatim.
"""

from __future__ import annotations

import numbers

import numpy as np

from .bipoly import TrigPolynomial
from .conformal import BoundaryDataSpec, ConformalMap


def check_tau(tau, name: str = "tau") -> float:
    if not isinstance(tau, numbers.Real) or isinstance(tau, bool):
        raise ValueError(f"{name}: expected a real number, got {tau!r}")
    tau = float(tau)
    if not 0.0 <= tau < 1.0:
        raise ValueError(f"{name}: must lie in [0, 1), got {tau}")
    return tau


def check_positive(value, name: str) -> float:
    if not isinstance(value, numbers.Real) or isinstance(value, bool):
        raise ValueError(f"{name}: expected a real number, got {value!r}")
    if not value > 0:
        raise ValueError(f"{name}: must be > 0, got {value}")
    return float(value)


def check_int(value, name: str, minimum: int = 0) -> int:
    if not isinstance(value, numbers.Integral) or isinstance(value, bool):
        raise ValueError(f"{name}: expected an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name}: must be >= {minimum}, got {value}")
    return int(value)


def check_grid(J, M, K_max, prefix: str = "grid.") -> tuple[int, int, int]:
    J = check_int(J, prefix + "J", 16)
    K_max = check_int(K_max, prefix + "K_max", 1)
    M = check_int(M, prefix + "M", 4)
    if M & (M - 1):
        raise ValueError(f"{prefix}M: must be a power of two, got {M}")
    if M < 4 * K_max:
        raise ValueError(f"{prefix}M: must be >= 4*K_max = {4 * K_max}, got {M}")
    return J, M, K_max


def default_angular(K_max: int) -> int:
    M = 8
    while M < 4 * K_max:
        M *= 2
    return M


def as_map(map_coeffs) -> ConformalMap:
    if map_coeffs is None:
        return ConformalMap.identity()
    if isinstance(map_coeffs, ConformalMap):
        return map_coeffs
    if isinstance(map_coeffs, dict):
        return ConformalMap.from_dict(map_coeffs)
    c = np.asarray(map_coeffs)
    if c.ndim == 2 and c.shape[1] == 2 and not np.iscomplexobj(c):
        c = c[:, 0] + 1j * c[:, 1]
    return ConformalMap(c)


def as_boundary_spec(X) -> BoundaryDataSpec:
    """Coerce modes, sample arrays or specs into a :class:`BoundaryDataSpec`."""
    if isinstance(X, BoundaryDataSpec):
        return X
    if isinstance(X, TrigPolynomial):
        return BoundaryDataSpec.from_modes(X)
    if isinstance(X, dict):
        if "type" in X or "kind" in X:
            return BoundaryDataSpec.from_dict(X)
        return BoundaryDataSpec.from_modes(X)
    arr = np.asarray(X)
    if arr.ndim == 2 and arr.shape[1] == 2 and not np.iscomplexobj(arr):
        arr = arr[:, 0] + 1j * arr[:, 1]
    arr = np.asarray(arr, dtype=complex).ravel()
    if not np.all(np.isfinite(arr)):
        raise ValueError("boundary: samples contain non-finite values")
    return BoundaryDataSpec.from_samples(arr)
