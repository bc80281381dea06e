"""Power-series conformal maps of the unit disk and boundary-data transport.

A map ``omega(z) = sum_k c_k z**k`` is taken as given; univalence is only
checked by sampling (a guard against bad input, not a proof).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .bipoly import TrigPolynomial, exact_solution
from .exceptions import DerivativeVanishes, NotUnivalent, SampleCountMismatch
from .field import FourierRadialField, PolarGrid, analyze

#: |omega'| below this on a sample counts as a vanishing derivative
DERIVATIVE_TOL = 1e-10


def _horner(coeffs: np.ndarray, z):
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z)
    for c in coeffs[::-1]:
        out = out * z + c
    return out


class ConformalMap:
    """Truncated power series ``omega(z) = sum_k c_k z**k`` on the closed disk."""

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=complex).ravel()
        if c.size < 2 or c[1] == 0:
            raise ValueError("conformal map needs a nonzero linear coefficient c_1")
        # trailing zeros do not change the map
        last = np.max(np.nonzero(c)[0])
        self.coeffs = c[: last + 1].copy()
        self.coeffs.setflags(write=False)
        d = np.arange(1, self.coeffs.size)
        self.dcoeffs = self.coeffs[1:] * d
        self.dcoeffs.setflags(write=False)

    @classmethod
    def identity(cls) -> "ConformalMap":
        return cls([0.0, 1.0])

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ConformalMap":
        return cls([complex(re, im) for re, im in d["coeffs"]])

    def to_dict(self) -> dict[str, Any]:
        return {"coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs]}

    @classmethod
    def from_json(cls, text: str) -> "ConformalMap":
        return cls.from_dict(json.loads(text))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_identity(self) -> bool:
        return self.coeffs.size == 2 and self.coeffs[0] == 0 and self.coeffs[1] == 1

    def __call__(self, z):
        out = _horner(self.coeffs, z)
        return out if np.ndim(out) else complex(out)

    def derivative(self, z):
        out = _horner(self.dcoeffs, z)
        return out if np.ndim(out) else complex(out)

    def quotient(self, z):
        """conj(omega'(z)) / omega'(z) at arbitrary points."""
        d = _horner(self.dcoeffs, z)
        out = np.conj(d) / d
        return out if np.ndim(out) else complex(out)

    def __repr__(self):
        return f"ConformalMap({self.coeffs.tolist()})"


def eval_map(omega: ConformalMap, z):
    return omega(z)


def eval_dmap(omega: ConformalMap, z):
    return omega.derivative(z)


@dataclass
class UnivalenceReport:
    passed: bool
    min_abs_derivative: float
    self_intersections: int
    closest_self_approach: float
    interior_critical_points: int
    reasons: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "min_abs_derivative": self.min_abs_derivative,
            "self_intersections": self.self_intersections,
            "closest_self_approach": self.closest_self_approach,
            "interior_critical_points": self.interior_critical_points,
            "reasons": list(self.reasons),
        }

    def require(self) -> "UnivalenceReport":
        if not self.passed:
            raise NotUnivalent("; ".join(self.reasons), report=self)
        return self


def _segments_cross(P: np.ndarray) -> np.ndarray:
    """Boolean matrix of proper crossings between closed-polygon segments."""
    A = P
    B = np.roll(P, -1)
    n = P.size

    def orient(p, q, r):
        return np.sign(((q - p).conjugate() * (r - p)).imag)

    a, b = A[:, None], B[:, None]
    c, d = A[None, :], B[None, :]
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    cross = (o1 * o2 < 0) & (o3 * o4 < 0)
    idx = np.arange(n)
    sep = np.abs(idx[:, None] - idx[None, :])
    sep = np.minimum(sep, n - sep)
    return cross & (sep > 1)


def univalence_check(omega: ConformalMap, n_theta: int = 512, n_r: int = 64,
                     n_boundary: int = 1024) -> UnivalenceReport:
    """Sampled univalence guard.

    Checks that ``|omega'|`` stays away from zero on an ``n_theta x n_r``
    polar sample of the closed disk, that the boundary polygon through
    ``n_boundary`` samples of ``omega(exp(i theta))`` has no crossing segments,
    and that ``omega'`` has winding number zero on the circle (no critical
    point inside the disk).
    """
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    r = np.linspace(0.0, 1.0, n_r)
    z = r[None, :] * np.exp(1j * theta)[:, None]
    min_d = float(np.min(np.abs(omega.derivative(z))))

    tb = 2 * np.pi * np.arange(n_boundary) / n_boundary
    w = np.exp(1j * tb)
    P = omega(w)
    crossings = int(np.count_nonzero(np.triu(_segments_cross(P))))

    idx = np.arange(n_boundary)
    sep = np.abs(idx[:, None] - idx[None, :])
    sep = np.minimum(sep, n_boundary - sep)
    dist = np.abs(P[:, None] - P[None, :])
    far = sep >= n_boundary // 8
    closest = float(np.min(dist[far])) if np.any(far) else float("nan")

    d_boundary = omega.derivative(w)
    if np.min(np.abs(d_boundary)) > 0:
        steps = np.angle(np.roll(d_boundary, -1) / d_boundary)
        winding = int(round(np.sum(steps) / (2 * np.pi)))
    else:
        winding = -1

    reasons = []
    if min_d <= DERIVATIVE_TOL:
        reasons.append(f"derivative vanishes on the closed disk (min |omega'| = {min_d:.3g})")
    if crossings:
        reasons.append(f"boundary curve self-intersects ({crossings} crossing segment pairs)")
    if winding != 0:
        reasons.append("omega' has zeros inside the disk" if winding > 0
                       else "omega' vanishes on the unit circle")
    return UnivalenceReport(
        passed=not reasons,
        min_abs_derivative=min_d,
        self_intersections=crossings,
        closest_self_approach=closest,
        interior_critical_points=max(winding, 0),
        reasons=reasons,
    )


def quotient_field(omega: ConformalMap, grid: PolarGrid) -> FourierRadialField:
    """The unimodular field conj(omega')/omega' analyzed on ``grid``."""
    d = omega.derivative(grid.points)
    if np.min(np.abs(d)) < DERIVATIVE_TOL:
        raise DerivativeVanishes(f"|omega'| = {np.min(np.abs(d)):.3g} on the grid")
    return analyze(np.conj(d) / d, grid)


@dataclass
class BoundaryDataSpec:
    """Boundary data in one of three forms.

    ``kind="modes"``
        Fourier modes of ``H = h o omega`` on the unit circle.
    ``kind="samples"``
        Values of ``h`` at ``omega(exp(2 pi i m / M))``, ``m = 0..M-1``.
    ``kind="exact"``
        Trace on the boundary curve of the kernel element built by
        :func:`ellip.bipoly.exact_solution` from ``g``, ``h`` and ``tau``.

    ``alpha`` is user-declared Hoelder-exponent metadata; it is reported, not
    verified.
    """

    kind: str
    modes: dict[int, complex] | None = None
    samples: np.ndarray | None = None
    g: list[complex] | None = None
    h: list[complex] | None = None
    tau: float | None = None
    alpha: float | None = None

    def __post_init__(self):
        if self.kind not in ("modes", "samples", "exact"):
            raise ValueError(f"boundary kind must be modes, samples or exact, got {self.kind!r}")
        if self.kind == "modes" and self.modes is None:
            raise ValueError("boundary kind 'modes' needs a 'modes' mapping")
        if self.kind == "samples":
            if self.samples is None:
                raise ValueError("boundary kind 'samples' needs 'samples'")
            self.samples = np.asarray(self.samples, dtype=complex).ravel()
        if self.kind == "exact":
            if self.g is None and self.h is None:
                raise ValueError("boundary kind 'exact' needs coefficient lists 'g' and/or 'h'")
            self.g = [complex(v) for v in (self.g or [])]
            self.h = [complex(v) for v in (self.h or [])]

    @classmethod
    def from_modes(cls, modes) -> "BoundaryDataSpec":
        if isinstance(modes, TrigPolynomial):
            modes = modes.coeffs
        return cls("modes", modes={int(k): complex(v) for k, v in modes.items()})

    @classmethod
    def from_samples(cls, samples) -> "BoundaryDataSpec":
        return cls("samples", samples=samples)

    @classmethod
    def from_exact(cls, g, h, tau: float) -> "BoundaryDataSpec":
        return cls("exact", g=list(g), h=list(h), tau=tau)

    def exact_function(self, tau: float | None = None):
        """The bi-polynomial kernel element behind an ``exact`` spec."""
        if self.kind != "exact":
            raise ValueError("only 'exact' boundary specs carry an exact solution")
        t = self.tau if tau is None else tau
        if t is None:
            raise ValueError("exact boundary spec needs tau")
        return exact_solution(self.g, self.h, t)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "BoundaryDataSpec":
        kind = d.get("type", d.get("kind"))

        def cpx(v):
            if isinstance(v, (list, tuple)):
                return complex(v[0], v[1] if len(v) > 1 else 0.0)
            return complex(v)

        alpha = d.get("alpha")
        if kind == "modes":
            spec = cls("modes", modes={int(k): cpx(v) for k, v in d["modes"].items()})
        elif kind == "samples":
            spec = cls("samples", samples=[cpx(v) for v in d["samples"]])
        elif kind == "exact":
            spec = cls("exact", g=[cpx(v) for v in d.get("g", [])],
                       h=[cpx(v) for v in d.get("h", [])], tau=d.get("tau"))
        else:
            raise ValueError(f"boundary type must be modes, samples or exact, got {kind!r}")
        spec.alpha = alpha
        return spec

    def to_dict(self) -> dict[str, Any]:
        def pair(v):
            return [float(v.real), float(v.imag)]

        out: dict[str, Any] = {"type": self.kind}
        if self.kind == "modes":
            out["modes"] = {str(k): pair(v) for k, v in sorted(self.modes.items())}
        elif self.kind == "samples":
            out["samples"] = [pair(v) for v in self.samples]
        else:
            out["g"] = [pair(v) for v in self.g]
            out["h"] = [pair(v) for v in self.h]
            if self.tau is not None:
                out["tau"] = self.tau
        if self.alpha is not None:
            out["alpha"] = self.alpha
        return out


def transport_boundary(spec: BoundaryDataSpec, omega: ConformalMap | None, M: int,
                       max_mode: int | None = None, tau: float | None = None) -> TrigPolynomial:
    """Fourier modes of ``H(theta) = h(omega(exp(i theta)))`` from ``M`` uniform samples.

    Direct modes pass through untouched. ``max_mode`` (default ``M//2 - 1``)
    truncates the sampled variants.
    """
    if omega is None:
        omega = ConformalMap.identity()
    if spec.kind == "modes":
        return TrigPolynomial(spec.modes)
    if spec.kind == "samples":
        if spec.samples.size != M:
            raise SampleCountMismatch(f"got {spec.samples.size} boundary samples, expected M={M}")
        return TrigPolynomial.from_samples(spec.samples, max_mode, tol=1e-15 * max(1.0, float(np.max(np.abs(spec.samples)))))
    f = spec.exact_function(tau)
    theta = 2 * np.pi * np.arange(M) / M
    vals = f(omega(np.exp(1j * theta)))
    return TrigPolynomial.from_samples(vals, max_mode, tol=1e-15 * max(1.0, float(np.max(np.abs(vals)))))
