"""Exact algebra of polynomials in z and conj(z) and the closed-form disk operators.

Every field produced by the perturbation recursion on the unit disk with
trigonometric-polynomial boundary data is a finite sum of monomials
``z**a * conj(z)**b``. This module carries those sums exactly (up to double
round-off on the coefficients) and provides the closed-form action of the
Poisson operator ``P``, the volume potential ``K`` and its derivatives
``K_z``, ``K_zbar`` on them. It is the ground truth the spectral operators are
checked against.

Derivative identities used here (verified monomial by monomial):

* ``K_z = d/dz o K``
* ``d/dzbar o K = -I + K_zbar``

The second one carries a minus sign on the identity term: ``K[1] = 0`` so
``d/dzbar K[1] = 0`` while ``K_zbar[1] = 1``.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Mapping

import numpy as np

#: coefficient-wise equality tolerance
EQ_TOL = 1e-13


def _harmonic_monomial(m: int) -> tuple[int, int]:
    """Exponents of the harmonic extension of exp(i*m*theta): z**m or conj(z)**-m."""
    return (m, 0) if m >= 0 else (0, -m)


class BiPolynomial:
    """Finite sum of ``coef * z**a * conj(z)**b``.

    Stored as a mapping ``(a, b) -> complex`` with exact zeros removed.
    Instances are treated as immutable values.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[tuple[int, int], complex] | None = None):
        c = {}
        for (a, b), v in (coeffs or {}).items():
            a, b = int(a), int(b)
            if a < 0 or b < 0:
                raise ValueError(f"negative exponent ({a}, {b})")
            v = complex(v)
            if v != 0:
                c[(a, b)] = c.get((a, b), 0j) + v
        self._c = {k: v for k, v in c.items() if v != 0}

    # constructors -------------------------------------------------------
    @classmethod
    def constant(cls, value: complex) -> "BiPolynomial":
        return cls({(0, 0): value})

    @classmethod
    def monomial(cls, a: int, b: int, coef: complex = 1.0) -> "BiPolynomial":
        return cls({(a, b): coef})

    @classmethod
    def z(cls) -> "BiPolynomial":
        return cls.monomial(1, 0)

    @classmethod
    def zbar(cls) -> "BiPolynomial":
        return cls.monomial(0, 1)

    @classmethod
    def random(cls, rng: np.random.Generator, max_a: int, max_b: int,
               density: float = 1.0) -> "BiPolynomial":
        """Random coefficients in the unit box for exponents a <= max_a, b <= max_b."""
        out = {}
        for a in range(max_a + 1):
            for b in range(max_b + 1):
                re, im = rng.uniform(-1.0, 1.0, size=2)
                if rng.random() < density:
                    out[(a, b)] = complex(re, im)
        return cls(out)

    # mapping-like access ------------------------------------------------
    @property
    def coeffs(self) -> dict[tuple[int, int], complex]:
        return dict(self._c)

    def items(self):
        return self._c.items()

    def __getitem__(self, key: tuple[int, int]) -> complex:
        return self._c.get(key, 0j)

    def __len__(self) -> int:
        return len(self._c)

    def __iter__(self):
        return iter(self._c)

    @property
    def degree(self) -> int:
        return max((a + b for a, b in self._c), default=0)

    @property
    def max_mode(self) -> int:
        """Largest |a - b| over the support (the angular bandwidth)."""
        return max((abs(a - b) for a, b in self._c), default=0)

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(v) <= tol for v in self._c.values())

    def prune(self, tol: float = EQ_TOL) -> "BiPolynomial":
        return BiPolynomial({k: v for k, v in self._c.items() if abs(v) > tol})

    # arithmetic ----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, BiPolynomial):
            other = BiPolynomial.constant(other)
        c = defaultdict(complex, self._c)
        for k, v in other._c.items():
            c[k] += v
        return BiPolynomial(c)

    __radd__ = __add__

    def __neg__(self):
        return BiPolynomial({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, BiPolynomial):
            other = BiPolynomial.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, BiPolynomial):
            s = complex(other)
            return BiPolynomial({k: s * v for k, v in self._c.items()})
        c = defaultdict(complex)
        for (a1, b1), v1 in self._c.items():
            for (a2, b2), v2 in other._c.items():
                c[(a1 + a2, b1 + b2)] += v1 * v2
        return BiPolynomial(c)

    __rmul__ = __mul__

    def __truediv__(self, s):
        return self * (1.0 / complex(s))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = BiPolynomial.constant(1.0)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> "BiPolynomial":
        """Complex conjugate function: swaps the roles of z and conj(z)."""
        return BiPolynomial({(b, a): v.conjugate() for (a, b), v in self._c.items()})

    def max_abs_diff(self, other: "BiPolynomial") -> float:
        keys = set(self._c) | set(other._c)
        return max((abs(self[k] - other[k]) for k in keys), default=0.0)

    def __eq__(self, other):
        if not isinstance(other, BiPolynomial):
            try:
                other = BiPolynomial.constant(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.max_abs_diff(other) <= EQ_TOL

    __hash__ = None

    def __repr__(self):
        if not self._c:
            return "BiPolynomial(0)"
        terms = " + ".join(
            f"({v.real:.6g}{v.imag:+.6g}j)*z^{a}*zb^{b}" for (a, b), v in sorted(self._c.items())
        )
        return f"BiPolynomial({terms})"

    # evaluation ------------------------------------------------------------
    def __call__(self, z):
        return evaluate(self, z)

    def on_circle(self) -> dict[int, complex]:
        """Laurent coefficients after substituting conj(z) = 1/z (restriction to |z| = 1)."""
        c = defaultdict(complex)
        for (a, b), v in self._c.items():
            c[a - b] += v
        return {k: v for k, v in c.items() if v != 0}

    def trace(self) -> "TrigPolynomial":
        """Boundary trace on the unit circle as a trigonometric polynomial."""
        return TrigPolynomial(self.on_circle())


class TrigPolynomial:
    """Finite Fourier sum ``sum_k c_k exp(i*k*theta)`` on the unit circle."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, complex] | None = None):
        self._c = {int(k): complex(v) for k, v in (coeffs or {}).items() if complex(v) != 0}

    @classmethod
    def from_samples(cls, samples, max_mode: int | None = None, tol: float = 0.0) -> "TrigPolynomial":
        """Discrete Fourier analysis of ``M`` uniform samples at theta_m = 2*pi*m/M.

        Modes with ``|k| > max_mode`` are discarded (default ``M//2 - 1``).
        """
        samples = np.asarray(samples, dtype=complex).ravel()
        M = samples.size
        if max_mode is None:
            max_mode = M // 2 - 1
        spec = np.fft.fft(samples) / M
        out = {}
        for k in range(-max_mode, max_mode + 1):
            v = spec[k % M]
            if abs(v) > tol:
                out[k] = v
        return cls(out)

    @property
    def coeffs(self) -> dict[int, complex]:
        return dict(self._c)

    def items(self):
        return self._c.items()

    def __getitem__(self, k: int) -> complex:
        return self._c.get(k, 0j)

    def __len__(self):
        return len(self._c)

    def __iter__(self):
        return iter(self._c)

    @property
    def max_mode(self) -> int:
        return max((abs(k) for k in self._c), default=0)

    def samples(self, M: int) -> np.ndarray:
        theta = 2 * np.pi * np.arange(M) / M
        return self(theta)

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape, dtype=complex)
        for k, v in self._c.items():
            out += v * np.exp(1j * k * theta)
        return out

    def sup_norm(self, M: int = 1024) -> float:
        return float(np.max(np.abs(self.samples(M)))) if self._c else 0.0

    def max_abs_diff(self, other: "TrigPolynomial") -> float:
        keys = set(self._c) | set(other._c)
        return max((abs(self[k] - other[k]) for k in keys), default=0.0)

    def __eq__(self, other):
        if isinstance(other, Mapping):
            other = TrigPolynomial(other)
        if not isinstance(other, TrigPolynomial):
            return NotImplemented
        return self.max_abs_diff(other) <= EQ_TOL

    __hash__ = None

    def __repr__(self):
        return f"TrigPolynomial({dict(sorted(self._c.items()))})"


# ---------------------------------------------------------------------------
# differential operators

def dz(p: BiPolynomial) -> BiPolynomial:
    return BiPolynomial({(a - 1, b): a * v for (a, b), v in p.items() if a > 0})


def dzbar(p: BiPolynomial) -> BiPolynomial:
    return BiPolynomial({(a, b - 1): b * v for (a, b), v in p.items() if b > 0})


def apply_L(p: BiPolynomial, tau: float) -> BiPolynomial:
    """Canonical operator dd_bar + tau*d^2."""
    return dz(dzbar(p)) + tau * dz(dz(p))


def exact_solution(g_coeffs: Iterable[complex], h_coeffs: Iterable[complex],
                   tau: float) -> BiPolynomial:
    """``sum g_k (z - tau*zbar)**k + sum conj(h_m) zbar**m``, a kernel element of L."""
    w = BiPolynomial({(1, 0): 1.0, (0, 1): -tau})
    out = BiPolynomial()
    wk = BiPolynomial.constant(1.0)
    for k, g in enumerate(g_coeffs):
        if k:
            wk = wk * w
        if g != 0:
            out = out + complex(g) * wk
    for m, h in enumerate(h_coeffs):
        if h != 0:
            out = out + BiPolynomial.monomial(0, m, complex(h).conjugate())
    return out


# ---------------------------------------------------------------------------
# closed-form disk operators

def P_exact(H: TrigPolynomial | Mapping[int, complex]) -> BiPolynomial:
    """Harmonic extension of a trigonometric polynomial into the disk."""
    if not isinstance(H, TrigPolynomial):
        H = TrigPolynomial(H)
    return BiPolynomial({_harmonic_monomial(k): v for k, v in H.items()})


def K_exact(p: BiPolynomial) -> BiPolynomial:
    """Zero-trace solution u of dd_bar u = -d p.

    Monomial rule: z^a zb^b -> (-z^a zb^(b+1) + harmonic(z^(a-b-1))) / (b+1),
    i.e. a particular solution minus the harmonic extension of its trace.
    """
    out = defaultdict(complex)
    for (a, b), v in p.items():
        s = v / (b + 1)
        out[(a, b + 1)] -= s
        out[_harmonic_monomial(a - b - 1)] += s
    return BiPolynomial(out)


def Kz_exact(p: BiPolynomial) -> BiPolynomial:
    return dz(K_exact(p))


def Kzbar_exact(p: BiPolynomial) -> BiPolynomial:
    return p + dzbar(K_exact(p))


def solve_disk_exact(H: TrigPolynomial | Mapping[int, complex], tau: float, n_max: int,
                     return_terms: bool = False, n_sup: tuple[int, int] = (33, 128)):
    """Run the perturbation recursion exactly on the disk (conformal map = identity).

    Returns ``(S, norms)`` where ``S = sum_{n<=n_max} F_n tau**n`` and ``norms``
    holds a sampled sup-norm estimate of every ``F_n``. With
    ``return_terms=True`` the list of terms ``F_n`` is appended.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    F = P_exact(H)
    terms = [F]
    for _ in range(n_max):
        F = K_exact(dz(F))
        terms.append(F)
    S = BiPolynomial()
    for n, Fn in enumerate(terms):
        S = S + Fn * (tau ** n)
    r = np.linspace(0.0, 1.0, n_sup[0])
    theta = 2 * np.pi * np.arange(n_sup[1]) / n_sup[1]
    pts = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    norms = [float(np.max(np.abs(evaluate(Fn, pts)))) if len(Fn) else 0.0 for Fn in terms]
    if return_terms:
        return S, norms, terms
    return S, norms


def evaluate(p: BiPolynomial, z):
    """Evaluate ``p`` at ``z`` (scalar or array) by nested Horner in z and conj(z)."""
    z_arr = np.asarray(z, dtype=complex)
    zb = np.conj(z_arr)
    by_b = defaultdict(dict)
    for (a, b), v in p.items():
        by_b[b][a] = v
    if not by_b:
        out = np.zeros_like(z_arr)
        return out if out.ndim else complex(out)
    out = np.zeros_like(z_arr)
    for b in range(max(by_b), -1, -1):
        row = by_b.get(b, {})
        inner = np.zeros_like(z_arr)
        for a in range(max(row, default=-1), -1, -1):
            inner = inner * z_arr + row.get(a, 0j)
        out = out * zb + inner
    return out if out.ndim else complex(out)


def substitute_circle(p: BiPolynomial) -> dict[int, complex]:
    """Laurent polynomial obtained by setting conj(z) = 1/z."""
    return p.on_circle()
