"""Ellipticity tests for constant-coefficient equations a f_xx + 2b f_xy + c f_yy = 0.

The equation is elliptic when neither root of a*l**2 + 2*b*l + c = 0 is real,
and strongly elliptic when the two roots sit in opposite half-planes.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .exceptions import DegenerateEquation, Inconclusive

#: roots with |Im| below this are treated as real
REAL_ROOT_TOL = 1e-12


@dataclass(frozen=True)
class EquationCoefficients:
    a: complex
    b: complex
    c: complex

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if self.a == 0 and self.c == 0:
            raise DegenerateEquation("coefficients a and c are both zero")

    def scaled(self, s: complex) -> "EquationCoefficients":
        return EquationCoefficients(s * self.a, s * self.b, s * self.c)


@dataclass(frozen=True)
class Classification:
    roots: tuple[complex, complex]
    elliptic: bool
    strongly_elliptic: bool
    #: True when the roots belong to c*l**2 + 2*b*l + a (a == 0 case)
    reversed_roles: bool = False

    def to_dict(self) -> dict:
        return {
            "roots": [[r.real, r.imag] for r in self.roots],
            "elliptic": self.elliptic,
            "strongly_elliptic": self.strongly_elliptic,
            "reversed_roles": self.reversed_roles,
        }


def _quadratic_roots(a: complex, b: complex, c: complex) -> tuple[complex, complex]:
    # a*l^2 + 2*b*l + c with a != 0, cancellation-free form
    sq = cmath.sqrt(b * b - a * c)
    if abs(b + sq) >= abs(b - sq):
        q = -(b + sq)
    else:
        q = -(b - sq)
    if q == 0:
        # b == 0 and b^2 == ac, hence c == 0: double root at the origin
        return 0j, 0j
    return q / a, c / q


def characteristic_roots(coeffs: EquationCoefficients) -> tuple[complex, complex]:
    """Roots of ``a*l**2 + 2*b*l + c``.

    When ``a == 0`` the roles of ``a`` and ``c`` are swapped (the equation is
    read with x and y exchanged), so the returned pair always has two finite
    members.
    """
    a, b, c = coeffs.a, coeffs.b, coeffs.c
    if a == 0 and c == 0:
        raise DegenerateEquation("coefficients a and c are both zero")
    if a == 0:
        return _quadratic_roots(c, b, a)
    return _quadratic_roots(a, b, c)


def root_residual(coeffs: EquationCoefficients, root: complex) -> float:
    """Scaled residual |a l^2 + 2 b l + c| / ((|a|+|b|+|c|)(1+|l|^2))."""
    a, b, c = coeffs.a, coeffs.b, coeffs.c
    if a == 0:
        a, c = c, a
    scale = (abs(a) + abs(b) + abs(c)) * (1.0 + abs(root) ** 2)
    return abs((a * root + 2 * b) * root + c) / scale


def classify(coeffs: EquationCoefficients) -> Classification:
    """Classify ``coeffs`` as elliptic / strongly elliptic.

    Raises :class:`Inconclusive` when a root is within ``REAL_ROOT_TOL`` of the
    real axis; the offending roots are attached to the exception.
    """
    roots = characteristic_roots(coeffs)
    if any(abs(r.imag) < REAL_ROOT_TOL for r in roots):
        raise Inconclusive(
            f"root(s) {roots} within {REAL_ROOT_TOL:g} of the real axis; "
            "ellipticity cannot be certified",
            roots=roots,
        )
    strongly = roots[0].imag * roots[1].imag < 0
    return Classification(
        roots=roots,
        elliptic=True,
        strongly_elliptic=strongly,
        reversed_roles=coeffs.a == 0,
    )


def canonical_coefficients(tau: float) -> EquationCoefficients:
    """(x, y) coefficients of 4*(dd_bar + tau*d^2): a = 1+tau, b = -i*tau, c = 1-tau."""
    return EquationCoefficients(1.0 + tau, -1j * tau, 1.0 - tau)
