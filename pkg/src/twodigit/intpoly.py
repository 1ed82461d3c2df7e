"""Integer polynomials: exact expansion test, opposites, isotropy.

Coefficients are stored in ascending order, ``coeffs[0]`` is the free term.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True, order=True)
class IntPolynomial:
    """Integer polynomial with ascending coefficients.

    Trailing zeros are stripped so the last entry is the leading coefficient.
    """

    coeffs: tuple

    def __init__(self, coeffs: Sequence[int]):
        c = [int(x) for x in coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        if not c or (len(c) == 1 and c[0] == 0):
            raise ValidationError("zero polynomial")
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1]

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"

    def to_text(self) -> str:
        return ",".join(str(c) for c in self.coeffs)


def as_poly(p) -> IntPolynomial:
    if isinstance(p, IntPolynomial):
        return p
    if isinstance(p, str):
        return parse_poly(p)
    return IntPolynomial(p)


def parse_poly(text: str) -> IntPolynomial:
    """Parse comma separated ascending coefficients, e.g. ``"2,2,2,1"``."""
    try:
        return IntPolynomial([int(t) for t in text.strip().split(",")])
    except ValueError as exc:
        raise ValidationError(f"bad polynomial text {text!r}") from exc


def format_poly(p, var: str = "z") -> str:
    """Human readable form with descending powers, e.g. ``z^3+2z+2``."""
    p = as_poly(p)
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if a == 1 else f"{a}{mono}"
        parts.append((sign, body))
    out = "".join(s + b for s, b in parts)
    return out[1:] if out.startswith("+") else out


def is_admissible(p) -> bool:
    """Leading coefficient 1 and free term of absolute value 2."""
    p = as_poly(p)
    return p.degree >= 1 and p.lead == 1 and abs(p.coeffs[0]) == 2


def evaluate(p, z):
    """Horner evaluation; exact when ``z`` is an int or Fraction."""
    p = as_poly(p)
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * z + c
    return acc


def schur_cohn_step(f: Sequence[int]) -> list:
    """One reduction of the Schur-Cohn recursion.

    ``f`` holds ascending coefficients of degree n; the result has degree
    n - 1 and is Schur stable iff ``f`` is, provided ``|f[0]| < |f[n]|``.
    """
    n = len(f) - 1
    f0, fn = f[0], f[n]
    return [fn * f[i + 1] - f0 * f[n - 1 - i] for i in range(n)]


def is_expanding(p) -> bool:
    """True iff every root has modulus strictly greater than one.

    Exact: runs the Schur-Cohn recursion on the reversed polynomial in
    integer arithmetic. Roots on the unit circle give False.
    """
    p = as_poly(p)
    if p.degree < 1:
        raise ValidationError("degree 0 polynomial has no roots to test")
    if p.coeffs[0] == 0:
        return False
    # reversed polynomial: roots inside the unit disc <=> roots of p outside
    f = list(reversed(p.coeffs))
    while len(f) > 1:
        if abs(f[0]) >= abs(f[-1]):
            return False
        f = schur_cohn_step(f)
        g = math.gcd(*f)
        if g > 1:
            f = [x // g for x in f]
    return f[0] != 0


class RootSpectrum(NamedTuple):
    roots: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    simple: np.ndarray


def root_spectrum(p) -> RootSpectrum:
    """Numerical roots with a-posteriori modulus intervals.

    Inclusion discs use the Weierstrass correction: the disc of radius
    ``d * |W_i|`` around each approximation contains a root, one per disc
    when the discs are pairwise disjoint. Used only as a cross-check.
    """
    p = as_poly(p)
    d = p.degree
    c = np.array([float(x) for x in reversed(p.coeffs)])
    z = np.roots(c).astype(complex)
    # a few Newton polishing steps
    dc = np.polyder(c)
    for _ in range(3):
        fz = np.polyval(c, z)
        dz = np.polyval(dc, z)
        ok = dz != 0
        z[ok] = z[ok] - fz[ok] / dz[ok]
    lead = float(p.lead)
    rad = np.zeros(d)
    for i in range(d):
        den = lead * np.prod([z[i] - z[j] for j in range(d) if j != i]) if d > 1 else lead
        w = abs(np.polyval(c, z[i]) / den) if den != 0 else np.inf
        rad[i] = d * w + 1e-12 * max(1.0, abs(z[i]))
    simple = np.ones(d, dtype=bool)
    for i in range(d):
        for j in range(d):
            if i != j and abs(z[i] - z[j]) <= rad[i] + rad[j]:
                simple[i] = False
    mod = np.abs(z)
    return RootSpectrum(z, np.maximum(mod - rad, 0.0), mod + rad, simple)


def mahler_measure(p) -> float:
    """|a_d| times the product of max(1, |root|).

    For an expanding polynomial this is exactly ``|a_0|``.
    """
    p = as_poly(p)
    if p.degree == 0:
        return float(abs(p.lead))
    if is_expanding(p):
        return float(abs(p.coeffs[0]))
    rs = root_spectrum(p)
    mods = np.abs(rs.roots)
    return float(abs(p.lead) * np.prod(np.maximum(1.0, mods)))


def opposite(p) -> IntPolynomial:
    """Polynomial whose roots are the negated roots of ``p``."""
    p = as_poly(p)
    d = p.degree
    return IntPolynomial([(-1) ** (d - k) * c for k, c in enumerate(p.coeffs)])


def class_key(p) -> IntPolynomial:
    """Canonical representative of ``{p, opposite(p)}``.

    The lexicographically smaller ascending coefficient vector wins.
    """
    p = as_poly(p)
    q = opposite(p)
    return min(p, q, key=lambda r: r.coeffs)


def substitute_power(q, k: int) -> IntPolynomial:
    """Expand ``q(z^k)``."""
    q = as_poly(q)
    out = [0] * (q.degree * k + 1)
    for i, c in enumerate(q.coeffs):
        out[i * k] = c
    return IntPolynomial(out)


# monic quadratics t^2 + b t + c with all roots of modulus sqrt(2)
ISOTROPIC_QUADRATICS = (
    IntPolynomial([2, 0, 1]),
    IntPolynomial([-2, 0, 1]),
    IntPolynomial([2, 1, 1]),
    IntPolynomial([2, -1, 1]),
    IntPolynomial([2, 2, 1]),
    IntPolynomial([2, -2, 1]),
)


def _catalog_match(p: IntPolynomial):
    d = p.degree
    c = p.coeffs
    if d % 2 == 1:
        if all(x == 0 for x in c[1:d]) and abs(c[0]) == 2:
            return (None, 1)
        return None
    k = d // 2
    if any(c[i] != 0 for i in range(1, d) if i != k):
        return None
    q = IntPolynomial([c[0], c[k], c[d]])
    if q in ISOTROPIC_QUADRATICS:
        return (q, k)
    return None


def is_isotropic(p, tol: float = 1e-7) -> bool:
    """True iff all roots have the same modulus.

    Admissible input is decided against the finite catalog of isotropic
    forms; anything else falls back to certified numeric intervals.
    """
    p = as_poly(p)
    if p.degree < 1:
        return False
    if is_admissible(p) and is_expanding(p):
        return _catalog_match(p) is not None
    rs = root_spectrum(p)
    return bool(rs.hi.max() - rs.lo.min() < tol)


def isotropic_quadratic_factor(p) -> Optional[tuple]:
    """Return ``(q, k)`` with ``p(z) = q(z^k)`` for even degree 2k.

    Returns None for odd degree, where the only isotropic admissible
    polynomials are ``z^d +- 2``.
    """
    p = as_poly(p)
    if not is_isotropic(p):
        raise ValidationError(f"{format_poly(p)} is not isotropic")
    if p.degree % 2 == 1:
        return None
    k = p.degree // 2
    c = p.coeffs
    if any(c[i] != 0 for i in range(1, p.degree) if i != k):
        raise ValidationError(f"{format_poly(p)} is not of the form q(z^{k})")
    q = IntPolynomial([c[0], c[k], c[-1]])
    return q, k
