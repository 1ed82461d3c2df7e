"""Enumeration of monic expanding integer polynomials with free term +-2.

The search fixes coefficients in layers from the outside in: layer L is
the pair ``(a_{d-L}, a_L)``. After each layer the L-th Schur-Cohn
necessary condition is checked. That condition only involves layers up
to L and is affine in the newest pair, so admissible values of ``a_L``
form an integer interval for each ``a_{d-L}``. Every surviving candidate
is still passed through the full exact test.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import intpoly
from .errors import BudgetError, ValidationError
from .intpoly import IntPolynomial

MAX_DEGREE = 8
DEEP_DEGREE = 6


def coefficient_bound(d: int, k: int) -> int:
    """Bound on ``|a_{d-k}|`` for 1 <= k <= d-1.

    ``|a_{d-k}| <= e_k(|l_1|, ..., |l_d|)`` with moduli > 1 and product 2.
    In log-moduli ``e_k`` is a sum of exponentials of linear forms, hence
    convex, so on the simplex ``t_i >= 0, sum t_i = log 2`` its maximum is
    at a vertex ``(2, 1, ..., 1)``, giving ``C(d-1, k) + 2 C(d-1, k-1)``.
    All moduli are strictly above one, so the point is interior and the
    bound is strict. For k = 1 this is ``|a_{d-1}| <= d``.
    """
    if not 1 <= k <= d - 1:
        raise ValueError("k out of range")
    return math.comb(d - 1, k) + 2 * math.comb(d - 1, k - 1) - 1


def baseline_bound(d: int, k: int) -> int:
    """Looser Vieta bound ``|a_k| <= 2 C(d, k)`` (all moduli below 2)."""
    return 2 * math.comb(d, k)


def _level_values(f, level):
    """Run ``level`` unnormalised reductions; return (const, lead)."""
    for _ in range(level):
        f = intpoly.schur_cohn_step(f)
    return f[0], f[-1]


def _interval_ceil_floor(lo_num, hi_num, den):
    # integers y with lo_num < den*y < hi_num, den != 0
    if den < 0:
        lo_num, hi_num, den = -hi_num, -lo_num, -den
    lo = lo_num // den + 1
    hi = -((-hi_num) // den) - 1
    return lo, hi


def _affine_level(f, L, i, j):
    """Coefficients of the level-L constant as an affine function of the
    entries ``f[i], f[j]`` with the inner unknowns set to zero.

    Returns ``(c, gx, gy, lead)``. Joint affinity is checked at (1, 1).
    """
    def at(x, y):
        g = list(f)
        g[j] = y
        g[i] = x
        return _level_values(g, L)
    c, lead = at(0, 0)
    gx = at(1, 0)[0] - c
    gy = at(0, 1)[0] - c if j != i else 0
    if j != i:
        assert at(1, 1)[0] == c + gx + gy, "level constant not affine"
    else:
        assert at(2, 0)[0] == c + 2 * gx, "level constant not affine"
    return c, gx, gy, lead


def _strict_range(c, g, lead, bound):
    """Integers t in [-bound, bound] with |c + g t| < lead."""
    if g == 0:
        return range(-bound, bound + 1) if abs(c) < lead else range(0)
    lo, hi = _interval_ceil_floor(-lead - c, lead - c, g)
    return range(max(lo, -bound), min(hi, bound) + 1)


def _search(d, a0, first=None):
    """Depth-first search; returns coefficient tuples (ascending)."""
    n = d
    npairs = (d - 1) // 2
    middle = d % 2 == 0
    out = []
    # f is the reversed polynomial: f[i] = a_{d-i}; inner entries stay 0
    f = [0] * (n + 1)
    f[0] = 1
    f[n] = a0

    def finish():
        coeffs = list(reversed(f))
        if intpoly.is_expanding(IntPolynomial(coeffs)):
            out.append(tuple(coeffs))

    def mid_layer(L):
        c, g, _, lead = _affine_level(f, L, L, L)
        if lead > 0:
            for z in _strict_range(c, g, lead, coefficient_bound(d, L)):
                f[L] = z
                finish()
        f[L] = 0

    def rec(L):
        if L > npairs:
            if middle:
                mid_layer(L)
            else:
                finish()
            return
        bx = coefficient_bound(d, L)        # bound on a_{d-L} = f[L]
        by = coefficient_bound(d, d - L)    # bound on a_L = f[n-L]
        c, gx, gy, lead = _affine_level(f, L, L, n - L)
        if lead > 0:
            xs = range(-bx, bx + 1) if (L > 1 or first is None) else [first]
            for x in xs:
                if abs(x) > bx:
                    continue
                f[L] = x
                for y in _strict_range(c + gx * x, gy, lead, by):
                    f[n - L] = y
                    rec(L + 1)
                f[n - L] = 0
        f[L] = 0

    if d == 1:
        finish()
    elif npairs == 0:
        mid_layer(1)
    else:
        rec(1)
    return out


def _task(args):
    d, a0, first = args
    return _search(d, a0, first)


def brute_force(d: int) -> list:
    """Unpruned search over the baseline Vieta box; for regression tests."""
    import itertools

    ranges = [range(-baseline_bound(d, k), baseline_bound(d, k) + 1) for k in range(1, d)]
    out = []
    for a0 in (-2, 2):
        for mid in itertools.product(*ranges):
            p = IntPolynomial((a0,) + mid + (1,))
            if intpoly.is_expanding(p):
                out.append(p)
    return sorted(out, key=lambda p: p.coeffs)


@dataclass
class Catalog:
    degree: int
    polys: list
    classes: list = field(default_factory=list)

    @property
    def n_polys(self):
        return len(self.polys)

    @property
    def n_classes(self):
        return len(self.classes)

    @property
    def n_self_opposite(self):
        return sum(1 for p in self.polys if intpoly.opposite(p) == p)


def enumerate_expanding(d: int, workers: int = 1, deep: bool = False) -> Catalog:
    """All monic expanding integer polynomials of degree d with free term +-2.

    Work is split by (sign of a_0, value of a_{d-1}) and merged in sorted
    order, so the result does not depend on ``workers``.
    """
    if d < 1:
        raise ValidationError("degree must be at least 1")
    if d > MAX_DEGREE:
        raise BudgetError(f"degree {d} exceeds the supported maximum {MAX_DEGREE}")
    if d > DEEP_DEGREE and not deep:
        raise BudgetError(f"degree {d} needs the deep flag")
    if d >= 3:
        b = coefficient_bound(d, 1)
        tasks = [(d, a0, x) for a0 in (-2, 2) for x in range(-b, b + 1)]
    else:
        tasks = [(d, a0, None) for a0 in (-2, 2)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_task, tasks))
    else:
        parts = [_task(t) for t in tasks]
    found = sorted({c for part in parts for c in part})
    polys = [IntPolynomial(c) for c in found]
    classes = sorted({intpoly.class_key(p) for p in polys}, key=lambda p: p.coeffs)
    return Catalog(d, polys, classes)


def count_classes(d: int, **kw) -> int:
    """Number of classes under the equal-or-opposite rule."""
    return enumerate_expanding(d, **kw).n_classes


def geometric_key(p):
    """Class key with isotropic classes merged by isotropic type.

    Isotropic attractors of one dimension come in at most three affine
    types, so e.g. ``z^2 + 2`` and ``z^2 - 2`` (both squares) share a key
    although they are neither equal nor opposite.
    """
    from .attract import classify_isotropic

    cls = classify_isotropic(p)
    if cls.tag == "Anisotropic":
        return ("poly", intpoly.class_key(p).coeffs)
    return ("isotropic", cls.tag, cls.k)


def geometric_classes(catalog: Catalog) -> list:
    keys = {}
    for p in catalog.classes:
        keys.setdefault(geometric_key(p), []).append(p)
    return [keys[k] for k in sorted(keys, key=str)]


def self_opposite_check(catalog: Catalog, half: Catalog | None) -> bool:
    """Self-opposite members of even degree are exactly ``q(z^2)`` for q in
    the half-degree catalog."""
    selfopp = {p for p in catalog.polys if intpoly.opposite(p) == p}
    if catalog.degree % 2:
        return not selfopp
    expected = {intpoly.substitute_power(q, 2) for q in half.polys}
    return selfopp == expected


def theoretical_upper_bound(d: int) -> float:
    """The bound ``2^{d(1 + 16 ln ln d / ln d)}`` on the number of classes."""
    if d < 3:
        raise ValidationError("bound is defined for d >= 3")
    return 2.0 ** (d * (1 + 16 * math.log(math.log(d)) / math.log(d)))
