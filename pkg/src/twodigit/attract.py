"""Digit systems, their attractors as exact point clouds, and the
classification of isotropic two-digit attractors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import intpoly, mat
from .errors import BudgetError, ValidationError
from .intpoly import IntPolynomial

POINT_BUDGET = 2 ** 24
_INT64_SAFE = 2 ** 62


@dataclass(frozen=True)
class DigitSystem:
    """Expanding integer matrix ``M`` with a complete set of digits ``D``."""

    M: tuple
    D: tuple

    def __init__(self, M, D, check: bool = True):
        Mi = mat.as_int_matrix(M)
        Di = tuple(tuple(int(x) for x in dgt) for dgt in D)
        object.__setattr__(self, "M", tuple(tuple(r) for r in Mi))
        object.__setattr__(self, "D", Di)
        if check:
            d = len(Mi)
            if any(len(x) != d for x in Di):
                raise ValidationError("digit length does not match matrix size")
            if not intpoly.is_expanding(mat.char_poly(Mi)):
                raise ValidationError("matrix is not expanding")
            if not mat.validate_digits(Mi, [list(x) for x in Di]):
                raise ValidationError("digits are not in distinct residue classes")

    @property
    def dim(self) -> int:
        return len(self.M)

    @property
    def m(self) -> int:
        return abs(mat.determinant(self.M))

    def matrix(self) -> list:
        return [list(r) for r in self.M]


def default_system(p) -> DigitSystem:
    """Companion matrix of ``p`` with digits ``{0, e_1}``."""
    p = intpoly.as_poly(p)
    M = mat.companion(p)
    d = p.degree
    e1 = [1] + [0] * (d - 1)
    return DigitSystem(M, [[0] * d, e1])


def scaled_adjugate(M) -> np.ndarray:
    """Integer matrix ``|det M| * M^{-1}``."""
    m = abs(mat.determinant(M))
    inv = mat.inverse_rational(M)
    out = [[int(x * m) for x in row] for row in inv]
    return np.array(out, dtype=object)


@dataclass
class PointCloud:
    """Depth-k digit sums ``sum_{j<=k} M^{-j} a_j`` as ``num / den``."""

    depth: int
    num: np.ndarray
    den: int

    def __len__(self):
        return len(self.num)

    def as_float(self) -> np.ndarray:
        return np.asarray(self.num, dtype=float) / float(self.den)

    def as_fractions(self) -> list:
        return [tuple(Fraction(int(x), self.den) for x in row) for row in self.num]

    def as_set(self) -> set:
        return set(self.as_fractions())

    def to_text(self) -> str:
        lines = []
        for pt in self.as_fractions():
            lines.append(",".join(f"{q.numerator}/{q.denominator}" for q in pt))
        return "\n".join(lines) + ("\n" if lines else "")


def _cloud_numerators(sys: DigitSystem, depth: int, dedupe: bool):
    m = sys.m
    adj = scaled_adjugate(sys.matrix())
    D = np.array(sys.D, dtype=object)
    R = bounding_radius(sys)
    big = (m ** depth) * (R + 1) * (int(np.abs(adj).max()) + 1) * max(1, len(D)) > _INT64_SAFE
    dtype = object if big else np.int64
    adj = adj.astype(dtype)
    D = D.astype(dtype)
    N = np.zeros((1, sys.dim), dtype=dtype)
    for k in range(1, depth + 1):
        scale = m ** (k - 1)
        # N_k = adj (m^{k-1} a + N_{k-1}); digit a becomes the first digit
        blocks = [(N + scale * a) @ adj.T for a in D]
        N = np.concatenate(blocks, axis=0)
        if dedupe and dtype is not object:
            N = np.unique(N, axis=0)
        elif dedupe:
            N = np.array(sorted({tuple(r) for r in N.tolist()}), dtype=object)
    return N, m ** depth


def point_cloud(sys: DigitSystem, depth: int, budget: int = POINT_BUDGET) -> PointCloud:
    """Exact deduplicated depth-``depth`` cloud of the attractor."""
    if depth < 1:
        raise ValidationError("depth must be at least 1")
    if len(sys.D) ** depth > budget:
        raise BudgetError(f"{len(sys.D)}^{depth} points exceed the budget of {budget}")
    N, den = _cloud_numerators(sys, depth, dedupe=True)
    return PointCloud(depth, N, den)


def labelled_cloud(sys: DigitSystem, depth: int, budget: int = POINT_BUDGET):
    """Cloud without deduplication plus the index of each point's first digit."""
    if depth < 1:
        raise ValidationError("depth must be at least 1")
    n = len(sys.D) ** depth
    if n > budget:
        raise BudgetError(f"{n} points exceed the budget of {budget}")
    N, den = _cloud_numerators(sys, depth, dedupe=False)
    labels = np.repeat(np.arange(len(sys.D)), n // len(sys.D))
    return PointCloud(depth, N, den), labels


def symmetry_center(sys: DigitSystem) -> list:
    """Centre ``(M - I)^{-1} mean(D)``; for ``{0, a}`` this is ``(M - I)^{-1} a / 2``."""
    d = sys.dim
    M = sys.matrix()
    MI = [[M[i][j] - (1 if i == j else 0) for j in range(d)] for i in range(d)]
    mean = [Fraction(sum(x[i] for x in sys.D), len(sys.D)) for i in range(d)]
    return [row[0] for row in mat.solve_rational(MI, [[v] for v in mean])]


def truncated_center(sys: DigitSystem, depth: int) -> list:
    """``sum_{j<=k} M^{-j} mean(D)``, the centre of the depth-k cloud."""
    d = sys.dim
    Minv = mat.inverse_rational(sys.matrix())
    mean = [Fraction(sum(x[i] for x in sys.D), len(sys.D)) for i in range(d)]
    acc = [Fraction(0)] * d
    v = mean
    for _ in range(depth):
        v = mat.matvec(Minv, v)
        acc = [x + y for x, y in zip(acc, v)]
    return acc


def inverse_power_norms(M, count: int) -> list:
    """Spectral norms of ``M^{-1}, ..., M^{-count}`` (floating)."""
    Minv = np.linalg.inv(np.array(M, dtype=float))
    out = []
    P = np.eye(len(M))
    for _ in range(count):
        P = P @ Minv
        out.append(float(np.linalg.norm(P, 2)))
    return out


def series_norm_bound(M, slack: float = 1e-9) -> float:
    """Upper bound for ``sum_{k>=1} ||M^{-k}||``.

    Sums the first K norms, where ``||M^{-K}|| <= 1/4``, and bounds the rest
    by submultiplicativity: the full sum is at most ``S_K / (1 - ||M^{-K}||)``.
    """
    norms = []
    Minv = np.linalg.inv(np.array(M, dtype=float))
    P = np.eye(len(M))
    while True:
        P = P @ Minv
        norms.append(float(np.linalg.norm(P, 2)))
        if norms[-1] <= 0.25 or len(norms) > 5000:
            break
    q = norms[-1]
    if q >= 1:
        raise ValidationError("matrix does not look expanding")
    return sum(norms) / (1 - q) * (1 + slack) + slack


def bounding_radius(sys: DigitSystem) -> float:
    """Safe radius R with ``|x| <= R`` for every point of the attractor."""
    dmax = max(math.sqrt(sum(x * x for x in dgt)) for dgt in sys.D)
    return dmax * series_norm_bound(sys.matrix())


def block_dilation(q, k: int) -> list:
    """2k x 2k block matrix: identity blocks above the diagonal,
    ``companion(q)`` in the lower-left corner. Its k-th power is
    block-diagonal, so the characteristic polynomial is ``q(z^k)``.
    """
    q = intpoly.as_poly(q)
    if q.degree != 2:
        raise ValidationError("block dilation needs a quadratic")
    if k < 1:
        raise ValidationError("k must be positive")
    A = mat.companion(q)
    if k == 1:
        return A
    n = 2 * k
    M = [[0] * n for _ in range(n)]
    for b in range(k - 1):
        for i in range(2):
            M[2 * b + i][2 * (b + 1) + i] = 1
    for i in range(2):
        for j in range(2):
            M[2 * (k - 1) + i][j] = A[i][j]
    return M


@dataclass(frozen=True)
class AttractorClass:
    tag: str
    k: int = 0

    def __str__(self):
        if self.tag in ("DragonProduct", "BearProduct"):
            return f"{self.tag}({self.k})"
        return self.tag


PARALLELEPIPED = AttractorClass("Parallelepiped")
ANISOTROPIC = AttractorClass("Anisotropic")


def classify_isotropic(p) -> AttractorClass:
    """Parallelepiped, DragonProduct(k), BearProduct(k) or Anisotropic."""
    p = intpoly.as_poly(p)
    if not intpoly.is_isotropic(p):
        return ANISOTROPIC
    fac = intpoly.isotropic_quadratic_factor(p)
    if fac is None:
        return PARALLELEPIPED
    q, k = fac
    b, c = q.coeffs[1], q.coeffs[0]
    if b == 0:
        return PARALLELEPIPED
    if abs(b) == 2 and c == 2:
        return AttractorClass("DragonProduct", k)
    if abs(b) == 1 and c == 2:
        return AttractorClass("BearProduct", k)
    return ANISOTROPIC


def progression_digits(M, q) -> list:
    m = abs(mat.determinant(M))
    return [[j * x for x in q] for j in range(m)]


def progression_similarity_check(M, q1, q2, depth: int = 6):
    """Check that the map C commuting with M and sending q1 to q2 carries the
    depth-k cloud for digits ``{0, q1, ..., (m-1) q1}`` exactly onto the one
    for ``q2``. Returns ``(verdict, C)``.
    """
    M = mat.as_int_matrix(M)
    C = mat.find_commuting_map(M, q1, q2)
    s1 = DigitSystem(M, progression_digits(M, q1))
    s2 = DigitSystem(M, progression_digits(M, q2))
    c1 = point_cloud(s1, depth)
    c2 = point_cloud(s2, depth)
    L = math.lcm(*[Fraction(x).denominator for row in C for x in row])
    CL = np.array([[int(x * L) for x in row] for row in C], dtype=object)
    img = {tuple(r) for r in (np.asarray(c1.num, dtype=object) @ CL.T).tolist()}
    tgt = {tuple(L * x for x in r) for r in np.asarray(c2.num, dtype=object).tolist()}
    return img == tgt, C
