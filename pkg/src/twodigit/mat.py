"""Small exact and floating linear algebra on integer matrices.

Matrices are plain nested lists (exact) or numpy arrays (floating).
Exact entries are ints or ``fractions.Fraction``.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import intpoly
from .errors import ValidationError
from .intpoly import IntPolynomial

MAX_DIM = 16


def as_int_matrix(M) -> list:
    """Copy ``M`` into a list of int rows, validating squareness."""
    if isinstance(M, str):
        return parse_matrix(M)
    rows = [[int(x) for x in row] for row in (M.tolist() if hasattr(M, "tolist") else M)]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ValidationError("matrix must be square and nonempty")
    if n > MAX_DIM:
        raise ValidationError(f"dimension {n} exceeds {MAX_DIM}")
    return rows


def parse_matrix(text: str) -> list:
    """Parse ``"0,-2;1,0"`` (rows split by ';', entries by ',')."""
    try:
        rows = [[int(t) for t in r.split(",")] for r in text.strip().split(";")]
    except ValueError as exc:
        raise ValidationError(f"bad matrix text {text!r}") from exc
    return as_int_matrix(rows)


def format_matrix(M) -> str:
    return ";".join(",".join(str(x) for x in row) for row in M)


def identity(n: int) -> list:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(A, B) -> list:
    n, m, p = len(A), len(B), len(B[0])
    return [[sum(A[i][k] * B[k][j] for k in range(m)) for j in range(p)] for i in range(n)]


def matvec(A, v) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def companion(p) -> list:
    """Companion matrix: ones below the diagonal, last column ``-a_0..-a_{d-1}``."""
    p = intpoly.as_poly(p)
    if p.lead != 1:
        raise ValidationError("companion matrix needs a monic polynomial")
    d = p.degree
    M = [[0] * d for _ in range(d)]
    for i in range(1, d):
        M[i][i - 1] = 1
    for i in range(d):
        M[i][d - 1] = -p.coeffs[i]
    return M


def char_poly(M) -> IntPolynomial:
    """Exact characteristic polynomial ``det(zI - M)`` (Faddeev-LeVerrier)."""
    M = as_int_matrix(M)
    n = len(M)
    # c_n = 1; N_k = M N_{k-1} + c_{n-k+1} I ; c_{n-k} = -tr(M N_k)/k
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    N = identity(n)
    for k in range(1, n + 1):
        MN = matmul(M, N)
        tr = sum(MN[i][i] for i in range(n))
        if tr % k:
            raise AssertionError("non-integral trace step")
        c = -tr // k
        coeffs[n - k] = c
        N = [[MN[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
    return IntPolynomial(coeffs)


def determinant(M) -> int:
    p = char_poly(M)
    n = p.degree
    return (-1) ** n * p.coeffs[0]


def solve_rational(A, B):
    """Solve ``A X = B`` exactly by Gauss-Jordan elimination.

    ``B`` is a list of rows (a matrix). Raises on singular ``A``.
    """
    n = len(A)
    aug = [[Fraction(x) for x in A[i]] + [Fraction(x) for x in B[i]] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValidationError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def inverse_rational(M) -> list:
    """Exact inverse with Fraction entries."""
    n = len(M)
    return solve_rational(M, identity(n))


def nullspace_rational(A) -> list:
    """Basis of the right kernel of a rational matrix (list of vectors)."""
    rows = [[Fraction(x) for x in r] for r in A]
    if not rows:
        return []
    m, n = len(rows), len(rows[0])
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(v)
    return basis


def rank_rational(vectors) -> int:
    """Rank of a list of rational vectors."""
    if not vectors:
        return 0
    rows = [[Fraction(x) for x in v] for v in vectors]
    rank = 0
    ncol = len(rows[0])
    for c in range(ncol):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][c] != 0:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def spectral_radius(M) -> float:
    """Largest eigenvalue modulus (dense floating eigen-solver)."""
    A = np.array([[float(x) for x in row] for row in M], dtype=float) if not isinstance(M, np.ndarray) else M.astype(float)
    if A.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(A))))


def krylov_independent(M, a) -> bool:
    """Whether ``a, Ma, ..., M^{d-1}a`` are linearly independent."""
    d = len(M)
    vecs = [list(a)]
    for _ in range(d - 1):
        vecs.append(matvec(M, vecs[-1]))
    return rank_rational(vecs) == d


def find_commuting_map(M, a, b) -> list:
    """Rational C with ``CM = MC`` and ``Ca = b``.

    When ``a`` is cyclic for M, C is a polynomial in M: writing
    ``b = sum_j x_j M^j a`` gives ``C = sum_j x_j M^j``.
    """
    M = as_int_matrix(M)
    d = len(M)
    if len(a) != d or len(b) != d:
        raise ValidationError("vector length does not match matrix size")
    if not krylov_independent(M, a):
        raise ValidationError("vector lies in a proper invariant subspace")
    K = [list(a)]
    for _ in range(d - 1):
        K.append(matvec(M, K[-1]))
    # columns of the Krylov matrix are M^j a
    Kmat = [[K[j][i] for j in range(d)] for i in range(d)]
    x = [row[0] for row in solve_rational(Kmat, [[Fraction(v)] for v in b])]
    C = [[Fraction(0)] * d for _ in range(d)]
    P = identity(d)
    for j in range(d):
        for r in range(d):
            for c in range(d):
                C[r][c] += x[j] * P[r][c]
        P = matmul(M, P)
    return C


def validate_digits(M, D) -> bool:
    """True iff the digits lie in pairwise distinct classes of Z^d / M Z^d."""
    M = as_int_matrix(M)
    m = abs(determinant(M))
    if len(D) != m:
        raise ValidationError(f"need {m} digits, got {len(D)}")
    Minv = inverse_rational(M)
    for i in range(len(D)):
        for j in range(i + 1, len(D)):
            diff = [x - y for x, y in zip(D[i], D[j])]
            x = matvec(Minv, diff)
            if all(Fraction(v).denominator == 1 for v in x):
                return False
    return True
