"""L2 regularity of attractor indicator functions.

The indicator of the attractor satisfies a two-term refinement equation;
its translates restricted to the contact set transform by the transfer
matrices ``T_0, T_1``. The L2 Hölder exponent follows from the L2 joint
spectral radius of these matrices on their smallest common invariant
subspace containing the columns of ``T_0 - T_1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.sparse.linalg import LinearOperator, eigs

from . import attract, intpoly, mat, tiling
from .errors import ValidationError

DENSE_LIMIT = 400


def transfer_matrices(sys):
    """Per-digit transfer matrices and the contact set they act on."""
    if len(sys.D) != 2:
        raise ValidationError("transfer matrices are defined for two digits")
    cg = tiling.contact_set(sys)
    return cg.T[0], cg.T[1], cg.gamma


class _Echelon:
    """Incremental row-echelon basis over Q, or over GF(p) when ``prime`` is set."""

    def __init__(self, prime=None):
        self.p = prime
        self.rows = {}      # pivot -> reduced row (pivot entry 1)

    def add(self, v) -> bool:
        p = self.p
        if p:
            v = [int(x) % p for x in v]
        else:
            v = [Fraction(x) for x in v]
        for piv, row in self.rows.items():
            f = v[piv]
            if f:
                v = [(x - f * y) % p for x, y in zip(v, row)] if p else [x - f * y for x, y in zip(v, row)]
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            return False
        inv = pow(v[piv], -1, p) if p else 1 / v[piv]
        v = [(x * inv) % p for x in v] if p else [x * inv for x in v]
        for k, row in self.rows.items():
            f = row[piv]
            if f:
                self.rows[k] = [(x - f * y) % p for x, y in zip(row, v)] if p else [x - f * y for x, y in zip(row, v)]
        self.rows[piv] = v
        return True


_PRIME = (1 << 61) - 1


def _closure(T0, T1, prime):
    n = T0.shape[0]
    ech = _Echelon(prime)
    basis = []
    D = np.asarray(T0, dtype=object) - np.asarray(T1, dtype=object)
    queue = [list(D[:, j]) for j in range(n)]
    Ts = [np.asarray(T0, dtype=object), np.asarray(T1, dtype=object)]
    while queue:
        v = queue.pop()
        if ech.add(v):
            basis.append(v)
            vv = np.array(v, dtype=object)
            for T in Ts:
                w = T.dot(vv)
                if prime:
                    w = w % prime
                queue.append(list(w))
    return basis


def special_subspace(T0, T1) -> list:
    """Smallest subspace containing the columns of ``T0 - T1`` and invariant
    under ``T0`` and ``T1``. Returns a list of basis vectors.

    Every column of ``T_a`` sums to one, so the subspace lies in the
    zero-sum hyperplane. The closure is first run modulo a large prime;
    independence mod p implies independence over Q, so reaching the full
    hyperplane dimension settles the answer. Otherwise the closure is
    redone exactly in rationals.
    """
    n = T0.shape[0]
    if n <= 1:
        return []
    fast = _closure(T0, T1, _PRIME)
    if len(fast) == n - 1:
        # basis e_j - e_0 of the zero-sum hyperplane
        return [[-1 if i == 0 else (1 if i == j else 0) for i in range(n)] for j in range(1, n)]
    return _closure(T0, T1, None)


def is_zero_sum_hyperplane(basis, n) -> bool:
    return len(basis) == n - 1 and all(sum(v) == 0 for v in basis)


def _restrict(T, Q):
    """Matrix of T on the span of the orthonormal columns of Q."""
    TQ = np.asarray(T, dtype=float) @ Q
    R = Q.T @ TQ
    err = np.abs(Q @ R - TQ).max() if R.size else 0.0
    if err > 1e-8 * max(1.0, np.abs(TQ).max()):
        raise ValidationError("subspace is not invariant")
    return R


def _orthonormal(basis):
    B = np.array([[float(x) for x in v] for v in basis]).T
    Q, _ = np.linalg.qr(B)
    return Q


def l2_spectral_radius(T0, T1, basis=None) -> float:
    """``sqrt(rho(1/2 (R_0 x R_0 + R_1 x R_1)))`` for the restrictions R_a.

    ``basis`` spans a common invariant subspace; None means the whole space.
    Large subspaces use a matrix-free operator ``Y -> 1/2 sum R Y R^T``.
    """
    if basis is None:
        R = [np.asarray(T0, dtype=float), np.asarray(T1, dtype=float)]
    else:
        if len(basis) == 0:
            return 0.0
        Q = _orthonormal(basis)
        R = [_restrict(T0, Q), _restrict(T1, Q)]
    k = R[0].shape[0]
    if k == 0:
        return 0.0
    if k * k <= DENSE_LIMIT:
        K = 0.5 * (np.kron(R[0], R[0]) + np.kron(R[1], R[1]))
        rho = float(np.max(np.abs(np.linalg.eigvals(K))))
    else:
        def mv(y):
            Y = y.reshape(k, k)
            return (0.5 * (R[0] @ Y @ R[0].T + R[1] @ Y @ R[1].T)).ravel()

        op = LinearOperator((k * k, k * k), matvec=mv, dtype=float)
        vals = eigs(op, k=1, which="LM", return_eigenvectors=False, tol=1e-12, maxiter=20000)
        rho = float(np.abs(vals).max())
    return math.sqrt(rho)


@dataclass
class RegularityReport:
    poly: str
    gamma_size: int
    subspace_dim: int
    rho2: float
    alpha: float
    lambda_max: float

    def to_dict(self):
        return {
            "polynomial": self.poly,
            "gamma_size": self.gamma_size,
            "subspace_dim": self.subspace_dim,
            "rho2": self.rho2,
            "alpha": self.alpha,
            "lambda_max": self.lambda_max,
        }


def holder_exponent(p) -> RegularityReport:
    """L2 Hölder exponent ``alpha = -ln(rho2) / ln(lambda_max)`` of the
    attractor of the companion matrix with digits ``{0, e_1}``.
    """
    p = intpoly.as_poly(p)
    sys = attract.default_system(p)
    T0, T1, gamma = transfer_matrices(sys)
    W = special_subspace(T0, T1)
    rho2 = l2_spectral_radius(T0, T1, W)
    lam = mat.spectral_radius(mat.companion(p))
    alpha = -math.log(rho2) / math.log(lam)
    return RegularityReport(intpoly.format_poly(p), len(gamma), len(W), rho2, alpha, lam)


def rho2_from_contact_radius(p) -> float:
    """Independent route: ``rho2^2 = rho(A on the contact set minus 0) / 2``."""
    sys = attract.default_system(intpoly.as_poly(p))
    cg = tiling.contact_set(sys)
    return math.sqrt(tiling.nonzero_spectral_radius(cg) / len(sys.D))


def surface_dimension(p) -> float:
    """Surface dimension of an isotropic attractor (its L2 Hölder exponent)."""
    p = intpoly.as_poly(p)
    if not intpoly.is_isotropic(p):
        raise ValidationError(f"{intpoly.format_poly(p)} is not isotropic")
    return holder_exponent(p).alpha
