"""Contact sets, exact Lebesgue measure and tile verdicts.

For a digit system (M, D) with attractor G, the contact set is the set of
integer s with G and G + s intersecting. If x lies in both, writing
x = M^{-1}(y + a) and x - s = M^{-1}(y' + b) forces y' - y = a - b - Ms,
so s can only survive if some Ms + b - a survives as well.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import attract, mat
from .attract import DigitSystem
from .errors import BudgetError, CriteriaDisagreement

BOX_BUDGET = 20_000_000


@dataclass
class ContactGraph:
    """Contact set ``gamma`` with contact matrix ``A`` and per-digit ``T``.

    ``(T[a])[s, s'] = #{b : s' = M s + a - b}`` and ``A = sum(T)``.
    """

    gamma: list
    A: np.ndarray
    T: list
    index: dict

    def __len__(self):
        return len(self.gamma)

    @property
    def zero(self) -> int:
        return self.index[tuple([0] * len(self.gamma[0]))]

    def to_dict(self) -> dict:
        return {
            "gamma": [list(s) for s in self.gamma],
            "A": self.A.tolist(),
            "T": [t.tolist() for t in self.T],
        }


def difference_box(sys: DigitSystem, tol: float = 1e-7) -> list:
    """Per-coordinate bound on the integer points of ``G - G``.

    ``G - G`` consists of the sums ``sum_k M^{-k} delta_k`` with delta in
    ``D - D``; the first K terms are bounded coordinatewise, the rest by
    an operator-norm tail.
    """
    M = np.array(sys.matrix(), dtype=float)
    d = sys.dim
    Minv = np.linalg.inv(M)
    deltas = np.array([[x - y for x, y in zip(a, b)] for a in sys.D for b in sys.D], dtype=float)
    bound = np.zeros(d)
    P = np.eye(d)
    K = 0
    while True:
        P = P @ Minv
        K += 1
        bound += np.abs(deltas @ P.T).max(axis=0)
        if np.linalg.norm(P, 2) < 1e-3 or K > 4000:
            break
    dmax = float(np.sqrt((deltas ** 2).sum(axis=1)).max())
    tail = dmax * np.linalg.norm(P, 2) * attract.series_norm_bound(sys.matrix())
    return [int(math.floor(b + tail + tol)) for b in bound]


def contact_set(sys: DigitSystem, budget: int = BOX_BUDGET) -> ContactGraph:
    """Largest set of integer translates closed under the survival rule."""
    d = sys.dim
    B = difference_box(sys)
    shape = [2 * b + 1 for b in B]
    size = int(np.prod(shape))
    if size > budget:
        raise BudgetError(f"candidate box of {size} points exceeds the budget of {budget}")
    grids = np.indices(shape).reshape(d, -1).T - np.array(B)
    M = np.array(sys.matrix(), dtype=np.int64)
    deltas = sorted({tuple(b - a for a, b in zip(x, y)) for x in sys.D for y in sys.D})
    Bv = np.array(B)
    strides = np.array([int(np.prod(shape[i + 1:])) for i in range(d)], dtype=np.int64)
    img = grids @ M.T
    succ = []
    for delta in deltas:
        t = img + np.array(delta)
        inside = np.all(np.abs(t) <= Bv, axis=1)
        idx = np.where(inside, (t + Bv) @ strides, -1)
        succ.append(idx)
    succ = np.stack(succ, axis=1)
    valid = succ >= 0
    safe = np.where(valid, succ, 0)
    alive = np.ones(size, dtype=bool)
    zero = int(Bv @ strides)
    while True:
        new = np.any(alive[safe] & valid, axis=1)
        new[zero] = True
        if np.array_equal(new, alive):
            break
        alive = new
    gamma = [tuple(int(x) for x in row) for row in grids[alive]]
    gamma.sort()
    index = {s: i for i, s in enumerate(gamma)}
    n = len(gamma)
    T = []
    Mi = sys.matrix()
    for a in sys.D:
        Ta = np.zeros((n, n), dtype=np.int64)
        for i, s in enumerate(gamma):
            Ms = mat.matvec(Mi, s)
            for b in sys.D:
                t = tuple(x + y - z for x, y, z in zip(Ms, a, b))
                j = index.get(t)
                if j is not None:
                    Ta[i, j] += 1
        T.append(Ta)
    A = sum(T)
    return ContactGraph(gamma, A, T, index)


def _closed_classes(P_struct: list) -> list:
    """Closed communicating classes of a finite chain given by successor lists."""
    n = len(P_struct)
    # Tarjan-free approach: reach sets via BFS; fine for the sizes involved
    reach = []
    for i in range(n):
        seen = {i}
        stack = [i]
        while stack:
            u = stack.pop()
            for v in P_struct[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        reach.append(seen)
    classes = []
    done = set()
    for i in range(n):
        if i in done:
            continue
        cls = {j for j in reach[i] if i in reach[j]}
        done |= cls
        if all(reach[j] <= cls for j in cls):
            classes.append(sorted(cls))
    return classes


def _chain_step(sys: DigitSystem, Minv, w):
    """Successors of w under w -> M^{-1}(w + a - b), one per digit a."""
    out = []
    for a in sys.D:
        for b in sys.D:
            t = mat.matvec(Minv, [x + y - z for x, y, z in zip(w, a, b)])
            if all(q.denominator == 1 for q in t):
                out.append(tuple(int(q) for q in t))
                break
    return out


def _absorption_to_zero(sys: DigitSystem, starts) -> dict:
    """Exact probability of absorption at 0 for the chain
    ``w -> M^{-1}(w + a - b)`` with a uniform and b the unique digit
    making the result integral.
    """
    Minv = mat.inverse_rational(sys.matrix())
    d = sys.dim
    zero = tuple([0] * d)
    succ = {}
    stack = list(dict.fromkeys(starts))
    while stack:
        w = stack.pop()
        if w in succ:
            continue
        succ[w] = _chain_step(sys, Minv, w)
        stack.extend(v for v in succ[w] if v not in succ)
    states = sorted(succ)
    idx = {s: i for i, s in enumerate(states)}
    lists = [[idx[v] for v in succ[s]] for s in states]
    closed = _closed_classes(lists)
    h = {}
    recurrent = set()
    for cls in closed:
        val = Fraction(1) if states[cls[0]] == zero else Fraction(0)
        for i in cls:
            h[i] = val
            recurrent.add(i)
    trans = [i for i in range(len(states)) if i not in recurrent]
    if trans:
        tpos = {i: k for k, i in enumerate(trans)}
        m = len(sys.D)
        n = len(trans)
        Amat = [[Fraction(0)] * n for _ in range(n)]
        rhs = []
        for k, i in enumerate(trans):
            Amat[k][k] += 1
            r = Fraction(0)
            for j in lists[i]:
                if j in tpos:
                    Amat[k][tpos[j]] -= Fraction(1, m)
                else:
                    r += h[j] / m
            rhs.append([r])
        sol = mat.solve_rational(Amat, rhs)
        for k, i in enumerate(trans):
            h[i] = sol[k][0]
    return {states[i]: h[i] for i in range(len(states))}


def overlap_structure(sys: DigitSystem, cg: ContactGraph | None = None):
    """Closed classes of the overlap chain on the contact set, other than {0}.

    The chain moves from s' to s with probability ``A[s, s'] / m``; the
    overlap vector ``v_s = |G n (G + s)|`` is a stationary measure of it.
    """
    cg = cg or contact_set(sys)
    n = len(cg)
    lists = [list(np.nonzero(cg.A[:, j])[0]) for j in range(n)]
    classes = _closed_classes(lists)
    z = cg.zero
    return cg, [c for c in classes if c != [z]]


def _stationary(cg: ContactGraph, cls: list, m: int) -> list:
    """Exact stationary distribution of the chain restricted to a closed class."""
    k = len(cls)
    # pi_s = sum_{s'} pi_{s'} A[s, s'] / m  for s in cls
    rows = []
    for i, s in enumerate(cls):
        rows.append([Fraction(int(cg.A[s, t]), m) - (1 if i == j else 0) for j, t in enumerate(cls)])
    rows.append([Fraction(1)] * k)
    # least-squares-free exact solve: kernel of the square system plus normalisation
    ker = mat.nullspace_rational(rows[:-1])
    if len(ker) != 1:
        raise CriteriaDisagreement("closed class without a unique stationary law")
    v = ker[0]
    tot = sum(v)
    return [x / tot for x in v]


def _shift_candidates(support, d: int, limit: int):
    """Nonzero integer shifts: differences of support points first, then
    breadth-first layers of unit steps around them, nearest first within a
    layer. The unit steps reach cosets of the sublattice the chain lives on.
    """
    zero = tuple([0] * d)
    layer = {tuple(x - y for x, y in zip(s, t)) for s in support for t in support} | {zero}
    seen = set(layer)
    count = 0
    while layer and count < limit:
        for u in sorted(layer, key=lambda u: (sum(x * x for x in u), u)):
            if u != zero:
                yield u
                count += 1
                if count >= limit:
                    return
        nxt = set()
        for u in layer:
            for i in range(d):
                for e in (1, -1):
                    v = u[:i] + (u[i] + e,) + u[i + 1:]
                    if v not in seen:
                        seen.add(v)
                        nxt.add(v)
        layer = nxt


def exact_measure(sys: DigitSystem, cg: ContactGraph | None = None, max_shifts: int = 400) -> int:
    """Lebesgue measure of the attractor, computed exactly.

    The overlap vector is ``v = v_0 e_0 + sum_C c_C pi_C`` over closed
    classes C != {0}. Continuity of the overlap function at 0 gives for
    every integer u the relation ``v_0 = sum_s v_s h(s - u)`` with h the
    probability of absorption at 0, which fixes the ratios ``c_C / v_0``.
    Then ``mu = sum(v) / v_0``.
    """
    cg, classes = overlap_structure(sys, cg)
    if not classes:
        return 1
    m = len(sys.D)
    pis = [_stationary(cg, c, m) for c in classes]
    d = sys.dim
    zero = tuple([0] * d)
    support = sorted({cg.gamma[s] for c in classes for s in c})
    rows, rhs = [], []
    for u in _shift_candidates(support, d, max_shifts):
        pts = [tuple(x - y for x, y in zip(cg.gamma[s], u)) for c in classes for s in c]
        negu = tuple(-x for x in u)
        h = _absorption_to_zero(sys, pts + [negu])
        row = []
        for c, pi in zip(classes, pis):
            row.append(sum(p * h[tuple(x - y for x, y in zip(cg.gamma[s], u))] for s, p in zip(c, pi)))
        rows.append(row)
        rhs.append(1 - h[negu])
        if mat.rank_rational(rows) == len(classes):
            break
    if mat.rank_rational(rows) < len(classes):
        raise CriteriaDisagreement("could not pin down the overlap vector")
    # solve the (consistent) overdetermined system exactly via normal equations
    k = len(classes)
    At = list(zip(*rows))
    N = [[sum(a * b for a, b in zip(At[i], At[j])) for j in range(k)] for i in range(k)]
    y = [[sum(a * b for a, b in zip(At[i], rhs))] for i in range(k)]
    r = [row[0] for row in mat.solve_rational(N, y)]
    for row, b in zip(rows, rhs):
        if sum(x * c for x, c in zip(row, r)) != b:
            raise CriteriaDisagreement("inconsistent overlap equations")
    mu = 1 + sum(r)
    if mu.denominator != 1 or any(x < 0 for x in r):
        raise CriteriaDisagreement(f"non-integral measure {mu}")
    return int(mu)


def nonzero_spectral_radius(cg: ContactGraph) -> float:
    """Spectral radius of A restricted to the contact set minus {0}."""
    z = cg.zero
    keep = [i for i in range(len(cg)) if i != z]
    if not keep:
        return 0.0
    sub = cg.A[np.ix_(keep, keep)].astype(float)
    return mat.spectral_radius(sub)


@dataclass
class TileReport:
    measure: int
    is_tile: bool
    gamma_size: int
    rho_nonzero: float
    m: int

    def to_dict(self):
        return {
            "measure": self.measure,
            "tile": self.is_tile,
            "gamma_size": self.gamma_size,
            "rho_nonzero": self.rho_nonzero,
            "m": self.m,
        }


def tile_report(sys: DigitSystem, tol: float = 1e-7) -> TileReport:
    """Measure and tile verdict; both criteria are computed and must agree."""
    cg = contact_set(sys)
    mu = exact_measure(sys, cg)
    rho = nonzero_spectral_radius(cg)
    m = len(sys.D)
    by_rho = rho < m - tol
    if (mu == 1) != by_rho:
        raise CriteriaDisagreement(
            f"measure {mu} but restricted spectral radius {rho:.9g} vs m = {m}"
        )
    return TileReport(mu, mu == 1, len(cg), rho, m)


def measure(sys: DigitSystem) -> int:
    return tile_report(sys).measure


def is_tile(sys: DigitSystem) -> bool:
    return tile_report(sys).is_tile
