"""Convex hulls of two-digit attractors as truncated zonotopes, and
recovery of the dilation matrix from the hull's segment family.

For digits ``{0, a}`` the convex hull of the attractor is the infinite
zonotope ``sum_k [0, M^{-k} a]``; the symmetric form used here is
``c + sum_k [-g_k/2, g_k/2]`` with ``g_k = M^{-k} a`` and ``c`` the
symmetry centre.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import attract, intpoly, mat
from .errors import BudgetError, ValidationError


@dataclass
class Zonotope:
    """``center + sum_k [-g_k/2, g_k/2]`` plus a bound on the omitted tail.

    ``tail_bound`` bounds ``sum_{k>K} |g_k|``; the Hausdorff distance to the
    full hull is at most half of it.
    """

    generators: list
    center: list
    tail_bound: float

    @property
    def depth(self):
        return len(self.generators)

    @property
    def dim(self):
        return len(self.center)

    @property
    def hausdorff_bound(self):
        return self.tail_bound / 2

    def support(self, u) -> float:
        """Support function ``h(u) = u.c + 1/2 sum |u.g|``."""
        u = np.asarray(u, dtype=float)
        G = np.array([[float(x) for x in g] for g in self.generators])
        c = np.array([float(x) for x in self.center])
        return float(u @ c + 0.5 * np.abs(G @ u).sum())

    def facet_normals(self) -> np.ndarray:
        """Unit normals spanned by (d-1)-subsets of generator directions."""
        G = np.array([[float(x) for x in g] for g in distinct_directions(self.generators)])
        d = self.dim
        if d == 1:
            return np.array([[1.0], [-1.0]])
        out = []
        for idx in itertools.combinations(range(len(G)), d - 1):
            sub = G[list(idx)]
            _, s, vt = np.linalg.svd(sub)
            if len(s) == d - 1 and s[-1] < 1e-12 * max(1.0, s[0]):
                continue
            n = vt[-1]
            out.append(n)
            out.append(-n)
        return np.array(out)

    def contains(self, points, tol: float | None = None) -> bool:
        """Whether all points lie within ``tol`` of the zonotope (facet test)."""
        tol = self.hausdorff_bound if tol is None else tol
        P = np.asarray(points, dtype=float)
        N = self.facet_normals()
        G = np.array([[float(x) for x in g] for g in self.generators])
        c = np.array([float(x) for x in self.center])
        h = N @ c + 0.5 * np.abs(N @ G.T).sum(axis=1)
        return bool(np.all(P @ N.T <= h + tol + 1e-12))


def generator_sequence(M, a, K: int) -> list:
    """Exact vectors ``M^{-1} a, ..., M^{-K} a``."""
    Minv = mat.inverse_rational(M)
    out = []
    v = [Fraction(x) for x in a]
    for _ in range(K):
        v = mat.matvec(Minv, v)
        out.append(v)
    return out


def hull_zonotope(sys, K: int) -> Zonotope:
    """Depth-K truncation of the convex hull of a two-digit attractor."""
    if len(sys.D) != 2 or any(sys.D[0]):
        raise ValidationError("hull zonotope needs digits {0, a}")
    if K < 1:
        raise ValidationError("K must be positive")
    a = list(sys.D[1])
    M = sys.matrix()
    gens = generator_sequence(M, a, K)
    norms = attract.inverse_power_norms(M, K)
    tail = math.sqrt(sum(x * x for x in a)) * norms[-1] * attract.series_norm_bound(M)
    return Zonotope(gens, attract.symmetry_center(sys), tail)


def _parallel(u, v) -> bool:
    # exact: all 2x2 minors vanish
    n = len(u)
    return all(u[i] * v[j] == u[j] * v[i] for i in range(n) for j in range(i + 1, n))


def _canonical_sign(v):
    for x in v:
        if x != 0:
            return list(v) if x > 0 else [-y for y in v]
    return list(v)


def distinct_directions(generators) -> list:
    """Merge parallel generators (exact test); returns summed representatives."""
    groups = []
    for g in generators:
        g = _canonical_sign(g)
        if all(x == 0 for x in g):
            continue
        for grp in groups:
            if _parallel(grp, g):
                for i in range(len(g)):
                    grp[i] += g[i]
                break
        else:
            groups.append(list(g))
    return groups


def hull_vertices_2d(z: Zonotope) -> list:
    """Vertices of a planar zonotope in counter-clockwise order (exact)."""
    if z.dim != 2:
        raise ValidationError("vertex enumeration is implemented for d = 2")
    gens = distinct_directions(z.generators)
    # orient every generator into the upper half plane, then sort by angle
    up = []
    for g in gens:
        if g[1] < 0 or (g[1] == 0 and g[0] < 0):
            g = [-g[0], -g[1]]
        up.append(g)
    up.sort(key=lambda g: math.atan2(float(g[1]), float(g[0])))
    start = [z.center[i] - sum(g[i] for g in up) / 2 for i in range(2)]
    # start is the vertex minimising the sum of all generator projections
    verts = [start]
    cur = list(start)
    for g in up:
        cur = [cur[0] + g[0], cur[1] + g[1]]
        verts.append(cur)
    for g in up:
        cur = [cur[0] - g[0], cur[1] - g[1]]
        verts.append(cur)
    verts.pop()
    return verts


def hull_vertex_count_2d(p, K: int) -> int:
    sys = attract.default_system(p)
    return len(hull_vertices_2d(hull_zonotope(sys, K)))


def is_polytope_hull(p):
    """Whether the hull is a polytope, with the predicted vertex count.

    Only parallelepipeds (2^d vertices) and products of dragons
    (2^{3d/2} vertices) have polytope hulls.
    """
    cls = attract.classify_isotropic(p)
    d = intpoly.as_poly(p).degree
    if cls.tag == "Parallelepiped":
        return True, 2 ** d
    if cls.tag == "DragonProduct":
        return True, 2 ** (3 * d // 2)
    return False, None


def direction_count(p, K: int) -> int:
    """Number of pairwise non-parallel generators among the first K."""
    sys = attract.default_system(p)
    gens = generator_sequence(sys.matrix(), list(sys.D[1]), K)
    return len(distinct_directions(gens))


# ---- dilation recovery ----

@dataclass
class SegmentMultiset:
    """Symmetric segments ``[-v, v]`` with multiplicities."""

    segments: list
    counts: list = field(default_factory=list)

    def __post_init__(self):
        if not self.counts:
            self.counts = [1] * len(self.segments)
        self.segments = [[Fraction(x) for x in v] for v in self.segments]
        if not self.segments:
            raise ValidationError("segment multiset is empty")
        if any(all(x == 0 for x in v) for v in self.segments):
            raise ValidationError("segments must be nonzero")

    def expanded(self) -> list:
        out = []
        for v, c in zip(self.segments, self.counts):
            out.extend([v] * c)
        return out

    def __len__(self):
        return sum(self.counts)

    def to_text(self) -> str:
        lines = []
        for v, c in zip(self.segments, self.counts):
            lines.append(",".join(str(x) for x in v) + f" @ {c}")
        return "\n".join(lines) + "\n"


def parse_segments(text: str) -> SegmentMultiset:
    """Parse lines ``vx,vy[,vz] @ multiplicity``; rationals like 1/2 allowed."""
    segs, counts = [], []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "@" in line:
            vec, mult = line.split("@", 1)
            mult = int(mult.strip())
        else:
            vec, mult = line, 1
        try:
            segs.append([Fraction(t.strip()) for t in vec.split(",")])
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"bad segment line {line!r}") from exc
        if mult < 1:
            raise ValidationError("multiplicity must be positive")
        counts.append(mult)
    if len({len(s) for s in segs}) > 1:
        raise ValidationError("segments of different dimensions")
    return SegmentMultiset(segs, counts)


def segments_from(M, a, K: int) -> SegmentMultiset:
    gens = generator_sequence(M, a, K)
    c = Counter(tuple(_canonical_sign(g)) for g in gens)
    keys = sorted(c, key=lambda v: (-sum(float(x) ** 2 for x in v), v))
    return SegmentMultiset([list(k) for k in keys], [c[k] for k in keys])


@dataclass
class Recovery:
    """Outcome of dilation recovery: one matrix up to sign, or several."""

    candidates: list

    @property
    def ambiguous(self) -> bool:
        return len(self.candidates) != 1

    @property
    def M(self):
        if self.ambiguous:
            raise ValidationError(f"ambiguous: {len(self.candidates)} candidate dilations")
        return self.candidates[0]


def _canon_matrix(M):
    flat = [x for row in M for x in row]
    s = next((x for x in flat if x != 0), 1)
    return tuple(tuple(x if s > 0 else -x for x in row) for row in M)


def recover_dilation(T: SegmentMultiset, d: int, window: int | None = None,
                     max_tries: int = 2_000_000) -> Recovery:
    """Find M (up to sign) such that the segments are ``+-M^{-k} a``, k = 1..n.

    Candidate heads of the chain are drawn from the longest segments: the
    first d+1 chain elements are chosen, with signs, among the ``window``
    longest; ``X = M^{-1}`` is solved from them and accepted when
    ``X^j v_1`` reproduces the entire multiset up to sign. All distinct
    solutions in the window are returned; more than one is an ambiguity.
    """
    items = T.expanded()
    n = len(items)
    if any(len(v) != d for v in items):
        raise ValidationError("segment dimension does not match d")
    if n < d + 2:
        raise ValidationError(f"need at least {d + 2} segments, got {n}")
    target = Counter(tuple(_canonical_sign(v)) for v in items)
    uniq = sorted(target, key=lambda v: (-sum(float(x) ** 2 for x in v), v))
    W0 = min(len(uniq), window or (d + 1))
    tries = 0
    for W in range(W0, len(uniq) + 1):
        found = {}
        pool = uniq[:W]
        for combo in itertools.permutations(range(len(pool)), d + 1):
            if W > W0 and max(combo) != W - 1:
                continue  # already tried in a smaller window
            vecs = [list(pool[i]) for i in combo]
            for signs in itertools.product((1, -1), repeat=d):
                tries += 1
                if tries > max_tries:
                    raise BudgetError("dilation search exceeded its budget")
                chain = [vecs[0]] + [[s * x for x in v] for s, v in zip(signs, vecs[1:])]
                V = [[chain[j][i] for j in range(d)] for i in range(d)]
                Vn = [[chain[j + 1][i] for j in range(d)] for i in range(d)]
                if mat.rank_rational([chain[j] for j in range(d)]) < d:
                    break
                # X V = Vn  <=>  V^T X^T = Vn^T
                Xt = mat.solve_rational([list(r) for r in zip(*V)], [list(r) for r in zip(*Vn)])
                X = [list(r) for r in zip(*Xt)]
                if _reproduces(X, chain[0], target, n):
                    Minv = mat.inverse_rational(X)
                    key = _canon_matrix(Minv)
                    found.setdefault(key, [list(r) for r in key])
        if found:
            return Recovery([found[k] for k in sorted(found)])
    return Recovery([])


def _reproduces(X, v1, target: Counter, n: int) -> bool:
    left = Counter(target)
    v = v1
    for _ in range(n):
        key = tuple(_canonical_sign(v))
        if left.get(key, 0) <= 0:
            return False
        left[key] -= 1
        v = mat.matvec(X, v)
    return True
