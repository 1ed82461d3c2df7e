"""Raster rendering of attractor point clouds to binary PPM images.

Points are produced as exact integer numerators over ``m^k`` in fixed
digit-prefix chunks, converted to floats the same way in every chunk,
and OR-ed into pixel masks. The output therefore does not depend on the
number of workers.
"""
from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import attract, intpoly
from .attract import DigitSystem
from .errors import BudgetError, ValidationError

log = logging.getLogger(__name__)

POINT_BUDGET = 2 ** 24
CHUNK_POINTS = 2 ** 16

WHITE = (255, 255, 255)
BLACK = (0, 0, 0)
DARK_GREEN = (0, 100, 0)
LIGHT_GREEN = (144, 238, 144)
PLUS = (200, 30, 30)
MINUS = (30, 60, 200)
OVERLAP = (128, 128, 128)

MODES = ("attractor", "split", "haar")


@dataclass
class RenderJob:
    sys: DigitSystem
    depth: int
    width: int = 512
    height: int = 512
    mode: str = "attractor"
    projection: np.ndarray | None = None
    viewport: tuple | None = None   # (xmin, xmax, ymin, ymax)
    workers: int = 1
    budget: int = POINT_BUDGET


def auto_depth(alpha: float, eps: float) -> int:
    """Iteration count ``ceil(log2(1/eps) / alpha)`` for target accuracy eps."""
    if not 0 < eps < 1:
        raise ValidationError("eps must lie in (0, 1)")
    if alpha <= 0:
        raise ValidationError("alpha must be positive")
    return math.ceil(math.log2(1 / eps) / alpha - 1e-12)


def max_affordable_depth(m: int, budget: int = POINT_BUDGET) -> int:
    return int(math.floor(math.log(budget) / math.log(m) + 1e-12))


def default_projection(d: int, axes=(0, 1)) -> np.ndarray:
    if d == 1:
        return np.array([[1.0], [0.0]])
    P = np.zeros((2, d))
    P[0, axes[0]] = 1.0
    P[1, axes[1]] = 1.0
    return P


def default_viewport(sys: DigitSystem, P: np.ndarray) -> tuple:
    c = np.array([float(x) for x in attract.symmetry_center(sys)])
    R = attract.bounding_radius(sys)
    pc = P @ c
    if sys.dim == 1:
        return (pc[0] - R, pc[0] + R, -1.0, 1.0)
    return (pc[0] - R, pc[0] + R, pc[1] - R, pc[1] + R)


def _prefix_len(m: int, depth: int) -> int:
    # fixed chunking: depends only on (m, depth), never on workers
    j = 1
    while m ** (depth - j) > CHUNK_POINTS and j < depth:
        j += 1
    return min(j, depth)


def _chunk_mask(args):
    (M, D, depth, j, prefixes, P, view, W, H, ndig) = args
    m = abs(round(np.linalg.det(np.array(M, dtype=float))))
    sys = DigitSystem(M, D, check=False)
    adj = attract.scaled_adjugate(M).astype(np.int64)
    powers = [np.eye(len(M), dtype=np.int64)]
    for _ in range(j):
        powers.append(powers[-1] @ adj)
    if depth > j:
        tail = attract._cloud_numerators(sys, depth - j, dedupe=False)[0].astype(np.int64)
    else:
        tail = np.zeros((1, len(M)), dtype=np.int64)
    tail = tail @ powers[j].T
    den = float(m ** depth)
    xmin, xmax, ymin, ymax = view
    masks = np.zeros((ndig, H, W), dtype=bool)
    Dv = np.array(D, dtype=np.int64)
    for pre in prefixes:
        off = np.zeros(len(M), dtype=np.int64)
        for i, a in enumerate(pre, start=1):
            off += (m ** (depth - i)) * (powers[i] @ Dv[a])
        pts = (tail + off).astype(float) / den
        xy = pts @ P.T
        px = np.floor((xy[:, 0] - xmin) / (xmax - xmin) * W).astype(np.int64)
        if len(M) == 1:
            ok = (px >= 0) & (px < W)
            masks[pre[0]][:, px[ok]] = True
            continue
        py = H - 1 - np.floor((xy[:, 1] - ymin) / (ymax - ymin) * H).astype(np.int64)
        ok = (px >= 0) & (px < W) & (py >= 0) & (py < H)
        masks[pre[0], py[ok], px[ok]] = True
    return masks


def rasterize(job: RenderJob) -> np.ndarray:
    """Boolean masks of shape (number of digits, H, W), one per first digit."""
    sys = job.sys
    m = len(sys.D)
    if job.depth < 1:
        raise ValidationError("depth must be at least 1")
    if job.mode not in MODES:
        raise ValidationError(f"unknown mode {job.mode!r}")
    if m ** job.depth > job.budget:
        kmax = max_affordable_depth(m, job.budget)
        raise BudgetError(f"{m}^{job.depth} points exceed the budget of {job.budget}; "
                          f"the largest affordable depth is {kmax}")
    P = job.projection if job.projection is not None else default_projection(sys.dim)
    P = np.asarray(P, dtype=float)
    if P.shape != (2, sys.dim):
        raise ValidationError("projection must be a 2 x d matrix")
    view = job.viewport or default_viewport(sys, P)
    j = _prefix_len(m, job.depth)
    prefixes = list(itertools.product(range(m), repeat=j))
    nchunks = max(1, job.workers)
    groups = [prefixes[i::nchunks] for i in range(nchunks)]
    args = [(sys.matrix(), [list(x) for x in sys.D], job.depth, j, g, P, view,
             job.width, job.height, m) for g in groups if g]
    if job.workers > 1:
        with ProcessPoolExecutor(max_workers=job.workers) as ex:
            parts = list(ex.map(_chunk_mask, args))
    else:
        parts = [_chunk_mask(a) for a in args]
    out = parts[0]
    for p in parts[1:]:
        out |= p
    return out


def to_ppm(masks: np.ndarray, mode: str) -> bytes:
    """Compose the masks into an RGB image and encode it as binary PPM."""
    _, H, W = masks.shape
    img = np.empty((H, W, 3), dtype=np.uint8)
    img[:] = WHITE
    anyp = masks.any(axis=0)
    if mode == "attractor":
        img[anyp] = BLACK
    elif mode == "split":
        img[masks[0]] = DARK_GREEN
        for k in range(1, masks.shape[0]):
            img[masks[k]] = LIGHT_GREEN
    else:
        # sign of phi(Mx) - phi(Mx - e): + on the first half, - on the second
        first = masks[0]
        rest = masks[1:].any(axis=0)
        img[first & ~rest] = PLUS
        img[rest & ~first] = MINUS
        img[first & rest] = OVERLAP
    header = f"P6\n{W} {H}\n255\n".encode("ascii")
    return header + img.tobytes()


def render(job: RenderJob) -> bytes:
    return to_ppm(rasterize(job), job.mode)


def read_ppm(data: bytes) -> np.ndarray:
    """Decode a binary PPM produced by ``to_ppm``."""
    parts = data.split(b"\n", 3)
    if parts[0] != b"P6":
        raise ValidationError("not a binary PPM")
    W, H = (int(x) for x in parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(H, W, 3)


def plan_depth(sys: DigitSystem, alpha: float, eps: float, budget: int = POINT_BUDGET):
    """Depth suggested for accuracy eps, clipped to the point budget.

    Returns ``(suggested, used)``; ``used < suggested`` means the image
    will be coarser than requested.
    """
    k = auto_depth(alpha, eps)
    kmax = max_affordable_depth(len(sys.D), budget)
    if k > kmax:
        log.warning("depth %d needed for eps=%g exceeds the point budget; rendering at %d "
                    "(accuracy about %.3g)", k, eps, kmax, 2.0 ** (-alpha * kmax))
    return k, min(k, kmax)
