# -*- coding: utf-8 -*-
"""
Integer-only Hessian blob detector

Box-filter approximations of the second derivatives are evaluated on an
arithmetic ladder of discrete scales. Local maxima of det(H) in the
3x3x3 (x, y, scale) neighborhood are refined by quadratic interpolation in
position and scale, then imbricated multi-scale blobs are suppressed.
Every quantity is an integer; positions and scales use 1/16 fixed point.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..config.run_config import DEFAULT_STRIDES, DetectorConfig
from ..imaging.image import GrayImage
from ..imaging.integral import IntegralImage, box_sums, integral
from ..utils.parallel import ordered_map

logger = logging.getLogger(__name__)

FIXED_SHIFT = 4
FIXED_ONE = 1 << FIXED_SHIFT
DELTA_LIMIT = FIXED_ONE - 1

NORM_SHIFT = 24
# normalized derivatives keep 8 fractional bits
DERIV_BITS = 8
CROSS_NUM = 81
CROSS_DEN = 100

# keypoint scale = 1.2 * L / 9 = 2 * L / 15
SCALE_NUM = 2
SCALE_DEN = 15

NEIGHBORS_8 = [(dy, dx) for dy in (-1, 0, 1) for dx in (-1, 0, 1) if (dy, dx) != (0, 0)]
NEIGHBORS_9 = [(dy, dx) for dy in (-1, 0, 1) for dx in (-1, 0, 1)]


@dataclass(frozen=True)
class ScaleLevel:
    """One discrete scale: a box-filter size and its normalization"""

    index: int
    filter_size: int
    lobe: int
    norm_shift: int = NORM_SHIFT
    norm_mul: int = 0

    def __post_init__(self):
        if self.lobe < 3 or self.lobe % 2 == 0:
            raise ValueError(f"lobe must be odd and >= 3 (got {self.lobe})")
        if self.filter_size != 3 * self.lobe:
            raise ValueError(f"filter_size must equal 3 * lobe (got {self.filter_size}, lobe {self.lobe})")
        if self.norm_mul == 0:
            area = self.filter_size * self.filter_size
            object.__setattr__(self, "norm_mul", ((1 << self.norm_shift) + (area >> 1)) // area)

    @property
    def border(self) -> int:
        return (self.filter_size - 1) >> 1


def default_scale_levels(count: int = 8) -> List[ScaleLevel]:
    """Filter sizes 9, 15, 21, ... with lobes 3, 5, 7, ..."""
    return [ScaleLevel(index=i, filter_size=9 + 6 * i, lobe=3 + 2 * i) for i in range(count)]


@dataclass(frozen=True)
class ResponseMap:
    """det(H) sampled every `step` pixels at filter centers that fit the image"""

    level: ScaleLevel
    step: int
    grid: np.ndarray

    @property
    def border(self) -> int:
        return self.level.border

    @property
    def rows(self) -> int:
        return int(self.grid.shape[0])

    @property
    def cols(self) -> int:
        return int(self.grid.shape[1])

    @property
    def is_empty(self) -> bool:
        return self.grid.size == 0

    def center(self, ix: int, iy: int) -> Tuple[int, int]:
        return self.border + ix * self.step, self.border + iy * self.step

    def nearest_index(self, p):
        """Grid index nearest to pixel coordinate p (scalar or array)"""
        return (p - self.border + (self.step >> 1)) // self.step


@dataclass(frozen=True)
class Candidate:
    """Raw local maximum: level index, pixel center and response"""

    level: int
    x: int
    y: int
    response: int


@dataclass(frozen=True)
class Keypoint:
    """Detected blob; x, y and scale are in 1/16 pixel units"""

    x: int
    y: int
    scale: int
    response: int


BoxFn = Callable[[int, int, int, int], np.ndarray]


def normalize_derivative(value, level: ScaleLevel):
    """Scale a raw box derivative, truncating toward zero"""
    scaled = (np.abs(value) * level.norm_mul) >> (level.norm_shift - DERIV_BITS)
    return np.where(value < 0, -scaled, scaled)


def _hessian(box: BoxFn, level: ScaleLevel) -> np.ndarray:
    """det(H) from box sums addressed relative to the filter center"""
    lobe = level.lobe
    size = level.filter_size
    border = level.border
    half = lobe >> 1
    band = 2 * lobe - 1

    dxx = box(-border, 1 - lobe, size, band) - 3 * box(-half, 1 - lobe, lobe, band)
    dyy = box(1 - lobe, -border, band, size) - 3 * box(1 - lobe, -half, band, lobe)
    dxy = (box(1, -lobe, lobe, lobe) + box(-lobe, 1, lobe, lobe)
           - box(-lobe, -lobe, lobe, lobe) - box(1, 1, lobe, lobe))

    dxx = normalize_derivative(dxx, level)
    dyy = normalize_derivative(dyy, level)
    dxy = normalize_derivative(dxy, level)
    return dxx * dyy - (CROSS_NUM * dxy * dxy) // CROSS_DEN


def hessian_response(ii: IntegralImage, s: ScaleLevel, x: int, y: int) -> int:
    """Normalized integer det(H) at pixel (x, y); the window is clipped to the image"""
    xs = np.int64(x)
    ys = np.int64(y)
    return int(_hessian(lambda dx, dy, w, h: box_sums(ii, xs + dx, ys + dy, w, h), s))


def _grid_box(table: np.ndarray, x0: int, y0: int, w: int, h: int, step: int, nx: int, ny: int) -> np.ndarray:
    """Box sums for a regular grid of in-bounds rectangles via strided views"""
    x_end = step * (nx - 1) + 1
    y_end = step * (ny - 1) + 1

    def corner(yy: int, xx: int) -> np.ndarray:
        return table[yy:yy + y_end:step, xx:xx + x_end:step]

    return corner(y0 + h, x0 + w) - corner(y0, x0 + w) - corner(y0 + h, x0) + corner(y0, x0)


def _grid_shape(ii: IntegralImage, level: ScaleLevel, step: int) -> Tuple[int, int]:
    nx = max(0, (ii.width - level.filter_size) // step + 1)
    ny = max(0, (ii.height - level.filter_size) // step + 1)
    return ny, nx


def build_response_map(ii: IntegralImage, level: ScaleLevel, step: int) -> ResponseMap:
    ny, nx = _grid_shape(ii, level, step)
    if nx == 0 or ny == 0:
        return ResponseMap(level, step, np.zeros((ny, nx), dtype=np.int64))
    b = level.border
    grid = _hessian(lambda dx, dy, w, h: _grid_box(ii.table, b + dx, b + dy, w, h, step, nx, ny), level)
    return ResponseMap(level, step, np.ascontiguousarray(grid, dtype=np.int64))


def build_response_maps(
    ii: IntegralImage,
    levels: Sequence[ScaleLevel],
    strides: Optional[Sequence[int]] = None,
    workers: int = 1,
) -> List[ResponseMap]:
    """One response map per level; levels whose filter exceeds the image are empty"""
    strides = list(strides or DEFAULT_STRIDES)
    jobs = [(level, strides[min(level.index, len(strides) - 1)]) for level in levels]
    return ordered_map(lambda job: build_response_map(ii, job[0], job[1]), jobs, workers)


def find_local_maxima(maps: Sequence[ResponseMap], threshold: int) -> List[Candidate]:
    """Strict 3x3x3 maxima above threshold, excluding the lowest and highest levels

    Neighbors in adjacent levels are read around the grid position nearest to
    the candidate in that level's own stride; candidates whose neighborhood
    is incomplete are dropped.
    """
    if sum(1 for m in maps if not m.is_empty) < 3:
        return []

    found: List[Candidate] = []
    for m in range(1, len(maps) - 1):
        below, cur, above = maps[m - 1], maps[m], maps[m + 1]
        if min(below.rows, below.cols, cur.rows, cur.cols, above.rows, above.cols) < 3:
            continue

        g = cur.grid
        ny, nx = g.shape
        centre = g[1:-1, 1:-1]
        mask = centre > threshold
        for dy, dx in NEIGHBORS_8:
            mask &= centre > g[1 + dy:ny - 1 + dy, 1 + dx:nx - 1 + dx]
        iy, ix = np.nonzero(mask)
        if iy.size == 0:
            continue
        iy = iy + 1
        ix = ix + 1
        px = cur.border + ix * cur.step
        py = cur.border + iy * cur.step
        values = g[iy, ix]

        keep = np.ones(iy.size, dtype=bool)
        for other in (below, above):
            ox = other.nearest_index(px)
            oy = other.nearest_index(py)
            keep &= (ox >= 1) & (ox <= other.cols - 2) & (oy >= 1) & (oy <= other.rows - 2)
            ox = np.clip(ox, 1, other.cols - 2)
            oy = np.clip(oy, 1, other.rows - 2)
            for dy, dx in NEIGHBORS_9:
                keep &= values > other.grid[oy + dy, ox + dx]

        for k in np.nonzero(keep)[0]:
            found.append(Candidate(m, int(px[k]), int(py[k]), int(values[k])))
    return found


def _trunc_div(num: int, den: int) -> int:
    """Integer division truncating toward zero"""
    q = abs(num) // abs(den)
    return q if (num >= 0) == (den > 0) else -q


def interpolate_scale(r_below: int, r_at: int, r_above: int) -> int:
    """Vertex offset of the parabola through three samples, in 1/16 units

    Clamped to [-15/16, 15/16]; a flat parabola yields 0.
    """
    r_below, r_at, r_above = int(r_below), int(r_at), int(r_above)
    den = 2 * (r_below - 2 * r_at + r_above)
    if den == 0:
        return 0
    delta = _trunc_div((r_below - r_above) * FIXED_ONE, den)
    return max(-DELTA_LIMIT, min(DELTA_LIMIT, delta))


def refine_candidate(maps: Sequence[ResponseMap], cand: Candidate) -> Keypoint:
    """Sub-pixel position and interpolated scale of a raw maximum"""
    cur = maps[cand.level]
    below = maps[cand.level - 1]
    above = maps[cand.level + 1]
    ix = (cand.x - cur.border) // cur.step
    iy = (cand.y - cur.border) // cur.step
    g = cur.grid

    dx = interpolate_scale(g[iy, ix - 1], g[iy, ix], g[iy, ix + 1])
    dy = interpolate_scale(g[iy - 1, ix], g[iy, ix], g[iy + 1, ix])

    r_below = below.grid[below.nearest_index(cand.y), below.nearest_index(cand.x)]
    r_above = above.grid[above.nearest_index(cand.y), above.nearest_index(cand.x)]
    ds = interpolate_scale(r_below, cand.response, r_above)

    size = cur.level.filter_size
    gap = above.level.filter_size - size if ds >= 0 else size - below.level.filter_size
    size16 = size * FIXED_ONE + ds * gap

    return Keypoint(
        x=cand.x * FIXED_ONE + dx * cur.step,
        y=cand.y * FIXED_ONE + dy * cur.step,
        scale=(size16 * SCALE_NUM) // SCALE_DEN,
        response=cand.response,
    )


def imbricated(a: Keypoint, b: Keypoint) -> bool:
    """True when the smaller blob's center lies inside the larger blob's circle"""
    radius = max(a.scale, b.scale)
    dx = a.x - b.x
    dy = a.y - b.y
    return dx * dx + dy * dy < radius * radius


def _suppression_order(kp: Keypoint):
    return -kp.response, kp.scale, kp.y, kp.x


def suppress_imbricated(candidates: Sequence[Keypoint]) -> List[Keypoint]:
    """Greedy suppression in decreasing response order

    Ties are broken by lower scale, then (y, x).
    """
    ordered = sorted(candidates, key=_suppression_order)
    n = len(ordered)
    xs = np.empty(n, dtype=np.int64)
    ys = np.empty(n, dtype=np.int64)
    ss = np.empty(n, dtype=np.int64)
    kept: List[Keypoint] = []

    for kp in ordered:
        count = len(kept)
        if count:
            dx = xs[:count] - kp.x
            dy = ys[:count] - kp.y
            radius = np.maximum(ss[:count], kp.scale)
            if np.any(dx * dx + dy * dy < radius * radius):
                continue
        xs[count], ys[count], ss[count] = kp.x, kp.y, kp.scale
        kept.append(kp)
    return kept


def detect_in_integral(
    ii: IntegralImage,
    cfg: DetectorConfig,
    levels: Optional[Sequence[ScaleLevel]] = None,
) -> List[Keypoint]:
    """Detection pipeline on a precomputed integral image"""
    levels = list(levels) if levels is not None else default_scale_levels(cfg.scale_count)
    maps = build_response_maps(ii, levels, cfg.strides)
    candidates = find_local_maxima(maps, cfg.hessian_threshold)
    refined = [refine_candidate(maps, c) for c in candidates]
    kept = suppress_imbricated(refined)
    logger.debug("%d candidates, %d after suppression, cap %d", len(candidates), len(kept), cfg.max_keypoints)
    return kept[:cfg.max_keypoints]


def detect_keypoints(img: GrayImage, cfg: DetectorConfig) -> List[Keypoint]:
    """Detect keypoints, strongest response first, at most cfg.max_keypoints"""
    return detect_in_integral(integral(img), cfg)
