"""Hot per-pixel kernels: connected-component labeling, component stats, disk coverage.

Two implementations are kept for every kernel: a numba @njit version and a
pure-numpy fallback. The numba path is used when numba imports successfully
unless the environment variable GOLFTRACK_NUMBA is set to 0/false/off.
Both paths return bit-identical integer outputs (asserted in tests), so the
flag only changes speed, never results. See benchmarks/bench_kernels.py for
a side-by-side timing comparison.
"""

from __future__ import annotations

import os

import numpy as np


def _numba_requested() -> bool:
    flag = os.environ.get("GOLFTRACK_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "off", "no")


NUMBA_ENABLED = False
if _numba_requested():
    try:
        from numba import njit

        NUMBA_ENABLED = True
    except ImportError:
        NUMBA_ENABLED = False

if not NUMBA_ENABLED:
    def njit(*args, **kwargs):
        # identity decorator so the jitted source doubles as plain python
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return lambda f: f


# ---------------------------------------------------------------------------
# 8-connected component labeling
# ---------------------------------------------------------------------------

@njit(cache=True)
def _label_jit(binary):
    h, w = binary.shape
    labels = np.zeros((h, w), np.int32)
    # provisional labels; isolated-pixel grid is the worst case
    max_provisional = ((h + 1) // 2) * ((w + 1) // 2) + 1
    parent = np.zeros(max_provisional, np.int32)
    next_label = 0

    for i in range(h):
        for j in range(w):
            if binary[i, j] == 0:
                continue
            best = 0
            # already-scanned 8-neighbors: W, NW, N, NE
            for di, dj in ((0, -1), (-1, -1), (-1, 0), (-1, 1)):
                ni = i + di
                nj = j + dj
                if ni < 0 or nj < 0 or nj >= w:
                    continue
                lab = labels[ni, nj]
                if lab == 0:
                    continue
                # find root
                r = lab
                while parent[r] != r:
                    r = parent[r]
                if best == 0 or r < best:
                    if best != 0:
                        parent[best] = r
                    best = r
                elif r > best:
                    parent[r] = best
            if best == 0:
                next_label += 1
                parent[next_label] = next_label
                best = next_label
            labels[i, j] = best

    # resolve and renumber by first row-major occurrence
    remap = np.zeros(next_label + 1, np.int32)
    count = 0
    for i in range(h):
        for j in range(w):
            lab = labels[i, j]
            if lab == 0:
                continue
            r = lab
            while parent[r] != r:
                r = parent[r]
            if remap[r] == 0:
                count += 1
                remap[r] = count
            labels[i, j] = remap[r]
    return labels, count


def _label_numpy(binary):
    h, w = binary.shape
    fg = binary != 0
    lab = np.where(fg, np.arange(1, h * w + 1, dtype=np.int64).reshape(h, w), 0)
    big = np.int64(h * w + 2)
    while True:
        prev = lab
        padded = np.full((h + 2, w + 2), big, np.int64)
        padded[1:-1, 1:-1] = np.where(fg, lab, big)
        neighbors = np.stack([
            padded[0:-2, 0:-2], padded[0:-2, 1:-1], padded[0:-2, 2:],
            padded[1:-1, 0:-2], padded[1:-1, 2:],
            padded[2:, 0:-2], padded[2:, 1:-1], padded[2:, 2:],
        ]).min(axis=0)
        lab = np.where(fg, np.minimum(lab, neighbors), 0)
        if np.array_equal(lab, prev):
            break
    # propagated label is the component's min flat index, i.e. its first
    # row-major pixel, so ascending order matches first-occurrence order
    vals = np.unique(lab[lab > 0])
    out = np.zeros((h, w), np.int32)
    if vals.size:
        out[fg] = (np.searchsorted(vals, lab[fg]) + 1).astype(np.int32)
    return out, int(vals.size)


def label_components(binary: np.ndarray) -> tuple[np.ndarray, int]:
    """Label 8-connected foreground components of a binary image.

    Returns (labels, count): labels is int32 with background 0 and components
    numbered 1..count in order of first row-major appearance.
    """
    binary = np.ascontiguousarray(binary != 0).view(np.uint8)
    if NUMBA_ENABLED:
        labels, count = _label_jit(binary)
        return labels, int(count)
    return _label_numpy(binary)


# ---------------------------------------------------------------------------
# per-component statistics
# ---------------------------------------------------------------------------

@njit(cache=True)
def _stats_jit(labels, count):
    h, w = labels.shape
    areas = np.zeros(count + 1, np.int64)
    minx = np.full(count + 1, w, np.int64)
    miny = np.full(count + 1, h, np.int64)
    maxx = np.full(count + 1, -1, np.int64)
    maxy = np.full(count + 1, -1, np.int64)
    boundary = np.zeros(count + 1, np.int64)
    for i in range(h):
        for j in range(w):
            c = labels[i, j]
            if c == 0:
                continue
            areas[c] += 1
            if j < minx[c]:
                minx[c] = j
            if j > maxx[c]:
                maxx[c] = j
            if i < miny[c]:
                miny[c] = i
            if i > maxy[c]:
                maxy[c] = i
            if (
                i == 0 or labels[i - 1, j] == 0
                or i == h - 1 or labels[i + 1, j] == 0
                or j == 0 or labels[i, j - 1] == 0
                or j == w - 1 or labels[i, j + 1] == 0
            ):
                boundary[c] += 1
    return areas, minx, miny, maxx, maxy, boundary


def _stats_numpy(labels, count):
    h, w = labels.shape
    flat = labels.ravel()
    areas = np.bincount(flat, minlength=count + 1).astype(np.int64)
    areas[0] = 0  # background slot stays empty, matching the compiled path
    ys, xs = np.nonzero(labels)
    labs = labels[ys, xs]
    minx = np.full(count + 1, w, np.int64)
    miny = np.full(count + 1, h, np.int64)
    maxx = np.full(count + 1, -1, np.int64)
    maxy = np.full(count + 1, -1, np.int64)
    np.minimum.at(minx, labs, xs)
    np.minimum.at(miny, labs, ys)
    np.maximum.at(maxx, labs, xs)
    np.maximum.at(maxy, labs, ys)
    padded = np.zeros((h + 2, w + 2), labels.dtype)
    padded[1:-1, 1:-1] = labels
    touches_bg = (
        (padded[0:-2, 1:-1] == 0) | (padded[2:, 1:-1] == 0)
        | (padded[1:-1, 0:-2] == 0) | (padded[1:-1, 2:] == 0)
    )
    bmask = (labels > 0) & touches_bg
    boundary = np.bincount(labels[bmask], minlength=count + 1).astype(np.int64)
    return areas, minx, miny, maxx, maxy, boundary


def component_stats(labels: np.ndarray, count: int):
    """Area, bounding box (inclusive pixel indices) and 4-boundary pixel count
    for each component. Index 0 is the background slot; ignore it."""
    labels = np.ascontiguousarray(labels, dtype=np.int32)
    if NUMBA_ENABLED:
        return _stats_jit(labels, count)
    return _stats_numpy(labels, count)


# ---------------------------------------------------------------------------
# anti-aliased disk coverage (sub-pixel sample counting)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _coverage_jit(h, w, x0, y0, cxs, cys, radius, s):
    counts = np.zeros((h, w), np.int64)
    r2 = radius * radius
    for k in range(cxs.shape[0]):
        cx = cxs[k]
        cy = cys[k]
        for i in range(h):
            for sy in range(s):
                y = y0 + i + (sy + 0.5) / s
                dy2 = (y - cy) * (y - cy)
                for j in range(w):
                    for sx in range(s):
                        x = x0 + j + (sx + 0.5) / s
                        dx2 = (x - cx) * (x - cx)
                        if dy2 + dx2 <= r2:
                            counts[i, j] += 1
    return counts


def _coverage_numpy(h, w, x0, y0, cxs, cys, radius, s):
    counts = np.zeros((h, w), np.int64)
    r2 = radius * radius
    sub = (np.arange(s) + 0.5) / s
    ys = (y0 + np.arange(h, dtype=np.float64))[:, None] + sub[None, :]  # (h, s)
    xs = (x0 + np.arange(w, dtype=np.float64))[:, None] + sub[None, :]  # (w, s)
    for k in range(cxs.shape[0]):
        dy = ys - cys[k]
        dx = xs - cxs[k]
        dy2 = dy * dy
        dx2 = dx * dx
        inside = dy2[:, :, None, None] + dx2[None, None, :, :] <= r2  # (h, s, w, s)
        counts += inside.sum(axis=(1, 3), dtype=np.int64)
    return counts


def disk_coverage_counts(
    shape: tuple[int, int],
    origin: tuple[int, int],
    centers_x: np.ndarray,
    centers_y: np.ndarray,
    radius: float,
    subsamples: int = 4,
) -> np.ndarray:
    """Count, per pixel of an (h, w) region, how many of the subsamples x
    sample-disks fall inside a disk. Pixel (i, j) maps to frame coordinates
    (origin_x + j, origin_y + i); each pixel gets a subsamples^2 grid of test
    points. One disk per (centers_x[k], centers_y[k]); counts accumulate over
    k, which is how motion blur is averaged by the renderer.
    """
    h, w = shape
    x0, y0 = origin
    cxs = np.ascontiguousarray(centers_x, dtype=np.float64)
    cys = np.ascontiguousarray(centers_y, dtype=np.float64)
    if NUMBA_ENABLED:
        return _coverage_jit(h, w, float(x0), float(y0), cxs, cys, float(radius), subsamples)
    return _coverage_numpy(h, w, float(x0), float(y0), cxs, cys, float(radius), subsamples)


def warmup() -> None:
    """Trigger JIT compilation on tiny inputs so later calls are steady-state."""
    tiny = np.zeros((4, 4), np.uint8)
    tiny[1, 1] = 1
    labels, count = label_components(tiny)
    component_stats(labels, count)
    disk_coverage_counts((2, 2), (0, 0), np.array([1.0]), np.array([1.0]), 1.0, 2)
