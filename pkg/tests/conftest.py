"""Shared test oracles, implemented independently of the package internals.

Everything here recomputes expected values from first principles (pixel
counting, top-k re-matching, textbook linear algebra) so the library code is
checked against something other than itself.
"""

import math

import numpy as np

from golftrack import BBox, Detection


def pixel_iou(a: BBox, b: BBox) -> float:
    """IoU by counting integer pixels inside each half-open box."""
    x0 = int(math.floor(min(a.x, b.x)))
    y0 = int(math.floor(min(a.y, b.y)))
    x1 = int(math.ceil(max(a.x + a.w, b.x + b.w)))
    y1 = int(math.ceil(max(a.y + a.h, b.y + b.h)))
    inter = union = 0
    for y in range(y0, y1):
        for x in range(x0, x1):
            in_a = a.x <= x < a.x + a.w and a.y <= y < a.y + a.h
            in_b = b.x <= x < b.x + b.w and b.y <= y < b.y + b.h
            inter += in_a and in_b
            union += in_a or in_b
    return inter / union if union else 0.0


def random_int_box(rng: np.random.Generator, span: int = 60, max_side: int = 30) -> BBox:
    x = int(rng.integers(-span, span))
    y = int(rng.integers(-span, span))
    w = int(rng.integers(1, max_side))
    h = int(rng.integers(1, max_side))
    return BBox(float(x), float(y), float(w), float(h))


def _greedy_tp_count(ranked, truths, iou_thr):
    """True positives of a ranked detection list, greedy highest-IoU matching."""
    from golftrack import iou as impl_iou
    remaining = {k: list(v) for k, v in truths.items()}
    tp = 0
    for key, det in ranked:
        pool = remaining[key]
        best_j, best = -1, 0.0
        for j, gt in enumerate(pool):
            if gt is None:
                continue
            ov = impl_iou(det.bbox, gt)
            if ov > best:
                best, best_j = ov, j
        if best_j >= 0 and best >= iou_thr:
            tp += 1
            pool[best_j] = None
    return tp


def ap_bruteforce(predictions, truths, iou_thr) -> float:
    """AP by re-running the matcher at every score cut and summing rectangles
    under the precision envelope."""
    n_gt = sum(len(v) for v in truths.values())
    pooled = [(k, d) for k, dets in predictions.items() for d in dets]
    pooled.sort(key=lambda kd: -kd[1].score)
    points = []
    for k in range(1, len(pooled) + 1):
        tp = _greedy_tp_count(pooled[:k], truths, iou_thr)
        points.append((tp / n_gt, tp / k))
    ap = 0.0
    prev_r = 0.0
    for r in sorted({r for r, _ in points}):
        if r <= prev_r:
            continue
        envelope = max(p for rr, p in points if rr >= r)
        ap += (r - prev_r) * envelope
        prev_r = r
    return ap


def random_ap_instance(rng: np.random.Generator):
    """A small detection-eval problem: a few images, boxes on a coarse grid so
    IoU values hit the interesting overlap range."""
    n_images = int(rng.integers(1, 4))
    truths = {}
    preds = {}
    for img in range(n_images):
        n_gt = int(rng.integers(0, 4))
        truths[img] = [
            BBox(float(rng.integers(0, 40)), float(rng.integers(0, 40)),
                 float(rng.integers(4, 14)), float(rng.integers(4, 14)))
            for _ in range(n_gt)
        ]
        n_det = int(rng.integers(0, 5))
        dets = []
        for _ in range(n_det):
            if truths[img] and rng.random() < 0.7:
                base = truths[img][int(rng.integers(0, len(truths[img])))]
                b = BBox(base.x + float(rng.integers(-3, 4)),
                         base.y + float(rng.integers(-3, 4)),
                         max(1.0, base.w + float(rng.integers(-2, 3))),
                         max(1.0, base.h + float(rng.integers(-2, 3))))
            else:
                b = BBox(float(rng.integers(0, 40)), float(rng.integers(0, 40)),
                         float(rng.integers(4, 14)), float(rng.integers(4, 14)))
            dets.append(Detection(b, float(np.round(rng.uniform(0.05, 1.0), 3))))
        dets.sort(key=lambda d: -d.score)
        preds[img] = dets
    if sum(len(v) for v in truths.values()) == 0:
        truths[0] = [BBox(0.0, 0.0, 8.0, 8.0)]
    return preds, truths


def kalman_reference(x, P, z, A, H, Q, R):
    """Textbook predict + update with a general matrix inverse."""
    xp = A @ x
    Pp = A @ P @ A.T + Q
    S = H @ Pp @ H.T + R
    K = Pp @ H.T @ np.linalg.inv(S)
    xn = xp + K @ (np.asarray(z, dtype=float) - H @ xp)
    Pn = (np.eye(len(x)) - K @ H) @ Pp
    return xp, Pp, xn, Pn


def draw_disks(size, disks, value=230, background=0):
    """Hard-edged disks on a flat background; independent of the renderer.

    disks: iterable of (cx, cy, radius).
    """
    img = np.full((size, size), background, dtype=np.uint8)
    yy, xx = np.mgrid[0:size, 0:size]
    for cx, cy, r in disks:
        img[(xx - cx) ** 2 + (yy - cy) ** 2 <= r * r] = value
    return img


def random_psd(rng: np.random.Generator, n: int) -> np.ndarray:
    m = rng.normal(size=(n, n))
    return m @ m.T + 1e-6 * np.eye(n)
