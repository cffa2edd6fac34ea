"""Pixel-space primitives: points, boxes, IoU and center-location error.

Coordinate conventions: origin at the top-left of the image, x grows
rightward, y grows downward. A box with corner (x, y) and size (w, h)
covers the half-open region [x, x+w) x [y, y+h), so two adjacent
integer boxes have IoU exactly 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Point2:
    """A 2D point in pixel coordinates (real-valued)."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"point coordinates must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box: left edge x, top edge y, width w, height h (pixels)."""

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.w, self.h)):
            raise ValueError("box fields must be finite")
        if self.w <= 0 or self.h <= 0:
            raise ValueError(f"box size must be positive, got w={self.w}, h={self.h}")

    @property
    def area(self) -> float:
        return self.w * self.h


@dataclass(frozen=True)
class Detection:
    """A detector output: box plus confidence score in [0, 1]."""

    bbox: BBox
    score: float

    def __post_init__(self):
        if not (0.0 <= self.score <= 1.0):
            raise ValueError(f"score must be in [0, 1], got {self.score}")


def center(b: BBox) -> Point2:
    return Point2(b.x + b.w / 2.0, b.y + b.h / 2.0)


def from_center(c: Point2, w: float, h: float) -> BBox:
    return BBox(c.x - w / 2.0, c.y - h / 2.0, w, h)


def iou(a: BBox, b: BBox) -> float:
    """Intersection-over-union of two boxes; 0 when disjoint, 1 when identical."""
    ix = min(a.x + a.w, b.x + b.w) - max(a.x, b.x)
    iy = min(a.y + a.h, b.y + b.h) - max(a.y, b.y)
    if ix <= 0.0 or iy <= 0.0:
        return 0.0
    inter = ix * iy
    union = a.area + b.area - inter
    # (x + w) - x can exceed w by an ulp, pushing the ratio past 1 for
    # identical float boxes; the true value never leaves [0, 1].
    return min(1.0, inter / union)


def cle(a: BBox, b: BBox) -> float:
    """Center location error: Euclidean distance between box centers (pixels)."""
    ca, cb = center(a), center(b)
    return math.hypot(ca.x - cb.x, ca.y - cb.y)


def label_error_sensitivity(side: float) -> dict[str, float]:
    """IoU drop caused by a 1-pixel annotation error on a square box of the given side.

    Reports both plausible readings of a "1-pixel error": a size error with
    corner-aligned boxes (side vs side-1) and a 1-pixel center shift of two
    equal boxes. Returned values are 1 - IoU.
    """
    if side <= 1:
        raise ValueError("side must exceed 1 pixel")
    truth = BBox(0, 0, side, side)
    shrunk = BBox(0, 0, side - 1, side - 1)
    shifted = BBox(1, 0, side, side)
    return {
        "corner_aligned": 1.0 - iou(truth, shrunk),
        "center_shift": 1.0 - iou(truth, shifted),
    }
