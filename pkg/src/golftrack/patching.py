"""Square crop windows around predicted positions, patch/frame coordinate
mapping, and the 3x3 shifted-window augmentation grid.

Windows are always exactly size x size and always lie fully inside the frame;
predicted centers are rounded to the nearest pixel before windowing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import BBox, Detection, Point2

DEFAULT_PATCH_SIZE = 416
DEFAULT_AUGMENT_SHIFT = 100


class FrameTooSmallError(ValueError):
    """Frame cannot contain a full crop window; pad the frame or shrink the window."""


@dataclass(frozen=True)
class FrameDims:
    width: int
    height: int

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"frame dims must be >= 1, got {self.width}x{self.height}")


@dataclass(frozen=True)
class CropWindow:
    """Top-left origin (integer pixels) of a size x size window in the frame."""

    origin_x: int
    origin_y: int
    size: int

    def contains(self, b: BBox) -> bool:
        return (
            b.x >= self.origin_x
            and b.y >= self.origin_y
            and b.x + b.w <= self.origin_x + self.size
            and b.y + b.h <= self.origin_y + self.size
        )

    def extract(self, frame: np.ndarray) -> np.ndarray:
        """Slice the window out of an image array (h, w[, c])."""
        return frame[
            self.origin_y : self.origin_y + self.size,
            self.origin_x : self.origin_x + self.size,
        ]


def _round_half_up(v: float) -> int:
    return int(np.floor(v + 0.5))


def crop_window(predicted_center: Point2, frame: FrameDims, size: int = DEFAULT_PATCH_SIZE) -> CropWindow:
    """Window centered at the rounded predicted center, clamped inside the frame."""
    if size <= 0:
        raise ValueError("window size must be positive")
    if frame.width < size or frame.height < size:
        raise FrameTooSmallError(
            f"frame {frame.width}x{frame.height} cannot hold a {size}x{size} window; "
            "pad the frame or use a smaller window"
        )
    ox = _round_half_up(predicted_center.x) - size // 2
    oy = _round_half_up(predicted_center.y) - size // 2
    ox = min(max(ox, 0), frame.width - size)
    oy = min(max(oy, 0), frame.height - size)
    return CropWindow(origin_x=ox, origin_y=oy, size=size)


def to_frame(d: Detection, w: CropWindow) -> Detection:
    """Patch-local detection -> frame coordinates."""
    b = d.bbox
    return Detection(BBox(b.x + w.origin_x, b.y + w.origin_y, b.w, b.h), d.score)


def to_patch(d: Detection, w: CropWindow) -> Detection:
    """Frame detection -> patch-local coordinates."""
    b = d.bbox
    return Detection(BBox(b.x - w.origin_x, b.y - w.origin_y, b.w, b.h), d.score)


def bbox_to_patch(b: BBox, w: CropWindow) -> BBox:
    return BBox(b.x - w.origin_x, b.y - w.origin_y, b.w, b.h)


def bbox_to_frame(b: BBox, w: CropWindow) -> BBox:
    return BBox(b.x + w.origin_x, b.y + w.origin_y, b.w, b.h)


def augment9(
    ball: BBox,
    frame: FrameDims,
    size: int = DEFAULT_PATCH_SIZE,
    shift: int = DEFAULT_AUGMENT_SHIFT,
) -> list[CropWindow]:
    """The 3x3 grid of shifted crop windows around a labeled ball.

    Candidate centers are the ball center offset by {-shift, 0, +shift} in
    each axis, visited row-major over (dy, dx). Each window is clamped inside
    the frame; windows that no longer contain the whole ball are dropped and
    windows that clamp to the same origin are deduplicated (first one kept).
    An interior ball yields exactly 9 distinct windows.
    """
    cx = ball.x + ball.w / 2.0
    cy = ball.y + ball.h / 2.0
    windows: list[CropWindow] = []
    seen: set[tuple[int, int]] = set()
    for dy in (-shift, 0, shift):
        for dx in (-shift, 0, shift):
            w = crop_window(Point2(cx + dx, cy + dy), frame, size)
            key = (w.origin_x, w.origin_y)
            if key in seen or not w.contains(ball):
                continue
            seen.add(key)
            windows.append(w)
    return windows


def augment9_grid(
    ball: BBox,
    frame: FrameDims,
    size: int = DEFAULT_PATCH_SIZE,
    shift: int = DEFAULT_AUGMENT_SHIFT,
) -> list[tuple[int, int, CropWindow]]:
    """augment9 with the (row, col) grid position of each surviving window."""
    cx = ball.x + ball.w / 2.0
    cy = ball.y + ball.h / 2.0
    out: list[tuple[int, int, CropWindow]] = []
    seen: set[tuple[int, int]] = set()
    for row, dy in enumerate((-shift, 0, shift)):
        for col, dx in enumerate((-shift, 0, shift)):
            w = crop_window(Point2(cx + dx, cy + dy), frame, size)
            key = (w.origin_x, w.origin_y)
            if key in seen or not w.contains(ball):
                continue
            seen.add(key)
            out.append((row, col, w))
    return out
