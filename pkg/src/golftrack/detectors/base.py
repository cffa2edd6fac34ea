"""Detector contract shared by every implementation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Protocol, runtime_checkable

import numpy as np

from ..geometry import BBox, Detection
from ..patching import CropWindow


@dataclass(frozen=True)
class DetectContext:
    """Where the patch came from: frame index and the crop window."""

    frame_index: int
    window: Optional[CropWindow] = None


@runtime_checkable
class Detector(Protocol):
    def detect(self, patch: np.ndarray, context: DetectContext) -> list[Detection]:
        """Detections in patch-local coordinates, sorted by descending score."""
        ...


def clip_bbox(b: BBox, width: float, height: float) -> Optional[BBox]:
    """Clip a box to [0, width) x [0, height); None if nothing remains."""
    x0 = max(b.x, 0.0)
    y0 = max(b.y, 0.0)
    x1 = min(b.x + b.w, float(width))
    y1 = min(b.y + b.h, float(height))
    if x1 - x0 <= 0 or y1 - y0 <= 0:
        return None
    return BBox(x0, y0, x1 - x0, y1 - y0)


def validate_detections(dets: list[Detection], patch_shape: tuple[int, ...]) -> None:
    """Assert the interface invariants: in-bounds boxes, scores in [0, 1],
    sorted by descending score. Raises ValueError on the first violation."""
    h, w = patch_shape[0], patch_shape[1]
    prev = float("inf")
    for d in dets:
        b = d.bbox
        if b.x < 0 or b.y < 0 or b.x + b.w > w or b.y + b.h > h:
            raise ValueError(f"detection box {b} leaves the {w}x{h} patch")
        if not (0.0 <= d.score <= 1.0):
            raise ValueError(f"score {d.score} outside [0, 1]")
        if d.score > prev:
            raise ValueError("detections not sorted by descending score")
        prev = d.score
