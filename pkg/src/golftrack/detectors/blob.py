"""Classical blob detector: Otsu threshold, 8-connected components, shape filters.

Made for bright near-circular balls on darker backgrounds. The per-pixel work
(labeling, component stats) runs through the kernels module, so it is numba
accelerated with a numpy fallback.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..geometry import BBox, Detection
from ..kernels import component_stats, label_components
from .base import DetectContext

LUMA_WEIGHTS = (0.299, 0.587, 0.114)


@dataclass(frozen=True)
class BlobConfig:
    """Component filters: area window (px^2) and minimum circularity 4*pi*A/P^2."""

    min_area: int = 9
    max_area: int = 2000
    min_circularity: float = 0.6


def to_grayscale(patch: np.ndarray) -> np.ndarray:
    """uint8 luminance image; RGB is collapsed with the 0.299/0.587/0.114 weights."""
    if patch.ndim == 2:
        return patch
    if patch.ndim == 3 and patch.shape[2] == 1:
        return patch[:, :, 0]
    if patch.ndim == 3 and patch.shape[2] == 3:
        r, g, b = LUMA_WEIGHTS
        lum = r * patch[:, :, 0] + g * patch[:, :, 1] + b * patch[:, :, 2]
        return np.clip(np.rint(lum), 0, 255).astype(np.uint8)
    raise ValueError(f"expected (h, w) or (h, w, 1|3) image, got shape {patch.shape}")


def otsu_threshold(gray: np.ndarray) -> Optional[int]:
    """Otsu's global threshold; None when the histogram has no valid split
    (e.g. a uniform image). Foreground is the class above the threshold."""
    hist = np.bincount(gray.ravel(), minlength=256).astype(np.float64)
    total = hist.sum()
    if total == 0:
        return None
    omega = np.cumsum(hist) / total
    mu = np.cumsum(hist * np.arange(256)) / total
    mu_t = mu[-1]
    valid = (omega > 0) & (omega < 1)
    if not valid.any():
        return None
    sigma_b = np.zeros(256)
    sigma_b[valid] = (mu_t * omega[valid] - mu[valid]) ** 2 / (omega[valid] * (1.0 - omega[valid]))
    return int(np.argmax(sigma_b))


class BlobDetector:
    """Detect bright blobs; score is the circularity estimate clipped to [0, 1]."""

    def __init__(self, config: BlobConfig = BlobConfig()):
        self.config = config

    def detect(self, patch: np.ndarray, context: DetectContext | None = None) -> list[Detection]:
        gray = to_grayscale(patch)
        thr = otsu_threshold(gray)
        if thr is None:
            return []
        binary = gray > thr
        labels, count = label_components(binary)
        if count == 0:
            return []
        areas, minx, miny, maxx, maxy, boundary = component_stats(labels, count)

        dets: list[Detection] = []
        cfg = self.config
        for c in range(1, count + 1):
            area = int(areas[c])
            if area < cfg.min_area or area > cfg.max_area:
                continue
            # perimeter estimated by the 4-boundary pixel count
            perim = max(int(boundary[c]), 1)
            circ = 4.0 * math.pi * area / (perim * perim)
            if circ < cfg.min_circularity:
                continue
            bbox = BBox(
                float(minx[c]),
                float(miny[c]),
                float(maxx[c] - minx[c] + 1),
                float(maxy[c] - miny[c] + 1),
            )
            dets.append(Detection(bbox, min(circ, 1.0)))

        dets.sort(key=lambda d: -d.score)
        return dets
