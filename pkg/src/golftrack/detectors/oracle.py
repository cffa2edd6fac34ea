"""Seeded noisy oracle detector: a controllable stand-in for a trained model.

Given per-frame ground truth it emits the truth box perturbed by Gaussian
center noise and multiplicative (log-normal) size noise, plus Poisson-many
uniform false positives. Everything is drawn from a PCG64 generator seeded
with (seed, frame_index), so output is reproducible byte-for-byte. Draw
order per frame is fixed: detect coin, center noise (2), size noise, true
score, false-positive count, then per false positive (cx, cy, side, score).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from ..geometry import BBox, Detection
from ..patching import bbox_to_patch
from .base import DetectContext, clip_bbox

TruthLookup = Callable[[int], Optional[BBox]]

TRUE_SCORE_RANGE = (0.7, 1.0)
FP_SCORE_RANGE = (0.1, 0.7)
FP_SIDE_RANGE = (3.0, 30.0)


@dataclass(frozen=True)
class OracleNoise:
    """Noise model: detection probability, center/size jitter, false-positive rate."""

    p_detect: float = 1.0
    sigma_center: float = 0.0
    sigma_size: float = 0.0
    fp_rate: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not (0.0 <= self.p_detect <= 1.0):
            raise ValueError("p_detect must be in [0, 1]")
        if self.sigma_center < 0 or self.sigma_size < 0 or self.fp_rate < 0:
            raise ValueError("noise magnitudes must be >= 0")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")


class OracleDetector:
    """Detector that consults ground truth instead of image content.

    `truth` is either a sequence of per-frame optional boxes or a callable
    frame_index -> Optional[BBox], in frame coordinates. The context's crop
    window maps truth into the patch; truth outside the patch is invisible.
    """

    def __init__(self, truth: Sequence[Optional[BBox]] | TruthLookup, noise: OracleNoise = OracleNoise()):
        if callable(truth):
            self._lookup: TruthLookup = truth
        else:
            boxes = list(truth)
            self._lookup = lambda i: boxes[i] if 0 <= i < len(boxes) else None
        self.noise = noise

    def detect(self, patch: np.ndarray, context: DetectContext) -> list[Detection]:
        h, w = patch.shape[0], patch.shape[1]
        rng = np.random.default_rng([self.noise.seed, context.frame_index])

        truth = self._lookup(context.frame_index)
        if truth is not None and context.window is not None:
            truth = bbox_to_patch(truth, context.window)
        if truth is not None and clip_bbox(truth, w, h) is None:
            truth = None  # outside the patch: invisible to a real detector

        dets: list[Detection] = []
        coin = rng.random()
        if truth is not None and coin < self.noise.p_detect:
            dcx, dcy = rng.normal(0.0, self.noise.sigma_center, 2)
            size_factor = float(np.exp(rng.normal(0.0, self.noise.sigma_size)))
            score = float(rng.uniform(*TRUE_SCORE_RANGE))
            bw = truth.w * size_factor
            bh = truth.h * size_factor
            cx = truth.x + truth.w / 2.0 + dcx
            cy = truth.y + truth.h / 2.0 + dcy
            box = clip_bbox(BBox(cx - bw / 2.0, cy - bh / 2.0, bw, bh), w, h)
            if box is not None:
                dets.append(Detection(box, score))

        for _ in range(int(rng.poisson(self.noise.fp_rate))):
            cx = float(rng.uniform(0, w))
            cy = float(rng.uniform(0, h))
            side = float(rng.uniform(*FP_SIDE_RANGE))
            score = float(rng.uniform(*FP_SCORE_RANGE))
            box = clip_bbox(BBox(cx - side / 2.0, cy - side / 2.0, side, side), w, h)
            if box is not None:
                dets.append(Detection(box, score))

        dets.sort(key=lambda d: -d.score)
        return dets
