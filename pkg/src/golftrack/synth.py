"""Synthetic golf sequences with exact ground truth.

Two motion models rendered to 8-bit grayscale frames: a swing (image-plane
ballistic arc whose apparent ball size decays each frame) and a putt
(straight-line roll decelerating under friction). Ground truth annotates the
unblurred disk position at frame time; motion blur is an average over
sub-frame disk positions along the inter-frame displacement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .geometry import BBox, Point2, from_center
from .kernels import disk_coverage_counts
from .patching import FrameDims

BACKGROUND_VALUE = 96
BALL_VALUE = 230
MIN_RADIUS = 1.5
SUPERSAMPLES = 4


@dataclass(frozen=True)
class SwingParams:
    """Ballistic flight in image coordinates (y down), shrinking with depth."""

    start: Point2
    v0: float                      # launch speed, px/frame
    angle: float                   # launch angle, degrees above horizontal
    gravity: float = 0.15          # px/frame^2, pulls +y
    depth_rate: float = 1.0        # apparent-size multiplier per frame
    r0: float = 15.0               # initial ball radius, px
    frames: int = 50
    frame_dims: FrameDims = field(default_factory=lambda: FrameDims(1280, 720))
    noise_sigma: float = 0.0       # gray levels
    blur_samples: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.r0 < 2:
            raise ValueError("r0 must be >= 2 px")
        if self.frames < 2:
            raise ValueError("need at least 2 frames")
        if self.gravity < 0:
            raise ValueError("gravity must be >= 0")
        if not (0 < self.depth_rate <= 1):
            raise ValueError("depth_rate must be in (0, 1]")
        if self.blur_samples < 1:
            raise ValueError("blur_samples must be >= 1")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")


@dataclass(frozen=True)
class PuttParams:
    """Straight roll along a heading, decelerating until it stops."""

    start: Point2
    v0: float                      # px/frame
    heading: float                 # degrees, 0 = +x, measured toward +y
    friction: float = 0.0          # px/frame^2 deceleration
    r: float = 8.0
    frames: int = 50
    frame_dims: FrameDims = field(default_factory=lambda: FrameDims(1280, 720))
    noise_sigma: float = 0.0
    blur_samples: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.friction < 0:
            raise ValueError("friction must be >= 0")
        if self.r < 2:
            raise ValueError("r must be >= 2 px")
        if self.frames < 2:
            raise ValueError("need at least 2 frames")
        if self.blur_samples < 1:
            raise ValueError("blur_samples must be >= 1")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")


SynthParams = Union[SwingParams, PuttParams]


@dataclass
class Sequence:
    """Ordered frames plus per-frame ground truth (None once the ball is gone)."""

    frames: list[np.ndarray]
    annotations: list[Optional[BBox]]
    fps_nominal: float = 30.0

    def __post_init__(self):
        if len(self.frames) != len(self.annotations):
            raise ValueError("one annotation slot per frame required")

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def frame_dims(self) -> FrameDims:
        h, w = self.frames[0].shape[:2]
        return FrameDims(width=w, height=h)


def _swing_center(p: SwingParams, t: float) -> Point2:
    theta = math.radians(p.angle)
    x = p.start.x + p.v0 * math.cos(theta) * t
    y = p.start.y - p.v0 * math.sin(theta) * t + 0.5 * p.gravity * t * t
    return Point2(x, y)


def _putt_center(p: PuttParams, t: float) -> Point2:
    # distance is the exact integral of speed(t) = max(0, v0 - friction*t)
    if p.friction > 0:
        t_stop = p.v0 / p.friction
        tt = min(t, t_stop)
        dist = p.v0 * tt - 0.5 * p.friction * tt * tt
    else:
        dist = p.v0 * t
    h = math.radians(p.heading)
    return Point2(p.start.x + dist * math.cos(h), p.start.y + dist * math.sin(h))


def ball_center(p: SynthParams, t: float) -> Point2:
    return _swing_center(p, t) if isinstance(p, SwingParams) else _putt_center(p, t)


def ball_radius(p: SynthParams, t: int) -> float:
    if isinstance(p, SwingParams):
        return max(p.r0 * p.depth_rate**t, MIN_RADIUS)
    return p.r


def _visible(b: BBox, dims: FrameDims) -> bool:
    return b.x + b.w > 0 and b.x < dims.width and b.y + b.h > 0 and b.y < dims.height


def swing_truth(p: SwingParams, t: int) -> Optional[BBox]:
    """Ground-truth bbox at frame t, or None once the ball has left the frame."""
    if not (0 <= t < p.frames):
        raise ValueError(f"frame index {t} outside [0, {p.frames})")
    r = ball_radius(p, t)
    b = from_center(_swing_center(p, t), 2 * r, 2 * r)
    return b if _visible(b, p.frame_dims) else None


def putt_truth(p: PuttParams, t: int) -> Optional[BBox]:
    if not (0 <= t < p.frames):
        raise ValueError(f"frame index {t} outside [0, {p.frames})")
    b = from_center(_putt_center(p, t), 2 * p.r, 2 * p.r)
    return b if _visible(b, p.frame_dims) else None


def truth(p: SynthParams, t: int) -> Optional[BBox]:
    return swing_truth(p, t) if isinstance(p, SwingParams) else putt_truth(p, t)


def render(truth_bbox: Optional[BBox], p: SynthParams, t: int) -> np.ndarray:
    """Render frame t: noisy mid-gray background, anti-aliased white disk,
    motion blur averaged over blur_samples sub-frame positions."""
    dims = p.frame_dims
    h, w = dims.height, dims.width
    rng = np.random.default_rng([p.seed, t])
    if p.noise_sigma > 0:
        bg = BACKGROUND_VALUE + rng.normal(0.0, p.noise_sigma, (h, w))
    else:
        bg = np.full((h, w), float(BACKGROUND_VALUE))
    if truth_bbox is None:
        return np.clip(np.rint(bg), 0, 255).astype(np.uint8)

    cx = truth_bbox.x + truth_bbox.w / 2.0
    cy = truth_bbox.y + truth_bbox.h / 2.0
    radius = truth_bbox.w / 2.0
    disp = ball_center(p, t + 1)
    dx = disp.x - cx
    dy = disp.y - cy

    n = p.blur_samples
    fracs = (np.arange(n) + 0.5) / n - 0.5  # exposure centered on frame time
    cxs = cx + fracs * dx
    cys = cy + fracs * dy

    x0 = max(int(np.floor(cxs.min() - radius)) - 1, 0)
    y0 = max(int(np.floor(cys.min() - radius)) - 1, 0)
    x1 = min(int(np.ceil(cxs.max() + radius)) + 1, w)
    y1 = min(int(np.ceil(cys.max() + radius)) + 1, h)
    img = bg
    if x1 > x0 and y1 > y0:
        counts = disk_coverage_counts((y1 - y0, x1 - x0), (x0, y0), cxs, cys, radius, SUPERSAMPLES)
        alpha = counts / float(n * SUPERSAMPLES * SUPERSAMPLES)
        region = img[y0:y1, x0:x1]
        img[y0:y1, x0:x1] = region + (BALL_VALUE - region) * alpha
    return np.clip(np.rint(img), 0, 255).astype(np.uint8)


def generate(p: SynthParams) -> Sequence:
    """Compose truth and render for every frame."""
    frames = []
    annotations = []
    for t in range(p.frames):
        b = truth(p, t)
        frames.append(render(b, p, t))
        annotations.append(b)
    return Sequence(frames=frames, annotations=annotations)
