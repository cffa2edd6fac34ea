"""Tracking-by-detection around a constant-velocity Kalman filter.

Per frame: time update predicts the ball center, a fixed-size window is
cropped there, the detector runs on the window, and the selected detection
(mapped back to frame coordinates) drives the measurement update. Frames with
no usable detection coast on the prediction; too many in a row marks the
track lost. A lost track keeps predicting but stops invoking the detector.
"""

from __future__ import annotations

import enum
import logging
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .detectors.base import DetectContext, Detector
from .detectors.extern import ExternError
from .geometry import BBox, Detection, Point2, center, from_center
from .kalman import KalmanParams, KalmanState, default_cv_params, init_state, measurement_update, time_update
from .patching import DEFAULT_PATCH_SIZE, CropWindow, FrameDims, crop_window, to_frame

logger = logging.getLogger(__name__)

SELECT_POLICIES = ("nearest_to_prediction", "highest_score")


class TrackStatus(enum.Enum):
    TRACKED = "TRACKED"
    COASTING = "COASTING"
    LOST = "LOST"


@dataclass(frozen=True)
class TrackerConfig:
    patch_size: int = DEFAULT_PATCH_SIZE
    kalman: KalmanParams = field(default_factory=default_cv_params)
    max_coast: int = 5
    select_policy: str = "nearest_to_prediction"
    min_score: float = 0.25
    default_box_size: float = 16.0
    stop_on_lost: bool = False

    def __post_init__(self):
        if self.patch_size < 1:
            raise ValueError("patch_size must be >= 1")
        if self.max_coast < 0:
            raise ValueError("max_coast must be >= 0")
        if self.select_policy not in SELECT_POLICIES:
            raise ValueError(f"select_policy must be one of {SELECT_POLICIES}")
        if not (0.0 <= self.min_score <= 1.0):
            raise ValueError("min_score must be in [0, 1]")
        if self.default_box_size <= 0:
            raise ValueError("default_box_size must be > 0")


@dataclass
class TrackRecord:
    frame_index: int
    output_bbox: BBox
    state: KalmanState
    status: TrackStatus
    detection_used: Optional[Detection]   # frame coordinates
    window: CropWindow
    elapsed_ms: float


def _select(candidates: list[Detection], reference: Point2, policy: str) -> Optional[Detection]:
    """Pick one detection; candidates arrive sorted by descending score."""
    if not candidates:
        return None
    if policy == "highest_score":
        return candidates[0]
    dists = [(center(d.bbox).x - reference.x) ** 2 + (center(d.bbox).y - reference.y) ** 2
             for d in candidates]
    return candidates[int(np.argmin(dists))]


class Tracker:
    """Stateful single-target tracker; one init() then step() per frame."""

    def __init__(self, detector: Detector, config: Optional[TrackerConfig] = None):
        self.detector = detector
        self.config = config or TrackerConfig()
        self.state: Optional[KalmanState] = None
        self.status = TrackStatus.COASTING
        self.coast_count = 0
        self.frame_index = -1
        self._box_size: tuple[float, float] = (self.config.default_box_size,
                                               self.config.default_box_size)

    def _detect(self, patch: np.ndarray, ctx: DetectContext) -> list[Detection]:
        try:
            dets = self.detector.detect(patch, ctx)
        except ExternError as exc:
            logger.warning("external detector failed on frame %d: %s", ctx.frame_index, exc)
            return []
        return [d for d in dets if d.score >= self.config.min_score]

    def _candidates_in_frame(self, dets: list[Detection], window: CropWindow,
                             dims: FrameDims) -> list[Detection]:
        out = []
        for d in dets:
            mapped = to_frame(d, window)
            b = mapped.bbox
            if b.x >= 0 and b.y >= 0 and b.x + b.w <= dims.width and b.y + b.h <= dims.height:
                out.append(mapped)
        return out

    def init(self, frame: np.ndarray, init_center: Point2,
             init_size: Optional[float] = None) -> TrackRecord:
        """Start the track: detect once around the given center, seed the filter."""
        t0 = time.perf_counter()
        h, w = frame.shape[:2]
        dims = FrameDims(width=w, height=h)
        cfg = self.config
        if init_size is not None:
            self._box_size = (float(init_size), float(init_size))
        window = crop_window(init_center, dims, cfg.patch_size)
        patch = window.extract(frame)
        dets = self._candidates_in_frame(
            self._detect(patch, DetectContext(frame_index=0, window=window)), window, dims)
        chosen = _select(dets, init_center, cfg.select_policy)
        if chosen is not None:
            self.state = init_state(center(chosen.bbox))
            self.status = TrackStatus.TRACKED
            self._box_size = (chosen.bbox.w, chosen.bbox.h)
            output = chosen.bbox
        else:
            self.state = init_state(init_center)
            self.status = TrackStatus.COASTING
            output = from_center(init_center, self._box_size[0], self._box_size[1])
        self.coast_count = 0  # a missed init does not count against max_coast
        self.frame_index = 0
        elapsed_ms = (time.perf_counter() - t0) * 1000.0
        return TrackRecord(0, output, self.state, self.status, chosen, window, elapsed_ms)

    def step(self, frame: np.ndarray) -> TrackRecord:
        """Advance one frame; requires init() first."""
        if self.state is None:
            raise RuntimeError("call init() before step()")
        t0 = time.perf_counter()
        h, w = frame.shape[:2]
        dims = FrameDims(width=w, height=h)
        cfg = self.config
        self.frame_index += 1

        prior = time_update(self.state, cfg.kalman)
        predicted = Point2(float(prior.x[0]), float(prior.x[1]))
        window = crop_window(predicted, dims, cfg.patch_size)

        chosen: Optional[Detection] = None
        if self.status is not TrackStatus.LOST:
            patch = window.extract(frame)
            ctx = DetectContext(frame_index=self.frame_index, window=window)
            dets = self._candidates_in_frame(self._detect(patch, ctx), window, dims)
            chosen = _select(dets, predicted, cfg.select_policy)

        if chosen is not None:
            c = center(chosen.bbox)
            self.state = measurement_update(prior, np.array([c.x, c.y]), cfg.kalman)
            self.status = TrackStatus.TRACKED
            self.coast_count = 0
            self._box_size = (chosen.bbox.w, chosen.bbox.h)
            output = chosen.bbox
        else:
            self.state = prior
            self.coast_count += 1
            if self.coast_count > cfg.max_coast:
                self.status = TrackStatus.LOST
            elif self.status is not TrackStatus.LOST:
                self.status = TrackStatus.COASTING
            output = from_center(Point2(float(prior.x[0]), float(prior.x[1])),
                                 self._box_size[0], self._box_size[1])

        elapsed_ms = (time.perf_counter() - t0) * 1000.0
        return TrackRecord(self.frame_index, output, self.state, self.status,
                           chosen, window, elapsed_ms)


def run(frames, detector: Detector, init_center: Point2,
        config: Optional[TrackerConfig] = None,
        init_size: Optional[float] = None) -> list[TrackRecord]:
    """Track through an iterable of frames; returns one record per frame
    (fewer if stop_on_lost cuts the run short)."""
    frames = list(frames)
    if not frames:
        raise ValueError("no frames to track")
    tracker = Tracker(detector, config)
    records = [tracker.init(frames[0], init_center, init_size=init_size)]
    for frame in frames[1:]:
        rec = tracker.step(frame)
        records.append(rec)
        if tracker.config.stop_on_lost and rec.status is TrackStatus.LOST:
            break
    return records
