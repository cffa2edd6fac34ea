"""Evaluation metrics for detection and tracking runs.

Detection quality is average precision over score-ranked pooled detections
with greedy IoU matching per image. Tracking quality follows the usual
one-pass-evaluation pair: a precision curve over center location error and a
success curve over IoU overlap, the latter summarized by its mean. Frames
where the tracker reports no box count as failures at every threshold.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .geometry import BBox, Detection, cle, iou

SUCCESS_THRESHOLDS = np.arange(21) / 20.0
PRECISION_THRESHOLDS = (1.0, 2.0, 5.0)
DEFAULT_IOU_THRESHOLDS = (0.25, 0.5)


def average_precision(predictions: Mapping[object, Sequence[Detection]],
                      truths: Mapping[object, Sequence[BBox]],
                      iou_thr: float = 0.5) -> float:
    """All-point interpolated AP.

    Detections pool across images and sort by descending score (stable, so
    ties keep input order). Each detection greedily claims the unmatched
    ground truth of its image with the highest IoU; it is a true positive if
    that IoU reaches iou_thr, otherwise a false positive.
    """
    n_truth = sum(len(v) for v in truths.values())
    if n_truth == 0:
        raise ValueError("no ground truth boxes; AP is undefined")
    unknown = set(predictions) - set(truths)
    if unknown:
        raise ValueError(f"predictions for images absent from ground truth: {sorted(map(str, unknown))}")

    pooled = [(key, det) for key, dets in predictions.items() for det in dets]
    pooled.sort(key=lambda kd: -kd[1].score)
    unmatched: dict[object, list[Optional[BBox]]] = {k: list(v) for k, v in truths.items()}

    tp = np.zeros(len(pooled))
    for i, (key, det) in enumerate(pooled):
        pool = unmatched[key]
        best_j = -1
        best_iou = 0.0
        for j, gt in enumerate(pool):
            if gt is None:
                continue
            ov = iou(det.bbox, gt)
            if ov > best_iou:
                best_iou = ov
                best_j = j
        if best_j >= 0 and best_iou >= iou_thr:
            tp[i] = 1.0
            pool[best_j] = None

    if len(pooled) == 0:
        return 0.0
    cum_tp = np.cumsum(tp)
    recall = cum_tp / n_truth
    precision = cum_tp / np.arange(1, len(pooled) + 1)

    mrec = np.concatenate(([0.0], recall, [1.0]))
    mpre = np.concatenate(([0.0], precision, [0.0]))
    for i in range(len(mpre) - 2, -1, -1):
        mpre[i] = max(mpre[i], mpre[i + 1])
    changed = np.nonzero(mrec[1:] != mrec[:-1])[0]
    return float(np.sum((mrec[changed + 1] - mrec[changed]) * mpre[changed + 1]))


def _pair_errors(pairs: Sequence[tuple[Optional[BBox], BBox]]) -> tuple[np.ndarray, np.ndarray]:
    """Per-frame (CLE, IoU); a missing prediction scores (inf, 0)."""
    if len(pairs) == 0:
        raise ValueError("no evaluation pairs")
    cles = np.empty(len(pairs))
    ious = np.empty(len(pairs))
    for i, (pred, gt) in enumerate(pairs):
        if pred is None:
            cles[i] = np.inf
            ious[i] = 0.0
        else:
            cles[i] = cle(pred, gt)
            ious[i] = iou(pred, gt)
    return cles, ious


def precision_curve(pairs: Sequence[tuple[Optional[BBox], BBox]],
                    thresholds: Sequence[float] = PRECISION_THRESHOLDS) -> dict[float, float]:
    """Fraction of frames with center location error <= threshold, in pixels."""
    cles, _ = _pair_errors(pairs)
    return {float(t): float(np.mean(cles <= t)) for t in thresholds}


def success_curve(pairs: Sequence[tuple[Optional[BBox], BBox]]) -> tuple[np.ndarray, float]:
    """Success rate at 21 overlap thresholds 0.00..1.00 plus its mean (AUC).

    A frame succeeds at threshold t when IoU is strictly greater than t, so
    even a perfect tracker scores 0 at t=1 and the best possible AUC is 20/21.
    """
    _, ious = _pair_errors(pairs)
    curve = np.array([float(np.mean(ious > t)) for t in SUCCESS_THRESHOLDS])
    return curve, float(np.mean(curve))


def fps_summary(elapsed_ms: Sequence[float]) -> float:
    """Frames per second from per-frame wall-clock millisecond costs."""
    if len(elapsed_ms) == 0:
        raise ValueError("no frames timed")
    total_s = float(np.sum(elapsed_ms)) / 1000.0
    if total_s <= 0:
        raise ValueError("total elapsed time must be positive")
    return len(elapsed_ms) / total_s


@dataclass
class TrackingReport:
    """Per-sequence evaluation bundle."""

    n_frames: int
    precision_at: dict[float, float]
    success: np.ndarray            # 21 values over SUCCESS_THRESHOLDS
    success_auc: float
    fps: float

    @property
    def summary_row(self) -> dict[str, float]:
        row = {"frames": self.n_frames, "auc": self.success_auc, "fps": self.fps}
        for t, v in self.precision_at.items():
            row[f"precision@{t:g}"] = v
        return row


def evaluate_tracking(pairs: Sequence[tuple[Optional[BBox], BBox]],
                      elapsed_ms: Sequence[float],
                      precision_thresholds: Sequence[float] = PRECISION_THRESHOLDS) -> TrackingReport:
    curve, auc = success_curve(pairs)
    return TrackingReport(
        n_frames=len(pairs),
        precision_at=precision_curve(pairs, precision_thresholds),
        success=curve,
        success_auc=auc,
        fps=fps_summary(elapsed_ms),
    )
