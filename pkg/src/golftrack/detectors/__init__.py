"""Pluggable detector boundary and the three built-in implementations.

A detector maps a cropped image patch to a list of Detections in patch-local
coordinates, sorted by descending score. Implementations here: a seeded noisy
oracle (test double for trained CNNs), a classical blob detector for synthetic
imagery, and a client for an external detector worker process.
"""

from .base import DetectContext, Detector, clip_bbox, validate_detections
from .blob import BlobConfig, BlobDetector, otsu_threshold, to_grayscale
from .extern import (
    ExternDetector,
    ExternError,
    MalformedResponseError,
    ResponseIdMismatchError,
    WorkerCrashError,
    WorkerReportedError,
    WorkerTimeoutError,
)
from .oracle import OracleDetector, OracleNoise

__all__ = [
    "BlobConfig",
    "BlobDetector",
    "DetectContext",
    "Detector",
    "clip_bbox",
    "to_grayscale",
    "ExternDetector",
    "ExternError",
    "MalformedResponseError",
    "OracleDetector",
    "OracleNoise",
    "ResponseIdMismatchError",
    "WorkerCrashError",
    "WorkerReportedError",
    "WorkerTimeoutError",
    "otsu_threshold",
    "validate_detections",
]
