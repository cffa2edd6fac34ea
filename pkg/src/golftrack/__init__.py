"""Golf ball tracking by detection.

A constant-velocity Kalman filter predicts the ball center each frame, a
fixed-size window is cropped around the prediction, a detector finds the ball
inside the window, and the detection feeds back as the filter measurement.
The package also ships training-patch augmentation, synthetic sequence
generation with exact ground truth, and detection/tracking evaluation.
"""

from .geometry import BBox, Detection, Point2, center, cle, from_center, iou, label_error_sensitivity
from .kalman import (DEFAULT_Q_POS, DEFAULT_Q_VEL, DEFAULT_R_POS, INIT_P_DIAG,
                     KalmanParams, KalmanState, SingularInnovationError,
                     default_cv_params, init_state, measurement_update, time_update)
from .patching import (DEFAULT_AUGMENT_SHIFT, DEFAULT_PATCH_SIZE, CropWindow,
                       FrameDims, FrameTooSmallError, augment9, augment9_grid,
                       bbox_to_frame, bbox_to_patch, crop_window, to_frame, to_patch)
from .detectors import (BlobConfig, BlobDetector, DetectContext, Detector,
                        ExternDetector, ExternError, MalformedResponseError,
                        OracleDetector, OracleNoise, ResponseIdMismatchError,
                        WorkerCrashError, WorkerReportedError, WorkerTimeoutError,
                        clip_bbox, otsu_threshold, to_grayscale, validate_detections)
from .synth import (PuttParams, Sequence, SwingParams, ball_center, ball_radius,
                    generate, putt_truth, render, swing_truth)
from .tracker import TrackRecord, TrackStatus, Tracker, TrackerConfig, run
from .metrics import (PRECISION_THRESHOLDS, SUCCESS_THRESHOLDS, TrackingReport,
                      average_precision, evaluate_tracking, fps_summary,
                      precision_curve, success_curve)
from .formats import (ResultRow, read_annotations, read_results, read_sequence_dir,
                      write_annotations, write_results, write_sequence_dir)
from .pngio import decode_png, encode_png, load_png, save_png
from .kernels import NUMBA_ENABLED, component_stats, disk_coverage_counts, label_components, warmup

__version__ = "0.1.0"

__all__ = [
    "BBox", "Detection", "Point2", "center", "cle", "from_center", "iou",
    "label_error_sensitivity",
    "KalmanParams", "KalmanState", "SingularInnovationError", "default_cv_params",
    "init_state", "measurement_update", "time_update",
    "DEFAULT_Q_POS", "DEFAULT_Q_VEL", "DEFAULT_R_POS", "INIT_P_DIAG",
    "CropWindow", "FrameDims", "FrameTooSmallError", "crop_window",
    "augment9", "augment9_grid", "bbox_to_frame", "bbox_to_patch", "to_frame", "to_patch",
    "DEFAULT_PATCH_SIZE", "DEFAULT_AUGMENT_SHIFT",
    "BlobConfig", "BlobDetector", "DetectContext", "Detector", "ExternDetector",
    "ExternError", "MalformedResponseError", "OracleDetector", "OracleNoise",
    "ResponseIdMismatchError", "WorkerCrashError", "WorkerReportedError",
    "WorkerTimeoutError", "clip_bbox", "otsu_threshold", "to_grayscale",
    "validate_detections",
    "PuttParams", "Sequence", "SwingParams", "ball_center", "ball_radius",
    "generate", "putt_truth", "render", "swing_truth",
    "TrackRecord", "TrackStatus", "Tracker", "TrackerConfig", "run",
    "PRECISION_THRESHOLDS", "SUCCESS_THRESHOLDS", "TrackingReport",
    "average_precision", "evaluate_tracking", "fps_summary", "precision_curve",
    "success_curve",
    "ResultRow", "read_annotations", "read_results", "read_sequence_dir",
    "write_annotations", "write_results", "write_sequence_dir",
    "decode_png", "encode_png", "load_png", "save_png",
    "NUMBA_ENABLED", "component_stats", "disk_coverage_counts", "label_components",
    "warmup",
]
