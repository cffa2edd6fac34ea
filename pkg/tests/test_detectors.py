"""All three detector implementations against the shared interface contract."""

import sys
from pathlib import Path

import numpy as np
import pytest

from golftrack import (BBox, BlobConfig, BlobDetector, CropWindow, DetectContext,
                       Detection, Detector, ExternDetector, MalformedResponseError,
                       OracleDetector, OracleNoise, ResponseIdMismatchError,
                       WorkerCrashError, WorkerReportedError, WorkerTimeoutError,
                       center, clip_bbox, from_center, otsu_threshold, to_grayscale,
                       validate_detections)

from conftest import draw_disks

STUB = str(Path(__file__).parent / "stub_worker.py")


def stub_cmd(*args):
    return [sys.executable, STUB, *args]


def ctx(frame_index=0, window=None):
    return DetectContext(frame_index=frame_index, window=window)


class TestValidator:
    def test_accepts_valid(self):
        dets = [Detection(BBox(0, 0, 5, 5), 0.9), Detection(BBox(10, 10, 5, 5), 0.3)]
        validate_detections(dets, (416, 416))

    def test_rejects_out_of_bounds(self):
        with pytest.raises(ValueError):
            validate_detections([Detection(BBox(410, 0, 10, 5), 0.5)], (416, 416))

    def test_rejects_unsorted(self):
        dets = [Detection(BBox(0, 0, 5, 5), 0.3), Detection(BBox(10, 10, 5, 5), 0.9)]
        with pytest.raises(ValueError):
            validate_detections(dets, (416, 416))


class TestClipBBox:
    def test_inside_unchanged(self):
        b = BBox(10, 10, 5, 5)
        assert clip_bbox(b, 100, 100) == b

    def test_partial_clip(self):
        out = clip_bbox(BBox(-3, 4, 10, 10), 100, 100)
        assert (out.x, out.y, out.w, out.h) == (0, 4, 7, 10)

    def test_fully_outside(self):
        assert clip_bbox(BBox(200, 200, 5, 5), 100, 100) is None


class TestOracleDetector:
    def test_noise_free_returns_truth(self):
        truth = BBox(100, 120, 10, 10)
        det = OracleDetector([truth])
        patch = np.zeros((416, 416), dtype=np.uint8)
        out = det.detect(patch, ctx(0))
        assert len(out) == 1
        assert out[0].bbox == truth

    def test_window_maps_truth_to_patch(self):
        truth = BBox(500, 600, 10, 10)
        det = OracleDetector([truth])
        window = CropWindow(origin_x=450, origin_y=550, size=416)
        out = det.detect(np.zeros((416, 416), dtype=np.uint8), ctx(0, window))
        assert (out[0].bbox.x, out[0].bbox.y) == (50, 50)

    def test_truth_outside_window_invisible(self):
        truth = BBox(500, 600, 10, 10)
        det = OracleDetector([truth])
        window = CropWindow(origin_x=0, origin_y=0, size=416)
        assert det.detect(np.zeros((416, 416), dtype=np.uint8), ctx(0, window)) == []

    def test_p_zero_empty(self):
        det = OracleDetector([BBox(10, 10, 5, 5)], OracleNoise(p_detect=0.0))
        assert det.detect(np.zeros((416, 416), dtype=np.uint8), ctx(0)) == []

    def test_absent_truth_empty(self):
        det = OracleDetector([None])
        assert det.detect(np.zeros((416, 416), dtype=np.uint8), ctx(0)) == []

    def test_deterministic_per_seed_and_frame(self):
        noise = OracleNoise(p_detect=0.7, sigma_center=2.0, fp_rate=1.0, seed=5)
        a = OracleDetector([BBox(100, 100, 12, 12)] * 10, noise)
        b = OracleDetector([BBox(100, 100, 12, 12)] * 10, noise)
        patch = np.zeros((416, 416), dtype=np.uint8)
        for t in range(10):
            assert a.detect(patch, ctx(t)) == b.detect(patch, ctx(t))

    def test_center_noise_sigma_montecarlo(self):
        # 10000 seeded trials: per-axis center offsets should show sigma ~= 2
        truth = BBox(200, 200, 16, 16)
        det = OracleDetector(lambda t: truth, OracleNoise(sigma_center=2.0, seed=3))
        patch = np.zeros((416, 416), dtype=np.uint8)
        tc = center(truth)
        dx, dy = [], []
        for t in range(10000):
            (d,) = det.detect(patch, ctx(t))
            c = center(d.bbox)
            dx.append(c.x - tc.x)
            dy.append(c.y - tc.y)
        assert 1.9 <= np.std(dx) <= 2.1
        assert 1.9 <= np.std(dy) <= 2.1
        assert abs(np.mean(dx)) < 0.1 and abs(np.mean(dy)) < 0.1

    def test_detect_rate_matches_p(self):
        det = OracleDetector(lambda t: BBox(50, 50, 10, 10),
                             OracleNoise(p_detect=0.8, seed=11))
        patch = np.zeros((416, 416), dtype=np.uint8)
        hits = sum(bool(det.detect(patch, ctx(t))) for t in range(2000))
        assert 0.75 <= hits / 2000 <= 0.85

    def test_false_positives_scored_below_truth(self):
        det = OracleDetector(lambda t: BBox(200, 200, 16, 16),
                             OracleNoise(fp_rate=3.0, seed=2))
        patch = np.zeros((416, 416), dtype=np.uint8)
        saw_fp = False
        for t in range(50):
            out = det.detect(patch, ctx(t))
            validate_detections(out, patch.shape)
            assert out[0].score >= 0.7  # truth first: FP scores cap at 0.7
            saw_fp = saw_fp or len(out) > 1
        assert saw_fp

    def test_callable_and_sequence_truth_agree(self):
        boxes = [BBox(10 + t, 20, 8, 8) for t in range(5)]
        a = OracleDetector(boxes)
        b = OracleDetector(lambda t: boxes[t])
        patch = np.zeros((416, 416), dtype=np.uint8)
        for t in range(5):
            assert a.detect(patch, ctx(t)) == b.detect(patch, ctx(t))

    def test_satisfies_detector_protocol(self):
        assert isinstance(OracleDetector([None]), Detector)
        assert isinstance(BlobDetector(), Detector)


class TestOtsu:
    def test_bimodal_split(self):
        img = np.full((50, 50), 40, dtype=np.uint8)
        img[10:20, 10:20] = 220
        thr = otsu_threshold(img)
        assert thr is not None and 40 <= thr < 220

    def test_uniform_none(self):
        assert otsu_threshold(np.full((30, 30), 128, dtype=np.uint8)) is None

    def test_grayscale_conversion(self):
        rgb = np.zeros((4, 4, 3), dtype=np.uint8)
        rgb[..., 1] = 255
        gray = to_grayscale(rgb)
        assert gray.shape == (4, 4)
        assert int(gray[0, 0]) == int(round(0.587 * 255))


class TestBlobDetector:
    def test_single_disk_found(self):
        patch = draw_disks(416, [(100, 120, 5)])
        out = BlobDetector().detect(patch, ctx(0))
        assert len(out) == 1
        c = center(out[0].bbox)
        assert abs(c.x - 100) <= 1 and abs(c.y - 120) <= 1

    def test_uniform_patch_empty(self):
        patch = np.full((416, 416), 77, dtype=np.uint8)
        assert BlobDetector().detect(patch, ctx(0)) == []

    def test_two_disjoint_disks(self):
        patch = draw_disks(416, [(100, 100, 6), (300, 280, 9)])
        out = BlobDetector().detect(patch, ctx(0))
        assert len(out) == 2
        validate_detections(out, patch.shape)

    def test_disk_radius_sweep_recovers_geometry(self):
        from golftrack.kernels import label_components, component_stats
        for r in range(3, 16):
            patch = draw_disks(200, [(90, 110, r)])
            out = BlobDetector(BlobConfig(max_area=4000)).detect(patch, ctx(0))
            assert len(out) == 1, f"radius {r}"
            b = out[0].bbox
            c = center(b)
            assert abs(c.x - 90) <= 1 and abs(c.y - 110) <= 1
            # recovered component should have close to pi r^2 pixels
            labels, count = label_components(patch > 128)
            areas = component_stats(labels, count)[0]
            assert areas[1] == pytest.approx(np.pi * r * r, rel=0.25)
            assert b.w == pytest.approx(2 * r, abs=2)
            assert b.h == pytest.approx(2 * r, abs=2)

    def test_elongated_streak_rejected(self):
        patch = np.zeros((100, 100), dtype=np.uint8)
        patch[48:52, 10:90] = 230  # 4x80 bar: circularity well under 0.6
        assert BlobDetector().detect(patch, ctx(0)) == []

    def test_area_window_filters(self):
        patch = draw_disks(416, [(100, 100, 2), (300, 300, 40)])  # ~13 px and ~5000 px
        out = BlobDetector(BlobConfig(min_area=20, max_area=2000)).detect(patch, ctx(0))
        assert out == []

    def test_rgb_input(self):
        gray = draw_disks(416, [(208, 208, 7)])
        rgb = np.stack([gray] * 3, axis=-1)
        out = BlobDetector().detect(rgb, ctx(0))
        assert len(out) == 1

    def test_dark_ball_on_bright_background_not_supported(self):
        # foreground is defined as brighter than the threshold
        patch = 255 - draw_disks(416, [(100, 100, 6)])
        out = BlobDetector().detect(patch, ctx(0))
        assert all(d.bbox.w > 100 for d in out) or out == []


class TestExternDetector:
    def test_echo_detection(self):
        with ExternDetector(stub_cmd("--bbox", "10,10,5,5", "--score", "0.9")) as det:
            out = det.detect(np.zeros((64, 64), dtype=np.uint8), ctx(0))
        assert out == [Detection(BBox(10, 10, 5, 5), 0.9)]

    def test_sequential_ids_many_requests(self):
        patch = np.zeros((32, 32), dtype=np.uint8)
        with ExternDetector(stub_cmd()) as det:
            for t in range(25):
                out = det.detect(patch, ctx(t))
                assert len(out) == 1

    def test_handshake_exposes_name(self):
        with ExternDetector(stub_cmd()) as det:
            assert det.worker_name == "stub"

    def test_wrong_id_raises(self):
        with ExternDetector(stub_cmd("--behavior", "wrong-id")) as det:
            with pytest.raises(ResponseIdMismatchError):
                det.detect(np.zeros((32, 32), dtype=np.uint8), ctx(0))

    def test_crash_mid_request_raises(self):
        with ExternDetector(stub_cmd("--behavior", "crash")) as det:
            with pytest.raises(WorkerCrashError):
                det.detect(np.zeros((32, 32), dtype=np.uint8), ctx(0))

    def test_timeout_raises(self):
        det = ExternDetector(stub_cmd("--behavior", "sleep", "--sleep", "30"),
                             timeout=0.5)
        try:
            with pytest.raises(WorkerTimeoutError):
                det.detect(np.zeros((32, 32), dtype=np.uint8), ctx(0))
        finally:
            det.close()

    def test_malformed_response_raises(self):
        with ExternDetector(stub_cmd("--behavior", "malformed")) as det:
            with pytest.raises(MalformedResponseError):
                det.detect(np.zeros((32, 32), dtype=np.uint8), ctx(0))

    def test_worker_error_raises(self):
        with ExternDetector(stub_cmd("--behavior", "error")) as det:
            with pytest.raises(WorkerReportedError):
                det.detect(np.zeros((32, 32), dtype=np.uint8), ctx(0))

    def test_missing_handshake_times_out(self):
        with pytest.raises((WorkerTimeoutError, WorkerCrashError)):
            ExternDetector(stub_cmd("--behavior", "no-hello"), timeout=0.5)

    def test_clean_shutdown_exit_code(self):
        det = ExternDetector(stub_cmd())
        det.detect(np.zeros((32, 32), dtype=np.uint8), ctx(0))
        assert det.close() == 0

    def test_command_string_form(self):
        det = ExternDetector(f"{sys.executable} {STUB} --bbox 1,2,3,4")
        try:
            out = det.detect(np.zeros((32, 32), dtype=np.uint8), ctx(0))
            assert out[0].bbox == BBox(1, 2, 3, 4)
        finally:
            det.close()
