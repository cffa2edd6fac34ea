"""Crop-window arithmetic, coordinate mapping, 3x3 augmentation grid."""

import numpy as np
import pytest

from golftrack import (BBox, CropWindow, Detection, FrameDims, FrameTooSmallError,
                       Point2, augment9, augment9_grid, bbox_to_frame, bbox_to_patch,
                       center, crop_window, from_center, to_frame, to_patch)

FULL_HD = FrameDims(1920, 1080)


class TestCropWindow:
    def test_centered_hand_value(self):
        w = crop_window(Point2(500, 500), FULL_HD, 416)
        assert (w.origin_x, w.origin_y) == (292, 292)

    def test_corner_clamp(self):
        w = crop_window(Point2(10, 10), FULL_HD, 416)
        assert (w.origin_x, w.origin_y) == (0, 0)

    def test_far_corner_clamp(self):
        w = crop_window(Point2(1900, 1070), FULL_HD, 416)
        assert (w.origin_x, w.origin_y) == (1504, 664)

    def test_window_always_inside_frame(self):
        rng = np.random.default_rng(8)
        for _ in range(200):
            c = Point2(float(rng.uniform(-100, 2020)), float(rng.uniform(-100, 1180)))
            w = crop_window(c, FULL_HD, 416)
            assert 0 <= w.origin_x <= FULL_HD.width - 416
            assert 0 <= w.origin_y <= FULL_HD.height - 416

    def test_fractional_center_rounds_half_up(self):
        a = crop_window(Point2(500.5, 500.49), FULL_HD, 416)
        assert (a.origin_x, a.origin_y) == (293, 292)

    def test_frame_smaller_than_window_raises(self):
        with pytest.raises(FrameTooSmallError):
            crop_window(Point2(50, 50), FrameDims(100, 100), 416)

    def test_extract_shape_and_content(self):
        frame = np.arange(200 * 300, dtype=np.uint8).reshape(200, 300) % 251
        w = crop_window(Point2(150, 100), FrameDims(300, 200), 64)
        patch = w.extract(frame)
        assert patch.shape == (64, 64)
        assert np.array_equal(patch, frame[w.origin_y:w.origin_y + 64,
                                           w.origin_x:w.origin_x + 64])


class TestCoordinateMapping:
    def test_hand_translation(self):
        w = CropWindow(origin_x=292, origin_y=292, size=416)
        mapped = bbox_to_frame(BBox(100, 100, 10, 10), w)
        assert (mapped.x, mapped.y, mapped.w, mapped.h) == (392, 392, 10, 10)

    def test_zero_origin_identity(self):
        w = CropWindow(origin_x=0, origin_y=0, size=416)
        b = BBox(5, 6, 7, 8)
        out = bbox_to_frame(b, w)
        assert (out.x, out.y, out.w, out.h) == (5, 6, 7, 8)

    def test_round_trip_100_boxes(self):
        # coordinates on a 1/64-px grid: integer translation is then exact
        rng = np.random.default_rng(9)
        for _ in range(100):
            w = CropWindow(origin_x=int(rng.integers(0, 1000)),
                           origin_y=int(rng.integers(0, 600)), size=416)
            b = BBox(int(rng.integers(0, 400 * 64)) / 64, int(rng.integers(0, 400 * 64)) / 64,
                     int(rng.integers(64, 30 * 64)) / 64, int(rng.integers(64, 30 * 64)) / 64)
            back = bbox_to_patch(bbox_to_frame(b, w), w)
            assert (back.x, back.y, back.w, back.h) == (b.x, b.y, b.w, b.h)

    def test_detection_mapping_preserves_score(self):
        w = CropWindow(origin_x=10, origin_y=20, size=416)
        d = Detection(BBox(1, 2, 3, 4), 0.75)
        f = to_frame(d, w)
        assert f.score == 0.75 and (f.bbox.x, f.bbox.y) == (11, 22)
        back = to_patch(f, w)
        assert (back.bbox.x, back.bbox.y) == (1, 2)


class TestAugment9:
    def test_interior_ball_nine_windows(self):
        ball = from_center(Point2(600, 400), 20, 20)
        windows = augment9(ball, FULL_HD, size=416, shift=100)
        assert len(windows) == 9
        centers = [(w.origin_x + 208, w.origin_y + 208) for w in windows]
        assert (600, 400) in centers
        middle = windows[4]
        assert (middle.origin_x, middle.origin_y) == (392, 192)

    def test_row_major_order(self):
        ball = from_center(Point2(600, 400), 20, 20)
        windows = augment9(ball, FULL_HD, size=416, shift=100)
        origins = [(w.origin_y, w.origin_x) for w in windows]
        assert origins == sorted(origins)

    def test_every_window_contains_ball(self):
        rng = np.random.default_rng(10)
        for _ in range(100):
            c = Point2(float(rng.uniform(0, 1920)), float(rng.uniform(0, 1080)))
            side = float(rng.uniform(4, 40))
            ball = from_center(c, side, side)
            for w in augment9(ball, FULL_HD, size=416, shift=100):
                assert w.contains(ball)

    def test_corner_ball_dedup(self):
        ball = from_center(Point2(50, 50), 20, 20)
        windows = augment9(ball, FULL_HD, size=416, shift=100)
        assert len(windows) < 9
        assert len({(w.origin_x, w.origin_y) for w in windows}) == len(windows)

    def test_grid_names_match_windows(self):
        ball = from_center(Point2(600, 400), 20, 20)
        grid = augment9_grid(ball, FULL_HD, size=416, shift=100)
        assert [(r, c) for r, c, _ in grid] == [(r, c) for r in range(3) for c in range(3)]
        assert [w for _, _, w in grid] == augment9(ball, FULL_HD, size=416, shift=100)

    def test_huge_shift_near_corner_collapses_to_one(self):
        dims = FrameDims(500, 500)
        ball = from_center(Point2(30, 30), 10, 10)
        windows = augment9(ball, dims, size=416, shift=500)
        # +500 windows clamp to origin 84 and no longer contain the ball, so
        # they are dropped; -500 and 0 both clamp to origin 0 and merge
        assert len(windows) == 1
        assert (windows[0].origin_x, windows[0].origin_y) == (0, 0)
