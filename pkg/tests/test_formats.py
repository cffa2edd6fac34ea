"""On-disk round trips for sequence directories and result files."""

import numpy as np
import pytest

from golftrack import (BBox, CropWindow, Detection, FrameDims, KalmanState, Point2,
                       PuttParams, Sequence, TrackRecord, TrackStatus, generate,
                       read_annotations, read_results, read_sequence_dir,
                       write_annotations, write_results, write_sequence_dir)
from golftrack.formats import ResultRow
from golftrack.pngio import load_png, save_png


def _record(frame, bbox, score, status, elapsed=1.5):
    det = None if score is None else Detection(bbox, score)
    state = KalmanState(x=np.zeros(4), P=np.eye(4))
    window = CropWindow(origin_x=0, origin_y=0, size=416)
    return TrackRecord(frame, bbox, state, status, det, window, elapsed)


class TestAnnotations:
    def test_round_trip_with_gaps(self, tmp_path):
        path = tmp_path / "annotations.csv"
        boxes = [BBox(1.25, 2.5, 3.0, 4.0), None, BBox(10.1, 20.2, 30.3, 40.4)]
        write_annotations(path, boxes)
        got = read_annotations(path)
        assert set(got) == {0, 2}
        assert got[0] == boxes[0]
        assert got[2] == boxes[2]

    def test_float_exactness(self, tmp_path):
        path = tmp_path / "annotations.csv"
        b = BBox(0.1 + 0.2, 1 / 3, np.pi, 2.0**-20)
        write_annotations(path, [b])
        assert read_annotations(path)[0] == b

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "annotations.csv"
        path.write_text("a,b,c\n")
        with pytest.raises(ValueError):
            read_annotations(path)

    def test_duplicate_frame_rejected(self, tmp_path):
        path = tmp_path / "annotations.csv"
        path.write_text("frame,x,y,w,h\n0,1,1,2,2\n0,3,3,2,2\n")
        with pytest.raises(ValueError):
            read_annotations(path)


class TestResults:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "results.csv"
        records = [
            _record(0, BBox(1.5, 2.5, 16.0, 16.0), 0.875, TrackStatus.TRACKED),
            _record(1, BBox(3.25, 4.125, 16.0, 16.0), None, TrackStatus.COASTING),
            _record(2, BBox(5.0, 6.0, 16.0, 16.0), None, TrackStatus.LOST, elapsed=0.25),
        ]
        write_results(path, records)
        rows = read_results(path)
        assert [r.frame for r in rows] == [0, 1, 2]
        assert rows[0] == ResultRow(0, BBox(1.5, 2.5, 16.0, 16.0), 0.875,
                                    TrackStatus.TRACKED, 1.5)
        assert rows[1].score is None
        assert rows[1].status is TrackStatus.COASTING
        assert rows[2].status is TrackStatus.LOST
        assert rows[2].elapsed_ms == 0.25

    def test_header_written(self, tmp_path):
        path = tmp_path / "results.csv"
        write_results(path, [])
        assert path.read_text().splitlines()[0] == "frame,x,y,w,h,score,status,elapsed_ms"

    def test_unknown_status_rejected(self, tmp_path):
        path = tmp_path / "results.csv"
        path.write_text("frame,x,y,w,h,score,status,elapsed_ms\n0,1,1,2,2,0.5,FLYING,1.0\n")
        with pytest.raises(ValueError):
            read_results(path)

    def test_rows_sorted_by_frame(self, tmp_path):
        path = tmp_path / "results.csv"
        path.write_text("frame,x,y,w,h,score,status,elapsed_ms\n"
                        "2,1,1,2,2,0.5,TRACKED,1.0\n"
                        "0,1,1,2,2,0.5,TRACKED,1.0\n"
                        "1,1,1,2,2,,COASTING,1.0\n")
        rows = read_results(path)
        assert [r.frame for r in rows] == [0, 1, 2]


class TestSequenceDir:
    def _seq(self):
        p = PuttParams(start=Point2(60, 50), v0=8, heading=15, friction=0.1,
                       r=6, frames=8, frame_dims=FrameDims(160, 120),
                       noise_sigma=2.0, seed=5)
        return generate(p)

    def test_round_trip(self, tmp_path):
        seq = self._seq()
        d = tmp_path / "seq"
        write_sequence_dir(d, seq)
        assert sorted(f.name for f in d.iterdir()) == (
            ["annotations.csv"] + [f"frame_{i:06d}.png" for i in range(8)])
        back = read_sequence_dir(d)
        assert len(back) == 8
        for a, b in zip(seq.frames, back.frames):
            assert np.array_equal(a, b)
        assert back.annotations == seq.annotations

    def test_gap_in_frame_numbers_rejected(self, tmp_path):
        seq = self._seq()
        d = tmp_path / "seq"
        write_sequence_dir(d, seq)
        (d / "frame_000003.png").unlink()
        with pytest.raises(ValueError):
            read_sequence_dir(d)

    def test_annotation_beyond_frames_rejected(self, tmp_path):
        seq = self._seq()
        d = tmp_path / "seq"
        write_sequence_dir(d, seq)
        with open(d / "annotations.csv", "a") as f:
            f.write("99,1,1,2,2\n")
        with pytest.raises(ValueError):
            read_sequence_dir(d)

    def test_empty_dir_rejected(self, tmp_path):
        d = tmp_path / "seq"
        d.mkdir()
        with pytest.raises(ValueError):
            read_sequence_dir(d)

    def test_missing_annotations_tolerated(self, tmp_path):
        seq = self._seq()
        d = tmp_path / "seq"
        write_sequence_dir(d, seq)
        (d / "annotations.csv").unlink()
        back = read_sequence_dir(d)
        assert back.annotations == [None] * 8


class TestPngIO:
    def test_gray_round_trip(self, tmp_path):
        img = ((np.arange(300) * 7) % 256).astype(np.uint8).reshape(15, 20)
        p = tmp_path / "x.png"
        save_png(p, img)
        assert np.array_equal(load_png(p), img)

    def test_rgb_round_trip(self, tmp_path):
        rng = np.random.default_rng(2)
        img = rng.integers(0, 256, size=(12, 9, 3), dtype=np.uint8)
        p = tmp_path / "x.png"
        save_png(p, img)
        back = load_png(p)
        assert back.shape == (12, 9, 3)
        assert np.array_equal(back, img)
