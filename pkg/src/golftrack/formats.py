"""On-disk conventions: sequence directories and tracker result files.

A sequence directory holds frame_000000.png .. frame_NNNNNN.png (consecutive
from zero) plus annotations.csv with header frame,x,y,w,h; frames where the
ball is absent simply have no row. Tracker output is results.csv with header
frame,x,y,w,h,score,status,elapsed_ms where score is empty on frames without
a detection. Floats are written with repr so a read-back is bit-exact.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .geometry import BBox
from .pngio import load_png, save_png
from .synth import Sequence
from .tracker import TrackRecord, TrackStatus

ANNOTATIONS_NAME = "annotations.csv"
RESULTS_HEADER = ["frame", "x", "y", "w", "h", "score", "status", "elapsed_ms"]
ANNOTATIONS_HEADER = ["frame", "x", "y", "w", "h"]
_FRAME_RE = re.compile(r"^frame_(\d{6})\.png$")


def frame_filename(index: int) -> str:
    return f"frame_{index:06d}.png"


def _fmt(v: float) -> str:
    return repr(float(v))


def write_annotations(path: Union[str, Path], annotations: list[Optional[BBox]]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(ANNOTATIONS_HEADER)
        for i, b in enumerate(annotations):
            if b is not None:
                writer.writerow([i, _fmt(b.x), _fmt(b.y), _fmt(b.w), _fmt(b.h)])


def read_annotations(path: Union[str, Path]) -> dict[int, BBox]:
    out: dict[int, BBox] = {}
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != ANNOTATIONS_HEADER:
            raise ValueError(f"{path}: expected header {ANNOTATIONS_HEADER}, got {header}")
        for row in reader:
            if not row:
                continue
            if len(row) != 5:
                raise ValueError(f"{path}: malformed row {row}")
            idx = int(row[0])
            if idx in out:
                raise ValueError(f"{path}: duplicate frame index {idx}")
            out[idx] = BBox(float(row[1]), float(row[2]), float(row[3]), float(row[4]))
    return out


def write_sequence_dir(directory: Union[str, Path], seq: Sequence) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for i, frame in enumerate(seq.frames):
        save_png(d / frame_filename(i), frame)
    write_annotations(d / ANNOTATIONS_NAME, seq.annotations)


def read_sequence_dir(directory: Union[str, Path]) -> Sequence:
    """Load frames plus annotations; frame indices must run 0..n-1."""
    d = Path(directory)
    indices = []
    for p in d.iterdir():
        m = _FRAME_RE.match(p.name)
        if m:
            indices.append(int(m.group(1)))
    if not indices:
        raise ValueError(f"{d}: no frame_NNNNNN.png files found")
    indices.sort()
    if indices != list(range(len(indices))):
        raise ValueError(f"{d}: frame indices are not consecutive from 0")
    frames = [load_png(d / frame_filename(i)) for i in indices]
    ann_path = d / ANNOTATIONS_NAME
    by_index = read_annotations(ann_path) if ann_path.exists() else {}
    bad = [i for i in by_index if not (0 <= i < len(frames))]
    if bad:
        raise ValueError(f"{d}: annotation frame indices {sorted(bad)} have no frame file")
    annotations = [by_index.get(i) for i in range(len(frames))]
    return Sequence(frames=frames, annotations=annotations)


def write_results(path: Union[str, Path], records: list[TrackRecord]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(RESULTS_HEADER)
        for r in records:
            b = r.output_bbox
            score = "" if r.detection_used is None else _fmt(r.detection_used.score)
            writer.writerow([r.frame_index, _fmt(b.x), _fmt(b.y), _fmt(b.w), _fmt(b.h),
                             score, r.status.value, _fmt(r.elapsed_ms)])


@dataclass(frozen=True)
class ResultRow:
    """One results.csv line, parsed."""

    frame: int
    bbox: BBox
    score: Optional[float]
    status: TrackStatus
    elapsed_ms: float


def read_results(path: Union[str, Path]) -> list[ResultRow]:
    rows: list[ResultRow] = []
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != RESULTS_HEADER:
            raise ValueError(f"{path}: expected header {RESULTS_HEADER}, got {header}")
        for row in reader:
            if not row:
                continue
            if len(row) != 8:
                raise ValueError(f"{path}: malformed row {row}")
            bbox = BBox(float(row[1]), float(row[2]), float(row[3]), float(row[4]))
            score = None if row[5] == "" else float(row[5])
            try:
                status = TrackStatus(row[6])
            except ValueError:
                raise ValueError(f"{path}: unknown status {row[6]!r}") from None
            rows.append(ResultRow(int(row[0]), bbox, score, status, float(row[7])))
    rows.sort(key=lambda r: r.frame)
    return rows
