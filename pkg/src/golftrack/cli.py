"""Command-line front end.

Subcommands: synth (generate a sequence directory), augment (nine shifted
training patches around a labeled ball), track (run the tracker over a
sequence directory), eval (score results.csv against annotations.csv).

Option precedence everywhere: command-line flag, then --config file
(key=value lines, # comments), then built-in default. Exit codes: 0 success,
1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import logging
import os
import sys
from pathlib import Path
from typing import Callable, Optional

from .detectors import (BlobConfig, BlobDetector, ExternDetector, ExternError,
                        OracleDetector, OracleNoise)
from .formats import (read_annotations, read_results, read_sequence_dir,
                      write_results, write_sequence_dir)
from .geometry import BBox, Detection, Point2, center
from .kalman import DEFAULT_Q_POS, DEFAULT_Q_VEL, DEFAULT_R_POS, default_cv_params
from .kernels import warmup
from .metrics import (DEFAULT_IOU_THRESHOLDS, PRECISION_THRESHOLDS, SUCCESS_THRESHOLDS,
                      average_precision, evaluate_tracking)
from .patching import DEFAULT_AUGMENT_SHIFT, DEFAULT_PATCH_SIZE, FrameDims, augment9_grid, bbox_to_patch
from .pngio import load_png, save_png
from .synth import PuttParams, Sequence, SwingParams, generate
from .tracker import SELECT_POLICIES, TrackStatus, TrackerConfig, run


def _parse_point(s: str) -> Point2:
    parts = s.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected X,Y, got {s!r}")
    return Point2(float(parts[0]), float(parts[1]))


def _parse_bbox(s: str) -> BBox:
    parts = s.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"expected X,Y,W,H, got {s!r}")
    return BBox(*(float(p) for p in parts))


def _parse_bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {s!r}")


def _parse_float_list(s: str) -> list[float]:
    return [float(p) for p in s.split(",") if p.strip()]


def _use_color() -> bool:
    return sys.stdout.isatty() and "NO_COLOR" not in os.environ


def _warn_text(s: str) -> str:
    return f"\x1b[33m{s}\x1b[0m" if _use_color() else s


def load_config_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path) as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


# Each entry: option key -> (parser for config-file strings, default).
OptionTable = dict[str, tuple[Callable[[str], object], object]]


def resolve_options(args: argparse.Namespace, table: OptionTable) -> dict:
    """Defaults, overridden by --config entries, overridden by flags."""
    eff = {k: default for k, (_, default) in table.items()}
    if getattr(args, "config", None):
        for key, value in load_config_file(args.config).items():
            if key not in table:
                raise ValueError(f"{args.config}: unknown option {key!r}")
            eff[key] = table[key][0](value)
    for key in table:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            eff[key] = flag_value
    return eff


SYNTH_OPTS: OptionTable = {
    "kind": (str, "swing"),
    "frames": (int, 50),
    "width": (int, 1280),
    "height": (int, 720),
    "seed": (int, 0),
    "noise_sigma": (float, 0.0),
    "blur_samples": (int, 1),
    "start": (_parse_point, None),
    "v0": (float, 6.0),
    "angle": (float, 30.0),
    "gravity": (float, 0.15),
    "depth_rate": (float, 0.97),
    "r0": (float, 15.0),
    "heading": (float, 0.0),
    "friction": (float, 0.05),
    "radius": (float, 8.0),
}

AUGMENT_OPTS: OptionTable = {
    "patch_size": (int, DEFAULT_PATCH_SIZE),
    "shift": (float, float(DEFAULT_AUGMENT_SHIFT)),
}

TRACK_OPTS: OptionTable = {
    "detector": (str, "blob"),
    "patch_size": (int, DEFAULT_PATCH_SIZE),
    "max_coast": (int, 5),
    "min_score": (float, 0.25),
    "select_policy": (str, "nearest_to_prediction"),
    "default_box_size": (float, 16.0),
    "stop_on_lost": (_parse_bool, False),
    "q_pos": (float, DEFAULT_Q_POS),
    "q_vel": (float, DEFAULT_Q_VEL),
    "r_pos": (float, DEFAULT_R_POS),
    "init": (_parse_point, None),
    "init_size": (float, None),
    "oracle_p_detect": (float, 1.0),
    "oracle_sigma_center": (float, 0.0),
    "oracle_sigma_size": (float, 0.0),
    "oracle_fp_rate": (float, 0.0),
    "oracle_seed": (int, 0),
    "blob_min_area": (int, 9),
    "blob_max_area": (int, 2000),
    "blob_min_circularity": (float, 0.6),
}

EVAL_OPTS: OptionTable = {
    "mode": (str, "track"),
    "iou": (_parse_float_list, list(DEFAULT_IOU_THRESHOLDS)),
    "jobs": (int, 1),
}


def cmd_synth(args: argparse.Namespace) -> int:
    opts = resolve_options(args, SYNTH_OPTS)
    if opts["kind"] not in ("swing", "putt"):
        raise ValueError(f"kind must be swing or putt, got {opts['kind']!r}")
    dims = FrameDims(width=opts["width"], height=opts["height"])
    start = opts["start"]
    common = dict(frames=opts["frames"], frame_dims=dims, seed=opts["seed"],
                  noise_sigma=opts["noise_sigma"], blur_samples=opts["blur_samples"],
                  v0=opts["v0"])
    if opts["kind"] == "swing":
        if start is None:
            start = Point2(dims.width * 0.2, dims.height * 0.65)
        params = SwingParams(start=start, angle=opts["angle"], gravity=opts["gravity"],
                             depth_rate=opts["depth_rate"], r0=opts["r0"], **common)
    else:
        if start is None:
            start = Point2(dims.width * 0.2, dims.height * 0.5)
        params = PuttParams(start=start, heading=opts["heading"],
                            friction=opts["friction"], r=opts["radius"], **common)
    seq = generate(params)
    write_sequence_dir(args.out, seq)
    sizes = [b.w for b in seq.annotations if b is not None]
    visible = len(sizes)
    print(f"wrote {len(seq)} frames ({dims.width}x{dims.height}) to {args.out}")
    if visible:
        print(f"ball visible on {visible}/{len(seq)} frames, "
              f"diameter {min(sizes):.1f}..{max(sizes):.1f} px")
    else:
        print(_warn_text("ball never visible; check start/velocity against frame size"))
    return 0


def cmd_augment(args: argparse.Namespace) -> int:
    opts = resolve_options(args, AUGMENT_OPTS)
    frame = load_png(args.image)
    h, w = frame.shape[:2]
    dims = FrameDims(width=w, height=h)
    ball = args.bbox
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for row, col, window in augment9_grid(ball, dims, size=opts["patch_size"],
                                          shift=opts["shift"]):
        name = f"patch_{row}{col}.png"
        save_png(out_dir / name, window.extract(frame))
        local = bbox_to_patch(ball, window)
        rows.append((name, local))
    with open(out_dir / "patches.csv", "w") as f:
        f.write("file,x,y,w,h\n")
        for name, b in rows:
            f.write(f"{name},{b.x!r},{b.y!r},{b.w!r},{b.h!r}\n")
    print(f"wrote {len(rows)} patches of size {opts['patch_size']} to {out_dir}")
    return 0


def _make_detector(opts: dict, seq: Sequence):
    """Returns (detector, closer)."""
    spec = opts["detector"]
    if spec == "blob":
        cfg = BlobConfig(min_area=opts["blob_min_area"], max_area=opts["blob_max_area"],
                         min_circularity=opts["blob_min_circularity"])
        return BlobDetector(cfg), None
    if spec == "oracle":
        noise = OracleNoise(p_detect=opts["oracle_p_detect"],
                            sigma_center=opts["oracle_sigma_center"],
                            sigma_size=opts["oracle_sigma_size"],
                            fp_rate=opts["oracle_fp_rate"],
                            seed=opts["oracle_seed"])
        return OracleDetector(seq.annotations, noise), None
    if spec.startswith("extern:"):
        command = spec[len("extern:"):]
        if not command.strip():
            raise ValueError("extern detector needs a command, e.g. extern:node worker.js")
        det = ExternDetector(command)
        return det, det.close
    raise ValueError(f"unknown detector {spec!r} (use blob, oracle, or extern:<command>)")


def cmd_track(args: argparse.Namespace) -> int:
    opts = resolve_options(args, TRACK_OPTS)
    seq = read_sequence_dir(args.seq)
    if opts["select_policy"] not in SELECT_POLICIES:
        raise ValueError(f"select_policy must be one of {SELECT_POLICIES}")
    config = TrackerConfig(
        patch_size=opts["patch_size"],
        kalman=default_cv_params(q_pos=opts["q_pos"], q_vel=opts["q_vel"],
                                 r_pos=opts["r_pos"]),
        max_coast=opts["max_coast"],
        select_policy=opts["select_policy"],
        min_score=opts["min_score"],
        default_box_size=opts["default_box_size"],
        stop_on_lost=opts["stop_on_lost"],
    )
    init_size = opts["init_size"]
    if opts["init"] is not None:
        init_center = opts["init"]
    else:
        first = seq.annotations[0] if seq.annotations else None
        if first is None:
            raise ValueError("frame 0 has no ground truth; pass --init X,Y")
        init_center = center(first)
        if init_size is None:
            init_size = (first.w + first.h) / 2.0
    detector, closer = _make_detector(opts, seq)
    warmup()  # compile jit kernels so frame 0 timing reflects steady state
    try:
        records = run(seq.frames, detector, init_center, config, init_size=init_size)
    finally:
        if closer is not None:
            closer()
    out_path = Path(args.out) if args.out else Path(args.seq) / "results.csv"
    write_results(out_path, records)
    counts = {s: 0 for s in TrackStatus}
    for r in records:
        counts[r.status] += 1
    total_s = sum(r.elapsed_ms for r in records) / 1000.0
    fps = len(records) / total_s if total_s > 0 else float("inf")
    print(f"tracked {len(records)} frames -> {out_path}")
    line = (f"status: {counts[TrackStatus.TRACKED]} tracked, "
            f"{counts[TrackStatus.COASTING]} coasting, "
            f"{counts[TrackStatus.LOST]} lost; {fps:.1f} fps")
    print(_warn_text(line) if counts[TrackStatus.LOST] else line)
    return 0


def _eval_track_one(seq_dir: Path, results_path: Path):
    ann = read_annotations(seq_dir / "annotations.csv")
    rows = read_results(results_path)
    if not ann:
        raise ValueError(f"{seq_dir}: no annotated frames to evaluate")
    by_frame = {r.frame: r for r in rows}
    pairs = []
    for i in sorted(ann):
        row = by_frame.get(i)
        pred = row.bbox if row is not None and row.status is not TrackStatus.LOST else None
        pairs.append((pred, ann[i]))
    elapsed = [r.elapsed_ms for r in rows]
    return evaluate_tracking(pairs, elapsed)


def _eval_detect_one(seq_dir: Path, results_path: Path, thresholds: list[float]):
    ann = read_annotations(seq_dir / "annotations.csv")
    rows = read_results(results_path)
    keys = sorted(set(ann) | {r.frame for r in rows})
    truths = {i: ([ann[i]] if i in ann else []) for i in keys}
    preds = {}
    for r in rows:
        if r.status is TrackStatus.TRACKED and r.score is not None:
            preds.setdefault(r.frame, []).append(Detection(bbox=r.bbox, score=r.score))
    return {thr: average_precision(preds, truths, iou_thr=thr) for thr in thresholds}


def _print_table(headers: list[str], rows: list[list[str]]) -> None:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    def fmt(cells):
        return "  ".join(c.ljust(w) if i == 0 else c.rjust(w)
                         for i, (c, w) in enumerate(zip(cells, widths)))
    print(fmt(headers))
    print(fmt(["-" * w for w in widths]))
    for r in rows:
        print(fmt(r))


def _write_curves(path: str, report) -> None:
    with open(path, "w") as f:
        f.write("kind,threshold,value\n")
        for t, v in zip(SUCCESS_THRESHOLDS, report.success):
            f.write(f"success,{float(t)!r},{float(v)!r}\n")
        for t in PRECISION_THRESHOLDS:
            f.write(f"precision,{float(t)!r},{float(report.precision_at[t])!r}\n")


def cmd_eval(args: argparse.Namespace) -> int:
    opts = resolve_options(args, EVAL_OPTS)
    if opts["mode"] not in ("track", "detect"):
        raise ValueError(f"mode must be track or detect, got {opts['mode']!r}")
    seq_dirs = [Path(s) for s in args.seq]
    if args.results and len(seq_dirs) != 1:
        raise ValueError("--results applies to a single --seq")
    if args.curves and len(seq_dirs) != 1:
        raise ValueError("--curves applies to a single --seq")
    results_for = lambda d: Path(args.results) if args.results else d / "results.csv"

    jobs = max(1, opts["jobs"])
    if opts["mode"] == "track":
        work = lambda d: _eval_track_one(d, results_for(d))
    else:
        work = lambda d: _eval_detect_one(d, results_for(d), opts["iou"])
    if jobs > 1 and len(seq_dirs) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(work, seq_dirs))
    else:
        reports = [work(d) for d in seq_dirs]

    if opts["mode"] == "track":
        headers = ["sequence", "frames"] + [f"p@{t:g}" for t in PRECISION_THRESHOLDS] + ["auc", "fps"]
        rows = []
        for d, rep in zip(seq_dirs, reports):
            rows.append([d.name, str(rep.n_frames)]
                        + [f"{rep.precision_at[t]:.4f}" for t in PRECISION_THRESHOLDS]
                        + [f"{rep.success_auc:.4f}", f"{rep.fps:.2f}"])
        if len(reports) > 1:
            n = len(reports)
            avg = ["Average", str(sum(r.n_frames for r in reports))]
            avg += [f"{sum(r.precision_at[t] for r in reports) / n:.4f}"
                    for t in PRECISION_THRESHOLDS]
            avg += [f"{sum(r.success_auc for r in reports) / n:.4f}",
                    f"{sum(r.fps for r in reports) / n:.2f}"]
            rows.append(avg)
        _print_table(headers, rows)
        if args.curves:
            _write_curves(args.curves, reports[0])
            print(f"curves -> {args.curves}")
    else:
        thresholds = opts["iou"]
        headers = ["sequence"] + [f"AP@{t:g}" for t in thresholds]
        rows = [[d.name] + [f"{rep[t]:.4f}" for t in thresholds]
                for d, rep in zip(seq_dirs, reports)]
        if len(reports) > 1:
            n = len(reports)
            rows.append(["Average"] + [f"{sum(r[t] for r in reports) / n:.4f}"
                                       for t in thresholds])
        _print_table(headers, rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="golftrack",
                                     description="Golf ball tracking toolkit")
    parser.add_argument("--verbose", action="store_true", help="enable debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic sequence directory")
    p.add_argument("--out", required=True, help="output sequence directory")
    p.add_argument("--config", help="key=value option file")
    p.add_argument("--kind", choices=("swing", "putt"))
    p.add_argument("--frames", type=int)
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--noise-sigma", type=float, dest="noise_sigma")
    p.add_argument("--blur-samples", type=int, dest="blur_samples")
    p.add_argument("--start", type=_parse_point, help="initial ball center X,Y")
    p.add_argument("--v0", type=float, help="initial speed, px/frame")
    p.add_argument("--angle", type=float, help="swing launch angle, degrees")
    p.add_argument("--gravity", type=float)
    p.add_argument("--depth-rate", type=float, dest="depth_rate")
    p.add_argument("--r0", type=float, help="swing initial radius, px")
    p.add_argument("--heading", type=float, help="putt heading, degrees")
    p.add_argument("--friction", type=float)
    p.add_argument("--radius", type=float, help="putt ball radius, px")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("augment", help="write nine shifted patches around a ball")
    p.add_argument("--image", required=True, help="input frame PNG")
    p.add_argument("--bbox", required=True, type=_parse_bbox, help="ball bbox X,Y,W,H")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--config", help="key=value option file")
    p.add_argument("--patch-size", type=int, dest="patch_size")
    p.add_argument("--shift", type=float)
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("track", help="run the tracker over a sequence directory")
    p.add_argument("--seq", required=True, help="sequence directory")
    p.add_argument("--out", help="results CSV path (default: SEQ/results.csv)")
    p.add_argument("--config", help="key=value option file")
    p.add_argument("--detector", help="blob, oracle, or extern:<command>")
    p.add_argument("--init", type=_parse_point,
                   help="initial ball center X,Y (default: frame 0 ground truth)")
    p.add_argument("--init-size", type=float, dest="init_size")
    p.add_argument("--patch-size", type=int, dest="patch_size")
    p.add_argument("--max-coast", type=int, dest="max_coast")
    p.add_argument("--min-score", type=float, dest="min_score")
    p.add_argument("--select-policy", choices=SELECT_POLICIES, dest="select_policy")
    p.add_argument("--default-box-size", type=float, dest="default_box_size")
    p.add_argument("--stop-on-lost", action=argparse.BooleanOptionalAction,
                   dest="stop_on_lost", default=None)
    p.add_argument("--q-pos", type=float, dest="q_pos")
    p.add_argument("--q-vel", type=float, dest="q_vel")
    p.add_argument("--r-pos", type=float, dest="r_pos")
    p.add_argument("--oracle-p-detect", type=float, dest="oracle_p_detect")
    p.add_argument("--oracle-sigma-center", type=float, dest="oracle_sigma_center")
    p.add_argument("--oracle-sigma-size", type=float, dest="oracle_sigma_size")
    p.add_argument("--oracle-fp-rate", type=float, dest="oracle_fp_rate")
    p.add_argument("--oracle-seed", type=int, dest="oracle_seed")
    p.add_argument("--blob-min-area", type=int, dest="blob_min_area")
    p.add_argument("--blob-max-area", type=int, dest="blob_max_area")
    p.add_argument("--blob-min-circularity", type=float, dest="blob_min_circularity")
    p.set_defaults(func=cmd_track)

    p = sub.add_parser("eval", help="score results against annotations")
    p.add_argument("--seq", required=True, action="append",
                   help="sequence directory (repeat for a batch)")
    p.add_argument("--results", help="results CSV (single --seq only; default SEQ/results.csv)")
    p.add_argument("--config", help="key=value option file")
    p.add_argument("--mode", choices=("track", "detect"))
    p.add_argument("--iou", type=_parse_float_list,
                   help="detect-mode IoU thresholds, e.g. 0.25,0.5")
    p.add_argument("--jobs", type=int, help="parallel sequences")
    p.add_argument("--curves", help="write success/precision curve CSV here")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError, ExternError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
