"""Side-by-side timing of the compiled and pure-numpy kernel paths.

The kernel implementation is chosen at import time from GOLFTRACK_NUMBA,
so each path runs in its own subprocess and reports timings as JSON; the
parent prints the comparison table.

    python3 benchmarks/bench_kernels.py --frames 200
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def make_patches(n, size, seed):
    """Noisy grayscale patches, each with one bright disk of varying radius."""
    from golftrack import FrameDims, Point2, SwingParams, generate

    params = SwingParams(start=Point2(size * 0.3, size * 0.7), v0=4.0, angle=35.0,
                         gravity=0.05, depth_rate=0.995, r0=12.0,
                         frames=max(n, 2), frame_dims=FrameDims(size, size),
                         noise_sigma=2.0, blur_samples=2, seed=seed)
    seq = generate(params)
    return [seq.frames[t % params.frames] for t in range(n)]


def bench_worker(frames, size, repeat, seed):
    from golftrack import (BlobDetector, NUMBA_ENABLED, component_stats,
                           disk_coverage_counts, label_components,
                           otsu_threshold, warmup)
    from golftrack.kernels import NUMBA_ENABLED as flag

    warmup()
    patches = make_patches(frames, size, seed)
    binaries = []
    for p in patches:
        thr = otsu_threshold(p)
        binaries.append(p > (thr if thr is not None else 255))

    def timed(fn):
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t0)
        return best * 1000.0

    def run_label():
        for b in binaries:
            label_components(b)

    labeled = [label_components(b) for b in binaries]

    def run_stats():
        for lab, count in labeled:
            component_stats(lab, count)

    cx = np.array([size * 0.5])
    cy = np.array([size * 0.5])

    def run_coverage():
        for _ in range(frames):
            disk_coverage_counts((size, size), (0, 0), cx, cy, 9.0)

    detector = BlobDetector()

    def run_detect():
        for p in patches:
            detector.detect(p)

    out = {
        "numba": bool(flag),
        "frames": frames,
        "label_ms": timed(run_label),
        "stats_ms": timed(run_stats),
        "coverage_ms": timed(run_coverage),
        "detect_ms": timed(run_detect),
    }
    json.dump(out, sys.stdout)


def run_path(use_numba, args):
    env = dict(os.environ, GOLFTRACK_NUMBA="1" if use_numba else "0")
    cmd = [sys.executable, os.path.abspath(__file__), "--worker",
           "--frames", str(args.frames), "--size", str(args.size),
           "--repeat", str(args.repeat), "--seed", str(args.seed)]
    proc = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--frames", type=int, default=120, help="patches per kernel run")
    ap.add_argument("--size", type=int, default=416, help="square patch side in px")
    ap.add_argument("--repeat", type=int, default=3, help="repeats, best time kept")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args(argv)

    if args.worker:
        bench_worker(args.frames, args.size, args.repeat, args.seed)
        return 0

    slow = run_path(False, args)
    fast = run_path(True, args)
    if not fast["numba"]:
        print("numba unavailable; timing the numpy path against itself", file=sys.stderr)

    rows = [("connected components", "label_ms"),
            ("component stats", "stats_ms"),
            ("disk coverage", "coverage_ms"),
            ("blob detect end-to-end", "detect_ms")]
    name_w = max(len(r[0]) for r in rows)
    print(f"{args.frames} patches of {args.size}x{args.size} px, best of {args.repeat}")
    print(f"{'kernel'.ljust(name_w)}  {'numpy ms':>9}  {'numba ms':>9}  {'speedup':>7}")
    for name, key in rows:
        s, f = slow[key], fast[key]
        print(f"{name.ljust(name_w)}  {s:>9.1f}  {f:>9.1f}  {s / f:>6.1f}x")
    per_frame = fast["detect_ms"] / args.frames
    print(f"detect throughput: {1000.0 / per_frame:.0f} fps compiled, "
          f"{1000.0 * args.frames / slow['detect_ms']:.0f} fps numpy")
    return 0


if __name__ == "__main__":
    sys.exit(main())
