#!/usr/bin/env python3
"""Run the tracker over a grid of synthetic scenes and print a metrics table.

Covers static, translating, zooming and combined scenes at a few texture
seeds, so regressions in either the position or the scale path show up as
a worse row. Use --quick for a fast subset during development.
"""

import argparse
import sys
import time

import numpy as np

from cftrack.harness import SynthSpec, evaluate, run_tracker, synth_sequence


def scene_grid(quick=False):
    seeds = (7,) if quick else (3, 7, 11)
    frames = 40 if quick else 100
    scenes = []
    for seed in seeds:
        scenes.append(("static", SynthSpec(size=(320, 240), frames=frames, texture_seed=seed)))
        scenes.append(
            (
                "translate",
                SynthSpec(size=(320, 240), frames=frames, motion=(2.0, 1.0), texture_seed=seed),
            )
        )
        scenes.append(
            (
                "zoom",
                SynthSpec(
                    size=(480, 360),
                    frames=min(frames, 60),
                    zoom=1.005,
                    target_side=200,
                    texture_seed=seed,
                ),
            )
        )
        scenes.append(
            (
                "both",
                SynthSpec(
                    size=(480, 360),
                    frames=min(frames, 60),
                    motion=(1.5, 1.0),
                    zoom=1.005,
                    target_side=150,
                    texture_seed=seed,
                ),
            )
        )
    return scenes


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true", help="one seed, 40 frames")
    args = ap.parse_args(argv)

    header = f"{'scene':<10} {'seed':>4} {'frames':>6} {'mean_err':>9} {'p@20':>6} {'iou':>6} {'fps':>6} {'time':>6}"
    print(header)
    print("-" * len(header))
    worst_err = 0.0
    for name, spec in scene_grid(args.quick):
        t0 = time.perf_counter()
        seq = synth_sequence(spec)
        results, fps = run_tracker(seq, seq.truth[0])
        wall = time.perf_counter() - t0
        m = evaluate(results, seq.truth, fps=fps)
        worst_err = max(worst_err, m.mean_center_error)
        print(
            f"{name:<10} {spec.texture_seed:>4} {spec.frames:>6} "
            f"{m.mean_center_error:>9.3f} {m.precision_at_20:>6.3f} "
            f"{m.mean_iou:>6.3f} {fps:>6.1f} {wall:>5.1f}s"
        )
    print(f"\nworst mean center error over the grid: {worst_err:.3f} px")
    return 0


if __name__ == "__main__":
    sys.exit(main())
