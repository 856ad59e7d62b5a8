"""Command-line front end: track, synth, eval, emulate.

Exit codes: 0 on success, 1 for input errors (bad files, bad arguments,
violated preconditions), 2 for internal invariant violations.
"""

from __future__ import annotations

import argparse
import os
import sys
import traceback

from .harness import (
    Metrics,
    SynthSpec,
    dump_response_map,
    evaluate,
    load_sequence,
    load_truth,
    parse_truth_line,
    read_results_csv,
    run_tracker,
    save_sequence,
    synth_sequence,
    write_results_csv,
)
from .pipeline_emu import emulate_frame, parse_config, render_csv_report, render_text_report
from .tracker import TrackerParams

_INT_PARAMS = {"scale_levels", "patch_side", "template_side", "cell"}


class _Parser(argparse.ArgumentParser):
    """Argument errors are input errors (exit 1), not internal ones."""

    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _load_params(path: str | None) -> TrackerParams:
    if path is None:
        return TrackerParams()
    values = {}
    with open(path, "r", encoding="ascii") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"malformed parameter line: {raw.strip()!r}")
            key, _, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            if key not in TrackerParams.__dataclass_fields__:
                raise ValueError(f"unknown tracker parameter {key!r}")
            values[key] = int(val) if key in _INT_PARAMS else float(val)
    return TrackerParams(**values)


def _print_metrics(metrics: Metrics) -> None:
    print(f"mean_center_error: {metrics.mean_center_error:.3f} px")
    print(f"precision_at_20: {metrics.precision_at_20:.4f}")
    print(f"mean_iou: {metrics.mean_iou:.4f}")
    if metrics.fps > 0:
        print(f"fps: {metrics.fps:.2f}")
    else:
        print("fps: not measured")


def _cmd_track(args) -> int:
    seq = load_sequence(args.seq, args.gt)
    if args.init is not None:
        init_box = parse_truth_line(args.init)
    elif seq.truth is not None:
        init_box = seq.truth[0]
    else:
        raise ValueError("no starting box: pass --gt or --init x,y,w,h")
    params = _load_params(args.params)
    results, fps = run_tracker(seq, init_box, params)
    write_results_csv(args.out, results, seq.truth)
    if args.dump_response is not None:
        os.makedirs(args.dump_response, exist_ok=True)
        for r in results:
            if r.response is not None:
                dump_response_map(
                    os.path.join(args.dump_response, f"response_{r.frame_index:05d}.pgm"),
                    r.response,
                )
    print(f"tracked {len(seq.frames)} frames of {seq.name} -> {args.out}")
    if seq.truth is not None:
        _print_metrics(evaluate(results, seq.truth, fps=fps))
    else:
        print(f"fps: {fps:.2f}")
    return 0


def _cmd_synth(args) -> int:
    try:
        vx, vy = (float(v) for v in args.motion.split(","))
    except ValueError:
        raise ValueError(f"motion must be vx,vy with numeric fields, got {args.motion!r}") from None
    try:
        w, h = (int(v) for v in args.size.lower().split("x"))
    except ValueError:
        raise ValueError(f"size must be WxH, got {args.size!r}") from None
    spec = SynthSpec(
        size=(w, h), frames=args.frames, motion=(vx, vy), zoom=args.zoom,
        texture_seed=args.seed,
    )
    seq = synth_sequence(spec)
    save_sequence(seq, args.out)
    print(f"wrote {len(seq.frames)} frames and ground truth to {args.out}")
    return 0


def _cmd_eval(args) -> int:
    boxes = read_results_csv(args.results)
    truth = load_truth(args.gt)
    _print_metrics(evaluate(boxes, truth))
    return 0


def _cmd_emulate(args) -> int:
    config = parse_config(args.config) if args.config else None
    report = emulate_frame(config)
    print(render_text_report(report))
    print()
    print(render_csv_report(report), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cftrack", description="correlation-filter tracker harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p_track = sub.add_parser("track", help="run the tracker over an image directory")
    p_track.add_argument("--seq", required=True, help="directory of image frames")
    p_track.add_argument("--gt", default=None, help="ground-truth file (x,y,w,h lines)")
    p_track.add_argument("--out", required=True, help="output results CSV")
    p_track.add_argument("--params", default=None, help="key=value tracker parameter file")
    p_track.add_argument("--init", default=None, help="starting box x,y,w,h when no ground truth")
    p_track.add_argument("--dump-response", default=None, help="directory for response-map images")
    p_track.set_defaults(fn=_cmd_track)

    p_synth = sub.add_parser("synth", help="generate a synthetic sequence")
    p_synth.add_argument("--out", required=True, help="output directory")
    p_synth.add_argument("--frames", type=int, default=100)
    p_synth.add_argument("--motion", default="0,0", help="vx,vy pixels per frame")
    p_synth.add_argument("--zoom", type=float, default=1.0, help="size factor per frame")
    p_synth.add_argument("--size", default="320x240", help="frame size WxH")
    p_synth.add_argument("--seed", type=int, default=7, help="texture seed")
    p_synth.set_defaults(fn=_cmd_synth)

    p_eval = sub.add_parser("eval", help="score a results CSV against ground truth")
    p_eval.add_argument("--results", required=True)
    p_eval.add_argument("--gt", required=True)
    p_eval.set_defaults(fn=_cmd_eval)

    p_emu = sub.add_parser("emulate", help="print the hardware dataflow model report")
    p_emu.add_argument("--config", default=None, help="key=value cost parameter file")
    p_emu.set_defaults(fn=_cmd_emulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except SystemExit as exc:
        # argparse exits on usage errors and --help; keep main() returning
        return int(exc.code or 0)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
