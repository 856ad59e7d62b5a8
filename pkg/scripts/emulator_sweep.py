#!/usr/bin/env python3
"""Sweep the hardware dataflow model over cost parameters.

Prints the default full-frame report, then a table showing how the
modeled throughput responds to the per-pass FFT cost and the clock, and
how the modeled resource counts respond to the lane budget. Every number
comes from the linear cost model; nothing here is a synthesis result.
"""

import argparse
import sys

from cftrack.pipeline_emu import (
    emulate_frame,
    render_csv_report,
    render_text_report,
)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--csv", action="store_true", help="print the resource CSV too")
    args = ap.parse_args(argv)

    base = emulate_frame()
    print(render_text_report(base))
    if args.csv:
        print()
        print(render_csv_report(base), end="")

    print("\nthroughput sensitivity (fps vs per-pass FFT cost and clock):")
    print(f"{'per_fft_cycles':>15} {'100 MHz':>10} {'150 MHz':>10} {'200 MHz':>10}")
    for per_fft in (64, 112, 160, 224):
        row = [f"{per_fft:>15}"]
        for clock in (100e6, 150e6, 200e6):
            rep = emulate_frame({"per_fft_cycles": per_fft, "clock_hz": clock})
            row.append(f"{rep.fps_estimate:>10.1f}")
        print(" ".join(row))

    print("\nresource scaling (modeled counts vs lane budget, 8 cores):")
    print(f"{'lanes/pipe':>10} {'registers':>10} {'luts':>8} {'block_ram':>10} {'dsp':>6}")
    # 8 batches of lane_count lanes must hold all 33 position channels
    for lane_count in (5, 6, 8):
        rep = emulate_frame({"lane_count": lane_count})
        r = rep.modeled_resources
        print(
            f"{lane_count:>10} {r['registers']:>10} {r['luts']:>8} "
            f"{r['block_ram']:>10} {r['dsp']:>6}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
