"""Software model of the tracker's hardware dataflow.

Feature channels are grouped into batches that share a fixed set of
filtering lanes, every 1-D FFT pass is serialized onto a single
time-multiplexed core per pipeline, and a linear cost model turns the
job list into cycles, throughput and a resource estimate. All resource
numbers are MODELED: the published reference counts are printed next to
them for comparison, never reproduced.
"""

from __future__ import annotations

from dataclasses import dataclass, field

TEMPLATE_SIDE = 32
POSITION_CHANNELS = 33
SCALE_CHANNELS = 32
SCALE_LEVELS = 7

DEFAULT_PER_FFT_CYCLES = 112
DEFAULT_LANE_COUNT = 5
DEFAULT_NUM_BATCHES = 8
DEFAULT_CLOCK_HZ = 100_000_000
DEFAULT_OVERHEAD_CYCLES = 4096
# pointwise multiply/accumulate stage for one batch of planes
POINTWISE_CYCLES_PER_BATCH = 1024

CONFIG_KEYS = ("per_fft_cycles", "lane_count", "num_batches", "clock_hz", "overhead_cycles")

# linear resource model (MODELED, not synthesis results)
BASE_RESOURCES = {"registers": 12000, "luts": 9000, "block_ram": 36, "dsp": 8}
PER_LANE_RESOURCES = {"registers": 1100, "luts": 850, "block_ram": 2, "dsp": 2}
PER_CORE_RESOURCES = {"registers": 2600, "luts": 2100, "block_ram": 7, "dsp": 8}

# published reference utilization, printed alongside the model for comparison
PAPER_REFERENCE = {
    "registers": (95485, "23%"),
    "luts": (68433, "33%"),
    "block_ram": (179, "40%"),
    "dsp": (143, "17%"),
}

JOB_KINDS = ("forward_rows", "forward_cols", "inverse_rows", "inverse_cols")


@dataclass
class BatchSchedule:
    """Ordered grouping of channel indices onto the shared lanes."""

    batches: list[list[int]]

    @property
    def channel_count(self) -> int:
        return sum(len(b) for b in self.batches)


@dataclass(frozen=True)
class FftJob:
    kind: str
    plane_id: str
    length: int = TEMPLATE_SIDE

    def __post_init__(self):
        if self.kind not in JOB_KINDS:
            raise ValueError(f"unknown job kind {self.kind!r}")
        if self.length != TEMPLATE_SIDE:
            raise ValueError(f"job length must be {TEMPLATE_SIDE}, got {self.length}")


@dataclass
class EmuReport:
    fft_invocations: int
    cycles_per_frame: int
    fps_estimate: float
    lanes: int
    modeled_resources: dict[str, int]
    clock_hz: float = DEFAULT_CLOCK_HZ
    detail: dict[str, int] = field(default_factory=dict)


def make_batches(d: int, num_batches: int = DEFAULT_NUM_BATCHES, lane_count: int = DEFAULT_LANE_COUNT) -> BatchSchedule:
    """Split channels 0..d-1 into contiguous, nearly equal batches.

    Sizes differ by at most one with the larger batches first; every
    batch must fit on the available lanes. Batches that would be empty
    are dropped.
    """
    if d < 1:
        raise ValueError(f"need at least one channel, got {d}")
    if num_batches < 1 or lane_count < 1:
        raise ValueError("batch and lane counts must be >= 1")
    if num_batches * lane_count < d:
        raise ValueError(
            f"{d} channels cannot fit in {num_batches} batches of {lane_count} lanes"
        )
    base, extra = divmod(d, num_batches)
    sizes = [base + 1] * extra + [base] * (num_batches - extra)
    batches: list[list[int]] = []
    start = 0
    for size in sizes:
        if size == 0:
            continue
        batches.append(list(range(start, start + size)))
        start += size
    return BatchSchedule(batches=batches)


def _check_schedule(d: int, schedule: BatchSchedule) -> None:
    seen: list[int] = []
    for batch in schedule.batches:
        seen.extend(batch)
    if sorted(seen) != list(range(d)) or len(seen) != d:
        raise ValueError(f"schedule does not partition channels 0..{d - 1}")


def schedule_fft_core(d: int, schedule: BatchSchedule) -> list[FftJob]:
    """Serialize one frame's transforms onto a single FFT core.

    Per batch, per channel: 32 row passes then 32 column passes of the
    forward transform; after all batches, 32 + 32 inverse passes for the
    one response plane. Total 1-D invocations: 64*d + 64.
    """
    if d < 1:
        raise ValueError("empty workload has no schedule")
    _check_schedule(d, schedule)
    jobs: list[FftJob] = []
    for batch in schedule.batches:
        for ch in batch:
            plane = f"ch{ch}"
            jobs.extend(FftJob("forward_rows", plane) for _ in range(TEMPLATE_SIDE))
            jobs.extend(FftJob("forward_cols", plane) for _ in range(TEMPLATE_SIDE))
    jobs.extend(FftJob("inverse_rows", "response") for _ in range(TEMPLATE_SIDE))
    jobs.extend(FftJob("inverse_cols", "response") for _ in range(TEMPLATE_SIDE))
    return jobs


def cycle_count(
    jobs: list[FftJob],
    per_fft_cycles: int = DEFAULT_PER_FFT_CYCLES,
    pointwise_cycles_per_batch: int = 0,
    num_batches: int = 0,
    overhead: int = 0,
) -> int:
    """Deterministic cost: FFT jobs, per-batch pointwise stages, overhead."""
    if jobs and per_fft_cycles < max(job.length for job in jobs):
        raise ValueError("a streaming FFT pass cannot take fewer cycles than its length")
    return len(jobs) * per_fft_cycles + num_batches * pointwise_cycles_per_batch + overhead


def resource_report(lane_count: int, fft_cores: int = 1) -> dict[str, int]:
    """Linear MODELED resource counts for the given lane and core budget."""
    if lane_count < 1:
        raise ValueError(f"lane count must be >= 1, got {lane_count}")
    if fft_cores < 1:
        raise ValueError(f"core count must be >= 1, got {fft_cores}")
    return {
        cat: BASE_RESOURCES[cat]
        + lane_count * PER_LANE_RESOURCES[cat]
        + fft_cores * PER_CORE_RESOURCES[cat]
        for cat in BASE_RESOURCES
    }


def parse_config(path: str) -> dict[str, float]:
    """Read key=value cost parameters; unknown keys are rejected."""
    values: dict[str, float] = {}
    with open(path, "r", encoding="ascii") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"malformed config line: {raw.strip()!r}")
            key, _, val = line.partition("=")
            key = key.strip()
            if key not in CONFIG_KEYS:
                raise ValueError(f"unknown config key {key!r}; valid keys: {', '.join(CONFIG_KEYS)}")
            try:
                values[key] = float(val.strip())
            except ValueError:
                raise ValueError(f"config value for {key!r} is not numeric: {val.strip()!r}") from None
    return values


def emulate_frame(config: dict[str, float] | None = None) -> EmuReport:
    """Model one tracking frame: position and scale pipelines in parallel.

    The position pipeline transforms all 33 channels on its own core;
    each of the 7 scale levels owns a core for its 32 channels and the
    levels run concurrently, so the frame takes the slower pipeline plus
    shared framing overhead. One core per pipeline keeps the
    time-multiplexing story of the job schedule intact.
    """
    cfg = dict(config or {})
    per_fft = int(cfg.get("per_fft_cycles", DEFAULT_PER_FFT_CYCLES))
    lane_count = int(cfg.get("lane_count", DEFAULT_LANE_COUNT))
    num_batches = int(cfg.get("num_batches", DEFAULT_NUM_BATCHES))
    clock_hz = float(cfg.get("clock_hz", DEFAULT_CLOCK_HZ))
    overhead = int(cfg.get("overhead_cycles", DEFAULT_OVERHEAD_CYCLES))
    if clock_hz <= 0:
        raise ValueError(f"clock must be positive, got {clock_hz}")

    pos_schedule = make_batches(POSITION_CHANNELS, num_batches, lane_count)
    pos_jobs = schedule_fft_core(POSITION_CHANNELS, pos_schedule)
    pos_cycles = cycle_count(
        pos_jobs,
        per_fft_cycles=per_fft,
        pointwise_cycles_per_batch=POINTWISE_CYCLES_PER_BATCH,
        num_batches=len(pos_schedule.batches),
    )

    scale_schedule = make_batches(SCALE_CHANNELS, num_batches, lane_count)
    scale_jobs = schedule_fft_core(SCALE_CHANNELS, scale_schedule)
    scale_cycles_one = cycle_count(
        scale_jobs,
        per_fft_cycles=per_fft,
        pointwise_cycles_per_batch=POINTWISE_CYCLES_PER_BATCH,
        num_batches=len(scale_schedule.batches),
    )

    cycles = max(pos_cycles, scale_cycles_one) + overhead
    invocations = len(pos_jobs) + SCALE_LEVELS * len(scale_jobs)
    cores = 1 + SCALE_LEVELS
    lanes = lane_count * cores
    return EmuReport(
        fft_invocations=invocations,
        cycles_per_frame=cycles,
        fps_estimate=clock_hz / cycles,
        lanes=lanes,
        modeled_resources=resource_report(lanes, fft_cores=cores),
        clock_hz=clock_hz,
        detail={
            "position_cycles": pos_cycles,
            "scale_cycles_per_level": scale_cycles_one,
            "scale_levels": SCALE_LEVELS,
            "fft_cores": cores,
            "overhead_cycles": overhead,
        },
    )


def render_text_report(report: EmuReport) -> str:
    lines = [
        "hardware dataflow model (all resource counts MODELED, not synthesized)",
        f"  1-D FFT invocations per frame: {report.fft_invocations}",
        f"  cycles per frame: {report.cycles_per_frame}",
        f"  clock: {report.clock_hz / 1e6:.1f} MHz",
        f"  throughput estimate: {report.fps_estimate:.3f} fps",
        f"  filtering lanes: {report.lanes}",
    ]
    for key, val in report.detail.items():
        lines.append(f"  {key}: {val}")
    lines.append("  resources (modeled vs published reference):")
    for cat, count in report.modeled_resources.items():
        ref_count, ref_util = PAPER_REFERENCE[cat]
        lines.append(
            f"    {cat}: modeled {count}, reference {ref_count} ({ref_util} utilization)"
        )
    return "\n".join(lines)


def render_csv_report(report: EmuReport) -> str:
    rows = ["category,modeled_count,paper_reference_count,paper_utilization"]
    for cat, count in report.modeled_resources.items():
        ref_count, ref_util = PAPER_REFERENCE[cat]
        rows.append(f"{cat},{count},{ref_count},{ref_util}")
    return "\n".join(rows) + "\n"
