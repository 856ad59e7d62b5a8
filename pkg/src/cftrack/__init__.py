"""Correlation-filter visual tracker with scale search and a dataflow emulator."""

from .features import FeatureMap, assemble, cosine_window, extract_features, gray_channel, hog32
from .filter_bank import (
    FilterModel,
    ResponseMap,
    peak_locate,
    respond,
    respond_batched,
    train_init,
    update,
)
from .harness import (
    Metrics,
    Sequence,
    SynthSpec,
    evaluate,
    load_sequence,
    parse_truth_line,
    run_tracker,
    synth_sequence,
)
from .imaging import BoundingBox, GrayFrame, Patch, extract_block, resize_bilinear, to_gray
from .pipeline_emu import (
    BatchSchedule,
    EmuReport,
    FftJob,
    cycle_count,
    emulate_frame,
    make_batches,
    resource_report,
    schedule_fft_core,
)
from .scale_search import ScalePyramid, ScaleResult, best_scale, pyramid
from .spectral import GaussianLabel, dft1d, fft2d, gaussian_label, ifft2d, pointwise
from .tracker import TrackerParams, TrackerState, TrackResult, init, step

__version__ = "0.1.0"

__all__ = [
    "BatchSchedule",
    "BoundingBox",
    "EmuReport",
    "FeatureMap",
    "FftJob",
    "FilterModel",
    "GaussianLabel",
    "GrayFrame",
    "Metrics",
    "Patch",
    "ResponseMap",
    "ScalePyramid",
    "ScaleResult",
    "Sequence",
    "SynthSpec",
    "TrackResult",
    "TrackerParams",
    "TrackerState",
    "assemble",
    "best_scale",
    "cosine_window",
    "cycle_count",
    "dft1d",
    "emulate_frame",
    "evaluate",
    "extract_block",
    "extract_features",
    "fft2d",
    "gaussian_label",
    "gray_channel",
    "hog32",
    "ifft2d",
    "init",
    "load_sequence",
    "make_batches",
    "parse_truth_line",
    "peak_locate",
    "pointwise",
    "pyramid",
    "resize_bilinear",
    "resource_report",
    "respond",
    "respond_batched",
    "run_tracker",
    "schedule_fft_core",
    "step",
    "synth_sequence",
    "to_gray",
    "train_init",
    "update",
]
