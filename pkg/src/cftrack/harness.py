"""Sequence I/O, synthetic sequence generation and tracking metrics.

Ground truth follows the common benchmark convention: one "x,y,w,h" line
per frame, 1-based top-left corner. Images are 8-bit grayscale; the
portable graymap format is always supported, other formats only when
Pillow is installed. The synthetic generator renders a textured square
over a contrasting textured background with exact float ground truth,
reflecting the motion at the frame borders so long sequences stay valid.
"""

from __future__ import annotations

import os
import re
import time
from dataclasses import dataclass

import numpy as np

from .features import extract_features
from .filter_bank import peak_locate, respond
from .imaging import BoundingBox, GrayFrame, resize_bilinear
from .tracker import TrackerParams, TrackResult, init, step

IMAGE_SUFFIXES = (".pgm", ".png", ".jpg", ".jpeg", ".bmp")
TRUTH_NAME = "groundtruth_rect.txt"
CSV_HEADER = "frame,cx,cy,w,h,peak,scale_factor,center_error"


@dataclass
class Sequence:
    frames: list[GrayFrame]
    truth: list[BoundingBox] | None
    name: str

    def __post_init__(self):
        if self.truth is not None and len(self.truth) != len(self.frames):
            raise ValueError(
                f"{len(self.truth)} truth boxes for {len(self.frames)} frames"
            )


@dataclass
class Metrics:
    mean_center_error: float
    precision_at_20: float
    mean_iou: float
    fps: float


# ---------------------------------------------------------------- images


def write_pgm(path: str, plane: np.ndarray) -> None:
    """Binary 8-bit portable graymap from intensities in [0, 1]."""
    data = np.clip(np.asarray(plane, dtype=np.float64), 0.0, 1.0)
    pixels = np.round(data * 255.0).astype(np.uint8)
    h, w = pixels.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())


def read_pgm(path: str) -> GrayFrame:
    """Read binary (P5) or ASCII (P2) graymaps with 8-bit depth."""
    with open(path, "rb") as fh:
        blob = fh.read()
    magic = blob[:2]
    if magic not in (b"P5", b"P2"):
        raise OSError(f"{path}: not a portable graymap (magic {magic!r})")
    # header tokens: width, height, maxval; comments run to end of line
    tokens: list[int] = []
    pos = 2
    while len(tokens) < 3:
        m = re.compile(rb"\s*(#[^\n]*\n|\s)*?(\d+)").match(blob, pos)
        if not m:
            raise OSError(f"{path}: truncated graymap header")
        tokens.append(int(m.group(2)))
        pos = m.end()
    w, h, maxval = tokens
    if maxval < 1 or maxval > 255:
        raise OSError(f"{path}: unsupported maxval {maxval}, expected 8-bit")
    if magic == b"P5":
        pos += 1  # single whitespace byte after maxval
        if len(blob) - pos < w * h:
            raise OSError(f"{path}: truncated raster")
        raster = np.frombuffer(blob, dtype=np.uint8, count=w * h, offset=pos)
    else:
        values = blob[pos:].split()
        if len(values) < w * h:
            raise OSError(f"{path}: truncated raster")
        raster = np.array([int(v) for v in values[: w * h]], dtype=np.float64)
    plane = raster.reshape(h, w).astype(np.float64) / float(maxval)
    return GrayFrame(plane)


def load_image(path: str) -> GrayFrame:
    if path.lower().endswith(".pgm"):
        return read_pgm(path)
    try:
        from PIL import Image
    except ImportError:
        raise OSError(
            f"{path}: only .pgm is supported without Pillow (pip install pillow)"
        ) from None
    with Image.open(path) as img:
        if img.mode == "L":
            plane = np.asarray(img, dtype=np.float64) / 255.0
        else:
            rgb = np.asarray(img.convert("RGB"), dtype=np.float64) / 255.0
            r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
            plane = np.clip(0.299 * r + 0.114 * b + 0.587 * g, 0.0, 1.0)
    return GrayFrame(plane)


# ---------------------------------------------------------------- truth


def parse_truth_line(line: str) -> BoundingBox:
    """One "x,y,w,h" record, 1-based top-left corner, comma or tab split."""
    fields = [f for f in re.split(r"[,\t]", line.strip()) if f != ""]
    if len(fields) != 4:
        raise ValueError(f"expected 4 fields in truth line, got {len(fields)}: {line!r}")
    try:
        x, y, w, h = (float(f) for f in fields)
    except ValueError:
        raise ValueError(f"non-numeric truth line: {line!r}") from None
    if w <= 0 or h <= 0:
        raise ValueError(f"truth box must have positive size, got {w}x{h}")
    return BoundingBox(cx=x - 1.0 + w / 2.0, cy=y - 1.0 + h / 2.0, w=w, h=h)


def format_truth_line(box: BoundingBox) -> str:
    x = box.cx - box.w / 2.0 + 1.0
    y = box.cy - box.h / 2.0 + 1.0
    return f"{x:.10g},{y:.10g},{box.w:.10g},{box.h:.10g}"


def load_truth(path: str) -> list[BoundingBox]:
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    return [parse_truth_line(ln) for ln in lines]


def load_sequence(image_dir: str, truth_path: str | None = None) -> Sequence:
    names = sorted(
        n for n in os.listdir(image_dir) if n.lower().endswith(IMAGE_SUFFIXES)
    )
    if not names:
        raise OSError(f"no image files found in {image_dir}")
    frames = [load_image(os.path.join(image_dir, n)) for n in names]
    truth = None
    if truth_path is not None:
        truth = load_truth(truth_path)
        if len(truth) != len(frames):
            raise ValueError(
                f"{len(truth)} truth lines for {len(frames)} frames in {image_dir}"
            )
    return Sequence(frames=frames, truth=truth, name=os.path.basename(os.path.normpath(image_dir)))


# ---------------------------------------------------------------- synthesis


@dataclass
class SynthSpec:
    size: tuple[int, int] = (320, 240)  # (width, height)
    frames: int = 100
    motion: tuple[float, float] = (0.0, 0.0)  # (vx, vy) px/frame
    zoom: float = 1.0  # size factor per frame
    texture_seed: int = 7
    # starting target side in pixels; default is a fifth of the short frame
    # side. Zoom studies need ~100 px or more: a 0.5% scale step must move
    # the padded crop by at least one whole pixel to be observable at all.
    target_side: int | None = None

    def __post_init__(self):
        if self.size[0] < 64 or self.size[1] < 64:
            raise ValueError(f"frame size must be at least 64x64, got {self.size}")
        if self.frames < 2:
            raise ValueError(f"need at least 2 frames, got {self.frames}")
        if self.zoom <= 0:
            raise ValueError(f"zoom factor must be positive, got {self.zoom}")
        if self.target_side is not None and self.target_side < 8:
            raise ValueError(f"target side must be at least 8 px, got {self.target_side}")


def _fold(value: float, lo: float, hi: float) -> float:
    """Reflect value into [lo, hi] (triangle wave), exact at the edges."""
    if hi <= lo:
        return (lo + hi) / 2.0
    span = hi - lo
    u = (value - lo) % (2.0 * span)
    return lo + (u if u <= span else 2.0 * span - u)


def synth_sequence(spec: SynthSpec) -> Sequence:
    """Textured square over a textured background, exact float truth.

    The center follows the requested velocity and reflects off the frame
    borders, so constant motion is exact between bounces and the target
    never exits. The target texture is resampled bilinearly to the
    current size, emulating an optical zoom of a fixed pattern.
    """
    rng = np.random.default_rng(spec.texture_seed)
    fw, fh = spec.size
    # correlated textures throughout: per-pixel noise would alias away
    # under the patch downsample, leaving appearance dominated by the
    # resampling phase instead of by the scene
    bg_grid = rng.random((max(2, fh // 16), max(2, fw // 16)))
    background = 0.05 + 0.40 * resize_bilinear(GrayFrame(bg_grid), fw, fh).data
    coarse = resize_bilinear(GrayFrame(rng.random((12, 12))), 96, 96).data
    mid = resize_bilinear(GrayFrame(rng.random((16, 16))), 96, 96).data
    tex = 0.55 + 0.45 * (0.5 * coarse + 0.5 * mid)
    tex_side = tex.shape[0]

    side0 = spec.target_side if spec.target_side is not None else round(min(fw, fh) / 5.0)
    margin = 2.0
    frames: list[GrayFrame] = []
    truth: list[BoundingBox] = []
    for t in range(spec.frames):
        w = side0 * spec.zoom**t
        h = side0 * spec.zoom**t
        if w + 2 * margin > fw or h + 2 * margin > fh:
            raise ValueError(
                f"target size {w:.1f}x{h:.1f} at frame {t + 1} no longer fits the frame"
            )
        cx = _fold(fw / 2.0 + spec.motion[0] * t, w / 2.0 + margin, fw - w / 2.0 - margin)
        cy = _fold(fh / 2.0 + spec.motion[1] * t, h / 2.0 + margin, fh - h / 2.0 - margin)

        canvas = background.copy()
        left, top = cx - w / 2.0, cy - h / 2.0
        # pixels whose centers fall inside the target rectangle
        x0, x1 = int(np.ceil(left - 0.5)), int(np.floor(left + w - 0.5))
        y0, y1 = int(np.ceil(top - 0.5)), int(np.floor(top + h - 0.5))
        xs = np.arange(x0, x1 + 1)
        ys = np.arange(y0, y1 + 1)
        u = np.clip((xs + 0.5 - left) / w * tex_side - 0.5, 0.0, tex_side - 1.0)
        v = np.clip((ys + 0.5 - top) / h * tex_side - 0.5, 0.0, tex_side - 1.0)
        ui, vi = np.floor(u).astype(int), np.floor(v).astype(int)
        ui1, vi1 = np.minimum(ui + 1, tex_side - 1), np.minimum(vi + 1, tex_side - 1)
        fu, fv = u - ui, v - vi
        top_row = tex[np.ix_(vi, ui)] * (1 - fu) + tex[np.ix_(vi, ui1)] * fu
        bot_row = tex[np.ix_(vi1, ui)] * (1 - fu) + tex[np.ix_(vi1, ui1)] * fu
        patch = top_row * (1 - fv[:, None]) + bot_row * fv[:, None]
        canvas[np.ix_(ys, xs)] = patch

        frames.append(GrayFrame(canvas))
        truth.append(BoundingBox(cx=cx, cy=cy, w=float(w), h=float(h)))
    name = f"synth_{fw}x{fh}_f{spec.frames}_s{spec.texture_seed}"
    return Sequence(frames=frames, truth=truth, name=name)


def save_sequence(seq: Sequence, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    for i, frame in enumerate(seq.frames, start=1):
        write_pgm(os.path.join(out_dir, f"frame_{i:05d}.pgm"), frame.data)
    if seq.truth is not None:
        with open(os.path.join(out_dir, TRUTH_NAME), "w", encoding="ascii") as fh:
            for box in seq.truth:
                fh.write(format_truth_line(box) + "\n")


# ---------------------------------------------------------------- metrics


def iou(a: BoundingBox, b: BoundingBox) -> float:
    ax0, ax1 = a.cx - a.w / 2.0, a.cx + a.w / 2.0
    ay0, ay1 = a.cy - a.h / 2.0, a.cy + a.h / 2.0
    bx0, bx1 = b.cx - b.w / 2.0, b.cx + b.w / 2.0
    by0, by1 = b.cy - b.h / 2.0, b.cy + b.h / 2.0
    iw = max(0.0, min(ax1, bx1) - max(ax0, bx0))
    ih = max(0.0, min(ay1, by1) - max(ay0, by0))
    inter = iw * ih
    union = a.w * a.h + b.w * b.h - inter
    return inter / union if union > 0 else 0.0


def center_error(a: BoundingBox, b: BoundingBox) -> float:
    return float(np.hypot(a.cx - b.cx, a.cy - b.cy))


def evaluate(results, truth: list[BoundingBox], fps: float = 0.0) -> Metrics:
    """Center-error, 20-px precision and overlap metrics over a run.

    `results` may be TrackResult records or bare boxes. `fps` is supplied
    by the caller that timed the stepping loop; it defaults to 0 when no
    timing is available (evaluating a stored result file).
    """
    if len(results) != len(truth):
        raise ValueError(f"{len(results)} results against {len(truth)} truth boxes")
    if not results:
        raise ValueError("nothing to evaluate")
    boxes = [getattr(r, "box", r) for r in results]
    errors = [center_error(b, t) for b, t in zip(boxes, truth)]
    overlaps = [iou(b, t) for b, t in zip(boxes, truth)]
    return Metrics(
        mean_center_error=float(np.mean(errors)),
        precision_at_20=float(np.mean([e <= 20.0 for e in errors])),
        mean_iou=float(np.mean(overlaps)),
        fps=fps,
    )


# ---------------------------------------------------------------- tracking runs


def run_tracker(
    seq: Sequence,
    init_box: BoundingBox,
    params: TrackerParams | None = None,
) -> tuple[list[TrackResult], float]:
    """Track a loaded sequence; returns per-frame results and stepping fps.

    The first result echoes the starting box with its self-response peak.
    Timing covers only the per-frame step calls, not image I/O.
    """
    if not seq.frames:
        raise ValueError("sequence has no frames")
    params = params or TrackerParams()
    state = init(seq.frames[0], init_box, params)
    feats = extract_features(seq.frames[0], init_box, 1.0, params.pad, include_gray=True)
    _, _, peak0 = peak_locate(respond(state.position_model, feats))
    results = [
        TrackResult(frame_index=1, box=init_box, position_peak=peak0, scale_factor=1.0)
    ]
    elapsed = 0.0
    for frame in seq.frames[1:]:
        t0 = time.perf_counter()
        state, result = step(state, frame)
        elapsed += time.perf_counter() - t0
        results.append(result)
    fps = (len(seq.frames) - 1) / elapsed if elapsed > 0 else 0.0
    return results, fps


def write_results_csv(path: str, results: list[TrackResult], truth: list[BoundingBox] | None) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(CSV_HEADER + "\n")
        for i, r in enumerate(results):
            err = "" if truth is None else f"{center_error(r.box, truth[i]):.6g}"
            fh.write(
                f"{r.frame_index},{r.box.cx:.6f},{r.box.cy:.6f},"
                f"{r.box.w:.6f},{r.box.h:.6f},{r.position_peak:.6g},"
                f"{r.scale_factor:.6g},{err}\n"
            )


def read_results_csv(path: str) -> list[BoundingBox]:
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("frame,"):
        raise ValueError(f"{path}: missing results header")
    boxes = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) < 5:
            raise ValueError(f"{path}: malformed results row: {ln!r}")
        cx, cy, w, h = (float(p) for p in parts[1:5])
        boxes.append(BoundingBox(cx=cx, cy=cy, w=w, h=h))
    return boxes


def dump_response_map(path: str, response) -> None:
    """Response map as an 8-bit image, min-max normalized."""
    values = response.values
    lo, hi = float(values.min()), float(values.max())
    scaled = (values - lo) / (hi - lo) if hi > lo else np.zeros_like(values)
    write_pgm(path, scaled)
