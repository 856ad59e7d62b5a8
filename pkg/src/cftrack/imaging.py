"""Frame representation, target-block extraction and bilinear resizing.

All images are single-channel float64 arrays with intensities in [0, 1],
row-major (index order [row, col]). Bounding boxes are center-based with
fractional coordinates allowed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

PATCH_SIDE = 128


@dataclass
class GrayFrame:
    """Normalized single-channel image. ``data`` has shape (height, width)."""

    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.ndim != 2 or self.data.shape[0] < 1 or self.data.shape[1] < 1:
            raise ValueError(f"frame must be a nonempty 2-D array, got shape {self.data.shape}")
        if not np.all(np.isfinite(self.data)):
            raise ValueError("frame intensities must be finite")
        if self.data.min() < 0.0 or self.data.max() > 1.0:
            raise ValueError("frame intensities must lie in [0, 1]")

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]


@dataclass
class BoundingBox:
    """Center-based box: center (cx, cy) in pixels, size w x h (> 0)."""

    cx: float
    cy: float
    w: float
    h: float

    def __post_init__(self):
        for name in ("cx", "cy", "w", "h"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"box field {name} must be finite, got {v}")
            setattr(self, name, v)
        if self.w <= 0 or self.h <= 0:
            raise ValueError(f"box size must be positive, got {self.w}x{self.h}")


@dataclass
class Patch:
    """Fixed-size square patch fed to feature extraction."""

    data: np.ndarray
    side: int = field(default=PATCH_SIDE)

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.shape != (self.side, self.side):
            raise ValueError(
                f"patch must be {self.side}x{self.side}, got {self.data.shape}"
            )

    @classmethod
    def from_frame(cls, frame: GrayFrame, side: int = PATCH_SIDE) -> "Patch":
        return cls(frame.data, side=side)


def to_gray(r: float, g: float, b: float) -> float:
    """Luma of an RGB triple in [0, 1], clamped to [0, 1]."""
    # summation order keeps the weight total at exactly 1.0 in floats
    y = 0.299 * r + 0.114 * b + 0.587 * g
    return min(max(y, 0.0), 1.0)


def extract_block(frame: GrayFrame, box: BoundingBox, scale: float, pad: float) -> GrayFrame:
    """Crop of size round(scale*pad*w) x round(scale*pad*h) centered on the box.

    Pixels outside the frame are filled by nearest-edge replication. The crop
    covers the integer columns x0 .. x0+ow-1 with x0 = floor(cx) - (ow-1)//2
    (rows analogous), so odd sizes center exactly on integer coordinates.
    """
    if not (math.isfinite(scale) and scale > 0):
        raise ValueError(f"scale must be finite and > 0, got {scale}")
    if pad < 1:
        raise ValueError(f"pad must be >= 1, got {pad}")
    ow = max(1, round(scale * pad * box.w))
    oh = max(1, round(scale * pad * box.h))
    x0 = math.floor(box.cx) - (ow - 1) // 2
    y0 = math.floor(box.cy) - (oh - 1) // 2
    cols = np.clip(np.arange(x0, x0 + ow), 0, frame.width - 1)
    rows = np.clip(np.arange(y0, y0 + oh), 0, frame.height - 1)
    return GrayFrame(frame.data[np.ix_(rows, cols)])


@lru_cache(maxsize=64)
def _axis_coords(dst_n: int, src_n: int):
    """Sample positions for one resize axis, cached per size pair."""
    f = np.clip((np.arange(dst_n) + 0.5) * (src_n / dst_n) - 0.5, 0.0, src_n - 1.0)
    i0 = np.floor(f).astype(np.intp)
    i1 = np.minimum(i0 + 1, src_n - 1)
    frac = f - i0
    for arr in (i0, i1, frac):
        arr.flags.writeable = False
    return i0, i1, frac


def resize_bilinear(block: GrayFrame, out_w: int, out_h: int) -> GrayFrame:
    """Bilinear resize with pixel-center alignment and edge clamping.

    Source coordinate for output index i is (i + 0.5) * src/dst - 0.5,
    clamped to the valid range before interpolation.
    """
    if out_w < 1 or out_h < 1:
        raise ValueError(f"output size must be >= 1, got {out_w}x{out_h}")
    src = block.data
    sh, sw = src.shape
    y0, y1, wy = _axis_coords(out_h, sh)
    x0, x1, wx = _axis_coords(out_w, sw)
    wy = wy[:, None]
    wx = wx[None, :]
    top = src[np.ix_(y0, x0)] * (1.0 - wx) + src[np.ix_(y0, x1)] * wx
    bot = src[np.ix_(y1, x0)] * (1.0 - wx) + src[np.ix_(y1, x1)] * wx
    return GrayFrame(top * (1.0 - wy) + bot * wy)
