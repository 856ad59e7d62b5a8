"""Feature extraction: pooled grayscale plane plus a 32-channel HOG map.

A 128x128 patch maps to 32x32 cells of 4x4 pixels. The HOG follows the
Felzenszwalb construction: 18 contrast-sensitive orientation channels,
9 contrast-insensitive channels and 4 normalization-energy channels
(31 total), plus one extra channel holding the per-cell average gradient
magnitude, for exactly 32 channels. All planes are multiplied by a
separable Hann window before spectral processing.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .imaging import BoundingBox, GrayFrame, Patch, extract_block, resize_bilinear

N_ORIENT = 18  # signed orientation bins over [0, 2*pi)
HOG_CHANNELS = 32
NORM_EPS = 1e-4
CLIP = 0.2
# weight of the four normalization-energy channels, 1/sqrt(18)
TEXTURE_WEIGHT = 0.2357


@dataclass
class FeatureMap:
    """Stack of real feature planes, shape (channels, rows, cols)."""

    planes: np.ndarray
    windowed: bool = False

    def __post_init__(self):
        self.planes = np.asarray(self.planes, dtype=np.float64)
        if self.planes.ndim != 3 or self.planes.shape[0] < 1:
            raise ValueError(f"planes must be (channels, rows, cols), got {self.planes.shape}")
        if not np.all(np.isfinite(self.planes)):
            raise ValueError("feature planes must be finite")

    @property
    def channels(self) -> int:
        return self.planes.shape[0]

    @property
    def rows(self) -> int:
        return self.planes.shape[1]

    @property
    def cols(self) -> int:
        return self.planes.shape[2]


@lru_cache(maxsize=None)
def cosine_window(rows: int = 32, cols: int = 32) -> np.ndarray:
    """Separable Hann window; border weights are exactly zero."""
    hr = 0.5 * (1.0 - np.cos(2.0 * np.pi * np.arange(rows) / (rows - 1)))
    hc = 0.5 * (1.0 - np.cos(2.0 * np.pi * np.arange(cols) / (cols - 1)))
    w = np.outer(hr, hc)
    w.flags.writeable = False
    return w


def gray_channel(patch: Patch) -> np.ndarray:
    """4x4 mean pooling of the patch to 32x32, then mean subtraction."""
    side = patch.side
    cells = side // 4
    pooled = patch.data.reshape(cells, 4, cells, 4).mean(axis=(1, 3))
    return pooled - pooled.mean()


@lru_cache(maxsize=8)
def _vote_geometry(h: int, w: int, cell: int):
    """Bilinear cell-vote indices for one patch shape.

    Each pixel votes into up to four neighbouring cells. The cell indices
    and vote weights depend only on the patch geometry, so they are
    computed once per shape: a (valid, base_index, weight) triple per
    corner, all flattened to pixel order.
    """
    cy, cx = h // cell, w // cell
    ys, xs = np.mgrid[0:h, 0:w]
    fy = (ys + 0.5) / cell - 0.5
    fx = (xs + 0.5) / cell - 0.5
    iy = np.floor(fy).astype(np.intp)
    ix = np.floor(fx).astype(np.intp)
    ry = fy - iy
    rx = fx - ix
    corners = []
    for oy, ox, wt in (
        (iy, ix, (1.0 - ry) * (1.0 - rx)),
        (iy, ix + 1, (1.0 - ry) * rx),
        (iy + 1, ix, ry * (1.0 - rx)),
        (iy + 1, ix + 1, ry * rx),
    ):
        ok = ((oy >= 0) & (oy < cy) & (ox >= 0) & (ox < cx)).ravel()
        base = (oy.ravel()[ok] * cx + ox.ravel()[ok]) * N_ORIENT
        wok = wt.ravel()[ok]
        for arr in (ok, base, wok):
            arr.flags.writeable = False
        corners.append((ok, base, wok))
    return cy, cx, tuple(corners)


def _cell_histogram(patch_data: np.ndarray, cell: int):
    """Orientation histogram (cells_y, cells_x, 18) and gradient magnitude."""
    h, w = patch_data.shape
    padded = np.pad(patch_data, 1, mode="edge")
    dx = padded[1:-1, 2:] - padded[1:-1, :-2]
    dy = padded[2:, 1:-1] - padded[:-2, 1:-1]
    mag = np.hypot(dx, dy)
    # snap to the nearest of 18 signed directions (bin centers at k*20 deg)
    theta = np.arctan2(dy, dx)
    bins = np.round(theta * (N_ORIENT / (2.0 * np.pi))).astype(np.intp) % N_ORIENT

    cy, cx, corners = _vote_geometry(h, w, cell)
    bins_flat = bins.ravel()
    mag_flat = mag.ravel()
    hist = np.zeros(cy * cx * N_ORIENT)
    for ok, base, wok in corners:
        flat = base + bins_flat[ok]
        hist += np.bincount(flat, weights=mag_flat[ok] * wok, minlength=hist.size)
    return hist.reshape(cy, cx, N_ORIENT), mag


def hog32(patch: Patch, cell: int = 4) -> np.ndarray:
    """32 HOG planes of shape (cells, cells) for a square patch.

    Channels 0-17: contrast-sensitive orientations; 18-26: contrast-
    insensitive; 27-30: normalization energies; 31: per-cell average
    gradient magnitude. Block normalization clips each value at 0.2; the
    four 2x2-cell normalization blocks are edge-clamped so border cells
    get full feature vectors.
    """
    if patch.side % cell != 0:
        raise ValueError(f"cell size {cell} must divide the patch side {patch.side}")
    hist, mag = _cell_histogram(patch.data, cell)
    cy, cx = hist.shape[:2]

    insens = hist[:, :, :9] + hist[:, :, 9:]
    energy = np.sum(insens**2, axis=2)
    epad = np.pad(energy, 1, mode="edge")
    # block[i, j] = energy sum of the 2x2 cell block anchored at (i-1, j-1)
    block = epad[:-1, :-1] + epad[1:, :-1] + epad[:-1, 1:] + epad[1:, 1:]
    # the four normalizers of cell (i, j) come from the blocks at its corners
    norms = np.stack(
        [block[:-1, :-1], block[:-1, 1:], block[1:, :-1], block[1:, 1:]], axis=2
    )
    norms = 1.0 / np.sqrt(norms + NORM_EPS)

    out = np.zeros((HOG_CHANNELS, cy, cx))
    clipped_sens = np.minimum(hist[:, :, :, None] * norms[:, :, None, :], CLIP)
    out[:N_ORIENT] = 0.5 * clipped_sens.sum(axis=3).transpose(2, 0, 1)
    clipped_ins = np.minimum(insens[:, :, :, None] * norms[:, :, None, :], CLIP)
    out[N_ORIENT : N_ORIENT + 9] = 0.5 * clipped_ins.sum(axis=3).transpose(2, 0, 1)
    out[27:31] = TEXTURE_WEIGHT * clipped_sens.sum(axis=2).transpose(2, 0, 1)
    out[31] = mag.reshape(cy, cell, cx, cell).mean(axis=(1, 3))
    return out


def assemble(
    gray: np.ndarray | None,
    hog: np.ndarray,
    win: np.ndarray,
    include_gray: bool,
) -> FeatureMap:
    """Stack [gray?, hog...] and apply the window to every plane."""
    hog = np.asarray(hog, dtype=np.float64)
    if hog.ndim != 3 or hog.shape[1:] != win.shape:
        raise ValueError(f"hog planes {hog.shape} do not match window {win.shape}")
    if include_gray:
        if gray is None or np.asarray(gray).shape != win.shape:
            raise ValueError("gray plane must match the window shape")
        planes = np.concatenate([np.asarray(gray, dtype=np.float64)[None], hog], axis=0)
    else:
        planes = hog
    return FeatureMap(planes=planes * win[None, :, :], windowed=True)


def extract_features(
    frame: GrayFrame,
    box: BoundingBox,
    scale: float,
    pad: float,
    include_gray: bool,
    patch_side: int = 128,
    cell: int = 4,
) -> FeatureMap:
    """Full pipeline: crop, resize to the fixed patch, featurize, window."""
    block = extract_block(frame, box, scale, pad)
    patch = Patch.from_frame(resize_bilinear(block, patch_side, patch_side), side=patch_side)
    cells = patch_side // cell
    win = cosine_window(cells, cells)
    gray = gray_channel(patch) if include_gray else None
    return assemble(gray, hog32(patch, cell), win, include_gray)
