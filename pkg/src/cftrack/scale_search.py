"""Scale estimation over a small pyramid of candidate factors.

Candidate blocks a^n * P x a^n * R around the estimated position are each
resized to the fixed patch and scored with the gradient-feature scale
filter; the best-responding factor wins. Ties prefer the factor nearest
1.0 so a flat response keeps the current size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .features import extract_features
from .filter_bank import FilterModel, peak_locate, respond
from .imaging import BoundingBox, GrayFrame


@dataclass
class ScalePyramid:
    """Candidate scale factors and the pixel sizes they map to."""

    factors: tuple[float, ...]
    sizes: tuple[tuple[int, int], ...]  # (width, height) of each candidate block
    base: tuple[float, float]  # (P, R) target size in pixels
    pad: float

    def __post_init__(self):
        if len(self.factors) != len(self.sizes):
            raise ValueError("factors and sizes must have equal length")
        if len(self.factors) % 2 != 1:
            raise ValueError("pyramid must hold an odd number of levels")
        if any(b <= a for a, b in zip(self.factors, self.factors[1:])):
            raise ValueError("factors must be strictly increasing")

    @property
    def levels(self) -> int:
        return len(self.factors)


@dataclass
class ScaleResult:
    index: int
    factor: float
    peak: float
    displacement: tuple[int, int]  # (dy, dx) cells at the selected level


def pyramid(P: float, R: float, a: float, S: int, pad: float) -> ScalePyramid:
    """Factors a^n for n = -(S-1)/2 .. (S-1)/2 and the padded pixel sizes."""
    if P <= 0 or R <= 0:
        raise ValueError(f"target size must be positive, got {P}x{R}")
    if a <= 1.0:
        raise ValueError(f"scale step must exceed 1, got {a}")
    if S < 1 or S % 2 == 0:
        raise ValueError(f"level count must be odd and >= 1, got {S}")
    half = (S - 1) // 2
    factors = tuple(float(a) ** n for n in range(-half, half + 1))
    sizes = tuple(
        (max(1, round(f * pad * P)), max(1, round(f * pad * R))) for f in factors
    )
    return ScalePyramid(factors=factors, sizes=sizes, base=(float(P), float(R)), pad=float(pad))


def best_scale(
    frame: GrayFrame,
    center: tuple[float, float],
    box: BoundingBox,
    scale_model: FilterModel,
    pyr: ScalePyramid,
) -> ScaleResult:
    """Score every pyramid level and return the strongest one.

    Each level extracts its candidate block around `center` (keeping the
    box's width/height as the base size), resizes to the fixed patch and
    responds with the gradient-only filter. Ties break toward the factor
    closest to 1.0, then toward the smaller index.
    """
    if scale_model.channels != 32:
        raise ValueError(f"scale filter must have 32 channels, got {scale_model.channels}")
    cy, cx = center
    probe = BoundingBox(cx=cx, cy=cy, w=box.w, h=box.h)
    peaks: list[float] = []
    moves: list[tuple[int, int]] = []
    for factor in pyr.factors:
        feats = extract_features(frame, probe, scale=factor, pad=pyr.pad, include_gray=False)
        dy, dx, peak = peak_locate(respond(scale_model, feats))
        peaks.append(peak)
        moves.append((dy, dx))
    # visit levels by tie-break priority; only a strictly larger peak replaces
    order = sorted(range(pyr.levels), key=lambda i: (abs(pyr.factors[i] - 1.0), i))
    best = order[0]
    for i in order[1:]:
        if peaks[i] > peaks[best]:
            best = i
    return ScaleResult(
        index=best, factor=pyr.factors[best], peak=peaks[best], displacement=moves[best]
    )
