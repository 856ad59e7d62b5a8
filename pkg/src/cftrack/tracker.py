"""Per-frame tracking loop: locate, rescale, update.

Each step responds with the position filter (gray + gradient channels),
moves the box, searches the scale pyramid around the new center with the
gradient-only filter, then retrains both filters once from the block at
the final box. Both filters share one Gaussian label and one template
grid.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .features import FeatureMap, extract_features
from .filter_bank import FilterModel, ResponseMap, peak_locate, respond, train_init, update
from .imaging import BoundingBox, GrayFrame, extract_block
from .scale_search import best_scale, pyramid
from .spectral import GaussianLabel, gaussian_label

MIN_BOX_SIDE = 8.0  # pixels; boxes never shrink below this


@dataclass
class TrackerParams:
    lam: float = 0.01
    eta: float = 0.025
    sigma: float = 2.0  # label width in cells
    scale_levels: int = 7
    scale_step: float = 1.005
    pad: float = 2.0
    patch_side: int = 128
    template_side: int = 32
    cell: int = 4

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"learning rate must lie in [0, 1], got {self.eta}")
        if not self.sigma > 0:
            raise ValueError(f"label sigma must be positive, got {self.sigma}")
        if self.scale_levels < 1 or self.scale_levels % 2 == 0:
            raise ValueError(f"scale level count must be odd, got {self.scale_levels}")
        if not self.scale_step > 1.0:
            raise ValueError(f"scale step must exceed 1, got {self.scale_step}")
        if self.patch_side != self.template_side * self.cell:
            raise ValueError("patch side must equal template side times cell size")


@dataclass
class TrackerState:
    box: BoundingBox
    position_model: FilterModel  # 33 channels
    scale_model: FilterModel  # 32 channels
    label: GaussianLabel
    frame_index: int
    params: TrackerParams


@dataclass
class TrackResult:
    frame_index: int
    box: BoundingBox
    position_peak: float
    scale_factor: float
    response: ResponseMap | None = None


def _feature_pair(frame: GrayFrame, box: BoundingBox, params: TrackerParams):
    """33-channel and 32-channel windowed maps from the same block.

    The scale map is the position map without its leading gray plane, so
    one extraction serves both filters.
    """
    pos = extract_features(
        frame, box, scale=1.0, pad=params.pad, include_gray=True,
        patch_side=params.patch_side, cell=params.cell,
    )
    scale = FeatureMap(planes=pos.planes[1:], windowed=True)
    return pos, scale


def init(frame: GrayFrame, box: BoundingBox, params: TrackerParams | None = None) -> TrackerState:
    """Train both filters on the first frame's block."""
    params = params or TrackerParams()
    if box.w < 1.0 or box.h < 1.0:
        raise ValueError(f"starting box is degenerate: {box.w}x{box.h}")
    label = gaussian_label(params.template_side, params.template_side, params.sigma)
    pos_feats, scale_feats = _feature_pair(frame, box, params)
    return TrackerState(
        box=box,
        position_model=train_init(pos_feats, label, params.lam),
        scale_model=train_init(scale_feats, label, params.lam),
        label=label,
        frame_index=1,
        params=params,
    )


def _clamp_center(cx: float, cy: float, frame: GrayFrame) -> tuple[float, float]:
    cx = min(max(cx, 0.0), frame.width - 1.0)
    cy = min(max(cy, 0.0), frame.height - 1.0)
    return cx, cy


def step(state: TrackerState, frame: GrayFrame) -> tuple[TrackerState, TrackResult]:
    """Process one frame: position, then scale, then one model update."""
    p = state.params
    box = state.box

    # position: respond on the block at the previous box
    pos_feats = extract_features(
        frame, box, scale=1.0, pad=p.pad, include_gray=True,
        patch_side=p.patch_side, cell=p.cell,
    )
    response = respond(state.position_model, pos_feats)
    dy, dx, peak = peak_locate(response)
    # one response cell spans block_extent/template_side frame pixels
    block = extract_block(frame, box, 1.0, p.pad)
    cx = box.cx + dx * (block.width / p.template_side)
    cy = box.cy + dy * (block.height / p.template_side)
    cx, cy = _clamp_center(cx, cy, frame)

    # scale: probe the pyramid around the new center
    pyr = pyramid(box.w, box.h, p.scale_step, p.scale_levels, p.pad)
    chosen = best_scale(frame, (cy, cx), box, state.scale_model, pyr)
    w = max(box.w * chosen.factor, MIN_BOX_SIDE)
    h = max(box.h * chosen.factor, MIN_BOX_SIDE)
    new_box = BoundingBox(cx=cx, cy=cy, w=w, h=h)

    # single update of both models from the final box
    pos_train, scale_train = _feature_pair(frame, new_box, p)
    new_state = replace(
        state,
        box=new_box,
        position_model=update(state.position_model, pos_train, state.label, p.eta),
        scale_model=update(state.scale_model, scale_train, state.label, p.eta),
        frame_index=state.frame_index + 1,
    )
    result = TrackResult(
        frame_index=new_state.frame_index,
        box=new_box,
        position_peak=peak,
        scale_factor=chosen.factor,
        response=response,
    )
    return new_state, result
