import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cftrack.imaging import (
    BoundingBox,
    GrayFrame,
    Patch,
    extract_block,
    resize_bilinear,
    to_gray,
)


def test_to_gray_exact_triples():
    assert to_gray(0.0, 0.0, 0.0) == 0.0
    assert to_gray(1.0, 1.0, 1.0) == 1.0
    assert to_gray(1.0, 0.0, 0.0) == 0.299
    assert to_gray(0.0, 1.0, 0.0) == 0.587
    assert to_gray(0.0, 0.0, 1.0) == 0.114
    # clamped on both ends
    assert to_gray(2.0, 2.0, 2.0) == 1.0
    assert to_gray(-1.0, 0.0, 0.0) == 0.0


def test_gray_frame_validation():
    GrayFrame(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        GrayFrame(np.zeros(5))
    with pytest.raises(ValueError):
        GrayFrame(np.full((2, 2), 1.5))
    with pytest.raises(ValueError):
        GrayFrame(np.full((2, 2), -0.1))
    with pytest.raises(ValueError):
        GrayFrame(np.array([[0.0, np.nan]]))


def test_bounding_box_validation():
    b = BoundingBox(cx=10.5, cy=3.0, w=4.0, h=2.0)
    assert b.cx == 10.5
    with pytest.raises(ValueError):
        BoundingBox(cx=0, cy=0, w=0, h=5)
    with pytest.raises(ValueError):
        BoundingBox(cx=0, cy=0, w=5, h=-1)
    with pytest.raises(ValueError):
        BoundingBox(cx=math.inf, cy=0, w=5, h=5)


def test_patch_shape_enforced():
    Patch(np.zeros((128, 128)))
    Patch(np.zeros((16, 16)), side=16)
    with pytest.raises(ValueError):
        Patch(np.zeros((16, 32)), side=16)


def _grid_frame(w=20, h=12):
    # value encodes position so crops can be checked pixel by pixel
    vals = (np.arange(h)[:, None] * w + np.arange(w)[None, :]) / float(h * w)
    return GrayFrame(vals)


def test_extract_block_size_is_rounded_scaled_pad():
    frame = _grid_frame()
    box = BoundingBox(cx=10, cy=6, w=4, h=3)
    blk = extract_block(frame, box, scale=1.0, pad=2.0)
    assert (blk.height, blk.width) == (6, 8)
    blk = extract_block(frame, box, scale=1.25, pad=2.0)
    assert (blk.height, blk.width) == (round(1.25 * 2 * 3), 10)


def test_extract_block_odd_size_centers_on_integer_pixel():
    frame = _grid_frame()
    box = BoundingBox(cx=9.0, cy=5.0, w=2.5, h=2.5)
    blk = extract_block(frame, box, scale=1.0, pad=2.0)  # 5x5 crop
    assert (blk.height, blk.width) == (5, 5)
    assert blk.data[2, 2] == frame.data[5, 9]
    assert blk.data[0, 0] == frame.data[3, 7]


def test_extract_block_floor_convention_for_fractional_center():
    frame = _grid_frame()
    a = extract_block(frame, BoundingBox(9.0, 5.0, 3, 3), 1.0, 1.0)
    b = extract_block(frame, BoundingBox(9.9, 5.9, 3, 3), 1.0, 1.0)
    # same integer anchor until the center crosses the next pixel
    assert np.array_equal(a.data, b.data)
    c = extract_block(frame, BoundingBox(10.0, 5.0, 3, 3), 1.0, 1.0)
    assert not np.array_equal(a.data, c.data)


def test_extract_block_replicates_edges():
    frame = _grid_frame(w=6, h=6)
    box = BoundingBox(cx=0.0, cy=0.0, w=4, h=4)
    blk = extract_block(frame, box, scale=1.0, pad=2.0)
    assert (blk.height, blk.width) == (8, 8)
    # rows/cols outside the frame repeat the first row/col
    assert blk.data[0, 4] == blk.data[3, 4] == frame.data[0, 1]
    assert blk.data[4, 0] == blk.data[4, 3] == frame.data[1, 0]
    assert blk.data[0, 0] == frame.data[0, 0]


def test_extract_block_rejects_bad_scale_and_pad():
    frame = _grid_frame()
    box = BoundingBox(5, 5, 2, 2)
    with pytest.raises(ValueError):
        extract_block(frame, box, scale=0.0, pad=2.0)
    with pytest.raises(ValueError):
        extract_block(frame, box, scale=-1.0, pad=2.0)
    with pytest.raises(ValueError):
        extract_block(frame, box, scale=1.0, pad=0.5)


def test_resize_bilinear_frozen_2x2_to_4x4():
    """Hand-computed upsample of [[0,1],[1,0]] under pixel-center alignment."""
    src = GrayFrame(np.array([[0.0, 1.0], [1.0, 0.0]]))
    out = resize_bilinear(src, 4, 4).data
    expect = np.array(
        [
            [0.00, 0.25, 0.75, 1.00],
            [0.25, 0.375, 0.625, 0.75],
            [0.75, 0.625, 0.375, 0.25],
            [1.00, 0.75, 0.25, 0.00],
        ]
    )
    assert np.max(np.abs(out - expect)) < 1e-15


def naive_resize(src, out_w, out_h):
    sh, sw = src.shape
    out = np.zeros((out_h, out_w))
    for i in range(out_h):
        for j in range(out_w):
            fy = min(max((i + 0.5) * sh / out_h - 0.5, 0.0), sh - 1.0)
            fx = min(max((j + 0.5) * sw / out_w - 0.5, 0.0), sw - 1.0)
            y0, x0 = int(math.floor(fy)), int(math.floor(fx))
            y1, x1 = min(y0 + 1, sh - 1), min(x0 + 1, sw - 1)
            ry, rx = fy - y0, fx - x0
            top = src[y0, x0] * (1 - rx) + src[y0, x1] * rx
            bot = src[y1, x0] * (1 - rx) + src[y1, x1] * rx
            out[i, j] = top * (1 - ry) + bot * ry
    return out


@settings(max_examples=30, deadline=None)
@given(
    st.integers(0, 2**32 - 1),
    st.integers(1, 9),
    st.integers(1, 9),
    st.integers(1, 12),
    st.integers(1, 12),
)
def test_resize_bilinear_matches_naive_loop(seed, sh, sw, oh, ow):
    src = np.random.default_rng(seed).random((sh, sw))
    got = resize_bilinear(GrayFrame(src), ow, oh).data
    assert np.max(np.abs(got - naive_resize(src, ow, oh))) < 1e-12


def test_resize_bilinear_identity_and_constant():
    rng = np.random.default_rng(3)
    src = rng.random((7, 5))
    same = resize_bilinear(GrayFrame(src), 5, 7).data
    assert np.max(np.abs(same - src)) < 1e-15
    const = resize_bilinear(GrayFrame(np.full((3, 3), 0.625)), 10, 6).data
    assert np.max(np.abs(const - 0.625)) < 1e-15


def test_resize_bilinear_preserves_value_range():
    rng = np.random.default_rng(4)
    src = rng.random((9, 9))
    out = resize_bilinear(GrayFrame(src), 33, 17).data
    assert out.min() >= src.min() - 1e-12
    assert out.max() <= src.max() + 1e-12


def test_resize_bilinear_rejects_empty_output():
    with pytest.raises(ValueError):
        resize_bilinear(GrayFrame(np.zeros((4, 4))), 0, 4)
