"""Discrete Fourier transforms and Gaussian regression labels.

The 2-D transform is computed strictly as two 1-D passes: every row first,
then every column of the intermediate, mirroring a hardware structure that
streams rows through a single 1-D core and re-reads the stored result by
columns. Convention: un-normalized forward transform, 1/N per 1-D inverse
pass (so a 2-D inverse carries 1/(M*N)).

Spectra are plain complex128 arrays; planes are float64 arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def _bit_reversed(n: int) -> np.ndarray:
    idx = np.arange(n, dtype=np.intp)
    rev = np.zeros(n, dtype=np.intp)
    bits = n.bit_length() - 1
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    return rev


@lru_cache(maxsize=None)
def _twiddles(half: int, sign: float) -> np.ndarray:
    return np.exp(sign * 1j * np.pi * np.arange(half) / half)


def dft1d(x, inverse: bool = False) -> np.ndarray:
    """Radix-2 FFT along the last axis; the length must be a power of two.

    Forward: X(k) = sum_n x(n) exp(-2*pi*i*k*n/N). Inverse carries 1/N.
    Accepts any array shape (..., N); each vector along the last axis is
    transformed independently.
    """
    x = np.asarray(x)
    n = x.shape[-1]
    if n < 1 or (n & (n - 1)) != 0:
        raise ValueError(f"transform length must be a power of two, got {n}")
    y = np.ascontiguousarray(x[..., _bit_reversed(n)], dtype=np.complex128)
    sign = 1.0 if inverse else -1.0
    m = 1
    while m < n:
        tw = _twiddles(m, sign)
        z = y.reshape(y.shape[:-1] + (n // (2 * m), 2, m))
        odd = z[..., 1, :] * tw
        # the difference lands in the odd slot first so the untouched even
        # slot can then be updated in place
        np.subtract(z[..., 0, :], odd, out=z[..., 1, :])
        np.add(z[..., 0, :], odd, out=z[..., 0, :])
        m *= 2
    if inverse:
        y /= n
    return y


def fft2d(plane, inverse: bool = False) -> np.ndarray:
    """2-D DFT of the trailing two axes via the row-then-column two-pass form.

    Rows are transformed first; the intermediate is then transformed along
    columns. Leading axes are treated as a batch of independent planes.
    """
    a = np.asarray(plane)
    if a.ndim < 2:
        raise ValueError(f"expected a 2-D plane (or batch of planes), got ndim={a.ndim}")
    rows_done = dft1d(a, inverse=inverse)
    cols_done = dft1d(rows_done.swapaxes(-1, -2), inverse=inverse)
    return np.ascontiguousarray(cols_done.swapaxes(-1, -2))


def ifft2d(spectrum) -> np.ndarray:
    return fft2d(spectrum, inverse=True)


@dataclass
class GaussianLabel:
    """Desired filter response: a Gaussian bump with its peak at cell (0, 0).

    Distances are circular, so the bump wraps around the plane edges and a
    response peak at (0, 0) decodes as zero displacement.
    """

    sigma: float
    plane: np.ndarray
    spectrum: np.ndarray


def gaussian_label(rows: int = 32, cols: int = 32, sigma: float = 2.0) -> GaussianLabel:
    if sigma <= 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    i = np.arange(rows)
    j = np.arange(cols)
    di = np.minimum(i, rows - i)
    dj = np.minimum(j, cols - j)
    plane = np.exp(-(di[:, None] ** 2 + dj[None, :] ** 2) / (2.0 * sigma**2))
    return GaussianLabel(sigma=float(sigma), plane=plane, spectrum=fft2d(plane))


def pointwise(a: np.ndarray, b: np.ndarray, op: str) -> np.ndarray:
    """Elementwise spectrum arithmetic: 'mul', 'conj_mul' (conj(a)*b) or 'add'."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if op == "mul":
        return a * b
    if op == "conj_mul":
        return np.conj(a) * b
    if op == "add":
        return a + b
    raise ValueError(f"unknown pointwise op {op!r}")
