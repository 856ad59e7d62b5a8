"""Multi-channel discriminative correlation filter.

The filter is kept in numerator/denominator form: one complex numerator
plane per feature channel and a single shared real denominator. Training
and response run entirely in the frequency domain; the response map comes
back through the inverse transform. A batched response path accumulates
the numerator in an explicit batch order so a grouped hardware evaluation
can be checked against the plain one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .features import FeatureMap
from .spectral import GaussianLabel, fft2d, ifft2d


@dataclass
class FilterModel:
    """Learned filter: per-channel numerators A, shared denominator B."""

    numerators: np.ndarray  # (channels, rows, cols) complex
    denominator: np.ndarray  # (rows, cols) real, >= 0
    lam: float

    def __post_init__(self):
        self.numerators = np.asarray(self.numerators, dtype=np.complex128)
        self.denominator = np.asarray(self.denominator, dtype=np.float64)
        if self.numerators.ndim != 3 or self.numerators.shape[0] < 1:
            raise ValueError(f"numerators must be (channels, rows, cols), got {self.numerators.shape}")
        if self.denominator.shape != self.numerators.shape[1:]:
            raise ValueError("denominator shape does not match the numerator planes")
        if np.any(self.denominator < 0.0):
            raise ValueError("denominator must be nonnegative (sum of squared magnitudes)")
        if not (np.isfinite(self.lam) and self.lam >= 0.0):
            raise ValueError(f"lambda must be a finite value >= 0, got {self.lam}")

    @property
    def channels(self) -> int:
        return self.numerators.shape[0]


@dataclass
class ResponseMap:
    """Real-valued correlation response over the template grid."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValueError(f"response must be a 2-D plane, got shape {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("response values must be finite")

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]


def _spectra(f: FeatureMap) -> np.ndarray:
    return fft2d(f.planes)


def train_init(f: FeatureMap, label: GaussianLabel, lam: float) -> FilterModel:
    """Closed-form filter from one sample: A = conj(G)F, B = sum |F|^2."""
    if f.channels < 1:
        raise ValueError("cannot train a filter on zero feature channels")
    spectra = _spectra(f)
    numerators = np.conj(label.spectrum)[None, :, :] * spectra
    # conj(F)F is |F|^2; the imaginary part is identically zero
    denominator = np.sum(spectra.real**2 + spectra.imag**2, axis=0)
    return FilterModel(numerators=numerators, denominator=denominator, lam=lam)


def update(model: FilterModel, f_t: FeatureMap, label: GaussianLabel, eta: float) -> FilterModel:
    """Exponential moving-average update of numerators and denominator."""
    if not (0.0 <= eta <= 1.0):
        raise ValueError(f"learning rate must lie in [0, 1], got {eta}")
    if f_t.channels != model.channels:
        raise ValueError(f"sample has {f_t.channels} channels, model has {model.channels}")
    # the endpoints are exact by contract, so they bypass the blend arithmetic
    if eta == 0.0:
        return FilterModel(model.numerators.copy(), model.denominator.copy(), model.lam)
    fresh = train_init(f_t, label, model.lam)
    if eta == 1.0:
        return fresh
    return FilterModel(
        numerators=(1.0 - eta) * model.numerators + eta * fresh.numerators,
        denominator=(1.0 - eta) * model.denominator + eta * fresh.denominator,
        lam=model.lam,
    )


def _accumulate(model: FilterModel, spectra: np.ndarray, order) -> np.ndarray:
    """Sum conj(A_l) * Z_l one channel at a time in the given order."""
    num = np.zeros(model.denominator.shape, dtype=np.complex128)
    for l in order:
        num += np.conj(model.numerators[l]) * spectra[l]
    return num


def respond(model: FilterModel, z: FeatureMap) -> ResponseMap:
    """Correlation response of a sample against the model."""
    if z.channels != model.channels:
        raise ValueError(f"sample has {z.channels} channels, model has {model.channels}")
    spectra = _spectra(z)
    num = _accumulate(model, spectra, range(model.channels))
    y = ifft2d(num / (model.denominator + model.lam))
    return ResponseMap(values=y.real)


def respond_batched(model: FilterModel, z: FeatureMap, schedule) -> ResponseMap:
    """Same response, numerator accumulated batch by batch.

    `schedule` is a BatchSchedule (or any object with a `batches` list of
    channel-index lists) that must partition the model's channel indices
    exactly. Channels within a batch are taken in ascending index order,
    so a single batch covering every channel reproduces respond bit for
    bit.
    """
    if z.channels != model.channels:
        raise ValueError(f"sample has {z.channels} channels, model has {model.channels}")
    batches = getattr(schedule, "batches", schedule)
    seen: set[int] = set()
    total = 0
    for batch in batches:
        for l in batch:
            if l in seen:
                raise ValueError(f"schedule covers channel {l} twice")
            seen.add(l)
        total += len(batch)
    if total != model.channels or seen != set(range(model.channels)):
        raise ValueError("schedule must partition the model's channel indices exactly")
    spectra = _spectra(z)
    # flat accumulation in schedule order, ascending within each batch
    num = np.zeros(model.denominator.shape, dtype=np.complex128)
    for batch in batches:
        for l in sorted(batch):
            num += np.conj(model.numerators[l]) * spectra[l]
    y = ifft2d(num / (model.denominator + model.lam))
    return ResponseMap(values=y.real)


def peak_locate(y: ResponseMap) -> tuple[int, int, float]:
    """Argmax of the response decoded as a signed cell displacement.

    Indices above rows/2 wrap to negative displacements; ties go to the
    smallest row-major index (the first occurrence argmax finds).
    """
    values = y.values
    rows, cols = values.shape
    flat = int(np.argmax(values))
    i, j = divmod(flat, cols)
    dy = i - rows if i > rows // 2 else i
    dx = j - cols if j > cols // 2 else j
    return dy, dx, float(values[i, j])
