"""End-to-end acceptance checks, one test per numbered criterion.

Each test prints a single [PASS]/[FAIL] line with its measured numbers
(visible with -s, or in the captured output of a failing run). The
numeric tolerances here are the committed contract; they must not be
loosened.
"""

import math
import time
import warnings

import numpy as np
import pytest

from cftrack.features import FeatureMap, cosine_window
from cftrack.filter_bank import (
    peak_locate,
    respond,
    respond_batched,
    train_init,
    update,
)
from cftrack.harness import SynthSpec, evaluate, run_tracker, synth_sequence
from cftrack.pipeline_emu import emulate_frame, make_batches, schedule_fft_core
from cftrack.scale_search import pyramid
from cftrack.spectral import fft2d, gaussian_label


def _report(num, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {num:02d} {detail}")
    return ok


def direct_dft2d(plane):
    """Direct evaluation of the defining quadruple sum (no factorization)."""
    p = np.asarray(plane, dtype=np.complex128)
    rows, cols = p.shape
    er = np.exp(-2j * np.pi * np.outer(np.arange(rows), np.arange(rows)) / rows)
    ec = np.exp(-2j * np.pi * np.outer(np.arange(cols), np.arange(cols)) / cols)
    return np.einsum("kn,lm,nm->kl", er, ec, p, optimize=False)


LABEL = gaussian_label(32, 32, 2.0)


def _windowed_sample(rng, channels=1):
    return FeatureMap(rng.random((channels, 32, 32)) * cosine_window(32, 32)[None])


@pytest.fixture(scope="module")
def translation_run():
    t0 = time.perf_counter()
    seq = synth_sequence(SynthSpec(size=(320, 240), frames=200, motion=(2.0, 1.0)))
    results, fps = run_tracker(seq, seq.truth[0])
    wall = time.perf_counter() - t0
    return seq, results, fps, wall


@pytest.fixture(scope="module")
def zoom_run():
    seq = synth_sequence(
        SynthSpec(size=(480, 360), frames=60, zoom=1.005, target_side=200, texture_seed=3)
    )
    results, _ = run_tracker(seq, seq.truth[0])
    return seq, results


def test_a01_fft2d_matches_direct_dft():
    t0 = time.perf_counter()
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(100):
        p = rng.standard_normal((8, 8))
        worst = max(worst, float(np.max(np.abs(fft2d(p) - direct_dft2d(p)))))
    for _ in range(20):
        p = rng.standard_normal((32, 32))
        worst = max(worst, float(np.max(np.abs(fft2d(p) - direct_dft2d(p)))))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed < 10.0
    assert _report(
        1, ok, f"fft2d vs direct DFT: max_err={worst:.2e} (<=1e-10), {elapsed:.1f}s (<10s)"
    )


def test_a02_update_endpoint_identities():
    rng = np.random.default_rng(102)
    worst_mean = 0.0
    exact = True
    for _ in range(5):
        model = train_init(_windowed_sample(rng, 33), LABEL, lam=0.01)
        f_t = _windowed_sample(rng, 33)
        noop = update(model, f_t, LABEL, eta=0.0)
        exact &= np.array_equal(noop.numerators, model.numerators)
        exact &= np.array_equal(noop.denominator, model.denominator)
        swap = update(model, f_t, LABEL, eta=1.0)
        fresh = train_init(f_t, LABEL, lam=0.01)
        exact &= np.array_equal(swap.numerators, fresh.numerators)
        exact &= np.array_equal(swap.denominator, fresh.denominator)
        half = update(model, f_t, LABEL, eta=0.5)
        worst_mean = max(
            worst_mean,
            float(np.max(np.abs(half.numerators - (model.numerators + fresh.numerators) / 2.0))),
            float(np.max(np.abs(half.denominator - (model.denominator + fresh.denominator) / 2.0))),
        )
    ok = exact and worst_mean <= 1e-15
    assert _report(
        2,
        ok,
        f"update identities: endpoints bit-exact={exact}, eta=0.5 max dev "
        f"{worst_mean:.2e} (<=1e-15)",
    )


def test_a03_self_response_recovers_label():
    rng = np.random.default_rng(103)
    peaks_ok = 0
    worst = 0.0
    for _ in range(50):
        f = _windowed_sample(rng)
        y = respond(train_init(f, LABEL, lam=1e-8), f)
        dy, dx, _ = peak_locate(y)
        peaks_ok += (dy, dx) == (0, 0)
        worst = max(worst, float(np.max(np.abs(y.values - LABEL.plane))))
    ok = peaks_ok == 50 and worst <= 1e-3
    assert _report(
        3, ok, f"self-response: peaks at origin {peaks_ok}/50, max |y-g|={worst:.2e} (<=1e-3)"
    )


def test_a04_shift_decoding_is_exact():
    rng = np.random.default_rng(104)
    f = _windowed_sample(rng)
    model = train_init(f, LABEL, lam=1e-8)
    hits = 0
    for dy in range(-5, 6):
        for dx in range(-5, 6):
            z = FeatureMap(np.roll(f.planes, (dy, dx), axis=(1, 2)))
            got = peak_locate(respond(model, z))[:2]
            hits += got == (dy, dx)
    ok = hits == 121
    assert _report(4, ok, f"shift decoding: {hits}/121 exact over (-5..5)^2")


def test_a05_batched_response_equals_plain():
    rng = np.random.default_rng(105)
    sched = make_batches(33, 8, 5)
    sizes = [len(b) for b in sched.batches]
    worst = 0.0
    for _ in range(50):
        model = train_init(_windowed_sample(rng, 33), LABEL, lam=0.01)
        z = _windowed_sample(rng, 33)
        plain = respond(model, z)
        batched = respond_batched(model, z, sched)
        worst = max(worst, float(np.max(np.abs(batched.values - plain.values))))
    ok = sizes == [5, 4, 4, 4, 4, 4, 4, 4] and worst <= 1e-10
    assert _report(
        5, ok, f"batched response: sizes={sizes}, max dev {worst:.2e} (<=1e-10, 50 pairs)"
    )


def test_a06_scale_pyramid_factors():
    pyr = pyramid(100, 100, 1.005, 7, 2)
    worst = max(abs(pyr.factors[n + 3] - 1.005**n) for n in range(-3, 4))
    middle_exact = pyr.factors[3] == 1.0
    ok = worst <= 1e-12 and middle_exact
    assert _report(
        6, ok, f"pyramid factors: max dev {worst:.2e} (<=1e-12), middle==1.0 is {middle_exact}"
    )


def test_a07_synthetic_translation(translation_run):
    seq, results, fps, wall = translation_run
    metrics = evaluate(results, seq.truth, fps=fps)
    ok = (
        metrics.mean_center_error <= 3.0
        and metrics.precision_at_20 == 1.0
        and wall < 60.0
    )
    assert _report(
        7,
        ok,
        f"translation 200x(2,1)px: mean_err={metrics.mean_center_error:.2f}px (<=3), "
        f"precision_at_20={metrics.precision_at_20:.3f} (==1.0), {wall:.1f}s (<60s)",
    )


def test_a08_synthetic_zoom(translation_run, zoom_run):
    seq, results = zoom_run
    cumulative = results[-1].box.w / results[0].box.w
    target = 1.005**60
    cum_ok = abs(cumulative / target - 1.0) <= 0.05
    step = math.log(1.005)
    violations = 0
    for r in results[1:]:
        if r.frame_index <= 5:
            continue
        if abs(math.log(r.scale_factor) - step) > step + 1e-12:
            violations += 1
    ok = cum_ok and violations == 0
    assert _report(
        8,
        ok,
        f"zoom 1.005/frame: cumulative={cumulative:.4f} vs {target:.4f} "
        f"(within 5%: {cum_ok}), off-by->1-step picks after frame 5: {violations}",
    )


def test_a09_emulator_consistency():
    counts_ok = all(
        len(schedule_fft_core(d, make_batches(d, 8, 5))) == 64 * d + 64
        for d in (1, 32, 33)
    )
    report = emulate_frame()
    fps_exact = report.fps_estimate == report.clock_hz / report.cycles_per_frame
    ok = counts_ok and fps_exact and report.fps_estimate >= 153.0
    assert _report(
        9,
        ok,
        f"emulator: jobs==64d+64 for d in (1,32,33): {counts_ok}, "
        f"fps==clock/cycles: {fps_exact}, modeled {report.fps_estimate:.3f} fps (>=153)",
    )


def test_a10_software_throughput_advisory(translation_run):
    _, results, fps, _ = translation_run
    meets = fps >= 20.0
    # advisory bound: record the measurement, warn instead of failing when
    # the host is slower than a commodity desktop
    if not meets:
        warnings.warn(f"tracking throughput {fps:.1f} fps below the 20 fps advisory bound")
    _report(
        10,
        True,
        f"software throughput: {fps:.1f} fps measured, 20 fps advisory "
        f"{'met' if meets else 'MISSED (logged, not gating)'}",
    )
    assert len(results) == 200 and fps > 0


def test_a11_batch_partition_property():
    rng = np.random.default_rng(111)
    checked = 0
    for _ in range(1000):
        num_batches = int(rng.integers(1, 33))
        lanes = int(rng.integers(1, 17))
        d = int(rng.integers(1, num_batches * lanes + 1))
        sched = make_batches(d, num_batches, lanes)
        flat = [ch for batch in sched.batches for ch in batch]
        assert sorted(flat) == list(range(d))
        assert all(1 <= len(b) <= lanes for b in sched.batches)
        checked += 1
    infeasible = 0
    for _ in range(50):
        num_batches = int(rng.integers(1, 9))
        lanes = int(rng.integers(1, 9))
        d = num_batches * lanes + int(rng.integers(1, 10))
        with pytest.raises(ValueError):
            make_batches(d, num_batches, lanes)
        infeasible += 1
    ok = checked == 1000 and infeasible == 50
    assert _report(
        11, ok, f"batch partitions: {checked}/1000 feasible triples valid, "
        f"{infeasible}/50 infeasible triples rejected"
    )
