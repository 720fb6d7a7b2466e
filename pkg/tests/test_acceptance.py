"""Acceptance suite: one test per criterion, one printed line per criterion.

Run as `pytest tests/test_acceptance.py -v`. Each criterion prints its
PASS/FAIL line directly (bypassing capture) with the measured numbers, and
fails its test if the bound is missed.
"""

import sys
import time

import numpy as np
import pytest

from intesn import data_io, hd, synthetic
from intesn.readout import ridge_fit
from intesn.tasks import (
    BenchConfig,
    ClassifyConfig,
    GeneratorConfig,
    PatchesConfig,
    RecallConfig,
    decoded_information,
    mackey_glass,
    nrmse,
    run_bench,
    run_classify,
    run_generator,
    run_patches,
    run_recall,
    sine_series,
    spearman_rho,
)
from intesn.tasks.generator import squash

SEEDS_10 = list(range(10))
SEEDS_20 = list(range(20))


def check(name: str, ok: bool, detail: str = "") -> None:
    line = f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  [{detail}]"
    print(line, file=sys.__stdout__, flush=True)
    assert ok, f"{name}: {detail}"


def bundled_patches():
    import importlib.resources

    root = importlib.resources.files("intesn.data").joinpath("patches")
    paths = sorted(str(p) for p in root.iterdir() if p.name.endswith(".ppm"))
    return [data_io.load_ppm(p) for p in paths]


def test_hd_property_suite():
    """Permutation isometry, shift composition, bundle linearity, clipping
    idempotence: 1000 randomized trials each at N in {100, 1000, 10000}."""
    start = time.time()
    violations = 0
    for n in (100, 1000, 10000):
        rng = np.random.default_rng(n)
        for _ in range(1000):
            x = hd.random_bipolar(n, rng)
            y = hd.random_bipolar(n, rng)
            k = int(rng.integers(-2 * n, 2 * n))
            # permutation isometry
            if hd.dot_similarity(hd.cyclic_shift(x, k), hd.cyclic_shift(y, k)) != hd.dot_similarity(x, y):
                violations += 1
            # shift composition
            a, b = int(rng.integers(0, n)), int(rng.integers(0, n))
            composed = hd.cyclic_shift(hd.cyclic_shift(x, a), b)
            if not np.array_equal(composed.elements, hd.cyclic_shift(x, a + b).elements):
                violations += 1
            # bundle similarity linearity
            c = hd.random_bipolar(n, rng)
            if hd.dot_similarity(hd.bundle([x, y]), c) != hd.dot_similarity(x, c) + hd.dot_similarity(y, c):
                violations += 1
            # clipping idempotence
            kappa = int(rng.integers(1, 9))
            z = hd.HyperVector(rng.integers(-20, 21, size=n), hd.INTEGER)
            once = hd.clip(z, kappa)
            if not np.array_equal(hd.clip(once, kappa).elements, once.elements):
                violations += 1
    elapsed = time.time() - start
    check(
        "hd-property-suite",
        violations == 0 and elapsed < 30.0,
        f"violations={violations}, elapsed={elapsed:.1f}s (budget 30s)",
    )


def test_ridge_oracle():
    """200 random problems vs an independent normal-equations/pinv oracle."""
    rng = np.random.default_rng(7)
    worst = 0.0
    lams = [0.0, 0.1, 1.0]
    for i in range(200):
        t = int(rng.integers(5, 51))
        n = int(rng.integers(2, 11))
        l = int(rng.integers(1, 4))
        x = rng.normal(size=(t, n))
        y = rng.normal(size=(t, l))
        lam = lams[i % 3]
        ours = ridge_fit(x, y, lam=lam).w_out
        if lam == 0.0:
            ref = (np.linalg.pinv(x, rcond=1e-10) @ y).T
        else:
            xa = np.vstack([x, np.sqrt(lam) * np.eye(n)])
            ya = np.vstack([y, np.zeros((n, l))])
            ref = np.linalg.lstsq(xa, ya, rcond=None)[0].T
        rel = np.abs(ours - ref).max() / max(1.0, np.abs(ref).max())
        worst = max(worst, rel)
    check("ridge-oracle", worst < 1e-8, f"worst relative error {worst:.2e} (bound 1e-8)")


def test_recall_capacity_shape():
    """intESN N=300 capacity curve shape plus the N=100 chance tail."""
    start = time.time()
    curve = run_recall(RecallConfig(engine="intesn", n=300, seeds=SEEDS_10), jobs=2)
    mean300 = curve.runs[0].metrics["accuracy"].mean()
    rho = spearman_rho(np.arange(16.0), mean300)

    tail = run_recall(RecallConfig(engine="intesn", n=100, seeds=SEEDS_10), jobs=2)
    mean100 = tail.runs[0].metrics["accuracy"].mean()
    tail_dev = abs(mean100[15] - 1 / 27)
    elapsed = time.time() - start
    check(
        "recall-capacity-shape",
        mean300[0] >= 0.95 and rho <= -0.8 and tail_dev <= 0.08 and elapsed < 300,
        f"acc@d0={mean300[0]:.3f} (>=0.95), spearman={rho:.3f} (<=-0.8), "
        f"N=100 d15 dev={tail_dev:.3f} (<=0.08), elapsed={elapsed:.0f}s (<300s)",
    )


def test_footprint_matched_information():
    """Equal-memory intESN decodes at least 1.5x the information of same-budget base."""
    base = run_recall(RecallConfig(engine="intesn", n=100, seeds=SEEDS_10), jobs=2)
    large = run_recall(RecallConfig(engine="intesn-large", n=100, seeds=SEEDS_10), jobs=2)
    bits_base = base.runs[0].aggregates["decoded_information_bits_mean"]
    bits_large = large.runs[0].aggregates["decoded_information_bits_mean"]
    ratio = bits_large / bits_base
    check(
        "footprint-matched-information",
        ratio >= 1.5,
        f"{bits_large:.1f} bits vs {bits_base:.1f} bits, ratio {ratio:.2f} (>=1.5)",
    )


def test_analog_patches_trends():
    """Reconstruction improves with reservoir size and degrades with delay."""
    start = time.time()
    images = bundled_patches()
    pairs = [(8000, 4), (16000, 6), (32000, 8), (64000, 11)]
    curves = []
    for n, kappa in pairs:
        cfg = PatchesConfig(n=n, kappa=kappa, seeds=SEEDS_10, keep_images=False)
        curves.append(run_patches(images, cfg, jobs=2).runs[0].metrics["mse"].mean())
    at_zero = [c[0] for c in curves]
    n_trend = all(a > b for a, b in zip(at_zero, at_zero[1:]))
    largest = curves[-1]
    delay_trend = all(a < b for a, b in zip(largest, largest[1:]))
    elapsed = time.time() - start
    check(
        "analog-patches-trends",
        n_trend and delay_trend and elapsed < 600,
        f"mse@d0 by N {[round(v, 4) for v in at_zero]} strictly decreasing={n_trend}; "
        f"N=64000 by delay {[round(v, 4) for v in largest]} strictly increasing={delay_trend}; "
        f"elapsed={elapsed:.0f}s (<600s)",
    )


def test_classification_sanity():
    """Separable suite at 100%; per-seed label-shuffled control at chance."""
    separable = synthetic.separable_two_class(seed=0)
    control = synthetic.stand_in("swedish_leaf", seed=0)  # 15 classes
    results = {}
    for engine in ("intesn", "esn"):
        sep = run_classify(separable, ClassifyConfig(engine=engine, seeds=SEEDS_10), jobs=2)
        ctl = run_classify(
            control, ClassifyConfig(engine=engine, seeds=SEEDS_10, shuffled_control=True), jobs=2
        )
        results[engine] = (
            sep.runs[0].aggregates["accuracy_mean"],
            ctl.runs[0].aggregates["accuracy_mean"],
        )
    ok = all(sep == 1.0 and abs(ctl - 1 / 15) <= 0.05 for sep, ctl in results.values())
    detail = ", ".join(
        f"{e}: separable {sep:.3f} (=1.0), control {ctl:.3f} (chance 0.067 +-0.05)"
        for e, (sep, ctl) in results.items()
    )
    check("classification-sanity", ok, detail)


def dominant_bin(series: np.ndarray) -> int:
    spectrum = np.abs(np.fft.rfft(series, n=256))
    return int(np.argmax(spectrum[1:])) + 1


def test_sine_generator():
    """Float baseline tracks the sinusoid; integer engine stays bounded on
    the right frequency; quantization strictly hurts the float baseline."""
    target = sine_series(3100)

    esn = run_generator(GeneratorConfig(engine="esn", horizon=100, seeds=SEEDS_20), target, "sine", jobs=2)
    esn_median = esn.runs[0].aggregates["nrmse_median"]

    intesn = run_generator(
        GeneratorConfig(engine="intesn", horizon=100, seeds=SEEDS_20), target, "sine", jobs=2
    )
    preds = intesn.runs[0].metrics["prediction"]._array()
    truth = np.asarray(intesn.runs[0].metrics["truth"].per_seed[0])
    bounded = np.abs(preds).max() <= 0.6
    truth_bin = dominant_bin(truth)
    bins_match = all(dominant_bin(p) == truth_bin for p in preds)

    quantized = run_generator(
        GeneratorConfig(engine="esn", horizon=100, quantize_esn="both", seeds=SEEDS_20),
        target, "sine", jobs=2,
    )
    q_mean = quantized.runs[0].aggregates["nrmse_mean"]
    raw_mean = esn.runs[0].aggregates["nrmse_mean"]

    check(
        "sine-generator",
        esn_median < 0.05 and bounded and bins_match and q_mean > raw_mean,
        f"esn median nrmse {esn_median:.2e} (<0.05); intesn max|pred| {np.abs(preds).max():.3f} "
        f"(<=0.6), dominant bin {truth_bin} matched by all {len(preds)} seeds={bins_match}; "
        f"quantized mean {q_mean:.2e} > raw mean {raw_mean:.2e}",
    )


def test_mackey_glass():
    """84-step accuracy for the float baseline; smooth bounded drift for the
    integer engine over 300 free-run steps."""
    series = squash(mackey_glass(3400))

    esn = run_generator(
        GeneratorConfig(engine="esn", horizon=300, q_lo=-1.0, q_hi=1.0,
                        teacher_noise=1e-4, seeds=SEEDS_20),
        series, "mackey", jobs=2,
    )
    truth = np.asarray(esn.runs[0].metrics["truth"].per_seed[0])
    esn_preds = esn.runs[0].metrics["prediction"]._array()
    n84 = float(np.median([nrmse(p[:84], truth[:84]) for p in esn_preds]))

    intesn = run_generator(
        GeneratorConfig(engine="intesn", horizon=300, q_lo=-1.0, q_hi=1.0, seeds=SEEDS_10),
        series, "mackey", jobs=2,
    )
    preds = intesn.runs[0].metrics["prediction"]._array()
    span = truth.max() - truth.min()
    center = (truth.max() + truth.min()) / 2
    bounded = np.abs(preds - center).max() <= 1.5 * span  # window 3x the truth's range
    max_jump = np.abs(np.diff(preds, axis=1)).max()
    smooth = max_jump <= 5 * truth.std()

    check(
        "mackey-glass",
        n84 < 0.3 and bounded and smooth,
        f"esn 84-step median nrmse {n84:.4f} (<0.3); intesn bounded within 3x range={bounded}, "
        f"max step jump {max_jump:.3f} vs 5*std {5 * truth.std():.3f}",
    )


def test_bench_throughput():
    """Integer engine at least 1.5x the float baseline's update rate at N=300."""
    result = run_bench(BenchConfig(n=300, steps=2000, repetitions=5))
    agg = result.runs[0].aggregates
    check(
        "bench-throughput",
        agg["speedup"] >= 1.5,
        f"intesn {agg['intesn_steps_per_sec']:.0f}/s vs esn {agg['esn_steps_per_sec']:.0f}/s, "
        f"speedup {agg['speedup']:.2f}x (>=1.5x)",
    )


@pytest.mark.parametrize("kappa", [3, 7, 11])
def test_bit_budget(kappa):
    """Packed state is exactly N * ceil(log2(2k+1)) bits and lossless."""
    n = 1200
    bits = {3: 3, 7: 4, 11: 5}[kappa]
    rng = np.random.default_rng(kappa)
    state = rng.integers(-kappa, kappa + 1, size=n).astype(np.int32)
    packed = hd.pack_integers(state, kappa)
    exact_bits = hd.packed_size_bits(n, kappa) == n * bits
    exact_bytes = len(packed) == -(-n * bits // 8)
    lossless = np.array_equal(hd.unpack_integers(packed, n, kappa), state)
    check(
        f"bit-budget-kappa{kappa}",
        exact_bits and exact_bytes and lossless,
        f"{n * bits} bits, {len(packed)} bytes, lossless={lossless}",
    )
