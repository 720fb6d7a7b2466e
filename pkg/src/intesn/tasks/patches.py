"""Analog-value storage: images encoded by sparsity, stored sequentially.

Every pixel owns a random bipolar base vector; a pixel's value sets the
fraction of surviving (non-zero) elements. An image is the bundle of its
sparsified pixel vectors, absorbed into the reservoir one image per step.
Decoding correlates the state with each pixel's base vector shifted by the
image's age.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict

import numpy as np

from .. import hd
from ..data_io import ImagePatch
from ..reservoir import IntEsn, IntEsnConfig
from ..results import ExperimentResult, MetricSeries, RunResult
from .metrics import seed_map

MAX_PIXELS = 4096  # configured pixel budget per image


@dataclass
class PatchesConfig:
    n: int = 64000
    kappa: int = 11
    seeds: list[int] = field(default_factory=lambda: list(range(10)))
    keep_images: bool = True  # include first-seed reconstructions in the result

    def __post_init__(self):
        if self.n < 1 or self.kappa < 1:
            raise ValueError("invalid reservoir size or clipping threshold")
        if not self.seeds:
            raise ValueError("need at least one seed")


def encode_image(values: np.ndarray, bases: hd.ItemMemory, rng) -> np.ndarray:
    """Bundle of per-pixel sparsified base vectors (integer valued)."""
    total = np.zeros(bases.dim, dtype=np.int32)
    for i, value in enumerate(values):
        base = bases.vector(i)
        total += hd.sparsify(base, float(value), rng).elements
    return total


def decode_image(state: np.ndarray, bases: hd.ItemMemory, delay: int) -> np.ndarray:
    """Per-pixel estimates dot(state, shift(base, delay)) / n."""
    rolled = np.roll(bases.vectors, delay, axis=1)
    return (rolled.astype(np.float64) @ state.astype(np.float64)) / bases.dim


def _run_seed(images: list[ImagePatch], cfg: PatchesConfig, seed: int):
    """MSE per delay averaged over all cyclic storage orders.

    Storing the images in every rotation lets each image sit at each delay
    once, so the reported delay profile is not confounded by per-image
    difficulty. Reconstructions are kept from the unrotated order.
    """
    values = [img.flat_values() for img in images]
    pixel_count = len(values[0])
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    bases = hd.random_item_memory(pixel_count, cfg.n, rng)
    encoded = [encode_image(vals, bases, rng) for vals in values]

    count = len(images)
    errors = np.zeros(count)
    estimates = None
    for rotation in range(count):
        order = [(rotation + j) % count for j in range(count)]
        engine = IntEsn(IntEsnConfig(n=cfg.n, kappa=cfg.kappa, input_memory=bases))
        for j in order:
            engine.absorb(encoded[j])
        state = engine.state
        rotation_estimates = []
        for delay in range(count):
            stored = order[count - 1 - delay]
            est = decode_image(state, bases, delay)
            errors[delay] += float(np.mean((est - values[stored]) ** 2)) / count
            rotation_estimates.append(est)
        if rotation == 0:
            estimates = rotation_estimates
    return errors, estimates


def run_patches(images: list[ImagePatch], cfg: PatchesConfig, jobs: int = 1) -> ExperimentResult:
    """Reconstruction error per delay; images[-1] is the most recent (delay 0)."""
    if not images:
        raise ValueError("need at least one image")
    shapes = {(img.height, img.width, img.channels) for img in images}
    if len(shapes) != 1:
        raise ValueError(f"images disagree on shape: {sorted(shapes)}")
    pixel_count = images[0].pixels.size
    if pixel_count > MAX_PIXELS:
        raise ValueError(f"image has {pixel_count} pixel values, budget is {MAX_PIXELS}")

    delays = list(range(len(images)))
    outcomes = seed_map(lambda seed: _run_seed(images, cfg, seed), cfg.seeds, jobs)
    per_seed = [errors.tolist() for errors, _ in outcomes]
    kept_estimates = outcomes[0][1]

    rendered = None
    if cfg.keep_images:
        h, w, c = images[0].height, images[0].width, images[0].channels
        rendered = []
        for delay in delays:
            truth_img = images[len(images) - 1 - delay]
            recon = np.clip(kept_estimates[delay], 0.0, 1.0).reshape(h, w, c)
            rendered.append(
                {
                    "delay": delay,
                    "width": w,
                    "height": h,
                    "channels": c,
                    "truth": truth_img.pixels.reshape(h, -1).tolist(),
                    "reconstructed": recon.reshape(h, -1).tolist(),
                }
            )

    run = RunResult(
        engine="intesn",
        label=f"N={cfg.n} kappa={cfg.kappa}",
        config={**asdict(cfg), "images": len(images)},
        seeds=list(cfg.seeds),
        metrics={"mse": MetricSeries(per_seed=per_seed, index=delays, index_name="delay")},
        aggregates={"mse_at_delay_0": float(np.mean([row[0] for row in per_seed]))},
        images=rendered,
    )
    return ExperimentResult(experiment="patches", runs=[run])
