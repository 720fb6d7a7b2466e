"""Command-line entry point.

Subcommands: recall, patches, classify, sine, mackey, bench,
inspect-model. Defaults reproduce the published settings per task;
precedence is flag > config file (--config, JSON) > default. The full
effective configuration (seeds included) lands in every result file, so a
result is reproducible from its own output.

Exit codes: 0 success, 2 configuration error, 1 runtime error.
"""

from __future__ import annotations

import argparse
import importlib.resources
import json
import os
import sys
from contextlib import contextmanager

import numpy as np

from . import data_io, synthetic
from .results import ExperimentResult
from .tasks import (
    BenchConfig,
    ClassifyConfig,
    GeneratorConfig,
    PatchesConfig,
    RecallConfig,
    mackey_glass,
    run_bench,
    run_classify,
    run_generator,
    run_patches,
    run_recall,
    sine_series,
)
from .tasks.classify import fit_model as classify_fit_model
from .tasks.generator import fit_model as generator_fit_model, squash

PAPER_PATCH_PAIRS = "8000:4,16000:6,32000:8,64000:11"

DEFAULTS: dict[str, dict] = {
    "recall": {
        "engine": "intesn", "n": 300, "alphabet": 27, "max_delay": 15,
        "train_len": 2000, "washout": 500, "test_len": 2000,
        "kappa": 3, "rho": 0.94, "beta": 0.1, "lam": 0.0, "seeds": 10,
        "shuffled": False,
    },
    "patches": {
        "pairs": PAPER_PATCH_PAIRS, "seeds": 10, "images": None,
        "embed_images": True, "write_images": None,
    },
    "classify": {
        "engine": "intesn", "n": 800, "kappa": 7, "rho": 0.99, "beta": 0.25,
        "lam": 1.0, "levels": 21, "seeds": 10, "synthetic": "separable_two_class",
        "dataset": None, "train": None, "test": None, "delimiter": None,
        "label_column": 0, "data_seed": 0, "shuffled": False,
        "large_multiplier": None, "save_model": None,
    },
    "sine": {
        "engine": "intesn", "n": 1000, "kappa": 3, "rho": 0.8, "beta": 1.0,
        "lam": 0.0, "train_len": 3000, "washout": 1000, "horizon": 100,
        "q_lo": -0.5, "q_hi": 0.5, "q_step": 0.01, "quantize_esn": "none",
        "teacher_noise": 0.0, "seeds": 100, "save_model": None,
    },
    "mackey": {
        "engine": "intesn", "n": 1000, "kappa": 3, "rho": 0.8, "beta": 1.0,
        "lam": 0.0, "train_len": 3000, "washout": 1000, "horizon": 300,
        "q_lo": -1.0, "q_hi": 1.0, "q_step": 0.01, "quantize_esn": "none",
        "teacher_noise": 1e-4, "seeds": 100, "save_model": None,
        "tau": 17.0, "squash": True,
    },
    "bench": {"n": 300, "steps": 2000, "reps": 5, "kappa": 3, "rho": 0.94, "beta": 0.1, "alphabet": 27},
}

GENERATOR_ENGINES = ("intesn", "esn", "both")


class ConfigError(Exception):
    """Invalid flag value, flag combination, or config file."""


@contextmanager
def _config_phase():
    """Translate validation failures into config errors (exit code 2)."""
    try:
        yield
    except (ValueError, KeyError, json.JSONDecodeError) as e:
        raise ConfigError(str(e)) from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="intesn", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, engines=None):
        p.add_argument("--config", help="JSON file of defaults, overridden by explicit flags")
        p.add_argument("--seed", type=int, help="base seed (env RESERVOIR_SEED, then 0)")
        p.add_argument("--seeds", type=int, help="number of seeds, base..base+count-1")
        p.add_argument("--jobs", type=int, default=1, help="worker bound for per-seed parallelism")
        p.add_argument("--out", help="result file path (default <command>_result.json)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        if engines:
            p.add_argument("--engine", choices=engines)

    def num(p, *names, typ=float):
        for name in names:
            p.add_argument(f"--{name.replace('_', '-')}", dest=name, type=typ)

    p = sub.add_parser("recall", help="token sequence memory capacity vs delay")
    common(p, engines=("intesn", "intesn-large", "esn", "both"))
    num(p, "n", "alphabet", "max_delay", "train_len", "washout", "test_len", "kappa", typ=int)
    num(p, "rho", "beta", "lam")
    p.add_argument("--shuffled", action="store_const", const=True, help="label-shuffle control")

    p = sub.add_parser("patches", help="analog image storage and reconstruction")
    common(p)
    p.add_argument("--pairs", help=f"reservoir:clip pairs, default {PAPER_PATCH_PAIRS}")
    num(p, "n", "kappa", typ=int)
    p.add_argument("--images", nargs="+", help="PPM images (default: bundled patches)")
    p.add_argument("--write-images", dest="write_images", help="directory for reconstructed PPMs")
    p.add_argument("--no-embed-images", dest="embed_images", action="store_const", const=False)

    p = sub.add_parser("classify", help="time-series classification, endpoints mode")
    common(p, engines=("intesn", "intesn-large", "esn", "both"))
    num(p, "n", "kappa", "levels", "label_column", "data_seed", typ=int)
    num(p, "rho", "beta", "lam")
    p.add_argument("--synthetic", help=f"bundled dataset: {', '.join(synthetic_names())}")
    p.add_argument("--dataset", help="JSON manifest for a real dataset")
    p.add_argument("--train", help="delimited train file (with --test)")
    p.add_argument("--test", help="delimited test file")
    p.add_argument("--delimiter")
    p.add_argument("--shuffled", action="store_const", const=True, help="label-shuffle control")
    p.add_argument("--large-multiplier", dest="large_multiplier", type=int,
                   help="override the bit-budget neuron multiplier for intesn-large")
    p.add_argument("--save-model", dest="save_model", help="save the first seed's trained model here")

    for name, help_text in (
        ("sine", "generate a sinusoid from output feedback"),
        ("mackey", "predict the Mackey-Glass series"),
    ):
        p = sub.add_parser(name, help=help_text)
        common(p, engines=GENERATOR_ENGINES)
        num(p, "n", "kappa", "train_len", "washout", "horizon", typ=int)
        num(p, "rho", "beta", "lam", "q_lo", "q_hi", "q_step", "teacher_noise")
        p.add_argument("--quantize-esn", dest="quantize_esn", choices=("none", "train", "both"))
        p.add_argument("--save-model", dest="save_model", help="save the first seed's trained model here")
        if name == "mackey":
            num(p, "tau")
            p.add_argument("--no-squash", dest="squash", action="store_const", const=False,
                           help="skip the tanh(x-1) preprocessing")

    p = sub.add_parser("bench", help="update-step throughput of both engines")
    common(p)
    num(p, "n", "steps", "reps", "kappa", "alphabet", typ=int)
    num(p, "rho", "beta")

    p = sub.add_parser("inspect-model", help="print a saved model's summary")
    p.add_argument("path")
    return parser


def synthetic_names() -> list[str]:
    return ["separable_two_class", "noisy_two_class", *sorted(synthetic.STAND_IN_SHAPES)]


def effective_config(args: argparse.Namespace, command: str) -> dict:
    """defaults < config file < explicit flags."""
    merged = dict(DEFAULTS[command])
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            file_cfg = json.load(fh)
        unknown = sorted(set(file_cfg) - set(merged) - {"seed"})
        if unknown:
            raise ValueError(f"unknown config file keys: {unknown}")
        merged.update(file_cfg)
    for key in merged:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    base = args.seed if getattr(args, "seed", None) is not None else merged.get("seed")
    if base is None:
        base = int(os.environ.get("RESERVOIR_SEED", "0"))
    merged["seed"] = int(base)
    if "seeds" in merged:
        count = int(merged["seeds"])
        if count < 1:
            raise ValueError("seeds count must be >= 1")
        merged["seed_list"] = list(range(merged["seed"], merged["seed"] + count))
    return merged


def _warn_ignored_kappa(args, cfg) -> None:
    if cfg.get("engine") == "esn" and getattr(args, "kappa", None) is not None:
        print("warning: --kappa has no effect with --engine esn; ignored", file=sys.stderr)


def _engines(cfg, large_ok=True) -> list[str]:
    engine = cfg["engine"]
    if engine == "both":
        return ["esn", "intesn"]
    if engine == "intesn-large" and not large_ok:
        raise ValueError("intesn-large is not available for this task")
    return [engine]


def _write_and_summarize(result: ExperimentResult, args, command: str, summaries: list[str]) -> str:
    out = args.out or f"{command}_result.{args.format}"
    data_io.write_results(result, out, args.format)
    for line in summaries:
        print(line)
    print(f"wrote {out}")
    return out


def _bundled_patches() -> list:
    root = importlib.resources.files("intesn.data").joinpath("patches")
    paths = sorted(str(p) for p in root.iterdir() if p.name.endswith(".ppm"))
    return [data_io.load_ppm(p) for p in paths]


def cmd_recall(args) -> int:
    with _config_phase():
        cfg = effective_config(args, "recall")
        _warn_ignored_kappa(args, cfg)
        configs = [
            RecallConfig(
                engine=engine, n=cfg["n"], alphabet=cfg["alphabet"], max_delay=cfg["max_delay"],
                train_len=cfg["train_len"], washout=cfg["washout"], test_len=cfg["test_len"],
                kappa=cfg["kappa"], rho=cfg["rho"], beta=cfg["beta"], lam=cfg["lam"],
                seeds=cfg["seed_list"], shuffled_control=bool(cfg["shuffled"]),
            )
            for engine in _engines(cfg)
        ]
    runs = []
    summaries = []
    for rc in configs:
        result = run_recall(rc, jobs=args.jobs)
        run = result.runs[0]
        run.config["cli"] = cfg
        runs.extend(result.runs)
        acc = run.metrics["accuracy"]
        summaries.append(
            f"recall[{rc.engine}] acc@d0 {acc.mean()[0]:.3f}±{acc.std()[0]:.3f}  "
            f"info {run.aggregates['decoded_information_bits_mean']:.2f} bits"
        )
    _write_and_summarize(ExperimentResult("recall", runs), args, "recall", summaries)
    return 0


def _parse_pairs(cfg) -> list[tuple[int, int]]:
    if cfg.get("n") is not None or cfg.get("kappa") is not None:
        if cfg.get("n") is None or cfg.get("kappa") is None:
            raise ValueError("--n and --kappa must be given together")
        return [(int(cfg["n"]), int(cfg["kappa"]))]
    pairs = []
    for token in str(cfg["pairs"]).split(","):
        token = token.strip()
        try:
            n, kappa = token.split(":")
            pairs.append((int(n), int(kappa)))
        except ValueError:
            raise ValueError(f"bad reservoir:clip pair {token!r}") from None
    return pairs


def cmd_patches(args) -> int:
    with _config_phase():
        cfg = effective_config(args, "patches")
        pairs = _parse_pairs(cfg)
        configs = [
            PatchesConfig(n=n, kappa=kappa, seeds=cfg["seed_list"], keep_images=bool(cfg["embed_images"]))
            for n, kappa in pairs
        ]
    images = [data_io.load_ppm(p) for p in cfg["images"]] if cfg.get("images") else _bundled_patches()
    runs = []
    summaries = []
    for pc in configs:
        n, kappa = pc.n, pc.kappa
        result = run_patches(images, pc, jobs=args.jobs)
        run = result.runs[0]
        run.config["cli"] = cfg
        runs.extend(result.runs)
        summaries.append(f"patches[N={n} kappa={kappa}] mse@d0 {run.metrics['mse'].mean()[0]:.4f}")
    if cfg.get("write_images"):
        _dump_reconstructions(runs, cfg["write_images"])
    _write_and_summarize(ExperimentResult("patches", runs), args, "patches", summaries)
    return 0


def _dump_reconstructions(runs, directory: str) -> None:
    os.makedirs(directory, exist_ok=True)
    for run in runs:
        for entry in run.images or []:
            h, w, c = entry["height"], entry["width"], entry["channels"]
            for kind in ("truth", "reconstructed"):
                pixels = np.asarray(entry[kind], dtype=np.float64).reshape(h, w, c)
                patch = data_io.ImagePatch(width=w, height=h, channels=c, pixels=np.clip(pixels, 0, 1))
                name = f"{run.label.replace(' ', '_')}_d{entry['delay']}_{kind}.ppm"
                data_io.write_ppm(patch, os.path.join(directory, name))


def _load_classify_dataset(cfg):
    if cfg.get("dataset"):
        return data_io.load_manifest_dataset(cfg["dataset"])
    if cfg.get("train") or cfg.get("test"):
        if not (cfg.get("train") and cfg.get("test")):
            raise ValueError("--train and --test must be given together")
        schema = data_io.DatasetSchema(label_column=int(cfg["label_column"]), delimiter=cfg.get("delimiter"))
        return data_io.load_dataset_split(cfg["train"], cfg["test"], schema)
    name = cfg["synthetic"]
    if name == "separable_two_class":
        return synthetic.separable_two_class(seed=int(cfg["data_seed"]))
    if name == "noisy_two_class":
        return synthetic.noisy_two_class(seed=int(cfg["data_seed"]))
    return synthetic.stand_in(name, seed=int(cfg["data_seed"]))


def cmd_classify(args) -> int:
    with _config_phase():
        cfg = effective_config(args, "classify")
        _warn_ignored_kappa(args, cfg)
        if bool(cfg.get("train")) != bool(cfg.get("test")):
            raise ValueError("--train and --test must be given together")
        configs = [
            ClassifyConfig(
                engine=engine, n=cfg["n"], kappa=cfg["kappa"], rho=cfg["rho"], beta=cfg["beta"],
                lam=cfg["lam"], levels=cfg["levels"], seeds=cfg["seed_list"],
                large_multiplier_override=cfg.get("large_multiplier"),
                shuffled_control=bool(cfg["shuffled"]),
            )
            for engine in _engines(cfg)
        ]
    dataset = _load_classify_dataset(cfg)
    runs = []
    summaries = []
    for i, cc in enumerate(configs):
        result = run_classify(dataset, cc, jobs=args.jobs)
        run = result.runs[0]
        run.config["cli"] = cfg
        runs.extend(result.runs)
        summaries.append(
            f"classify[{cc.engine}/{dataset.name}] acc "
            f"{run.aggregates['accuracy_mean']:.3f}±{run.aggregates['accuracy_std']:.3f}"
        )
        if cfg.get("save_model") and i == 0:
            data_io.save_model(classify_fit_model(dataset, cc, cfg["seed_list"][0]), cfg["save_model"])
            summaries.append(f"saved model to {cfg['save_model']}")
    _write_and_summarize(ExperimentResult("classify", runs), args, "classify", summaries)
    return 0


def _generator_target(cfg: dict, command: str) -> np.ndarray:
    length = cfg["train_len"] + cfg["horizon"]
    if command == "sine":
        return sine_series(length)
    series = mackey_glass(length, tau=cfg["tau"])
    return squash(series) if cfg["squash"] else series


def cmd_generator(args, command: str) -> int:
    with _config_phase():
        cfg = effective_config(args, command)
        _warn_ignored_kappa(args, cfg)
        configs = [
            GeneratorConfig(
                engine=engine, n=cfg["n"], kappa=cfg["kappa"], rho=cfg["rho"], beta=cfg["beta"],
                lam=cfg["lam"], train_len=cfg["train_len"], washout=cfg["washout"],
                horizon=cfg["horizon"], q_lo=cfg["q_lo"], q_hi=cfg["q_hi"], q_step=cfg["q_step"],
                quantize_esn=cfg["quantize_esn"], teacher_noise=cfg["teacher_noise"],
                seeds=cfg["seed_list"],
            )
            for engine in _engines(cfg, large_ok=False)
        ]
    target = _generator_target(cfg, command)
    runs = []
    summaries = []
    for i, gc in enumerate(configs):
        result = run_generator(gc, target, name=command, jobs=args.jobs)
        run = result.runs[0]
        run.config["cli"] = cfg
        runs.extend(result.runs)
        err = "nrmse" if "nrmse_median" in run.aggregates else "rmse"
        summaries.append(
            f"{command}[{run.label}] {err} median {run.aggregates[f'{err}_median']:.4f} "
            f"over {cfg['horizon']} steps"
        )
        if cfg.get("save_model") and i == 0:
            data_io.save_model(generator_fit_model(gc, target, cfg["seed_list"][0], command), cfg["save_model"])
            summaries.append(f"saved model to {cfg['save_model']}")
    _write_and_summarize(ExperimentResult(command, runs), args, command, summaries)
    return 0


def cmd_bench(args) -> int:
    with _config_phase():
        cfg = effective_config(args, "bench")
        bc = BenchConfig(
            n=cfg["n"], steps=cfg["steps"], repetitions=cfg["reps"], alphabet=cfg["alphabet"],
            kappa=cfg["kappa"], rho=cfg["rho"], beta=cfg["beta"], seed=cfg["seed"],
        )
    result = run_bench(bc)
    run = result.runs[0]
    run.config["cli"] = cfg
    agg = run.aggregates
    _write_and_summarize(
        result, args, "bench",
        [
            f"bench[N={cfg['n']}] intesn {agg['intesn_steps_per_sec']:.0f} steps/s, "
            f"esn {agg['esn_steps_per_sec']:.0f} steps/s, speedup {agg['speedup']:.2f}x"
        ],
    )
    return 0


def cmd_inspect_model(args) -> int:
    model = data_io.load_model(args.path)
    print(f"engine: {model.engine}")
    print(f"format version: {model.version}")
    print(f"seed: {model.seed}")
    print(f"task: {model.extra.get('task', 'unknown')}")
    print(f"config: {json.dumps(model.config, sort_keys=True)}")
    for key, im in sorted(model.item_memories.items()):
        print(f"item memory {key}: {im.size} x {im.dim} ({im.kind})")
    if model.esn_weights is not None:
        w = model.esn_weights
        k = w.w_in.shape[1] if w.w_in is not None else 0
        l = w.w_back.shape[1] if w.w_back is not None else 0
        print(f"esn weights: n={w.w.shape[0]} k={k} l={l}")
    if model.state is not None:
        bound = f" (packed, bound {model.state_bound})" if model.state_bound else ""
        print(f"reservoir state: {len(model.state)} elements{bound}")
    for key, readout in sorted(model.readouts.items()):
        print(f"readout {key}: {readout.l} x {readout.n}, lambda={readout.lam}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "recall":
            return cmd_recall(args)
        if args.command == "patches":
            return cmd_patches(args)
        if args.command == "classify":
            return cmd_classify(args)
        if args.command in ("sine", "mackey"):
            return cmd_generator(args, args.command)
        if args.command == "bench":
            return cmd_bench(args)
        if args.command == "inspect-model":
            return cmd_inspect_model(args)
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # noqa: BLE001 - surface runtime failures as exit 1
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
