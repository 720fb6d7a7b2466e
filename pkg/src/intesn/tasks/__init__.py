"""Experiment drivers: sequence recall, analog patch storage, time-series
classification, and signal generation (sine, Mackey-Glass), plus the
engine throughput benchmark."""

from .bench import BenchConfig, run_bench
from .classify import ClassifyConfig, run_classify
from .generator import GeneratorConfig, mackey_glass, run_generator, sine_series
from .metrics import decoded_information, nrmse, spearman_rho
from .patches import PatchesConfig, run_patches
from .recall import RecallConfig, run_recall

__all__ = [
    "BenchConfig",
    "ClassifyConfig",
    "GeneratorConfig",
    "PatchesConfig",
    "RecallConfig",
    "decoded_information",
    "mackey_glass",
    "nrmse",
    "run_bench",
    "run_classify",
    "run_generator",
    "run_patches",
    "run_recall",
    "sine_series",
    "spearman_rho",
]
