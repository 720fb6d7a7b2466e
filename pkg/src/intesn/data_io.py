"""Dataset ingestion, image loading, model persistence, results serialization.

File formats:
  - delimited time-series files (label-first rows, one series per line),
    univariate directly or multivariate through a JSON manifest;
  - binary portable pixmaps (P5 grayscale, P6 RGB) for image patches;
  - a versioned binary model container with bit-packed integer codebooks;
  - experiment results as canonical JSON or long-format CSV.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import hd
from .readout import ReadoutMatrix
from .reservoir import EsnWeights
from .results import ExperimentResult

MODEL_MAGIC = b"IESN"
MODEL_VERSION = 1


# ---------------------------------------------------------------------------
# time-series datasets


@dataclass
class DatasetSchema:
    """How to parse a delimited time-series file."""

    label_column: int = 0
    delimiter: str | None = None  # None: sniff comma, tab, then whitespace
    variable_count: int = 1
    n_classes: int | None = None  # declared class count, validated when set


@dataclass
class TimeSeriesDataset:
    """Train/test series with dense integer labels.

    Each series is a (T x variables) float array; T may vary per series.
    """

    name: str
    variables: int
    classes: int
    train: list[tuple[np.ndarray, int]]
    test: list[tuple[np.ndarray, int]] = field(default_factory=list)
    label_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        for split_name, split in (("train", self.train), ("test", self.test)):
            for i, (series, label) in enumerate(split):
                if series.ndim != 2 or series.shape[1] != self.variables:
                    raise ValueError(
                        f"{split_name} series {i} has shape {series.shape}, "
                        f"expected (T, {self.variables})"
                    )
                if not 0 <= label < self.classes:
                    raise ValueError(f"{split_name} series {i} label {label} outside [0, {self.classes})")

    def value_range(self) -> tuple[float, float]:
        lo = min(float(s.min()) for s, _ in self.train)
        hi = max(float(s.max()) for s, _ in self.train)
        return lo, hi


def _sniff_delimiter(line: str) -> str | None:
    if "," in line:
        return ","
    if "\t" in line:
        return "\t"
    return None  # any whitespace


def _parse_delimited_rows(path: str, schema: DatasetSchema) -> list[tuple[str, np.ndarray]]:
    """Rows of (raw label, value vector); malformed numerics name the row."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        delimiter = schema.delimiter
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if delimiter is None:
                delimiter = _sniff_delimiter(line)
            tokens = line.split(delimiter) if delimiter else line.split()
            tokens = [t for t in tokens if t != ""]
            if len(tokens) < 2:
                raise ValueError(f"{path}: row {lineno} has fewer than 2 fields")
            if not 0 <= schema.label_column < len(tokens):
                raise ValueError(f"{path}: row {lineno} has no label column {schema.label_column}")
            label = tokens[schema.label_column]
            values = []
            for j, tok in enumerate(tokens):
                if j == schema.label_column:
                    continue
                try:
                    values.append(float(tok))
                except ValueError:
                    raise ValueError(f"{path}: row {lineno} field {j} is not numeric: {tok!r}") from None
            vec = np.asarray(values, dtype=np.float64)
            if not np.isfinite(vec).all():
                raise ValueError(f"{path}: row {lineno} contains non-finite values")
            rows.append((label, vec))
    if not rows:
        raise ValueError(f"{path}: empty dataset file")
    return rows


def _label_order(raw_labels: list[str]) -> list[str]:
    unique = sorted(set(raw_labels))
    try:
        return sorted(unique, key=float)
    except ValueError:
        return unique


def _label_ids(raw_labels: list[str], n_classes: int | None, source: str) -> tuple[list[str], dict[str, int]]:
    """Label names and raw->id map.

    Without a declared class count, sorted unique labels map densely onto
    [0, #C). With one, labels must already be integer ids in range.
    """
    if n_classes is None:
        order = _label_order(raw_labels)
        return order, {raw: i for i, raw in enumerate(order)}
    ids: dict[str, int] = {}
    for raw in sorted(set(raw_labels)):
        try:
            value = int(float(raw))
        except ValueError:
            raise ValueError(
                f"{source}: label {raw!r} is not an integer id (class count declared as {n_classes})"
            ) from None
        if not 0 <= value < n_classes:
            raise ValueError(f"{source}: label {raw!r} outside the declared range [0, {n_classes})")
        ids[raw] = value
    return [str(i) for i in range(n_classes)], ids


def load_delimited_dataset(path: str, schema: DatasetSchema | None = None, name: str | None = None) -> TimeSeriesDataset:
    """Load one univariate label-first delimited file into the train split."""
    schema = schema or DatasetSchema()
    rows = _parse_delimited_rows(path, schema)
    order, ids = _label_ids([label for label, _ in rows], schema.n_classes, path)
    train = [(vec.reshape(-1, 1), ids[label]) for label, vec in rows]
    return TimeSeriesDataset(
        name=name or os.path.basename(path),
        variables=1,
        classes=schema.n_classes or len(order),
        train=train,
        test=[],
        label_names=order,
    )


def load_dataset_split(train_path: str, test_path: str, schema: DatasetSchema | None = None, name: str | None = None) -> TimeSeriesDataset:
    """Univariate train/test pair with a shared label mapping."""
    schema = schema or DatasetSchema()
    train_rows = _parse_delimited_rows(train_path, schema)
    test_rows = _parse_delimited_rows(test_path, schema)
    order, ids = _label_ids(
        [label for label, _ in train_rows + test_rows], schema.n_classes, train_path
    )
    return TimeSeriesDataset(
        name=name or os.path.basename(train_path),
        variables=1,
        classes=schema.n_classes or len(order),
        train=[(vec.reshape(-1, 1), ids[label]) for label, vec in train_rows],
        test=[(vec.reshape(-1, 1), ids[label]) for label, vec in test_rows],
        label_names=order,
    )


def _combine_variables(per_var_rows: list[list[tuple[str, np.ndarray]]], source: str) -> list[tuple[str, np.ndarray]]:
    counts = {len(rows) for rows in per_var_rows}
    if len(counts) != 1:
        raise ValueError(f"{source}: per-variable files disagree on series count: {sorted(counts)}")
    combined = []
    for i in range(counts.pop()):
        label = per_var_rows[0][i][0]
        vecs = []
        for v, rows in enumerate(per_var_rows):
            if rows[i][0] != label:
                raise ValueError(f"{source}: series {i} label mismatch between variables 0 and {v}")
            vecs.append(rows[i][1])
        lengths = {len(v) for v in vecs}
        if len(lengths) != 1:
            raise ValueError(f"{source}: series {i} variables have unequal lengths {sorted(lengths)}")
        combined.append((label, np.stack(vecs, axis=1)))
    return combined


def _block_rows(rows: list[tuple[str, np.ndarray]], variables: int, source: str) -> list[tuple[str, np.ndarray]]:
    if len(rows) % variables != 0:
        raise ValueError(f"{source}: {len(rows)} rows is not a multiple of {variables} variables")
    grouped = []
    for i in range(0, len(rows), variables):
        block = rows[i : i + variables]
        label = block[0][0]
        for j, (lab, _) in enumerate(block):
            if lab != label:
                raise ValueError(f"{source}: block starting at row {i} has mixed labels")
        lengths = {len(vec) for _, vec in block}
        if len(lengths) != 1:
            raise ValueError(f"{source}: block starting at row {i} has unequal variable lengths")
        grouped.append((label, np.stack([vec for _, vec in block], axis=1)))
    return grouped


def load_manifest_dataset(manifest_path: str) -> TimeSeriesDataset:
    """Multivariate dataset described by a JSON manifest.

    layout "per-variable": each split lists one file per variable.
    layout "block": one file per split, every series spanning
    `variables` consecutive rows that share a label.
    layout "ucr": univariate, one file per split.
    """
    with open(manifest_path, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    for key in ("name", "variables", "layout", "train"):
        if key not in manifest:
            raise ValueError(f"{manifest_path}: manifest is missing key {key!r}")
    base = os.path.dirname(os.path.abspath(manifest_path))
    schema = DatasetSchema(
        label_column=manifest.get("label_column", 0),
        delimiter=manifest.get("delimiter"),
        variable_count=manifest["variables"],
        n_classes=manifest.get("classes"),
    )
    layout = manifest["layout"]
    variables = int(manifest["variables"])

    def load_split(spec) -> list[tuple[str, np.ndarray]]:
        if spec is None:
            return []
        if layout == "per-variable":
            files = spec if isinstance(spec, list) else spec["files"]
            if len(files) != variables:
                raise ValueError(f"{manifest_path}: split lists {len(files)} files for {variables} variables")
            per_var = [_parse_delimited_rows(os.path.join(base, f), schema) for f in files]
            return _combine_variables(per_var, manifest_path)
        if layout == "block":
            path = spec if isinstance(spec, str) else spec["file"]
            rows = _parse_delimited_rows(os.path.join(base, path), schema)
            return _block_rows(rows, variables, manifest_path)
        if layout == "ucr":
            path = spec if isinstance(spec, str) else spec["file"]
            if variables != 1:
                raise ValueError(f"{manifest_path}: ucr layout is univariate")
            return [(label, vec.reshape(-1, 1)) for label, vec in _parse_delimited_rows(os.path.join(base, path), schema)]
        raise ValueError(f"{manifest_path}: unknown layout {layout!r}")

    train_rows = load_split(manifest["train"])
    test_rows = load_split(manifest.get("test"))
    order, ids = _label_ids(
        [label for label, _ in train_rows + test_rows], schema.n_classes, manifest_path
    )
    reshaped = [(arr if arr.ndim == 2 else arr.reshape(-1, 1), ids[lab]) for lab, arr in train_rows]
    test = [(arr if arr.ndim == 2 else arr.reshape(-1, 1), ids[lab]) for lab, arr in test_rows]
    return TimeSeriesDataset(
        name=manifest["name"],
        variables=variables,
        classes=schema.n_classes or len(order),
        train=reshaped,
        test=test,
        label_names=order,
    )


# ---------------------------------------------------------------------------
# portable pixmaps


@dataclass(frozen=True)
class ImagePatch:
    """Pixel grid in [0, 1]; pixels has shape (height, width, channels)."""

    width: int
    height: int
    channels: int
    pixels: np.ndarray

    def __post_init__(self):
        if self.channels not in (1, 3):
            raise ValueError(f"channels must be 1 or 3, got {self.channels}")
        p = np.asarray(self.pixels, dtype=np.float64)
        if p.shape != (self.height, self.width, self.channels):
            raise ValueError(f"pixel shape {p.shape} != ({self.height}, {self.width}, {self.channels})")
        if p.size and (p.min() < 0.0 or p.max() > 1.0):
            raise ValueError("pixel values must lie in [0, 1]")
        p.setflags(write=False)
        object.__setattr__(self, "pixels", p)

    def flat_values(self) -> np.ndarray:
        """Row-major pixel values, one per pixel-channel."""
        return self.pixels.reshape(-1)


def _read_ppm_token(buf: io.BufferedReader) -> bytes:
    token = b""
    while True:
        ch = buf.read(1)
        if ch == b"":
            raise ValueError("truncated header")
        if ch == b"#":
            while ch not in (b"\n", b""):
                ch = buf.read(1)
            continue
        if ch.isspace():
            if token:
                return token
            continue
        token += ch


def load_ppm(path: str) -> ImagePatch:
    """Binary P5 (grayscale) or P6 (RGB) portable pixmap, maxval <= 255."""
    with open(path, "rb") as fh:
        magic = fh.read(2)
        if magic not in (b"P5", b"P6"):
            raise ValueError(f"{path}: bad magic {magic!r}, expected P5 or P6")
        channels = 1 if magic == b"P5" else 3
        try:
            width = int(_read_ppm_token(fh))
            height = int(_read_ppm_token(fh))
            maxval = int(_read_ppm_token(fh))
        except ValueError as e:
            raise ValueError(f"{path}: malformed header ({e})") from None
        if width < 1 or height < 1:
            raise ValueError(f"{path}: invalid dimensions {width}x{height}")
        if not 0 < maxval <= 255:
            raise ValueError(f"{path}: unsupported maxval {maxval}")
        expected = width * height * channels
        payload = fh.read(expected)
        if len(payload) != expected:
            raise ValueError(f"{path}: truncated payload, expected {expected} bytes, got {len(payload)}")
    data = np.frombuffer(payload, dtype=np.uint8).astype(np.float64) / float(maxval)
    return ImagePatch(width=width, height=height, channels=channels, pixels=data.reshape(height, width, channels))


def write_ppm(patch: ImagePatch, path: str) -> None:
    magic = b"P5" if patch.channels == 1 else b"P6"
    data = np.clip(np.rint(patch.pixels * 255.0), 0, 255).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(magic + b"\n" + f"{patch.width} {patch.height}\n255\n".encode())
        fh.write(data.tobytes())


# ---------------------------------------------------------------------------
# model files


@dataclass
class ModelFile:
    """Everything needed to reproduce a trained network's predictions.

    state/state_bound carry the reservoir state for generator-style models;
    integer states are bit-packed at the clipping bound's width on disk.
    """

    engine: str
    config: dict
    seed: int
    item_memories: dict[str, hd.ItemMemory] = field(default_factory=dict)
    esn_weights: EsnWeights | None = None
    readouts: dict[str, ReadoutMatrix] = field(default_factory=dict)
    state: np.ndarray | None = None
    state_bound: int | None = None
    extra: dict = field(default_factory=dict)
    version: int = MODEL_VERSION


def _atomic_write(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_model(model: ModelFile, path: str) -> None:
    """Write the versioned binary container (atomic temp+rename)."""
    arrays: list[dict] = []
    payload = bytearray()

    def add_packed(name: str, matrix: np.ndarray, bound: int, kind: str) -> None:
        flat = np.asarray(matrix).reshape(-1)
        blob = hd.pack_integers(flat, bound)
        arrays.append(
            {
                "name": name,
                "kind": "packed",
                "vector_kind": kind,
                "bound": bound,
                "shape": list(matrix.shape),
                "offset": len(payload),
                "nbytes": len(blob),
            }
        )
        payload.extend(blob)

    def add_f64(name: str, matrix: np.ndarray) -> None:
        blob = np.ascontiguousarray(matrix, dtype=np.float64).tobytes()
        arrays.append(
            {"name": name, "kind": "f64", "shape": list(matrix.shape), "offset": len(payload), "nbytes": len(blob)}
        )
        payload.extend(blob)

    for key, im in sorted(model.item_memories.items()):
        add_packed(f"im/{key}", im.vectors, 1, im.kind)
    if model.state is not None:
        if model.state_bound is not None:
            add_packed("state", np.asarray(model.state).reshape(1, -1), model.state_bound, hd.INTEGER)
        else:
            add_f64("state", np.asarray(model.state, dtype=np.float64).reshape(1, -1))
    if model.esn_weights is not None:
        add_f64("esn/w", model.esn_weights.w)
        if model.esn_weights.w_in is not None:
            add_f64("esn/w_in", model.esn_weights.w_in)
        if model.esn_weights.w_back is not None:
            add_f64("esn/w_back", model.esn_weights.w_back)
    for key, readout in sorted(model.readouts.items()):
        add_f64(f"readout/{key}", readout.w_out)
        arrays[-1]["lam"] = readout.lam

    header = json.dumps(
        {
            "engine": model.engine,
            "config": model.config,
            "seed": model.seed,
            "extra": model.extra,
            "arrays": arrays,
        },
        sort_keys=True,
    ).encode("utf-8")
    blob = bytearray()
    blob.extend(MODEL_MAGIC)
    blob.append(MODEL_VERSION)
    blob.extend(len(header).to_bytes(4, "little"))
    blob.extend(header)
    blob.extend(payload)
    _atomic_write(path, bytes(blob))


def load_model(path: str) -> ModelFile:
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != MODEL_MAGIC:
        raise ValueError(f"{path}: not a model file (bad magic {blob[:4]!r})")
    version = blob[4]
    if version != MODEL_VERSION:
        raise ValueError(f"{path}: model format version {version} != supported {MODEL_VERSION}")
    header_len = int.from_bytes(blob[5:9], "little")
    header = json.loads(blob[9 : 9 + header_len].decode("utf-8"))
    payload = blob[9 + header_len :]

    model = ModelFile(
        engine=header["engine"],
        config=header["config"],
        seed=header["seed"],
        extra=header.get("extra", {}),
        version=version,
    )
    esn_parts: dict[str, np.ndarray] = {}
    for entry in header["arrays"]:
        raw = payload[entry["offset"] : entry["offset"] + entry["nbytes"]]
        if len(raw) != entry["nbytes"]:
            raise ValueError(f"{path}: truncated payload for array {entry['name']!r}")
        shape = tuple(entry["shape"])
        if entry["kind"] == "packed":
            flat = hd.unpack_integers(raw, int(np.prod(shape)), entry["bound"])
            name = entry["name"]
            if name.startswith("im/"):
                model.item_memories[name[3:]] = hd.ItemMemory(flat.reshape(shape).astype(np.int8), entry["vector_kind"])
            elif name == "state":
                model.state = flat.reshape(-1)
                model.state_bound = entry["bound"]
            else:
                raise ValueError(f"{path}: unexpected packed array {name!r}")
        else:
            matrix = np.frombuffer(raw, dtype=np.float64).reshape(shape)
            name = entry["name"]
            if name.startswith("readout/"):
                model.readouts[name[8:]] = ReadoutMatrix(matrix.copy(), lam=entry.get("lam", 0.0))
            elif name.startswith("esn/"):
                esn_parts[name[4:]] = matrix.copy()
            elif name == "state":
                model.state = matrix.reshape(-1).copy()
            else:
                raise ValueError(f"{path}: unexpected array {name!r}")
    if esn_parts:
        model.esn_weights = EsnWeights(
            w=esn_parts["w"], w_in=esn_parts.get("w_in"), w_back=esn_parts.get("w_back")
        )
    return model


# ---------------------------------------------------------------------------
# results


def results_to_json(result: ExperimentResult) -> str:
    """Canonical JSON: sorted keys, 2-space indent, trailing newline."""
    return json.dumps(result.to_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_results(result: ExperimentResult, path: str, format: str = "json") -> None:
    """Serialize a result; format is "json" or "csv"."""
    if format == "json":
        _atomic_write(path, results_to_json(result).encode("utf-8"))
    elif format == "csv":
        _atomic_write(path, _results_to_csv(result).encode("utf-8"))
    else:
        raise ValueError(f"unknown results format {format!r}")


def read_results(path: str) -> ExperimentResult:
    with open(path, "r", encoding="utf-8") as fh:
        return ExperimentResult.from_dict(json.load(fh))


def _results_to_csv(result: ExperimentResult) -> str:
    result.validate()
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["experiment", "seed", "key", "index", "value"])
    multi = len(result.runs) > 1
    for run in result.runs:
        prefix = f"{run.label}." if multi else ""
        for name in sorted(run.metrics):
            series = run.metrics[name]
            arr = series._array()
            for si, seed in enumerate(run.seeds):
                if series.index is None:
                    writer.writerow([result.experiment, seed, prefix + name, "", repr(float(arr[si]))])
                else:
                    for ii, idx in enumerate(series.index):
                        writer.writerow([result.experiment, seed, prefix + name, idx, repr(float(arr[si, ii]))])
        for name in sorted(run.aggregates):
            writer.writerow([result.experiment, "", prefix + name, "", repr(float(run.aggregates[name]))])
    return buf.getvalue()
