"""Dataset ingestion, synthetic benchmark generation, and file emission.

Dataset files are UTF-8 line-delimited JSON: the first non-blank line is a
header object, every following non-blank line one molecule record. All
emitted numbers use 17-significant-digit decimal form so that write/read
round-trips are lossless, and objects are serialized with sorted keys and
compact separators so identical inputs yield byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .engine import CandidatePool, RunRecord, SuiteResult
from .fingerprints import CountFingerprint, minmax_kernel

__all__ = [
    "FORMAT_VERSION",
    "SUMMARY_FORMAT_VERSION",
    "DatasetError",
    "DatasetHeader",
    "load_dataset",
    "write_dataset",
    "generate_synthetic",
    "synthetic_anchors",
    "ROUND_LOG_FIXED_COLUMNS",
    "write_round_log",
    "read_round_log",
    "write_summary",
    "ACQUISITION_DISPLAY",
]

FORMAT_VERSION = "mobo-dataset/1"
SUMMARY_FORMAT_VERSION = "mobo-summary/1"

_HEADER_KEYS = {"format", "task", "n_records", "n_objectives", "objective_names"}
_RECORD_KEYS = {"id", "smiles", "fingerprint", "objectives"}

ROUND_LOG_FIXED_COLUMNS = ("round", "selected_id", "acq_score", "hv", "r2", "wall_ms")

ACQUISITION_DISPLAY = {"ehvi": "EHVI", "scalarized_ei": "Scalarized EI", "random": "Random"}


class DatasetError(ValueError):
    """Dataset parse or validation failure; the message carries file/line context."""


@dataclass(frozen=True)
class DatasetHeader:
    task: str
    objective_names: tuple[str, ...]
    n_records: int
    format_version: str = FORMAT_VERSION

    def __post_init__(self) -> None:
        object.__setattr__(self, "objective_names", tuple(self.objective_names))
        if self.n_objectives < 2:
            raise DatasetError(f"need at least 2 objectives, header declares {self.n_objectives}")
        if len(set(self.objective_names)) != self.n_objectives:
            raise DatasetError("objective names must be unique")
        if self.n_records < 0:
            raise DatasetError(f"negative record count {self.n_records}")
        if self.format_version != FORMAT_VERSION:
            raise DatasetError(
                f"unsupported format version {self.format_version!r}; expected {FORMAT_VERSION!r}"
            )

    @property
    def n_objectives(self) -> int:
        return len(self.objective_names)

    def to_json_dict(self) -> dict:
        return {
            "format": self.format_version,
            "task": self.task,
            "n_records": self.n_records,
            "n_objectives": self.n_objectives,
            "objective_names": list(self.objective_names),
        }


def _no_duplicate_keys(pairs: list[tuple[str, object]]) -> dict:
    out: dict = {}
    for key, value in pairs:
        if key in out:
            raise ValueError(f"duplicate key {key!r}")
        out[key] = value
    return out


def _parse_line(path: str, lineno: int, line: str) -> dict:
    try:
        obj = json.loads(line, object_pairs_hook=_no_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise DatasetError(f"{path}: line {lineno}, column {exc.colno}: {exc.msg}") from None
    except ValueError as exc:
        raise DatasetError(f"{path}: line {lineno}: {exc}") from None
    if not isinstance(obj, dict):
        raise DatasetError(f"{path}: line {lineno}: expected a JSON object")
    return obj


def _parse_header(path: str, lineno: int, obj: dict) -> DatasetHeader:
    missing = _HEADER_KEYS - obj.keys()
    if missing:
        raise DatasetError(f"{path}: line {lineno}: header missing fields {sorted(missing)}")
    extra = obj.keys() - _HEADER_KEYS
    if extra:
        raise DatasetError(f"{path}: line {lineno}: header has unknown fields {sorted(extra)}")
    if not isinstance(obj["task"], str) or not obj["task"]:
        raise DatasetError(f"{path}: line {lineno}: task must be a non-empty string")
    if not isinstance(obj["n_records"], int) or isinstance(obj["n_records"], bool):
        raise DatasetError(f"{path}: line {lineno}: n_records must be an integer")
    names = obj["objective_names"]
    if not isinstance(names, list) or not all(isinstance(s, str) for s in names):
        raise DatasetError(f"{path}: line {lineno}: objective_names must be a list of strings")
    if obj["n_objectives"] != len(names):
        raise DatasetError(
            f"{path}: line {lineno}: n_objectives is {obj['n_objectives']} "
            f"but {len(names)} objective names are listed"
        )
    try:
        return DatasetHeader(
            task=obj["task"],
            objective_names=tuple(names),
            n_records=obj["n_records"],
            format_version=obj["format"],
        )
    except DatasetError as exc:
        raise DatasetError(f"{path}: line {lineno}: {exc}") from None


def _parse_fingerprint(path: str, lineno: int, mol_id: str, raw: object) -> CountFingerprint:
    if not isinstance(raw, dict):
        raise DatasetError(f"{path}: line {lineno}: record {mol_id!r}: fingerprint must be an object")
    if not raw:
        raise DatasetError(f"{path}: line {lineno}: record {mol_id!r}: fingerprint is empty")
    features: dict[int, int] = {}
    for key, value in raw.items():
        if not isinstance(key, str) or not key.isdigit() or (len(key) > 1 and key[0] == "0"):
            raise DatasetError(
                f"{path}: line {lineno}: record {mol_id!r}: "
                f"fingerprint key {key!r} is not a canonical decimal feature id"
            )
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise DatasetError(
                f"{path}: line {lineno}: record {mol_id!r}: "
                f"fingerprint count for feature {key} must be a positive integer, got {value!r}"
            )
        features[int(key)] = value
    try:
        return CountFingerprint(features)
    except ValueError as exc:
        raise DatasetError(f"{path}: line {lineno}: record {mol_id!r}: {exc}") from None


def _parse_objectives(path: str, lineno: int, mol_id: str, raw: object, d: int) -> list[float]:
    if not isinstance(raw, list):
        raise DatasetError(f"{path}: line {lineno}: record {mol_id!r}: objectives must be an array")
    if len(raw) != d:
        raise DatasetError(
            f"{path}: line {lineno}: record {mol_id!r}: "
            f"{len(raw)} objective values for {d} declared objectives"
        )
    out: list[float] = []
    for i, value in enumerate(raw):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise DatasetError(
                f"{path}: line {lineno}: record {mol_id!r}: objective {i + 1} is not a number"
            )
        v = float(value)
        if not math.isfinite(v) or not 0.0 <= v <= 1.0:
            raise DatasetError(
                f"{path}: line {lineno}: record {mol_id!r}: "
                f"objective {i + 1} value {value!r} outside [0, 1]"
            )
        out.append(v)
    return out


def load_dataset(path: str) -> tuple[DatasetHeader, CandidatePool]:
    """Parse and validate a dataset file; any defect raises with line context."""
    header: DatasetHeader | None = None
    ids: list[str] = []
    fingerprints: list[CountFingerprint] = []
    rows: list[list[float]] = []
    seen: dict[str, int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            obj = _parse_line(path, lineno, line)
            if header is None:
                header = _parse_header(path, lineno, obj)
                continue
            missing = {"id", "fingerprint", "objectives"} - obj.keys()
            if missing:
                raise DatasetError(f"{path}: line {lineno}: record missing fields {sorted(missing)}")
            extra = obj.keys() - _RECORD_KEYS
            if extra:
                raise DatasetError(f"{path}: line {lineno}: record has unknown fields {sorted(extra)}")
            mol_id = obj["id"]
            if not isinstance(mol_id, str) or not mol_id:
                raise DatasetError(f"{path}: line {lineno}: record id must be a non-empty string")
            if "smiles" in obj and not isinstance(obj["smiles"], str):
                raise DatasetError(f"{path}: line {lineno}: record {mol_id!r}: smiles must be a string")
            if mol_id in seen:
                raise DatasetError(
                    f"{path}: line {lineno}: duplicate id {mol_id!r} "
                    f"(first seen on line {seen[mol_id]})"
                )
            seen[mol_id] = lineno
            ids.append(mol_id)
            fingerprints.append(_parse_fingerprint(path, lineno, mol_id, obj["fingerprint"]))
            rows.append(_parse_objectives(path, lineno, mol_id, obj["objectives"], header.n_objectives))
    if header is None:
        raise DatasetError(f"{path}: empty file, expected a header line")
    if len(ids) != header.n_records:
        raise DatasetError(
            f"{path}: header declares {header.n_records} records but {len(ids)} were found"
        )
    if not ids:
        raise DatasetError(f"{path}: dataset contains no records")
    pool = CandidatePool(
        ids=tuple(ids),
        fingerprints=tuple(fingerprints),
        objectives=np.array(rows, dtype=np.float64),
        task=header.task,
    )
    return header, pool


def _dump(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def write_dataset(
    path: str,
    header: DatasetHeader,
    pool: CandidatePool,
    smiles: Sequence[str | None] | None = None,
) -> None:
    """Emit a dataset file; byte-deterministic for identical inputs."""
    if header.n_records != len(pool):
        raise DatasetError(
            f"header declares {header.n_records} records, pool holds {len(pool)}"
        )
    if header.n_objectives != pool.dimension:
        raise DatasetError(
            f"header declares {header.n_objectives} objectives, pool holds {pool.dimension}"
        )
    if smiles is not None and len(smiles) != len(pool):
        raise DatasetError("smiles list length must match the pool")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_dump(header.to_json_dict()) + "\n")
        for i, mol_id in enumerate(pool.ids):
            record: dict = {
                "id": mol_id,
                "fingerprint": {
                    str(fid): count for fid, count in pool.fingerprints[i].features.items()
                },
                "objectives": [float(format(v, ".17g")) for v in pool.objectives[i]],
            }
            if smiles is not None and smiles[i] is not None:
                record["smiles"] = smiles[i]
            fh.write(_dump(record) + "\n")


def _draw_anchors(
    rng: np.random.Generator, d: int, n_features: int, per_anchor: int
) -> list[CountFingerprint]:
    # disjoint feature sets so the d anchor similarities genuinely conflict
    order = rng.permutation(n_features)
    anchors = []
    for j in range(d):
        feats = order[j * per_anchor : (j + 1) * per_anchor]
        counts = rng.integers(1, 4, size=per_anchor)
        anchors.append(CountFingerprint({int(f): int(c) for f, c in zip(feats, counts)}))
    return anchors


def _anchor_size(d: int, n_features: int, density: float) -> int:
    if d < 2:
        raise ValueError(f"need at least 2 objectives, got {d}")
    if n_features < 1 or not 0.0 < density <= 1.0:
        raise ValueError(f"invalid feature space: n_features={n_features}, density={density}")
    per_anchor = max(3, round(n_features * density))
    if d * per_anchor > n_features:
        raise ValueError(
            f"{d} anchors of {per_anchor} features need {d * per_anchor} distinct ids "
            f"but only {n_features} exist; raise n_features or lower density"
        )
    return per_anchor


def synthetic_anchors(
    seed: int, d: int = 3, n_features: int = 512, density: float = 0.05
) -> list[CountFingerprint]:
    """The anchor fingerprints generate_synthetic(seed, ...) scores against."""
    per_anchor = _anchor_size(d, n_features, density)
    rng = np.random.default_rng(seed)
    return _draw_anchors(rng, d, n_features, per_anchor)


def generate_synthetic(
    seed: int,
    n: int,
    d: int = 3,
    n_features: int = 512,
    density: float = 0.05,
) -> tuple[DatasetHeader, CandidatePool]:
    """Random sparse count fingerprints with anchor-similarity objectives.

    d disjoint anchor fingerprints are drawn first; each molecule mixes
    anchor features (kept with per-molecule Dirichlet affinities, inheriting
    the anchor's count) with noise features from a disjoint id block, and
    objective j is the MinMax similarity to anchor j. That puts every
    objective in [0, 1], makes a molecule equal to anchor j score exactly
    1.0 on objective j, and yields conflicting objectives with a non-trivial
    Pareto front. Deterministic per (seed, n, d, n_features, density).
    """
    if n < 1:
        raise ValueError(f"need at least 1 molecule, got {n}")
    per_anchor = _anchor_size(d, n_features, density)
    rng = np.random.default_rng(seed)
    anchors = _draw_anchors(rng, d, n_features, per_anchor)

    ids: list[str] = []
    fingerprints: list[CountFingerprint] = []
    rows = np.empty((n, d), dtype=np.float64)
    for i in range(n):
        affinity = rng.dirichlet(np.full(d, 0.6))
        features: dict[int, int] = {}
        for j, anchor in enumerate(anchors):
            keep = rng.random(per_anchor) < affinity[j]
            for (fid, count), kept in zip(anchor.features.items(), keep):
                if kept:
                    features[fid] = count
        n_noise = int(rng.integers(0, per_anchor + 1))
        if n_noise:
            noise_ids = rng.choice(n_features, size=n_noise, replace=False) + n_features
            noise_counts = rng.integers(1, 4, size=n_noise)
            for fid, count in zip(noise_ids, noise_counts):
                features[int(fid)] = int(count)
        if not features:
            # a record-level invariant forbids empty fingerprints
            features[n_features + (i % n_features)] = 1
        fp = CountFingerprint(features)
        ids.append(f"syn{i:05d}")
        fingerprints.append(fp)
        for j, anchor in enumerate(anchors):
            rows[i, j] = minmax_kernel(fp, anchor)

    header = DatasetHeader(
        task="synthetic",
        objective_names=tuple(f"anchor{j + 1}_similarity" for j in range(d)),
        n_records=n,
    )
    pool = CandidatePool(
        ids=tuple(ids), fingerprints=tuple(fingerprints), objectives=rows, task="synthetic"
    )
    return header, pool


def _g17(x: float) -> str:
    return format(float(x), ".17g")


def round_log_columns(n_objectives: int) -> list[str]:
    cols = ["round", "selected_id", "acq_score"]
    cols += [f"obj_{i + 1}" for i in range(n_objectives)]
    cols += ["hv", "r2", "wall_ms"]
    return cols


def write_round_log(
    records: Sequence[RunRecord], path: str, n_objectives: int | None = None
) -> None:
    """Per-round CSV; numeric fields re-parse to the original doubles exactly."""
    if records:
        n_objectives = len(records[0].objectives)
    elif n_objectives is None:
        raise ValueError("n_objectives is required to write a header-only log")
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(round_log_columns(n_objectives))
            for rec in records:
                if len(rec.objectives) != n_objectives:
                    raise ValueError(
                        f"record round {rec.round_index} has {len(rec.objectives)} objectives, "
                        f"expected {n_objectives}"
                    )
                writer.writerow(
                    [str(rec.round_index), rec.selected_id, _g17(rec.acq_score)]
                    + [_g17(v) for v in rec.objectives]
                    + [_g17(rec.hypervolume), _g17(rec.r2), _g17(rec.wall_ms)]
                )
    except OSError as exc:
        raise OSError(f"cannot write round log {path}: {exc}") from exc


def read_round_log(path: str) -> list[RunRecord]:
    """Inverse of write_round_log; validates the column layout."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            head = next(reader)
        except StopIteration:
            raise DatasetError(f"{path}: empty round log") from None
        d = len(head) - len(ROUND_LOG_FIXED_COLUMNS)
        if d < 2 or head != round_log_columns(d):
            raise DatasetError(f"{path}: unexpected round log columns {head}")
        records = []
        for row in reader:
            if len(row) != len(head):
                raise DatasetError(f"{path}: row {reader.line_num}: expected {len(head)} fields")
            records.append(
                RunRecord(
                    round_index=int(row[0]),
                    selected_id=row[1],
                    acq_score=float(row[2]),
                    objectives=tuple(float(v) for v in row[3 : 3 + d]),
                    hypervolume=float(row[3 + d]),
                    r2=float(row[4 + d]),
                    wall_ms=float(row[5 + d]),
                )
            )
    return records


def _display(kind: str) -> str:
    return ACQUISITION_DISPLAY.get(kind, kind)


def _threshold_key(t: float) -> str:
    return format(t, ".2f")


def summary_json_dict(suite: SuiteResult) -> dict:
    methods = {}
    for kind in suite.acquisitions:
        m = suite.methods[kind]
        methods[kind] = {
            "display_name": _display(kind),
            "seeds": list(m.seeds),
            "final_hypervolume": list(m.final_hypervolume),
            "final_r2": list(m.final_r2),
            "hv_mean": m.hv_mean,
            "hv_std": m.hv_std,
            "r2_mean": m.r2_mean,
            "r2_std": m.r2_std,
            "circles_mean": {_threshold_key(t): v for t, v in m.circles_mean.items()},
            "circles_std": {_threshold_key(t): v for t, v in m.circles_std.items()},
            "degenerate_std": m.degenerate,
        }
    effects = [
        {
            "first": pair.first,
            "second": pair.second,
            "hypervolume": {
                "cohens_d": pair.hypervolume.cohens_d,
                "cliffs_delta": pair.hypervolume.cliffs_delta,
            },
            "r2": {"cohens_d": pair.r2.cohens_d, "cliffs_delta": pair.r2.cliffs_delta},
        }
        for pair in suite.effect_sizes
    ]
    return {
        "format": SUMMARY_FORMAT_VERSION,
        "task": suite.task,
        "seeds": list(suite.seeds),
        "acquisitions": list(suite.acquisitions),
        "methods": methods,
        "effect_sizes": effects,
    }


def _summary_text(suite: SuiteResult) -> str:
    name_width = max(len(_display(k)) for k in suite.acquisitions)
    lines: list[str] = []
    lines.append(f"Task: {suite.task or '(unnamed)'}")
    lines.append("Seeds: " + ", ".join(str(s) for s in suite.seeds))
    single = len(suite.seeds) < 2
    if single:
        lines.append("Note: single seed; std over seeds is undefined and shown as 0.")
    lines.append("")

    def stat_block(title: str, attr_mean: str, attr_std: str) -> None:
        lines.append(f"{title} (mean ± std over seeds)")
        for kind in suite.acquisitions:
            m = suite.methods[kind]
            lines.append(
                f"  {_display(kind):<{name_width}}  "
                f"{format(getattr(m, attr_mean), '.6g')} ± {format(getattr(m, attr_std), '.6g')}"
            )
        lines.append("")

    stat_block("Final hypervolume", "hv_mean", "hv_std")
    stat_block("Final R2", "r2_mean", "r2_std")

    thresholds = list(suite.methods[suite.acquisitions[0]].circles_mean.keys())
    if thresholds:
        lines.append("#Circles on the final front (mean over seeds, by distance threshold)")
        head = "  " + " " * name_width + "  " + "  ".join(f"{_threshold_key(t):>6}" for t in thresholds)
        lines.append(head)
        for kind in suite.acquisitions:
            m = suite.methods[kind]
            row = "  ".join(f"{format(m.circles_mean[t], '.1f'):>6}" for t in thresholds)
            lines.append(f"  {_display(kind):<{name_width}}  {row}")
        lines.append("")

    if suite.effect_sizes:
        lines.append("Effect sizes (first method vs second)")
        for pair in suite.effect_sizes:
            for label, report in (("hypervolume", pair.hypervolume), ("R2", pair.r2)):
                d_txt = "undefined" if report.cohens_d is None else format(report.cohens_d, ".6g")
                lines.append(
                    f"  {_display(pair.first)} vs {_display(pair.second)}, {label}: "
                    f"Cohen's d = {d_txt}, Cliff's delta = {format(report.cliffs_delta, '.6g')}"
                )
        lines.append("")
    return "\n".join(lines)


def write_summary(suite: SuiteResult, text_path: str, json_path: str) -> None:
    """Human-readable table plus a machine companion with identical content."""
    try:
        with open(text_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(_summary_text(suite))
        with open(json_path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(summary_json_dict(suite), fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write summary: {exc}") from exc


def pool_records(pool: CandidatePool) -> Iterable[Mapping]:
    """Debug helper: iterate records as plain mappings in pool order."""
    for i, mol_id in enumerate(pool.ids):
        yield {
            "id": mol_id,
            "fingerprint": dict(pool.fingerprints[i].features),
            "objectives": [float(v) for v in pool.objectives[i]],
        }
