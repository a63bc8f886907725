"""File formats used by the command-line tools.

 - dataset CSV: header of unique [A-Za-z0-9_] names, then full-precision
   decimal rows (lossless round-trip).
 - truth sidecar: line 1 `target=<name>`, line 2 `mb=<comma-separated names>`.
 - result file: `direction=`/`order=`/`step_values=` lines for rankings, or
   a single `members=` line for subsets.
 - records: one `key=value` pair list per line.
 - aggregates: CSV with columns grid_value,algorithm,metric,mean,ci95.
 - config: flat `key=value` lines, `#` comments allowed.
"""

from __future__ import annotations

import math
import re
from pathlib import Path
from typing import Sequence

import numpy as np

from .bench import AggregateRow, ResultRecord
from .elimination import EliminationResult, SubsetResult
from .errors import DatasetParseError
from .kernels import DataMatrix

_NAME_RE = re.compile(r"^[A-Za-z0-9_]+$")


def _fmt(x: float) -> str:
    return repr(float(x))


def write_dataset_csv(path, data: DataMatrix) -> None:
    for name in data.column_names:
        if not _NAME_RE.match(name):
            raise ValueError(f"column name {name!r} is not CSV-safe ([A-Za-z0-9_] only)")
    lines = [",".join(data.column_names)]
    for row in data.values:
        lines.append(",".join(_fmt(x) for x in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_dataset_csv(path) -> DataMatrix:
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines()]
    while lines and not lines[-1].strip():
        lines.pop()
    if len(lines) < 2:
        raise DatasetParseError(f"{path}: need a header plus at least 2 data rows")
    names = [c.strip() for c in lines[0].split(",")]
    if len(set(names)) != len(names):
        raise DatasetParseError(f"{path}: line 1: duplicate column names")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != len(names):
            raise DatasetParseError(
                f"{path}: line {lineno}: expected {len(names)} values, got {len(parts)}"
            )
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise DatasetParseError(f"{path}: line {lineno}: {exc}") from None
    try:
        return DataMatrix(values=np.array(rows), column_names=tuple(names))
    except ValueError as exc:
        raise DatasetParseError(f"{path}: {exc}") from None


def truth_sidecar_path(dataset_path) -> Path:
    return Path(str(dataset_path) + ".truth")


def write_truth(path, target_name: str, mb_names: Sequence[str]) -> None:
    Path(path).write_text(f"target={target_name}\nmb={','.join(mb_names)}\n")


def read_truth(path) -> tuple[str, list[str]]:
    lines = Path(path).read_text().splitlines()
    fields = {}
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if "=" not in line:
            raise DatasetParseError(f"{path}: line {lineno}: expected key=value")
        key, _, value = line.partition("=")
        fields[key.strip()] = value.strip()
    if "target" not in fields or "mb" not in fields:
        raise DatasetParseError(f"{path}: need both target= and mb= lines")
    mb = [n for n in fields["mb"].split(",") if n]
    return fields["target"], mb


def write_ranking(path, names: Sequence[str], result: EliminationResult) -> None:
    lines = [
        f"direction={result.direction}",
        "order=" + ",".join(names[v] for v in result.order),
        "step_values=" + ",".join(_fmt(v) for v in result.step_values),
    ]
    Path(path).write_text("\n".join(lines) + "\n")


def write_subset(path, names: Sequence[str], subset: SubsetResult) -> None:
    members = sorted(subset.members)
    Path(path).write_text("members=" + ",".join(names[v] for v in members) + "\n")


def read_result_file(path) -> dict:
    """Parse a ranking or subset file into a small dict.

    Rankings give {"direction": ..., "order": [names], "step_values": [...]};
    subsets give {"members": [names]}.
    """
    fields = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if not line.strip():
            continue
        if "=" not in line:
            raise DatasetParseError(f"{path}: line {lineno}: expected key=value")
        key, _, value = line.partition("=")
        fields[key.strip()] = value.strip()
    if "members" in fields:
        return {"members": [n for n in fields["members"].split(",") if n]}
    if "order" not in fields:
        raise DatasetParseError(f"{path}: need either an order= or a members= line")
    out = {
        "direction": fields.get("direction", "backward"),
        "order": [n for n in fields["order"].split(",") if n],
    }
    if "step_values" in fields:
        try:
            out["step_values"] = [float(v) for v in fields["step_values"].split(",") if v]
        except ValueError as exc:
            raise DatasetParseError(f"{path}: step_values: {exc}") from None
    return out


def _sanitize(message: str) -> str:
    return re.sub(r"\s+", "_", message.strip())


def format_record(r: ResultRecord) -> str:
    parts = [
        f"experiment={r.experiment}",
        f"algorithm={r.algorithm}",
        f"grid_value={_fmt(r.grid_value)}",
        f"trial={r.trial}",
        f"seed={r.seed}",
        f"metric={r.metric}",
        f"value={_fmt(r.value)}",
        f"wall_time_ms={_fmt(r.wall_time_ms)}",
    ]
    if r.error is not None:
        parts.append(f"error={_sanitize(r.error)}")
    return " ".join(parts)


def write_records(path, records: Sequence[ResultRecord]) -> None:
    Path(path).write_text("".join(format_record(r) + "\n" for r in records))


def parse_record(line: str) -> ResultRecord:
    fields = {}
    for token in line.split():
        key, _, value = token.partition("=")
        fields[key] = value
    try:
        return ResultRecord(
            experiment=fields["experiment"],
            algorithm=fields["algorithm"],
            grid_value=float(fields["grid_value"]),
            trial=int(fields["trial"]),
            seed=int(fields["seed"]),
            metric=fields["metric"],
            value=float(fields["value"]),
            wall_time_ms=float(fields["wall_time_ms"]),
            error=fields.get("error"),
        )
    except KeyError as exc:
        raise DatasetParseError(f"record line is missing {exc}") from None


def read_records(path) -> list[ResultRecord]:
    return [parse_record(ln) for ln in Path(path).read_text().splitlines() if ln.strip()]


def write_aggregates_csv(path, rows: Sequence[AggregateRow]) -> None:
    lines = ["grid_value,algorithm,metric,mean,ci95"]
    for row in rows:
        ci = "nan" if math.isnan(row.ci95) else _fmt(row.ci95)
        lines.append(f"{_fmt(row.grid_value)},{row.algorithm},{row.metric},{_fmt(row.mean)},{ci}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_config_file(path) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DatasetParseError(f"{path}: line {lineno}: expected key=value")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out
