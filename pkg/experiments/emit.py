"""Writing experiment results as CSV, JSON or an HTML report."""

from __future__ import annotations

import csv
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Sequence, Union

from errors import EmitError, PreconditionError

from .common import ExperimentResult
from .config import ExperimentConfig

logger = logging.getLogger(__name__)

OutputFormat = Literal["csv", "json", "report"]


def _columns(records: Sequence[Mapping[str, Any]]) -> List[str]:
    """Union of record keys in first-seen order."""
    seen: Dict[str, None] = {}
    for row in records:
        for key in row:
            seen.setdefault(key, None)
    return list(seen)


def _json_default(value: Any) -> Any:
    if hasattr(value, "tolist"):
        return value.tolist()
    if hasattr(value, "as_dict"):
        return value.as_dict()
    if isinstance(value, Path):
        return str(value)
    return str(value)


def _finite_or_string(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {key: _finite_or_string(val) for key, val in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite_or_string(item) for item in value]
    return value


def write_csv(records: Sequence[Mapping[str, Any]], path: Union[str, Path]) -> Path:
    target = Path(path)
    columns = _columns(records)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.DictWriter(handle, fieldnames=columns, restval="")
            writer.writeheader()
            for row in records:
                writer.writerow({key: row.get(key, "") for key in columns})
    except OSError as exc:
        raise EmitError(f"could not write CSV to {target}: {exc}", path=str(target)) from exc
    return target


def write_json(payload: Mapping[str, Any], path: Union[str, Path]) -> Path:
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(
            json.dumps(_finite_or_string(dict(payload)), indent=2, default=_json_default),
            encoding="utf-8",
        )
    except OSError as exc:
        raise EmitError(f"could not write JSON to {target}: {exc}", path=str(target)) from exc
    return target


def emit(result: ExperimentResult, fmt: OutputFormat, path: Union[str, Path]) -> Path:
    """Write ``result`` in one format; the JSON and report forms carry the configuration and seed."""
    if not result.records:
        raise PreconditionError(f"{result.kind} result has no records to emit")
    if fmt == "csv":
        target = write_csv(result.records, path)
    elif fmt == "json":
        target = write_json(result.as_dict(), path)
    elif fmt == "report":
        from report import render_report

        target = render_report(_finite_or_string(result.as_dict()), path)
    else:
        raise PreconditionError(f"unknown output format '{fmt}'")
    logger.info("Wrote %s %s output to %s", result.kind, fmt, target)
    return target


def emit_outputs(result: ExperimentResult, config: ExperimentConfig) -> Dict[str, str]:
    """Write every output the configuration asks for; returns {format: path}."""
    requested = {"csv": config.csv_path, "json": config.json_path, "report": config.report_path}
    return {fmt: str(emit(result, fmt, path)) for fmt, path in requested.items() if path is not None}


def load_result(path: Union[str, Path]) -> Dict[str, Any]:
    source = Path(path)
    try:
        payload = json.loads(source.read_text(encoding="utf-8"))
    except OSError as exc:
        raise EmitError(f"could not read results from {source}: {exc}", path=str(source)) from exc
    except json.JSONDecodeError as exc:
        raise EmitError(f"{source} is not a results JSON file: {exc}", path=str(source)) from exc
    if not isinstance(payload, dict) or "records" not in payload:
        raise EmitError(f"{source} has no 'records' entry", path=str(source))
    return payload


__all__ = ["emit", "emit_outputs", "load_result", "write_csv", "write_json"]
