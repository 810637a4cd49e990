"""Result documents and stable serialization.

json and jsonl output is byte-deterministic for a fixed command, seed, and
thread count; the wall-time field is informational and excluded from that
contract (jsonl omits it entirely). CSV uses a fixed column set with floats
printed to 17 significant digits.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field

CSV_COLUMNS = [
    "experiment",
    "N",
    "k",
    "alpha",
    "p",
    "method",
    "samples",
    "seed",
    "value",
    "normalizer",
    "ratio",
    "std_error",
]


@dataclass
class ResultDocument:
    tool: str
    version: str
    command: list[str]
    seed: int | None
    threads: int
    records: list[dict]
    warnings: list[str] = field(default_factory=list)
    wall_time_s: float | None = None


def _clean(value):
    """Make a record JSON-safe: finite floats only, complex split, keys stringified."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, complex):
        return {"re": _clean(value.real), "im": _clean(value.imag)}
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if hasattr(value, "item"):  # numpy scalar
        return _clean(value.item())
    return str(value)


def document_to_json(doc: ResultDocument) -> str:
    payload = {
        "tool": doc.tool,
        "version": doc.version,
        "command": doc.command,
        "seed": doc.seed,
        "threads": doc.threads,
        "warnings": doc.warnings,
        "records": [_clean(r) for r in doc.records],
        "wall_time_s": doc.wall_time_s,
    }
    return json.dumps(payload, allow_nan=False, separators=(",", ": "), indent=1) + "\n"


def records_to_jsonl(records: list[dict]) -> str:
    lines = [json.dumps(_clean(r), allow_nan=False, separators=(",", ":")) for r in records]
    return "\n".join(lines) + ("\n" if lines else "")


def _fmt_csv(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return "" if not math.isfinite(value) else f"{value:.17g}"
    return str(value)


def records_to_csv(records: list[dict]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for rec in records:
        params = rec.get("params", {})
        row = []
        for col in CSV_COLUMNS:
            if col == "experiment":
                row.append(_fmt_csv(rec.get("experiment")))
            elif col in ("value", "normalizer", "ratio", "std_error"):
                row.append(_fmt_csv(rec.get(col)))
            else:
                row.append(_fmt_csv(params.get(col)))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def render(doc: ResultDocument, fmt: str) -> str:
    if fmt == "json":
        return document_to_json(doc)
    if fmt == "jsonl":
        return records_to_jsonl(doc.records)
    if fmt == "csv":
        return records_to_csv(doc.records)
    raise ValueError(f"unknown format {fmt!r}")


def write_atomic(path: str, data: str) -> None:
    """Write via a temp file in the destination directory plus rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
