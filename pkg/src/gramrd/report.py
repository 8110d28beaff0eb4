"""Delimited output with provenance headers, plus config and grid parsing.

Every artifact this package writes starts with a provenance block that
records the schema version, the tool build, the subcommand and the full
parameter set, so that re-running the header reproduces the file.  CSV
provenance lines start with ``#`` ahead of the column header; NDJSON
output carries the same information as its first record.  Floats in CSV
are printed with 17 significant digits so parsing them back is lossless;
NDJSON relies on ``repr``-based round-tripping, which is exact.

Nothing here writes wall-clock timestamps.  Determinism of the artifact
bytes is a contract, not an accident.
"""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Iterable, Mapping, Sequence

from .errors import ValidationError

SCHEMA_VERSION = "v1"
TOOL_NAME = "gramrd"

__all__ = [
    "SCHEMA_VERSION",
    "format_value",
    "parse_config_file",
    "provenance_dict",
    "read_grid",
    "render_csv",
    "render_ndjson",
]


def format_value(v) -> str:
    """CSV cell formatting: floats at 17 significant digits, rest via str."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _tool_version() -> str:
    from . import __version__

    return __version__


def provenance_dict(subcommand: str, parameters: Mapping[str, object]) -> dict:
    """The canonical provenance payload shared by both output formats."""
    return {
        "record": "provenance",
        "schema_version": SCHEMA_VERSION,
        "tool": TOOL_NAME,
        "build": f"{TOOL_NAME} {_tool_version()}",
        "subcommand": subcommand,
        "parameters": {k: parameters[k] for k in sorted(parameters)},
    }


def render_csv(
    columns: Sequence[str],
    rows: Iterable[Sequence[object]],
    provenance: Mapping[str, object],
) -> str:
    """CSV text: '#'-prefixed provenance lines, a header row, then data."""
    buf = io.StringIO()
    buf.write(f"# {TOOL_NAME}-csv schema={provenance['schema_version']}\n")
    buf.write(f"# build={provenance['build']}\n")
    buf.write(f"# subcommand={provenance['subcommand']}\n")
    for k, v in provenance["parameters"].items():
        buf.write(f"# param.{k}={format_value(v)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        if len(row) != len(columns):
            raise ValidationError(
                f"row has {len(row)} cells but the schema has {len(columns)} columns"
            )
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def render_ndjson(records: Iterable[Mapping], provenance: Mapping[str, object]) -> str:
    """Newline-delimited JSON: the provenance record first, then one per row."""
    lines = [json.dumps(provenance, sort_keys=True)]
    for rec in records:
        lines.append(json.dumps(rec, sort_keys=True))
    return "\n".join(lines) + "\n"


def parse_config_file(text: str) -> dict[str, str]:
    """Flat ``key=value`` configuration, one pair per line.

    Blank lines and lines starting with ``#`` are ignored; whitespace
    around keys and values is stripped.  Keys use the long option names
    without the leading dashes (e.g. ``c-star=0.02``).  Duplicate keys are
    rejected rather than silently last-wins.
    """
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"config line {lineno} is not key=value: {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ValidationError(f"config line {lineno} has an empty key")
        if key in out:
            raise ValidationError(f"config line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def read_grid(text: str) -> list[dict[str, str]]:
    """Read a grid CSV (with optional ``#`` comment lines) into row dicts."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValidationError("grid file has no data rows")
    reader = csv.DictReader(lines)
    rows = []
    for row in reader:
        if None in row or None in row.values():
            raise ValidationError("grid row does not match the header width")
        rows.append({k.strip(): (v or "").strip() for k, v in row.items()})
    if not rows:
        raise ValidationError("grid file has a header but no rows")
    return rows
