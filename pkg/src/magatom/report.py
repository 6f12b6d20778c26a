"""Machine-readable output records with deterministic CSV/JSON rendering.

Numbers are printed with 17 significant digits so every emitted payload
round-trips bit-exactly: parse(emit(x)) == x.  CSV carries the header row
and data rows only (RFC-4180-style quoting); the JSON form additionally
embeds the echoed inputs and diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

SCHEMA_VERSION = "1"


def format_number(x) -> str:
    """17-significant-digit rendering; round-trips exactly via float()."""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


@dataclass
class OutputRecord:
    """One command invocation's tabular result."""

    command: str
    inputs: dict
    columns: tuple[str, ...]
    rows: list[tuple]
    diagnostics: list[str] = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return format_number(v)
    text = str(v)
    if any(ch in text for ch in ',"\n\r'):
        text = '"' + text.replace('"', '""') + '"'
    return text


def to_csv(record: OutputRecord) -> str:
    lines = [",".join(_csv_cell(c) for c in record.columns)]
    for row in record.rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    return "\r\n".join(lines) + "\r\n"


def _json_scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        out = format(v, ".17g")
        if out in ("inf", "-inf", "nan"):  # JSON has no literals for these
            return f'"{out}"'
        return out
    if isinstance(v, int):
        return str(v)
    text = str(v)
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")
    return f'"{escaped}"'


def to_json(record: OutputRecord) -> str:
    parts = [
        f'"schema_version": {_json_scalar(record.schema_version)}',
        f'"command": {_json_scalar(record.command)}',
        '"inputs": {'
        + ", ".join(f"{_json_scalar(str(k))}: {_json_scalar(v)}" for k, v in record.inputs.items())
        + "}",
        '"columns": [' + ", ".join(_json_scalar(c) for c in record.columns) + "]",
        '"rows": ['
        + ", ".join("[" + ", ".join(_json_scalar(v) for v in row) + "]" for row in record.rows)
        + "]",
        '"diagnostics": [' + ", ".join(_json_scalar(d) for d in record.diagnostics) + "]",
    ]
    return "{" + ", ".join(parts) + "}\n"


def render(record: OutputRecord, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(record)
    if fmt == "json":
        return to_json(record)
    raise ValueError(f"unknown format {fmt!r} (expected 'csv' or 'json')")


def _parse_cell(text: str):
    if text == "":
        return None
    if text == "true":
        return True
    if text == "false":
        return False
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def parse_csv(text: str) -> tuple[tuple[str, ...], list[tuple]]:
    """Inverse of to_csv for round-trip testing (handles quoted cells)."""
    rows: list[tuple] = []
    lines = [ln for ln in text.splitlines() if ln != ""]
    parsed_lines = []
    for ln in lines:
        cells = []
        cur = []
        in_quotes = False
        i = 0
        while i < len(ln):
            ch = ln[i]
            if in_quotes:
                if ch == '"':
                    if i + 1 < len(ln) and ln[i + 1] == '"':
                        cur.append('"')
                        i += 1
                    else:
                        in_quotes = False
                else:
                    cur.append(ch)
            elif ch == '"':
                in_quotes = True
            elif ch == ",":
                cells.append("".join(cur))
                cur = []
            else:
                cur.append(ch)
            i += 1
        cells.append("".join(cur))
        parsed_lines.append(cells)
    header = tuple(parsed_lines[0])
    for cells in parsed_lines[1:]:
        rows.append(tuple(_parse_cell(c) for c in cells))
    return header, rows
