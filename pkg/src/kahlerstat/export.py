"""CSV and JSON writers shared by the library and the command line."""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np


def format_value(value):
    """Floats with 17 significant digits, everything else via str()."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _plain(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def to_csv(columns, rows, config=None):
    """CSV text with '#'-prefixed config echo lines and a header row."""
    buf = io.StringIO()
    for key, value in (config or {}).items():
        buf.write(f"# {key} = {format_value(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def to_json(columns, rows, config=None, extra=None):
    """JSON text holding config, column names and rows (floats round-trip exactly)."""
    doc = {"config": _plain(config or {}), "columns": list(columns),
           "rows": [_plain(list(r)) for r in rows]}
    if extra:
        doc.update(_plain(extra))
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def parse_json_value(value):
    # non-finite floats are stored as strings
    if value in ("inf", "-inf", "nan"):
        return float(value)
    return value


def _cell(text):
    try:
        return float(text)
    except ValueError:
        return text


def read_csv(text):
    """Inverse of to_csv: (config dict of strings, columns, rows).

    Numeric cells come back as floats, anything else (labels, flags) as str.
    """
    config = {}
    lines = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            config[key.strip()] = value.strip()
        elif line:
            lines.append(line)
    reader = csv.reader(lines)
    columns = next(reader, [])
    rows = [[_cell(v) for v in row] for row in reader]
    return config, columns, rows
