"""
Output formats of the `invariants` command: aligned table, JSON, CSV.

Exact values are always "p/q"; with --decimal N an approximation marked with
'~' is added next to each of them.
"""
import csv
import io
from fractions import Fraction

from django.db import models
from rest_framework.renderers import JSONRenderer

from apps.core.utils import format_decimal, format_fraction
from apps.jobs.models import OutputFormat


def _plain(value):
    """Recursively convert to JSON-friendly values."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, models.Choices):
        return value.value
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, dict):
        return {key: _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return value


def _with_decimals(row, places):
    if places is None:
        return dict(row)
    out = {}
    for key, value in row.items():
        out[key] = value
        if isinstance(value, Fraction):
            out[f"{key}_decimal"] = format_decimal(value, places)
    return out


def _cell(value):
    value = _plain(value)
    if value is None:
        return "-"
    if isinstance(value, list):
        return " ".join(str(item) for item in value)
    if isinstance(value, dict):
        return ", ".join(f"{k}={_cell(v)}" for k, v in value.items())
    return str(value)


def _columns(rows):
    columns = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    return columns


# ── Formats ────────────────────────────────────────────────────────────────────

def render_json(result, places=None):
    document = {
        "command": result.command,
        "rows": [_plain(_with_decimals(row, places)) for row in result.rows],
    }
    document.update(_plain(result.payload))
    if result.checks:
        document["checks"] = [
            {"name": c.name, "result": "PASS" if c.passed else "FAIL", "detail": c.detail}
            for c in result.checks
        ]
    content = JSONRenderer().render(document, "application/json; indent=2")
    return content.decode("utf-8") + "\n"


def _check_lines(result):
    return [
        f"CHECK {c.name}: {'PASS' if c.passed else 'FAIL'}" + (f" ({c.detail})" if c.detail else "")
        for c in result.checks
    ]


def render_table(result, places=None):
    rows = [_with_decimals(row, places) for row in result.rows]
    lines = [f"# {result.command}"]
    for key, value in result.payload.items():
        if not isinstance(value, (dict, list, tuple)):
            lines.append(f"{key}: {_cell(value)}")
        elif isinstance(value, (list, tuple)) and all(isinstance(v, str) for v in value):
            lines.extend(f"{key}: {v}" for v in value)

    if rows:
        columns = _columns(rows)
        cells = [[_cell(row.get(c)) for c in columns] for row in rows]
        widths = [
            max(len(column), *(len(line[i]) for line in cells))
            for i, column in enumerate(columns)
        ]
        lines.append("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip())
        lines.append("  ".join("-" * w for w in widths))
        for line in cells:
            lines.append("  ".join(v.ljust(w) for v, w in zip(line, widths)).rstrip())

    lines.extend(_check_lines(result))
    return "\n".join(lines) + "\n"


def render_csv(result, places=None):
    rows = [_with_decimals(row, places) for row in result.rows]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if rows:
        columns = _columns(rows)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row.get(c)) for c in columns])
    if result.checks:
        writer.writerow([])
        writer.writerow(["check", "result", "detail"])
        for c in result.checks:
            writer.writerow([c.name, "PASS" if c.passed else "FAIL", c.detail])
    return buffer.getvalue()


RENDERERS = {
    OutputFormat.TABLE.value: render_table,
    OutputFormat.JSON.value: render_json,
    OutputFormat.CSV.value: render_csv,
}


def render(result, fmt=OutputFormat.TABLE.value, places=None):
    return RENDERERS[str(fmt)](result, places)
