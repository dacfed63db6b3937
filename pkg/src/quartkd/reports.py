"""Report assembly and rendering: aligned text, CSV, and JSON documents.

Every report embeds its header (artifact version, seed, config echo) and
labels the source of every number (empirical, oracle, exact, config, policy).
Rendering is deterministic: identical reports produce byte-identical output.
"""

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction


def fmt(value) -> str:
    """Canonical string form: fractions as p/q, floats via repr (round-trip safe)."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass(frozen=True)
class Table:
    name: str
    columns: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(f"row width {len(row)} != {len(self.columns)} in table {self.name!r}")


@dataclass(frozen=True)
class Report:
    title: str
    header: tuple[tuple[str, str], ...]
    tables: tuple[Table, ...]


def metrics_table(name: str, entries: list[tuple]) -> Table:
    """Convenience: (metric, value, source) triples into a table."""
    rows = tuple((str(n), fmt(v), s) for n, v, s in entries)
    return Table(name, ("metric", "value", "source"), rows)


def render_text(report: Report) -> str:
    out = [f"# {report.title}"]
    for key, value in report.header:
        out.append(f"# {key} = {value}")
    for table in report.tables:
        out.append("")
        out.append(f"[{table.name}]")
        widths = [len(c) for c in table.columns]
        for row in table.rows:
            for i, cell in enumerate(row):
                widths[i] = max(widths[i], len(cell))
        def line(cells):
            return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
        out.append(line(table.columns))
        out.append(line(["-" * w for w in widths]))
        for row in table.rows:
            out.append(line(row))
    return "\n".join(out) + "\n"


def render_csv(report: Report) -> str:
    buf = io.StringIO()
    buf.write(f"# {report.title}\n")
    for key, value in report.header:
        buf.write(f"# {key} = {value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    for table in report.tables:
        buf.write(f"# table = {table.name}\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow(row)
    return buf.getvalue()


def parse_csv(text: str) -> tuple[Table, ...]:
    """Inverse of render_csv for the tables (header comments are not data)."""
    tables = []
    name = None
    columns = None
    rows: list[tuple[str, ...]] = []

    def flush():
        nonlocal columns, rows
        if name is not None and columns is not None:
            tables.append(Table(name, columns, tuple(rows)))
        columns = None
        rows = []

    for line in text.splitlines():
        if line.startswith("# table = "):
            flush()
            name = line[len("# table = "):]
        elif line.startswith("#") or not line.strip():
            continue
        else:
            cells = tuple(next(csv.reader([line])))
            if columns is None:
                columns = cells
            else:
                rows.append(cells)
    flush()
    return tuple(tables)


def render_doc(report: Report) -> str:
    doc = {
        "title": report.title,
        "header": {k: v for k, v in report.header},
        "tables": [
            {"name": t.name, "columns": list(t.columns), "rows": [list(r) for r in t.rows]}
            for t in report.tables
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


RENDERERS = {"text": render_text, "csv": render_csv, "doc": render_doc}


def render(report: Report, fmt_name: str) -> str:
    try:
        renderer = RENDERERS[fmt_name]
    except KeyError:
        raise ValueError(f"unknown output format {fmt_name!r}") from None
    return renderer(report)
