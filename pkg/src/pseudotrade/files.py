"""CSV series files, JSON reports and static SVG charts.

CSV layout: optional ``#`` comment lines, then a header. Single series use
``t,value``; generated worlds use ``t,clean,noisy``. Numbers are written with
up to 12 significant digits.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import DataError, SpecError
from .series import PriceSeries


class CsvFormatError(SpecError):
    """A CSV file that does not follow the expected layout."""


def fmt_number(x: float) -> str:
    return f"{x:.12g}"


def format_series_csv(columns: Mapping[str, Sequence[float]], comments: Sequence[str] = ()) -> str:
    """Render aligned columns with a leading ``t`` column.

    ``None`` or NaN entries (undefined warm-up values) become empty cells.
    """
    names = list(columns)
    n = len(columns[names[0]])
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(["t", *names]))
    for t in range(n):
        cells = [str(t)]
        for name in names:
            v = columns[name][t]
            cells.append("" if v is None or np.isnan(v) else fmt_number(float(v)))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_text(path, text: str):
    Path(path).write_text(text, encoding="utf-8", newline="")


def read_series_csv(path) -> tuple[dict[str, np.ndarray], list[str]]:
    """Parse a series CSV into ``{column: values}`` (``t`` excluded) and comments.

    Raises:
        CsvFormatError: on a missing header, a wrong cell count, a bad
            number or a non-consecutive ``t``; the message names the line.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CsvFormatError(f"cannot read {path}: {exc.strerror}") from None
    comments, header, rows = [], None, []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
            continue
        cells = next(csv.reader([line]))
        if header is None:
            header = [c.strip() for c in cells]
            if len(header) < 2 or header[0] != "t":
                raise CsvFormatError(f"{path}: line {lineno}: header must be 't,<column>[,...]'")
            continue
        if len(cells) != len(header):
            raise CsvFormatError(
                f"{path}: line {lineno}: expected {len(header)} fields, got {len(cells)}"
            )
        try:
            t = int(cells[0])
            values = [float(c) for c in cells[1:]]
        except ValueError:
            raise CsvFormatError(f"{path}: line {lineno}: malformed number in {line!r}") from None
        if t != len(rows):
            raise CsvFormatError(f"{path}: line {lineno}: expected t={len(rows)}, got {t}")
        rows.append(values)
    if header is None:
        raise CsvFormatError(f"{path}: no header line")
    if not rows:
        raise DataError(f"{path}: no data rows")
    data = np.array(rows, dtype=np.float64)
    return {name: data[:, i] for i, name in enumerate(header[1:])}, comments


def read_prices(path, column: str | None = None) -> PriceSeries:
    """Load one price column. Defaults to ``value``, then ``noisy``, then the first column."""
    columns, _ = read_series_csv(path)
    if column is None:
        column = next((c for c in ("value", "noisy") if c in columns), next(iter(columns)))
    if column not in columns:
        raise CsvFormatError(f"{path}: no column {column!r}; have {sorted(columns)}")
    try:
        return PriceSeries(columns[column])
    except DataError as exc:
        raise DataError(f"{path}: {exc}") from None


def write_json(path, payload) -> None:
    write_text(path, dumps(payload))


def dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=False, allow_nan=False, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


_PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#17becf")


def _polyline(values, x0, y0, w, h, lo, hi, n, color, width=1.2):
    pts = []
    for t, v in enumerate(values):
        if v is None or not np.isfinite(v):
            continue
        x = x0 + (t / max(n - 1, 1)) * w
        y = y0 + h - (v - lo) / (hi - lo) * h
        pts.append(f"{x:.2f},{y:.2f}")
    if not pts:
        return ""
    return (f'<polyline fill="none" stroke="{color}" stroke-width="{width}" '
            f'points="{" ".join(pts)}"/>')


def _range(arrays):
    vals = np.concatenate([np.asarray(a, dtype=float)[np.isfinite(a)] for a in arrays])
    lo, hi = float(vals.min()), float(vals.max())
    if hi == lo:
        lo, hi = lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def render_chart_svg(
    prices: np.ndarray,
    lines: Mapping[str, np.ndarray] | None = None,
    equity: np.ndarray | None = None,
    entries: Sequence[int] = (),
    exits: Sequence[int] = (),
    title: str = "",
    width: int = 900,
    height: int = 560,
) -> str:
    """Static two-panel chart: price with indicator lines and trade markers on
    top, equity below."""
    lines = dict(lines or {})
    prices = np.asarray(prices, dtype=float)
    n = prices.size
    margin = 50
    top_h = int((height - 3 * margin) * (0.65 if equity is not None else 1.0))
    pw = width - 2 * margin
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{margin}" y="24" font-family="sans-serif" font-size="14">{_escape(title)}</text>',
    ]
    lo, hi = _range([prices, *lines.values()])
    out.append(_axes(margin, margin, pw, top_h, lo, hi))
    out.append(_polyline(prices, margin, margin, pw, top_h, lo, hi, n, "#333333"))
    for i, (name, vals) in enumerate(lines.items()):
        color = _PALETTE[i % len(_PALETTE)]
        out.append(_polyline(vals, margin, margin, pw, top_h, lo, hi, n, color))
        out.append(f'<text x="{margin + 8 + 110 * i}" y="{margin + 14}" font-family="sans-serif" '
                   f'font-size="11" fill="{color}">{_escape(name)}</text>')
    for idx, color, mark in [(entries, "#2ca02c", "▲"), (exits, "#d62728", "▼")]:
        for t in idx:
            x = margin + (t / max(n - 1, 1)) * pw
            y = margin + top_h - (prices[t] - lo) / (hi - lo) * top_h
            out.append(f'<text x="{x:.2f}" y="{y:.2f}" font-size="9" fill="{color}" '
                       f'text-anchor="middle">{mark}</text>')
    if equity is not None:
        y0 = 2 * margin + top_h
        eh = height - y0 - margin
        elo, ehi = _range([equity])
        out.append(_axes(margin, y0, pw, eh, elo, ehi))
        out.append(_polyline(equity, margin, y0, pw, eh, elo, ehi, n, "#d62728"))
        out.append(f'<text x="{margin + 8}" y="{y0 + 14}" font-family="sans-serif" '
                   f'font-size="11" fill="#d62728">equity</text>')
    out.append("</svg>")
    return "\n".join(s for s in out if s) + "\n"


def _axes(x0, y0, w, h, lo, hi) -> str:
    parts = [f'<rect x="{x0}" y="{y0}" width="{w}" height="{h}" fill="none" stroke="#999999"/>']
    for frac in (0.0, 0.5, 1.0):
        v = lo + frac * (hi - lo)
        y = y0 + h - frac * h
        parts.append(f'<text x="{x0 - 4}" y="{y + 4:.2f}" font-family="sans-serif" font-size="10" '
                     f'text-anchor="end">{fmt_number(round(v, 4))}</text>')
    return "\n".join(parts)


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
