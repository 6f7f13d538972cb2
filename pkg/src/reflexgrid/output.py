"""Trace serialization: CSV, metrics summaries, and an SVG chart.

The CSV schema is one header row ``t,v_source,v_load,i_total,n_flex_on``
followed by one row per step, with optional ``shift_<i>`` columns when
shifts were recorded.  Floats render as their shortest round-trip
representation, so identical runs serialize byte-identically.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .agents import Band
from .engine import Metrics, Trace

_BASE_COLUMNS = ("t", "v_source", "v_load", "i_total", "n_flex_on")


def _fmt(x: float) -> str:
    return repr(float(x))


def trace_to_csv(trace: Trace, include_shifts: bool = False) -> str:
    """Render the trace as CSV text (LF line endings)."""
    out = io.StringIO()
    header = list(_BASE_COLUMNS)
    shifts = trace.shifts if include_shifts else None
    if include_shifts:
        if trace.shifts is None:
            raise ValueError("trace has no recorded shifts")
        header += [f"shift_{i}" for i in range(trace.shifts.shape[1])]
    out.write(",".join(header) + "\n")
    for t in range(trace.horizon):
        row = [
            str(t),
            _fmt(trace.v_source[t]),
            _fmt(trace.v_load[t]),
            _fmt(trace.i_total[t]),
            str(int(trace.n_flex_on[t])),
        ]
        if shifts is not None:
            row += [str(int(s)) for s in shifts[t]]
        out.write(",".join(row) + "\n")
    return out.getvalue()


def write_trace_csv(trace: Trace, path: str | Path, include_shifts: bool = False) -> None:
    Path(path).write_text(trace_to_csv(trace, include_shifts), encoding="utf-8", newline="\n")


def read_trace_csv(path: str | Path) -> Trace:
    """Parse a trace CSV back into arrays; raises ValueError on bad schema."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError("empty CSV file")
        if tuple(header[: len(_BASE_COLUMNS)]) != _BASE_COLUMNS:
            raise ValueError(
                f"bad CSV header: expected columns {','.join(_BASE_COLUMNS)}, got {','.join(header)}"
            )
        shift_cols = header[len(_BASE_COLUMNS) :]
        for i, name in enumerate(shift_cols):
            if name != f"shift_{i}":
                raise ValueError(f"bad shift column name {name!r}")
        rows = list(reader)
    if not rows:
        raise ValueError("CSV contains no data rows")
    width = len(header)
    v_source = np.empty(len(rows))
    v_load = np.empty(len(rows))
    i_total = np.empty(len(rows))
    n_flex = np.empty(len(rows), dtype=np.int64)
    shifts = np.empty((len(rows), len(shift_cols)), dtype=np.int32) if shift_cols else None
    for t, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(f"row {t + 1}: expected {width} fields, got {len(row)}")
        try:
            if int(row[0]) != t:
                raise ValueError(f"row {t + 1}: step index {row[0]} out of order")
            v_source[t] = float(row[1])
            v_load[t] = float(row[2])
            i_total[t] = float(row[3])
            n_flex[t] = int(row[4])
            if shifts is not None:
                shifts[t] = [int(x) for x in row[5:]]
        except ValueError as exc:
            raise ValueError(f"row {t + 1}: {exc}")
    return Trace(v_source, v_load, i_total, n_flex, shifts)


def metrics_summary(metrics: Metrics, band: Band, window: tuple[int, int]) -> str:
    """Deterministic text block; identical metrics render identically."""
    return (
        f"window: [{window[0]}, {window[1]})\n"
        f"band: [{_fmt(band.v_low)}, {_fmt(band.v_high)}]\n"
        f"outside_band_fraction: {_fmt(metrics.outside_band_fraction)}\n"
        f"band_crossings: {metrics.band_crossings}\n"
        f"max_overshoot: {_fmt(metrics.max_overshoot)}\n"
        f"max_undershoot: {_fmt(metrics.max_undershoot)}\n"
        f"settled: {'true' if metrics.settled else 'false'}\n"
    )


# --- SVG chart -------------------------------------------------------------

_SVG_W, _SVG_H = 1000, 400
_MARGIN = 40


def _polyline(points: list[tuple[float, float]], color: str, width: str = "1") -> str:
    coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in points)
    return f'<polyline fill="none" stroke="{color}" stroke-width="{width}" points="{coords}"/>'


def trace_to_svg(
    trace: Trace,
    band: Band,
    disturbance_window: tuple[int, int] | None = None,
) -> str:
    """A fixed 1000x400 chart: load voltage, band edges, sag shading."""
    horizon = trace.horizon
    v = trace.v_load
    lo = min(float(v.min()), band.v_low)
    hi = max(float(v.max()), band.v_high)
    pad = 0.05 * (hi - lo) or 1e-6
    lo, hi = lo - pad, hi + pad

    def sx(t: float) -> float:
        return _MARGIN + (t / max(horizon - 1, 1)) * (_SVG_W - 2 * _MARGIN)

    def sy(val: float) -> float:
        return _SVG_H - _MARGIN - ((val - lo) / (hi - lo)) * (_SVG_H - 2 * _MARGIN)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" height="{_SVG_H}" '
        f'viewBox="0 0 {_SVG_W} {_SVG_H}">',
        f'<rect x="0" y="0" width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
    ]
    if disturbance_window is not None and disturbance_window[1] > disturbance_window[0]:
        x0, x1 = sx(disturbance_window[0]), sx(disturbance_window[1] - 1)
        parts.append(
            f'<rect x="{x0:.2f}" y="{_MARGIN}" width="{x1 - x0:.2f}" '
            f'height="{_SVG_H - 2 * _MARGIN}" fill="#fde2c8"/>'
        )
    # decimate long traces so the file stays small; plotting is a view, not data
    stride = max(1, horizon // (_SVG_W * 4))
    ts = list(range(0, horizon, stride))
    if ts[-1] != horizon - 1:
        ts.append(horizon - 1)
    parts.append(_polyline([(sx(t), sy(band.v_low)) for t in (0, horizon - 1)], "#888888"))
    parts.append(_polyline([(sx(t), sy(band.v_high)) for t in (0, horizon - 1)], "#888888"))
    parts.append(_polyline([(sx(t), sy(float(v[t]))) for t in ts], "#1f5fa8", "1.5"))
    parts.append(
        f'<text x="{_MARGIN}" y="{_MARGIN - 10}" font-family="monospace" font-size="12">'
        f"load voltage, band [{band.v_low:.4f}, {band.v_high:.4f}]</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_trace_svg(
    trace: Trace,
    band: Band,
    path: str | Path,
    disturbance_window: tuple[int, int] | None = None,
) -> None:
    Path(path).write_text(trace_to_svg(trace, band, disturbance_window), encoding="utf-8")
