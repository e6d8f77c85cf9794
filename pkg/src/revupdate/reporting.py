"""CSV and SVG emitters for Fisher tables, posteriors and coverage reports.

Floats are written with ``repr`` so every CSV parses back to the exact
in-memory values.
"""

from __future__ import annotations

import csv
import io
import json
from xml.sax.saxutils import escape

import numpy as np

from .coverage import CoverageReport, RankingEntry

COLOURS = ("#2ca02c", "#1f77b4", "#d62728", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2")


def _fmt(x):
    return repr(float(x))


def _write(path, text):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(text)


def _table(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


# Coverage reports


def coverage_csv(report: CoverageReport) -> str:
    rows = [(int(p), _fmt(v)) for p, v in zip(report.percentiles, report.proportions)]
    text = _table(("percentile", "proportion"), rows)
    text += f"# tail_below_5={_fmt(report.tail_below_5)}\n"
    text += f"# tail_above_95={_fmt(report.tail_above_95)}\n"
    text += f"# mad={_fmt(report.mean_abs_deviation)}\n"
    text += f"# seed={report.seed}\n"
    text += f"# num_trials={report.num_trials}\n"
    text += f"# label={json.dumps(report.label)}\n"
    text += f"# config={json.dumps(report.config, sort_keys=True)}\n"
    return text


def write_coverage_csv(report: CoverageReport, path):
    _write(path, coverage_csv(report))


def parse_coverage_csv(text: str) -> CoverageReport:
    meta = {}
    data = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key] = value
        elif line:
            data.append(line)
    rows = list(csv.reader(data))
    if rows[0] != ["percentile", "proportion"]:
        raise ValueError(f"unexpected coverage header {rows[0]}")
    body = rows[1:]
    return CoverageReport(
        label=json.loads(meta.get("label", '"coverage"')),
        percentiles=np.array([int(r[0]) for r in body]),
        proportions=np.array([float(r[1]) for r in body]),
        tail_below_5=float(meta["tail_below_5"]),
        tail_above_95=float(meta["tail_above_95"]),
        mean_abs_deviation=float(meta["mad"]),
        num_trials=int(meta["num_trials"]),
        seed=int(meta["seed"]),
        config=json.loads(meta.get("config", "{}")),
    )


def read_coverage_csv(path) -> CoverageReport:
    with open(path, encoding="utf-8") as fh:
        return parse_coverage_csv(fh.read())


def ranking_csv(entries: list[RankingEntry]) -> str:
    rows = [
        (e.rank, e.label, _fmt(e.mean_abs_deviation), _fmt(e.tail_below_5), _fmt(e.tail_above_95))
        for e in entries
    ]
    return _table(("rank", "label", "mad", "tail_below_5", "tail_above_95"), rows)


def write_ranking_csv(entries, path):
    _write(path, ranking_csv(entries))


# Curves


def fisher_table_csv(theta, analytic, oracle) -> str:
    analytic = np.asarray(analytic, dtype=float)
    oracle = np.asarray(oracle, dtype=float)
    scale = np.maximum(np.abs(analytic), np.abs(oracle))
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.where(scale > 0, np.abs(analytic - oracle) / scale, 0.0)
    rows = [tuple(_fmt(v) for v in row) for row in zip(theta, analytic, oracle, rel)]
    return _table(("theta", "h_analytic", "h_oracle", "rel_err"), rows)


def posterior_csv(post, prior) -> str:
    rows = [
        tuple(_fmt(v) for v in row)
        for row in zip(post.grid.points, prior.values, post.density, post.cdf)
    ]
    return _table(("theta", "prior", "density", "cdf"), rows)


def read_table(path) -> dict:
    """Numeric CSV table as a dict of column arrays."""
    with open(path, encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    cols = np.array(body, dtype=float).T if body else np.empty((len(header), 0))
    return dict(zip(header, cols))


# SVG


def coverage_svg(reports, title="", width=480, height=400) -> str:
    """Coverage proportion against nominal percentile, one polyline per report,
    with the perfect-coverage diagonal dotted."""
    left, right, top, bottom = 50, 20, 30 if title else 15, 45
    pw, ph = width - left - right, height - top - bottom

    def xy(pct, prop):
        return left + pw * pct / 100.0, top + ph * (1.0 - prop)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        parts.append(f'<text x="{width / 2}" y="18" text-anchor="middle">{escape(title)}</text>')
    for tick in range(0, 101, 20):
        x, y0 = xy(tick, 0.0)
        _, y1 = xy(0, tick / 100.0)
        parts.append(f'<line x1="{x}" y1="{y0}" x2="{x}" y2="{y0 + 4}" stroke="black"/>')
        parts.append(f'<text x="{x}" y="{y0 + 16}" text-anchor="middle">{tick}</text>')
        parts.append(f'<line x1="{left - 4}" y1="{y1}" x2="{left}" y2="{y1}" stroke="black"/>')
        parts.append(
            f'<text x="{left - 7}" y="{y1 + 4}" text-anchor="end">{tick / 100:.1f}</text>'
        )
    parts.append(
        f'<text x="{left + pw / 2}" y="{height - 8}" text-anchor="middle">'
        "posterior CDF percentage point</text>"
    )
    x0, y0 = xy(0, 0)
    x1, y1 = xy(100, 1)
    parts.append(
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y1}" stroke="black" stroke-dasharray="2,3"/>'
    )
    for i, rep in enumerate(reports):
        colour = COLOURS[i % len(COLOURS)]
        pts = " ".join(
            "{:.2f},{:.2f}".format(*xy(p, v)) for p, v in zip(rep.percentiles, rep.proportions)
        )
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{colour}" stroke-width="1.5"/>')
        ly = top + 14 + 14 * i
        parts.append(
            f'<line x1="{left + 8}" y1="{ly - 4}" x2="{left + 28}" y2="{ly - 4}" '
            f'stroke="{colour}" stroke-width="2"/>'
        )
        parts.append(f'<text x="{left + 32}" y="{ly}">{escape(rep.label)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def curve_svg(x, curves, xlabel="theta", title="", width=480, height=360) -> str:
    """Plain line chart of one or more named curves sharing the x values."""
    x = np.asarray(x, dtype=float)
    left, right, top, bottom = 60, 20, 30 if title else 15, 40
    pw, ph = width - left - right, height - top - bottom
    ymax = max(float(np.max(y)) for y in curves.values()) or 1.0
    xmin, xmax = float(x[0]), float(x[-1])

    def sx(v):
        return left + pw * (v - xmin) / (xmax - xmin)

    def sy(v):
        return top + ph * (1.0 - v / ymax)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
        f'<text x="{left}" y="{height - 8}">{xmin:.4g}</text>',
        f'<text x="{left + pw}" y="{height - 8}" text-anchor="end">{xmax:.4g}</text>',
        f'<text x="{left + pw / 2}" y="{height - 8}" text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="{left - 5}" y="{top + 4}" text-anchor="end">{ymax:.3g}</text>',
    ]
    if title:
        parts.append(f'<text x="{width / 2}" y="18" text-anchor="middle">{escape(title)}</text>')
    for i, (name, y) in enumerate(curves.items()):
        colour = COLOURS[i % len(COLOURS)]
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x, np.asarray(y, dtype=float)))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{colour}" stroke-width="1.5"/>')
        parts.append(
            f'<text x="{left + pw - 6}" y="{top + 14 + 14 * i}" text-anchor="end" '
            f'fill="{colour}">{escape(name)}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_coverage_svg(reports, path, title=""):
    _write(path, coverage_svg(reports, title))
