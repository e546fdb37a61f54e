"""CSV tables and a minimal log-scale SVG line chart."""

import csv
import io
import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

PALETTE = ("#d95f02", "#7570b3", "#1b9e77", "#e7298a", "#66a61e", "#e6ab02", "#a6761d")


def format_cell(value):
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.15g}"
    return str(value)


@dataclass
class CsvTable:
    header: list
    rows: list = field(default_factory=list)

    def add(self, *values):
        if len(values) != len(self.header):
            raise ValueError(f"row has {len(values)} cells, header has {len(self.header)}")
        self.rows.append(list(values))

    def column(self, name):
        i = self.header.index(name)
        return [r[i] for r in self.rows]

    def render(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([format_cell(v) for v in row])
        return buf.getvalue()


def render_svg(table, x, y, group, title="", width=640, height=420):
    """One polyline per distinct value of ``group``; y on a log10 axis.

    Non-finite or non-positive y values are skipped.
    """
    series = {}
    xi, yi, gi = (table.header.index(c) for c in (x, y, group))
    for row in table.rows:
        xv, yv = row[xi], row[yi]
        if not isinstance(yv, (int, float)) or not (yv > 0 and math.isfinite(yv)):
            continue
        series.setdefault(str(row[gi]), []).append((float(xv), math.log10(yv)))

    pad_l, pad_r, pad_t, pad_b = 70, 120, 40, 50
    pts = [p for s in series.values() for p in s]
    if pts:
        x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
        y0, y1 = math.floor(min(p[1] for p in pts)), math.ceil(max(p[1] for p in pts))
    else:
        x0, x1, y0, y1 = 0.0, 1.0, 0.0, 1.0
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def sx(v):
        return pad_l + (v - x0) / (x1 - x0) * (width - pad_l - pad_r)

    def sy(v):
        return height - pad_b - (v - y0) / (y1 - y0) * (height - pad_t - pad_b)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-size="14">'
        f"{escape(title)}</text>",
        f'<line x1="{pad_l}" y1="{height - pad_b}" x2="{width - pad_r}" '
        f'y2="{height - pad_b}" stroke="black"/>',
        f'<line x1="{pad_l}" y1="{pad_t}" x2="{pad_l}" y2="{height - pad_b}" stroke="black"/>',
        f'<text x="{(pad_l + width - pad_r) / 2:.1f}" y="{height - 12}" '
        f'text-anchor="middle" font-size="12">{escape(x)}</text>',
        f'<text x="16" y="{(pad_t + height - pad_b) / 2:.1f}" font-size="12" '
        f'transform="rotate(-90 16 {(pad_t + height - pad_b) / 2:.1f})" '
        f'text-anchor="middle">{escape(y)} (log scale)</text>',
    ]
    for e in range(int(y0), int(y1) + 1):
        out.append(
            f'<text x="{pad_l - 6}" y="{sy(e) + 4:.1f}" text-anchor="end" '
            f'font-size="11">1e{e}</text>'
        )
    for i, (name, points) in enumerate(series.items()):
        colour = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in points)
        out.append(
            f'<polyline fill="none" stroke="{colour}" stroke-width="2" '
            f'data-series="{escape(name)}" points="{coords}"/>'
        )
        ly = pad_t + 16 * i
        out.append(
            f'<text x="{width - pad_r + 8}" y="{ly + 4}" font-size="11" '
            f'fill="{colour}">{escape(name)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_outputs(table, csv_path, svg_path=None, svg_axes=None, title=""):
    """Write the CSV and, if asked, an SVG chart.

    ``svg_axes`` is ``(x_column, y_column, group_column)``. ``OSError`` is
    re-raised with the offending path in the message.
    """
    write_text(csv_path, table.render())
    if svg_path is not None:
        if svg_axes is None:
            raise ValueError("svg_axes is required when svg_path is given")
        write_text(svg_path, render_svg(table, *svg_axes, title=title))


def write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
