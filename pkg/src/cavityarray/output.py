"""CSV and SVG emission with atomic file replacement."""

import csv
import io
import os
import tempfile
from pathlib import Path

import numpy as np

SIG_DIGITS = 12


def fmt(value):
    """Serialize one cell: 12 significant digits for numbers, text as is."""
    if isinstance(value, (str, bytes)):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.*g" % (SIG_DIGITS, float(value))


def csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def atomic_write(path, text):
    """Write ``text`` to a temp file beside ``path`` and rename it into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix="." + path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def svg_line_chart(x, y, title="", xlabel="", ylabel="", width=800, height=500):
    """Single-polyline chart on linear axes in a fixed viewport."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    left, right, top, bottom = 80, 30, 50, 60
    pw, ph = width - left - right, height - top - bottom
    x0, x1 = float(x.min()), float(x.max())
    y0, y1 = min(0.0, float(y.min())), max(float(y.max()), 1e-300)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def px(v):
        return left + (v - x0) / (x1 - x0) * pw

    def py(v):
        return top + ph - (v - y0) / (y1 - y0) * ph

    pts = " ".join("%.2f,%.2f" % (px(a), py(b)) for a, b in zip(x, y))
    ticks = []
    for frac in np.linspace(0.0, 1.0, 5):
        xv = x0 + frac * (x1 - x0)
        yv = y0 + frac * (y1 - y0)
        ticks.append('<text x="%.2f" y="%d" font-size="11" text-anchor="middle">%s</text>'
                     % (px(xv), top + ph + 18, "%.6g" % xv))
        ticks.append('<text x="%d" y="%.2f" font-size="11" text-anchor="end">%s</text>'
                     % (left - 6, py(yv) + 4, "%.4g" % yv))
    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
        'viewBox="0 0 %d %d">' % (width, height, width, height),
        '<rect width="100%" height="100%" fill="white"/>',
        '<rect x="%d" y="%d" width="%d" height="%d" fill="none" stroke="black"/>'
        % (left, top, pw, ph),
        '<polyline fill="none" stroke="#1f5fbf" stroke-width="1.5" points="%s"/>' % pts,
        *ticks,
        '<text x="%d" y="28" font-size="14" text-anchor="middle">%s</text>'
        % (width // 2, _escape(title)),
        '<text x="%d" y="%d" font-size="12" text-anchor="middle">%s</text>'
        % (left + pw // 2, height - 18, _escape(xlabel)),
        '<text x="18" y="%d" font-size="12" text-anchor="middle" '
        'transform="rotate(-90 18 %d)">%s</text>'
        % (top + ph // 2, top + ph // 2, _escape(ylabel)),
        "</svg>",
    ]
    return "\n".join(lines) + "\n"


def _escape(text):
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;"))
