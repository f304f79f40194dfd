"""CSV and SVG emission. Output is a pure function of the inputs, byte for byte."""
import os

from .cadlag import to_csv_text
from .errors import DomainError

WIDTH, HEIGHT = 640, 400
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 30, 40
COLORS = ("#1f4e9c", "#b23a48", "#2e7d32", "#6a3d9a")


def _write(dest, text):
    if hasattr(dest, "write"):
        dest.write(text)
        return
    try:
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {os.fspath(dest)!r}: {exc.strerror or exc}") from exc


def emit_csv(path, dest):
    _write(dest, to_csv_text(path))


def _num(v):
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def svg_text(paths, y_range, title=None):
    lo, hi = float(y_range[0]), float(y_range[1])
    if not hi > lo:
        raise DomainError("SVG range needs lo < hi")
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def px(t):
        return MARGIN_L + t * pw

    def py(v):
        return MARGIN_T + (hi - v) / (hi - lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<clipPath id="plot"><rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}"/></clipPath>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if lo < 0.0 < hi:
        out.append(f'<line x1="{MARGIN_L}" y1="{_num(py(0.0))}" x2="{MARGIN_L + pw}" '
                   f'y2="{_num(py(0.0))}" stroke="#999" stroke-dasharray="4 3"/>')
    for v in (lo, hi):
        out.append(f'<text x="{MARGIN_L - 6}" y="{_num(py(v) + 4)}" font-size="11" '
                   f'text-anchor="end">{v:.4g}</text>')
    for t in (0.0, 0.5, 1.0):
        out.append(f'<text x="{_num(px(t))}" y="{HEIGHT - MARGIN_B + 16}" font-size="11" '
                   f'text-anchor="middle">{t:g}</text>')
    out.append(f'<text x="{WIDTH - MARGIN_R}" y="{MARGIN_T - 10}" font-size="11" '
               f'text-anchor="end">range [{lo:.4g}, {hi:.4g}]</text>')
    if title:
        out.append(f'<text x="{MARGIN_L}" y="{MARGIN_T - 10}" font-size="12">{_escape(title)}</text>')
    for idx, path in enumerate(paths):
        t = path.breakpoints.tolist() + [1.0]
        v = path.values.tolist()
        pts = []
        for k, val in enumerate(v):
            y = _num(py(val))
            pts.append(f"{_num(px(t[k]))},{y}")
            pts.append(f"{_num(px(t[k + 1]))},{y}")
        color = COLORS[idx % len(COLORS)]
        out.append(f'<polyline clip-path="url(#plot)" fill="none" stroke="{color}" '
                   f'stroke-width="1" points="{" ".join(pts)}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s):
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def emit_svg(paths, y_range, dest, title=None):
    _write(dest, svg_text(paths, y_range, title))
