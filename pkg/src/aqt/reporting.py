"""Deterministic report, CSV, and SVG emission.

report.json must be byte-identical across repeated runs of the same config
and seed, so everything time-dependent goes to a sidecar file and all JSON
is dumped with sorted keys and repr-stable floats.
"""

import hashlib
import json
import os
import time


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def config_hash(config):
    return hashlib.sha256(
        json.dumps(config, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()


def running_slopes(t_values, values):
    """Slope of the log-log fit restricted to the first k points, k = 2..n."""
    from .numerics import loglog_slope
    out = [None]
    for k in range(2, len(t_values) + 1):
        vals = [max(v, 1e-300) for v in values[:k]]
        out.append(loglog_slope(t_values[:k], vals)[0])
    return out


def write_series_csv(path, series):
    slopes = running_slopes(list(series.T_values), list(series.values))
    lines = ["T,value,slope_running"]
    for t, v, sl in zip(series.T_values, series.values, slopes):
        lines.append(f"{float(t):.17g},{float(v):.17g}," +
                     ("" if sl is None else f"{sl:.17g}"))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_series_svg(path, series, width=640, height=420):
    """Log-log line plot of a convergence series, no plotting dependency."""
    import math
    ts = [float(t) for t in series.T_values]
    vs = [max(float(v), 1e-16) for v in series.values]
    lx = [math.log10(t) for t in ts]
    ly = [math.log10(v) for v in vs]
    pad = 50
    x0, x1 = min(lx), max(lx)
    y0, y1 = min(ly), max(ly)
    sx = (width - 2 * pad) / max(x1 - x0, 1e-12)
    sy = (height - 2 * pad) / max(y1 - y0, 1e-12)
    pts = " ".join(f"{pad + (x - x0) * sx:.1f},{height - pad - (y - y0) * sy:.1f}"
                   for x, y in zip(lx, ly))
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">\n'
        f'<rect width="{width}" height="{height}" fill="white"/>\n'
        f'<polyline points="{pts}" fill="none" stroke="#2060c0" stroke-width="2"/>\n'
        + "".join(f'<circle cx="{pad + (x - x0) * sx:.1f}" '
                  f'cy="{height - pad - (y - y0) * sy:.1f}" r="3" fill="#2060c0"/>\n'
                  for x, y in zip(lx, ly))
        + f'<text x="{pad}" y="{height - 12}" font-size="12">log10 T</text>\n'
        f'<text x="8" y="{pad - 18}" font-size="12">{series.label} '
        f'(slope {series.slope:.3f}, {series.verdict})</text>\n'
        "</svg>\n")
    with open(path, "w", newline="\n") as fh:
        fh.write(svg)


def write_outputs(outdir, report, series_map, emit_plots=False, wall_time=None):
    os.makedirs(outdir, exist_ok=True)
    with open(os.path.join(outdir, "report.json"), "w", newline="\n") as fh:
        fh.write(canonical_json(report))
    for name, series in series_map.items():
        write_series_csv(os.path.join(outdir, f"{name}.csv"), series)
        if emit_plots:
            write_series_svg(os.path.join(outdir, f"{name}.svg"), series)
    meta = {"wall_time_s": wall_time, "written_at": time.strftime("%Y-%m-%dT%H:%M:%S")}
    with open(os.path.join(outdir, "run_meta.json"), "w", newline="\n") as fh:
        fh.write(canonical_json(meta))
