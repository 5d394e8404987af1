"""Self-contained HTML reports: inline SVG histograms and sweep heatmaps.

The input is the JSON report bundle produced by the analyze command (schema
``clex-report/1``); the output is a single HTML file with no external assets.
"""

from __future__ import annotations

import html
from typing import Mapping

from .errors import ValidationError

__all__ = ["BUNDLE_SCHEMA", "render_report"]

BUNDLE_SCHEMA = "clex-report/1"

_COLORS = {"changed": "#c0392b", "unchanged": "#2d6a9f"}

_CSS = """
body { font-family: Georgia, serif; margin: 2rem auto; max-width: 60rem; color: #222; }
h1 { border-bottom: 2px solid #444; padding-bottom: .3rem; }
h2 { margin-top: 2.2rem; }
figure { margin: 1rem 0; }
figcaption { font-size: .85rem; color: #555; margin-top: .3rem; }
table.metrics, table.heatmap { border-collapse: collapse; margin: .8rem 0; }
table.metrics td, table.metrics th, table.heatmap td, table.heatmap th {
  border: 1px solid #bbb; padding: .25rem .6rem; text-align: right; }
table.metrics th, table.heatmap th { background: #f0f0f0; }
.legend span { display: inline-block; margin-right: 1.2rem; font-size: .85rem; }
.swatch { display: inline-block; width: .8rem; height: .8rem; margin-right: .3rem; }
"""


def _svg_histogram(distributions: Mapping[str, Mapping]) -> str:
    """Paired histogram with dashed group means and shaded 95% CI bands."""
    width, height = 640, 260
    left, right, top, bottom = 45, 15, 10, 30
    plot_w, plot_h = width - left - right, height - top - bottom
    peak = max(
        (d for g in distributions.values() for d in g["density"]),
        default=1.0,
    )
    peak = peak or 1.0

    def x_of(v: float) -> float:
        return left + v * plot_w

    def y_of(density: float) -> float:
        return top + plot_h * (1.0 - density / peak)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]
    # CI bands behind everything else
    for group, summary in distributions.items():
        lo, hi = summary["ci95"]
        lo, hi = max(0.0, lo), min(1.0, hi)
        parts.append(
            f'<rect x="{x_of(lo):.2f}" y="{top}" width="{max(0.0, x_of(hi) - x_of(lo)):.2f}" '
            f'height="{plot_h}" fill="{_COLORS[group]}" opacity="0.12"/>'
        )
    for group, summary in distributions.items():
        edges, density = summary["bin_edges"], summary["density"]
        for i, d in enumerate(density):
            if d <= 0:
                continue
            x0, x1 = x_of(edges[i]), x_of(edges[i + 1])
            parts.append(
                f'<rect x="{x0:.2f}" y="{y_of(d):.2f}" width="{x1 - x0:.2f}" '
                f'height="{top + plot_h - y_of(d):.2f}" fill="{_COLORS[group]}" opacity="0.45"/>'
            )
        mx = x_of(min(1.0, max(0.0, summary["mean"])))
        parts.append(
            f'<line x1="{mx:.2f}" y1="{top}" x2="{mx:.2f}" y2="{top + plot_h}" '
            f'stroke="{_COLORS[group]}" stroke-width="1.5" stroke-dasharray="6 3"/>'
        )
    # axes
    parts.append(
        f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" y2="{top + plot_h}" '
        f'stroke="#333"/>'
    )
    parts.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" stroke="#333"/>')
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        tx = x_of(tick)
        parts.append(
            f'<line x1="{tx:.2f}" y1="{top + plot_h}" x2="{tx:.2f}" y2="{top + plot_h + 4}" stroke="#333"/>'
        )
        parts.append(
            f'<text x="{tx:.2f}" y="{top + plot_h + 16}" font-size="10" text-anchor="middle">{tick:g}</text>'
        )
    parts.append(
        f'<text x="{left + plot_w / 2:.0f}" y="{height - 4}" font-size="11" '
        f'text-anchor="middle">cosine similarity</text>'
    )
    parts.append("</svg>")
    return "".join(parts)


def _heatmap_table(cells: list[Mapping], metric: str) -> str:
    dims = sorted({c["dim"] for c in cells})
    epochs = sorted({c["epochs"] for c in cells})
    values = {(c["dim"], c["epochs"]): c[metric] for c in cells}
    lo = min(values.values())
    hi = max(values.values())
    span = (hi - lo) or 1.0
    rows = [f"<tr><th>dim \\ epochs</th>{''.join(f'<th>{e}</th>' for e in epochs)}</tr>"]
    for d in dims:
        tds = []
        for e in epochs:
            v = values.get((d, e))
            if v is None:
                tds.append("<td></td>")
                continue
            alpha = 0.12 + 0.55 * (v - lo) / span
            tds.append(f'<td style="background: rgba(45,106,159,{alpha:.2f})">{v:.3f}</td>')
        rows.append(f"<tr><th>{d}</th>{''.join(tds)}</tr>")
    return f'<table class="heatmap"><caption>{html.escape(metric)}</caption>{"".join(rows)}</table>'


def _metrics_table(metrics: Mapping) -> str:
    def star(value: float, starred: bool) -> str:
        return f"{value:.3f}{'*' if starred else ''}"

    return (
        '<table class="metrics">'
        "<tr><th>&delta;&mu;</th><th>t</th><th>p(t)</th><th>&rho;</th><th>p(&rho;)</th>"
        "<th>n changed</th><th>n unchanged</th></tr>"
        f"<tr><td>{star(metrics['delta_mu'], metrics['delta_mu_starred'])}</td>"
        f"<td>{metrics['t_statistic']:.3f}</td><td>{metrics['t_p_value']:.3g}</td>"
        f"<td>{star(metrics['rho'], metrics['rho_starred'])}</td>"
        f"<td>{metrics['rho_p_value']:.3g}</td>"
        f"<td>{metrics['n_changed']}</td><td>{metrics['n_unchanged']}</td></tr></table>"
    )


def render_report(bundle: Mapping) -> str:
    """Render the report bundle as one self-contained HTML document."""
    if not isinstance(bundle, Mapping) or bundle.get("schema") != BUNDLE_SCHEMA:
        raise ValidationError(f"malformed bundle: expected schema {BUNDLE_SCHEMA!r}")
    models = bundle.get("models", {})
    sweeps = bundle.get("sweeps", [])
    if not models and not sweeps:
        raise ValidationError("empty bundle: no models and no sweeps")

    out = [
        "<!DOCTYPE html><html><head><meta charset='utf-8'>",
        "<title>Semantic change report</title>",
        f"<style>{_CSS}</style></head><body>",
        "<h1>Semantic change report</h1>",
        '<p class="legend">'
        f'<span><span class="swatch" style="background:{_COLORS["changed"]}"></span>changed</span>'
        f'<span><span class="swatch" style="background:{_COLORS["unchanged"]}"></span>unchanged</span>'
        "</p>",
    ]
    for model, transitions in models.items():
        out.append(f"<h2>{html.escape(model)}</h2>")
        for transition, block in transitions.items():
            out.append(f"<h3>{html.escape(transition)}</h3>")
            if "metrics" in block:
                out.append(_metrics_table(block["metrics"]))
            if "distributions" in block:
                out.append("<figure>")
                out.append(_svg_histogram(block["distributions"]))
                out.append(
                    "<figcaption>Cosine similarity distributions; dashed lines mark group "
                    "means, shaded bands their 95% confidence intervals.</figcaption></figure>"
                )
        comparison = bundle.get("comparisons", {}).get(model)
        if comparison:
            out.append(
                "<p>Directional expectations "
                f"({html.escape(str(comparison['first']))} vs {html.escape(str(comparison['second']))}): "
                f"&delta;&mu; larger: <b>{comparison['delta_mu_larger_in_first']}</b>; "
                f"&rho; more negative: <b>{comparison['rho_more_negative_in_first']}</b>; "
                f"overall mean lower: <b>{comparison['overall_mean_lower_in_first']}</b>.</p>"
            )
    for sweep in sweeps:
        out.append(f"<h2>Sweep: {html.escape(str(sweep.get('strategy', '?')))}</h2>")
        cells = sweep.get("cells", [])
        if cells:
            out.append(_heatmap_table(cells, "delta_mu"))
            out.append(_heatmap_table(cells, "rho"))
    out.append("</body></html>")
    return "".join(out)
