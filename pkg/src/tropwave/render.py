"""Deterministic renderers: SVG for planar scenes, OBJ meshes for n=3."""

from __future__ import annotations

from .scalars import rat_str
from .subdivision import RenderComplex

VIEWBOX = 1024
MARGIN = 64

_AXIS_NAMES = "xyz"


def format_monomial(q, a) -> str:
    """Human-readable linear form, e.g. '2x', 'x + 2/15', '1/3'."""
    terms = []
    for i, k in enumerate(q):
        k = int(k)
        if k == 0:
            continue
        name = _AXIS_NAMES[i]
        if k == 1:
            terms.append(name)
        elif k == -1:
            terms.append(f"-{name}")
        else:
            terms.append(f"{k}{name}")
    if a != 0 or not terms:
        s = rat_str(a)
        terms.append(s)
    out = terms[0]
    for t in terms[1:]:
        if t.startswith("-"):
            out += f" - {t[1:]}"
        else:
            out += f" + {t}"
    return out


def _fit_transform(domain_vertices):
    xs = [float(v[0]) for v in domain_vertices]
    ys = [float(v[1]) for v in domain_vertices]
    lo = (min(xs), min(ys))
    span = max(max(xs) - lo[0], max(ys) - lo[1]) or 1.0
    scale = (VIEWBOX - 2 * MARGIN) / span

    def tx(p):
        x = MARGIN + (float(p[0]) - lo[0]) * scale
        y = VIEWBOX - MARGIN - (float(p[1]) - lo[1]) * scale
        return x, y

    return tx


def render_svg(complex_: RenderComplex, points=(), labels=True, style=None) -> str:
    """SVG document: dashed domain boundary, solid corner locus, point dots.

    Output is byte-deterministic for a fixed input.
    """
    if complex_.dim != 2:
        raise ValueError("SVG rendering is for planar complexes")
    tx = _fit_transform(complex_.domain_vertices)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {VIEWBOX} {VIEWBOX}">',
        f'<rect width="{VIEWBOX}" height="{VIEWBOX}" fill="white"/>',
    ]
    for seg in complex_.segments:
        (x1, y1), (x2, y2) = tx(seg.a), tx(seg.b)
        if seg.boundary:
            parts.append(
                f'<line x1="{x1:.6f}" y1="{y1:.6f}" x2="{x2:.6f}" y2="{y2:.6f}" '
                f'stroke="black" stroke-width="2" stroke-dasharray="12 8"/>'
            )
        else:
            parts.append(
                f'<line x1="{x1:.6f}" y1="{y1:.6f}" x2="{x2:.6f}" y2="{y2:.6f}" '
                f'stroke="black" stroke-width="4"/>'
            )
    if labels:
        for q, _poly, anchor in complex_.regions:
            x, y = tx(anchor)
            label = format_monomial(q, _coeff_for_label(complex_, q))
            parts.append(
                f'<text x="{x:.6f}" y="{y:.6f}" font-size="28" '
                f'text-anchor="middle" fill="#555">{label}</text>'
            )
    for p in points:
        x, y = tx(p)
        parts.append(f'<circle cx="{x:.6f}" cy="{y:.6f}" r="9" fill="black"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _coeff_for_label(complex_, q):
    series = getattr(complex_, "series", None)
    return series.coefficient(q) if series is not None else 0


def render_obj(complex_: RenderComplex) -> str:
    """Wavefront OBJ mesh of the corner-locus facets (n=3)."""
    if complex_.dim != 3:
        raise ValueError("OBJ rendering is for spatial complexes")
    vert_ids = {}
    verts = []
    faces = []
    for facet in sorted(complex_.facets, key=lambda f: f.labels):
        ids = []
        for p in facet.points:
            key = tuple(p)
            if key not in vert_ids:
                vert_ids[key] = len(verts) + 1
                verts.append(key)
            ids.append(vert_ids[key])
        faces.append(ids)
    lines = ["# corner locus mesh"]
    for v in verts:
        lines.append("v " + " ".join(f"{float(x):.9f}" for x in v))
    for ids in faces:
        lines.append("f " + " ".join(str(i) for i in ids))
    return "\n".join(lines) + "\n"
