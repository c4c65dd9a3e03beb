"""Linearity regions, dual cells, and mild-singularity classification.

The corner locus of a series is recovered from the exact region complex:
each active monomial's closed region is carved out of the domain by the
constraints against the other monomials.  Explicit monomials are clipped
directly; implicit defaults are discovered lazily by certifying every
region vertex against the full (infinite) default family, which is sound
because an affine violator of a convex region must already violate at a
vertex.  Cells are deduplicated by their attaining exponent sets.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import geometry as geo
from .domain import lattice_free_except_vertices
from .scalars import RAT_ZERO, rat

_REGION_ITER_CAP = 1000


class SubdivisionError(ValueError):
    pass


@dataclass(frozen=True)
class DualCell:
    """A face of the complex with the exponents minimal along it.

    exponents: the attaining set at the witness; dim: dimension of the
    geometric face; face_points: its vertices; witness: an exact
    relative-interior point of the face.
    """

    exponents: frozenset
    dim: int
    face_points: tuple
    witness: tuple

    def sort_key(self):
        return (self.dim, tuple(sorted(self.exponents)))


@dataclass(frozen=True)
class CellMildness:
    cell: DualCell
    mild: bool
    offender: tuple | None


@dataclass(frozen=True)
class MildnessReport:
    entries: tuple
    mild: bool

    @property
    def first_offender(self):
        for e in self.entries:
            if not e.mild:
                return e
        return None


@dataclass
class RegionComplex:
    series: object
    geometry: object
    regions: dict          # q -> CCW polygon (n=2) or PolytopeGeometry (n=3)
    cells: tuple           # DualCell, deduplicated by exponent set
    all_vertices: tuple    # every 0-face of the region decomposition


def _domain_polygon(geom):
    return geo.order_polygon_ccw(geom.vertices)


def _polygon_interior_point(poly):
    m = len(poly)
    return tuple(sum(p[i] for p in poly) / rat(m) for i in range(2))


def _midpoint(a, b):
    return tuple((x + y) / rat(2) for x, y in zip(a, b))


def region_of_monomial(f, q0, within=None):
    """Closed region where the q0 monomial attains the minimum, or None.

    Returns a PolytopeGeometry for regions with non-empty interior; None
    when the monomial is never strictly minimal inside the window.
    """
    dom = f.domain
    if not dom.exact:
        raise SubdivisionError("exact regions require a polytope domain")
    geom = within if within is not None else dom.geometry
    q0 = tuple(int(x) for x in q0)
    if dom.dim == 2:
        poly = _region_polygon_2d(f, q0, geom)
        if poly is None:
            return None
        return geo.polygon_to_geometry(poly)
    if dom.dim == 3:
        return _region_geometry_3d(f, q0, geom)
    raise SubdivisionError("regions supported in dimensions 2 and 3")


def _region_polygon_2d(f, q0, geom):
    dom = f.domain
    a0 = f.coefficient(q0)
    poly = _domain_polygon(geom)
    for q, a in f.explicit_items():
        if q == q0:
            continue
        poly = geo.clip_polygon(poly, geo.vec_sub(q, q0), a0 - a)
        if len(poly) < 3:
            return None
    if geo.polygon_area(poly) == 0:
        return None
    if not f.use_defaults:
        return poly
    for _ in range(_REGION_ITER_CAP):
        cut = None
        for v in poly:
            val0 = geo.dot(q0, v) + a0
            if dom.on_boundary(v):
                if val0 > 0:
                    vanishers = f._boundary_vanishers(v, exclude=q0)
                    qstar = vanishers[0]
                    cut = (qstar, f.coefficient(qstar))
                    break
            else:
                val, args = f.value_argmin(v)
                if val < val0:
                    qstar = args[0]
                    cut = (qstar, f.coefficient(qstar))
                    break
        if cut is None:
            return poly if len(poly) >= 3 and geo.polygon_area(poly) != 0 else None
        qstar, astar = cut
        poly = geo.clip_polygon(poly, geo.vec_sub(qstar, q0), a0 - astar)
        if len(poly) < 3 or geo.polygon_area(poly) == 0:
            return None
    raise geo.ResourceCapError("region refinement exceeded iteration cap")


def _region_geometry_3d(f, q0, geom):
    dom = f.domain
    a0 = f.coefficient(q0)
    halfspaces = list(geom.halfspaces)
    for q, a in f.explicit_items():
        if q == q0:
            continue
        halfspaces.append(geo.reduced_halfspace(geo.vec_sub(q, q0), a0 - a))
    try:
        gg = geo.halfspaces_to_geometry(halfspaces, 3)
    except geo.DegenerateDomainError:
        return None
    if not f.use_defaults:
        return gg
    for _ in range(_REGION_ITER_CAP):
        cut = None
        for v in gg.vertices:
            val0 = geo.dot(q0, v) + a0
            if dom.on_boundary(v):
                if val0 > 0:
                    qstar = f._boundary_vanishers(v, exclude=q0)[0]
                    cut = (qstar, f.coefficient(qstar))
                    break
            else:
                val, args = f.value_argmin(v)
                if val < val0:
                    qstar = args[0]
                    cut = (qstar, f.coefficient(qstar))
                    break
        if cut is None:
            return gg
        qstar, astar = cut
        halfspaces = [
            h for i, h in enumerate(gg.halfspaces) if not gg.redundant[i]
        ]
        halfspaces.append(geo.reduced_halfspace(geo.vec_sub(qstar, q0), a0 - astar))
        try:
            gg = geo.halfspaces_to_geometry(halfspaces, 3)
        except geo.DegenerateDomainError:
            return None
    raise geo.ResourceCapError("region refinement exceeded iteration cap")


def build_complex(f, within=None) -> RegionComplex:
    """Discover all full-dimensional regions and assemble the cell complex.

    Breadth-first from the attaining set at an interior seed: each region's
    interior faces yield witnesses whose attaining sets name the neighbor
    monomials, so the walk closes over exactly the active support.
    """
    if within is None and f._complex is not None:
        return f._complex
    dom = f.domain
    if not dom.exact:
        raise SubdivisionError("complex construction requires a polytope domain")
    geom = within if within is not None else dom.geometry
    n = dom.dim
    if n not in (2, 3):
        raise SubdivisionError("complexes supported in dimensions 2 and 3")
    seed = geom.interior_point()
    _, seed_args = f.value_argmin(seed)
    queue = list(seed_args)
    discovered = set(queue)
    regions = {}
    while queue:
        q = queue.pop(0)
        reg = None
        if n == 2:
            poly = _region_polygon_2d(f, q, geom)
            reg = poly
        else:
            reg = _region_geometry_3d(f, q, geom)
        if reg is None:
            continue
        regions[q] = reg
        for w in _neighbor_witnesses(reg, geom, n):
            if dom.on_boundary(w):
                continue
            _, bs = f.value_argmin(w)
            for b in bs:
                if b not in discovered:
                    discovered.add(b)
                    queue.append(b)
    cells, all_vertices = _assemble_cells(f, geom, regions, n)
    cx = RegionComplex(f, geom, regions, cells, all_vertices)
    if within is None:
        f._complex = cx
    return cx


def _neighbor_witnesses(reg, geom, n):
    out = []
    if n == 2:
        m = len(reg)
        for i in range(m):
            w = _midpoint(reg[i], reg[(i + 1) % m])
            if geom.boundary_tight(w):
                continue
            out.append(w)
    else:
        for face, ids, _n in geo.facet_vertex_cycles(reg):
            pts = [reg.vertices[i] for i in ids]
            w = tuple(sum(p[k] for p in pts) / rat(len(pts)) for k in range(3))
            if geom.boundary_tight(w):
                continue
            out.append(w)
    return out


def _face_centroid(pts):
    m = len(pts)
    return tuple(sum(p[k] for p in pts) / rat(m) for k in range(len(pts[0])))


def _assemble_cells(f, geom, regions, n):
    dom = f.domain
    cells_by_expo = {}
    vertex_set = {}

    def offer(expos, dim, face_points, witness):
        key = frozenset(expos)
        cur = cells_by_expo.get(key)
        if cur is None or dim > cur.dim:
            cells_by_expo[key] = DualCell(key, dim, tuple(face_points), witness)

    if n == 2:
        edge_map = {}
        for q, poly in regions.items():
            for v in poly:
                vertex_set[v] = None
            m = len(poly)
            for i in range(m):
                a, b = poly[i], poly[(i + 1) % m]
                edge_map[tuple(sorted((a, b)))] = None
            w = _polygon_interior_point(poly)
            _, args = f.value_argmin(w)
            offer(args, 2, poly, w)
        for (a, b) in edge_map:
            w = _midpoint(a, b)
            if dom.on_boundary(w):
                continue
            _, args = f.value_argmin(w)
            if len(args) >= 2:
                offer(args, 1, (a, b), w)
        for v in vertex_set:
            if dom.on_boundary(v):
                continue
            _, args = f.value_argmin(v)
            if len(args) >= 2:
                offer(args, 0, (v,), v)
    else:
        face_pool = []
        for q, gg in regions.items():
            for v in gg.vertices:
                vertex_set[v] = None
            w = gg.interior_point()
            _, args = f.value_argmin(w)
            offer(args, 3, gg.vertices, w)
            for face in gg.faces:
                if face.dim in (1, 2):
                    pts = [gg.vertices[i] for i in face.vertex_ids]
                    face_pool.append((face.dim, tuple(sorted(pts))))
        for dim, pts in dict.fromkeys(face_pool):
            w = _face_centroid(pts)
            if dom.on_boundary(w):
                continue
            _, args = f.value_argmin(w)
            if len(args) >= 2:
                offer(args, dim, pts, w)
        for v in vertex_set:
            if dom.on_boundary(v):
                continue
            _, args = f.value_argmin(v)
            if len(args) >= 2:
                offer(args, 0, (v,), v)
    cells = tuple(sorted(cells_by_expo.values(), key=DualCell.sort_key))
    return cells, tuple(sorted(vertex_set.keys()))


def corner_locus_cells(f, within=None):
    """Cells of the corner locus: faces whose attaining set has >= 2 exponents."""
    cx = build_complex(f, within=within)
    return tuple(c for c in cx.cells if len(c.exponents) >= 2)


def is_mild(f) -> MildnessReport:
    """Check that every dual cell's exponent hull is lattice-point free.

    A cell passes when conv(B) contains no lattice points besides its own
    vertices; the report carries the first offending lattice point of each
    failing cell.
    """
    entries = []
    for cell in corner_locus_cells(f):
        ok, offender = lattice_free_except_vertices(cell.exponents)
        entries.append(CellMildness(cell, ok, offender))
    return MildnessReport(tuple(entries), all(e.mild for e in entries))


# ---------------------------------------------------------------------------
# renderable extraction


@dataclass(frozen=True)
class Segment2D:
    a: tuple
    b: tuple
    labels: tuple
    boundary: bool


@dataclass(frozen=True)
class Facet3D:
    points: tuple
    labels: tuple
    boundary: bool


@dataclass(frozen=True)
class RenderComplex:
    dim: int
    segments: tuple
    facets: tuple
    regions: tuple  # (q, vertices, label point)
    domain_vertices: tuple


def extract_geometry(f) -> RenderComplex:
    """Exact renderable description: corner locus plus domain boundary."""
    cx = build_complex(f)
    dom = f.domain
    n = dom.dim
    segments = []
    facets = []
    regions = []
    if n == 2:
        for cell in cx.cells:
            if cell.dim == 1 and len(cell.exponents) >= 2:
                a, b = cell.face_points
                segments.append(Segment2D(a, b, tuple(sorted(cell.exponents)), False))
        bound = geo.order_polygon_ccw(dom.geometry.vertices)
        for i in range(len(bound)):
            segments.append(
                Segment2D(bound[i], bound[(i + 1) % len(bound)], (), True)
            )
        for q, poly in cx.regions.items():
            regions.append((q, tuple(poly), _polygon_interior_point(poly)))
    elif n == 3:
        for cell in cx.cells:
            if cell.dim == 2 and len(cell.exponents) >= 2:
                pts = list(cell.face_points)
                normal = _affine_normal_3d(pts)
                order = geo._order_facet_cycle(pts, list(range(len(pts))), normal)
                cycle = tuple(pts[i] for i in order)
                facets.append(Facet3D(cycle, tuple(sorted(cell.exponents)), False))
        for q, gg in cx.regions.items():
            regions.append((q, gg.vertices, gg.interior_point()))
    else:
        raise SubdivisionError("rendering supported in dimensions 2 and 3")
    return RenderComplex(
        n,
        tuple(segments),
        tuple(facets),
        tuple(sorted(regions, key=lambda r: r[0])),
        tuple(dom.geometry.vertices),
    )


def _affine_normal_3d(pts):
    base = pts[0]
    u = None
    for p in pts[1:]:
        if p != base:
            u = geo.vec_sub(p, base)
            break
    for p in pts[1:]:
        w = geo.vec_sub(p, base)
        c = (
            u[1] * w[2] - u[2] * w[1],
            u[2] * w[0] - u[0] * w[2],
            u[0] * w[1] - u[1] * w[0],
        )
        if any(x != 0 for x in c):
            return c
    raise SubdivisionError("degenerate facet")
