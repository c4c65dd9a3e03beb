"""Exact geometry kernel.

Rational-arithmetic primitives shared by every other module: integer
lattice enumeration, halfspace intersections with face lattices (n <= 3),
exact LP feasibility with a deterministic pivot rule, convex hulls,
polygon clipping, and areas/volumes.  All values are immutable after
construction and every operation is a pure function.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from math import gcd, isqrt

from .scalars import RAT_ZERO, as_exact, rat

#: hard cap on lattice enumerations; hitting it raises, never truncates
LATTICE_ENUM_CAP = 10**7


class GeometryError(ValueError):
    pass


class DegenerateDomainError(GeometryError):
    """Halfspace system with empty interior."""


class UnboundedDomainError(GeometryError):
    """Halfspace system that is not compact."""


class ResourceCapError(RuntimeError):
    """An enumeration exceeded a configured cap."""


# ---------------------------------------------------------------------------
# lattice vectors


def dot(q, z):
    """Inner product of an integer vector with a point."""
    s = q[0] * z[0]
    for a, b in zip(q[1:], z[1:]):
        s += a * b
    return s


def norm_sq(q) -> int:
    return sum(a * a for a in q)


def vec_gcd(q) -> int:
    g = 0
    for a in q:
        g = gcd(g, abs(a))
    return g


def is_primitive(q) -> bool:
    return vec_gcd(q) == 1


def primitive_part(q):
    """q divided by the gcd of its entries (direction preserved)."""
    g = vec_gcd(q)
    if g == 0:
        raise GeometryError("zero vector has no primitive part")
    return tuple(a // g for a in q)


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vec_neg(a):
    return tuple(-x for x in a)


# ---------------------------------------------------------------------------
# lattice enumeration

_shell_cache: dict = {}


def lattice_shell(n: int, k: int):
    """All q in Z^n with |q|^2 == k (cached, lexicographically sorted)."""
    key = (n, k)
    cached = _shell_cache.get(key)
    if cached is not None:
        return cached
    out = []
    if n == 1:
        r = isqrt(k)
        if r * r == k:
            out = [(-r,), (r,)] if r else [(0,)]
    elif n == 2:
        for a in range(-isqrt(k), isqrt(k) + 1):
            rem = k - a * a
            b = isqrt(rem)
            if b * b == rem:
                out.append((a, b))
                if b:
                    out.append((a, -b))
    else:
        for a in range(-isqrt(k), isqrt(k) + 1):
            rem_a = k - a * a
            for b in range(-isqrt(rem_a), isqrt(rem_a) + 1):
                rem = rem_a - b * b
                c = isqrt(rem)
                if c * c == rem:
                    out.append((a, b, c))
                    if c:
                        out.append((a, b, -c))
    out.sort()
    out = tuple(out)
    _shell_cache[key] = out
    return out


def lattice_ball(radius_sq_bound, n: int, cap: int = LATTICE_ENUM_CAP):
    """All q in Z^n with |q|^2 <= radius_sq_bound, sorted lexicographically.

    The bound may be any nonnegative rational; the result always contains
    the origin.  Exceeding ``cap`` raises ResourceCapError naming the cap.
    """
    bound = as_exact(radius_sq_bound)
    if bound < 0:
        raise GeometryError("negative radius bound")
    if n < 1:
        raise GeometryError("dimension must be >= 1")
    kmax = int(bound)  # floor
    side = 2 * isqrt(kmax) + 1
    if side**n > cap:
        raise ResourceCapError(
            f"lattice ball with |q|^2 <= {bound} in Z^{n} exceeds cap {cap}"
        )
    out = []
    for k in range(kmax + 1):
        out.extend(lattice_shell(n, k))
        if len(out) > cap:
            raise ResourceCapError(f"lattice ball exceeds cap {cap}")
    out.sort()
    return out


# ---------------------------------------------------------------------------
# exact linear algebra (small systems)


def solve_linear(rows, rhs):
    """Solve a square rational system exactly; None if singular."""
    n = len(rows)
    a = [[as_exact(x) for x in row] + [as_exact(rhs[i])] for i, row in enumerate(rows)]
    col = 0
    pivots = []
    for col in range(n):
        piv = None
        for r in range(len(pivots), n):
            if a[r][col] != 0:
                piv = r
                break
        if piv is None:
            return None
        a[len(pivots)], a[piv] = a[piv], a[len(pivots)]
        r0 = len(pivots)
        inv = a[r0][col]
        a[r0] = [x / inv for x in a[r0]]
        for r in range(n):
            if r != r0 and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[r0])]
        pivots.append(col)
    return tuple(a[i][n] for i in range(n))


def affine_rank(points) -> int:
    """Dimension of the affine hull of rational points."""
    if not points:
        return -1
    base = points[0]
    vecs = [tuple(as_exact(x) - as_exact(y) for x, y in zip(p, base)) for p in points[1:]]
    rank = 0
    rows = [list(v) for v in vecs]
    ncols = len(base)
    col = 0
    r = 0
    while r < len(rows) and col < ncols:
        piv = None
        for i in range(r, len(rows)):
            if rows[i][col] != 0:
                piv = i
                break
        if piv is None:
            col += 1
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        col += 1
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# halfspaces and polytopes


@dataclass(frozen=True)
class HalfSpace:
    """Closed halfspace {z : normal . z >= offset} with primitive integer normal."""

    normal: tuple
    offset: object

    def __post_init__(self):
        if all(a == 0 for a in self.normal):
            raise GeometryError("halfspace normal must be nonzero")
        if not all(isinstance(a, int) for a in self.normal):
            raise GeometryError("halfspace normal must be integer")
        if not is_primitive(self.normal):
            raise GeometryError(
                f"halfspace normal {self.normal} is not primitive; "
                f"divide by gcd {vec_gcd(self.normal)}"
            )
        object.__setattr__(self, "offset", as_exact(self.offset))

    def value(self, z):
        """normal . z - offset (nonnegative inside)."""
        return dot(self.normal, z) - self.offset


def reduced_halfspace(normal, offset) -> HalfSpace:
    """Primitivize an integer-normal halfspace (offset scaled alongside)."""
    g = vec_gcd(normal)
    if g == 0:
        raise GeometryError("halfspace normal must be nonzero")
    return HalfSpace(tuple(a // g for a in normal), as_exact(offset) / g)


@dataclass(frozen=True)
class Face:
    """Face of a polytope: dimension, incident vertex ids, tight halfspace ids."""

    dim: int
    vertex_ids: tuple
    tight: frozenset


class PolytopeGeometry:
    """Compact halfspace intersection with vertices and face lattice (n <= 3).

    Invariants: every vertex satisfies every halfspace; every non-redundant
    halfspace is tight at >= n affinely independent vertices; the interior
    is non-empty.
    """

    def __init__(self, dim, halfspaces, vertices, redundant, faces, tight_sets):
        self.dim = dim
        self.halfspaces = tuple(halfspaces)
        self.vertices = tuple(tuple(as_exact(x) for x in v) for v in vertices)
        self.redundant = tuple(redundant)
        self.faces = tuple(faces)
        self.tight_sets = tuple(frozenset(s) for s in tight_sets)

    @property
    def facets(self):
        return tuple(f for f in self.faces if f.dim == self.dim - 1)

    @property
    def edges(self):
        return tuple(f for f in self.faces if f.dim == 1)

    def faces_of_dim(self, d):
        return tuple(f for f in self.faces if f.dim == d)

    def contains(self, z, strict: bool = False) -> bool:
        for h in self.halfspaces:
            v = h.value(z)
            if v < 0 or (strict and v == 0):
                return False
        return True

    def boundary_tight(self, z):
        """Indices of halfspaces tight at z (empty for interior points)."""
        return frozenset(
            i for i, h in enumerate(self.halfspaces) if h.value(z) == 0
        )

    def interior_point(self):
        """Centroid of the vertices; interior for full-dimensional polytopes."""
        n = len(self.vertices)
        return tuple(sum(v[i] for v in self.vertices) / rat(n) for i in range(self.dim))

    def bounding_box(self):
        lo = tuple(min(v[i] for v in self.vertices) for i in range(self.dim))
        hi = tuple(max(v[i] for v in self.vertices) for i in range(self.dim))
        return lo, hi

    @property
    def is_degenerate(self) -> bool:
        return affine_rank(self.vertices) < self.dim

    def __repr__(self):
        return (
            f"PolytopeGeometry(dim={self.dim}, vertices={len(self.vertices)}, "
            f"halfspaces={len(self.halfspaces)})"
        )


def _vertex_candidates(halfspaces, n):
    planes = [(h.normal, h.offset) for h in halfspaces]
    seen = {}
    for subset in itertools.combinations(range(len(planes)), n):
        rows = [planes[i][0] for i in subset]
        rhs = [planes[i][1] for i in subset]
        pt = solve_linear(rows, rhs)
        if pt is None:
            continue
        if all(h.value(pt) >= 0 for h in halfspaces):
            seen.setdefault(pt, None)
    return list(seen.keys())


def _recession_direction(halfspaces, n):
    """A nonzero direction d with normal.d >= 0 for all halfspaces, or None."""
    for i in range(n):
        for sign in (1, -1):
            cons = [(h.normal, RAT_ZERO, False) for h in halfspaces]
            unit = tuple(rat(sign if j == i else 0) for j in range(n))
            cons.append((unit, rat(1), False))
            w = lp_feasible(cons, n)
            if w is not None:
                return w
    return None


def halfspaces_to_geometry(halfspaces, n: int) -> PolytopeGeometry:
    """Exact vertex enumeration and face lattice for a compact intersection.

    Vertices come from intersecting all n-subsets of bounding hyperplanes and
    filtering by feasibility.  Raises DegenerateDomainError for an empty
    interior and UnboundedDomainError for a non-compact system.
    """
    if n not in (1, 2, 3):
        raise GeometryError("face lattices supported for n in {1,2,3} only")
    halfspaces = list(halfspaces)
    if not halfspaces:
        raise UnboundedDomainError("not compact: no halfspaces")
    verts = _vertex_candidates(halfspaces, n)
    if not verts:
        raise DegenerateDomainError("degenerate domain: no vertices")
    if _recession_direction(halfspaces, n) is not None:
        raise UnboundedDomainError("not compact")
    strict_cons = [(h.normal, h.offset, True) for h in halfspaces]
    if lp_feasible(strict_cons, n) is None:
        raise DegenerateDomainError("degenerate domain: empty interior")
    verts.sort()
    tight_sets = [
        frozenset(i for i, h in enumerate(halfspaces) if h.value(v) == 0)
        for v in verts
    ]
    redundant = []
    for i in range(len(halfspaces)):
        on = [verts[k] for k in range(len(verts)) if i in tight_sets[k]]
        redundant.append(affine_rank(on) < n - 1)

    faces = [Face(n, tuple(range(len(verts))), frozenset())]
    # facets
    facet_ids = []
    for i, h in enumerate(halfspaces):
        if redundant[i]:
            continue
        ids = tuple(k for k in range(len(verts)) if i in tight_sets[k])
        tight = frozenset.intersection(*(tight_sets[k] for k in ids))
        f = Face(n - 1, ids, tight)
        if f not in facet_ids:
            facet_ids.append(f)
    faces.extend(facet_ids)
    if n == 3:
        edges = {}
        for fa, fb in itertools.combinations(facet_ids, 2):
            ids = tuple(sorted(set(fa.vertex_ids) & set(fb.vertex_ids)))
            if len(ids) < 2:
                continue
            if affine_rank([verts[k] for k in ids]) != 1:
                continue
            tight = frozenset.intersection(*(tight_sets[k] for k in ids))
            edges[ids] = Face(1, ids, tight)
        faces.extend(edges.values())
    if n >= 1:
        for k in range(len(verts)):
            faces.append(Face(0, (k,), tight_sets[k]))
    return PolytopeGeometry(n, halfspaces, verts, redundant, faces, tight_sets)


# ---------------------------------------------------------------------------
# hulls, polygons, clipping


def cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points):
    """Monotone-chain hull of rational 2-D points, CCW, no duplicates."""
    pts = sorted(set(tuple(as_exact(x) for x in p) for p in points))
    if len(pts) <= 2:
        return pts
    lower = []
    for p in pts:
        while len(lower) >= 2 and cross2(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross2(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def clip_polygon(poly, normal, offset):
    """Clip a convex polygon (CCW vertex list) by {normal . z >= offset}."""
    if not poly:
        return []
    offset = as_exact(offset)
    vals = [dot(normal, p) - offset for p in poly]
    out = []
    m = len(poly)
    for i in range(m):
        j = (i + 1) % m
        vi, vj = vals[i], vals[j]
        if vi >= 0:
            out.append(poly[i])
        if (vi > 0 and vj < 0) or (vi < 0 and vj > 0):
            t = vi / (vi - vj)
            out.append(
                tuple(a + t * (b - a) for a, b in zip(poly[i], poly[j]))
            )
    dedup = []
    for p in out:
        if not dedup or p != dedup[-1]:
            dedup.append(p)
    if len(dedup) >= 2 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def polygon_area(poly):
    """Exact shoelace area of a polygon given in cyclic order."""
    if len(poly) < 3:
        return RAT_ZERO
    s = RAT_ZERO
    m = len(poly)
    for i in range(m):
        j = (i + 1) % m
        s += poly[i][0] * poly[j][1] - poly[j][0] * poly[i][1]
    return abs(s) / 2


def order_polygon_ccw(points):
    """Order the vertices of a convex polygon counterclockwise."""
    return convex_hull_2d(points)


def _order_facet_cycle(verts_3d, ids, normal):
    """Cyclic order of a convex 3-D facet's vertices around its centroid.

    Exact angular sort relative to a reference spoke: vectors are classed
    into {along ref, left half, anti ref, right half} and ordered within a
    half by the sign of the in-plane cross product.
    """
    pts = [verts_3d[i] for i in ids]
    m = len(pts)
    c = tuple(sum(p[k] for p in pts) / rat(m) for k in range(3))

    def cross3(u, v):
        return (
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        )

    ref = vec_sub(pts[0], c)

    import functools

    def half_class(u):
        s = dot(cross3(ref, u), normal)
        if s > 0:
            return 1, s
        if s < 0:
            return 3, s
        return (0, s) if dot(u, ref) > 0 else (2, s)

    def cmp(ia, ib):
        a, b = vec_sub(pts[ia], c), vec_sub(pts[ib], c)
        za, _ = half_class(a)
        zb, _ = half_class(b)
        if za != zb:
            return -1 if za < zb else 1
        s = dot(cross3(a, b), normal)
        if s > 0:
            return -1
        if s < 0:
            return 1
        return 0

    order = sorted(range(m), key=functools.cmp_to_key(cmp))
    return [ids[i] for i in order]


def facet_vertex_cycles(geom: PolytopeGeometry):
    """For n=3: each facet as a CCW-ordered vertex-id cycle (outward normal)."""
    cycles = []
    for f in geom.facets:
        hs_idx = next(iter(f.tight))
        normal = geom.halfspaces[hs_idx].normal
        ids = _order_facet_cycle(geom.vertices, list(f.vertex_ids), normal)
        cycles.append((f, ids, normal))
    return cycles


def measure(geom: PolytopeGeometry):
    """Exact area (n=2) or volume (n=3); zero for degenerate inputs."""
    if geom.is_degenerate or geom.dim == 1:
        return RAT_ZERO
    if geom.dim == 2:
        return polygon_area(order_polygon_ccw(geom.vertices))
    if geom.dim == 3:
        apex = geom.vertices[0]
        total = RAT_ZERO
        for _f, ids, _n in facet_vertex_cycles(geom):
            pts = [geom.vertices[i] for i in ids]
            for i in range(1, len(pts) - 1):
                a = vec_sub(pts[0], apex)
                b = vec_sub(pts[i], apex)
                c = vec_sub(pts[i + 1], apex)
                det = (
                    a[0] * (b[1] * c[2] - b[2] * c[1])
                    - a[1] * (b[0] * c[2] - b[2] * c[0])
                    + a[2] * (b[0] * c[1] - b[1] * c[0])
                )
                total += abs(det)
        return total / 6
    raise GeometryError(f"measure not supported in dimension {geom.dim}")


# ---------------------------------------------------------------------------
# lattice points in a polytope


def _segment_lattice_points(a, b):
    d = vec_sub(b, a)
    g = vec_gcd(d)
    if g == 0:
        return [a]
    step = tuple(x // g for x in d)
    return [tuple(a[i] + k * step[i] for i in range(len(a))) for k in range(g + 1)]


def _hull_facet_planes_3d(pts):
    """Supporting planes of conv(pts) for full-dimensional integer point sets."""
    planes = set()
    m = len(pts)
    for i, j, k in itertools.combinations(range(m), 3):
        a, b, c = pts[i], pts[j], pts[k]
        u, v = vec_sub(b, a), vec_sub(c, a)
        n = (
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        )
        if n == (0, 0, 0):
            continue
        n = primitive_part(n)
        off = dot(n, a)
        vals = [dot(n, p) - off for p in pts]
        if all(v >= 0 for v in vals):
            planes.add((n, off))
        elif all(v <= 0 for v in vals):
            planes.add((vec_neg(n), -off))
    return planes


def lattice_points_in_polytope(vertices):
    """All integer points in the convex hull of integer vertices.

    Bounding-box scan with exact non-strict inside tests; empty input gives
    an empty list.
    """
    pts = [tuple(int(x) for x in v) for v in vertices]
    if not pts:
        return []
    n = len(pts[0])
    rank = affine_rank(pts)
    if rank == 0:
        return [pts[0]]
    if rank == 1:
        ext = max(
            itertools.combinations(range(len(pts)), 2),
            key=lambda ij: norm_sq(vec_sub(pts[ij[0]], pts[ij[1]])),
        )
        out = _segment_lattice_points(pts[ext[0]], pts[ext[1]])
        return sorted(out)
    lo = [min(p[i] for p in pts) for i in range(n)]
    hi = [max(p[i] for p in pts) for i in range(n)]
    count = 1
    for a, b in zip(lo, hi):
        count *= b - a + 1
    if count > LATTICE_ENUM_CAP:
        raise ResourceCapError(f"bounding-box scan exceeds cap {LATTICE_ENUM_CAP}")
    if n == 2 or (n == 3 and rank == 2):
        if n == 2:
            hull = [tuple(int(x) for x in p) for p in convex_hull_2d(pts)]
            edges = []
            m = len(hull)
            for i in range(m):
                a, b = hull[i], hull[(i + 1) % m]
                d = vec_sub(b, a)
                nrm = primitive_part((-d[1], d[0]))
                edges.append((nrm, dot(nrm, a)))
            out = []
            for x in range(lo[0], hi[0] + 1):
                for y in range(lo[1], hi[1] + 1):
                    p = (x, y)
                    if all(dot(nr, p) >= off for nr, off in edges):
                        out.append(p)
            return sorted(out)
        # planar set in 3-D: scan box, test affine-hull membership + 2-D hull
        base = pts[0]
        u = None
        for p in pts[1:]:
            if p != base:
                u = vec_sub(p, base)
                break
        v = None
        for p in pts[1:]:
            w = vec_sub(p, base)
            c = (
                u[1] * w[2] - u[2] * w[1],
                u[2] * w[0] - u[0] * w[2],
                u[0] * w[1] - u[1] * w[0],
            )
            if c != (0, 0, 0):
                v = w
                nrm = c
                break
        off = dot(nrm, base)
        plane2 = []
        for p in pts:
            plane2.append((dot(u, vec_sub(p, base)), dot(v, vec_sub(p, base))))
        hull2 = convex_hull_2d(plane2)
        if len(hull2) < 3:
            hull2 = plane2
        out = []
        for x in range(lo[0], hi[0] + 1):
            for y in range(lo[1], hi[1] + 1):
                for z in range(lo[2], hi[2] + 1):
                    p = (x, y, z)
                    if dot(nrm, p) != off:
                        continue
                    p2 = (dot(u, vec_sub(p, base)), dot(v, vec_sub(p, base)))
                    if _point_in_hull_2d(p2, hull2):
                        out.append(p)
        return sorted(out)
    # full-dimensional in 3-D
    planes = _hull_facet_planes_3d(pts)
    out = []
    for x in range(lo[0], hi[0] + 1):
        for y in range(lo[1], hi[1] + 1):
            for z in range(lo[2], hi[2] + 1):
                p = (x, y, z)
                if all(dot(nr, p) >= off for nr, off in planes):
                    out.append(p)
    return sorted(out)


def _point_in_hull_2d(p, hull):
    if len(hull) == 1:
        return p == hull[0]
    if len(hull) == 2:
        a, b = hull
        if cross2(a, b, p) != 0:
            return False
        return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[
            1
        ] <= max(a[1], b[1])
    m = len(hull)
    for i in range(m):
        if cross2(hull[i], hull[(i + 1) % m], p) < 0:
            return False
    return True


# ---------------------------------------------------------------------------
# exact LP (two-phase simplex, Bland's rule)

_SIMPLEX_GUARD = 200000


def _bland_phase(T, rhs, basis, cvec, allowed_cols):
    """Run Bland-rule simplex iterations in place; return 'optimal'/'unbounded'."""
    m = len(T)
    guard = 0
    in_basis = set(basis)
    while True:
        guard += 1
        if guard > _SIMPLEX_GUARD:
            raise GeometryError("simplex iteration guard tripped")
        lam = [cvec[basis[i]] for i in range(m)]
        enter = None
        for j in allowed_cols:
            if j in in_basis:
                continue
            rj = cvec[j]
            for i in range(m):
                if T[i][j] != 0 and lam[i] != 0:
                    rj -= lam[i] * T[i][j]
            if rj > 0:
                enter = j
                break
        if enter is None:
            return "optimal"
        leave = None
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = rhs[i] / T[i][enter]
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i] < basis[leave])
                ):
                    best = ratio
                    leave = i
        if leave is None:
            return "unbounded"
        piv = T[leave][enter]
        T[leave] = [x / piv for x in T[leave]]
        rhs[leave] = rhs[leave] / piv
        for i in range(m):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[leave])]
                rhs[i] = rhs[i] - f * rhs[leave]
        in_basis.discard(basis[leave])
        in_basis.add(enter)
        basis[leave] = enter


def simplex_maximize(c, A, b):
    """Maximize c.y over {A y <= b, y >= 0} exactly.

    Returns (status, y) with status in {'optimal', 'infeasible', 'unbounded'}.
    Deterministic: two-phase tableau simplex with Bland's rule.
    """
    m, n = len(A), len(c)
    T = []
    rhs = []
    flipped = []
    for i in range(m):
        row = [as_exact(x) for x in A[i]] + [RAT_ZERO] * m
        row[n + i] = rat(1)
        bi = as_exact(b[i])
        if bi < 0:
            row = [-x for x in row]
            bi = -bi
            flipped.append(i)
        T.append(row)
        rhs.append(bi)
    ncols = n + m
    basis = []
    art_cols = []
    for i in range(m):
        if i in flipped:
            for r in range(m):
                T[r].append(rat(1) if r == i else RAT_ZERO)
            basis.append(ncols)
            art_cols.append(ncols)
            ncols += 1
        else:
            basis.append(n + i)
    if art_cols:
        c1 = [RAT_ZERO] * ncols
        for j in art_cols:
            c1[j] = rat(-1)
        status = _bland_phase(T, rhs, basis, c1, range(ncols))
        if status != "optimal":
            raise GeometryError("phase-I simplex cannot be unbounded")
        if any(rhs[i] != 0 for i in range(m) if basis[i] in art_cols):
            return "infeasible", None
        # pivot artificials out of the basis where possible
        art_set = set(art_cols)
        for i in range(m):
            if basis[i] in art_set:
                col = next(
                    (j for j in range(n + m) if j not in art_set and T[i][j] != 0),
                    None,
                )
                if col is not None:
                    piv = T[i][col]
                    T[i] = [x / piv for x in T[i]]
                    rhs[i] = rhs[i] / piv
                    for r in range(m):
                        if r != i and T[r][col] != 0:
                            f = T[r][col]
                            T[r] = [x - f * y for x, y in zip(T[r], T[i])]
                            rhs[r] = rhs[r] - f * rhs[i]
                    basis[i] = col
    else:
        art_cols = []
    c2 = [as_exact(x) for x in c] + [RAT_ZERO] * (ncols - n)
    allowed = [j for j in range(n + m) if j not in set(art_cols)]
    status = _bland_phase(T, rhs, basis, c2, allowed)
    if status == "unbounded":
        return "unbounded", None
    y = [RAT_ZERO] * ncols
    for i, bcol in enumerate(basis):
        y[bcol] = rhs[i]
    return "optimal", y[:n]


def polygon_to_geometry(poly) -> PolytopeGeometry:
    """Wrap a CCW convex polygon with rational vertices as a PolytopeGeometry.

    Edge normals are recovered from edge directions and primitivized, so the
    result carries integer-normal halfspaces like any other geometry.
    """
    poly = [tuple(as_exact(x) for x in p) for p in poly]
    if len(poly) < 3 or polygon_area(poly) == 0:
        raise DegenerateDomainError("degenerate polygon")
    m = len(poly)
    halfspaces = []
    for i in range(m):
        a, b = poly[i], poly[(i + 1) % m]
        dx, dy = b[0] - a[0], b[1] - a[1]
        la = dx.denominator * dy.denominator
        ix, iy = int(dx * la), int(dy * la)
        nrm = primitive_part((-iy, ix))
        halfspaces.append(HalfSpace(nrm, dot(nrm, a)))
    tight_sets = []
    for k, v in enumerate(poly):
        tight_sets.append(
            frozenset(i for i, h in enumerate(halfspaces) if h.value(v) == 0)
        )
    faces = [Face(2, tuple(range(m)), frozenset())]
    for i in range(m):
        ids = (i, (i + 1) % m)
        faces.append(Face(1, ids, frozenset({i})))
    for k in range(m):
        faces.append(Face(0, (k,), tight_sets[k]))
    return PolytopeGeometry(2, halfspaces, poly, [False] * m, faces, tight_sets)


def lp_feasible(constraints, n: int):
    """Exact feasibility for mixed strict/non-strict linear constraints.

    Each constraint is (coeffs, rhs, strict) meaning coeffs.x >= rhs
    (strictly when flagged).  Strictness is decided by maximizing an
    auxiliary slack t >= 0 on the strict rows (capped at 1): the system is
    feasible iff the relaxed system is and the optimal slack is positive.
    Returns a rational witness or None; deterministic pivot order.
    """
    cons = [
        (tuple(as_exact(a) for a in cs), as_exact(r), bool(s))
        for cs, r, s in constraints
    ]
    # variables y = (u, w, t) with x = u - w; maximize t subject to
    #   -coeffs.u + coeffs.w + strict*t <= -rhs   and   t <= 1
    nv = 2 * n + 1
    rows, rhs, c = [], [], [RAT_ZERO] * nv
    c[-1] = rat(1)
    for coeffs, r, strict in cons:
        row = [-a for a in coeffs] + list(coeffs) + [rat(1) if strict else RAT_ZERO]
        rows.append(row)
        rhs.append(-r)
    rows.append([RAT_ZERO] * (2 * n) + [rat(1)])
    rhs.append(rat(1))
    status, y = simplex_maximize(c, rows, rhs)
    if status == "infeasible":
        return None
    if status != "optimal":
        raise GeometryError("slack LP cannot be unbounded (t is capped)")
    t = y[-1]
    if any(s for _, _, s in cons) and t <= 0:
        return None
    witness = tuple(y[i] - y[n + i] for i in range(n))
    for coeffs, r, strict in cons:
        v = sum(a * b for a, b in zip(coeffs, witness))
        if v < r or (strict and v == r):
            raise GeometryError("simplex returned an invalid witness")
    return witness
