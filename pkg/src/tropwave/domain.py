"""Compact convex domains and their support data.

A domain is either an exact rational polytope with primitive integer
facet normals, or an approximate ball / support-oracle region.  The
module computes support values c_q = inf_{z in domain} q.z, the slope
functions l_q(z) = q.z - c_q, certified lower bounds on the Euclidean
distance to the boundary, the weighted distance function (the pointwise
minimum of all l_q with q != 0), and mild-face classification.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

from . import geometry as geo
from .scalars import APPROX_TOL, RAT_ZERO, as_exact, rat, sqrt_ub


class DomainError(ValueError):
    pass


class NotInteriorError(DomainError):
    """A point required to be strictly interior is not."""


class OmegaDomain:
    """Compact convex domain with non-empty interior.

    Exact polytopes support error-free rational computation; balls and
    support oracles run in approximate (float) mode with a global
    tolerance, because their support values are generally irrational.
    """

    def __init__(self, kind, dim, exact, geometry=None, center=None, radius=None, support_fn=None):
        self.kind = kind
        self.dim = dim
        self.exact = exact
        self.geometry = geometry
        self.center = center
        self.radius = radius
        self.support_fn = support_fn
        self._support_table = {}
        self._support_lock = threading.Lock()

    # -- constructors -------------------------------------------------

    @classmethod
    def from_halfspaces(cls, halfspaces, dim):
        g = geo.halfspaces_to_geometry(list(halfspaces), dim)
        return cls("polytope", dim, True, geometry=g)

    @classmethod
    def from_geometry(cls, g):
        return cls("polytope", g.dim, True, geometry=g)

    @classmethod
    def ball(cls, center, radius, dim=None):
        center = tuple(float(x) for x in center)
        radius = float(radius)
        if radius <= 0:
            raise DomainError("ball radius must be positive")
        return cls("ball", dim or len(center), False, center=center, radius=radius)

    @classmethod
    def from_oracle(cls, support_fn, dim):
        return cls("oracle", dim, False, support_fn=support_fn)

    def __eq__(self, other):
        if not isinstance(other, OmegaDomain):
            return NotImplemented
        if self.kind != other.kind or self.dim != other.dim:
            return False
        if self.kind == "polytope":
            return sorted(self.geometry.vertices) == sorted(other.geometry.vertices)
        if self.kind == "ball":
            return self.center == other.center and self.radius == other.radius
        return self is other

    def __repr__(self):
        if self.kind == "polytope":
            return f"OmegaDomain(polytope, dim={self.dim}, vertices={len(self.geometry.vertices)})"
        if self.kind == "ball":
            return f"OmegaDomain(ball, center={self.center}, radius={self.radius})"
        return f"OmegaDomain(oracle, dim={self.dim})"

    # -- membership ---------------------------------------------------

    def check_point(self, z):
        """Coerce a point to the domain's scalar mode."""
        if self.exact:
            return tuple(as_exact(x) for x in z)
        return tuple(float(x) for x in z)

    def contains(self, z, strict=False):
        z = self.check_point(z)
        if self.kind == "polytope":
            return self.geometry.contains(z, strict=strict)
        d = math.dist(z, self.center)
        return d < self.radius - APPROX_TOL if strict else d <= self.radius + APPROX_TOL

    def on_boundary(self, z):
        z = self.check_point(z)
        if self.kind == "polytope":
            return self.geometry.contains(z) and bool(self.geometry.boundary_tight(z))
        return abs(math.dist(z, self.center) - self.radius) <= APPROX_TOL

    # -- support values -----------------------------------------------

    def support_value(self, q):
        """c_q = inf of q.z over the domain (exact min over vertices for polytopes)."""
        q = tuple(int(x) for x in q)
        table = self._support_table
        v = table.get(q)
        if v is not None:
            return v
        if self.kind == "polytope":
            v = min(geo.dot(q, vert) for vert in self.geometry.vertices)
        elif self.kind == "ball":
            v = geo.dot(q, self.center) - self.radius * math.sqrt(geo.norm_sq(q))
        else:
            v = float(self.support_fn(q))
        with self._support_lock:
            table.setdefault(q, v)
        return table[q]

    def monomial_default(self, q):
        """Default coefficient -c_q of the slope-q monomial."""
        return -self.support_value(q)

    def l_q(self, q, z):
        """l_q(z) = q.z - c_q; nonnegative on the domain, zero on the support face."""
        return geo.dot(q, z) - self.support_value(q)

    def facet_normals(self):
        if self.kind != "polytope":
            raise DomainError("facet normals require a polytope domain")
        return tuple(
            h.normal
            for i, h in enumerate(self.geometry.halfspaces)
            if not self.geometry.redundant[i]
        )

    # -- boundary distance ---------------------------------------------

    def boundary_distance_lb(self, z):
        """Positive lower bound on the Euclidean distance from z to the boundary.

        For polytopes: min over facets of (n.z - b) / ub(|n|), with ub a
        rational upper bound on the norm, so the result stays exact and
        sound.  Raises NotInteriorError when z is not strictly inside.
        """
        z = self.check_point(z)
        if self.kind == "polytope":
            best = None
            for i, h in enumerate(self.geometry.halfspaces):
                if self.geometry.redundant[i]:
                    continue
                slack = h.value(z)
                if slack <= 0:
                    raise NotInteriorError(f"not interior: {z}")
                d = slack / sqrt_ub(geo.norm_sq(h.normal))
                if best is None or d < best:
                    best = d
            return best
        d = self.radius - math.dist(z, self.center)
        if d <= 0:
            raise NotInteriorError(f"not interior: {z}")
        return d

    # -- weighted distance ----------------------------------------------

    def weighted_distance(self, z):
        """min over q != 0 of l_q(z); zero when z lies on the boundary."""
        return self.weighted_distance_argmin(z)[0]

    def weighted_distance_argmin(self, z):
        """(value, minimizing exponents).  The minimum is attained.

        Uses the certified cutoff l_q(z) >= |q| * R(z) with R a rational
        lower bound on the boundary distance: shells of increasing |q|^2
        are scanned until they provably cannot beat the current best.
        """
        z = self.check_point(z)
        if not self.contains(z):
            raise DomainError(f"point outside domain: {z}")
        if self.on_boundary(z):
            if self.kind == "polytope":
                tight = self.geometry.boundary_tight(z)
                mins = tuple(
                    self.geometry.halfspaces[i].normal
                    for i in sorted(tight)
                    if not self.geometry.redundant[i]
                )
                return RAT_ZERO, mins
            return 0.0, ()
        r = self.boundary_distance_lb(z)
        if self.kind == "polytope":
            best = None
            args = []
            for n in self.facet_normals():
                v = self.l_q(n, z)
                if best is None or v < best:
                    best = v
            rr = r * r
            k = 1
            while k * rr <= best * best:
                for q in geo.lattice_shell(self.dim, k):
                    v = self.l_q(q, z)
                    if v < best:
                        best = v
                        args = [q]
                    elif v == best:
                        args.append(q)
                k += 1
            return best, tuple(sorted(set(args)))
        # approximate mode
        best = None
        args = []
        for i in range(self.dim):
            for s in (1, -1):
                q = tuple(s if j == i else 0 for j in range(self.dim))
                v = self.l_q(q, z)
                if best is None or v < best:
                    best = v
        k = 1
        while k * r * r <= best * best + APPROX_TOL:
            for q in geo.lattice_shell(self.dim, k):
                v = self.l_q(q, z)
                if v < best - APPROX_TOL:
                    best = v
                    args = [q]
                elif abs(v - best) <= APPROX_TOL:
                    args.append(q)
            k += 1
        return best, tuple(sorted(set(args)))


# ---------------------------------------------------------------------------
# mild faces of a rational polytope


@dataclass(frozen=True)
class FaceMildness:
    face: geo.Face
    normals: tuple
    mild: bool
    offender: tuple | None


@dataclass(frozen=True)
class FaceMildnessReport:
    entries: tuple
    mild: bool

    @property
    def first_offender(self):
        for e in self.entries:
            if not e.mild:
                return e
        return None


def hull_vertex_set(points):
    """Vertices of the convex hull of integer points (any rank, n <= 3)."""
    pts = [tuple(int(x) for x in p) for p in points]
    uniq = sorted(set(pts))
    if len(uniq) <= 2:
        return set(uniq)
    out = set()
    for p in uniq:
        others = [s for s in uniq if s != p]
        if p not in geo.lattice_points_in_polytope(others):
            out.add(p)
    return out


def lattice_free_except_vertices(points):
    """(verdict, offender): no interior/edge lattice points besides hull vertices."""
    pts = sorted(set(tuple(int(x) for x in p) for p in points))
    verts = hull_vertex_set(pts)
    for p in geo.lattice_points_in_polytope(pts):
        if tuple(p) not in verts:
            return False, tuple(p)
    return True, None


def mild_faces_check(geometry_or_domain) -> FaceMildnessReport:
    """Classify every face of a rational polytope as mild or not.

    A face is mild when conv({0} union {primitive normals of the facets
    containing it}) has no lattice points besides its vertices; facets
    themselves are mild unconditionally.
    """
    g = geometry_or_domain
    if isinstance(g, OmegaDomain):
        if g.kind != "polytope":
            raise DomainError("mild faces are defined for polytope domains")
        g = g.geometry
    entries = []
    for face in g.faces:
        if face.dim == g.dim:
            entries.append(FaceMildness(face, (), True, None))
            continue
        if face.dim == g.dim - 1:
            idx = sorted(i for i in face.tight if not g.redundant[i])
            normals = tuple(g.halfspaces[i].normal for i in idx)
            entries.append(FaceMildness(face, normals, True, None))
            continue
        idx = sorted(i for i in face.tight if not g.redundant[i])
        normals = tuple(dict.fromkeys(g.halfspaces[i].normal for i in idx))
        zero = tuple(0 for _ in range(g.dim))
        ok, offender = lattice_free_except_vertices([zero, *normals])
        entries.append(FaceMildness(face, normals, ok, offender))
    return FaceMildnessReport(tuple(entries), all(e.mild for e in entries))


# ---------------------------------------------------------------------------
# convenience constructors


def box_domain(lo, hi):
    """Axis-aligned exact box [lo_1,hi_1] x ... as an OmegaDomain."""
    lo = [as_exact(x) for x in lo]
    hi = [as_exact(x) for x in hi]
    n = len(lo)
    hs = []
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        me = tuple(-1 if j == i else 0 for j in range(n))
        hs.append(geo.HalfSpace(e, lo[i]))
        hs.append(geo.HalfSpace(me, -hi[i]))
    return OmegaDomain.from_halfspaces(hs, n)


def unit_square():
    return box_domain((rat(0), rat(0)), (rat(1), rat(1)))
