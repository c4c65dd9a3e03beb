"""Avalanche Monte Carlo experiments and power-law fitting.

The experiment repeatedly strikes a fresh random interior point, records
the exact measure of the face it lands in, and applies one wave there.
Points are rationalized to denominator 2**32, so every value the dynamic
touches lives in a fixed rational scale and the whole run stays exact and
byte-reproducible; the engine keeps the explicit coefficients in
integer-scaled numpy arrays and certifies face polygons against both the
explicit monomials and the implicit defaults.

Power-law exponents are estimated with the continuous maximum-likelihood
estimator alpha = 1 + n / sum(log(x_i/x_min)) plus a log-binned regression
slope for comparison and a Kolmogorov-Smirnov distance diagnostic.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from math import isqrt

import numpy as np

from . import geometry as geo
from .domain import OmegaDomain
from .scalars import RAT_ZERO, as_exact, rat, rat_str

POINT_DENOM_BITS = 32
AUDIT_INTERVAL = 100


class ExperimentError(ValueError):
    pass


class PowerLawDataError(ExperimentError):
    pass


@dataclass(frozen=True)
class AvalancheSample:
    index: int
    point: tuple
    q0: tuple | None
    measure: object
    c: object
    step_count: int

    @property
    def measure_float(self):
        return float(self.measure)


@dataclass(frozen=True)
class PowerLawFit:
    x_min: float
    alpha: float
    n_tail: int
    ks_distance: float
    method: str
    alpha_regression: float | None

    def to_json_dict(self):
        return {
            "x_min": self.x_min,
            "alpha": self.alpha,
            "n_tail": self.n_tail,
            "ks_distance": self.ks_distance,
            "method": self.method,
            "alpha_regression": self.alpha_regression,
        }


def _sample_words(seed, index, attempt):
    digest = hashlib.sha256(f"{seed}:{index}:{attempt}".encode()).digest()
    return (
        int.from_bytes(digest[0:8], "big"),
        int.from_bytes(digest[8:16], "big"),
        int.from_bytes(digest[16:24], "big"),
    )


class _ExactSquareLatticeEngine:
    """Exact 2-D avalanche engine over integer-scaled coefficients.

    All monomial values at sample points are integers once multiplied by
    scale = 2**32 * lcm(vertex denominators); face polygons are certified
    exactly, with explicit-monomial candidates pruned by the sound bound
    value_at_p < f(p) + (|q| + |q0|) * diameter.
    """

    def __init__(self, domain: OmegaDomain, seed):
        if domain.kind != "polytope" or domain.dim != 2:
            raise ExperimentError("exact engine requires a 2-D polytope domain")
        self.domain = domain
        self.seed = seed
        self.geometry = domain.geometry
        self.poly = geo.order_polygon_ccw(self.geometry.vertices)
        dv = 1
        for v in self.geometry.vertices:
            for x in v:
                d = int(x.denominator)
                dv = dv * d // math.gcd(dv, d)
        self.scale = int((1 << POINT_DENOM_BITS) * dv)
        lo, hi = self.geometry.bounding_box()
        self.lo = lo
        self.span = tuple(h - l for l, h in zip(lo, hi))
        # explicit coefficients, integer-scaled
        self.q_index = {}
        cap = 1024
        self.qx = np.zeros(cap, dtype=np.int64)
        self.qy = np.zeros(cap, dtype=np.int64)
        self.qnorm = np.zeros(cap, dtype=np.int64)  # ceil upper bound on |q|
        self.acoef = np.zeros(cap, dtype=np.int64)
        self.count = 0
        self._support_scaled = {}
        self._support_rats = {}
        self._max_abs_q = 1
        zero = (0, 0)
        self._append(zero, 0)
        self.facets = [
            (h.normal, h.offset)
            for i, h in enumerate(self.geometry.halfspaces)
            if not self.geometry.redundant[i]
        ]

    # -- bookkeeping ----------------------------------------------------

    def _append(self, q, a_scaled):
        if self.count == len(self.qx):
            for name in ("qx", "qy", "qnorm", "acoef"):
                arr = getattr(self, name)
                setattr(self, name, np.concatenate([arr, np.zeros_like(arr)]))
        i = self.count
        self.qx[i], self.qy[i] = q
        self.qnorm[i] = isqrt(q[0] * q[0] + q[1] * q[1]) + 1
        self.acoef[i] = a_scaled
        self.q_index[q] = i
        self.count += 1
        self._max_abs_q = max(self._max_abs_q, abs(q[0]), abs(q[1]))

    def _support(self, q):
        v = self._support_scaled.get(q)
        if v is None:
            v = int(self.domain.support_value(q) * self.scale)
            self._support_scaled[q] = v
        return v

    def audit(self):
        """Operating-bound audit: int64 headroom for the dot products."""
        if self.count == 0:
            return
        max_a = int(np.abs(self.acoef[: self.count]).max())
        max_c = max(abs(int(x * self.scale)) for v in self.poly for x in v)
        if self._max_abs_q * max_c * 4 + max_a >= (1 << 62):
            raise geo.ResourceCapError("integer scale headroom exhausted")

    # -- per-sample operations -------------------------------------------

    def draw_point(self, index):
        denom = 1 << POINT_DENOM_BITS
        for attempt in range(1000):
            w0, w1, _ = _sample_words(self.seed, index, attempt)
            p = (
                self.lo[0] + self.span[0] * rat(w0 % denom, denom),
                self.lo[1] + self.span[1] * rat(w1 % denom, denom),
            )
            if self.geometry.contains(p, strict=True):
                return p
        raise ExperimentError(f"rejection sampling failed at index {index}")

    def _scaled_point(self, p):
        xs = p[0] * self.scale
        ys = p[1] * self.scale
        return int(xs), int(ys)

    def _explicit_values(self, ps):
        n = self.count
        return (
            self.qx[:n] * ps[0] + self.qy[:n] * ps[1] + self.acoef[:n]
        )

    def _default_min(self, p, ps, limit_scaled, exclude=None):
        """(best scaled value, argmin q) over defaults with value < limit."""
        r = self.domain.boundary_distance_lb(p)
        best = None
        best_q = None
        limit = as_exact(limit_scaled) / self.scale
        rr = r * r
        k = 1
        scanned = 0
        while True:
            cur = limit if best is None else min(limit, as_exact(best) / self.scale)
            if k * rr > cur * cur:
                break
            for q in geo.lattice_shell(2, k):
                if q in self.q_index or q == exclude:
                    continue
                v = ps[0] * q[0] + ps[1] * q[1] - self._support(q)
                if best is None or v < best:
                    best, best_q = v, q
            scanned += len(geo.lattice_shell(2, k))
            if scanned > 200000:
                raise geo.ResourceCapError("default scan exceeded cap")
            k += 1
        return best, best_q

    def _default_ties(self, ps, value_scaled, p, exclude=None):
        """All default exponents attaining the given scaled value at p."""
        out = []
        r = self.domain.boundary_distance_lb(p)
        rr = r * r
        val = as_exact(value_scaled) / self.scale
        k = 1
        while k * rr <= val * val:
            for q in geo.lattice_shell(2, k):
                if q in self.q_index or q == exclude:
                    continue
                if ps[0] * q[0] + ps[1] * q[1] - self._support(q) == value_scaled:
                    out.append(q)
            k += 1
        return out

    def wave(self, index):
        """Draw a point, record the face measure, apply one wave."""
        p = self.draw_point(index)
        ps = self._scaled_point(p)
        vals = self._explicit_values(ps)
        emin_idx = int(np.argmin(vals))
        emin = int(vals[emin_idx])
        dmin, dq = self._default_min(p, ps, emin)
        if dmin is not None and dmin < emin:
            fval, q0, q0_explicit = dmin, dq, False
            tie = self._default_ties(ps, dmin, p)
            unique = len(tie) == 1
        else:
            fval = emin
            ties = np.flatnonzero(vals[: self.count] == emin)
            q0 = (int(self.qx[ties[0]]), int(self.qy[ties[0]]))
            q0_explicit = True
            unique = len(ties) == 1
            if unique and dmin is not None and dmin == emin:
                unique = False
        if not unique:
            return AvalancheSample(
                index, p, None, RAT_ZERO, RAT_ZERO, index + 1
            )
        measure = self._face_measure(p, ps, fval, q0)
        # increment: second-smallest value at p over everything but q0
        if q0_explicit:
            masked = vals[: self.count].copy()
            masked[self.q_index[q0]] = np.iinfo(np.int64).max
            esecond = int(masked.min()) if self.count > 1 else None
        else:
            esecond = emin
        dsecond, _ = self._default_min(
            p, ps, esecond if esecond is not None else fval * 2 + self.scale,
            exclude=q0 if not q0_explicit else None,
        )
        cands = [v for v in (esecond, dsecond) if v is not None]
        second = min(cands)
        c_scaled = second - fval
        new_a = second - (ps[0] * q0[0] + ps[1] * q0[1])
        if q0_explicit:
            self.acoef[self.q_index[q0]] = new_a
        else:
            self._append(q0, new_a)
        if (index + 1) % AUDIT_INTERVAL == 0:
            self.audit()
        return AvalancheSample(
            index,
            p,
            q0,
            measure,
            as_exact(c_scaled) / self.scale,
            index + 1,
        )

    # -- exact face polygon ----------------------------------------------

    def _support_rat(self, q):
        v = self._support_rats.get(q)
        if v is None:
            v = as_exact(self._support(q)) / self.scale
            self._support_rats[q] = v
        return v

    def _face_measure(self, p, ps, fval, q0):
        """Exact polygon of the face of q0 containing p.

        Explicit constraints are handled by masked clipping rounds: any
        explicit monomial cutting the current polygon must satisfy
        value_at_p <= f(p) + (|q| + |q0|) * diameter, so once no unapplied
        candidate passes the mask the polygon is certified against the
        whole explicit family.  Implicit defaults are certified per vertex.
        """
        poly = list(self.poly)
        a0 = as_exact(int(fval) - (ps[0] * q0[0] + ps[1] * q0[1])) / self.scale
        n = self.count
        if n > 0:
            vals = self._explicit_values(ps)
            n0 = isqrt(q0[0] * q0[0] + q0[1] * q0[1]) + 1
            applied = np.zeros(n, dtype=bool)
            if q0 in self.q_index:
                applied[self.q_index[q0]] = True
            first = True
            for _round in range(200):
                diam = self._poly_diameter_scaled(poly)
                bound = fval + (self.qnorm[:n] + n0) * diam
                cand = np.flatnonzero((vals[:n] <= bound) & ~applied[:n])
                if cand.size == 0:
                    break
                order = cand[np.argsort(vals[cand], kind="stable")]
                if first:
                    order = order[:48]
                    first = False
                for i in order:
                    applied[i] = True
                    q = (int(self.qx[i]), int(self.qy[i]))
                    a = as_exact(int(self.acoef[i])) / self.scale
                    poly = geo.clip_polygon(poly, geo.vec_sub(q, q0), a0 - a)
                    if len(poly) < 3:
                        raise ExperimentError("face collapsed during clipping")
            else:
                raise geo.ResourceCapError("masked clipping exceeded round cap")
        # certify against implicit defaults, vertex by vertex
        certified = set()
        for _ in range(200):
            cut = self._find_default_cut(poly, q0, a0, certified)
            if cut is None:
                break
            qstar, astar = cut
            poly = geo.clip_polygon(poly, geo.vec_sub(qstar, q0), a0 - astar)
            if len(poly) < 3:
                raise ExperimentError("face collapsed during certification")
        else:
            raise geo.ResourceCapError("face certification exceeded cap")
        return geo.polygon_area(poly)

    def _poly_diameter_scaled(self, poly):
        xs = [x for x, _ in poly]
        ys = [y for _, y in poly]
        dx = int((max(xs) - min(xs)) * self.scale) + 1
        dy = int((max(ys) - min(ys)) * self.scale) + 1
        return isqrt(dx * dx + dy * dy) + 1

    def _find_default_cut(self, poly, q0, a0, certified):
        for v in poly:
            if v in certified:
                continue
            val0 = geo.dot(q0, v) + a0
            tight = self.geometry.boundary_tight(v)
            if tight:
                if val0 > 0:
                    for i in sorted(tight):
                        if self.geometry.redundant[i]:
                            continue
                        n = self.geometry.halfspaces[i].normal
                        k = 1
                        while True:
                            qn = (k * n[0], k * n[1])
                            if qn not in self.q_index and qn != q0:
                                return qn, -self._support_rat(qn)
                            k += 1
                certified.add(v)
                continue
            cut = self._vertex_default_cut(v, val0, q0)
            if cut is not None:
                return cut
            certified.add(v)
        return None

    def _vertex_default_cut(self, v, val0, q0):
        # facet-multiple candidates give a cheap initial cutoff
        best = val0
        best_q = None
        for n, b in self.facets:
            k = 1
            while True:
                qn = (k * n[0], k * n[1])
                if qn not in self.q_index and qn != q0:
                    lv = k * (geo.dot(n, v) - b)
                    if lv < best:
                        best, best_q = lv, qn
                    break
                k += 1
        r = self.domain.boundary_distance_lb(v)
        rr = r * r
        k = 1
        scanned = 0
        while k * rr <= best * best:
            for q in geo.lattice_shell(2, k):
                if q in self.q_index or q == q0:
                    continue
                lv = geo.dot(q, v) - self._support_rat(q)
                if lv < best:
                    best, best_q = lv, q
            scanned += len(geo.lattice_shell(2, k))
            if scanned > 200000:
                raise geo.ResourceCapError("vertex certification scan exceeded cap")
            k += 1
        if best_q is None:
            return None
        return best_q, -self._support_rat(best_q)


def _ball_unit_vectors(kmax=6):
    out = []
    for k in range(1, kmax + 1):
        out.extend(geo.lattice_shell(2, k))
    return out


class _ApproxBallEngine:
    """Float avalanche engine for disk domains; measures are approximate."""

    def __init__(self, domain: OmegaDomain, seed):
        if domain.kind != "ball" or domain.dim != 2:
            raise ExperimentError("approximate engine requires a 2-D ball domain")
        self.domain = domain
        self.seed = seed
        self.coeffs = {(0, 0): 0.0}
        self.center = domain.center
        self.radius = domain.radius

    def draw_point(self, index):
        denom = 1 << POINT_DENOM_BITS
        for attempt in range(1000):
            w0, w1, _ = _sample_words(self.seed, index, attempt)
            x = self.center[0] + self.radius * (2.0 * (w0 % denom) / denom - 1.0)
            y = self.center[1] + self.radius * (2.0 * (w1 % denom) / denom - 1.0)
            if math.dist((x, y), self.center) < self.radius * (1 - 1e-12):
                return (x, y)
        raise ExperimentError(f"rejection sampling failed at index {index}")

    def _candidates(self, p, best):
        r = self.radius - math.dist(p, self.center)
        kmax = max(1, math.ceil((best / max(r, 1e-12)) ** 2))
        for k in range(1, kmax + 1):
            if k * r * r > best * best + 1e-15:
                break
            yield from geo.lattice_shell(2, k)

    def _value(self, q, p):
        a = self.coeffs.get(q)
        if a is None:
            a = -self.domain.support_value(q)
        return q[0] * p[0] + q[1] * p[1] + a

    def wave(self, index):
        p = self.draw_point(index)
        vals = {q: self._value(q, p) for q in self.coeffs}
        best_q = min(sorted(vals), key=lambda q: vals[q])
        best = vals[best_q]
        for q in self._candidates(p, best):
            if q in self.coeffs:
                continue
            v = self._value(q, p)
            if v < best - 1e-15:
                best, best_q = v, q
        near = [q for q in self.coeffs if vals[q] <= best + 1e-9 and q != best_q]
        for q in self._candidates(p, best + 1e-9):
            if q not in self.coeffs and q != best_q:
                if self._value(q, p) <= best + 1e-9:
                    near.append(q)
        if near:
            return AvalancheSample(index, p, None, 0.0, 0.0, index + 1)
        measure = self._face_measure(p, best_q)
        second = None
        for q in self.coeffs:
            if q == best_q:
                continue
            v = vals[q]
            second = v if second is None else min(second, v)
        cap = second if second is not None else best + 4 * self.radius
        for q in self._candidates(p, cap):
            if q == best_q or q in self.coeffs:
                continue
            v = self._value(q, p)
            second = v if second is None else min(second, v)
        c = second - best
        self.coeffs[best_q] = second - (best_q[0] * p[0] + best_q[1] * p[1])
        return AvalancheSample(index, p, best_q, measure, c, index + 1)

    def _face_measure(self, p, q0):
        a0 = self.coeffs.get(q0)
        if a0 is None:
            a0 = -self.domain.support_value(q0)
        r = self.radius
        c = self.center
        box = [
            (c[0] - r, c[1] - r),
            (c[0] + r, c[1] - r),
            (c[0] + r, c[1] + r),
            (c[0] - r, c[1] + r),
        ]
        poly = box
        others = [q for q in self.coeffs if q != q0]
        slope_cap = math.ceil(max(abs(q0[0]), abs(q0[1]), 2)) + 2
        for k in range(1, 2 * slope_cap * slope_cap + 1):
            for q in geo.lattice_shell(2, k):
                if q != q0 and q not in self.coeffs:
                    others.append(q)
        for q in others:
            a = self.coeffs.get(q)
            if a is None:
                a = -self.domain.support_value(q)
            poly = geo.clip_polygon(poly, geo.vec_sub(q, q0), float(a0 - a))
            if len(poly) < 3:
                return 0.0
        return _circle_polygon_area(poly, c, r)


def _circle_polygon_area(poly, center, radius):
    """Area of (convex polygon) intersect (disk); float, Green's theorem."""
    if len(poly) < 3:
        return 0.0
    pts = [(float(x) - center[0], float(y) - center[1]) for x, y in poly]
    r2 = radius * radius
    total = 0.0
    m = len(pts)
    for i in range(m):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % m]
        total += _chord_contribution(x1, y1, x2, y2, radius, r2)
    return abs(total)


def _chord_contribution(x1, y1, x2, y2, r, r2):
    def sector(xa, ya, xb, yb):
        ang = math.atan2(ya, xa) - math.atan2(yb, xb)
        while ang > math.pi:
            ang -= 2 * math.pi
        while ang < -math.pi:
            ang += 2 * math.pi
        return -0.5 * r2 * ang

    inside1 = x1 * x1 + y1 * y1 <= r2 + 1e-12
    inside2 = x2 * x2 + y2 * y2 <= r2 + 1e-12
    dx, dy = x2 - x1, y2 - y1
    a = dx * dx + dy * dy
    if a == 0:
        return 0.0
    b = 2 * (x1 * dx + y1 * dy)
    cc = x1 * x1 + y1 * y1 - r2
    disc = b * b - 4 * a * cc
    ts = []
    if disc > 0:
        sq = math.sqrt(disc)
        for t in ((-b - sq) / (2 * a), (-b + sq) / (2 * a)):
            if 0 < t < 1:
                ts.append(t)
    ts = sorted(set(ts))
    points = [(x1, y1, inside1)] + [
        (x1 + t * dx, y1 + t * dy, True) for t in ts
    ] + [(x2, y2, inside2)]
    area = 0.0
    for (xa, ya, _ia), (xb, yb, _ib) in zip(points, points[1:]):
        xm, ym = (xa + xb) / 2, (ya + yb) / 2
        if xm * xm + ym * ym <= r2:
            area += 0.5 * (xa * yb - xb * ya)
        else:
            area += sector(xa, ya, xb, yb)
    return area


def avalanche_experiment(domain: OmegaDomain, sample_count: int, seed, mode=None):
    """Run the avalanche experiment; deterministic for a fixed seed.

    Each sample draws a sub-seeded point, records the measure of the face
    containing it (zero when the point lands on the corner locus), and
    applies one wave.  Exact 2-D polytope domains produce exact rational
    measures; ball domains run approximately.
    """
    if sample_count < 1:
        raise ExperimentError("sample_count must be >= 1")
    if mode is None:
        mode = "exact" if domain.exact else "approximate"
    if mode == "exact":
        engine = _ExactSquareLatticeEngine(domain, seed)
    else:
        engine = _ApproxBallEngine(domain, seed)
    return [engine.wave(i) for i in range(sample_count)]


def samples_to_csv(samples) -> str:
    """CSV with 12-significant-digit decimal columns plus exact p/q columns."""
    lines = [
        "index,px,py,qx,qy,measure,c,px_exact,py_exact,measure_exact,c_exact"
    ]
    for s in samples:
        px, py = s.point
        qx = s.q0[0] if s.q0 else ""
        qy = s.q0[1] if s.q0 else ""
        exact = not isinstance(px, float)
        lines.append(
            ",".join(
                [
                    str(s.index),
                    f"{float(px):.12g}",
                    f"{float(py):.12g}",
                    str(qx),
                    str(qy),
                    f"{float(s.measure):.12g}",
                    f"{float(s.c):.12g}",
                    rat_str(px) if exact else f"{px!r}",
                    rat_str(py) if exact else f"{py!r}",
                    rat_str(s.measure) if exact else f"{s.measure!r}",
                    rat_str(s.c) if exact else f"{s.c!r}",
                ]
            )
        )
    return "\n".join(lines) + "\n"


def write_samples_csv(samples, path):
    with open(path, "w") as fh:
        fh.write(samples_to_csv(samples))


# ---------------------------------------------------------------------------
# power-law fitting


MIN_TAIL = 50


def synthetic_pareto(alpha: float, n: int, seed, x_min: float = 1.0):
    """Seeded continuous power-law samples with density ~ x^(-alpha)."""
    import random as _random

    rng = _random.Random(f"pareto:{seed}")
    expo = -1.0 / (alpha - 1.0)
    return [x_min * (1.0 - rng.random()) ** expo for _ in range(n)]


def _mle_fit(tail, x_min):
    logs = [math.log(v / x_min) for v in tail]
    s = sum(logs)
    if s <= 0:
        raise PowerLawDataError("degenerate tail: zero log spread")
    alpha = 1.0 + len(tail) / s
    ks = _ks_distance(tail, x_min, alpha)
    return alpha, ks


def _ks_distance(tail, x_min, alpha):
    n = len(tail)
    d = 0.0
    for i, x in enumerate(sorted(tail)):
        model = 1.0 - (x / x_min) ** (1.0 - alpha)
        d = max(d, abs((i + 1) / n - model), abs(i / n - model))
    return d


def _log_binned_slope(values, x_min):
    tail = sorted(v for v in values if v >= x_min)
    if len(tail) < MIN_TAIL:
        return None
    top = tail[-1]
    if top <= x_min:
        return None
    edges = [x_min]
    while edges[-1] < top:
        edges.append(edges[-1] * 2.0)
    xs, ys = [], []
    for a, b in zip(edges, edges[1:]):
        cnt = sum(1 for v in tail if a <= v < b)
        if cnt:
            xs.append(math.log((a + b) / 2))
            ys.append(math.log(cnt / (len(tail) * (b - a))))
    if len(xs) < 3:
        return None
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = sum((x - mx) ** 2 for x in xs)
    if den == 0:
        return None
    return -num / den


def fit_power_law(values, x_min=None) -> PowerLawFit:
    """Continuous-MLE power-law fit with a KS diagnostic.

    x_min may be a number (fixed threshold) or None for a KS-minimizing
    scan over sample quantiles.  Requires at least 50 tail samples.
    """
    vals = sorted(float(v) for v in values if float(v) > 0)
    if not vals:
        raise PowerLawDataError("no positive samples")
    if x_min is not None and x_min != "scan":
        xm = float(x_min)
        tail = [v for v in vals if v >= xm]
        if len(tail) < MIN_TAIL:
            raise PowerLawDataError(
                f"needs >= {MIN_TAIL} samples above x_min, got {len(tail)}"
            )
        alpha, ks = _mle_fit(tail, xm)
        return PowerLawFit(xm, alpha, len(tail), ks, "mle",
                           _log_binned_slope(vals, xm))
    # scan candidate thresholds at sample quantiles
    best = None
    qs = [vals[int(f * (len(vals) - 1))] for f in
          (0.0, 0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8)]
    for xm in sorted(set(qs)):
        tail = [v for v in vals if v >= xm]
        if len(tail) < MIN_TAIL:
            continue
        try:
            alpha, ks = _mle_fit(tail, xm)
        except PowerLawDataError:
            continue
        if best is None or ks < best[0]:
            best = (ks, xm, alpha, len(tail))
    if best is None:
        raise PowerLawDataError(
            f"no candidate threshold keeps >= {MIN_TAIL} tail samples with spread"
        )
    ks, xm, alpha, n_tail = best
    return PowerLawFit(xm, alpha, n_tail, ks, "mle-scan",
                       _log_binned_slope(vals, xm))
