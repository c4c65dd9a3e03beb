"""Min-plus series over a compact convex domain.

A series is a finite explicit coefficient map q -> a_q together with
implicit defaults a_q = -c_q for every other integer exponent, so the
untouched part of the series is exactly the family of slope functions
l_q.  Values are pointwise minima; at interior points the minimum is
attained and computed exactly through a certified lattice-ball cutoff,
never through the explicit map alone.

Explicit coefficients are stored as deltas above the defaults, which
keeps "raised" and "untouched" distinguishable and makes nonnegativity
(a_q >= -c_q, i.e. the monomial is nonnegative on the domain) structural.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import geometry as geo
from .domain import DomainError, NotInteriorError, OmegaDomain
from .scalars import APPROX_TOL, RAT_ZERO, as_exact, rat, rat_str

#: shell-scan cap for per-point default enumeration
DEFAULT_SHELL_CAP = 400000


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class Monomial:
    """Affine piece q.z + a with integer slope q; nonnegative on the domain."""

    q: tuple
    a: object


@dataclass(frozen=True)
class WorkingSetCertificate:
    """Bounds used to build a working monomial set."""

    budget_factor: object
    per_point: tuple  # (point, value_bound, radius_sq) triples


class TropicalSeries:
    """Immutable min-plus series; operations return new instances."""

    def __init__(self, domain: OmegaDomain, coefficients=None, working_set=None,
                 use_defaults=True, certificate=None, canonicalized=False):
        self.domain = domain
        self.use_defaults = bool(use_defaults)
        deltas = {}
        if coefficients:
            for q, a in dict(coefficients).items():
                q = tuple(int(x) for x in q)
                a = as_exact(a) if domain.exact else float(a)
                d = a - domain.monomial_default(q)
                if domain.exact:
                    if d < 0:
                        raise SeriesError(
                            f"coefficient {a} for {q} below default {domain.monomial_default(q)}"
                        )
                elif d < -APPROX_TOL:
                    raise SeriesError(f"coefficient {a} for {q} below default")
                deltas[q] = d
        self._delta = deltas
        ws = set(working_set or [])
        ws.update(deltas.keys())
        self.working_set = tuple(sorted(ws))
        self.certificate = certificate
        self.canonicalized = bool(canonicalized)
        #: open-region support, set by small_canonical_form
        self.active_support = None
        self._small_form = None
        self._complex = None

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, domain: OmegaDomain) -> "TropicalSeries":
        z = tuple(0 for _ in range(domain.dim))
        zero_val = RAT_ZERO if domain.exact else 0.0
        return cls(domain, {z: zero_val})

    @classmethod
    def from_monomials(cls, domain, monomials, **kw) -> "TropicalSeries":
        coeffs = {}
        for m in monomials:
            q, a = (m.q, m.a) if isinstance(m, Monomial) else m
            q = tuple(int(x) for x in q)
            if q in coeffs:
                coeffs[q] = min(coeffs[q], a)
            else:
                coeffs[q] = a
        return cls(domain, coeffs, **kw)

    # -- coefficient access ----------------------------------------------

    @property
    def explicit_support(self):
        return tuple(sorted(self._delta.keys()))

    def delta(self, q):
        zero = RAT_ZERO if self.domain.exact else 0.0
        return self._delta.get(tuple(q), zero)

    def coefficient(self, q):
        """Absolute coefficient a_q (default -c_q when not explicit)."""
        q = tuple(q)
        base = self.domain.monomial_default(q)
        d = self._delta.get(q)
        return base if d is None else base + d

    def explicit_items(self):
        """(q, absolute coefficient) pairs for the explicit support."""
        for q in sorted(self._delta.keys()):
            yield q, self.coefficient(q)

    def monomials(self):
        return tuple(Monomial(q, a) for q, a in self.explicit_items())

    def with_coefficient(self, q, a) -> "TropicalSeries":
        coeffs = dict(self.explicit_items())
        coeffs[tuple(q)] = a
        return TropicalSeries(self.domain, coeffs, working_set=self.working_set,
                              use_defaults=self.use_defaults, certificate=self.certificate)

    def raised(self, q, inc) -> "TropicalSeries":
        """New series with the q coefficient raised by inc >= 0."""
        if inc < 0:
            raise SeriesError("coefficients may only be raised")
        return self.with_coefficient(q, self.coefficient(q) + inc)

    # -- evaluation -------------------------------------------------------

    def value_argmin(self, z, exclude=None):
        """(min value, attaining exponents) over explicit and default monomials.

        Interior points use the cutoff l_q(z) >= |q| R(z) to enumerate only
        finitely many defaults; boundary points return 0 directly with the
        vanishing monomials found among facet-normal multiples.
        """
        dom = self.domain
        z = dom.check_point(z)
        if not dom.contains(z):
            raise DomainError(f"point outside domain: {z}")
        exact = dom.exact
        tol = 0 if exact else APPROX_TOL
        best = None
        cands = []
        for q, d in self._delta.items():
            if q == exclude:
                continue
            v = geo.dot(q, z) + dom.monomial_default(q) + d
            if best is None or v < best:
                best = v
            if v <= best + tol:
                cands.append((q, v))
        if not self.use_defaults:
            if best is None:
                raise SeriesError("empty series without defaults")
            args = sorted(q for q, v in cands if v <= best + tol)
            return best, tuple(args)
        if dom.on_boundary(z):
            zero = RAT_ZERO if exact else 0.0
            vanish = [q for q, v in cands if abs(v) <= tol]
            vanish.extend(self._boundary_vanishers(z, exclude))
            return zero, tuple(sorted(set(vanish)))
        zero_vec = tuple(0 for _ in range(dom.dim))
        if zero_vec not in self._delta and exclude != zero_vec:
            v = RAT_ZERO if exact else 0.0
            if best is None or v < best:
                best = v
            if v <= best + tol:
                cands.append((zero_vec, v))
        if best is None:
            seeds = dom.facet_normals() if dom.kind == "polytope" else self._seed_axes()
            for n in seeds:
                v = dom.l_q(n, z)
                if best is None or v < best:
                    best = v
        r = dom.boundary_distance_lb(z)
        rr = r * r
        k = 1
        scanned = 0
        while k * rr <= best * best + tol:
            for q in geo.lattice_shell(dom.dim, k):
                scanned += 1
                if q in self._delta or q == exclude:
                    continue
                v = dom.l_q(q, z)
                if v < best:
                    best = v
                if v <= best + tol:
                    cands.append((q, v))
            if scanned > DEFAULT_SHELL_CAP:
                raise geo.ResourceCapError(
                    f"default enumeration at {z} exceeded {DEFAULT_SHELL_CAP} points"
                )
            k += 1
        args = sorted(set(q for q, v in cands if v <= best + tol))
        return best, tuple(args)

    def _seed_axes(self):
        n = self.domain.dim
        out = []
        for i in range(n):
            out.append(tuple(1 if j == i else 0 for j in range(n)))
            out.append(tuple(-1 if j == i else 0 for j in range(n)))
        return out

    def _boundary_vanishers(self, z, exclude=None):
        """Unraised facet-normal multiples whose monomial vanishes at boundary z."""
        dom = self.domain
        if dom.kind != "polytope":
            return []
        out = []
        for i in sorted(dom.geometry.boundary_tight(z)):
            if dom.geometry.redundant[i]:
                continue
            n = dom.geometry.halfspaces[i].normal
            for k in range(1, len(self._delta) + 2):
                q = tuple(k * x for x in n)
                if q not in self._delta and q != exclude:
                    out.append(q)
                    break
        return out

    def evaluate(self, z):
        return self.value_argmin(z)[0]

    def argmin_set(self, z):
        return self.value_argmin(z)[1]

    def second_value(self, z, exclude):
        """Minimum over all monomials except the one with exponent `exclude`."""
        return self.value_argmin(z, exclude=tuple(exclude))[0]

    # -- serialization ------------------------------------------------------

    def to_json_dict(self, domain_ref=None):
        monomials = []
        for q, a in self.explicit_items():
            a_repr = rat_str(a) if self.domain.exact else float(a)
            monomials.append({"q": [int(x) for x in q], "a": a_repr})
        return {"domain_ref": domain_ref or repr(self.domain), "monomials": monomials}

    def __repr__(self):
        parts = ", ".join(
            f"{q}:{a}" for q, a in list(self.explicit_items())[:6]
        )
        more = "" if len(self._delta) <= 6 else f", ... ({len(self._delta)} total)"
        return f"TropicalSeries({parts}{more})"


# ---------------------------------------------------------------------------
# module-level operations


def zero_series(domain: OmegaDomain) -> TropicalSeries:
    """The series that is identically zero (empty corner locus)."""
    return TropicalSeries.zero(domain)


def working_monomial_set(domain: OmegaDomain, points, budget_factor=1):
    """Exponents that can contribute at the given points, with certificate.

    Returns the union over p of {q : l_q(p) <= budget_factor * |P| * w(p)}
    where w is the weighted distance; every monomial that can ever attain
    the minimum at a point of P while the closure dynamic runs from the
    zero series lies in this set, because values at p never exceed
    |P| * w(p).  budget_factor > 1 adds safety margin for user-supplied
    initial series.
    """
    budget = as_exact(budget_factor) if domain.exact else float(budget_factor)
    pts = [domain.check_point(p) for p in points]
    out = {tuple(0 for _ in range(domain.dim))}
    cert = []
    for p in pts:
        w = domain.weighted_distance(p)
        r = domain.boundary_distance_lb(p)
        bound = budget * len(pts) * w
        radius_sq = (bound / r) ** 2
        try:
            ball = geo.lattice_ball(radius_sq, domain.dim)
        except geo.ResourceCapError as e:
            raise geo.ResourceCapError(
                f"working set at point {p} with value bound {bound}: {e}"
            ) from e
        for q in ball:
            if all(x == 0 for x in q):
                continue
            if domain.l_q(q, p) <= bound:
                out.add(q)
        cert.append((p, bound, radius_sq))
    return sorted(out), WorkingSetCertificate(budget, tuple(cert))


def evaluate(f: TropicalSeries, z):
    return f.evaluate(z)


def argmin_set(f: TropicalSeries, z):
    return f.argmin_set(z)


def canonical_form(f: TropicalSeries) -> TropicalSeries:
    """Replace every working-set coefficient by the least faithful value.

    The least coefficient keeping the function unchanged is
    sup_z (f(z) - q.z), attained at a vertex of the linearity-cell
    decomposition because f - q.z is affine on every cell.  Idempotent.
    """
    from .subdivision import build_complex

    cx = build_complex(f)
    probe = set(f.working_set) | set(f.explicit_support) | set(cx.regions.keys())
    coeffs = {}
    for q in sorted(probe):
        best = None
        for v in cx.all_vertices:
            val = f.evaluate(v) - geo.dot(q, v)
            if best is None or val > best:
                best = val
        coeffs[q] = best
    out = TropicalSeries(
        f.domain,
        coeffs,
        working_set=sorted(probe),
        use_defaults=f.use_defaults,
        certificate=f.certificate,
        canonicalized=True,
    )
    return out


def small_canonical_form(f: TropicalSeries) -> TropicalSeries:
    """Reduce to the monomials that are strictly minimal on an open set.

    Coefficients of surviving monomials are already canonical: an active
    monomial touches the function on its whole region.  Exponents whose
    implicit default would dip below the reduced minimum stay explicit at
    their canonical (touching) value, so the function is unchanged; the
    open-region support is exposed as ``active_support``.
    """
    if f._small_form is not None:
        return f._small_form
    from .subdivision import build_complex

    cx = build_complex(f)
    active = tuple(sorted(cx.regions.keys()))
    coeffs = {q: f.coefficient(q) for q in active}
    if f.use_defaults:
        coeffs = complete_against_defaults(f.domain, coeffs)
    out = TropicalSeries(
        f.domain,
        coeffs,
        working_set=sorted(set(f.working_set) | set(coeffs)),
        use_defaults=f.use_defaults,
        certificate=f.certificate,
        canonicalized=True,
    )
    out.active_support = active
    out._small_form = out
    f._small_form = out
    return out


def complete_against_defaults(domain: OmegaDomain, coefficients, max_rounds=60):
    """Extend a coefficient map so defaults never dip below its minimum.

    The intended function is the plain minimum of the given monomials.  Any
    implicit default l_q falling strictly below it somewhere would change
    the represented function, so each such q is added explicitly at its
    canonical (least faithful) value, which touches the intended function
    without changing it.  Returns the extended map.
    """
    from .subdivision import build_complex

    coeffs = dict(coefficients)
    target = TropicalSeries(domain, coeffs, use_defaults=False)
    verts = build_complex(target).all_vertices
    target_vals = [target.evaluate(v) for v in verts]
    for _ in range(max_rounds):
        trial = TropicalSeries(domain, coeffs, use_defaults=True)
        cx = build_complex(trial)
        extra = sorted(q for q in cx.regions if q not in coeffs)
        if not extra:
            return coeffs
        for q in extra:
            coeffs[q] = max(
                val - geo.dot(q, v) for val, v in zip(target_vals, verts)
            )
    raise SeriesError("default completion did not stabilize")


def rho(f: TropicalSeries, g: TropicalSeries):
    """sup over exponents of |a_q(f) - a_q(g)| with defaults filled in.

    Off the union of the explicit supports both series carry the default
    coefficient, so the sup is a finite max.
    """
    if f.domain != g.domain:
        raise SeriesError("series distance requires a common domain")
    if not (f.use_defaults and g.use_defaults):
        raise SeriesError("series distance requires default-backed series")
    support = set(f.explicit_support) | set(g.explicit_support)
    zero = RAT_ZERO if f.domain.exact else 0.0
    best = zero
    for q in support:
        d = abs(f.delta(q) - g.delta(q))
        if d > best:
            best = d
    return best


def series_from_json_dict(domain: OmegaDomain, data) -> TropicalSeries:
    coeffs = {}
    for m in data["monomials"]:
        q = tuple(int(x) for x in m["q"])
        a = m["a"]
        a = rat(a) if isinstance(a, str) else (as_exact(a) if domain.exact else float(a))
        coeffs[q] = a
    return TropicalSeries(domain, coeffs)
