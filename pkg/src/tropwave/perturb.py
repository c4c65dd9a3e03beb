"""Perturbed replay pipeline.

Builds a shrunken rational polytope Q inside the domain and a small
positive series g on it whose corner locus is mild, then replays the
recorded wave trace with increments reduced by delta while certifying
mildness of every sampled intermediate hypersurface, and finally verifies
that the replayed result stays within eps of the unperturbed closure.

The construction: restrict the closure result f to a superlevel set
{f >= eps_level}, shift down by eps_level, cap at eps_cap, complete the
active support to every lattice point of its convex hull, and diminish the
completed monomials by distinct random amounts so that each one carves a
region of its own; Q is the region where the diminished series stays
nonnegative.  Failures redraw the random amounts (halving the cap every
other retry) up to a retry limit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import geometry as geo
from .domain import OmegaDomain, mild_faces_check
from .dynamics import add_monomial, wave_closure, level_set_polytope
from .scalars import RAT_ZERO, as_exact, rat, rat_str
from .series import TropicalSeries, canonical_form, small_canonical_form
from .subdivision import build_complex, is_mild


class PerturbError(ValueError):
    pass


class PerturbBuildError(PerturbError):
    """The randomized build did not reach a mild configuration in time."""


@dataclass(frozen=True)
class PerturbConfig:
    eps: object
    eps_level: object = None
    eps_cap: object = None
    delta: object = None
    seed: int = 0
    retry_limit: int = 8
    flow_grid: int = 8
    probe_grid: int = 100

    def exact_eps(self):
        e = as_exact(self.eps)
        if e <= 0:
            raise PerturbError("eps must be positive")
        return e


@dataclass(frozen=True)
class FlowCheck:
    t: object
    mild: bool
    offender_cell: tuple | None
    offender_point: tuple | None


@dataclass(frozen=True)
class StepCertificate:
    order: int
    point_index: int
    q0: tuple | None
    increment: object
    checks: tuple

    @property
    def mild(self):
        return all(c.mild for c in self.checks)


@dataclass
class BuildResult:
    domain: OmegaDomain
    q_domain: OmegaDomain
    g: TropicalSeries
    f_closure: TropicalSeries
    trace: object
    eps_level: object
    eps_cap: object
    diminished: dict
    retries: int


@dataclass
class PerturbReport:
    passed: bool
    certificates: tuple
    sup_distance: object
    worst_point: tuple | None
    eps: object
    failure: str | None = None

    def to_json_dict(self):
        return {
            "passed": bool(self.passed),
            "eps": rat_str(self.eps),
            "sup_distance": rat_str(self.sup_distance) if self.sup_distance is not None else None,
            "worst_point": [rat_str(x) for x in self.worst_point] if self.worst_point else None,
            "failure": self.failure,
            "steps": [
                {
                    "order": c.order,
                    "point_index": c.point_index,
                    "q": list(c.q0) if c.q0 else None,
                    "increment": rat_str(c.increment),
                    "mild": c.mild,
                    "checks": [
                        {
                            "t": rat_str(ch.t),
                            "mild": ch.mild,
                            "offender_cell": [list(q) for q in ch.offender_cell]
                            if ch.offender_cell
                            else None,
                            "offender_point": list(ch.offender_point)
                            if ch.offender_point
                            else None,
                        }
                        for ch in c.checks
                    ],
                }
                for c in self.certificates
            ],
        }


def _distinct_fractions(rng, count, bound):
    """count distinct rationals in (0, bound), reproducible from rng."""
    seen = set()
    out = []
    while len(out) < count:
        k = rng.randrange(1, 1 << 24)
        if k in seen:
            continue
        seen.add(k)
        out.append(bound * rat(k, 1 << 24))
    return out


def build_Q_and_g(domain: OmegaDomain, points, config: PerturbConfig,
                  closure=None) -> BuildResult:
    """Construct the shrunken polytope Q and the mild starting series g."""
    pts = [domain.check_point(p) for p in points]
    if not pts:
        raise PerturbError("empty point set")
    if not domain.exact:
        raise PerturbError("the perturbed pipeline requires an exact polytope domain")
    eps = config.exact_eps()
    if closure is None:
        f, trace = wave_closure(domain, pts)
    else:
        f, trace = closure
    fvals = [f.evaluate(p) for p in pts]
    fmin = min(fvals)
    if fmin <= 0:
        raise PerturbError("closure value vanishes at a marked point")
    eps_level = as_exact(config.eps_level) if config.eps_level is not None else min(
        eps / 4, fmin / 2
    )
    while any(v <= eps_level for v in fvals):
        eps_level = eps_level / 2
    q1_dom, g1 = level_set_polytope(f, eps_level)
    cap_limit = (fmin - eps_level) / 2
    eps_cap0 = as_exact(config.eps_cap) if config.eps_cap is not None else eps_level
    eps_cap0 = min(eps_cap0, eps_level, cap_limit)
    if eps_cap0 <= 0:
        raise PerturbError("cap height is not positive; eps_level too large")

    last_failure = None
    force_diminish = set()
    for attempt in range(config.retry_limit):
        eps_cap = eps_cap0 / (2 ** (attempt // 2))
        zero_vec = tuple(0 for _ in range(domain.dim))
        a0 = g1.coefficient(zero_vec)
        capped = small_canonical_form(g1.with_coefficient(zero_vec, min(a0, eps_cap)))
        support = list(capped.active_support)
        hull_points = geo.lattice_points_in_polytope(support)
        extras = [q for q in hull_points if q not in set(capped.explicit_support)]
        enriched = TropicalSeries(
            q1_dom,
            dict(capped.explicit_items()),
            working_set=hull_points,
            use_defaults=True,
        )
        canon = canonical_form(enriched)
        # every completed support point must end up with its own region on Q;
        # support points that lost theirs on an earlier attempt are diminished
        # as well, which restores a region without moving the function by
        # more than the draw bound
        targets = sorted(set(extras) | (force_diminish & set(hull_points)))
        rng = random.Random(f"{config.seed}:{attempt}")
        deltas = _distinct_fractions(rng, len(targets), eps_cap / 8)
        coeffs = dict(capped.explicit_items())
        diminished = {}
        for q, d in zip(targets, deltas):
            if all(x == 0 for x in q):
                continue
            coeffs[q] = canon.coefficient(q) - d
            diminished[q] = d
        halfspaces = [
            h
            for i, h in enumerate(q1_dom.geometry.halfspaces)
            if not q1_dom.geometry.redundant[i]
        ]
        for q, a in sorted(coeffs.items()):
            if all(x == 0 for x in q):
                continue
            halfspaces.append(geo.reduced_halfspace(q, -a))
        try:
            q_geom = geo.halfspaces_to_geometry(halfspaces, domain.dim)
        except geo.GeometryError as e:
            last_failure = f"degenerate Q on attempt {attempt}: {e}"
            continue
        q_dom = OmegaDomain.from_geometry(q_geom)
        try:
            g = TropicalSeries(q_dom, coeffs, working_set=hull_points)
        except Exception as e:  # coefficient below default: Q carved too deep
            last_failure = f"series invalid on Q at attempt {attempt}: {e}"
            continue
        face_report = mild_faces_check(q_geom)
        if not face_report.mild:
            off = face_report.first_offender
            last_failure = (
                f"attempt {attempt}: Q face with normals {off.normals} "
                f"not mild (lattice point {off.offender})"
            )
            continue
        active = set(build_complex(g).regions.keys())
        dead = [q for q in hull_points if q not in active]
        if dead:
            force_diminish.update(dead)
            last_failure = (
                f"attempt {attempt}: support points {dead} have no region on Q"
            )
            continue
        locus_report = is_mild(g)
        if not locus_report.mild:
            off = locus_report.first_offender
            last_failure = (
                f"attempt {attempt}: corner locus cell {sorted(off.cell.exponents)} "
                f"not mild (lattice point {off.offender})"
            )
            continue
        if not all(q_dom.contains(p, strict=True) for p in pts):
            last_failure = f"attempt {attempt}: a marked point left the interior of Q"
            continue
        return BuildResult(
            domain, q_dom, g, f, trace, eps_level, eps_cap, diminished, attempt
        )
    raise PerturbBuildError(last_failure or "perturbed build failed")


def _event_times(g: TropicalSeries, q0, base, inc):
    """Flow times in (0,1) where the raised monomial meets the rest at a
    complex vertex; combinatorial changes happen only at such times."""
    cx = build_complex(g)
    events = set()
    for v in cx.all_vertices:
        val0 = geo.dot(q0, v) + base
        if g.domain.on_boundary(v):
            other = RAT_ZERO
        else:
            val, args = g.value_argmin(v)
            other = g.second_value(v, q0) if args == (q0,) else val
        t = (other - val0) / inc
        if 0 < t < 1:
            events.add(t)
    return sorted(events)


def _sample_times(events, grid):
    ts = set(rat(k, grid) for k in range(1, grid))
    ts.update(events)
    ordered = sorted(set(events) | {RAT_ZERO, rat(1)})
    for a, b in zip(ordered, ordered[1:]):
        ts.add((a + b) / 2)
    return sorted(t for t in ts if 0 < t < 1)


def perturbed_replay(build: BuildResult, config: PerturbConfig) -> PerturbReport:
    """Replay the recorded trace on (Q, g) with increments reduced by delta.

    Every sampled flow time of every step is certified mild; afterwards the
    result is compared with the unperturbed closure shifted by eps_level on
    a probe grid plus the corner-locus vertices, and the report passes iff
    all certificates are mild and the sup difference is at most eps.
    """
    eps = config.exact_eps()
    n_steps = len(build.trace.steps)
    if config.delta is not None:
        # delta = 0 runs the unperturbed baseline, which may fail mildness
        delta = as_exact(config.delta)
        if delta < 0:
            raise PerturbError("delta must be nonnegative")
        pos = [s.c for s in build.trace.steps if s.c > 0]
        if pos and delta >= min(pos):
            raise PerturbError("delta must stay below the least trace increment")
    else:
        pos = [s.c for s in build.trace.steps if s.c > 0]
        delta = min(pos) / 2 if pos else rat(1)
        delta = min(delta, eps / (8 * (n_steps + 1)))
    g = build.g
    certificates = []
    failure = None
    for order, step in enumerate(build.trace.steps):
        w = build.q_domain.check_point(step.point)
        if not build.q_domain.contains(w, strict=True):
            raise PerturbError(f"trace point {w} is not interior to Q")
        val, args = g.value_argmin(w)
        if len(args) != 1:
            certificates.append(
                StepCertificate(order, step.point_index, None, RAT_ZERO, ())
            )
            continue
        q0 = args[0]
        c_full = g.second_value(w, q0) - val
        inc = c_full - delta
        if inc <= 0:
            certificates.append(
                StepCertificate(order, step.point_index, q0, RAT_ZERO, ())
            )
            continue
        base = g.coefficient(q0)
        events = _event_times(g, q0, base, inc)
        checks = []
        step_mild = True
        for t in _sample_times(events, config.flow_grid) + [rat(1)]:
            snap = add_monomial(g, q0, inc, t)
            rep = is_mild(snap)
            if rep.mild:
                checks.append(FlowCheck(t, True, None, None))
            else:
                off = rep.first_offender
                checks.append(
                    FlowCheck(
                        t,
                        False,
                        tuple(sorted(off.cell.exponents)),
                        off.offender,
                    )
                )
                step_mild = False
                failure = (
                    f"step {order} at t={t}: cell "
                    f"{sorted(off.cell.exponents)} contains {off.offender}"
                )
                break
        certificates.append(
            StepCertificate(order, step.point_index, q0, inc, tuple(checks))
        )
        if not step_mild:
            return PerturbReport(False, tuple(certificates), None, None, eps, failure)
        g = add_monomial(g, q0, inc, 1)

    sup = RAT_ZERO
    worst = None
    lo, hi = build.q_domain.geometry.bounding_box()
    grid = config.probe_grid
    n = build.q_domain.dim
    probes = []
    import itertools

    for idx in itertools.product(range(grid), repeat=n):
        z = tuple(
            lo[k] + (hi[k] - lo[k]) * rat(2 * idx[k] + 1, 2 * grid) for k in range(n)
        )
        if build.q_domain.contains(z):
            probes.append(z)
    for cell in build_complex(g).cells:
        if cell.dim == 0 and len(cell.exponents) >= 2:
            probes.append(cell.witness)
    for z in probes:
        d = abs(g.evaluate(z) - (build.f_closure.evaluate(z) - build.eps_level))
        if d > sup:
            sup = d
            worst = z
    passed = sup <= eps
    if not passed:
        failure = f"sup distance {sup} exceeds eps {eps} at {worst}"
    return PerturbReport(passed, tuple(certificates), sup, worst, eps, failure)


def run_pipeline(domain: OmegaDomain, points, config: PerturbConfig):
    """Closure, build, and replay in one call."""
    build = build_Q_and_g(domain, points, config)
    report = perturbed_replay(build, config)
    return build, report
