"""Shrinking (wave) operators and their closure dynamics.

A single wave at an interior point p raises the unique attaining
monomial's coefficient until the second-smallest monomial value at p is
reached, putting p on the corner locus; the closure iterates waves over a
point schedule until a full pass changes nothing (exact mode) or changes
fall below a tolerance (approximate mode).  Level-set restrictions and
avalanche regions reuse the exact region machinery.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import geometry as geo
from .domain import NotInteriorError, OmegaDomain
from .scalars import APPROX_TOL, RAT_ZERO, as_exact, rat, rat_str
from .series import (
    TropicalSeries,
    complete_against_defaults,
    small_canonical_form,
    zero_series,
)


class DynamicsError(ValueError):
    pass


@dataclass(frozen=True)
class WaveStep:
    """One wave: which point was struck, what was raised, and by how much.

    c is zero exactly when the point already lay on the corner locus; in
    that case q0 is None and the series is unchanged.
    """

    point_index: int
    point: tuple
    q0: tuple | None
    c: object
    value_before: object
    value_after: object


@dataclass(frozen=True)
class FlowTrace:
    """Ordered record of the nonzero wave steps of a closure run."""

    steps: tuple
    schedule: str
    status: str  # "stabilized" | "tolerance" | "initial"
    total_waves: int = 0

    def to_json_list(self):
        return [
            {
                "order": i,
                "point_index": s.point_index,
                "q": [int(x) for x in s.q0],
                "c": rat_str(s.c) if not isinstance(s.c, float) else s.c,
            }
            for i, s in enumerate(self.steps)
        ]


@dataclass(frozen=True)
class RoundRobin:
    def describe(self):
        return "round_robin"

    def passes(self, m):
        order = list(range(m))
        while True:
            yield list(order)


@dataclass(frozen=True)
class SeededRandom:
    seed: int = 0

    def describe(self):
        return f"seeded_random({self.seed})"

    def passes(self, m):
        rng = random.Random(self.seed)
        order = list(range(m))
        while True:
            rng.shuffle(order)
            yield list(order)


def add_monomial(f: TropicalSeries, q, c, t=1) -> TropicalSeries:
    """Raise the q coefficient by c*t; t in [0,1] exposes the flow between
    the identity (t=0) and the full step (t=1)."""
    c = as_exact(c) if f.domain.exact else float(c)
    t = as_exact(t) if f.domain.exact else float(t)
    if c < 0:
        raise DynamicsError("wave increments must be nonnegative")
    if t < 0 or t > 1:
        raise DynamicsError("flow parameter t must lie in [0, 1]")
    return f.raised(tuple(q), c * t)


def wave_single(f: TropicalSeries, p, point_index=-1):
    """One wave at interior point p; returns (new series, step record)."""
    dom = f.domain
    p = dom.check_point(p)
    if not dom.contains(p, strict=True):
        raise NotInteriorError(f"wave point must be interior: {p}")
    val, args = f.value_argmin(p)
    if len(args) != 1:
        zero = RAT_ZERO if dom.exact else 0.0
        return f, WaveStep(point_index, p, None, zero, val, val)
    q0 = args[0]
    second = f.second_value(p, q0)
    c = second - val
    out = f.raised(q0, c)
    return out, WaveStep(point_index, p, q0, c, val, second)


def wave_closure(domain: OmegaDomain, points, f_init=None, schedule=None,
                 tolerance=None, step_cap=10**6):
    """Iterate waves over the points until the series stabilizes.

    Exact mode stops when a full pass over all points yields only zero
    increments (rational data stabilizes in finitely many steps: clearing
    denominators reduces to the integer-increment case).  Approximate mode
    stops when the largest increment of a pass drops below the tolerance.
    """
    pts = [domain.check_point(p) for p in points]
    if len(set(pts)) != len(pts):
        raise DynamicsError("closure points must be distinct")
    for p in pts:
        if not domain.contains(p, strict=True):
            raise NotInteriorError(f"closure point must be interior: {p}")
    schedule = schedule or RoundRobin()
    f = f_init if f_init is not None else zero_series(domain)
    if not pts:
        return f, FlowTrace((), schedule.describe(), "stabilized", 0)
    tol = tolerance
    if tol is None and not domain.exact:
        tol = APPROX_TOL
    steps = []
    waves = 0
    status = None
    for order in schedule.passes(len(pts)):
        zero_pass = True
        max_inc = RAT_ZERO if domain.exact else 0.0
        for i in order:
            f, step = wave_single(f, pts[i], i)
            waves += 1
            if step.q0 is not None and step.c > 0:
                steps.append(step)
                zero_pass = False
                if step.c > max_inc:
                    max_inc = step.c
            if waves > step_cap:
                raise geo.ResourceCapError(
                    f"closure exceeded {step_cap} waves; "
                    f"{len(steps)} nonzero steps recorded"
                )
        if domain.exact and tol is None:
            if zero_pass:
                status = "stabilized"
                break
        else:
            if zero_pass or max_inc < tol:
                status = "stabilized" if zero_pass else "tolerance"
                break
    return f, FlowTrace(tuple(steps), schedule.describe(), status, waves)


def level_set_polytope(f: TropicalSeries, eps):
    """Restrict to the superlevel region {f >= eps}.

    Returns (new domain, restricted series): the region is carved by the
    halfspaces {q.z + a_q >= eps} of the active monomials intersected with
    the ambient domain, and the restricted series carries the same active
    monomials with coefficients shifted down by eps.
    """
    from .subdivision import build_complex

    dom = f.domain
    if not dom.exact:
        raise DynamicsError("level sets require an exact polytope domain")
    eps = as_exact(eps)
    if eps <= 0:
        raise DynamicsError("level height must be positive")
    small = small_canonical_form(f)
    halfspaces = [
        h for i, h in enumerate(dom.geometry.halfspaces) if not dom.geometry.redundant[i]
    ]
    for q, a in small.explicit_items():
        if all(x == 0 for x in q):
            if a < eps:
                raise DynamicsError(f"eps too large: constant cap {a} < {eps}")
            continue
        halfspaces.append(geo.reduced_halfspace(q, eps - a))
    try:
        gg = geo.halfspaces_to_geometry(halfspaces, dom.dim)
    except geo.DegenerateDomainError as e:
        raise DynamicsError(f"eps too large: {e}") from e
    sub = OmegaDomain.from_geometry(gg)
    cx = build_complex(f, within=gg)
    coeffs = {}
    for q in cx.regions.keys():
        coeffs[q] = f.coefficient(q) - eps
    coeffs = complete_against_defaults(sub, coeffs)
    restricted = TropicalSeries(sub, coeffs, use_defaults=True, canonicalized=True)
    return sub, restricted


def avalanche_region(f: TropicalSeries, p):
    """The face containing p and its exact measure.

    This is the region a wave at p would change; a point already on the
    corner locus yields (None, 0).
    """
    from .subdivision import region_of_monomial

    dom = f.domain
    p = dom.check_point(p)
    if not dom.contains(p, strict=True):
        raise NotInteriorError(f"avalanche point must be interior: {p}")
    val, args = f.value_argmin(p)
    zero = RAT_ZERO if dom.exact else 0.0
    if len(args) != 1:
        return None, zero
    reg = region_of_monomial(f, args[0])
    if reg is None:
        return None, zero
    return reg, geo.measure(reg)
