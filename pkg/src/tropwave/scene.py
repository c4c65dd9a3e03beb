"""Scene configuration files.

A scene bundles a domain, marked points, a schedule, and optional
perturbation / experiment settings in JSON.  Rationals travel as 'p/q'
strings; parsing and serialization round-trip losslessly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import geometry as geo
from .domain import OmegaDomain
from .dynamics import RoundRobin, SeededRandom
from .perturb import PerturbConfig
from .scalars import parse_rat, rat_str


class SceneError(ValueError):
    pass


@dataclass
class SceneConfig:
    name: str
    domain: OmegaDomain
    points: tuple
    schedule: object
    mode: str
    perturb: PerturbConfig | None = None
    experiment: dict | None = None
    initial_series: tuple | None = None

    def __eq__(self, other):
        if not isinstance(other, SceneConfig):
            return NotImplemented
        return scene_to_dict(self) == scene_to_dict(other)


def _domain_from_dict(d, mode):
    kind = d.get("type")
    if kind == "polytope":
        halfspaces = []
        for h in d["halfspaces"]:
            normal = tuple(int(x) for x in h["normal"])
            if not geo.is_primitive(normal):
                g = geo.vec_gcd(normal)
                fixed = tuple(x // g for x in normal)
                raise SceneError(
                    f"halfspace normal {list(normal)} is not primitive; "
                    f"divide by gcd {g} and use {list(fixed)} with offset "
                    f"{rat_str(parse_rat(h['offset']) / g)}"
                )
            halfspaces.append(geo.HalfSpace(normal, parse_rat(h["offset"])))
        dim = len(halfspaces[0].normal)
        if mode != "exact":
            raise SceneError("polytope domains run in exact mode")
        return OmegaDomain.from_halfspaces(halfspaces, dim)
    if kind == "ball":
        if mode == "exact":
            raise SceneError("ball domains require approximate mode")
        center = tuple(float(parse_rat(c)) for c in d["center"])
        return OmegaDomain.ball(center, float(parse_rat(d["radius"])))
    raise SceneError(f"unknown domain type {kind!r}")


def _domain_to_dict(dom: OmegaDomain):
    if dom.kind == "polytope":
        return {
            "type": "polytope",
            "halfspaces": [
                {"normal": [int(x) for x in h.normal], "offset": rat_str(h.offset)}
                for h in dom.geometry.halfspaces
            ],
        }
    if dom.kind == "ball":
        from fractions import Fraction

        return {
            "type": "ball",
            "center": [str(Fraction(c).limit_denominator(10**9)) for c in dom.center],
            "radius": str(Fraction(dom.radius).limit_denominator(10**9)),
        }
    raise SceneError("oracle domains are not serializable")


def scene_from_dict(data) -> SceneConfig:
    mode = data.get("mode", "exact")
    if mode not in ("exact", "approximate"):
        raise SceneError(f"unknown mode {mode!r}")
    dom = _domain_from_dict(data["domain"], mode)
    if dom.exact:
        points = tuple(
            tuple(parse_rat(c) for c in p) for p in data.get("points", [])
        )
    else:
        points = tuple(
            tuple(float(parse_rat(c)) for c in p) for p in data.get("points", [])
        )
    sched = data.get("schedule", {"kind": "round_robin"})
    if sched.get("kind") == "round_robin":
        schedule = RoundRobin()
    elif sched.get("kind") == "seeded_random":
        schedule = SeededRandom(int(sched.get("seed", 0)))
    else:
        raise SceneError(f"unknown schedule {sched!r}")
    pert = None
    if "perturb" in data:
        p = data["perturb"]
        pert = PerturbConfig(
            eps=parse_rat(p["eps"]),
            eps_level=parse_rat(p["eps_level"]) if "eps_level" in p else None,
            eps_cap=parse_rat(p["eps_cap"]) if "eps_cap" in p else None,
            delta=parse_rat(p["delta"]) if "delta" in p else None,
            seed=int(p.get("seed", 0)),
            retry_limit=int(p.get("retry_limit", 8)),
            flow_grid=int(p.get("flow_grid", 8)),
            probe_grid=int(p.get("probe_grid", 100)),
        )
    experiment = data.get("experiment")
    initial = None
    if "initial_series" in data:
        initial = tuple(
            (tuple(int(x) for x in m["q"]), parse_rat(m["a"]))
            for m in data["initial_series"]
        )
    return SceneConfig(
        name=data.get("name", "scene"),
        domain=dom,
        points=points,
        schedule=schedule,
        mode=mode,
        perturb=pert,
        experiment=experiment,
        initial_series=initial,
    )


def scene_to_dict(scene: SceneConfig):
    out = {
        "name": scene.name,
        "mode": scene.mode,
        "domain": _domain_to_dict(scene.domain),
        "points": [[rat_str(c) if scene.domain.exact else str(c) for c in p]
                   for p in scene.points],
        "schedule": (
            {"kind": "round_robin"}
            if isinstance(scene.schedule, RoundRobin)
            else {"kind": "seeded_random", "seed": scene.schedule.seed}
        ),
    }
    if scene.perturb is not None:
        p = scene.perturb
        d = {"eps": rat_str(p.eps), "seed": p.seed, "retry_limit": p.retry_limit,
             "flow_grid": p.flow_grid, "probe_grid": p.probe_grid}
        if p.eps_level is not None:
            d["eps_level"] = rat_str(p.eps_level)
        if p.eps_cap is not None:
            d["eps_cap"] = rat_str(p.eps_cap)
        if p.delta is not None:
            d["delta"] = rat_str(p.delta)
        out["perturb"] = d
    if scene.experiment is not None:
        out["experiment"] = scene.experiment
    if scene.initial_series is not None:
        out["initial_series"] = [
            {"q": [int(x) for x in q], "a": rat_str(a)}
            for q, a in scene.initial_series
        ]
    return out


def load_scene(path) -> SceneConfig:
    with open(path) as fh:
        data = json.load(fh)
    return scene_from_dict(data)


def save_scene(scene: SceneConfig, path):
    with open(path, "w") as fh:
        json.dump(scene_to_dict(scene), fh, indent=2, sort_keys=True)
        fh.write("\n")
