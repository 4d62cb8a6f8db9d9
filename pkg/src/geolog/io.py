"""JSON formats for fans, pairs and reports; exact rationals travel as "p/q" strings."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping

from .geography.cube import BoundaryCube, Component
from .surface import SurfaceLattice
from .toric.fan import Fan, ToricModel, validate_and_canonicalize


def rational(x) -> Fraction:
    if isinstance(x, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise ValueError(f"expected an integer or a 'p/q' string, got {x!r}")


def jsonable(obj: Any) -> Any:
    """Plain JSON data: Fractions become strings, tuples and sets become lists."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        if obj == float("-inf"):
            return "-inf"
        raise ValueError("floats are not serialized")
    if isinstance(obj, Mapping):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (frozenset, set)):
        return sorted((jsonable(v) for v in obj), key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


# -- fans ------------------------------------------------------------------------------------


def fan_from_json(d: Mapping) -> ToricModel:
    """{"lattice_rank": d, "rays": [[ints]], "cones": [[ray indices]], "relative_support": optional}."""
    try:
        fan = Fan(int(d["lattice_rank"]), d["rays"], d["cones"], relative_support=d.get("relative_support"))
    except KeyError as e:
        raise ValueError(f"fan is missing the field {e.args[0]!r}") from e
    return validate_and_canonicalize(fan)


def fan_to_json(X: ToricModel) -> dict:
    out = {"lattice_rank": X.d, "rays": [list(r) for r in X.rays], "cones": [list(c) for c in X.cones]}
    if X.fan.relative_support is not None:
        out["relative_support"] = [list(r) for r in X.fan.relative_support]
    return out


def fan_report(X: ToricModel) -> dict:
    return {
        "fan": fan_to_json(X),
        "q_factorial": X.q_factorial,
        "complete": X.complete,
        "relative": X.relative,
        "projective": X.projective,
    }


# -- pairs ------------------------------------------------------------------------------------


def _divisor_coeffs(raw, input_rays, X: ToricModel) -> tuple[Fraction, ...]:
    """Coefficients listed along the input ray order, or as a {ray index: c} mapping."""
    if isinstance(raw, Mapping):
        by_ray = {tuple(input_rays[int(k)]): rational(v) for k, v in raw.items()}
    else:
        if len(raw) != len(input_rays):
            raise ValueError("divisor needs one coefficient per ray")
        by_ray = {tuple(r): rational(v) for r, v in zip(input_rays, raw)}
    return tuple(by_ray.get(v, Fraction(0)) for v in X.rays)


def pair_from_json(d: Mapping) -> tuple[Any, BoundaryCube]:
    """A toric pair {"fan", "components"} or a surface pair {"surface", "components"}.

    Toric components carry "ray" (a lattice vector) or "divisor" (coefficients
    along the input rays); surface components carry "class" or "curve".
    """
    comps = []
    if "fan" in d:
        X = fan_from_json(d["fan"])
        rays = [tuple(int(x) for x in r) for r in d["fan"]["rays"]]
        for c in d.get("components", []):
            if "ray" in c:
                comps.append(Component(c["name"], ray=tuple(int(x) for x in c["ray"])))
            elif "divisor" in c:
                comps.append(Component(c["name"], divisor=_divisor_coeffs(c["divisor"], rays, X)))
            else:
                raise ValueError(f"component {c.get('name')!r} needs a ray or a divisor")
    elif "surface" in d:
        X = SurfaceLattice.from_json(d["surface"])
        for c in d.get("components", []):
            if "class" in c:
                comps.append(Component(c["name"], cls=tuple(rational(x) for x in c["class"])))
            elif "curve" in c:
                comps.append(Component(c["name"], curve=str(c["curve"])))
            else:
                raise ValueError(f"component {c.get('name')!r} needs a class or a curve")
    else:
        raise ValueError("a pair needs a fan or a surface")
    if not comps:
        raise ValueError("a pair needs at least one component")
    return X, BoundaryCube(comps)


def pair_to_json(X, cube: BoundaryCube) -> dict:
    comps = []
    for c in cube.components:
        if c.ray is not None:
            comps.append({"name": c.name, "ray": list(c.ray)})
        elif c.divisor is not None:
            comps.append({"name": c.name, "divisor": [str(x) for x in c.divisor]})
        elif c.cls is not None:
            comps.append({"name": c.name, "class": [str(x) for x in c.cls]})
        else:
            comps.append({"name": c.name, "curve": c.curve})
    if isinstance(X, SurfaceLattice):
        return {"surface": X.to_json(), "components": comps}
    return {"fan": fan_to_json(X), "components": comps}


def load_json(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
