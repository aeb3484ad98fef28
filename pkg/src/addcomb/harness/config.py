"""JSON configuration for suite runs.

A config file is either one suite object or ``{"schema": ..., "suites": [...]}``.
A suite object looks like::

    {"schema": "addcomb-config/1",
     "suite": "energy-cs",
     "seed": 7,
     "group": {"kind": "cyclic", "n": 101},
     "variety": {"ambient": {...}, "polys": [...]},
     "sets": {"type": "random", "density": 0.2, "count": 50, "seed": 3},
     "params": {"count": 200}}

Only ``suite`` is required; everything else falls back to the suite's defaults.
Set specs: explicit(elements), random(density|size, count, seed),
variety-points, conjugacy-class(element), subgroup(gens), coset(x, gens).
Elements are written as their coordinate labels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ValidationError
from ..groups import (FiniteGroup, GroupSpec, Subset, conjugacy_class, coset, random_subset,
                      subgroup_closure)

SCHEMA = "addcomb-config/1"
SET_TYPES = ("explicit", "random", "variety-points", "conjugacy-class", "subgroup", "coset")
_SUITE_KEYS = {"schema", "suite", "seed", "group", "variety", "sets", "params"}


@dataclass
class SuiteConfig:
    suite: str
    seed: int | None = None
    group: dict | None = None
    variety: dict | None = None
    sets: dict | None = None
    params: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, d: dict) -> "SuiteConfig":
        if not isinstance(d, dict) or "suite" not in d:
            raise ValidationError("suite config must be an object with a 'suite' key")
        unknown = set(d) - _SUITE_KEYS
        if unknown:
            raise ValidationError(f"unknown config keys {sorted(unknown)}")
        schema = d.get("schema", SCHEMA)
        if schema != SCHEMA:
            raise ValidationError(f"unsupported config schema {schema!r} (expected {SCHEMA})")
        if d.get("group") is not None:
            GroupSpec.from_dict(d["group"])  # validate early
        sets = d.get("sets")
        if sets is not None:
            validate_set_spec(sets)
        params = d.get("params") or {}
        if not isinstance(params, dict):
            raise ValidationError("'params' must be an object")
        seed = d.get("seed")
        if seed is not None and not isinstance(seed, int):
            raise ValidationError("'seed' must be an integer")
        return cls(d["suite"], seed, d.get("group"), d.get("variety"), sets, dict(params))

    def to_dict(self) -> dict:
        out = {"schema": SCHEMA, "suite": self.suite}
        if self.seed is not None:
            out["seed"] = self.seed
        for key in ("group", "variety", "sets"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        out["params"] = self.params
        return out


def validate_set_spec(spec: dict) -> None:
    if not isinstance(spec, dict) or spec.get("type") not in SET_TYPES:
        raise ValidationError(f"set spec needs 'type' in {SET_TYPES}")
    kind = spec["type"]
    if kind == "random":
        if "seed" not in spec:
            raise ValidationError("random set specs must carry a 'seed'")
        if ("density" in spec) == ("size" in spec):
            raise ValidationError("random set spec needs exactly one of 'density' or 'size'")
    elif kind == "explicit" and "elements" not in spec:
        raise ValidationError("explicit set spec needs 'elements'")
    elif kind == "conjugacy-class" and "element" not in spec:
        raise ValidationError("conjugacy-class set spec needs 'element'")
    elif kind == "subgroup" and "gens" not in spec:
        raise ValidationError("subgroup set spec needs 'gens'")
    elif kind == "coset" and ("gens" not in spec or "x" not in spec):
        raise ValidationError("coset set spec needs 'x' and 'gens'")


def resolve_sets(spec: dict, G: FiniteGroup, variety_points: Subset | None = None) -> list[Subset]:
    """Materialize a set spec into one or more subsets of G."""
    validate_set_spec(spec)
    kind = spec["type"]
    if kind == "explicit":
        return [Subset.from_labels(G, spec["elements"])]
    if kind == "variety-points":
        if variety_points is None:
            raise ValidationError("variety-points set spec needs a 'variety'")
        return [variety_points]
    if kind == "conjugacy-class":
        return [conjugacy_class(G, G.element(spec["element"]))]
    if kind == "subgroup":
        return [subgroup_closure(G, [G.element(g) for g in spec["gens"]])]
    if kind == "coset":
        H = subgroup_closure(G, [G.element(g) for g in spec["gens"]])
        return [coset(G, G.element(spec["x"]), H)]
    rng = np.random.default_rng(spec["seed"])
    within = variety_points if spec.get("within") == "variety" else None
    count = int(spec.get("count", 1))
    return [random_subset(G, rng, density=spec.get("density"), size=spec.get("size"), within=within)
            for _ in range(count)]


def load_config(path) -> list[SuiteConfig]:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
    return parse_config(data)


def parse_config(data) -> list[SuiteConfig]:
    if isinstance(data, dict) and "suites" in data:
        schema = data.get("schema", SCHEMA)
        if schema != SCHEMA:
            raise ValidationError(f"unsupported config schema {schema!r}")
        if not isinstance(data["suites"], list):
            raise ValidationError("'suites' must be a list")
        return [SuiteConfig.from_dict({"schema": schema, **s}) for s in data["suites"]]
    return [SuiteConfig.from_dict(data)]
