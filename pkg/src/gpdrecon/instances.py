"""Instance files: parsing, validation and the shipped corpus."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .coeff_ring import Ring, RingError, parse_ring
from .group_ring import GradingGroup, parse_group
from .groupoid import (Cocycle, FiniteGroupoid, GroupoidError, disjoint_union, group_as_groupoid,
                       group_bundle, pair_groupoid, product, unit_groupoid)
from .inverse_semigroup import InvSemigroup, SemigroupError
from .leavitt import DirectedGraph, GraphError, path_groupoid

# ring and group grids used for censuses and witness checks
CORPUS_RINGS = ["mod2", "mod3", "mod4", "mod5", "mod6", "mod8", "mod9", "2x2", "2x3"]
CORPUS_GROUPS = ["cyclic2", "cyclic3", "cyclic4", "klein", "sym3"]

KNOWN_KEYS = {"ring", "groupoid", "grading", "graph", "semigroup", "caps", "seed", "name",
              "description"}


class InstanceError(ValueError):
    """Schema or semantic violations; ``errors`` lists ``(location, message)``."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(f"{loc}: {msg}" for loc, msg in self.errors))


@dataclass
class InstanceSpec:
    raw: dict
    ring: Ring | None = None
    groupoid: FiniteGroupoid | None = None
    cocycle: Cocycle | None = None
    graph: DirectedGraph | None = None
    semigroup: InvSemigroup | None = None
    caps: dict = field(default_factory=dict)
    seed: int = 0
    name: str = ""

    def canonical(self) -> str:
        return json.dumps(self.raw, sort_keys=True, separators=(",", ":"))


# -- groupoids -----------------------------------------------------------------

def build_groupoid(spec) -> tuple[FiniteGroupoid, Cocycle | None]:
    """Constructor or explicit groupoid spec; Leavitt groupoids come with their grading."""
    if not isinstance(spec, dict) or len(spec) != 1:
        if isinstance(spec, dict) and "objects" in spec:
            return _explicit_groupoid(spec)
        raise GroupoidError("groupoid spec must be a single-key object")
    (kind, arg), = spec.items()
    if kind == "pair":
        return pair_groupoid(_posint(arg)), None
    if kind == "unit":
        return unit_groupoid(_posint(arg)), None
    if kind == "group":
        return group_as_groupoid(parse_group(arg)), None
    if kind == "bundle":
        if not isinstance(arg, list) or not arg:
            raise GroupoidError("bundle needs a nonempty list of groups")
        return group_bundle([parse_group(g) for g in arg]), None
    if kind in ("union", "product"):
        if not isinstance(arg, list) or len(arg) < 2:
            raise GroupoidError(f"{kind} needs at least two groupoids")
        parts = [build_groupoid(g)[0] for g in arg]
        G = parts[0]
        for H in parts[1:]:
            G = disjoint_union(G, H) if kind == "union" else product(G, H)
        return G, None
    if kind == "leavitt":
        return path_groupoid(DirectedGraph.from_dict(arg))
    if kind == "explicit":
        return _explicit_groupoid(arg)
    raise GroupoidError(f"unknown groupoid constructor {kind!r}")


def _posint(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < 1:
        raise GroupoidError(f"expected a positive integer, got {x!r}")
    return x


def _explicit_groupoid(spec: dict):
    """``{"objects": [...], "arrows": [{"name", "dom", "cod"}], "compose": [[a, b, ab], ...]}``
    where ``[a, b, ab]`` means ``ab`` is the product of ``a`` after ``b``."""
    try:
        objs = [str(x) for x in spec["objects"]]
        arrows = spec["arrows"]
        names = [str(a["name"]) for a in arrows]
        opos = {x: i for i, x in enumerate(objs)}
        dom = [opos[str(a["dom"])] for a in arrows]
        cod = [opos[str(a["cod"])] for a in arrows]
        apos = {a: i for i, a in enumerate(names)}
        n = len(names)
        table = np.full((n, n), -1, dtype=np.int32)
        for a, b, ab in spec["compose"]:
            table[apos[str(a)], apos[str(b)]] = apos[str(ab)]
    except (KeyError, TypeError, ValueError) as exc:
        raise GroupoidError(f"malformed explicit groupoid: {exc!r}") from None
    return FiniteGroupoid(objs, names, dom, cod, table), None


def build_cocycle(G: FiniteGroupoid, spec) -> Cocycle:
    """``{"group": <group or "integers">, "grades": {arrow label: grade}}``; unlisted arrows
    get the identity.  Finite-group grades may be element labels or indices."""
    if not isinstance(spec, dict) or "group" not in spec:
        raise GroupoidError("grading needs a 'group'")
    gspec = spec["group"]
    if isinstance(gspec, dict) and "kind" in gspec:
        gg = GradingGroup.from_spec(gspec)
    elif gspec in ("integers", "Z", {"integers": True}):
        gg = GradingGroup.integers()
    elif gspec in ("trivial", {"trivial": True}):
        gg = GradingGroup.trivial()
    else:
        gg = GradingGroup.finite(parse_group(gspec))
    labels = {str(a): i for i, a in enumerate(G.arrows)}
    grade = [gg.identity] * G.n_arrows
    for key, val in dict(spec.get("grades", {})).items():
        if key not in labels:
            raise GroupoidError("grading names an unknown arrow", key)
        if gg.kind == "finite" and isinstance(val, str):
            if val not in gg.group.labels:
                raise GroupoidError("unknown grading-group element", val)
            val = gg.group.labels.index(val)
        if isinstance(val, bool) or not isinstance(val, int):
            raise GroupoidError("grade must be an integer or element label", val)
        grade[labels[key]] = val
    c = Cocycle(gg, grade)
    c.validate(G)
    return c


# -- semigroups ----------------------------------------------------------------

def build_semigroup(spec: dict) -> InvSemigroup:
    try:
        names = [str(x) for x in spec["elements"]]
        pos = {x: i for i, x in enumerate(names)}
        table = [[pos[str(x)] if not isinstance(x, int) else x for x in row]
                 for row in spec["table"]]
        zero = pos[str(spec["zero"])] if spec.get("zero") is not None else None
    except (KeyError, TypeError) as exc:
        raise SemigroupError(f"malformed semigroup: {exc!r}") from None
    grading = gg = None
    if "grading" in spec:
        g = spec["grading"]
        gspec = g.get("group", "integers")
        gg = GradingGroup.integers() if gspec in ("integers", "Z") else \
            GradingGroup.finite(parse_group(gspec))
        grading = {}
        for k, v in g.get("grades", {}).items():
            if gg.kind == "finite" and isinstance(v, str):
                v = gg.group.labels.index(v)
            grading[pos[str(k)]] = v
        for i in range(len(names)):
            if i != zero:
                grading.setdefault(i, gg.identity)
    S = InvSemigroup(names, table, zero, grading, gg)
    if "star" in spec:
        for k, v in spec["star"].items():
            if S.star[pos[str(k)]] != pos[str(v)]:
                raise SemigroupError("declared involution differs from the unique inverse", k)
    return S


# -- top level -------------------------------------------------------------------

def parse_instance(source) -> InstanceSpec:
    """Parse a path, JSON text or dict into a validated :class:`InstanceSpec`."""
    if isinstance(source, dict):
        raw = source
    else:
        text = source
        if isinstance(source, (str, os.PathLike)) and not str(source).lstrip().startswith("{"):
            path = resolve_path(str(source))
            try:
                with open(path, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise InstanceError([("file", str(exc))]) from None
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InstanceError([(f"line {exc.lineno} col {exc.colno}", exc.msg)]) from None
    if not isinstance(raw, dict):
        raise InstanceError([("$", "instance must be a JSON object")])
    errors = []
    for key in sorted(set(raw) - KNOWN_KEYS):
        errors.append((key, "unknown key"))
    spec = InstanceSpec(raw, name=str(raw.get("name", "")))
    steps = [
        ("ring", lambda: setattr(spec, "ring", parse_ring(raw["ring"]))),
        ("groupoid", lambda: _set_groupoid(spec, raw["groupoid"])),
        ("graph", lambda: setattr(spec, "graph", DirectedGraph.from_dict(raw["graph"]))),
        ("semigroup", lambda: setattr(spec, "semigroup", build_semigroup(raw["semigroup"]))),
    ]
    for key, step in steps:
        if key in raw:
            try:
                step()
            except (RingError, GroupoidError, SemigroupError, GraphError, ValueError) as exc:
                errors.append((key, str(exc)))
    if "grading" in raw:
        if spec.groupoid is None:
            errors.append(("grading", "grading given without a groupoid"))
        else:
            try:
                spec.cocycle = build_cocycle(spec.groupoid, raw["grading"])
            except (GroupoidError, ValueError) as exc:
                errors.append(("grading", str(exc)))
    caps = raw.get("caps", {})
    if not isinstance(caps, dict) or any(not isinstance(v, int) or v < 1 for v in caps.values()):
        errors.append(("caps", "caps must map names to positive integers"))
    else:
        spec.caps = dict(caps)
    seed = raw.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        errors.append(("seed", "seed must be an integer"))
    else:
        spec.seed = seed
    if errors:
        raise InstanceError(errors)
    return spec


def _set_groupoid(spec: InstanceSpec, gspec) -> None:
    G, c = build_groupoid(gspec)
    spec.groupoid = G
    spec.cocycle = c


def corpus_dir():
    return resources.files("gpdrecon") / "corpus"


def corpus_names() -> list[str]:
    return sorted(p.name[:-5] for p in corpus_dir().iterdir() if p.name.endswith(".json"))


def resolve_path(name: str) -> str:
    """A filesystem path, or the name of a shipped corpus file (with or without ``.json``)."""
    if os.path.exists(name):
        return name
    base = os.path.basename(name)
    if not base.endswith(".json"):
        base += ".json"
    cand = corpus_dir() / base
    if cand.is_file():
        return str(cand)
    return name


def load_corpus() -> dict[str, InstanceSpec]:
    return {n: parse_instance(n) for n in corpus_names()}


