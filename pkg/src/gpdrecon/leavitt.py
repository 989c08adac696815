"""Directed graphs, condition (L), and path groupoids of finite acyclic graphs.

A path is ``(start_vertex, edges)``; the empty path ``ε_v`` keeps its anchor
``v``.  Edges run from ``src`` to ``dst``, a path ``e1 e2 ...`` needs
``dst(e_i) == src(e_{i+1})``, and its range is the ``dst`` of the last edge.

For a finite acyclic graph the boundary paths are the finite paths ending in
a sink, and two of them are shift-equivalent exactly when they end at the same
sink, so the path groupoid is a disjoint union of pair groupoids graded by the
length difference.  Finite graphs have no infinite emitters, so the last
Cuntz-Krieger relation applies at every non-sink.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .coeff_ring import Ring
from .convolution import add, char, convolve
from .group_ring import GradingGroup
from .groupoid import Cocycle, FiniteGroupoid, is_local_bisection


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    name: str
    src: str
    dst: str


@dataclass
class DirectedGraph:
    vertices: list[str]
    edges: list[Edge]

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise GraphError("duplicate vertex")
        names = [e.name for e in self.edges]
        if len(set(names)) != len(names):
            raise GraphError("duplicate edge name")
        for e in self.edges:
            if e.src not in vs or e.dst not in vs:
                raise GraphError(f"edge {e.name} has an unknown endpoint")
        self.edge = {e.name: e for e in self.edges}

    @classmethod
    def from_dict(cls, d: dict) -> "DirectedGraph":
        try:
            verts = [str(v) for v in d["vertices"]]
            edges = [Edge(str(e["name"]), str(e["src"]), str(e["dst"])) for e in d["edges"]]
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph: {exc}") from None
        return cls(verts, edges)

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices),
                "edges": [{"name": e.name, "src": e.src, "dst": e.dst} for e in self.edges]}

    @classmethod
    def load(cls, path) -> "DirectedGraph":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return cls.from_dict(data.get("graph", data))

    def out_edges(self, v: str) -> list[Edge]:
        return [e for e in self.edges if e.src == v]

    def sinks(self) -> list[str]:
        return [v for v in self.vertices if not self.out_edges(v)]

    def simple_cycles(self) -> list[tuple[str, ...]]:
        """Simple cycles as edge-name tuples, each listed once starting from its
        least vertex (in vertex order)."""
        order = {v: i for i, v in enumerate(self.vertices)}
        out = []
        for start in self.vertices:
            def dfs(v, path, seen):
                for e in self.out_edges(v):
                    if e.dst == start:
                        out.append(tuple(path + [e.name]))
                    elif order[e.dst] > order[start] and e.dst not in seen:
                        seen.add(e.dst)
                        dfs(e.dst, path + [e.name], seen)
                        seen.discard(e.dst)
            dfs(start, [], {start})
        return out

    def is_acyclic(self) -> bool:
        return not self.simple_cycles()


def condition_L(E: DirectedGraph) -> bool:
    """Every cycle has an exit (a vertex on it emitting at least two edges)."""
    for cyc in E.simple_cycles():
        if not any(len(E.out_edges(E.edge[name].src)) >= 2 for name in cyc):
            return False
    return True


@dataclass(frozen=True, order=True)
class Path:
    start: str
    edges: tuple[str, ...] = field(default=())

    def __len__(self):
        return len(self.edges)

    def end(self, E: DirectedGraph) -> str:
        return E.edge[self.edges[-1]].dst if self.edges else self.start

    def concat(self, E: DirectedGraph, other: "Path") -> "Path":
        if self.end(E) != other.start:
            raise GraphError("paths do not compose")
        return Path(self.start, self.edges + other.edges)

    def __str__(self):
        return "".join(self.edges) if self.edges else f"eps_{self.start}"


def _check_acyclic(E: DirectedGraph) -> None:
    if not E.is_acyclic():
        raise GraphError("graph has a cycle; its boundary path space is infinite")


def paths_from(E: DirectedGraph, v: str) -> list[Path]:
    """Boundary paths starting at ``v``."""
    _check_acyclic(E)
    out = []

    def rec(p: Path):
        w = p.end(E)
        outs = E.out_edges(w)
        if not outs:
            out.append(p)
        for e in outs:
            rec(Path(p.start, p.edges + (e.name,)))

    rec(Path(v))
    return out


def boundary_paths(E: DirectedGraph) -> list[Path]:
    _check_acyclic(E)
    out = []
    for v in E.vertices:
        out.extend(paths_from(E, v))
    return sorted(set(out), key=lambda p: (p.end(E), len(p), p.start, p.edges))


def path_groupoid(E: DirectedGraph) -> tuple[FiniteGroupoid, Cocycle]:
    """Arrows ``(η, |η|-|γ|, γ)`` for boundary paths with a common tail (same sink)."""
    objs = boundary_paths(E)
    pos = {p: i for i, p in enumerate(objs)}
    arrows = [(eta, len(eta) - len(gam), gam) for eta in objs for gam in objs
              if eta.end(E) == gam.end(E)]
    G = FiniteGroupoid.from_rule(
        [str(p) for p in objs], arrows,
        [pos[g] for _, _, g in arrows], [pos[e] for e, _, _ in arrows],
        lambda a, b: (a[0], a[1] + b[1], b[2]))
    c = Cocycle(GradingGroup.integers(), [k for _, k, _ in arrows])
    c.validate(G)
    return G, c


def cylinder_bisection(E: DirectedGraph, G: FiniteGroupoid, c: Cocycle,
                       alpha: Path, beta: Path) -> frozenset:
    """``Z(α, β) = {(αγ, |α|-|β|, βγ)}`` as a set of arrow indices."""
    if alpha.end(E) != beta.end(E):
        raise GraphError("cylinder needs r(α) = r(β)")
    k = len(alpha) - len(beta)
    U = []
    for gam in paths_from(E, alpha.end(E)):
        arrow = (alpha.concat(E, gam), k, beta.concat(E, gam))
        U.append(G.arrow_index[arrow])
    U = frozenset(U)
    if not is_local_bisection(G, U) or any(c.grade[a] != k for a in U):
        raise AssertionError("cylinder set is not a homogeneous local bisection")
    return U


@dataclass
class RelationCheck:
    relation: str
    instance: str
    passed: bool


def generator_images(E: DirectedGraph, G: FiniteGroupoid, c: Cocycle, ring: Ring):
    """``v``, ``e`` and ``e*`` as characteristic functions of cylinder bisections."""
    verts = {v: char(G, ring, cylinder_bisection(E, G, c, Path(v), Path(v)))
             for v in E.vertices}
    edges, stars = {}, {}
    for e in E.edges:
        pe, pr = Path(e.src, (e.name,)), Path(e.dst)
        edges[e.name] = char(G, ring, cylinder_bisection(E, G, c, pe, pr))
        stars[e.name] = char(G, ring, cylinder_bisection(E, G, c, pr, pe))
    return verts, edges, stars


def verify_ck_relations(E: DirectedGraph, ring: Ring) -> list[RelationCheck]:
    G, c = path_groupoid(E)
    verts, edges, stars = generator_images(E, G, c, ring)
    zero = (0,) * G.n_arrows
    out: list[RelationCheck] = []

    def mul(f, g):
        return convolve(G, ring, f, g)

    def grade_ok(f, k):
        return all(c.grade[a] == k for a, x in enumerate(f) if x)

    for v in E.vertices:
        for w in E.vertices:
            want = verts[v] if v == w else zero
            out.append(RelationCheck("vertices are orthogonal idempotents", f"{v},{w}",
                                     mul(verts[v], verts[w]) == want))
        out.append(RelationCheck("grade of v is 0", v, grade_ok(verts[v], 0)))
    for e in E.edges:
        x, xs = edges[e.name], stars[e.name]
        s, r = verts[e.src], verts[e.dst]
        out.append(RelationCheck("s(e) e = e = e r(e)", e.name, mul(s, x) == x == mul(x, r)))
        out.append(RelationCheck("r(e) e* = e* = e* s(e)", e.name,
                                 mul(r, xs) == xs == mul(xs, s)))
        out.append(RelationCheck("grade of e is 1", e.name, grade_ok(x, 1)))
        out.append(RelationCheck("grade of e* is -1", e.name, grade_ok(xs, -1)))
        for f in E.edges:
            want = verts[e.dst] if e.name == f.name else zero
            out.append(RelationCheck("e* f = δ r(e)", f"{e.name},{f.name}",
                                     mul(xs, edges[f.name]) == want))
    for v in E.vertices:
        outs = E.out_edges(v)
        if not outs:
            continue
        total = zero
        for e in outs:
            total = add(ring, total, mul(edges[e.name], stars[e.name]))
        out.append(RelationCheck("v = Σ e e* over s(e) = v", v, total == verts[v]))
    return out


def arrow_count_formula(E: DirectedGraph) -> int:
    paths = boundary_paths(E)
    return sum(sum(1 for p in paths if p.end(E) == w) ** 2 for w in E.sinks())


@dataclass
class HypothesisReport:
    condition_L: bool
    indecomposable: bool
    reduced: bool
    applies: bool
    cycles: list[tuple[str, ...]]
    cycles_without_exit: list[tuple[str, ...]]
    periodic_vertices: list[str]


def leavitt_hypothesis_check(E: DirectedGraph, ring: Ring) -> HypothesisReport:
    """Hypotheses for the Leavitt reconstruction: ``R`` indecomposable and
    (condition (L) or ``R`` reduced).  Vertices on cycles support eventually
    periodic boundary paths, whose isotropy is infinite cyclic."""
    cycles = E.simple_cycles()
    no_exit = [cyc for cyc in cycles
               if not any(len(E.out_edges(E.edge[n].src)) >= 2 for n in cyc)]
    cond = not no_exit
    ind, red = ring.is_indecomposable(), ring.is_reduced()
    periodic = sorted({E.edge[n].src for cyc in cycles for n in cyc},
                      key=E.vertices.index)
    return HypothesisReport(cond, ind, red, ind and (cond or red), cycles, no_exit, periodic)


def graph_from_edges(vertices: Sequence[str], edges: Sequence[tuple[str, str, str]]):
    return DirectedGraph(list(vertices), [Edge(n, s, d) for n, s, d in edges])
