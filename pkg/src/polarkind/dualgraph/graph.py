"""Weighted dual graphs of minimal embedded resolutions."""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..puiseux.cluster import Resolution, resolve
from ..puiseux.germ import LabeledType
from ..puiseux.series import BranchType, EquisType

__all__ = [
    "Vertex",
    "DualGraph",
    "GraphError",
    "KindResult",
    "build_dual_graph",
    "is_kind",
    "chi_graph",
    "adjoint_branch_types",
    "NotKindError",
]


class GraphError(ValueError):
    """A dual graph violates one of its structural invariants."""


class NotKindError(ValueError):
    def __init__(self, witness):
        super().__init__(f"the curve is not of kind type: dead arc {witness} has m(E_b) != 2 m(E_t)")
        self.witness = witness


@dataclass(frozen=True)
class Vertex:
    id: int
    v: Fraction
    m: int
    b: int
    divisor_class: str  # "puiseux" | "contact"
    n_E: int
    n_under: int
    k_E: int
    self_intersection: int
    curvette_exponents: Tuple[Fraction, ...] = ()

    @property
    def is_puiseux(self) -> bool:
        return self.divisor_class == "puiseux"


@dataclass
class DualGraph:
    """Dual graph ``G(C)`` with arrows for the branches.

    ``edges`` are oriented away from the first divisor (``root``).  Arrows map a
    vertex to the labels of the branches whose strict transforms cut it.
    ``b`` of a vertex counts its children plus its arrows.
    """

    vertices: Dict[int, Vertex]
    edges: List[Tuple[int, int]]
    arrows: Dict[int, List[str]]
    root: int = 1
    branch_types: Dict[str, BranchType] = field(default_factory=dict)
    dead_arcs: List[Tuple[int, int]] = field(default_factory=list)
    geodesics: Dict[str, List[int]] = field(default_factory=dict)
    I: Dict[int, List[str]] = field(default_factory=dict)
    I_star: Dict[int, List[str]] = field(default_factory=dict)
    labeled: Optional[LabeledType] = None

    # ------------------------------------------------------------------
    # navigation
    # ------------------------------------------------------------------
    def children(self, E: int) -> List[int]:
        return sorted(c for p, c in self.edges if p == E)

    def parent(self, E: int) -> Optional[int]:
        for p, c in self.edges:
            if c == E:
                return p
        return None

    def arrow_labels(self) -> List[str]:
        return [l for ls in self.arrows.values() for l in ls]

    def bifurcations(self) -> List[int]:
        return sorted(i for i, V in self.vertices.items() if V.b >= 2)

    def terminals(self) -> List[int]:
        return sorted(i for i, V in self.vertices.items() if V.b == 0)

    def dead_arc_at(self, E: int) -> Optional[Tuple[int, int]]:
        """The dead arc whose bifurcation divisor is ``E``, if any."""
        for a in self.dead_arcs:
            if a[0] == E:
                return a
        return None

    def is_dead_arc_terminal(self, E: int) -> bool:
        return any(t == E for _, t in self.dead_arcs)

    def path_to(self, E: int) -> List[int]:
        out = [E]
        while out[-1] != self.root:
            p = self.parent(out[-1])
            if p is None:
                raise GraphError(f"vertex {E} is not connected to the root")
            out.append(p)
        return out[::-1]

    def kinds(self) -> Counter:
        return Counter(LabeledType.kind_of(l) for l in self.arrow_labels())

    # ------------------------------------------------------------------
    # invariants
    # ------------------------------------------------------------------
    def validate(self) -> None:
        V = self.vertices
        if self.root not in V:
            raise GraphError("missing root vertex")
        for p, c in self.edges:
            if p not in V or c not in V:
                raise GraphError(f"edge {(p, c)} references an unknown vertex")
        for i in V:
            if i != self.root and self.parent(i) is None:
                raise GraphError(f"vertex {i} has no parent")
        for i, X in V.items():
            if X.b != len(self.children(i)) + len(self.arrows.get(i, [])):
                raise GraphError(f"b of vertex {i} is inconsistent")
            if X.m != X.n_under * X.n_E:
                raise GraphError(f"m(E{i}) != n_under * n_E")
            if (X.divisor_class == "puiseux") != (X.n_E > 1):
                raise GraphError(f"divisor class of E{i} does not match n_E")
            if X.self_intersection >= 0:
                raise GraphError(f"E{i} has nonnegative self-intersection")
        for i in V:
            path = self.path_to(i)
            for a, b in zip(path, path[1:]):
                if not V[a].v < V[b].v:
                    raise GraphError(f"v does not increase from E{a} to E{b}")
        seen = set()
        for b, t in self.dead_arcs:
            if V[b].b < 2 or V[t].b != 0:
                raise GraphError(f"dead arc {(b, t)} does not join a bifurcation to a terminal")
            if b in seen:
                raise GraphError(f"E{b} carries two dead arcs")
            seen.add(b)
            if V[t].m != V[b].n_under:
                raise GraphError(f"dead arc {(b, t)}: m(E_t) != n_under(E_b)")

    def intersection_matrix(self) -> Tuple[List[int], List[List[int]]]:
        ids = sorted(self.vertices)
        pos = {i: k for k, i in enumerate(ids)}
        M = [[0] * len(ids) for _ in ids]
        for i in ids:
            M[pos[i]][pos[i]] = self.vertices[i].self_intersection
        for p, c in self.edges:
            M[pos[p]][pos[c]] = M[pos[c]][pos[p]] = 1
        return ids, M

    def is_negative_definite(self) -> bool:
        _, M = self.intersection_matrix()
        A = [[Fraction(-x) for x in row] for row in M]
        n = len(A)
        for k in range(n):
            if A[k][k] <= 0:
                return False
            for i in range(k + 1, n):
                f = A[i][k] / A[k][k]
                if f:
                    for j in range(k, n):
                        A[i][j] -= f * A[k][j]
        return True

    # ------------------------------------------------------------------
    # decorated isomorphism
    # ------------------------------------------------------------------
    def canonical_key(self, kind_map: Optional[Dict[str, str]] = None, with_self_intersections: bool = True):
        """Rooted canonical form: vertex weights, arrow kinds and sorted subtrees."""
        kind_map = kind_map or {}

        def key(E: int):
            X = self.vertices[E]
            kinds = sorted(kind_map.get(k, k) for k in (LabeledType.kind_of(l) for l in self.arrows.get(E, [])))
            return (
                str(X.v),
                X.m,
                X.self_intersection if with_self_intersections else 0,
                tuple(kinds),
                tuple(sorted(key(c) for c in self.children(E))),
            )

        return key(self.root)

    def isomorphic(self, other: "DualGraph", kind_map: Optional[Dict[str, str]] = None) -> bool:
        return self.canonical_key(kind_map) == other.canonical_key(kind_map)

    # ------------------------------------------------------------------
    # emission
    # ------------------------------------------------------------------
    def to_structured(self) -> dict:
        return {
            "root": self.root,
            "vertices": [
                {
                    "id": X.id,
                    "v": str(X.v),
                    "m": X.m,
                    "b": X.b,
                    "class": X.divisor_class,
                    "n_E": X.n_E,
                    "n_under": X.n_under,
                    "k_E": X.k_E,
                    "self_intersection": X.self_intersection,
                    "curvette_exponents": [str(q) for q in X.curvette_exponents],
                }
                for X in (self.vertices[i] for i in sorted(self.vertices))
            ],
            "edges": [list(e) for e in sorted(self.edges)],
            "arrows": {str(k): list(v) for k, v in sorted(self.arrows.items()) if v},
            "dead_arcs": [list(a) for a in self.dead_arcs],
            "geodesics": {k: list(v) for k, v in sorted(self.geodesics.items())},
            "I": {str(k): list(v) for k, v in sorted(self.I.items())},
            "I_star": {str(k): list(v) for k, v in sorted(self.I_star.items())},
            "branch_types": {k: list(t.char_exponents) for k, t in sorted(self.branch_types.items())},
        }

    @classmethod
    def from_structured(cls, doc: Union[dict, str]) -> "DualGraph":
        if isinstance(doc, str):
            doc = json.loads(doc)
        verts = {}
        for d in doc["vertices"]:
            verts[int(d["id"])] = Vertex(
                int(d["id"]),
                Fraction(d["v"]),
                int(d["m"]),
                int(d.get("b", 0)),
                d["class"],
                int(d["n_E"]),
                int(d["n_under"]),
                int(d["k_E"]),
                int(d["self_intersection"]),
                tuple(Fraction(q) for q in d.get("curvette_exponents", [])),
            )
        edges = [(int(a), int(b)) for a, b in doc["edges"]]
        arrows = {int(k): list(v) for k, v in doc.get("arrows", {}).items()}
        types = {k: BranchType(tuple(v)) for k, v in doc.get("branch_types", {}).items()}
        return finalize(verts, edges, arrows, int(doc.get("root", 1)), types)

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        for i in sorted(self.vertices):
            X = self.vertices[i]
            ce = ",".join(str(q) for q in X.curvette_exponents)
            lines.append(
                f'  E{i} [label="E{i}\\nv={X.v} m={X.m}", v="{X.v}", m={X.m}, b={X.b}, '
                f'class={X.divisor_class}, n_E={X.n_E}, n_under={X.n_under}, k_E={X.k_E}, '
                f'self_intersection={X.self_intersection}, curvette="{ce}"];'
            )
        for p, c in sorted(self.edges):
            lines.append(f"  E{p} -- E{c};")
        for i in sorted(self.arrows):
            for l in self.arrows[i]:
                t = self.branch_types.get(l)
                tt = f', type="{",".join(map(str, t.char_exponents))}"' if t else ""
                lines.append(f'  "{l}" [shape=point, kind={LabeledType.kind_of(l)}{tt}];')
                lines.append(f'  E{i} -- "{l}" [dir=forward, label="{l}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dot(cls, text: str) -> "DualGraph":
        """Parse the output of :meth:`to_dot` back into a graph."""
        verts, edges, arrows, types = {}, [], {}, {}
        attr = re.compile(r'(\w+)=("([^"]*)"|[^,\]\s]+)')
        for raw in text.splitlines():
            line = raw.strip().rstrip(";")
            m = re.match(r"^E(\d+) \[(.*)\]$", line)
            if m:
                a = {k: (q if q is not None and v.startswith('"') else v) for k, v, q in attr.findall(m.group(2))}
                i = int(m.group(1))
                ce = a.get("curvette", "")
                verts[i] = Vertex(
                    i, Fraction(a["v"]), int(a["m"]), int(a["b"]), a["class"], int(a["n_E"]),
                    int(a["n_under"]), int(a["k_E"]), int(a["self_intersection"]),
                    tuple(Fraction(q) for q in ce.split(",") if q),
                )
                continue
            m = re.match(r'^"([^"]+)" \[(.*)\]$', line)
            if m:
                a = {k: (q if v.startswith('"') else v) for k, v, q in attr.findall(m.group(2))}
                if "type" in a:
                    types[m.group(1)] = BranchType(tuple(int(x) for x in a["type"].split(",")))
                continue
            m = re.match(r"^E(\d+) -- E(\d+)$", line)
            if m:
                edges.append((int(m.group(1)), int(m.group(2))))
                continue
            m = re.match(r'^E(\d+) -- "([^"]+)"', line)
            if m:
                arrows.setdefault(int(m.group(1)), []).append(m.group(2))
        return finalize(verts, edges, arrows, 1 if 1 in verts else min(verts), types)

    def summary(self) -> str:
        lines = []
        for i in sorted(self.vertices):
            X = self.vertices[i]
            arr = self.arrows.get(i, [])
            lines.append(
                f"E{i}: v={X.v} m={X.m} b={X.b} {X.divisor_class} n_E={X.n_E} n_under={X.n_under} "
                f"k_E={X.k_E} self={X.self_intersection}" + (f" arrows={arr}" if arr else "")
            )
        lines.append("edges: " + ", ".join(f"E{p}->E{c}" for p, c in sorted(self.edges)))
        if self.dead_arcs:
            lines.append("dead arcs: " + ", ".join(f"(E{b}, E{t})" for b, t in self.dead_arcs))
        return "\n".join(lines)

    def __str__(self):
        return self.summary()


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def finalize(
    verts: Dict[int, Vertex],
    edges: Sequence[Tuple[int, int]],
    arrows: Dict[int, List[str]],
    root: int,
    branch_types: Optional[Dict[str, BranchType]] = None,
    labeled: Optional[LabeledType] = None,
) -> DualGraph:
    """Recompute every derived field (b, dead arcs, geodesics, I_E, I_E*) and validate."""
    branch_types = dict(branch_types or {})
    # orient edges away from the root
    adj: Dict[int, List[int]] = {i: [] for i in verts}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    oriented, seen, stack = [], {root}, [root]
    while stack:
        a = stack.pop()
        for b in sorted(adj[a]):
            if b not in seen:
                seen.add(b)
                oriented.append((a, b))
                stack.append(b)
    if len(seen) != len(verts):
        raise GraphError("dual graph is not connected")
    arrows = {k: list(v) for k, v in arrows.items() if v}
    nchild = Counter(a for a, _ in oriented)
    verts = {i: replace(X, b=nchild[i] + len(arrows.get(i, []))) for i, X in verts.items()}
    g = DualGraph(verts, sorted(oriented), arrows, root, branch_types, labeled=labeled)
    # dead arcs
    dead = []
    for t in g.terminals():
        cur = t
        while True:
            p = g.parent(cur)
            if p is None:
                break
            if verts[p].b >= 2:
                dead.append((p, t))
                break
            cur = p
    g.dead_arcs = sorted(dead)
    # geodesics and I_E
    for E, ls in arrows.items():
        for l in ls:
            g.geodesics[l] = g.path_to(E)
    I: Dict[int, List[str]] = {i: [] for i in verts}
    for l, path in g.geodesics.items():
        for E in path:
            I[E].append(l)
    g.I = {i: sorted(v, key=_label_key) for i, v in I.items()}
    star = {}
    for i, X in verts.items():
        if X.is_puiseux:
            keep = []
            for l in g.I[i]:
                t = branch_types.get(l)
                if t is None:
                    continue
                fr = t.exponents_as_fractions()
                if X.k_E < len(fr) and fr[X.k_E] == X.v:
                    keep.append(l)
            star[i] = keep
        else:
            star[i] = list(g.I[i])
    g.I_star = star
    g.validate()
    return g


def _label_key(l: str):
    m = re.match(r"^([A-Za-z]*)(.*)$", l)
    rest = [int(x) if x.isdigit() else x for x in re.split(r"[.]", m.group(2)) if x]
    return (m.group(1), rest)


def _as_labeled(e: Union[EquisType, LabeledType]) -> LabeledType:
    return e if isinstance(e, LabeledType) else LabeledType.plain(e)


def graph_from_resolution(res: Resolution, labels: Sequence[str], types: Dict[str, BranchType],
                          labeled: Optional[LabeledType] = None) -> DualGraph:
    verts = {}
    for D in res.divisors:
        sat = D.satellite
        verts[D.id] = Vertex(
            D.id,
            D.v,
            D.m,
            0,
            "puiseux" if sat else "contact",
            D.n_E,
            D.n_under,
            D.k_E,
            D.self_intersection,
            tuple(D.curvette_exponents),
        )
    arrows: Dict[int, List[str]] = {}
    for b, E in sorted(res.arrows.items()):
        arrows.setdefault(E, []).append(labels[b])
    return finalize(verts, res.edges, arrows, 1, types, labeled)


def build_dual_graph(e: Union[EquisType, LabeledType]) -> DualGraph:
    """Dual graph of the minimal embedded resolution of a curve of type ``e``.

    ``e`` may be a plain EquisType (branches labelled ``C1, C2, ...``) or a
    :class:`LabeledType` whose labels become the arrow labels.
    """
    lt = _as_labeled(e)
    if lt.etype.r == 0:
        raise GraphError("the empty curve has no dual graph")
    res = resolve(lt.etype)
    types = {l: t for l, t in zip(lt.labels, lt.etype.branches)}
    return graph_from_resolution(res, lt.labels, types, lt)


# ---------------------------------------------------------------------------
# kind curves and the chi construction
# ---------------------------------------------------------------------------


@dataclass
class KindResult:
    kind: bool
    witness: Optional[Tuple[int, int]] = None

    def __bool__(self):
        return self.kind


def is_kind(g: DualGraph) -> KindResult:
    """Every dead arc must satisfy ``m(E_b) = 2 m(E_t)``."""
    for b, t in g.dead_arcs:
        if g.vertices[b].m != 2 * g.vertices[t].m:
            return KindResult(False, (b, t))
    return KindResult(True)


def chi_arrow_count(g: DualGraph, E: int) -> int:
    """Number of branches the perfect adjoint puts on ``E``."""
    X = g.vertices[E]
    if X.b >= 2:
        return X.b - 2 if g.dead_arc_at(E) is not None else X.b - 1
    if g.is_dead_arc_terminal(E):
        return 1
    return 0


def chi_graph(g: DualGraph, kind: str = "Z") -> DualGraph:
    """``G(C u Z)`` for a perfect adjoint ``Z`` of a kind curve with graph ``g``."""
    k = is_kind(g)
    if not k:
        raise NotKindError(k.witness)
    arrows = {E: list(ls) for E, ls in g.arrows.items()}
    counter = 0
    for E in sorted(g.vertices):
        for _ in range(chi_arrow_count(g, E)):
            counter += 1
            arrows.setdefault(E, []).append(f"{kind}{counter}")
    return finalize(dict(g.vertices), g.edges, arrows, g.root, g.branch_types)


def adjoint_branch_types(g: DualGraph, E: int) -> List[Tuple[BranchType, int]]:
    """Branch types (with counts) of the part ``Z^E`` of a perfect adjoint.

    ``E`` must be a bifurcation divisor of a kind graph whose arrows carry
    branch types.
    """
    k = is_kind(g)
    if not k:
        raise NotKindError(k.witness)
    X = g.vertices.get(E)
    if X is None or X.b < 2:
        raise GraphError(f"E{E} is not a bifurcation divisor")
    candidates = g.I_star.get(E) or g.I.get(E) or []
    if not candidates:
        raise GraphError(f"no branch of C is attached to E{E} through a geodesic")
    t = g.branch_types.get(candidates[0])
    if t is None:
        raise GraphError("branch types are needed to describe the adjoint branches")
    beta, n_i = t.char_exponents, t.multiplicity
    nu, n = X.n_under, X.n_E
    dead = g.dead_arc_at(E)
    out: List[Tuple[BranchType, int]] = []
    if not X.is_puiseux:
        exps = [nu] + [nu * beta[l] // n_i for l in range(1, X.k_E + 1)]
        _check_scaled(nu, beta, n_i, X.k_E)
        out.append((BranchType(tuple(exps)), X.b - 1))
        return out
    top = nu * n
    _check_scaled(top, beta, n_i, X.k_E + 1)
    full = BranchType(tuple([top] + [top * beta[l] // n_i for l in range(1, X.k_E + 2)]))
    if dead is not None:
        zeta0 = BranchType(tuple([nu] + [nu * beta[l] // n_i for l in range(1, X.k_E + 1)]))
        out.append((zeta0, 1))
        if X.b - 2 > 0:
            out.append((full, X.b - 2))
    else:
        out.append((full, X.b - 1))
    return out


def _check_scaled(top: int, beta, n_i: int, upto: int) -> None:
    for l in range(1, upto + 1):
        if (top * beta[l]) % n_i:
            raise GraphError("adjoint exponents are not integral; graph and branch types disagree")
