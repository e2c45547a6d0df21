"""Simple graphs, transitivity reports, s-arcs, and isomorphism search."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .perm import Action, GroupLike, coerce_action


class Graph:
    """Loopless undirected graph; arcs are kept as ordered pairs both ways."""

    __slots__ = ("labels", "arcs", "adj")

    def __init__(self, labels: Sequence[str], arcs: Iterable):
        self.labels = tuple(str(x) for x in labels)
        n = len(self.labels)
        arcset = frozenset((int(u), int(v)) for u, v in arcs)
        for u, v in arcset:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) leaves the vertex range")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if (v, u) not in arcset:
                raise ValueError(f"arc ({u}, {v}) has no reverse")
        self.arcs = arcset
        nbr = [[] for _ in range(n)]
        for u, v in arcset:
            nbr[u].append(v)
        self.adj = tuple(tuple(sorted(x)) for x in nbr)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, labels: Optional[Sequence[str]] = None) -> "Graph":
        if labels is None:
            labels = [str(i + 1) for i in range(n)]
        arcs = []
        for u, v in edges:
            arcs.append((u, v))
            arcs.append((v, u))
        return cls(labels, arcs)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def arc_count(self) -> int:
        return len(self.arcs)

    @property
    def edge_count(self) -> int:
        return len(self.arcs) // 2

    def edges(self) -> list:
        return sorted((u, v) for u, v in self.arcs if u < v)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def valency(self) -> Optional[int]:
        """The common degree, or None when the graph is irregular."""
        degs = {len(a) for a in self.adj}
        return degs.pop() if len(degs) == 1 else None

    def neighbors(self, v: int) -> tuple:
        return self.adj[v]

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs

    def induced_subgraph(self, vertices: Iterable[int]):
        """Subgraph on the given vertices (deduplicated, sorted), plus the
        new-to-old vertex map."""
        vs = tuple(sorted(set(vertices)))
        pos = {v: i for i, v in enumerate(vs)}
        arcs = [
            (pos[u], pos[v]) for u, v in self.arcs if u in pos and v in pos
        ]
        return Graph([self.labels[v] for v in vs], arcs), vs

    def relabelled(self, labels: Sequence[str]) -> "Graph":
        return Graph(labels, self.arcs)

    def __repr__(self) -> str:
        return f"<graph: {self.n} vertices, {self.edge_count} edges>"


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def edgeless_graph(n: int) -> Graph:
    return Graph.from_edges(n, [])


def connected_components(graph: Graph) -> list:
    seen = [False] * graph.n
    comps = []
    for start in range(graph.n):
        if seen[start]:
            continue
        comp = [start]
        seen[start] = True
        queue = [start]
        while queue:
            x = queue.pop()
            for y in graph.adj[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def is_connected(graph: Graph) -> bool:
    return len(connected_components(graph)) <= 1


def enumerate_s_arcs(graph: Graph, s: int) -> list:
    """All walks of s steps without immediate backtracking, in lex order."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    walks = [(v,) for v in range(graph.n)]
    for _ in range(s):
        nxt = []
        for w in walks:
            last = w[-1]
            prev = w[-2] if len(w) >= 2 else None
            for u in graph.adj[last]:
                if u != prev:
                    nxt.append(w + (u,))
        walks = nxt
    return walks


def _orbits_of_tuples(tuples: Sequence[tuple], gen_rows: Sequence[tuple]) -> list:
    universe = set(tuples)
    visited = set()
    orbits = []
    for t in tuples:
        if t in visited:
            continue
        comp = [t]
        visited.add(t)
        queue = [t]
        while queue:
            cur = queue.pop()
            for row in gen_rows:
                img = tuple(row[x] for x in cur)
                if img not in universe:
                    raise ValueError("the action does not preserve the tuple set")
                if img not in visited:
                    visited.add(img)
                    comp.append(img)
                    queue.append(img)
        orbits.append(sorted(comp))
    return orbits


@dataclass(frozen=True)
class TransitivityReport:
    acts_as_automorphisms: bool
    vertex_transitive: bool
    arc_transitive: bool
    locally_transitive: bool
    s_arc_transitive_up_to: int
    action_kernel_size: int

    @property
    def symmetric(self) -> bool:
        """Vertex transitive plus locally transitive automorphism action."""
        return (
            self.acts_as_automorphisms
            and self.vertex_transitive
            and self.locally_transitive
        )

    def as_dict(self) -> dict:
        return {
            "acts_as_automorphisms": self.acts_as_automorphisms,
            "vertex_transitive": self.vertex_transitive,
            "arc_transitive": self.arc_transitive,
            "locally_transitive": self.locally_transitive,
            "s_arc_transitive_up_to": self.s_arc_transitive_up_to,
            "action_kernel_size": self.action_kernel_size,
            "symmetric": self.symmetric,
        }


def _locally_transitive(graph: Graph, act: Action, vertex_transitive: bool) -> bool:
    # with vertex transitivity one representative vertex decides everything
    targets = [0] if vertex_transitive and graph.n else range(graph.n)
    for v in targets:
        nbrs = graph.adj[v]
        if len(nbrs) <= 1:
            continue
        stab_rows = [act.rows[i] for i in act.stabilizer_indices(v)]
        orb = {row[nbrs[0]] for row in stab_rows}
        if len(orb) != len(nbrs):
            return False
    return True


def verify_action(graph: Graph, group: GroupLike, *, s_arc_limit: int = 5) -> TransitivityReport:
    """Measure how transitively the action treats the graph.

    The s-arc level stops at the first s whose s-arcs split into several
    orbits or run out, and never looks past ``s_arc_limit``.
    """
    act = coerce_action(group, graph.n)
    gen_rows = act.generator_rows()
    acts = all(
        (row[u], row[v]) in graph.arcs for row in gen_rows for (u, v) in graph.arcs
    )
    vertex_tr = len(act.orbit_of(0)) == graph.n if graph.n else True
    kernel = act.kernel_size()
    if not acts:
        return TransitivityReport(False, vertex_tr, False, False, 0, kernel)
    arcs_sorted = sorted(graph.arcs)
    arc_tr = (
        len(_orbits_of_tuples(arcs_sorted, gen_rows)) <= 1 if arcs_sorted else True
    )
    local = _locally_transitive(graph, act, vertex_tr)
    s_up = 0
    if vertex_tr:
        for s in range(1, s_arc_limit + 1):
            arcs_s = enumerate_s_arcs(graph, s)
            if not arcs_s:
                break
            if len(_orbits_of_tuples(arcs_s, gen_rows)) != 1:
                break
            s_up = s
    return TransitivityReport(acts, vertex_tr, arc_tr, local, s_up, kernel)


def _joint_refinement(a: Graph, b: Graph):
    ca = [a.degree(v) for v in range(a.n)]
    cb = [b.degree(w) for w in range(b.n)]
    if sorted(ca) != sorted(cb):
        return None, None
    while True:
        siga = [
            (ca[v], tuple(sorted(ca[u] for u in a.adj[v]))) for v in range(a.n)
        ]
        sigb = [
            (cb[w], tuple(sorted(cb[u] for u in b.adj[w]))) for w in range(b.n)
        ]
        palette = {s: i for i, s in enumerate(sorted(set(siga) | set(sigb)))}
        na = [palette[s] for s in siga]
        nb = [palette[s] for s in sigb]
        if sorted(na) != sorted(nb):
            return None, None
        if len(set(na)) == len(set(ca)):
            return na, nb
        ca, cb = na, nb


def are_isomorphic(a: Graph, b: Graph):
    """A vertex bijection carrying arcs exactly onto arcs, or None.

    Colour refinement first, then backtracking inside colour classes with
    the most constrained vertex chosen next.  Comfortable at desk scale.
    """
    n = a.n
    if n != b.n or a.arc_count != b.arc_count:
        return None
    ca, cb = _joint_refinement(a, b)
    if ca is None:
        return None
    if Counter(ca) != Counter(cb):
        return None
    by_colour: dict = {}
    for w, c in enumerate(cb):
        by_colour.setdefault(c, []).append(w)
    mapping = [-1] * n
    used = [False] * n

    def pick() -> int:
        best, best_key = -1, None
        for v in range(n):
            if mapping[v] >= 0:
                continue
            anchored = sum(1 for u in a.adj[v] if mapping[u] >= 0)
            key = (-anchored, len(by_colour[ca[v]]), v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        return best

    def consistent(v: int, w: int) -> bool:
        for u in range(n):
            m = mapping[u]
            if m < 0:
                continue
            if ((u, v) in a.arcs) != ((m, w) in b.arcs):
                return False
        return True

    def search(depth: int) -> bool:
        if depth == n:
            return True
        v = pick()
        for w in by_colour.get(ca[v], ()):
            if used[w] or not consistent(v, w):
                continue
            mapping[v] = w
            used[w] = True
            if search(depth + 1):
                return True
            mapping[v] = -1
            used[w] = False
        return False

    return tuple(mapping) if search(0) else None


@dataclass(frozen=True)
class DirectedSubgraph:
    """A vertex set plus directed arcs among those vertices."""

    vertices: frozenset
    arcs: frozenset

    @classmethod
    def make(cls, vertices: Iterable[int], arcs: Iterable) -> "DirectedSubgraph":
        vs = frozenset(int(v) for v in vertices)
        ar = frozenset((int(u), int(v)) for u, v in arcs)
        for u, v in ar:
            if u not in vs or v not in vs:
                raise ValueError(f"arc ({u}, {v}) leaves the vertex set")
        return cls(vs, ar)

    def key(self) -> tuple:
        return (tuple(sorted(self.vertices)), tuple(sorted(self.arcs)))

    def image(self, row: Sequence[int]) -> "DirectedSubgraph":
        return DirectedSubgraph(
            frozenset(row[v] for v in self.vertices),
            frozenset((row[u], row[v]) for u, v in self.arcs),
        )
