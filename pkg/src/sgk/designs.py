"""Incidence structures, 1-designs, duals, and polarities."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    AmbiguousBlockAction,
    DegenerateDesign,
    DegreeMismatch,
    NoBlockAction,
    NotFlagTransitive,
    NotPolarity,
    NotSymmetric,
    NotUniformBlocks,
    NotUniformPoints,
    certify,
)
from .graphs import Graph, verify_action
from .perm import GroupTable, coerce_action


@dataclass(frozen=True)
class IncidenceStructure:
    """Labelled points and blocks with a flag set; repeated blocks are kept
    apart by their labels, so two blocks may carry the same trace."""

    point_labels: tuple
    block_labels: tuple
    flags: frozenset

    def __post_init__(self):
        traces = [set() for _ in self.block_labels]
        stars = [set() for _ in self.point_labels]
        for p, b in self.flags:
            if not 0 <= p < len(self.point_labels):
                raise ValueError(f"flag point {p} out of range")
            if not 0 <= b < len(self.block_labels):
                raise ValueError(f"flag block {b} out of range")
            traces[b].add(p)
            stars[p].add(b)
        object.__setattr__(self, "_traces", tuple(frozenset(t) for t in traces))
        object.__setattr__(self, "_stars", tuple(frozenset(s) for s in stars))

    @property
    def n_points(self) -> int:
        return len(self.point_labels)

    @property
    def n_blocks(self) -> int:
        return len(self.block_labels)

    def trace(self, b: int) -> frozenset:
        return self._traces[b]

    def star(self, p: int) -> frozenset:
        return self._stars[p]

    def __repr__(self) -> str:
        return (
            f"<incidence structure: {self.n_points} points, "
            f"{self.n_blocks} blocks, {len(self.flags)} flags>"
        )


@dataclass(frozen=True)
class DesignParams:
    v: int
    b: int
    k: int
    lam: int
    multiplicity: int


def validate_design(inc: IncidenceStructure) -> DesignParams:
    """Parameters of a 1-design; uniformity failures name the culprit."""
    if inc.n_blocks == 0:
        raise NotUniformBlocks("there are no blocks at all")
    sizes = {len(inc.trace(b)) for b in range(inc.n_blocks)}
    if len(sizes) != 1:
        raise NotUniformBlocks(f"block sizes vary: {sorted(sizes)}")
    k = sizes.pop()
    if k == 0:
        raise NotUniformBlocks("blocks are empty")
    degrees = {len(inc.star(p)) for p in range(inc.n_points)}
    if len(degrees) != 1:
        raise NotUniformPoints(f"point degrees vary: {sorted(degrees)}")
    lam = degrees.pop()
    if lam == 0:
        raise NotUniformPoints("points lie in no blocks")
    counts = Counter(inc.trace(b) for b in range(inc.n_blocks))
    multiplicity = math.gcd(*counts.values())
    # double counting flags: v·λ and b·k both equal the flag count
    assert inc.n_points * lam == inc.n_blocks * k == len(inc.flags)
    return DesignParams(inc.n_points, inc.n_blocks, k, lam, multiplicity)


def dual(inc: IncidenceStructure) -> IncidenceStructure:
    return IncidenceStructure(
        point_labels=inc.block_labels,
        block_labels=inc.point_labels,
        flags=frozenset((b, p) for p, b in inc.flags),
    )


def reduce_repeated_blocks(inc: IncidenceStructure) -> IncidenceStructure:
    """Keep the first block of each repeated trace, in block order."""
    kept = []
    seen = set()
    for b in range(inc.n_blocks):
        t = inc.trace(b)
        if t not in seen:
            seen.add(t)
            kept.append(b)
    renumber = {b: i for i, b in enumerate(kept)}
    return IncidenceStructure(
        point_labels=inc.point_labels,
        block_labels=tuple(inc.block_labels[b] for b in kept),
        flags=frozenset((p, renumber[b]) for p, b in inc.flags if b in renumber),
    )


def block_rows(inc: IncidenceStructure, group: GroupTable) -> list:
    """The block action induced through traces by a point action.

    Needs pairwise distinct traces, otherwise the induced action is not
    well defined; raises NoBlockAction when some image set is not a trace.
    """
    if group.degree != inc.n_points:
        raise DegreeMismatch(
            f"group of degree {group.degree} against {inc.n_points} points"
        )
    trace_index = {}
    for b in range(inc.n_blocks):
        t = inc.trace(b)
        if t in trace_index:
            raise AmbiguousBlockAction(
                f"blocks {trace_index[t]} and {b} share a trace; "
                "reduce repeated blocks first"
            )
        trace_index[t] = b
    rows = []
    for g in group.elements:
        row = []
        for b in range(inc.n_blocks):
            img = frozenset(g.images[p] for p in inc.trace(b))
            if img not in trace_index:
                raise NoBlockAction(
                    f"{g.cycle_string()} does not carry block {b} to a block"
                )
            row.append(trace_index[img])
        rows.append(tuple(row))
    return rows


def is_flag_transitive(inc: IncidenceStructure, group: GroupTable) -> bool:
    rows = block_rows(inc, group)
    if not inc.flags:
        return False
    base = min(inc.flags)
    orbit = {
        (g.images[base[0]], rows[i][base[1]])
        for i, g in enumerate(group.elements)
    }
    return orbit == set(inc.flags)


@dataclass(frozen=True)
class Polarity:
    """Mutually inverse maps between points and blocks."""

    point_map: tuple
    block_map: tuple


def check_polarity(inc: IncidenceStructure, group: GroupTable, pol: Polarity) -> None:
    """Raise NotPolarity unless ``pol`` is a group equivariant polarity."""
    n = inc.n_points
    if inc.n_blocks != n:
        raise NotPolarity("point and block counts differ")
    if len(pol.point_map) != n or len(pol.block_map) != n:
        raise NotPolarity("maps have the wrong length")
    for p in range(n):
        if pol.block_map[pol.point_map[p]] != p:
            raise NotPolarity(f"maps are not mutually inverse at point {p}")
    for b in range(n):
        if pol.point_map[pol.block_map[b]] != b:
            raise NotPolarity(f"maps are not mutually inverse at block {b}")
    for p in range(n):
        for b in range(n):
            if ((p, b) in inc.flags) != ((pol.block_map[b], pol.point_map[p]) in inc.flags):
                raise NotPolarity(
                    f"flag duality fails at point {p}, block {b}"
                )
    rows = block_rows(inc, group)
    for i, g in enumerate(group.elements):
        for p in range(n):
            if pol.point_map[g.images[p]] != rows[i][pol.point_map[p]]:
                raise NotPolarity(
                    f"{g.cycle_string()} does not commute with the polarity"
                )


def design_from_graph(graph: Graph, group: GroupTable) -> tuple:
    """One block per vertex carrying its neighbourhood, plus the canonical
    polarity matching each vertex with its own block.

    Returns (design, polarity).
    """
    act = coerce_action(group, graph.n)
    report = verify_action(graph, act)
    if not report.symmetric:
        raise NotSymmetric("the design construction needs a symmetric graph")
    if any(len(graph.adj[v]) == 0 for v in range(graph.n)):
        raise NotSymmetric("isolated vertices would give empty blocks")
    block_labels = tuple(f"N({lbl})" for lbl in graph.labels)
    flags = frozenset((u, v) for (u, v) in graph.arcs)
    inc = IncidenceStructure(graph.labels, block_labels, flags)
    pol = Polarity(tuple(range(graph.n)), tuple(range(graph.n)))
    # blocks ride along with their vertices, so flag orbits are arc orbits
    certify(
        report.arc_transitive,
        "the neighbourhood design of a symmetric graph is flag transitive",
    )
    return inc, pol


def graph_from_design(inc: IncidenceStructure, group: GroupTable, pol: Polarity) -> Graph:
    """Join p to q when q lies in the block the polarity assigns to p.

    The polarity makes the arc set symmetric; degeneracy (a point on its
    own polar block) would create loops and is refused.
    """
    check_polarity(inc, group, pol)
    for p in range(inc.n_points):
        if (p, pol.point_map[p]) in inc.flags:
            raise DegenerateDesign(
                f"point {p} lies on its own polar block; the graph would "
                "need a loop there"
            )
    arcs = []
    for p in range(inc.n_points):
        for q in inc.trace(pol.point_map[p]):
            arcs.append((p, q))
    graph = Graph(inc.point_labels, arcs)
    report = verify_action(graph, group)
    certify(report.symmetric, "a polarity of a flag transitive design gives a symmetric graph")
    certify(
        all(
            frozenset(graph.adj[v]) == inc.trace(pol.point_map[v])
            for v in range(graph.n)
        ),
        "neighbourhoods of the rebuilt graph are the polar traces",
    )
    return graph


def find_polarities(inc: IncidenceStructure, group: GroupTable) -> list:
    """All group equivariant polarities of a flag transitive design.

    A polarity is pinned down by the image of one point because the group
    moves that point everywhere, so seeding each block and extending along
    the group finds every candidate.
    """
    if not is_flag_transitive(inc, group):
        raise NotFlagTransitive("the group is not flag transitive on the design")
    n = inc.n_points
    if inc.n_blocks != n:
        return []
    rows = block_rows(inc, group)
    out = []
    for seed in range(n):
        pm = [-1] * n
        ok = True
        for i, g in enumerate(group.elements):
            src, dst = g.images[0], rows[i][seed]
            if pm[src] < 0:
                pm[src] = dst
            elif pm[src] != dst:
                ok = False
                break
        if not ok or -1 in pm or len(set(pm)) != n:
            continue
        bm = [0] * n
        for p, b in enumerate(pm):
            bm[b] = p
        pol = Polarity(tuple(pm), tuple(bm))
        try:
            check_polarity(inc, group, pol)
        except NotPolarity:
            continue
        out.append(pol)
    return out
