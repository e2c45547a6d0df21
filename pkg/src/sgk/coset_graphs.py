"""Cayley graphs, coset graphs, orbitals, and the double coset dictionary."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    DegreeMismatch,
    DiagonalOrbital,
    InsideSubgroup,
    LoopConnector,
    NoFlippingInvolution,
    NotInverseClosed,
    NotInvolution,
    NotSelfPaired,
    NotSymmetric,
    NotTransitive,
    SpecInvariantViolated,
    certify,
)
from .graphs import Graph, TransitivityReport, is_connected, verify_action
from .perm import Action, GroupLike, GroupTable, Perm, coerce_action, transversal
from .subgroups import (
    CosetSpace,
    Subgroup,
    double_cosets,
    right_cosets,
    stabilizer_subgroup,
)


@dataclass(frozen=True)
class CosetGraphSpec:
    """Group, subgroup, and connecting set for a coset graph."""

    group: GroupTable
    sub: Subgroup
    connectors: frozenset

    def validate(self) -> None:
        if not self.connectors:
            raise SpecInvariantViolated("the connecting set is empty")
        for d in self.connectors:
            if d not in self.group:
                raise SpecInvariantViolated(
                    f"connector {d.cycle_string()} is outside the group"
                )
            if d in self.sub:
                raise SpecInvariantViolated(
                    f"connector {d.cycle_string()} lies in the subgroup"
                )
            if d.inverse() not in self.connectors:
                raise SpecInvariantViolated(
                    f"connecting set is not inverse closed at {d.cycle_string()}"
                )


def cayley_graph(group: GroupTable, connectors: Sequence[Perm]) -> Graph:
    """Vertices are the group elements; x joins y when x·y⁻¹ connects.

    Right multiplication is then an action by automorphisms, checked in the
    tests rather than here.
    """
    conn = frozenset(connectors)
    if not conn:
        raise SpecInvariantViolated("the connecting set is empty")
    ident = group.identity()
    for d in conn:
        if d not in group:
            raise SpecInvariantViolated(
                f"connector {d.cycle_string()} is outside the group"
            )
        if d == ident:
            raise LoopConnector("the identity would join every vertex to itself")
        if d.inverse() not in conn:
            raise NotInverseClosed(f"{d.cycle_string()} lacks its inverse")
    labels = [p.cycle_string() for p in group.elements]
    arcs = []
    for i, x in enumerate(group.elements):
        for d in conn:
            # x·y⁻¹ = d means y = d⁻¹·x
            arcs.append((i, group.index(d.inverse() * x)))
    return Graph(labels, arcs)


def _sabidussi(spec: CosetGraphSpec):
    spec.validate()
    cosets = right_cosets(spec.group, spec.sub)
    labels = [rep.cycle_string() for rep in cosets.reps]
    arcs = set()
    cfe = cosets.coset_of_element
    for d in spec.connectors:
        for y in spec.group.elements:
            # the arc (Hdy, Hy); x·y⁻¹ = d at x = d·y
            arcs.add((cfe[spec.group.index(d * y)], cfe[spec.group.index(y)]))
    return Graph(labels, arcs), cosets


def sabidussi_graph(spec: CosetGraphSpec) -> Graph:
    """Coset graph on right cosets of the subgroup: Hx joins Hy exactly
    when x·y⁻¹ falls in the connecting set."""
    graph, _ = _sabidussi(spec)
    return graph


@dataclass(frozen=True)
class CosetGraphResult:
    graph: Graph
    cosets: CosetSpace
    action: Action
    report: TransitivityReport
    connector_class: tuple
    valency: int
    arc_stabilizer_order: int
    kernel_order: int
    connected: bool


def symmetric_coset_graph(group: GroupTable, sub: Subgroup, a: Perm) -> CosetGraphResult:
    """Coset graph whose connecting set is the double coset of an
    involution outside the subgroup; the canonical shape of a symmetric
    graph, certified on the way out."""
    if a not in group:
        raise NotInvolution(f"{a.cycle_string()} is not in the group")
    if not a.is_involution():
        raise NotInvolution(f"{a.cycle_string()} is not an involution")
    if a in sub:
        raise InsideSubgroup(
            "the involution lies in the subgroup; the graph would have loops"
        )
    block = {}
    for h1 in sub.elements:
        left = h1 * a
        for h2 in sub.elements:
            q = left * h2
            block[q.images] = q
    connectors = frozenset(block.values())
    graph, cosets = _sabidussi(CosetGraphSpec(group, sub, connectors))
    action = cosets.action()
    report = verify_action(graph, action)
    # the arc stabiliser of (H, Ha) is a⁻¹Ha ∩ H; a is its own inverse
    conj = {(a * h * a).images for h in sub.elements}
    arc_stab_order = sum(1 for p in sub.elements if p.images in conj)
    valency = graph.valency()
    certify(valency == sub.order // arc_stab_order, "valency is |H| / |a⁻¹Ha ∩ H|")
    certify(report.symmetric, "a double coset of an involution gives a symmetric graph")
    return CosetGraphResult(
        graph=graph,
        cosets=cosets,
        action=action,
        report=report,
        connector_class=tuple(sorted(connectors, key=lambda p: p.images)),
        valency=valency,
        arc_stabilizer_order=arc_stab_order,
        kernel_order=action.kernel_size(),
        connected=is_connected(graph),
    )


# ---- orbitals -----------------------------------------------------------------


@dataclass(frozen=True)
class Orbital:
    pairs: tuple
    diagonal: bool
    self_paired: bool

    @property
    def size(self) -> int:
        return len(self.pairs)


def orbitals(group: GroupLike, domain_size: Optional[int] = None) -> list:
    """Orbits on ordered pairs of a transitive action, by least pair."""
    if isinstance(group, GroupTable):
        act = Action.natural(group)
    else:
        act = group
    if domain_size is not None and domain_size != act.n_points:
        raise DegreeMismatch(
            f"action on {act.n_points} points, expected {domain_size}"
        )
    n = act.n_points
    if len(act.orbit_of(0)) != n:
        raise NotTransitive("orbitals are defined for transitive actions")
    gen_rows = act.generator_rows()
    seen = set()
    out = []
    for u in range(n):
        for v in range(n):
            if (u, v) in seen:
                continue
            pairs = {(u, v)}
            queue = [(u, v)]
            while queue:
                x, y = queue.pop()
                for row in gen_rows:
                    img = (row[x], row[y])
                    if img not in pairs:
                        pairs.add(img)
                        queue.append(img)
            seen |= pairs
            out.append(
                Orbital(
                    pairs=tuple(sorted(pairs)),
                    diagonal=(u == v),
                    self_paired=((v, u) in pairs),
                )
            )
    return out


def orbital_graph(group: GroupLike, domain_size: Optional[int], orbital: Orbital) -> Graph:
    """The graph whose arc set is a self paired nondiagonal orbital."""
    if orbital.diagonal:
        raise DiagonalOrbital("the diagonal orbital has no arcs")
    if not orbital.self_paired:
        raise NotSelfPaired("the orbital is not closed under reversal")
    if isinstance(group, GroupTable):
        act = Action.natural(group)
    else:
        act = group
    n = act.n_points if domain_size is None else domain_size
    if act.n_points != n:
        raise DegreeMismatch(f"action on {act.n_points} points, expected {n}")
    pairset = set(orbital.pairs)
    # cheap re-check that the orbital really is one orbit of this action
    gen_rows = act.generator_rows()
    u, v = orbital.pairs[0]
    regen = {(u, v)}
    queue = [(u, v)]
    while queue:
        x, y = queue.pop()
        for row in gen_rows:
            img = (row[x], row[y])
            if img not in regen:
                regen.add(img)
                queue.append(img)
    if regen != pairset:
        raise ValueError("the orbital does not match this action")
    return Graph([str(i + 1) for i in range(n)], orbital.pairs)


def orbital_double_coset_map(group: GroupTable, sub: Subgroup) -> list:
    """Pair each double coset HxH with the orbital of (H, Hx) in the coset
    action.  The pairing is a bijection and is certified as one."""
    cosets = right_cosets(group, sub)
    act = cosets.action()
    orbs = orbitals(act)
    pair_sets = [set(ob.pairs) for ob in orbs]
    dcs = double_cosets(group, sub)
    pairing = []
    used = set()
    for dc in dcs.classes:
        target = (0, cosets.coset_of_element[group.index(dc.rep)])
        matches = [k for k, ps in enumerate(pair_sets) if target in ps]
        certify(len(matches) == 1, "each double coset meets exactly one orbital")
        k = matches[0]
        certify(k not in used, "double cosets map to distinct orbitals")
        used.add(k)
        pairing.append((dc, orbs[k]))
    certify(len(used) == len(orbs), "every orbital is reached")
    return pairing


# ---- recognition ---------------------------------------------------------------


@dataclass(frozen=True)
class RecognitionResult:
    sub: Subgroup
    involution: Perm
    rebuilt: CosetGraphResult
    vertex_map: tuple
    exact: bool


def recognize_as_coset_graph(graph: Graph, group: GroupTable) -> RecognitionResult:
    """Write a symmetric graph as a coset graph on the stabiliser of its
    first vertex, using the least involution that flips an arc at that
    vertex.  The returned vertex map is certified to carry arcs exactly
    onto arcs."""
    act = coerce_action(group, graph.n)
    report = verify_action(graph, act)
    if not report.symmetric:
        raise NotSymmetric("the action is not symmetric on this graph")
    sub = stabilizer_subgroup(group, 0)
    flip = None
    for p in group.elements:
        if p.is_involution() and p.images[0] in graph.adj[0]:
            flip = p
            break
    if flip is None:
        raise NoFlippingInvolution(
            "no involution carries the base vertex to one of its neighbours"
        )
    rebuilt = symmetric_coset_graph(group, sub, flip)
    wit = transversal(group, 0)
    vmap = [
        rebuilt.cosets.coset_of_element[group.index(wit[v])] for v in range(graph.n)
    ]
    exact = (
        len(set(vmap)) == graph.n
        and {(vmap[u], vmap[v]) for (u, v) in graph.arcs} == rebuilt.graph.arcs
    )
    certify(exact, "the transversal map is an isomorphism onto the coset graph")
    return RecognitionResult(
        sub=sub,
        involution=flip,
        rebuilt=rebuilt,
        vertex_map=tuple(vmap),
        exact=exact,
    )
