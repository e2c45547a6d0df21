"""Quotient graphs over invariant partitions, covers, cross sections, and
the dictionary between quotients and overgroup coset graphs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .coset_graphs import CosetGraphResult, symmetric_coset_graph
from .designs import DesignParams, IncidenceStructure, validate_design
from .errors import (
    DegenerateQuotient,
    NotInvariant,
    NotNested,
    NotQuotientArc,
    NotSymmetric,
    TrivialQuotient,
    certify,
)
from .graphs import Graph, TransitivityReport, are_isomorphic, verify_action
from .perm import Action, GroupLike, GroupTable, Perm, coerce_action
from .subgroups import BlockSystem, Subgroup, right_cosets


def _require_invariant(system: BlockSystem, act: Action) -> None:
    for row in act.generator_rows():
        for block in system.blocks:
            targets = {system.block_of[row[v]] for v in block}
            if len(targets) != 1:
                raise NotInvariant(
                    f"a generator splits block {block} across blocks {sorted(targets)}"
                )


def quotient_action(system: BlockSystem, group: GroupLike) -> Action:
    """The action induced on the blocks; rows follow the group's order."""
    act = coerce_action(group, system.n_points)
    _require_invariant(system, act)
    rows = []
    for row in act.rows:
        rows.append(
            tuple(system.block_of[row[block[0]]] for block in system.blocks)
        )
    return Action(act.group, system.n_blocks, tuple(rows))


def quotient_graph(graph: Graph, group: GroupLike, partition: BlockSystem) -> Graph:
    """Vertices are the blocks; two blocks are adjacent when any arc joins
    them.  Arcs inside a block are discarded, not marked.

    The induced action on the result is checked to be symmetric, which the
    invariance of the partition guarantees.
    """
    if partition.n_points != graph.n:
        raise NotInvariant(
            f"partition of {partition.n_points} points against a graph on {graph.n}"
        )
    act = coerce_action(group, graph.n)
    report = verify_action(graph, act)
    if not report.symmetric:
        raise NotSymmetric("quotients are taken of symmetric graphs only")
    _require_invariant(partition, act)
    labels = tuple(
        f"B{i}:{graph.labels[block[0]]}" for i, block in enumerate(partition.blocks)
    )
    arcs = set()
    for u, v in graph.arcs:
        bu, bv = partition.block_of[u], partition.block_of[v]
        if bu != bv:
            arcs.add((bu, bv))
    quo = Graph(labels, sorted(arcs))
    certify(
        verify_action(quo, quotient_action(partition, act)).symmetric,
        "the induced action on the quotient is symmetric",
    )
    return quo


def quotient_is_nontrivial(graph: Graph, partition: BlockSystem) -> bool:
    """True when the graph has arcs and every arc crosses blocks.

    For a symmetric graph the arcs form one orbit, so either all of them
    cross (every block is an independent set and the quotient keeps full
    valency) or none do.  The partition into singletons is nontrivial
    here; the one-block partition never is.
    """
    if not graph.arcs:
        return False
    return all(
        partition.block_of[u] != partition.block_of[v] for u, v in graph.arcs
    )


def induced_bipartite(graph: Graph, partition: BlockSystem, b: int, c: int) -> Graph:
    """The bipartite graph an adjacent block pair induces.

    Vertices are the members of each block with a neighbour in the other
    one, arcs the original arcs between the two sides; vertex labels come
    from the host graph.
    """
    if not 0 <= b < partition.n_blocks or not 0 <= c < partition.n_blocks:
        raise NotQuotientArc(f"no blocks numbered {b} and {c}")
    if b == c:
        raise NotQuotientArc("need two distinct blocks")
    touched = set()
    cross = []
    for u, v in graph.arcs:
        if (partition.block_of[u], partition.block_of[v]) == (b, c):
            touched.add(u)
            touched.add(v)
            cross.append((u, v))
            cross.append((v, u))
    if not touched:
        raise NotQuotientArc(f"blocks {b} and {c} are not adjacent in the quotient")
    vs = sorted(touched)
    pos = {v: i for i, v in enumerate(vs)}
    return Graph(
        [graph.labels[v] for v in vs],
        [(pos[u], pos[v]) for u, v in cross],
    )


def cover_class(graph: Graph, partition: BlockSystem) -> str:
    """Classify the projection onto the quotient.

    ``cover`` when every vertex has exactly one neighbour in each adjacent
    block, ``multicover_proper`` when it always has at least one but
    sometimes several, ``neither`` when some vertex misses some adjacent
    block entirely.
    """
    if not quotient_is_nontrivial(graph, partition):
        raise TrivialQuotient("cover classification needs a nontrivial quotient")
    quo_arcs = set()
    for u, v in graph.arcs:
        quo_arcs.add((partition.block_of[u], partition.block_of[v]))
    lo, hi = None, None
    for bu, bv in quo_arcs:
        for u in partition.blocks[bu]:
            deg = sum(1 for w in graph.adj[u] if partition.block_of[w] == bv)
            lo = deg if lo is None else min(lo, deg)
            hi = deg if hi is None else max(hi, deg)
    if lo == 0:
        return "neither"
    return "cover" if hi == 1 else "multicover_proper"


@dataclass(frozen=True)
class CrossSection:
    """The design one block sees, with its parameters and the identity of
    its points in the host graph."""

    design: IncidenceStructure
    params: DesignParams
    points: tuple


def cross_section_design(
    graph: Graph, group: GroupLike, partition: BlockSystem, b: int
) -> CrossSection:
    """The incidence structure on block b: one design block per quotient
    neighbour C, collecting the points of b that send an arc into C.

    Certifies the uniformity laws and flag transitivity of the setwise
    stabilizer of b, both guaranteed for symmetric graphs.
    """
    act = coerce_action(group, graph.n)
    if not quotient_is_nontrivial(graph, partition):
        raise TrivialQuotient("cross sections are cut through nontrivial quotients")
    quo = quotient_graph(graph, act, partition)
    if not 0 <= b < partition.n_blocks:
        raise NotQuotientArc(f"no block numbered {b}")
    neighbours = [c for c in range(quo.n) if quo.has_arc(b, c)]
    points = list(partition.blocks[b])
    where = {p: i for i, p in enumerate(points)}
    col_of = {c: j for j, c in enumerate(neighbours)}
    flags = set()
    for j, c in enumerate(neighbours):
        for p in points:
            if any(partition.block_of[w] == c for w in graph.adj[p]):
                flags.add((where[p], j))
    inc = IncidenceStructure(
        point_labels=tuple(graph.labels[p] for p in points),
        block_labels=tuple(quo.labels[c] for c in neighbours),
        flags=frozenset(flags),
    )
    try:
        params = validate_design(inc)
    except Exception as exc:
        raise RuntimeError(f"certification failed: cross section is not uniform ({exc})")
    stab = [
        row
        for row in act.rows
        if all(partition.block_of[row[p]] == b for p in points)
    ]
    base_flag = min(flags)
    orbit = set()
    for row in stab:
        qrow = {c: partition.block_of[row[partition.blocks[c][0]]] for c in neighbours}
        orbit.add((where[row[points[base_flag[0]]]], col_of[qrow[neighbours[base_flag[1]]]]))
    certify(
        orbit == flags,
        "the setwise stabilizer is flag transitive on the cross section",
    )
    return CrossSection(inc, params, tuple(points))


@dataclass(frozen=True)
class QuotientCertificate:
    quotient: Graph
    partition: BlockSystem
    nontrivial: bool
    cover_class: Optional[str]
    bipartite_pattern: Optional[Graph]
    design_params: Optional[DesignParams]
    report: TransitivityReport
    bipartite_uniform: Optional[bool]


def certify_quotient(
    graph: Graph,
    group: GroupLike,
    partition: BlockSystem,
    *,
    allow_trivial: bool = False,
) -> QuotientCertificate:
    """Quotient plus the facts a caller will want on file: cover class,
    a representative induced bipartite graph with the verdict of the
    all-pairs isomorphism check, and the cross-sectional design numbers.

    Trivial quotients are refused unless ``allow_trivial`` is set; with it
    the classification fields come back as None.
    """
    act = coerce_action(group, graph.n)
    quo = quotient_graph(graph, act, partition)
    qact = quotient_action(partition, act)
    report = verify_action(quo, qact)
    nontrivial = quotient_is_nontrivial(graph, partition)
    if not nontrivial:
        if not allow_trivial:
            raise TrivialQuotient(
                "some arc stays inside a block (or there are no arcs); "
                "pass allow_trivial to certify anyway"
            )
        return QuotientCertificate(
            quo, partition, False, None, None, None, report, None
        )
    kind = cover_class(graph, partition)
    arcs_sorted = sorted(quo.arcs)
    b0, c0 = arcs_sorted[0]
    pattern = induced_bipartite(graph, partition, b0, c0)
    uniform = all(
        are_isomorphic(pattern, induced_bipartite(graph, partition, u, v)) is not None
        for u, v in arcs_sorted[1:]
    )
    certify(uniform, "all induced bipartite graphs are isomorphic")
    section = cross_section_design(graph, act, partition, b0)
    return QuotientCertificate(
        quo, partition, True, kind, pattern, section.params, report, uniform
    )


@dataclass(frozen=True)
class QuotientCosetForm:
    """The two coset graphs of the quotient dictionary plus the block data
    tying them together."""

    base: CosetGraphResult
    quotient: Graph
    model: CosetGraphResult
    partition: BlockSystem
    vertex_map: tuple
    exact: bool


def quotient_as_coset_graph(
    group: GroupTable, sub: Subgroup, a: Perm, over: Subgroup
) -> QuotientCosetForm:
    """Quotient dictionary: the quotient of the coset graph on H by the
    blocks of K-cosets is the coset graph on K, for H < K < G.

    Builds both coset graphs, forms the block system the larger subgroup
    induces on the smaller one's cosets, and certifies that the quotient
    matches the second coset graph arc for arc.
    """
    h_set = sub.member_images()
    k_set = over.member_images()
    if not h_set <= k_set:
        raise NotNested("the quotient subgroup must contain the base subgroup")
    if len(h_set) == len(k_set):
        raise NotNested("the containment H < K must be strict")
    if over.order == len(group):
        raise NotNested("K must be a proper subgroup; one block is no quotient")
    if a.images in k_set:
        raise DegenerateQuotient(
            "the connecting involution lies in the larger subgroup; "
            "the quotient would collapse"
        )
    base = symmetric_coset_graph(group, sub, a)
    model = symmetric_coset_graph(group, over, a)
    k_cosets = right_cosets(group, over)
    blocks = [[] for _ in range(k_cosets.n_cosets)]
    for v in range(base.graph.n):
        blocks[k_cosets.coset_of(base.cosets.reps[v])].append(v)
    partition = BlockSystem.from_blocks(base.graph.n, blocks)
    quo = quotient_graph(base.graph, base.action, partition)
    # a block holds the H-cosets filling one K-coset; send it there
    vertex_map = tuple(
        k_cosets.coset_of(base.cosets.reps[block[0]]) for block in partition.blocks
    )
    certify(
        sorted(vertex_map) == list(range(model.graph.n)),
        "blocks land on the K-cosets bijectively",
    )
    mapped = {(vertex_map[u], vertex_map[v]) for u, v in quo.arcs}
    exact = mapped == model.graph.arcs
    certify(exact, "the quotient is the coset graph of the larger subgroup")
    return QuotientCosetForm(base, quo, model, partition, vertex_map, exact)
