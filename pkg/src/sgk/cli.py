"""Command line front end.

Every subcommand builds its object from text inputs, re-checks the claims
it advertises, and emits a JSON certificate recording input digests, the
measured facts, and each claim with a witness or a counterexample.

Exit status: 0 when every claim passed, 2 when a claim failed (the
certificate then carries a concrete counterexample), 1 when the input
itself was rejected; rejections print a stable error code on stderr.

Certificates are deterministic byte for byte apart from ``timing_ms``:
keys are sorted, sampling uses fixed seeds, and every collection is
emitted in a canonical order.
"""

import argparse
import hashlib
import json
import random
import sys
import time
from pathlib import Path
from typing import Optional

from .constructions import (
    arc_partition_extension,
    biggs_cover,
    chain_from_seeds,
    check_condition_pe,
    check_three_arc_necessity,
    extract_fibre_data,
    flag_orbital_reconstruction,
    semidirect_product,
    three_arc_graph,
    three_arc_orbits,
    validate_nchain,
)
from .designs import (
    check_polarity,
    design_from_graph,
    find_polarities,
    graph_from_design,
    is_flag_transitive,
    validate_design,
)
from .errors import KitError, NotPolarity
from .graphs import Graph, are_isomorphic, is_connected, verify_action
from .io import (
    format_design,
    format_graph,
    graph_to_dot,
    parse_blocks_file,
    parse_chain_seeds,
    parse_design_file,
    parse_graph_file,
    parse_group_file,
    parse_subgroup_generators,
    parse_twist_file,
)
from .perm import Action, GroupSpec, GroupTable, Perm, coerce_action, enumerate_group
from .quotients import certify_quotient, induced_bipartite, quotient_action
from .subgroups import (
    all_block_systems,
    lattice_is_order_isomorphic,
    setwise_stabilizer,
    subgroup_block_lattice,
    subgroup_from_generators,
    system_from_block,
)
from .coset_graphs import orbitals, symmetric_coset_graph

# Each certificate claim cites one of these invariants by id; the text is
# the statement the claim checks.  Subcommands may only emit ids from here.
CLAIM_INVARIANTS = {
    "orbit-stabilizer": "orbit size times stabilizer order equals the group order at every point",
    "orbit-partition": "orbits are pairwise equal or disjoint and cover the domain",
    "enumeration-determinism": "re-enumerating the same generators reproduces the element order",
    "double-coset-sizing": "|HxH| times |x^-1Hx n H| equals |H|^2 for every class",
    "core-equals-kernel": "the core of the subgroup equals the kernel of the coset action",
    "lattice-isomorphism": "subgroup containment matches block containment in both directions",
    "block-closure": "every generator image of a block is a block of the same system",
    "fiber-evaluation": "the setwise stabilizer of a block is transitive on the block",
    "symmetric-action": "the group acts as automorphisms, vertex and locally transitively",
    "symmetric-iff-arc-transitive": "symmetric and arc-transitive agree when no vertex is isolated",
    "isomorphism-agreement": "the isomorphism decision matches brute force search",
    "valency-law": "vertex degree equals |H| / |a^-1Ha n H| at every vertex",
    "arc-stabilizer-law": "the stabilizer of the base arc is a^-1Ha n H as a set",
    "coset-round-trip": "recognizing then rebuilding returns an isomorphic graph",
    "rank-consistency": "the orbital count equals the point stabilizer's orbit count",
    "quotient-symmetry": "the induced action on the quotient passes the full symmetric report",
    "fiber-transitivity": "the action kernel is transitive on every fibre",
    "design-double-count": "v times lambda equals b times k",
    "quotient-homomorphism": "the block map intertwines the two actions on every generator",
    "cover-arithmetic": "cover vertex counts and valencies multiply out exactly",
    "graph-design-parameters": "the neighbourhood design has v = b and k = lambda = valency",
    "polarity-commutation": "the polarity commutes with every group element",
    "design-round-trip": "rebuilding the graph from its design data returns an isomorphic graph",
    "flag-transitivity-propagates": "flag transitivity forces point and block transitivity",
    "biggs-action-law": "acting by a product equals acting by its factors in order",
    "biggs-valency-preservation": "the cover valency equals the base valency",
    "biggs-fiber-matching": "every adjacent fibre pair induces a perfect matching",
    "three-arc-identification": "vertices are the base arcs and the initial-vertex quotient is the base",
    "chain-determinacy": "one seed per arc orbit determines the whole chain",
    "subgraph-graph-transitivity": "the action on subgraph images is vertex and arc transitive",
    "extension-counting": "vertices scale by r, valency divides by r, edge count is preserved",
}


class Certificate:
    """Accumulates inputs, facts, and claims for one invocation."""

    def __init__(self, construction: str):
        self.construction = construction
        self.inputs: dict = {}
        self.facts: dict = {}
        self.claims: list = []
        self._start = time.perf_counter()

    def add_input(self, name: str, text: str) -> None:
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
        self.inputs[name] = f"sha256:{digest}"

    def claim(self, cid: str, passed: bool, detail) -> None:
        if cid not in CLAIM_INVARIANTS:
            raise AssertionError(f"unknown claim id {cid}")
        entry = {"id": cid, "pass": bool(passed)}
        if passed:
            entry["witness"] = detail
        else:
            entry["counterexample"] = detail
        self.claims.append(entry)

    @property
    def ok(self) -> bool:
        return all(c["pass"] for c in self.claims)

    def render(self) -> str:
        doc = {
            "construction": self.construction,
            "inputs": self.inputs,
            "facts": self.facts,
            "claims": self.claims,
            "ok": self.ok,
            "timing_ms": round((time.perf_counter() - self._start) * 1000.0, 3),
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# ---- plumbing ----------------------------------------------------------------


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc.strerror or exc}") from None


def _load_group(cert: Certificate, path: str, name: str = "group") -> GroupTable:
    text = _read_text(path)
    cert.add_input(name, text)
    return enumerate_group(parse_group_file(text))


def _load_graph(cert: Certificate, path: str, name: str = "graph") -> Graph:
    text = _read_text(path)
    cert.add_input(name, text)
    return parse_graph_file(text)


def _graph_output(graph: Graph, fmt: Optional[str]) -> Optional[str]:
    if fmt is None:
        return None
    return graph_to_dot(graph) if fmt == "dot" else format_graph(graph)


def _induced_group_text(act: Action) -> str:
    """The acting group as a group file on the action's points.

    Unfaithful actions are written as their induced quotients, which is
    what a replay needs.
    """
    ident = tuple(range(act.n_points))
    gens = []
    seen = {ident}
    for row in act.generator_rows():
        if row not in seen:
            seen.add(row)
            gens.append(Perm(row))
    if not gens:
        gens = [Perm(ident)]
    return "degree: {}\n".format(act.n_points) + "".join(
        g.cycle_string() + "\n" for g in gens
    )


def _write_group_out(args, act: Action) -> None:
    path = getattr(args, "group_out", None)
    if path:
        Path(path).write_text(_induced_group_text(act))


def _point_orbits(group: GroupTable) -> list:
    act = Action.natural(group)
    seen = [False] * group.degree
    orbits = []
    for p in range(group.degree):
        if seen[p]:
            continue
        orb = sorted(act.orbit_of(p))
        for q in orb:
            seen[q] = True
        orbits.append(orb)
    return orbits


def _orbits_under_rows(rows, n: int) -> list:
    seen = [False] * n
    orbits = []
    for p in range(n):
        if seen[p]:
            continue
        orb = {p}
        queue = [p]
        while queue:
            x = queue.pop()
            for row in rows:
                y = row[x]
                if y not in orb:
                    orb.add(y)
                    queue.append(y)
        for q in orb:
            seen[q] = True
        orbits.append(sorted(orb))
    return orbits


def _arc_pair(graph: Graph, u: int, v: int) -> list:
    return [graph.labels[u], graph.labels[v]]


def _claim_symmetric(cert: Certificate, graph: Graph, act: Action, report) -> None:
    """The symmetric-action claim with a concrete counterexample on failure."""
    if report.symmetric:
        cert.claim(
            "symmetric-action",
            True,
            f"vertex transitive and locally transitive on {graph.n} vertices",
        )
        return
    detail: dict = {}
    if not report.acts_as_automorphisms:
        for i in act.group.generator_indices():
            row = act.rows[i]
            for (u, v) in sorted(graph.arcs):
                if (row[u], row[v]) not in graph.arcs:
                    detail = {
                        "kind": "generator breaks an arc",
                        "generator": act.group.element(i).cycle_string(),
                        "arc": _arc_pair(graph, u, v),
                        "image": [graph.labels[row[u]], graph.labels[row[v]]],
                    }
                    break
            if detail:
                break
    elif not report.vertex_transitive:
        detail = {
            "kind": "vertex orbit is proper",
            "orbit_of_first_vertex": [graph.labels[v] for v in sorted(act.orbit_of(0))],
        }
    else:
        gen_rows = act.generator_rows()
        arcs = sorted(graph.arcs)
        orbit = {arcs[0]}
        queue = [arcs[0]]
        while queue:
            a = queue.pop()
            for row in gen_rows:
                b = (row[a[0]], row[a[1]])
                if b not in orbit:
                    orbit.add(b)
                    queue.append(b)
        outside = next(a for a in arcs if a not in orbit)
        detail = {
            "kind": "two arcs in different orbits",
            "arc": _arc_pair(graph, *arcs[0]),
            "unreached_arc": _arc_pair(graph, *outside),
        }
    cert.claim("symmetric-action", False, detail)


# ---- subcommands -------------------------------------------------------------


def cmd_group(args, cert: Certificate) -> Optional[str]:
    group = _load_group(cert, args.group)
    act = Action.natural(group)
    orbits = _point_orbits(group)
    cert.facts.update(
        {
            "degree": group.degree,
            "order": len(group),
            "generators": [g.cycle_string() for g in group.generators],
            "transitive": len(orbits) == 1,
            "orbit_sizes": [len(o) for o in orbits],
        }
    )
    bad = None
    for p in range(group.degree):
        if len(act.orbit_of(p)) * len(act.stabilizer_indices(p)) != len(group):
            bad = p
            break
    cert.claim(
        "orbit-stabilizer",
        bad is None,
        f"|orbit| x |stabilizer| = {len(group)} at all {group.degree} points"
        if bad is None
        else {"point": bad + 1},
    )
    covered = sorted(p for orb in orbits for p in orb)
    disjoint = all(
        a == b or not set(a) & set(b) for a in orbits for b in orbits
    )
    cert.claim(
        "orbit-partition",
        covered == list(range(group.degree)) and disjoint,
        f"{len(orbits)} orbits tile the {group.degree} points",
    )
    again = enumerate_group(GroupSpec(group.degree, group.generators))
    same = len(again) == len(group) and all(
        x.images == y.images for x, y in zip(group.elements, again.elements)
    )
    cert.claim(
        "enumeration-determinism",
        same,
        "a second enumeration lists the same elements in the same order",
    )
    return None


def cmd_cosetgraph(args, cert: Certificate) -> Optional[str]:
    group = _load_group(cert, args.group)
    cert.add_input("subgroup", args.subgroup)
    sub = subgroup_from_generators(
        group, parse_subgroup_generators(args.subgroup, group.degree)
    )
    cert.add_input("involution", args.involution)
    a = Perm.from_cycles(args.involution, group.degree)
    res = symmetric_coset_graph(group, sub, a)
    g, r = res.graph, res.report
    cert.facts.update(
        {
            "vertices": g.n,
            "valency": res.valency,
            "arc_stabilizer_order": res.arc_stabilizer_order,
            "kernel_order": res.kernel_order,
            "connected": res.connected,
            "connector_class_size": len(res.connector_class),
            "group_order": len(group),
            "subgroup_order": sub.order,
            "vertex_transitive": r.vertex_transitive,
            "arc_transitive": r.arc_transitive,
            "locally_transitive": r.locally_transitive,
            "s_arc_transitive_up_to": r.s_arc_transitive_up_to,
            "symmetric": r.symmetric,
        }
    )
    expect = sub.order // res.arc_stabilizer_order
    bad = next((v for v in range(g.n) if len(g.adj[v]) != expect), None)
    cert.claim(
        "valency-law",
        bad is None,
        f"degree {expect} = {sub.order}/{res.arc_stabilizer_order} at every vertex"
        if bad is None
        else {"vertex": g.labels[bad], "degree": len(g.adj[bad])},
    )
    v_a = res.cosets.coset_of_element[group.index(a)]
    by_action = {
        i
        for i, row in enumerate(res.action.rows)
        if row[0] == 0 and row[v_a] == v_a
    }
    by_algebra = {
        group.index(y)
        for y in (a * x * a for x in sub.elements)
        if y in sub
    }
    cert.claim(
        "arc-stabilizer-law",
        by_action == by_algebra,
        f"both sides have {len(by_algebra)} elements"
        if by_action == by_algebra
        else {
            "action_only": sorted(
                group.element(i).cycle_string() for i in by_action - by_algebra
            ),
            "algebra_only": sorted(
                group.element(i).cycle_string() for i in by_algebra - by_action
            ),
        },
    )
    _write_group_out(args, res.action)
    return _graph_output(g, args.out)


def cmd_orbitals(args, cert: Certificate) -> Optional[str]:
    group = _load_group(cert, args.group)
    orbs = orbitals(group)
    cert.facts.update(
        {
            "rank": len(orbs),
            "orbitals": [
                {
                    "size": ob.size,
                    "diagonal": ob.diagonal,
                    "self_paired": ob.self_paired,
                    "representative": [ob.pairs[0][0] + 1, ob.pairs[0][1] + 1],
                }
                for ob in orbs
            ],
        }
    )
    act = Action.natural(group)
    stab_rows = [group.element(i).images for i in act.stabilizer_indices(0)]
    suborbits = _orbits_under_rows(stab_rows, group.degree)
    cert.claim(
        "rank-consistency",
        len(orbs) == len(suborbits),
        {"rank": len(orbs), "stabilizer_orbits": len(suborbits)},
    )
    sets = [set(ob.pairs) for ob in orbs]
    total = sum(len(s) for s in sets)
    disjoint = all(
        i == j or not sets[i] & sets[j]
        for i in range(len(sets))
        for j in range(len(sets))
    )
    cert.claim(
        "orbit-partition",
        total == group.degree ** 2 and disjoint,
        f"{len(orbs)} orbitals tile the {group.degree ** 2} ordered pairs",
    )
    return None


def cmd_quotient(args, cert: Certificate) -> Optional[str]:
    graph = _load_graph(cert, args.graph)
    group = _load_group(cert, args.group)
    blocks_text = _read_text(args.blocks)
    cert.add_input("blocks", blocks_text)
    partition = parse_blocks_file(blocks_text, graph.n)
    qc = certify_quotient(graph, group, partition)
    act = coerce_action(group, graph.n)
    qact = quotient_action(partition, act)
    p = qc.design_params
    cert.facts.update(
        {
            "base_vertices": graph.n,
            "blocks": partition.n_blocks,
            "quotient_vertices": qc.quotient.n,
            "quotient_valency": qc.quotient.valency(),
            "nontrivial": qc.nontrivial,
            "cover_class": qc.cover_class,
            "bipartite_uniform": qc.bipartite_uniform,
            "design": None
            if p is None
            else {"v": p.v, "k": p.k, "lam": p.lam, "b": p.b, "multiplicity": p.multiplicity},
            "symmetric": qc.report.symmetric,
        }
    )
    cert.claim(
        "quotient-symmetry",
        qc.report.symmetric,
        "the induced action is symmetric on the quotient",
    )
    bad = None
    for i, (row, qrow) in enumerate(zip(act.rows, qact.rows)):
        for v in range(graph.n):
            if partition.block_of[row[v]] != qrow[partition.block_of[v]]:
                bad = {"element_index": i, "vertex": graph.labels[v]}
                break
        if bad:
            break
    cert.claim(
        "quotient-homomorphism",
        bad is None,
        "block(v^g) = block(v)^g for every element and vertex" if bad is None else bad,
    )
    if p is not None:
        cert.claim(
            "design-double-count",
            p.v * p.lam == p.b * p.k,
            f"{p.v}x{p.lam} = {p.b}x{p.k} = {p.v * p.lam}",
        )
    if qc.cover_class == "cover":
        fibre = len(partition.blocks[0])
        ok = (
            graph.n == fibre * qc.quotient.n
            and graph.valency() == qc.quotient.valency()
        )
        cert.claim(
            "cover-arithmetic",
            ok,
            f"{graph.n} = {fibre} x {qc.quotient.n}, valency {graph.valency()} kept",
        )
    return _graph_output(qc.quotient, args.out)


def cmd_blocks(args, cert: Certificate) -> Optional[str]:
    group = _load_group(cert, args.group)
    systems = all_block_systems(group)
    cert.facts.update(
        {
            "count": len(systems),
            "systems": [
                [[p + 1 for p in blk] for blk in sys_.blocks] for sys_ in systems
            ],
        }
    )
    gen_rows = [g.images for g in group.generators]
    bad = None
    for si, system in enumerate(systems):
        blocks = {tuple(b) for b in system.blocks}
        for row in gen_rows:
            for blk in system.blocks:
                img = tuple(sorted(row[p] for p in blk))
                if img not in blocks:
                    bad = {"system": si, "block": [p + 1 for p in blk]}
                    break
    cert.claim(
        "block-closure",
        bad is None,
        "every generator permutes the blocks of every system" if bad is None else bad,
    )
    bad = None
    for si, system in enumerate(systems):
        for blk in system.blocks:
            stab = setwise_stabilizer(group, blk)
            reach = {blk[0]}
            queue = [blk[0]]
            while queue:
                x = queue.pop()
                for h in stab.elements:
                    y = h.images[x]
                    if y not in reach:
                        reach.add(y)
                        queue.append(y)
            if reach != set(blk):
                bad = {"system": si, "block": [p + 1 for p in blk]}
                break
        if bad:
            break
    cert.claim(
        "fiber-evaluation",
        bad is None,
        "each block's setwise stabilizer sweeps the block" if bad is None else bad,
    )
    return None


def cmd_lattice(args, cert: Certificate) -> Optional[str]:
    group = _load_group(cert, args.group)
    pairs = subgroup_block_lattice(group, args.base - 1)
    cert.facts.update(
        {
            "base_point": args.base,
            "count": len(pairs),
            "pairs": [
                {
                    "subgroup_order": p.subgroup.order,
                    "block": [x + 1 for x in p.block],
                }
                for p in pairs
            ],
        }
    )
    cert.claim(
        "lattice-isomorphism",
        lattice_is_order_isomorphic(pairs),
        "subgroup containment and block containment agree in both directions",
    )
    bad = None
    for p in pairs:
        try:
            system_from_block(group, p.block)
        except ValueError as exc:
            bad = {"block": [x + 1 for x in p.block], "reason": str(exc)}
            break
    cert.claim(
        "block-closure",
        bad is None,
        "every lattice block closes into a full system" if bad is None else bad,
    )
    return None


def cmd_design_from_graph(args, cert: Certificate) -> Optional[str]:
    graph = _load_graph(cert, args.graph)
    group = _load_group(cert, args.group)
    inc, pol = design_from_graph(graph, group)
    params = validate_design(inc)
    ft = is_flag_transitive(inc, group)
    cert.facts.update(
        {
            "v": params.v,
            "b": params.b,
            "k": params.k,
            "lam": params.lam,
            "multiplicity": params.multiplicity,
            "flag_transitive": ft,
        }
    )
    val = graph.valency()
    cert.claim(
        "graph-design-parameters",
        params.v == params.b and params.k == params.lam == val,
        f"v = b = {params.v}, k = lambda = {params.k} = valency",
    )
    cert.claim(
        "design-double-count",
        params.v * params.lam == params.b * params.k,
        f"{params.v}x{params.lam} = {params.b}x{params.k}",
    )
    if ft:
        act = Action.natural(group)
        pt = len(act.orbit_of(0)) == inc.n_points
        from .designs import block_rows

        rows = block_rows(inc, group)
        reach = {0}
        queue = [0]
        while queue:
            x = queue.pop()
            for i in group.generator_indices():
                y = rows[i][x]
                if y not in reach:
                    reach.add(y)
                    queue.append(y)
        bt = len(reach) == inc.n_blocks
        cert.claim(
            "flag-transitivity-propagates",
            pt and bt,
            {"point_transitive": pt, "block_transitive": bt},
        )
    rebuilt = graph_from_design(inc, group, pol)
    cert.claim(
        "design-round-trip",
        are_isomorphic(rebuilt, graph) is not None,
        "the polar graph of the neighbourhood design matches the input",
    )
    return format_design(inc) if args.out == "design" or args.out_file else None


def cmd_design_to_graph(args, cert: Certificate) -> Optional[str]:
    text = _read_text(args.design)
    cert.add_input("design", text)
    inc = parse_design_file(text)
    group = _load_group(cert, args.group)
    pols = find_polarities(inc, group)
    if not pols:
        raise NotPolarity("the design admits no equivariant polarity")
    if not 0 <= args.polarity_index < len(pols):
        raise ValueError(
            f"polarity index {args.polarity_index} outside 0..{len(pols) - 1}"
        )
    pol = pols[args.polarity_index]
    graph = graph_from_design(inc, group, pol)
    report = verify_action(graph, group)
    cert.facts.update(
        {
            "polarities": len(pols),
            "polarity_index": args.polarity_index,
            "vertices": graph.n,
            "valency": graph.valency(),
            "symmetric": report.symmetric,
        }
    )
    try:
        check_polarity(inc, group, pol)
        cert.claim(
            "polarity-commutation", True, "the chosen polarity commutes with the group"
        )
    except KitError as exc:
        cert.claim("polarity-commutation", False, str(exc))
    _claim_symmetric(cert, graph, coerce_action(group, graph.n), report)
    return _graph_output(graph, args.out)


def cmd_design_polarities(args, cert: Certificate) -> Optional[str]:
    text = _read_text(args.design)
    cert.add_input("design", text)
    inc = parse_design_file(text)
    group = _load_group(cert, args.group)
    pols = find_polarities(inc, group)
    cert.facts.update(
        {
            "count": len(pols),
            "polarities": [
                {
                    "points_to_blocks": [
                        inc.block_labels[b] for b in pol.point_map
                    ]
                }
                for pol in pols
            ],
        }
    )
    bad = None
    for i, pol in enumerate(pols):
        try:
            check_polarity(inc, group, pol)
        except KitError as exc:
            bad = {"polarity_index": i, "reason": str(exc)}
            break
    cert.claim(
        "polarity-commutation",
        bad is None,
        f"all {len(pols)} polarities commute with the group" if bad is None else bad,
    )
    return None


def cmd_design_validate(args, cert: Certificate) -> Optional[str]:
    text = _read_text(args.design)
    cert.add_input("design", text)
    inc = parse_design_file(text)
    params = validate_design(inc)
    cert.facts.update(
        {
            "v": params.v,
            "b": params.b,
            "k": params.k,
            "lam": params.lam,
            "multiplicity": params.multiplicity,
        }
    )
    cert.claim(
        "design-double-count",
        params.v * params.lam == params.b * params.k,
        f"{params.v}x{params.lam} = {params.b}x{params.k} = {len(inc.flags)} flags",
    )
    return None


def cmd_threearc(args, cert: Certificate) -> Optional[str]:
    graph = _load_graph(cert, args.graph)
    group = _load_group(cert, args.group)
    orbs = three_arc_orbits(graph, group)
    cert.facts.update(
        {
            "orbit_count": len(orbs),
            "orbits": [
                {
                    "size": ob.size,
                    "self_paired": ob.self_paired,
                    "representative": [graph.labels[x] for x in min(ob.arcs)],
                }
                for ob in orbs
            ],
        }
    )
    if args.orbit_index is None:
        from .graphs import enumerate_s_arcs

        total = sum(ob.size for ob in orbs)
        cert.claim(
            "orbit-partition",
            total == len(enumerate_s_arcs(graph, 3)),
            f"{len(orbs)} orbits tile the {total} three-arcs",
        )
        return None
    if not 0 <= args.orbit_index < len(orbs):
        raise ValueError(f"orbit index {args.orbit_index} outside 0..{len(orbs) - 1}")
    tag = three_arc_graph(graph, group, orbs[args.orbit_index])
    cert.facts.update(
        {
            "orbit_index": args.orbit_index,
            "vertices": tag.graph.n,
            "valency": tag.graph.valency(),
            "connected": is_connected(tag.graph),
            "reverse_adjacent": tag.reverse_adjacent,
        }
    )
    initial = [tag.vertices[blk[0]][0] for blk in tag.partition.blocks]
    collapsed = {
        (
            initial[tag.partition.block_of[u]],
            initial[tag.partition.block_of[v]],
        )
        for u, v in tag.graph.arcs
    }
    cert.claim(
        "three-arc-identification",
        tag.graph.n == graph.arc_count and collapsed == set(graph.arcs),
        f"{tag.graph.n} vertices = arcs of the base; initial-vertex collapse"
        " returns the base arcs",
    )
    _claim_symmetric(cert, tag.graph, tag.action, tag.report)
    labelling = check_condition_pe(tag.graph, tag.action, tag.partition)
    cert.facts["pe_labelling_found"] = labelling is not None
    if labelling is not None:
        cert.facts["three_arc_necessity"] = check_three_arc_necessity(
            tag.graph, tag.action, tag.partition, labelling
        )
    _write_group_out(args, tag.action)
    return _graph_output(tag.graph, args.out)


def cmd_biggs(args, cert: Certificate) -> Optional[str]:
    graph = _load_graph(cert, args.graph)
    group = _load_group(cert, args.group)
    n_part = _load_group(cert, args.n, name="n")
    twist_text = _read_text(args.twist)
    cert.add_input("twist", twist_text)
    twist = parse_twist_file(twist_text, n_part, group)
    sd = semidirect_product(n_part, group, twist)
    chain_text = _read_text(args.chain)
    cert.add_input("chain", chain_text)
    seeds = parse_chain_seeds(chain_text, graph, n_part)
    chain = chain_from_seeds(graph, group, sd, seeds)
    bc = biggs_cover(graph, group, sd, chain)
    cover = bc.cover
    cert.facts.update(
        {
            "base_vertices": graph.n,
            "cover_vertices": cover.n,
            "fibres": bc.fibres.n_blocks,
            "semidirect_order": len(sd),
            "valency": cover.valency(),
            "connected": is_connected(cover),
            "cover_class": bc.certificate.cover_class,
        }
    )
    rows = bc.action.rows
    m = len(sd)
    if m <= 48:
        sample = [(x, y) for x in range(m) for y in range(m)]
    else:
        rnd = random.Random(2025)
        sample = [(rnd.randrange(m), rnd.randrange(m)) for _ in range(512)]
    bad = None
    for x, y in sample:
        rx, ry, rxy = rows[x], rows[y], rows[sd.product_index(x, y)]
        if any(ry[rx[v]] != rxy[v] for v in range(cover.n)):
            bad = {"x": sd.element_label(x), "y": sd.element_label(y)}
            break
    cert.claim(
        "biggs-action-law",
        bad is None,
        f"(v^x)^y = v^(xy) over {len(sample)} element pairs" if bad is None else bad,
    )
    cert.claim(
        "biggs-valency-preservation",
        cover.valency() == graph.valency(),
        f"valency {graph.valency()} preserved",
    )
    bad = None
    quo = bc.certificate.quotient
    for b, c in sorted(quo.arcs):
        if b > c:
            continue
        pattern = induced_bipartite(cover, bc.fibres, b, c)
        if pattern.valency() != 1 or pattern.n != 2 * len(bc.fibres.blocks[b]):
            bad = {"fibres": [b + 1, c + 1]}
            break
    cert.claim(
        "biggs-fiber-matching",
        bad is None,
        "every adjacent fibre pair meets in a perfect matching" if bad is None else bad,
    )
    report = validate_nchain(graph, group, sd, chain)
    rep_seeds = {
        arc: value
        for arc, value in zip(report.orbit_representatives, report.representative_values)
    }
    again = chain_from_seeds(graph, group, sd, rep_seeds)
    cert.claim(
        "chain-determinacy",
        again.assignment == chain.assignment,
        f"{len(rep_seeds)} orbit seeds rebuild all {len(chain.assignment)} arc values",
    )
    fibre = len(bc.fibres.blocks[0])
    cert.claim(
        "cover-arithmetic",
        cover.n == fibre * quo.n and cover.valency() == quo.valency(),
        f"{cover.n} = {fibre} x {quo.n}, valency {quo.valency()} kept",
    )
    _claim_symmetric(cert, cover, bc.action, bc.report)
    _write_group_out(args, bc.action)
    return _graph_output(cover, args.out)


def _parse_directed_subgraph(spec: str, graph: Graph):
    from .graphs import DirectedSubgraph

    arcs = []
    for token in spec.split(","):
        token = token.strip()
        if not token:
            continue
        head, sep, tail = token.partition(">")
        if not sep:
            raise ValueError(f"expected 'u>v' arcs, got {token!r}")
        try:
            u, v = int(head), int(tail)
        except ValueError:
            raise ValueError(f"expected numbers in {token!r}") from None
        if not (1 <= u <= graph.n and 1 <= v <= graph.n):
            raise ValueError(f"arc {token!r} outside 1..{graph.n}")
        arcs.append((u - 1, v - 1))
    if not arcs:
        raise ValueError("the subgraph needs at least one arc")
    vertices = sorted({x for arc in arcs for x in arc})
    return DirectedSubgraph.make(vertices, arcs)


def cmd_subgraph_graph(args, cert: Certificate) -> Optional[str]:
    graph = _load_graph(cert, args.graph)
    group = _load_group(cert, args.group)
    cert.add_input("subgraph", args.subgraph)
    sub = _parse_directed_subgraph(args.subgraph, graph)
    cert.add_input("involution", args.involution)
    a = Perm.from_cycles(args.involution, group.degree)
    from .constructions import subgraph_graph

    res = subgraph_graph(graph, group, sub, a)
    cert.facts.update(
        {
            "vertices": res.graph.n,
            "valency": res.graph.valency(),
            "connected": is_connected(res.graph),
            "stabilizer_order": res.stabilizer_order,
            "dropped_loops": res.dropped_loops,
            "orbit_size": len(res.subgraphs),
        }
    )
    cert.claim(
        "orbit-stabilizer",
        len(res.subgraphs) * res.stabilizer_order == len(group),
        f"{len(res.subgraphs)} x {res.stabilizer_order} = {len(group)}",
    )
    cert.claim(
        "subgraph-graph-transitivity",
        res.report.vertex_transitive
        and (res.report.arc_transitive or not res.graph.arcs),
        {
            "vertex_transitive": res.report.vertex_transitive,
            "arc_transitive": res.report.arc_transitive,
        },
    )
    _write_group_out(args, res.action)
    return _graph_output(res.graph, args.out)


def cmd_extend(args, cert: Certificate) -> Optional[str]:
    if args.via == "arcs":
        return _extend_arcs(args, cert)
    return _extend_flags(args, cert)


def _require_flags(args, names) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise ValueError(
            f"extend --via {args.via} needs {', '.join(missing)}"
        )


def _extend_arcs(args, cert: Certificate) -> Optional[str]:
    _require_flags(args, ("subgroup", "over", "involution"))
    group = _load_group(cert, args.group)
    cert.add_input("subgroup", args.subgroup)
    sub = subgroup_from_generators(
        group, parse_subgroup_generators(args.subgroup, group.degree)
    )
    cert.add_input("over", args.over)
    over = subgroup_from_generators(
        group, parse_subgroup_generators(args.over, group.degree)
    )
    cert.add_input("involution", args.involution)
    a = Perm.from_cycles(args.involution, group.degree)
    ext = arc_partition_extension(group, sub, over, a)
    base = ext.base.graph
    cert.facts.update(
        {
            "r": ext.r,
            "base_vertices": base.n,
            "extension_vertices": ext.extension.n,
            "base_valency": base.valency(),
            "extension_valency": ext.extension.valency(),
            "block_valency": ext.block_valency,
            "edges": ext.extension.edge_count,
            "exact_model": ext.exact,
        }
    )
    counting = (
        ext.extension.n == ext.r * base.n
        and base.valency() == ext.r * ext.extension.valency()
        and ext.extension.edge_count == base.edge_count
    )
    cert.claim(
        "extension-counting",
        counting,
        f"{ext.extension.n} = {ext.r} x {base.n}; "
        f"{base.valency()} = {ext.r} x {ext.extension.valency()}; "
        f"{ext.extension.edge_count} edges on both levels",
    )
    collapsed = {
        (ext.head_map[u], ext.head_map[v]) for u, v in ext.extension.arcs
    }
    cert.claim(
        "quotient-homomorphism",
        collapsed == set(base.arcs),
        "collapsing bundle heads carries extension arcs onto the base arcs",
    )
    _claim_symmetric(cert, ext.model.graph, ext.model.action, ext.model.report)
    _write_group_out(args, ext.model.action)
    return _graph_output(ext.extension, args.out)


def _extend_flags(args, cert: Certificate) -> Optional[str]:
    _require_flags(args, ("graph", "blocks"))
    graph = _load_graph(cert, args.graph)
    group = _load_group(cert, args.group)
    blocks_text = _read_text(args.blocks)
    cert.add_input("blocks", blocks_text)
    partition = parse_blocks_file(blocks_text, graph.n)
    fx = extract_fibre_data(graph, group, partition)
    rb = flag_orbital_reconstruction(
        fx.quotient, fx.quotient_action, fx.design, fx.point_rows, fx.delta, fx.eta
    )
    cert.facts.update(
        {
            "quotient_vertices": fx.quotient.n,
            "fibre_points": fx.design.n_points,
            "design_blocks": fx.design.n_blocks,
            "flag_orbital_size": len(fx.delta),
            "rebuilt_vertices": rb.graph.n,
            "normal_subgroup_order": len(fx.n_indices),
            "stabilizer_order": len(fx.h_indices),
        }
    )
    qn = fx.quotient.n
    remap = [code[0] * qn + code[1] for code in fx.vertex_code]
    exact = (
        sorted(remap) == list(range(rb.graph.n))
        and {(remap[u], remap[v]) for u, v in graph.arcs} == set(rb.graph.arcs)
    )
    cert.claim(
        "design-round-trip",
        exact,
        "fibre coordinates carry the cover arcs exactly onto the rebuilt arcs",
    )
    # N is regular on the quotient vertices, so one orbit means regularity held
    n_rows = [fx.quotient_action.rows[i] for i in fx.n_indices]
    sweep = _orbits_under_rows(n_rows, qn)
    cert.claim(
        "fiber-transitivity",
        len(sweep) == 1,
        f"the normal subgroup is transitive on all {qn} quotient vertices",
    )
    _claim_symmetric(cert, rb.graph, rb.action, rb.report)
    _write_group_out(args, rb.action)
    return _graph_output(rb.graph, args.out)


def cmd_verify(args, cert: Certificate) -> Optional[str]:
    graph = _load_graph(cert, args.graph)
    group = _load_group(cert, args.group)
    act = coerce_action(group, graph.n)
    report = verify_action(graph, act)
    cert.facts.update(
        {
            "vertices": graph.n,
            "edges": graph.edge_count,
            "valency": graph.valency(),
            "connected": is_connected(graph),
            "acts_as_automorphisms": report.acts_as_automorphisms,
            "vertex_transitive": report.vertex_transitive,
            "arc_transitive": report.arc_transitive,
            "locally_transitive": report.locally_transitive,
            "s_arc_transitive_up_to": report.s_arc_transitive_up_to,
            "kernel_order": report.action_kernel_size,
            "symmetric": report.symmetric,
        }
    )
    _claim_symmetric(cert, graph, act, report)
    isolated = any(not graph.adj[v] for v in range(graph.n))
    if not isolated:
        cert.claim(
            "symmetric-iff-arc-transitive",
            report.symmetric == report.arc_transitive,
            {
                "symmetric": report.symmetric,
                "arc_transitive": report.arc_transitive,
            },
        )
    return None


# ---- wiring ------------------------------------------------------------------


def _add_cert(p) -> None:
    p.add_argument("--certificate", metavar="FILE", help="write the certificate here")


def _add_graph_out(p) -> None:
    p.add_argument(
        "--out",
        choices=("edges", "dot"),
        help="print the constructed graph in this format",
    )
    p.add_argument("--out-file", metavar="FILE", help="write the graph there instead")
    p.add_argument(
        "--group-out",
        metavar="FILE",
        help="write the induced acting group as a group file",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgk",
        description="construct and certify symmetric graphs from permutation group data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", help="enumerate a group and certify its orbit arithmetic")
    p.add_argument("--group", required=True, metavar="FILE")
    _add_cert(p)
    p.set_defaults(handler=cmd_group, primary_claim="orbit-stabilizer")

    p = sub.add_parser("cosetgraph", help="build the coset graph of a subgroup and an involution")
    p.add_argument("--group", required=True, metavar="FILE")
    p.add_argument("--subgroup", required=True, metavar="GENS")
    p.add_argument("--involution", required=True, metavar="PERM")
    _add_graph_out(p)
    _add_cert(p)
    p.set_defaults(handler=cmd_cosetgraph, primary_claim="valency-law")

    p = sub.add_parser("orbitals", help="orbits on ordered pairs with rank checks")
    p.add_argument("--group", required=True, metavar="FILE")
    _add_cert(p)
    p.set_defaults(handler=cmd_orbitals, primary_claim="rank-consistency")

    p = sub.add_parser("quotient", help="quotient a graph by an invariant partition")
    p.add_argument("--graph", required=True, metavar="FILE")
    p.add_argument("--group", required=True, metavar="FILE")
    p.add_argument("--blocks", required=True, metavar="FILE")
    p.add_argument(
        "--out", choices=("edges", "dot"), help="print the quotient in this format"
    )
    p.add_argument("--out-file", metavar="FILE")
    _add_cert(p)
    p.set_defaults(handler=cmd_quotient, primary_claim="quotient-symmetry")

    p = sub.add_parser("blocks", help="every invariant partition of a transitive group")
    p.add_argument("--group", required=True, metavar="FILE")
    _add_cert(p)
    p.set_defaults(handler=cmd_blocks, primary_claim="block-closure")

    p = sub.add_parser("lattice", help="subgroups above a point stabilizer with their blocks")
    p.add_argument("--group", required=True, metavar="FILE")
    p.add_argument("--base", type=int, default=1, metavar="POINT")
    _add_cert(p)
    p.set_defaults(handler=cmd_lattice, primary_claim="lattice-isomorphism")

    p = sub.add_parser("design", help="designs from graphs and back")
    dsub = p.add_subparsers(dest="mode", required=True)

    q = dsub.add_parser("from-graph", help="the neighbourhood design of a symmetric graph")
    q.add_argument("--graph", required=True, metavar="FILE")
    q.add_argument("--group", required=True, metavar="FILE")
    q.add_argument("--out", choices=("design",), help="print the design")
    q.add_argument("--out-file", metavar="FILE")
    _add_cert(q)
    q.set_defaults(handler=cmd_design_from_graph, primary_claim="graph-design-parameters")

    q = dsub.add_parser("to-graph", help="the graph of a design under a polarity")
    q.add_argument("--design", required=True, metavar="FILE")
    q.add_argument("--group", required=True, metavar="FILE")
    q.add_argument("--polarity-index", type=int, default=0, metavar="K")
    q.add_argument("--out", choices=("edges", "dot"))
    q.add_argument("--out-file", metavar="FILE")
    _add_cert(q)
    q.set_defaults(handler=cmd_design_to_graph, primary_claim="polarity-commutation")

    q = dsub.add_parser("polarities", help="all equivariant polarities of a design")
    q.add_argument("--design", required=True, metavar="FILE")
    q.add_argument("--group", required=True, metavar="FILE")
    _add_cert(q)
    q.set_defaults(handler=cmd_design_polarities, primary_claim="polarity-commutation")

    q = dsub.add_parser("validate", help="1-design parameters of a design file")
    q.add_argument("--design", required=True, metavar="FILE")
    _add_cert(q)
    q.set_defaults(handler=cmd_design_validate, primary_claim="design-double-count")

    p = sub.add_parser("threearc", help="three-arc orbits and their graphs")
    p.add_argument("--graph", required=True, metavar="FILE")
    p.add_argument("--group", required=True, metavar="FILE")
    p.add_argument("--orbit-index", type=int, metavar="K")
    _add_graph_out(p)
    _add_cert(p)
    p.set_defaults(handler=cmd_threearc, primary_claim="three-arc-identification")

    p = sub.add_parser("biggs", help="cover a graph by a chain over a semidirect product")
    p.add_argument("--graph", required=True, metavar="FILE")
    p.add_argument("--group", required=True, metavar="FILE")
    p.add_argument("--n", required=True, metavar="FILE", help="the covering group N")
    p.add_argument("--twist", required=True, metavar="FILE")
    p.add_argument("--chain", required=True, metavar="FILE")
    _add_graph_out(p)
    _add_cert(p)
    p.set_defaults(handler=cmd_biggs, primary_claim="biggs-action-law")

    p = sub.add_parser("subgraph-graph", help="the graph on images of a directed subgraph")
    p.add_argument("--graph", required=True, metavar="FILE")
    p.add_argument("--group", required=True, metavar="FILE")
    p.add_argument("--subgraph", required=True, metavar="ARCS", help="e.g. '3>4,4>1,1>3'")
    p.add_argument("--involution", required=True, metavar="PERM")
    _add_graph_out(p)
    _add_cert(p)
    p.set_defaults(handler=cmd_subgraph_graph, primary_claim="subgraph-graph-transitivity")

    p = sub.add_parser("extend", help="extend a symmetric graph over a finer coset space")
    p.add_argument("--via", choices=("arcs", "flags"), required=True)
    p.add_argument("--group", required=True, metavar="FILE")
    p.add_argument("--subgroup", metavar="GENS")
    p.add_argument("--over", metavar="GENS", help="the finer subgroup K")
    p.add_argument("--involution", metavar="PERM")
    p.add_argument("--graph", metavar="FILE")
    p.add_argument("--blocks", metavar="FILE")
    _add_graph_out(p)
    _add_cert(p)
    p.set_defaults(handler=cmd_extend, primary_claim="extension-counting")

    p = sub.add_parser("verify", help="measure how transitively a group treats a graph")
    p.add_argument("--graph", required=True, metavar="FILE")
    p.add_argument("--group", required=True, metavar="FILE")
    _add_cert(p)
    p.set_defaults(handler=cmd_verify, primary_claim="symmetric-action")

    return parser


def _emit(args, cert: Certificate, output: Optional[str]) -> None:
    if output is not None:
        out_file = getattr(args, "out_file", None)
        if out_file:
            Path(out_file).write_text(output)
        else:
            sys.stdout.write(output)
    text = cert.render()
    cert_path = getattr(args, "certificate", None)
    if cert_path:
        Path(cert_path).write_text(text)
    elif output is None:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    name = args.command
    if getattr(args, "mode", None):
        name = f"{name}-{args.mode}"
    elif getattr(args, "via", None):
        name = f"{name}-{args.via}"
    cert = Certificate(name)
    try:
        output = args.handler(args, cert)
    except KitError as exc:
        print(f"sgk: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"sgk: invalid-input: {exc}", file=sys.stderr)
        return 1
    except KeyError as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"sgk: invalid-input: {msg}", file=sys.stderr)
        return 1
    except RuntimeError as exc:
        # a construction tripped one of its own postconditions
        cert.claim(args.primary_claim, False, str(exc))
        _emit(args, cert, None)
        return 2
    _emit(args, cert, output)
    return 0 if cert.ok else 2


if __name__ == "__main__":
    sys.exit(main())
