"""Semidirect products, covers, three-arc graphs, subgraph graphs, and the
two extension routes."""

import pytest

from sgk.constructions import (
    arc_partition_extension,
    biggs_cover,
    chain_from_seeds,
    check_condition_pe,
    check_three_arc_necessity,
    constant_chain,
    extract_fibre_data,
    flag_orbital_reconstruction,
    semidirect_product,
    subgraph_graph,
    three_arc_graph,
    three_arc_orbits,
    trivial_twist,
    validate_nchain,
)
from sgk.errors import (
    DegenerateInvolution,
    NoStrictChain,
    NotCompatible,
    NotInvolution,
    NotSemidirect,
    TwistNotHomomorphism,
)
from sgk.graphs import (
    DirectedSubgraph,
    are_isomorphic,
    complete_graph,
    connected_components,
    cycle_graph,
)
from sgk.perm import Perm, group_from_generators
from sgk.quotients import certify_quotient, induced_bipartite
from sgk.subgroups import (
    BlockSystem,
    setwise_stabilizer,
    stabilizer_subgroup,
    subgroup_from_generators,
)


def _z3():
    return group_from_generators([Perm.from_cycles("(1 2 3)", 3)], degree=3)


def _z5():
    return group_from_generators([Perm.from_cycles("(1 2 3 4 5)", 5)], degree=5)


# ---- semidirect products -----------------------------------------------------


def test_semidirect_trivial_twist_orders(z2, s4):
    sd = semidirect_product(z2, s4, trivial_twist(z2, s4))
    assert len(sd) == 48
    assert sd.element_label(0) == "(id, id)"


def test_semidirect_inverting_twist_is_s3(z2):
    z3 = _z3()
    inv = [[z3.generators[0].inverse()]]
    sd = semidirect_product(z3, z2, inv)
    assert len(sd) == 6
    # element orders 1, 2, 3 with multiplicities of the symmetric group
    shape = {}
    for i in range(6):
        k, j = 1, i
        while j != 0:
            j = sd.product_index(j, i)
            k += 1
        shape[k] = shape.get(k, 0) + 1
    assert shape == {1: 1, 2: 3, 3: 2}


def test_semidirect_product_law_associative(z2, s4):
    sd = semidirect_product(z2, s4, trivial_twist(z2, s4))
    import random

    rnd = random.Random(17)
    for _ in range(60):
        x, y, z = (rnd.randrange(len(sd)) for _ in range(3))
        assert sd.product_index(sd.product_index(x, y), z) == sd.product_index(
            x, sd.product_index(y, z)
        )


def test_semidirect_twist_must_be_bijection(z2):
    with pytest.raises(TwistNotHomomorphism) as err:
        semidirect_product(z2, z2, [[Perm.identity(2)]])
    assert "bijection" in str(err.value)


def test_semidirect_twist_must_extend(z2):
    z5 = _z5()
    squared = [[z5.generators[0] * z5.generators[0]]]
    with pytest.raises(TwistNotHomomorphism) as err:
        semidirect_product(z5, z2, squared)
    assert "homomorphism" in str(err.value)


# ---- chains ------------------------------------------------------------------


def test_constant_chain_validates(k4, s4, z2):
    sd = semidirect_product(z2, s4, trivial_twist(z2, s4))
    chain = constant_chain(k4, 1)
    report = validate_nchain(k4, s4, sd, chain)
    assert report.arc_orbit_count == 1
    assert report.orbit_representatives == ((0, 1),)
    assert report.representative_values == (1,)


def test_mixed_chain_rejected(k4, s4, z2):
    sd = semidirect_product(z2, s4, trivial_twist(z2, s4))
    from sgk.constructions import NChain

    values = {arc: (1 if arc == (0, 1) or arc == (1, 0) else 0) for arc in k4.arcs}
    with pytest.raises(NotCompatible):
        validate_nchain(k4, s4, sd, NChain.from_map(values))


def test_chain_from_seeds_propagates(k4, s4, z2):
    sd = semidirect_product(z2, s4, trivial_twist(z2, s4))
    chain = chain_from_seeds(k4, s4, sd, {(0, 1): 1})
    assert chain.assignment == constant_chain(k4, 1).assignment


# ---- Biggs covers ------------------------------------------------------------


def test_biggs_cover_of_k4_is_cube(k4, s4, z2, q3):
    sd = semidirect_product(z2, s4, trivial_twist(z2, s4))
    bc = biggs_cover(k4, s4, sd, constant_chain(k4, 1))
    assert bc.cover.n == 8
    assert bc.cover.valency() == 3
    assert are_isomorphic(bc.cover, q3) is not None
    assert bc.report.symmetric
    assert bc.certificate.cover_class == "cover"
    assert are_isomorphic(bc.certificate.quotient, k4) is not None
    p = bc.certificate.design_params
    assert (p.v, p.b, p.k, p.lam, p.multiplicity) == (2, 3, 2, 3, 3)


def test_biggs_fibre_matchings(k4, s4, z2):
    sd = semidirect_product(z2, s4, trivial_twist(z2, s4))
    bc = biggs_cover(k4, s4, sd, constant_chain(k4, 1))
    quo = bc.certificate.quotient
    for b, c in sorted(quo.arcs):
        if b < c:
            pattern = induced_bipartite(bc.cover, bc.fibres, b, c)
            assert pattern.valency() == 1
            assert pattern.n == 4


def test_biggs_identity_chain_splits(k4, s4, z2):
    sd = semidirect_product(z2, s4, trivial_twist(z2, s4))
    bc = biggs_cover(k4, s4, sd, constant_chain(k4, 0))
    comps = connected_components(bc.cover)
    assert sorted(len(c) for c in comps) == [4, 4]
    for comp in comps:
        piece, _ = bc.cover.induced_subgraph(comp)
        assert are_isomorphic(piece, complete_graph(4)) is not None


def test_biggs_c6_cover_splits_into_hexagons(c6, d6, z2):
    sd = semidirect_product(z2, d6, trivial_twist(z2, d6))
    bc = biggs_cover(c6, d6, sd, constant_chain(c6, 1))
    assert bc.cover.n == 12
    assert bc.cover.valency() == 2
    comps = connected_components(bc.cover)
    assert sorted(len(c) for c in comps) == [6, 6]


def test_biggs_action_is_homomorphism(k4, s4, z2):
    sd = semidirect_product(z2, s4, trivial_twist(z2, s4))
    bc = biggs_cover(k4, s4, sd, constant_chain(k4, 1))
    rows = bc.action.rows
    for x in range(len(sd)):
        for y in range(len(sd)):
            z = sd.product_index(x, y)
            for v in range(bc.cover.n):
                assert rows[y][rows[x][v]] == rows[z][v]


# ---- three-arc graphs ----------------------------------------------------------


def test_three_arc_orbits_k4(k4, s4):
    orbs = three_arc_orbits(k4, s4)
    assert len(orbs) == 2
    assert [ob.size for ob in orbs] == [24, 24]
    assert all(ob.self_paired for ob in orbs)
    reps = sorted(min(ob.arcs) for ob in orbs)
    # one orbit closes a triangle, the other walks a path
    assert reps[0][0] == reps[0][3]
    assert reps[1][0] != reps[1][3]


def test_three_arc_graph_triangle_orbit(k4, s4):
    orbs = three_arc_orbits(k4, s4)
    closed = [ob for ob in orbs if min(ob.arcs)[0] == min(ob.arcs)[3]][0]
    t = three_arc_graph(k4, s4, closed)
    assert t.graph.n == 12
    assert t.graph.valency() == 2
    assert t.report.symmetric
    comps = connected_components(t.graph)
    assert sorted(len(c) for c in comps) == [3, 3, 3, 3]


def test_three_arc_graph_path_orbit(k4, s4):
    orbs = three_arc_orbits(k4, s4)
    open_walk = [ob for ob in orbs if min(ob.arcs)[0] != min(ob.arcs)[3]][0]
    t = three_arc_graph(k4, s4, open_walk)
    assert t.graph.n == 12
    assert t.graph.valency() == 2
    comps = connected_components(t.graph)
    assert sorted(len(c) for c in comps) == [4, 4, 4]


def test_three_arc_partition_collapses_to_base(k4, s4):
    for ob in three_arc_orbits(k4, s4):
        t = three_arc_graph(k4, s4, ob)
        assert t.partition.n_blocks == k4.n
        collapsed = set()
        for u, v in t.graph.arcs:
            collapsed.add(
                (t.vertices[u][0], t.vertices[v][0])
            )
        assert collapsed == set(k4.arcs)


def test_three_arc_c6(c6, d6):
    orbs = three_arc_orbits(c6, d6)
    assert len(orbs) == 1
    assert orbs[0].size == 12
    t = three_arc_graph(c6, d6, orbs[0])
    assert t.graph.n == 12
    assert t.graph.valency() == 1


def test_three_arc_orbits_empty_when_too_short():
    single = complete_graph(2)
    z2_on_2 = group_from_generators([Perm.from_cycles("(1 2)", 2)], degree=2)
    assert three_arc_orbits(single, z2_on_2) == []


def test_condition_pe_on_k4_tags(k4, s4):
    for ob in three_arc_orbits(k4, s4):
        t = three_arc_graph(k4, s4, ob)
        labelling = check_condition_pe(t.graph, t.action, t.partition)
        assert labelling is not None
        assert labelling == tuple(v for (_, v) in t.vertices)
        assert check_three_arc_necessity(t.graph, t.action, t.partition, labelling)


def test_condition_pe_rejects_covers(q3, k4, s4, z2, d6, c6):
    sd = semidirect_product(z2, s4, trivial_twist(z2, s4))
    bc = biggs_cover(k4, s4, sd, constant_chain(k4, 1))
    assert check_condition_pe(bc.cover, bc.action, bc.fibres) is None


def test_necessity_counterexample():
    c4 = cycle_graph(4)
    d4g = group_from_generators(
        [Perm.from_cycles("(1 2 3 4)", 4), Perm.from_cycles("(2 4)", 4)], degree=4
    )
    part = BlockSystem.from_blocks(4, [[0, 2], [1, 3]])
    labelling = (1, 0, 1, 0)
    assert not check_three_arc_necessity(c4, d4g, part, labelling)


# ---- subgraph graphs -----------------------------------------------------------


def test_subgraph_graph_cube(k4, s4, q3):
    tri = DirectedSubgraph.make([0, 2, 3], [(2, 3), (3, 0), (0, 2)])
    res = subgraph_graph(k4, s4, tri, Perm.from_cycles("(1 2)", 4))
    assert res.graph.n == 8
    assert res.graph.valency() == 3
    assert res.stabilizer_order == 3
    assert not res.dropped_loops
    assert are_isomorphic(res.graph, q3) is not None
    assert res.report.vertex_transitive and res.report.arc_transitive


def test_subgraph_graph_directed_triangle_variant(k4, s4):
    tri = DirectedSubgraph.make([0, 1, 2], [(0, 1), (1, 2), (2, 0)])
    res = subgraph_graph(k4, s4, tri, Perm.from_cycles("(1 2)", 4))
    assert res.graph.n == 8
    assert res.graph.valency() == 1
    comps = connected_components(res.graph)
    assert sorted(len(c) for c in comps) == [2, 2, 2, 2]


def test_subgraph_graph_single_arc(k4, s4):
    arc = DirectedSubgraph.make([0, 1], [(0, 1)])
    res = subgraph_graph(k4, s4, arc, Perm.from_cycles("(1 2)", 4))
    assert res.graph.n == 12
    assert res.graph.valency() == 1


def test_subgraph_graph_orbit_times_stabilizer(k4, s4):
    tri = DirectedSubgraph.make([0, 2, 3], [(2, 3), (3, 0), (0, 2)])
    res = subgraph_graph(k4, s4, tri, Perm.from_cycles("(1 2)", 4))
    assert len(res.subgraphs) * res.stabilizer_order == len(s4)


def test_subgraph_graph_needs_involution(k4, s4):
    tri = DirectedSubgraph.make([0, 2, 3], [(2, 3), (3, 0), (0, 2)])
    with pytest.raises(NotInvolution):
        subgraph_graph(k4, s4, tri, Perm.from_cycles("(1 2 3)", 4))


# ---- arc partition extensions --------------------------------------------------


def _octahedron_setup(oct_aut):
    h = stabilizer_subgroup(oct_aut, 0)
    k = subgroup_from_generators(
        oct_aut, (Perm.from_cycles("(3 6)", 6), Perm.from_cycles("(2 5)", 6))
    )
    a = Perm.from_cycles("(1 2)(4 5)", 6)
    return h, k, a


def test_arc_extension_octahedron(oct_aut):
    h, k, a = _octahedron_setup(oct_aut)
    ext = arc_partition_extension(oct_aut, h, k, a)
    assert ext.r == 2
    assert ext.extension.n == 12
    assert ext.extension.valency() == 2
    assert ext.base.graph.n == 6
    assert ext.base.valency == 4
    assert ext.extension.edge_count == ext.base.graph.edge_count
    assert ext.exact
    comps = connected_components(ext.extension)
    assert sorted(len(c) for c in comps) == [4, 4, 4]


def test_arc_extension_head_collapse(oct_aut):
    h, k, a = _octahedron_setup(oct_aut)
    ext = arc_partition_extension(oct_aut, h, k, a)
    collapsed = {(ext.head_map[u], ext.head_map[v]) for u, v in ext.extension.arcs}
    assert collapsed == set(ext.base.graph.arcs)


def test_arc_extension_degenerate_involution(oct_aut):
    h, k, _ = _octahedron_setup(oct_aut)
    with pytest.raises(DegenerateInvolution):
        arc_partition_extension(oct_aut, h, k, Perm.from_cycles("(3 6)", 6))


def test_arc_extension_needs_strict_chain(s4):
    h = stabilizer_subgroup(s4, 0)
    k = subgroup_from_generators(s4, (Perm.from_cycles("(3 4)", 4),))
    with pytest.raises(NoStrictChain):
        arc_partition_extension(s4, h, k, Perm.from_cycles("(1 2)", 4))


# ---- fibre extraction and reconstruction ---------------------------------------


def test_extract_and_reconstruct_biggs_cover(k4, s4, z2):
    sd = semidirect_product(z2, s4, trivial_twist(z2, s4))
    bc = biggs_cover(k4, s4, sd, constant_chain(k4, 1))
    fx = extract_fibre_data(bc.cover, bc.action, bc.fibres)
    assert len(fx.n_indices) == 4
    assert len(fx.h_indices) == 12
    assert len(fx.delta) == 6
    assert fx.design.n_points == 2
    assert fx.design.n_blocks == 3
    assert len(fx.design.flags) == 6
    rb = flag_orbital_reconstruction(
        fx.quotient, fx.quotient_action, fx.design, fx.point_rows, fx.delta, fx.eta
    )
    assert rb.graph.n == bc.cover.n
    remap = [code[0] * fx.quotient.n + code[1] for code in fx.vertex_code]
    assert sorted(remap) == list(range(bc.cover.n))
    assert {(remap[u], remap[v]) for u, v in bc.cover.arcs} == set(rb.graph.arcs)
    assert rb.report.symmetric


def test_extract_trivial_fibres_k4(k4, s4):
    singles = BlockSystem.from_blocks(4, [[v] for v in range(4)])
    fx = extract_fibre_data(k4, s4, singles)
    rb = flag_orbital_reconstruction(
        fx.quotient, fx.quotient_action, fx.design, fx.point_rows, fx.delta, fx.eta
    )
    assert are_isomorphic(rb.graph, k4) is not None


def test_extract_needs_regular_normal_subgroup():
    c4 = cycle_graph(4)
    d4g = group_from_generators(
        [Perm.from_cycles("(1 2 3 4)", 4), Perm.from_cycles("(2 4)", 4)], degree=4
    )
    part = BlockSystem.from_blocks(4, [[0, 2], [1, 3]])
    with pytest.raises(NotSemidirect):
        extract_fibre_data(c4, d4g, part)
