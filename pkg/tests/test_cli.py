"""The command line front end: exit codes, certificates, determinism."""

import json
import re

import pytest

from conftest import FIXDIR
from sgk.cli import CLAIM_INVARIANTS, main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def cert_from(out):
    doc = json.loads(out)
    assert set(doc) == {"claims", "construction", "facts", "inputs", "ok", "timing_ms"}
    for claim in doc["claims"]:
        assert claim["id"] in CLAIM_INVARIANTS
        assert ("witness" in claim) == claim["pass"]
        assert ("counterexample" in claim) == (not claim["pass"])
    return doc


GRP = str(FIXDIR / "s4.grp")
GRAPH = str(FIXDIR / "k4.graph")


def test_group_certificate(capsys):
    code, out, err = run(capsys, "group", "--group", GRP)
    assert code == 0
    doc = cert_from(out)
    assert doc["facts"]["order"] == 24
    assert doc["facts"]["transitive"]
    assert doc["ok"]


def test_cosetgraph_dot_golden(capsys):
    code, out, err = run(
        capsys,
        "cosetgraph",
        "--group", GRP,
        "--subgroup", "(2 3),(3 4)",
        "--involution", "(1 2)",
        "--out", "dot",
    )
    assert code == 0
    assert out.startswith("graph {")
    assert out.count("--") == 6
    assert out.count("[label=") == 4


def test_cosetgraph_certificate_fields(capsys, tmp_path):
    cert_path = tmp_path / "c.json"
    code, out, err = run(
        capsys,
        "cosetgraph",
        "--group", GRP,
        "--subgroup", "(2 3),(3 4)",
        "--involution", "(1 2)",
        "--certificate", str(cert_path),
    )
    assert code == 0
    doc = cert_from(cert_path.read_text())
    f = doc["facts"]
    assert f["valency"] == 3
    assert f["arc_stabilizer_order"] == 2
    assert f["kernel_order"] == 1
    assert f["symmetric"] and f["vertex_transitive"] and f["arc_transitive"]
    assert f["connected"]
    ids = [c["id"] for c in doc["claims"]]
    assert "valency-law" in ids and "arc-stabilizer-law" in ids


def test_cosetgraph_involution_inside_subgroup(capsys):
    code, out, err = run(
        capsys,
        "cosetgraph",
        "--group", GRP,
        "--subgroup", "(2 3),(3 4)",
        "--involution", "(2 3)",
        "--out", "dot",
    )
    assert code == 1
    assert out == ""
    assert err.startswith("sgk: inside-subgroup:")


def test_cosetgraph_not_involution(capsys):
    code, _, err = run(
        capsys,
        "cosetgraph",
        "--group", GRP,
        "--subgroup", "(2 3),(3 4)",
        "--involution", "(1 2 3)",
    )
    assert code == 1
    assert err.startswith("sgk: not-involution:")


def test_missing_file_is_input_error(capsys):
    code, _, err = run(capsys, "group", "--group", "no-such-file.grp")
    assert code == 1
    assert err.startswith("sgk: invalid-input:")


def test_verify_symmetric_graph(capsys):
    code, out, _ = run(capsys, "verify", "--graph", GRAPH, "--group", GRP)
    assert code == 0
    doc = cert_from(out)
    assert doc["facts"]["symmetric"] is True


def test_verify_asymmetric_pair_exits_two(capsys):
    code, out, _ = run(
        capsys,
        "verify",
        "--graph", str(FIXDIR / "c6.graph"),
        "--group", str(FIXDIR / "z6.grp"),
    )
    assert code == 2
    doc = cert_from(out)
    assert not doc["ok"]
    failing = [c for c in doc["claims"] if not c["pass"]]
    assert failing
    assert "counterexample" in failing[0]


def test_quotient_command(capsys, tmp_path):
    blocks = tmp_path / "blocks.txt"
    blocks.write_text("1 4\n2 5\n3 6\n")
    cert_path = tmp_path / "cert.json"
    code, out, _ = run(
        capsys,
        "quotient",
        "--graph", str(FIXDIR / "c6.graph"),
        "--group", str(FIXDIR / "d6.grp"),
        "--blocks", str(blocks),
        "--certificate", str(cert_path),
        "--out", "edges",
    )
    assert code == 0
    assert "vertices: 3" in out
    doc = cert_from(cert_path.read_text())
    assert doc["facts"]["cover_class"] == "cover"
    assert doc["facts"]["design"] == {"v": 2, "k": 2, "lam": 2, "b": 2, "multiplicity": 2}


def test_quotient_trivial_partition_is_input_error(capsys, tmp_path):
    blocks = tmp_path / "blocks.txt"
    blocks.write_text("1 2 3 4 5 6\n")
    code, _, err = run(
        capsys,
        "quotient",
        "--graph", str(FIXDIR / "c6.graph"),
        "--group", str(FIXDIR / "d6.grp"),
        "--blocks", str(blocks),
    )
    assert code == 1
    assert err.startswith("sgk: trivial-quotient:")


def test_blocks_and_lattice(capsys):
    code, out, _ = run(capsys, "blocks", "--group", str(FIXDIR / "d4.grp"))
    assert code == 0
    doc = cert_from(out)
    assert [[1, 3], [2, 4]] in doc["facts"]["systems"]

    code, out, _ = run(capsys, "lattice", "--group", str(FIXDIR / "d4.grp"))
    assert code == 0
    doc = cert_from(out)
    assert doc["facts"]["count"] == 3


def test_orbitals_command(capsys):
    code, out, _ = run(capsys, "orbitals", "--group", GRP)
    assert code == 0
    doc = cert_from(out)
    assert doc["facts"]["rank"] == 2


def test_design_pipeline(capsys, tmp_path):
    design_path = tmp_path / "k4.design"
    code, out, _ = run(
        capsys,
        "design", "from-graph",
        "--graph", GRAPH,
        "--group", GRP,
        "--out", "design",
        "--out-file", str(design_path),
    )
    assert code == 0
    assert design_path.read_text().startswith("points: 4")

    code, out, _ = run(
        capsys, "design", "validate", "--design", str(design_path)
    )
    assert code == 0
    doc = cert_from(out)
    assert doc["facts"] == {"v": 4, "b": 4, "k": 3, "lam": 3, "multiplicity": 1}

    code, out, _ = run(
        capsys,
        "design", "to-graph",
        "--design", str(design_path),
        "--group", GRP,
        "--out", "edges",
    )
    assert code == 0
    assert "vertices: 4" in out

    code, out, _ = run(
        capsys, "design", "polarities", "--design", str(design_path), "--group", GRP
    )
    assert code == 0
    doc = cert_from(out)
    assert doc["facts"]["count"] >= 1


def test_threearc_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "threearc", "--graph", GRAPH, "--group", GRP)
    assert code == 0
    doc = cert_from(out)
    assert doc["facts"]["orbit_count"] == 2
    assert [o["size"] for o in doc["facts"]["orbits"]] == [24, 24]

    cert_path = tmp_path / "t.json"
    code, out, _ = run(
        capsys,
        "threearc",
        "--graph", GRAPH,
        "--group", GRP,
        "--orbit-index", "0",
        "--certificate", str(cert_path),
        "--out", "edges",
    )
    assert code == 0
    assert "vertices: 12" in out
    doc = cert_from(cert_path.read_text())
    assert doc["facts"]["pe_labelling_found"] is True
    assert doc["facts"]["three_arc_necessity"] is True

    code, _, err = run(
        capsys, "threearc", "--graph", GRAPH, "--group", GRP, "--orbit-index", "7"
    )
    assert code == 1
    assert "orbit index" in err


def test_biggs_command(capsys, tmp_path):
    twist = tmp_path / "twist.txt"
    twist.write_text("trivial\n")
    chain = tmp_path / "chain.txt"
    chain.write_text("arc 1 2 (1 2)\n")
    cert_path = tmp_path / "b.json"
    code, out, _ = run(
        capsys,
        "biggs",
        "--graph", GRAPH,
        "--group", GRP,
        "--n", str(FIXDIR / "z2.grp"),
        "--twist", str(twist),
        "--chain", str(chain),
        "--certificate", str(cert_path),
        "--out", "edges",
    )
    assert code == 0
    assert "vertices: 8" in out
    doc = cert_from(cert_path.read_text())
    assert doc["facts"]["semidirect_order"] == 48
    assert doc["facts"]["cover_class"] == "cover"
    assert doc["ok"]


def test_subgraph_graph_command(capsys):
    code, out, _ = run(
        capsys,
        "subgraph-graph",
        "--graph", GRAPH,
        "--group", GRP,
        "--subgraph", "3>4,4>1,1>3",
        "--involution", "(1 2)",
    )
    assert code == 0
    doc = cert_from(out)
    assert doc["facts"]["vertices"] == 8
    assert doc["facts"]["valency"] == 3
    assert doc["facts"]["stabilizer_order"] == 3

    code, _, err = run(
        capsys,
        "subgraph-graph",
        "--graph", GRAPH,
        "--group", GRP,
        "--subgraph", "3-4",
        "--involution", "(1 2)",
    )
    assert code == 1
    assert "invalid-input" in err


def test_extend_arcs_command(capsys):
    code, out, _ = run(
        capsys,
        "extend",
        "--via", "arcs",
        "--group", str(FIXDIR / "octahedron-aut.grp"),
        "--subgroup", "(2 3)(5 6),(2 5)(3 6),(3 6)",
        "--over", "(3 6),(2 5)",
        "--involution", "(1 2)(4 5)",
    )
    assert code == 0
    doc = cert_from(out)
    assert doc["facts"]["r"] == 2
    assert doc["facts"]["extension_vertices"] == 12

    code, _, err = run(
        capsys, "extend", "--via", "arcs", "--group", str(FIXDIR / "octahedron-aut.grp")
    )
    assert code == 1
    assert "needs" in err


def test_extend_flags_command(capsys, tmp_path):
    twist = tmp_path / "twist.txt"
    twist.write_text("trivial\n")
    chain = tmp_path / "chain.txt"
    chain.write_text("arc 1 2 (1 2)\n")
    cover_path = tmp_path / "cover.graph"
    group_path = tmp_path / "cover.grp"
    code, out, _ = run(
        capsys,
        "biggs",
        "--graph", GRAPH,
        "--group", GRP,
        "--n", str(FIXDIR / "z2.grp"),
        "--twist", str(twist),
        "--chain", str(chain),
        "--out", "edges",
        "--out-file", str(cover_path),
        "--group-out", str(group_path),
    )
    assert code == 0
    blocks = tmp_path / "fibres.txt"
    blocks.write_text("1 5\n2 6\n3 7\n4 8\n")
    code, out, _ = run(
        capsys,
        "extend",
        "--via", "flags",
        "--graph", str(cover_path),
        "--group", str(group_path),
        "--blocks", str(blocks),
    )
    assert code == 0
    doc = cert_from(out)
    assert doc["facts"]["normal_subgroup_order"] == 4
    assert doc["facts"]["flag_orbital_size"] == 6
    assert doc["ok"]


def test_certificates_deterministic(capsys):
    _, out1, _ = run(capsys, "orbitals", "--group", GRP)
    _, out2, _ = run(capsys, "orbitals", "--group", GRP)
    strip = lambda s: re.sub(r'"timing_ms": [0-9.]+', '"timing_ms": 0', s)
    assert strip(out1) == strip(out2)


def test_group_out_writes_readable_group(capsys, tmp_path):
    group_path = tmp_path / "induced.grp"
    code, _, _ = run(
        capsys,
        "cosetgraph",
        "--group", GRP,
        "--subgroup", "(2 3),(3 4)",
        "--involution", "(1 2)",
        "--out", "edges",
        "--group-out", str(group_path),
    )
    assert code == 0
    from sgk.io import parse_group_file
    from sgk.perm import enumerate_group

    induced = enumerate_group(parse_group_file(group_path.read_text()))
    assert induced.degree == 4
    assert len(induced) == 24
