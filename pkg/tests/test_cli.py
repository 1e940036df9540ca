import json

import pytest

from opmassey import cli
from opmassey.documents import (
    SchemaError,
    canned_documents,
    dump_document,
    parse_document,
    to_text,
)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, data, name="doc.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data) if not isinstance(data, str) else data, encoding="utf-8")
    return str(p)


def same_algebra(a, b):
    assert a.basis == b.basis
    assert a.complex.differential == b.complex.differential
    assert a.presentation == b.presentation
    for g in a.presentation.generators:
        assert a.ops[g.name].table == b.ops[g.name].table


ZERO_DIFF = {
    "grading": "cohomological",
    "presentation": "com",
    "algebra": {
        "name": "two-points",
        "basis": [["1", 0], ["a", 2], ["b", 2], ["ab", 4]],
        "operations": {"c": {"storage": "orbit", "entries": [
            {"inputs": ["1", "1"], "output": {"1": "1"}},
            {"inputs": ["1", "a"], "output": {"a": "1"}},
            {"inputs": ["1", "b"], "output": {"b": "1"}},
            {"inputs": ["1", "ab"], "output": {"ab": "1"}},
            {"inputs": ["a", "b"], "output": {"ab": "1"}},
        ]}},
    },
    "queries": [
        {"relation": "associativity", "inputs": ["a", "a", "b"]},
        {"relation": "associativity", "inputs": ["b", "b", "b"]},
    ],
}


def test_examples_are_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(capsys, "examples", "--output", str(a))[0] == 0
    assert run(capsys, "examples", "--output", str(b))[0] == 0
    names = sorted(p.name for p in a.iterdir())
    assert names == ["heisenberg-ce.json", "heisenberg-gerstenhaber.json", "heisenberg-hypercom.json"]
    for n in names:
        assert (a / n).read_bytes() == (b / n).read_bytes()
        code, out, _ = run(capsys, "validate", "--input", str(a / n))
        assert code == 0 and json.loads(out)["ok"]


def test_gerstenhaber_example_report(tmp_path, capsys):
    path = write(tmp_path, canned_documents()["heisenberg-gerstenhaber"])
    code, out, _ = run(capsys, "massey", "--input", path)
    assert code == 0
    q = json.loads(out)["queries"][0]
    assert q["defined"] and q["representative"] == {"xz": "2"}
    assert q["indeterminacy"] == [] and q["transfer_in_coset"]
    assert q["degree"] == {"homological": -2, "cohomological": 2}


def test_hypercom_example_report(tmp_path, capsys):
    path = write(tmp_path, canned_documents()["heisenberg-hypercom"])
    code, out, _ = run(capsys, "massey", "--input", path)
    assert code == 0
    q = json.loads(out)["queries"][0]
    assert q["intersection"] == {"empty": False, "point": {"vxz": "1"}, "directions": []}
    assert q["indeterminacy"] == [{"vwx": "1"}, {"vwy": "1"}, {"xyz": "1"}]


def test_associative_example_report(tmp_path, capsys):
    path = write(tmp_path, canned_documents()["heisenberg-ce"])
    code, out, _ = run(capsys, "massey", "--input", path, "--verbose")
    q = json.loads(out)["queries"][0]
    assert code == 0 and q["representative"] == {"xz": "1"} and q["indeterminacy"] == []
    assert q["audit"]["bounding_chains"] == [{}, {"z": "1"}]


def test_homology_reports(tmp_path, capsys):
    path = write(tmp_path, canned_documents()["heisenberg-ce"])
    code, out, _ = run(capsys, "homology", "--input", path)
    betti = {b["degree"]["cohomological"]: b["dim"] for b in json.loads(out)["homology"]["betti"]}
    assert code == 0 and betti == {0: 1, 1: 2, 2: 2, 3: 1}

    k2h = {"algebra": {"construct": "chevalley-eilenberg", "lie": {
        "names": ["v", "w", "x", "y", "z"], "brackets": [{"pair": ["x", "y"], "value": {"z": "1"}}]}}}
    code, out, _ = run(capsys, "homology", "--input", write(tmp_path, k2h, "k2h.json"))
    betti = [b["dim"] for b in json.loads(out)["homology"]["betti"]]
    assert code == 0 and betti == [1, 4, 7, 7, 4, 1]

    code, out, _ = run(capsys, "homology", "--input", write(tmp_path, ZERO_DIFF, "z.json"))
    betti = {b["degree"]["cohomological"]: b["dim"] for b in json.loads(out)["homology"]["betti"]}
    assert code == 0 and betti == {0: 1, 2: 2, 4: 1}


def test_undefined_query_does_not_abort_siblings(tmp_path, capsys):
    code, out, _ = run(capsys, "massey", "--input", write(tmp_path, ZERO_DIFF))
    qs = json.loads(out)["queries"]
    assert code == 2
    assert qs[0]["status"] == "undefined" and "summand 1" in qs[0]["error"]
    assert qs[1]["defined"] and qs[1]["representative"] == {}


def test_corrupted_differential(tmp_path, capsys):
    data = json.loads(json.dumps(ZERO_DIFF))
    data["algebra"]["differential"] = {"a": {"ab": "1"}}
    code, out, _ = run(capsys, "validate", "--input", write(tmp_path, data))
    report = json.loads(out)
    assert code == 1 and not report["ok"]
    failing = [f["where"] for r in report["validation"] for f in r["failures"]]
    assert failing == ["a"]


def test_bad_rational_is_schema_error(tmp_path, capsys):
    data = json.loads(json.dumps(ZERO_DIFF))
    data["algebra"]["operations"]["c"]["entries"][4]["output"] = {"ab": "1/0"}
    code, _, err = run(capsys, "validate", "--input", write(tmp_path, data))
    assert code == 3 and "zero denominator" in err and "entries[4]" in err
    with pytest.raises(SchemaError):
        parse_document(data)


def test_malformed_json_has_line_context(tmp_path, capsys):
    code, _, err = run(capsys, "validate", "--input", write(tmp_path, '{\n  "grading": \n}'))
    assert code == 3 and ":3:" in err


def test_schema_errors(tmp_path, capsys):
    for bad in ({"algebra": {"construct": "nope"}},
                {"grading": "sideways", "algebra": {"construct": "heisenberg-ce"}},
                {"algebra": {"basis": [["a", 0]]}},
                {"algebra": {"construct": "heisenberg-ce"}, "relation_scope": {"jacobi": []}}):
        code, _, err = run(capsys, "validate", "--input", write(tmp_path, bad))
        assert code == 3 and "schema error" in err
    assert run(capsys, "massey")[0] == 3
    assert run(capsys, "validate", "--input", str(tmp_path / "missing.json"))[0] == 3


def test_invalid_query_inputs(tmp_path, capsys):
    data = dict(canned_documents()["heisenberg-ce"])
    data["queries"] = [{"relation": "associativity", "inputs": ["x", "z", "y"]},
                       {"relation": "associativity", "inputs": ["x", "x", "y"]}]
    code, out, _ = run(capsys, "massey", "--input", write(tmp_path, data))
    qs = json.loads(out)["queries"]
    assert code == 3 and "not a cycle" in qs[0]["error"] and qs[1]["defined"]


def test_explicit_choices(tmp_path, capsys):
    data = dict(canned_documents()["heisenberg-gerstenhaber"])
    data["queries"] = [{"relation": "gerstenhaber", "inputs": ["yz", "x", "y"],
                        "choices": {"bounding_chains": {"0": {"z": "1", "x": "3"}}}}]
    code, out, _ = run(capsys, "massey", "--input", write(tmp_path, data), "--verbose")
    q = json.loads(out)["queries"][0]
    assert code == 0 and q["choices"]["mode"] == "explicit"
    assert q["representative"] == {"xz": "2"}
    assert q["audit"]["bounding_chains"][0] == {"x": "3", "z": "1"}


def test_seeded_reports_are_byte_identical(tmp_path, capsys):
    path = write(tmp_path, canned_documents()["heisenberg-hypercom"])
    outs = [run(capsys, "massey", "--input", path, "--seed", "11", "--verbose")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    q = json.loads(outs[0])["queries"][0]
    assert q["choices"] == {"mode": "random", "seed": 11}
    assert q["normal_form"] == {"vxz": "1"}
    other = run(capsys, "massey", "--input", path, "--seed", "12", "--verbose")[1]
    assert json.loads(other)["queries"][0]["audit"] != q["audit"]


def test_full_scope_and_text_output(tmp_path, capsys):
    path = write(tmp_path, canned_documents()["heisenberg-hypercom"])
    code, out, _ = run(capsys, "validate", "--input", path, "--scope", "full")
    checks = {r["check"]: r["checked"] for r in json.loads(out)["validation"]}
    assert code == 0 and checks["relation[hypercommutative]"] == 32 ** 4
    out_path = tmp_path / "report.txt"
    code, _, _ = run(capsys, "massey", "--input", path, "--format", "text", "--output", str(out_path))
    text = out_path.read_text()
    assert code == 0 and "intersection vxz" in text and "indeterminacy  vwx, vwy, xyz" in text


@pytest.mark.parametrize("name", list(canned_documents()))
def test_round_trip(name):
    doc = parse_document(canned_documents()[name])
    dumped = dump_document(doc)
    again = parse_document(json.loads(to_text(dumped)))
    same_algebra(doc.algebra, again.algebra)
    assert again.queries == doc.queries
    assert again.relation_scope == doc.relation_scope
    assert to_text(dump_document(again)) == to_text(dumped)


def test_round_trip_homological_and_orbit():
    doc = parse_document(ZERO_DIFF)
    assert doc.algebra.basis.degree("a") == -2
    dumped = dump_document(doc)
    again = parse_document(dumped)
    same_algebra(doc.algebra, again.algebra)
    homological = dict(dumped, grading="homological")
    homological["algebra"] = dict(dumped["algebra"], basis=[[n, -d] for n, d in dumped["algebra"]["basis"]])
    homological["presentation"] = dict(dumped["presentation"], generators=[
        dict(g, degree=-g["degree"]) for g in dumped["presentation"]["generators"]])
    same_algebra(parse_document(homological).algebra, doc.algebra)
    assert ("b", "a") in doc.algebra.ops["c"].table


def test_orbit_storage_conflict_rejected():
    data = json.loads(json.dumps(ZERO_DIFF))
    data["algebra"]["operations"]["c"]["entries"].append({"inputs": ["b", "a"], "output": {"ab": "2"}})
    with pytest.raises(SchemaError):
        parse_document(data)


def test_construct_directives():
    lie = {"names": ["x", "y", "z"], "brackets": [{"pair": ["x", "y"], "value": {"z": "1"}}]}
    dual = {"names": ["x", "y", "z"], "brackets": [{"pair": ["z", "x"], "value": {"x": "1"}},
                                                   {"pair": ["z", "y"], "value": {"x": "1", "y": "1"}}]}
    g = parse_document({"algebra": {"construct": "gerstenhaber-from-bialgebra", "lie": lie, "dual_bracket": dual}})
    from opmassey.construct import heisenberg_gerstenhaber, heisenberg_hypercom
    same_algebra(g.algebra, heisenberg_gerstenhaber())
    k2h = {"names": ["v", "w", "x", "y", "z"], "brackets": [{"pair": ["x", "y"], "value": {"z": "1"}}]}
    h = parse_document({"algebra": {"construct": "bv-trivialized-hypercom3", "lie": k2h,
                                    "operator": {"vwx": {"y": "1"}}}})
    same_algebra(h.algebra, heisenberg_hypercom())
    with pytest.raises(SchemaError, match="compatibility"):
        parse_document({"algebra": {"construct": "gerstenhaber-from-bialgebra", "lie": lie,
                                    "dual_bracket": {"names": ["x", "y", "z"], "brackets": [
                                        {"pair": ["x", "y"], "value": {"z": "1"}}]}}})
