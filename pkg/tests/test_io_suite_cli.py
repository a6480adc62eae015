import json
from pathlib import Path

import pytest

from trirep.cli import main
from trirep.io import ManifestError, fixture_path, load_manifest, manifest_from_dict, shipped_fixtures
from trirep.suite import Report, emit_report, report_dict, run_check, run_suite, text_verdicts

GOLDEN = Path(__file__).parent / "golden"

D2_ALGEBRA = {"D2": {"p": 2, "truncated": 2}}


def test_empty_manifest_has_no_suites():
    m = manifest_from_dict({"version": 1})
    assert m.suites == {} and m.algebras == {}


def test_wrong_version_rejected():
    with pytest.raises(ManifestError, match="version"):
        manifest_from_dict({"version": 2})


def test_ut2_fixture_contents():
    m = load_manifest(fixture_path("ut2"))
    assert len(m.algebras) == 3 and len(m.bimodules) == 1 and len(m.triples) == 8
    assert m.algebras["Lambda"].dim == 3


def test_every_shipped_fixture_loads():
    names = shipped_fixtures()
    assert {"ut2", "dual", "frob", "diagrams"} <= set(names)
    for name in names:
        assert load_manifest(fixture_path(name)).suites, name


def test_bad_structure_constants_name_a_basis_triple():
    mul = [[[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[0, 1, 0], [0, 0, 0], [0, 1, 0]], [[0, 0, 1], [0, 0, 0], [0, 0, 0]]]
    with pytest.raises(ManifestError) as err:
        manifest_from_dict({"version": 1, "algebras": {"Bad": {"p": 2, "mul": mul, "unit": [1, 0, 0]}}})
    assert "associativity" in str(err.value) and err.value.where == "algebras.Bad"
    assert len(err.value.witness) == 3


def test_dangling_reference_reports_location():
    data = {"version": 1, "algebras": D2_ALGEBRA, "modules": {"S": {"algebra": "D3", "zero": True}}}
    with pytest.raises(ManifestError, match="dangling reference 'D3'") as err:
        manifest_from_dict(data)
    assert err.value.where == "modules.S"


def test_parse_error_reports_line_and_column(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"version": 1,\n  "algebras": {,}\n}\n')
    with pytest.raises(ManifestError, match="line 2 column"):
        load_manifest(path)


def test_matrix_object_entry_count_checked():
    action = [{"p": 2, "rows": 1, "cols": 1, "entries": [1]}, {"p": 2, "rows": 1, "cols": 1, "entries": [0, 0]}]
    data = {"version": 1, "algebras": D2_ALGEBRA, "modules": {"S": {"algebra": "D2", "action": action}}}
    with pytest.raises(ManifestError):
        manifest_from_dict(data)


def test_matrix_object_and_nested_lists_agree():
    obj = [{"p": 2, "rows": 1, "cols": 1, "entries": [1]}, {"p": 2, "rows": 1, "cols": 1, "entries": [0]}]
    a = manifest_from_dict({"version": 1, "algebras": D2_ALGEBRA, "modules": {"S": {"algebra": "D2", "action": obj}}})
    b = manifest_from_dict({"version": 1, "algebras": D2_ALGEBRA, "modules": {"S": {"algebra": "D2", "action": [[[1]], [[0]]]}}})
    assert (a.modules["S"].action == b.modules["S"].action).all()


def test_declared_dim_mismatch():
    data = {"version": 1, "algebras": D2_ALGEBRA, "modules": {"S": {"algebra": "D2", "dim": 2, "action": [[[1]], [[0]]]}}}
    with pytest.raises(ManifestError, match="declared dim 2"):
        manifest_from_dict(data)


def test_non_module_action_rejected():
    data = {"version": 1, "algebras": D2_ALGEBRA, "modules": {"S": {"algebra": "D2", "action": [[[1]], [[1]]]}}}
    with pytest.raises(ManifestError) as err:
        manifest_from_dict(data)
    assert err.value.where == "modules.S"


def test_empty_report():
    assert json.loads(emit_report(Report())) == {"version": 1, "checks": []}


def test_failing_check_carries_witness():
    m = load_manifest(fixture_path("missing-injective"))
    c = run_check(m, {"check": "closure", "subcategory": "Xs", "kind": "extensions"}, None)
    data = json.loads(emit_report(Report(checks=[c])))
    assert data["checks"][0]["status"] == "fail"
    assert data["checks"][0]["witness"]["middle_dim"] == 2


def test_expectation_wrapper_catches_a_wrong_expectation():
    m = load_manifest(fixture_path("missing-injective"))
    c = run_check(m, {"check": "closure", "subcategory": "Xs", "kind": "summands", "expect": {"status": "fail"}}, None)
    assert c.status == "fail" and c.witness["mismatch"]


def test_unknown_suite_and_check():
    m = load_manifest(fixture_path("ut2"))
    with pytest.raises(ManifestError, match="unknown suite"):
        run_suite(m, "nope")
    with pytest.raises(ValueError, match="unknown check"):
        run_check(m, {"check": "nope"}, None)


@pytest.mark.parametrize("fixture", ["ut2", "missing-injective", "ext-obstruction"])
def test_text_and_json_verdicts_agree(fixture):
    m = load_manifest(fixture_path(fixture))
    for name in m.suites:
        r = run_suite(m, name)
        js = json.loads(emit_report(r, "json"))
        assert text_verdicts(emit_report(r, "text")) == [c["status"] for c in js["checks"]]


def test_verdicts_do_not_depend_on_seed():
    m = load_manifest(fixture_path("diagrams"))
    a, b = run_suite(m, "diagram-properties", 0), run_suite(m, "diagram-properties", 17)
    assert [c.status for c in a.checks] == [c.status for c in b.checks]


def test_timings_only_on_request():
    r = run_suite(load_manifest(fixture_path("ut2")), "ut2-classify")
    assert "timings" not in report_dict(r)
    assert len(report_dict(r, timing=True)["timings"]) == len(r.checks)


def test_cli_exit_codes(capsys):
    assert main(["suite", "run", "--fixture", "ut2", "--suite", "ut2-classify"]) == 0
    assert main(["subcat", "check", "--fixture", "missing-injective", "--subcategory", "Xs", "--check", "closure"]) == 1
    assert main(["subcat", "frobenius", "--fixture", "ext-obstruction", "--category", "E"]) == 2
    assert main(["validate", "--fixture", "no-such-fixture"]) == 1
    capsys.readouterr()


def test_cli_verb_forms(capsys):
    assert main(["subcat", "check", "--fixture", "dual", "--category", "E", "--kind", "coresolving"]) == 0
    assert main(["diagram", "verify", "--fixture", "diagrams"]) == 0
    assert main(["classify", "--fixture", "ut2", "--triple", "[k;k]_1"]) == 0
    out = capsys.readouterr().out
    assert "[PASS] co-resolving E" in out and "[PASS] diagram squares" in out


def test_cli_recollement_verify(capsys):
    assert main(["recollement", "verify", "--fixture", "ut2-nonfrobenius", "--category", "E"]) == 2
    assert "[REFUSED] recollement E" in capsys.readouterr().out


def test_cli_validate_json(capsys):
    assert main(["validate", "--fixture", "ut2", "--format", "json"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["triples"] == 8


def test_cli_figures(tmp_path, capsys):
    figs = tmp_path / "figs"
    rc = main(["recollement", "verify", "--fixture", "frob", "--category", "E", "--figures", str(figs), "--report", str(tmp_path / "r.txt")])
    assert rc == 0
    pngs = sorted(figs.glob("*.png"))
    assert pngs and all(p.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n" for p in pngs)
    capsys.readouterr()


def test_cli_report_file_is_json(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["suite", "run", "--fixture", "ut2", "--suite", "ut2-classify", "--format", "json", "--report", str(out)]) == 0
    assert json.loads(out.read_text())["status"] == "pass"
    capsys.readouterr()


def golden_cases():
    return sorted(p.name for p in GOLDEN.glob("*.json"))


def test_golden_set_covers_every_suite():
    expected = {f"{f}__{s}.json" for f in shipped_fixtures() for s in load_manifest(fixture_path(f)).suites}
    assert set(golden_cases()) == expected


@pytest.mark.parametrize("name", golden_cases())
def test_reports_match_golden(name):
    fixture, suite = name[:-5].split("__")
    r = run_suite(load_manifest(fixture_path(fixture)), suite)
    assert emit_report(r, "json") == (GOLDEN / name).read_bytes()
