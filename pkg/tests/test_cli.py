import json
from dataclasses import replace
from fractions import Fraction

import pytest

from toricfano.atlas import render, shipped_database
from toricfano.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_list_shipped(capsys):
    code, out, err = run(capsys, "list")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "variety\trays\tcollections"
    assert len(lines) == 1 + 67
    assert lines[1] == "P4\t5\t1"


def test_list_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "list")
    rows = json.loads(out)
    assert code == 0
    assert len(rows) == 67
    assert rows[0] == {"variety": "P4", "rays": "5", "collections": "1"}


def test_list_empty_db(tmp_path, capsys):
    empty = tmp_path / "empty.txt"
    empty.write_text("# nothing here\n")
    code, out, _ = run(capsys, "--db", str(empty), "list")
    assert code == 0
    assert out.splitlines() == ["variety\trays\tcollections"]


def test_parse_failure_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("variety X\nrays 2\n1 0 0 0\nend\n")
    code, _, err = run(capsys, "--db", str(bad), "list")
    assert code == 2
    assert "line 4" in err


def test_missing_file_exits_2(capsys):
    code, _, err = run(capsys, "--db", "/nonexistent/db.txt", "list")
    assert code == 2


def test_ch2_single_surface(capsys):
    code, out, _ = run(capsys, "ch2", "H1", "--surface", "3,4")
    assert (code, out.strip()) == (0, "-3/2")
    code, out, _ = run(capsys, "ch2", "R1", "--surface", "1,3")
    assert (code, out.strip()) == (0, "-4")


def test_ch2_rejects_non_cone(capsys):
    code, _, err = run(capsys, "ch2", "H1", "--surface", "1,2")
    assert code == 1
    assert "not a cone" in err


def test_ch2_unknown_variety(capsys):
    code, _, err = run(capsys, "ch2", "XX", "--surface", "1,2")
    assert code == 1
    assert "unknown variety" in err


def test_ch2_malformed_surface_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["ch2", "H1", "--surface", "3;4"])
    assert exc.value.code == 2


def test_ch2_full_listing(capsys):
    code, out, _ = run(capsys, "ch2", "H1")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "variety\tsurface\tvalue\tclassification"
    summary = lines[-1].split("\t")
    assert summary == ["H1", "V(3,4)", "-3/2", "not_nef"]
    # one row per 2-cone plus header and summary
    from toricfano.atlas import record_fan

    fan = record_fan(shipped_database().lookup("H1"))
    assert len(lines) == 1 + len(fan.cones2) + 1


def test_ch2_tsv_and_json_values_agree(capsys):
    _, tsv_out, _ = run(capsys, "ch2", "E1")
    _, json_out, _ = run(capsys, "--format", "json", "ch2", "E1")
    tsv_rows = [line.split("\t") for line in tsv_out.splitlines()[1:]]
    json_rows = json.loads(json_out)
    assert [r[2] for r in tsv_rows] == [r["value"] for r in json_rows]
    assert list(json_rows[0]) == ["variety", "surface", "value", "classification"]


def test_classify_p4(capsys):
    code, out, _ = run(capsys, "classify", "P4")
    assert code == 0
    row = out.splitlines()[1].split("\t")
    assert row == ["P4", "V(1,2)", "5/2", "two_fano"]


def test_classify_124(capsys):
    code, out, _ = run(capsys, "classify", "124")
    row = out.splitlines()[1].split("\t")
    assert code == 0
    assert row[0] == "124"
    assert row[3] == "not_nef"
    assert Fraction(row[2]) <= -4


def test_classify_all_finds_single_two_fano(capsys):
    code, out, _ = run(capsys, "--jobs", "2", "classify", "--all")
    lines = out.splitlines()
    assert code == 0
    assert lines[-1] == "# two_fano 1 of 67: P4"
    winners = [l.split("\t") for l in lines[1:-1] if l.split("\t")[3] == "two_fano"]
    assert winners == [["P4", "V(1,2)", "5/2", "two_fano"]]


def test_classify_requires_names_or_all(capsys):
    code, _, err = run(capsys, "classify")
    assert code == 1


def test_classify_rejects_invalid_record(tmp_path, capsys):
    text = (
        "variety bad\nrays 5\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n-2 -1 -1 -1\n"
        "collections 1\n1 2 3 4 5\nend\n"
    )
    db = tmp_path / "bad.txt"
    db.write_text(text)
    code, _, err = run(capsys, "--db", str(db), "classify", "--all")
    assert code == 1
    assert "validation failed" in err


def test_paper_table_flags_only_the_known_row(capsys):
    code, out, err = run(capsys, "paper-table")
    lines = out.splitlines()
    assert code == 1
    assert lines[0] == "variety\tsurface\tvalue"
    assert len(lines) == 1 + 66
    mismatches = [l for l in err.splitlines() if l.startswith("mismatch:")]
    assert len(mismatches) == 1
    assert "H2" in mismatches[0] and "-3/2" in mismatches[0] and "-1" in mismatches[0]


def test_paper_table_json_row_shape(capsys):
    code, out, _ = run(capsys, "--format", "json", "paper-table")
    rows = json.loads(out)
    assert len(rows) == 66
    assert list(rows[0]) == ["variety", "surface", "value"]
    assert rows[0] == {"variety": "E1", "surface": "V(2,3)", "value": "-2"}


def test_paper_table_detects_corrupted_ray(tmp_path, capsys):
    db = shipped_database()
    records = []
    for rec in db:
        if rec.name == "E1":
            rec = replace(rec, rays=db.lookup("E2").rays)
        records.append(rec)
    from toricfano.atlas import AtlasDatabase

    path = tmp_path / "corrupt.txt"
    path.write_text(render(AtlasDatabase(tuple(records))))
    code, _, err = run(capsys, "--db", str(path), "paper-table")
    assert code == 1
    assert any("E1" in l for l in err.splitlines())


def test_validate_shipped_default(capsys):
    code, out, err = run(capsys, "validate")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "variety\tsmooth\tcomplete\tround_trip\tfano\tok"
    assert len(lines) == 1 + 67
    assert all(line.endswith("\ttrue") for line in lines[1:])


def test_validate_flags_bad_records(tmp_path, capsys):
    h1 = shipped_database().lookup("H1")
    bad = replace(h1, name="H1x", collections=h1.collections + ((1, 2, 8),))
    from toricfano.atlas import AtlasDatabase

    path = tmp_path / "wrong.txt"
    path.write_text(render(AtlasDatabase((bad,))))
    code, out, err = run(capsys, "validate", str(path))
    assert code == 1
    row = out.splitlines()[1].split("\t")
    assert row[0] == "H1x"
    assert row[3] == "false"  # round_trip
    assert "round-trip" in err


def test_validate_malformed_file_exits_2(tmp_path, capsys):
    path = tmp_path / "junk.txt"
    path.write_text("variety\n")
    code, _, err = run(capsys, "validate", str(path))
    assert code == 2


def test_show_prints_relations(capsys):
    code, out, _ = run(capsys, "show", "H1")
    assert code == 0
    assert "v5 = (2, 0, -1, -1)" in out
    assert "degree" in out
    code, _, err = run(capsys, "show", "nosuch")
    assert code == 1


def test_common_flags_accepted_before_and_after_verb(capsys):
    _, before, _ = run(capsys, "--format", "json", "--jobs", "2", "classify", "H1")
    _, after, _ = run(capsys, "classify", "H1", "--format", "json", "--jobs", "2")
    assert before == after
    # a flag after the verb overrides one before it
    _, out, _ = run(capsys, "--format", "tsv", "classify", "H1", "--format", "json")
    json.loads(out)


def test_output_is_deterministic(capsys):
    _, first_out, first_err = run(capsys, "paper-table")
    _, second_out, second_err = run(capsys, "paper-table")
    assert first_out == second_out
    assert first_err == second_err
    _, a, _ = run(capsys, "--jobs", "1", "classify", "H1", "E1", "117")
    _, b, _ = run(capsys, "--jobs", "3", "classify", "H1", "E1", "117")
    assert a == b
