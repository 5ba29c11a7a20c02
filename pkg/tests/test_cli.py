from __future__ import annotations

import csv
import hashlib
import io
import subprocess
import sys

import pytest
from conftest import conllu, table
from oracles import DATA, column_diffs

from ud2um.cli import main
from ud2um.conllu import read_document

ES_ARGS = ["--lang", "es"]


def _run(capsys, *argv):
    status = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return status, out, err


def _tsv(text):
    return list(csv.reader(io.StringIO(text), delimiter="\t"))


def _sha(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


# --- convert ----------------------------------------------------------------


def test_convert_mandaba_line(tmp_path, capsys):
    out = tmp_path / "es.conllu"
    status, _, _ = _run(capsys, "convert", conllu("es_tiny"), *ES_ARGS, "--output", out)
    assert status == 0
    line = next(l for l in out.read_text("utf-8").splitlines() if "\tmandaba\t" in l)
    assert line.split("\t")[5] == "V;IND;PST;3;SG;IPFV"


def test_convert_strip_pos(tmp_path, capsys):
    full, bare = tmp_path / "full.conllu", tmp_path / "bare.conllu"
    _run(capsys, "convert", conllu("es_tiny"), *ES_ARGS, "-o", full)
    _run(capsys, "convert", conllu("es_tiny"), *ES_ARGS, "-o", bare, "--strip-pos")
    pick = lambda p: next(l for l in p.read_text("utf-8").splitlines() if "\tmandaba\t" in l)  # noqa: E731
    assert pick(bare) == pick(full).replace("\tV;IND", "\tIND")
    assert pick(bare).split("\t")[5] == "IND;PST;3;SG;IPFV"


@pytest.mark.parametrize("stem", ["es_tiny", "es_medium", "es_recall"])
def test_convert_diff_touches_only_column_six(tmp_path, capsys, stem):
    out = tmp_path / "out.conllu"
    _run(capsys, "convert", conllu(stem), *ES_ARGS, "-o", out)
    src = conllu(stem).read_text("utf-8")
    diffs = column_diffs(src, out.read_text("utf-8"))
    assert diffs and {col for _, col in diffs} == {5}


def test_convert_writes_dropped_pairs(tmp_path, capsys):
    out = tmp_path / "es.conllu"
    _run(capsys, "convert", conllu("es_tiny"), *ES_ARGS, "-o", out)
    rows = _tsv((tmp_path / "es.conllu.dropped.tsv").read_text("utf-8"))
    assert rows[0] == ["attribute", "value", "count"]
    assert rows[1] == ["PronType", "Prs", "2"]


def test_convert_to_stdout_reports_dropped_on_stderr(capsys):
    status, out, err = _run(capsys, "convert", conllu("es_tiny"), *ES_ARGS)
    assert status == 0
    assert "V;IND;PST;3;SG;IPFV" in out
    assert "dropped\tPronType=Prs\t2" in err


def test_convert_jobs_keeps_input_order(tmp_path, capsys):
    inputs = [conllu("es_tiny"), conllu("es_medium"), conllu("es_recall")]
    serial, parallel = tmp_path / "serial", tmp_path / "parallel"
    _run(capsys, "convert", *inputs, *ES_ARGS, "-o", serial)
    _run(capsys, "convert", *inputs, *ES_ARGS, "-o", parallel, "--jobs", "3")
    for p in inputs:
        assert (serial / p.name).read_bytes() == (parallel / p.name).read_bytes()
    assert (serial / "dropped.tsv").read_bytes() == (parallel / "dropped.tsv").read_bytes()
    _, a, _ = _run(capsys, "convert", *inputs, *ES_ARGS)
    _, b, _ = _run(capsys, "convert", *inputs, *ES_ARGS, "-j", "2")
    assert a == b and a.index("mandaba") < a.index("grandes")


def test_convert_parse_error_exits_nonzero(tmp_path, capsys):
    bad = tmp_path / "bad.conllu"
    bad.write_text("1\tx\tx\tNOUN\n", encoding="utf-8")
    status, _, err = _run(capsys, "convert", bad, *ES_ARGS)
    assert status == 1 and "error:" in err and "column" in err.lower()


def test_missing_rules_warns_but_succeeds(capsys):
    status, out, err = _run(capsys, "convert", conllu("ga_tiny"), "--lang", "ga")
    assert status == 0 and out
    assert "warning:" in err and "no rules file" in err


def test_language_resolution_by_name_and_treebank(capsys):
    _, by_code, _ = _run(capsys, "convert", conllu("es_tiny"), "--lang", "es")
    _, by_name, _ = _run(capsys, "convert", conllu("es_tiny"), "--lang", "Spanish")
    _, by_tb, _ = _run(capsys, "convert", conllu("es_tiny"), "--lang", "UD_Spanish-AnCora")
    assert by_code == by_name == by_tb


def test_csv_only_convert_leaves_imperfect_unsplit(capsys):
    _, out, _ = _run(capsys, "convert", conllu("es_tiny"), *ES_ARGS, "--csv-only")
    line = next(l for l in out.splitlines() if "\tmandaba\t" in l)
    assert line.split("\t")[5] == "V;FIN;IND;3;SG"


def test_converted_output_reads_back(tmp_path, capsys):
    out = tmp_path / "es.conllu"
    _run(capsys, "convert", conllu("es_medium"), *ES_ARGS, "-o", out)
    assert len(list(read_document(out, feats="unimorph").words())) > 0


# --- evaluate ----------------------------------------------------------------


def test_evaluate_text_report(capsys):
    status, out, _ = _run(capsys, "evaluate", conllu("es_recall"), *ES_ARGS,
                          "--unimorph", table("es_recall"))
    assert status == 0
    assert "recall             70.00" in out
    assert "low overlap" in out
    assert f"table_sha256: {_sha(table('es_recall'))}" in out
    assert f"mapping_sha256: {_sha(DATA / 'mapping.tsv')}" in out


def test_evaluate_tsv_report_embeds_hashes(capsys):
    _, out, _ = _run(capsys, "evaluate", conllu("es_tiny"), *ES_ARGS,
                     "--unimorph", table("es_tiny"), "--report-format", "tsv")
    header, row = _tsv(out)
    rec = dict(zip(header, row))
    assert (rec["overlap"], rec["matches"], rec["recall"]) == ("8", "8", "100.00")
    assert rec["low_overlap"] == "true"
    assert rec["table_hash"] == _sha(table("es_tiny"))
    assert rec["mapping_hash"] == _sha(DATA / "mapping.tsv")
    assert len(rec["rules_hash"]) == 64


def test_evaluate_csv_only_is_lower_on_spanish_fixture(capsys):
    args = ["evaluate", conllu("es_tiny"), *ES_ARGS, "--unimorph", table("es_tiny"),
            "--report-format", "tsv"]
    _, full, _ = _run(capsys, *args)
    _, csv_only, _ = _run(capsys, *args, "--csv-only")
    full_recall = float(_tsv(full)[1][3])
    csv_recall = float(_tsv(csv_only)[1][3])
    assert csv_recall < full_recall == 100.0
    assert _tsv(csv_only)[1][-1] == "-"


def test_evaluate_table_directory_layout(tmp_path, capsys):
    (tmp_path / "spa").mkdir()
    (tmp_path / "spa" / "spa").write_bytes(table("es_tiny").read_bytes())
    status, out, _ = _run(capsys, "evaluate", conllu("es_tiny"), *ES_ARGS, "--unimorph", tmp_path)
    assert status == 0 and "recall             100.00" in out


def test_evaluate_missing_table_names_path(tmp_path, capsys):
    status, _, err = _run(capsys, "evaluate", conllu("es_tiny"), *ES_ARGS, "--unimorph", tmp_path)
    assert status == 1
    assert str(tmp_path / "spa" / "spa") in err
    missing = tmp_path / "nope.tsv"
    status, _, err = _run(capsys, "evaluate", conllu("es_tiny"), *ES_ARGS, "--unimorph", missing)
    assert status == 1 and str(missing) in err


def test_evaluate_reference_column(capsys):
    _, out, _ = _run(capsys, "evaluate", conllu("es_tiny"), *ES_ARGS,
                     "--unimorph", table("es_tiny"), "--reference")
    assert "published recall   lookup 17.20 / post-edit 97.86" in out


# --- audit -------------------------------------------------------------------


def test_audit_all_match_fixture_writes_empty_file(tmp_path, capsys):
    out = tmp_path / "audit.tsv"
    status, _, _ = _run(capsys, "audit", conllu("es_tiny"), *ES_ARGS,
                        "--unimorph", table("es_tiny"), "-o", out)
    assert status == 0 and out.exists() and out.read_bytes() == b""


def test_audit_rows_sorted_by_frequency(capsys):
    _, out, _ = _run(capsys, "audit", conllu("es_recall"), *ES_ARGS, "--unimorph", table("es_recall"))
    rows = _tsv(out)
    assert rows[0] == ["lemma", "form", "converted", "attested", "diff", "count"]
    assert [r[4] for r in rows[1:]] == ["missing:Gender=FEM", "missing:Gender=FEM",
                                         "substituted:Number=PL>SG"]


def test_audit_text_groups_by_signature(capsys):
    _, out, _ = _run(capsys, "audit", conllu("es_recall"), *ES_ARGS, "--unimorph",
                     table("es_recall"), "--report-format", "text")
    lines = out.splitlines()
    assert lines[0] == "misses by dimension diff:"
    assert lines[1].split() == ["2", "missing:Gender"]
    assert lines[2].split() == ["1", "substituted:Number"]


# --- tag -----------------------------------------------------------------------


def test_tag_reports_both_schemas(capsys):
    status, out, _ = _run(capsys, "tag", "--train", conllu("es_train"), "--test", conllu("es_test"),
                          *ES_ARGS)
    assert status == 0
    assert out.count("macro F1 (with POS)") == 2
    assert "schema ud" in out and "schema unimorph" in out
    assert "macro F1 (with POS)    0.9078" in out
    assert "macro F1 (with POS)    0.9021" in out


def test_tag_tsv_single_schema(capsys):
    _, out, _ = _run(capsys, "tag", "--train", conllu("es_train"), "--test", conllu("es_test"),
                     *ES_ARGS, "--schema", "unimorph", "--report-format", "tsv")
    rows = _tsv(out)
    assert rows[0][:3] == ["schema", "attribute", "value"]
    assert {r[0] for r in rows[1:]} == {"unimorph"}
    assert ["unimorph", "Aspect", "IPFV"] in [r[:3] for r in rows[1:]]


def test_unknown_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_console_entry_point_runs_as_module():
    proc = subprocess.run([sys.executable, "-m", "ud2um.cli", "convert", str(conllu("es_tiny")),
                           "--lang", "es"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "V;IND;PST;3;SG;IPFV" in proc.stdout


def test_external_recall_harness(tmp_path):
    (tmp_path / "ud" / "UD_Spanish").mkdir(parents=True)
    (tmp_path / "um" / "spa").mkdir(parents=True)
    (tmp_path / "ud" / "UD_Spanish" / "es.conllu").write_bytes(conllu("es_tiny").read_bytes())
    (tmp_path / "um" / "spa" / "spa").write_bytes(table("es_tiny").read_bytes())
    script = conllu("es_tiny").parents[2] / "scripts" / "external_recall.py"
    proc = subprocess.run([sys.executable, str(script), "--ud", str(tmp_path / "ud"),
                           "--unimorph", str(tmp_path / "um")], capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[1].split("\t") == ["es", "8", "0.00", "100.00", "17.20", "97.86"]
