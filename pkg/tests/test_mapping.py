from __future__ import annotations

import pytest
from hypothesis import given
from oracles import DATA, registry_dimensions
from strategies import ud_token

from ud2um.mapping import (
    UD_LANGUAGE_SPECIFIC,
    DuplicateKey,
    ExcludedPos,
    MappingError,
    UnknownTargetAtom,
    base_convert,
    load_mapping,
    parse_mapping,
)
from ud2um.schema import POS, UdMsd, UmMsd

TABLE = load_mapping()


def _raw_rows():
    return [line.split("\t") for line in (DATA / "mapping.tsv").read_text("utf-8").splitlines()
            if line.strip() and not line.startswith("#")]


def test_empty_file_gives_empty_table():
    assert len(parse_mapping([])) == 0


def test_default_table_has_140_pairs():
    assert len(_raw_rows()) == 140
    assert len(TABLE) == 140


def test_documented_example_pairs_present():
    assert TABLE.pos_for("VERB") == "V"
    assert TABLE.entries[("Mood", "Ind")] == ("IND",)
    assert TABLE.entries[("Number", "Sing")] == ("SG",)
    assert TABLE.entries[("Person", "3")] == ("3",)


@pytest.mark.parametrize("upos", ["PUNCT", "SYM", "X"])
def test_punct_sym_x_are_excluded(upos):
    assert TABLE.is_excluded(upos)
    with pytest.raises(ExcludedPos):
        TABLE.pos_for(upos)


def test_unknown_upos_is_excluded():
    with pytest.raises(ExcludedPos):
        TABLE.pos_for("FOO")


def test_every_target_is_registered_and_only_pos_rows_target_pos():
    dims = registry_dimensions()
    for source, target in _raw_rows():
        for atom in target.split(";"):
            if atom == "EXCLUDE":
                assert source.startswith("UPOS:")
                continue
            assert atom in dims
            assert (dims[atom] == POS) == source.startswith("UPOS:"), source


def test_duplicate_key_rejected():
    with pytest.raises(DuplicateKey):
        parse_mapping(["Mood=Ind\tIND", "Mood=Ind\tSBJV"])
    with pytest.raises(DuplicateKey):
        parse_mapping(["UPOS:NOUN\tN", "UPOS:NOUN\tPROPN"])


@pytest.mark.parametrize("line,error", [
    ("Mood=Ind\tNOTANATOM", UnknownTargetAtom),
    ("UPOS:NOUN\tSG", MappingError),
    ("Mood=Ind\tV", MappingError),
    ("MoodInd\tIND", MappingError),
    ("Mood=Ind", MappingError),
])
def test_bad_rows(line, error):
    with pytest.raises(error):
        parse_mapping([line])


def test_multi_target_rows_allowed():
    table = parse_mapping(["UPOS:VERB\tV", "Tense=Imp\tPST;IPFV"])
    proposal, dropped = base_convert("VERB", {("Tense", "Imp")}, table)
    assert proposal == UmMsd(["V", "PST", "IPFV"]) and dropped == []


def test_load_from_path(tmp_path):
    path = tmp_path / "m.tsv"
    path.write_text("# c\nUPOS:NOUN\tN\nNumber=Plur\tPL\n", encoding="utf-8")
    table = load_mapping(path)
    assert len(table) == 2


# --- base_convert -----------------------------------------------------------


def test_documented_verb_example():
    proposal, dropped = base_convert("VERB", UdMsd.parse("VERB", "Mood=Ind|Number=Sing|Person=3"), TABLE)
    assert proposal == UmMsd(["V", "IND", "SG", "3"])
    assert dropped == []


def test_bare_noun():
    assert base_convert("NOUN", set(), TABLE) == (UmMsd(["N"]), [])


def test_imperfect_tense_is_dropped_not_guessed():
    proposal, dropped = base_convert("VERB", {("Mood", "Ind"), ("Tense", "Imp")}, TABLE)
    assert proposal == UmMsd(["V", "IND"])
    assert dropped == [("Tense", "Imp")]


@pytest.mark.parametrize("attr", sorted(UD_LANGUAGE_SPECIFIC))
def test_language_specific_attributes_always_dropped(attr):
    proposal, dropped = base_convert("NOUN", {(attr, "Yes")}, TABLE)
    assert proposal == UmMsd(["N"])
    assert dropped == [(attr, "Yes")]


def test_excluded_pos_raises():
    with pytest.raises(ExcludedPos):
        base_convert("PUNCT", {("PunctType", "Peri")}, TABLE)


@given(ud_token())
def test_every_pair_is_accounted_for(token):
    upos, pairs, _, _ = token
    proposal, dropped = base_convert(upos, pairs, TABLE)
    produced = set()
    for attr, val in pairs:
        if (attr, val) in dropped:
            continue
        produced.update(TABLE.entries[(attr, val)])
    assert set(dropped) <= pairs
    assert proposal.atoms == {TABLE.pos_for(upos)} | produced
    assert base_convert(upos, pairs, TABLE) == (proposal, dropped)
