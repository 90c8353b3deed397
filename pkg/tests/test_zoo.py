import json

import pytest

from almostcomplex import (UnknownEntryError, e, entry_from_json, evaluate_expectation, is_integrable, verify_entry,
                           zoo_catalog, zoo_lookup)

RECORDS = [(z.name, i) for z in zoo_catalog() for i in range(len(z.expectations))]


@pytest.mark.parametrize("name,index", RECORDS)
def test_expectation_record(name, index):
    z = zoo_lookup(name)
    x = z.expectations[index]
    assert evaluate_expectation(z, x) == x.expected, x.note


def test_unknown_name():
    with pytest.raises(UnknownEntryError) as info:
        zoo_lookup("nosuch")
    assert "iwasawa" in str(info.value)


def test_iwasawa_entry():
    z = zoo_lookup("iwasawa")
    assert z.mode == "complex"
    assert z.presentation.complex_images[2] == -e(6, 1, 2)
    assert any(x.quantity == "betti" and x.args == {"k": 1} and x.expected == 4 for x in z.expectations)
    assert any(x.quantity == "predicate" and x.args.get("flag") == "balanced" and x.expected for x in z.expectations)


def test_etabeta5_entry():
    z = zoo_lookup("etabeta5")
    got = {(x.quantity, x.args.get("field"), x.args.get("k")): x.expected for x in z.expectations}
    assert got[("stage", "h_minus", 2)] == 10
    assert got[("stage", "h_plus", 2)] == 16
    assert got[("betti", None, 2)] == 26
    assert "c" in z.curves


def test_kt4_expectation_set():
    z = zoo_lookup("kt4")
    keys = {(x.quantity, x.args.get("structure"), x.args.get("field"), x.args.get("k")) for x in z.expectations}
    assert ("betti", None, None, 1) in keys and ("betti", None, None, 2) in keys
    assert ("integrable", "J", None, None) in keys
    assert ("stage", "J", "pure", 2) in keys and ("stage", "J", "full", 2) in keys
    assert ("stage", "Jprime", "h_minus", 2) in keys


def test_ft6_carries_both_structures():
    z = zoo_lookup("ft6")
    assert set(z.structures) == {"J", "Jprime"}
    assert not is_integrable(z.presentation, z.structure("J"))


@pytest.mark.parametrize("entry", zoo_catalog(), ids=lambda z: z.name)
def test_json_roundtrip(entry):
    data = json.loads(json.dumps(entry.to_json()))
    again = entry_from_json(data)
    assert again.presentation.images == entry.presentation.images
    assert {k: v.J for k, v in again.structures.items()} == {k: v.J for k, v in entry.structures.items()}
    assert again.forms == entry.forms
    assert all(r.passed for r in verify_entry(again))


def test_bad_validity_flag():
    with pytest.raises(ValueError):
        entry_from_json({"presentation": "(0,0)", "validity": "maybe"})
