import json

import pytest

from hvdc.bundles import build_corpus, build_walking_arrow, build_z2, bundle_path, load_bundle
from hvdc.fincore import validate_category
from hvdc.workspace import LoadError, Workspace, dumps, load, loads, save


@pytest.fixture(scope="module")
def text():
    return dumps(load_bundle("walking_arrow"))


@pytest.mark.parametrize("name", ["walking_arrow", "z2", "corpus"])
def test_round_trip_is_stable(name):
    ws = load_bundle(name)
    t = dumps(ws)
    assert dumps(loads(t)) == t


@pytest.mark.parametrize("name,build", [("walking_arrow", build_walking_arrow), ("z2", build_z2),
                                        ("corpus", build_corpus)])
def test_shipped_bundles_match_builders(name, build):
    with open(bundle_path(name), encoding="utf-8") as fh:
        assert json.loads(fh.read()) == json.loads(dumps(build()))


def test_save_and_load(tmp_path, text):
    ws = loads(text)
    path = tmp_path / "ws.json"
    save(ws, path)
    assert dumps(load(path)) == text


def test_walking_arrow_contents():
    ws = load_bundle("walking_arrow")
    A = ws.get("categories", "walking_arrow")
    assert validate_category(A) == []
    assert tuple(A.hom[("0", "1")]) == ("a",) and not A.hom[("1", "0")]
    assert sorted(ws.entries["presheaves"]) == ["p0", "p1", "p2", "p3", "y0", "y1"]
    assert ws.get("presheaves", "y1").values == {"0": ("a",), "1": ("id1",)}
    assert sorted(ws.entries["cells"]) == ["cart_I", "id_cell_of_noniso", "id_pick0"]


def test_broken_composition_names_the_pair(text):
    d = json.loads(text)
    d["categories"]["walking_arrow"]["comp"]["a"]["id0"] = "id1"
    with pytest.raises(LoadError) as e:
        loads(json.dumps(d))
    assert e.value.errors[0] == "category walking_arrow: composite (a,id0) = id1 has the wrong boundary"


def test_dangling_reference(text):
    d = json.loads(text)
    d["functors"]["id"]["target"] = "nope"
    with pytest.raises(LoadError) as e:
        loads(json.dumps(d))
    assert e.value.errors[0] == "functor id: dangling reference to unknown category 'nope'"
    # dependants are reported once each
    assert e.value.errors[1:] == ["cell cart_I: dangling reference to unknown functor 'id'"]


def test_duplicate_name(text):
    ws = loads(text)
    with pytest.raises(LoadError) as e:
        loads(text, into=ws)
    assert "duplicate category name 'terminal'" in e.value.errors
    with pytest.raises(LoadError):
        ws.add("categories", "terminal", ws.get("categories", "terminal"))


def test_parse_error_and_bad_header():
    with pytest.raises(LoadError) as e:
        loads("{bad")
    assert e.value.errors[0].startswith("<string>: parse error at line 1, column 2")
    with pytest.raises(LoadError):
        loads(json.dumps({"hvdc": 2}))
    with pytest.raises(LoadError) as e:
        loads(json.dumps({"hvdc": 1, "widgets": {}}))
    assert "unknown section 'widgets'" in e.value.errors[0]


def test_unchecked_load_keeps_invalid_entries(text):
    d = json.loads(text)
    d["presheaves"]["y1"]["values"]["0"] = []
    with pytest.raises(LoadError):
        loads(json.dumps(d))
    ws = loads(json.dumps(d), check=False)
    assert ws.get("presheaves", "y1").values["0"] == ()


def test_missing_entry_lookup():
    with pytest.raises(KeyError):
        Workspace().get("functors", "f")
    with pytest.raises(KeyError):
        load_bundle("nope")
