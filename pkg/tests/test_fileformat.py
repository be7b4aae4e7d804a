import json

import pytest
from hypothesis import given, strategies as st

from strategies import matrices
from hopfq.catalog import BUNDLES, bundled_path, build
from hopfq.exactlin import zero
from hopfq.fileformat import InputError, decode_matrix, encode_matrix, load, parse, serialize

CHEAP = ["kz2", "kz2x2", "groupoid", "groupoid_z2_z3", "loop7_plus_k", "projection"]


@given(matrices(st.integers(1, 4), st.integers(1, 4)))
def test_matrix_roundtrip(m):
    enc = encode_matrix(m)
    assert decode_matrix(json.loads(json.dumps(enc)), "m") == m


@pytest.mark.parametrize("shape", [(0, 0), (3, 0), (0, 2)])
def test_empty_matrices_use_shape_form(shape):
    enc = encode_matrix(zero(*shape))
    assert enc == {"shape": list(shape)}
    assert decode_matrix(enc, "m") == zero(*shape)


@pytest.mark.parametrize("bad,where", [
    ([[0.5]], "m[0][0]"),
    ([[True]], "m[0][0]"),
    ([["x"]], "m[0][0]"),
    ([["1/0"]], "m[0][0]"),
    ([[1, 2], [3]], "m[1]"),
    ([], "m"),
    ({"shape": [2]}, "m"),
])
def test_matrix_errors_name_the_entry(bad, where):
    with pytest.raises(InputError) as exc:
        decode_matrix(bad, "m")
    assert exc.value.path == where


def test_rationals_written_as_strings():
    m = decode_matrix([["−3/7", "2/4", 5]], "m")
    assert encode_matrix(m) == [["-3/7", "1/2", 5]]


def test_bundle_list_is_complete():
    assert set(BUNDLES) == {p.stem for p in bundled_path("kz2").parent.glob("*.struct")}


@pytest.mark.parametrize("name", CHEAP)
def test_bundled_file_matches_builder(name):
    doc = load(bundled_path(name))
    assert doc == build(name)
    assert parse(serialize(doc)) == doc


@pytest.mark.extended
@pytest.mark.parametrize("name", sorted(set(BUNDLES) - set(CHEAP)))
def test_large_bundled_files_match_builder(name):
    doc = load(bundled_path(name))
    assert doc == build(name) == parse(serialize(doc))


def test_serialized_rows_one_per_line():
    text = serialize(load(bundled_path("kz2")))
    assert "        [1,0,0,1],\n" in text


def test_live_objects_resolved():
    doc = load(bundled_path("groupoid"))
    H = doc.whq["H"]
    assert H.dim == 4
    A = doc.anchor["h"]
    assert A.source is H and A.target is doc.comodule_magma["B"]
    assert [M.name for M in doc.modules_over("h")] == ["M"]
    assert doc.max_dim() == 4


def text_of(name):
    return bundled_path(name).read_text()


def test_json_syntax_error_located():
    text = text_of("kz2").replace('"mu": [', '"mu" [', 1)
    with pytest.raises(InputError) as exc:
        parse(text)
    assert exc.value.line == 12 and exc.value.column is not None


def test_unknown_reference_located():
    text = text_of("kz2").replace('"over": "H"', '"over": "Q"', 1)
    with pytest.raises(InputError) as exc:
        parse(text)
    err = exc.value
    assert "unknown" in err.message and "'Q'" in err.message
    assert err.path.endswith(".over")
    assert text.splitlines()[err.line - 1].strip().startswith('"over"')


def test_shape_mismatch_is_input_error():
    data = json.loads(text_of("kz2"))
    data["whq"]["H"]["lam"] = [[1, 0, 0], [0, 1, 0]]
    with pytest.raises(InputError) as exc:
        parse(json.dumps(data))
    assert "lam" in exc.value.path


@pytest.mark.parametrize("patch", [
    lambda d: d.update(format="other"),
    lambda d: d.update(version=2),
    lambda d: d.update(extra={}),
    lambda d: d.update(whq=[]),
    lambda d: d["modules"]["M"].pop("rho"),
])
def test_malformed_documents(patch):
    data = json.loads(text_of("kz2"))
    patch(data)
    with pytest.raises(InputError):
        parse(json.dumps(data))


def test_missing_file():
    with pytest.raises(InputError, match="cannot read"):
        load("/nonexistent/file.struct")


def test_builder_sections():
    doc = parse(json.dumps({
        "format": "hopfq-structure", "version": 1,
        "group_table": {"Z3": {"table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]]}},
        "groupoid": {"P2": {"pair": 2}},
        "cochain": {"Q": {"cayley_dickson": 2}},
    }))
    dims = {k: H.dim for k, H in doc.whq.items()}
    assert dims["Z3"] == 3 and dims["P2"] == 4 and dims["Q"] == 8
