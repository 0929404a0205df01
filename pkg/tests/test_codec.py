"""JSON decoding, schema errors and canonical dumps."""
import json
from fractions import Fraction

import pytest

from conifold import codec
from conifold.errors import InvalidZigZagError, SchemaError
from conifold.qlinalg import Matrix
from conifold.zigzag import mu_corrected


def test_scalar_strings_are_lowest_terms():
    m = codec.matrix_from_json([["3/6", 2], ["-4/2", "0"]], 2, 2, "$.m")
    assert m == Matrix.from_rows([[Fraction(1, 2), 2], [-2, 0]])
    assert codec.matrix_to_json(m) == [["1/2", "2/1"], ["-2/1", "0/1"]]


def test_zero_denominator_is_a_schema_error():
    with pytest.raises(SchemaError) as info:
        codec.matrix_from_json([["1/0"]], 1, 1, "$.beta")
    assert info.value.path == "$.beta"


def test_matrix_shape_is_checked():
    with pytest.raises(SchemaError, match="1x2"):
        codec.matrix_from_json([[1]], 1, 2, "$.alpha")


def test_missing_matrix_is_zero():
    assert codec.matrix_from_json(None, 2, 3, "$") == Matrix.zeros(2, 3)


# -----------------------------------------------------------------------
# Schema violations
# -----------------------------------------------------------------------

def test_negative_dimension_names_field():
    with pytest.raises(SchemaError) as info:
        codec.raw_zigzag_from_json({"hm": -1, "h0": 0, "a": 0, "b": 0})
    assert info.value.path == "$.hm"


def test_unknown_field_is_rejected():
    with pytest.raises(SchemaError):
        codec.raw_zigzag_from_json({"hm": 0, "h0": 0, "a": 0, "b": 0, "delta": []})


def test_invalid_tuple_decodes_raw_but_not_checked():
    data = {"hm": 1, "h0": 1, "a": 1, "b": 1,
            "alpha": [[0]], "beta": [[1]], "gamma": [[1]]}
    raw = codec.raw_zigzag_from_json(data)
    assert raw.beta == Matrix.from_rows([[1]])
    with pytest.raises(InvalidZigZagError):
        codec.zigzag_from_json(data)


def test_les_degrees_must_be_counts():
    with pytest.raises(SchemaError):
        codec.les_witness_from_json({"h_phi": {"3": -1}})
    w = codec.les_witness_from_json({"h_phi": {"3": 1}})
    assert w.h_phi == {3: 1}


def test_invalid_json_text(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{", encoding="utf-8")
    with pytest.raises(SchemaError, match="invalid JSON"):
        codec.load_json(path)


# -----------------------------------------------------------------------
# Structured inputs
# -----------------------------------------------------------------------

def test_presentation_json_matches_library_object(inputs_dir):
    e = codec.presentation_from_json(codec.load_json(inputs_dir / "presentation_corrected.json"))
    assert e == mu_corrected(1)[1]
    assert codec.presentation_to_json(e)["class_params"] == ["1/1"]


def test_degeneration_cycles_beside_lattice():
    lattice = {"rank": 2, "gram": [[0, 1], [-1, 0]], "symmetry": "skew"}
    inside = codec.degeneration_from_json(
        {"strata": [{"label": "p1"}], "lattice": dict(lattice, cycles=[[1, 0]])})
    beside = codec.degeneration_from_json(
        {"strata": [{"label": "p1"}], "lattice": lattice, "cycles": [[1, 0]]})
    assert inside == beside
    assert inside.lattice_config.cycles == ((1, 0),)


def test_lattice_json_reencodes_input(inputs_dir):
    data = codec.load_json(inputs_dir / "lattice_two_nodes.json")
    assert codec.lattice_to_json(codec.vanishing_config_from_json(data)) == data


def test_node_with_wrong_milnor_rank_names_stratum():
    with pytest.raises(SchemaError) as info:
        codec.degeneration_from_json({"strata": [{"label": "p1", "milnor_rank": 2}]})
    assert info.value.path == "$.strata[0]"


def test_cycle_count_mismatch_points_at_cycles():
    lattice = {"rank": 2, "gram": [[0, 1], [-1, 0]], "symmetry": "skew"}
    with pytest.raises(SchemaError) as info:
        codec.degeneration_from_json(
            {"strata": [{"label": "p1"}, {"label": "p2"}], "lattice": lattice, "cycles": [[1, 0]]})
    assert info.value.path == "$.cycles"
    assert "Milnor rank 2" in str(info.value)


def test_lattice_symmetry_mismatch():
    with pytest.raises(SchemaError) as info:
        codec.vanishing_config_from_json({"rank": 2, "gram": [[0, 1], [1, 0]], "symmetry": "skew"})
    assert info.value.path == "$.gram"


def test_canonical_dumps_is_sorted_and_compact():
    assert codec.canonical_dumps({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'
    payload = codec.zigzag_to_json(mu_corrected(1)[0])
    assert json.loads(codec.canonical_dumps(payload)) == payload
