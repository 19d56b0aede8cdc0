import copy
import json

import numpy as np
import pytest

from conftest import DATA_DIR, PHI
from src.data_processing.ingestion import category_from_document, load_category, locate
from src.fusion.data import gauge_transform, global_dimension, vec_group_category
from src.fusion.validation import validate
from src.utils.errors import ParseError, SchemaError, ZeroDimension

BUNDLED = ["vec_z2", "vec_z2_symmetric", "vec_z3", "vec_s3", "fibonacci", "fibonacci_gauge", "semion", "yang_lee"]


@pytest.fixture
def semion_document() -> dict:
    with open(DATA_DIR / "categories" / "semion.json", encoding="utf-8") as f:
        return json.load(f)


def test_load_fibonacci(fibonacci):
    assert fibonacci.rank == 2
    assert fibonacci.ring.labels == ("1", "t")
    assert fibonacci.braided
    assert fibonacci.ring.N[1, 1].tolist() == [1, 1]
    np.testing.assert_allclose(fibonacci.dims, [1.0, PHI])


def test_missing_file_is_parse_error(tmp_path):
    with pytest.raises(ParseError):
        load_category(tmp_path / "nope.json")


def test_malformed_json_is_parse_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{ not json", encoding="utf-8")
    with pytest.raises(ParseError):
        load_category(path)


def test_unknown_label_is_schema_error(semion_document):
    document = copy.deepcopy(semion_document)
    document["fusion"].append(["s", "x", "s", 1])
    with pytest.raises(SchemaError):
        category_from_document(document)


def test_unit_constraint_violation_is_schema_error(semion_document):
    document = copy.deepcopy(semion_document)
    document["fusion"] = [row for row in document["fusion"] if row[:3] != ["1", "s", "s"]]
    with pytest.raises(SchemaError, match="unit constraints"):
        category_from_document(document)


def test_f_entry_outside_fusion_rules_is_schema_error(semion_document):
    document = copy.deepcopy(semion_document)
    document["F"].append({"abc": ["s", "s", "s"], "d": "1", "e": "1", "f": "1", "v": [1.0, 0.0]})
    with pytest.raises(SchemaError):
        category_from_document(document)


def test_duplicate_r_entry_is_schema_error(semion_document):
    document = copy.deepcopy(semion_document)
    document["R"].append(dict(document["R"][0]))
    with pytest.raises(SchemaError, match="duplicate"):
        category_from_document(document)


def test_extra_field_is_schema_error(semion_document):
    document = copy.deepcopy(semion_document)
    document["colour"] = "blue"
    with pytest.raises(SchemaError):
        category_from_document(document)


def test_global_dimension_fibonacci(fibonacci):
    dim_c, lam = global_dimension(fibonacci)
    assert dim_c == pytest.approx(2 + PHI)
    assert lam == pytest.approx(np.sqrt(2 + PHI))


def test_global_dimension_yang_lee_is_galois_conjugate(yang_lee):
    dim_c, lam = global_dimension(yang_lee)
    assert dim_c == pytest.approx(3 - PHI)
    assert lam.real > 0


def test_global_dimension_zero_raises(semion_document):
    document = copy.deepcopy(semion_document)
    document["dims"]["s"] = [0.0, 1.0]
    cat = category_from_document(document)
    with pytest.raises(ZeroDimension):
        global_dimension(cat)


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_categories_validate(name):
    cert = validate(load_category(DATA_DIR / "categories" / f"{name}.json"))
    assert cert.passed, cert.first_failure()


def test_braided_categories_get_hexagon_checks(fibonacci, yang_lee):
    assert validate(fibonacci).check("hexagon").passed
    assert all(c.name != "hexagon" for c in validate(yang_lee).checks)


def test_broken_pentagon_reported():
    cert = validate(load_category(DATA_DIR / "categories" / "broken_fibonacci.json"))
    assert not cert.passed
    assert cert.first_failure().name == "pentagon"


def test_wrong_braiding_fails_hexagon(semion_document):
    document = copy.deepcopy(semion_document)
    document["R"][0]["v"] = [1.0, 0.0]
    cert = validate(category_from_document(document))
    assert not cert.check("hexagon").passed


def test_vec_group_category_is_valid():
    table = np.array([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    cat = vec_group_category(table, inverse=[0, 2, 1])
    assert cat.rank == 3
    assert validate(cat).passed


def test_unitary_gauge_keeps_axioms(fibonacci):
    phase = np.exp(0.7j)
    gauged = gauge_transform(fibonacci, {(1, 1, 1): [phase]})
    assert validate(gauged).passed
    for key, block in fibonacci.F.items():
        np.testing.assert_allclose(np.abs(gauged.F[key]), np.abs(block), atol=1e-12)
    assert not np.allclose(gauged.f_block(1, 1, 1, 1), fibonacci.f_block(1, 1, 1, 1))


def test_category_found_in_data_dir(tmp_path, semion_document):
    folder = tmp_path / "categories"
    folder.mkdir()
    (folder / "mine.json").write_text(json.dumps(semion_document), encoding="utf-8")
    assert locate("mine", tmp_path) == folder / "mine.json"
    assert load_category("mine", data_dir=tmp_path).rank == 2
    assert load_category("mine.json", data_dir=tmp_path).rank == 2
    with pytest.raises(ParseError):
        load_category("mine")
