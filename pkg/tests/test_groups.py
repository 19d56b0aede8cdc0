import numpy as np
import pytest

from src.data_processing.ingestion import load_group_file
from src.fusion.validation import validate
from src.hopf.groups import (
    cyclic_group,
    find_isomorphism,
    group_category,
    group_from_file,
    group_from_table,
    group_of_category,
    symmetric_group,
)
from src.utils.errors import InvalidGroup, NotAGroupCategory, SchemaError


def test_cyclic_group():
    z4 = cyclic_group(4)
    assert z4.order == 4
    assert z4.inverse == (0, 3, 2, 1)
    assert [z4.element_order(g) for g in range(4)] == [1, 4, 2, 4]


def test_symmetric_group_is_non_abelian():
    s3 = symmetric_group(3)
    assert s3.order == 6
    assert s3.labels[0] == "012"
    assert not np.array_equal(s3.table, s3.table.T)
    assert sorted(s3.element_order(g) for g in range(6)) == [1, 2, 2, 2, 3, 3]


def test_conjugation_fixes_identity():
    s3 = symmetric_group(3)
    assert all(s3.conj(x, s3.identity) == s3.identity for x in range(6))


@pytest.mark.parametrize("table, message", [
    ([[0, 1], [1, 1]], "inverse"),
    ([[0, 1], [2, 0]], "0..n-1"),
    ([[0, 0], [0, 0]], "identity"),
    ([], "non-empty"),
])
def test_invalid_tables(table, message):
    with pytest.raises(InvalidGroup, match=message):
        group_from_table(table)


def test_non_associative_table():
    # a Latin square with identity 0 that is not a group
    table = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(InvalidGroup, match="associative"):
        group_from_table(table)


def test_group_files(data_dir):
    assert group_from_file(load_group_file(data_dir / "groups" / "z3.json")).order == 3
    assert group_from_file(load_group_file(data_dir / "groups" / "s3.json")).name == "S3"


def test_group_file_needs_exactly_one_form(tmp_path):
    path = tmp_path / "g.json"
    path.write_text('{"cyclic": 2, "symmetric": 2}', encoding="utf-8")
    with pytest.raises(SchemaError):
        load_group_file(path)


def test_group_file_rejects_large_symmetric(tmp_path):
    path = tmp_path / "g.json"
    path.write_text('{"symmetric": 6}', encoding="utf-8")
    with pytest.raises(SchemaError):
        load_group_file(path)


def test_group_category_validates():
    assert validate(group_category(symmetric_group(3))).passed


def test_find_isomorphism_between_relabelled_tables():
    z3 = cyclic_group(3).table
    # Z3 relabelled so that the identity sits at index 1
    swapped = np.array([[2, 0, 1], [0, 1, 2], [1, 2, 0]])
    mapping = find_isomorphism(z3, swapped)
    assert mapping is not None
    for a in range(3):
        for b in range(3):
            assert mapping[z3[a, b]] == swapped[mapping[a], mapping[b]]
    assert find_isomorphism(cyclic_group(4).table, np.asarray(group_from_table(
        [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]).table)) is None


def test_group_of_category(vec_s3, vec_z3):
    mapping = group_of_category(vec_s3, symmetric_group(3))
    assert sorted(mapping) == list(range(6))
    assert mapping[0] == 0
    with pytest.raises(NotAGroupCategory):
        group_of_category(vec_z3, symmetric_group(3))


def test_non_group_categories_rejected(fibonacci, semion):
    with pytest.raises(NotAGroupCategory, match="non-invertible"):
        group_of_category(fibonacci, cyclic_group(2))
    with pytest.raises(NotAGroupCategory, match="associator"):
        group_of_category(semion, cyclic_group(2))
