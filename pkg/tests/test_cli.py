import json

import pytest

from src.cli import EXIT_FAILED, EXIT_INPUT, EXIT_OK, build_parser, effective_settings, main


def category(data_dir, name):
    return str(data_dir / "categories" / f"{name}.json")


def test_validate_ok(settings, data_dir, capsys):
    assert main(["validate", category(data_dir, "fibonacci")], settings=settings) == EXIT_OK
    assert "RESULT: PASSED" in capsys.readouterr().out


def test_validate_failure_exit_code(settings, data_dir, capsys):
    assert main(["validate", category(data_dir, "broken_fibonacci")], settings=settings) == EXIT_FAILED
    assert "FAILED" in capsys.readouterr().out


def test_missing_input_exit_code(settings, tmp_path, capsys):
    assert main(["double", str(tmp_path / "none.json")], settings=settings) == EXIT_INPUT
    assert "input error: ParseError" in capsys.readouterr().err


def test_group_needs_exactly_one_source(settings, data_dir):
    assert main(["group-double"], settings=settings) == EXIT_INPUT
    group = str(data_dir / "groups" / "z2.json")
    assert main(["group-double", group, "--cyclic", "2"], settings=settings) == EXIT_INPUT


def test_group_double_shorthand(settings, capsys):
    assert main(["group-double", "--cyclic", "2", "--no-timings"], settings=settings) == EXIT_OK
    assert "RESULT: PASSED" in capsys.readouterr().out


def test_json_report_is_reproducible(settings, data_dir, tmp_path):
    first, second = tmp_path / "a" / "report.json", tmp_path / "b" / "report.json"
    for path in (first, second):
        code = main(["double", category(data_dir, "vec_z2"), "--no-timings", "--json", str(path)], settings=settings)
        assert code == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    document = json.loads(first.read_text(encoding="utf-8"))
    assert document["schema_version"] == "1"
    assert document["command"] == "double"
    assert document["timings"] is None
    assert len(document["modular_data"]["S"]) == 4


def test_compare_command(settings, data_dir, tmp_path):
    path = tmp_path / "compare.json"
    code = main(["compare", category(data_dir, "vec_z2"), "--cyclic", "2", "--json", str(path)], settings=settings)
    assert code == EXIT_OK
    document = json.loads(path.read_text(encoding="utf-8"))
    assert document["passed"] is True
    assert document["timings"]


def test_overrides(settings):
    args = build_parser().parse_args(["validate", "x.json", "--tolerance", "1e-6", "--seed", "42"])
    effective = effective_settings(args, settings)
    assert effective.tolerance == 1e-6
    assert effective.seed == 42
    assert effective.max_split_attempts == settings.max_split_attempts


def test_unknown_command_exits():
    with pytest.raises(SystemExit) as info:
        build_parser().parse_args(["explode"])
    assert info.value.code == 2


def test_bundled_category_by_name(settings, capsys):
    assert main(["validate", "semion"], settings=settings) == EXIT_OK
