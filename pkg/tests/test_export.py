"""
Tests for JSON readers/writers and YAML run configuration.
"""

import json
from fractions import Fraction

import pytest

from anick.errors import InputError
from anick.export import (
    FractionEncoder, dump_presentation, export_resolution, load_bimodule, load_presentation,
    load_resolution, parse_coefficient, resolution_to_dict,
)
from anick.hochschild import is_zero
from anick.resolution import build_resolution
from anick.utils import load_config


def test_fixture_matches_builtin_w1(fixtures_dir, w1):
    pres = load_presentation(fixtures_dir / "w1.json")
    assert pres.digest() == w1.digest()
    assert pres.idempotent == "e"
    assert pres.name == "W1"


def test_dump_and_reload(tmp_path, h3):
    path = tmp_path / "h3.json"
    dump_presentation(h3, path)
    assert load_presentation(path).digest() == h3.digest()


def test_fractions_are_strings():
    assert json.dumps({"c": Fraction(3, 2)}, cls=FractionEncoder) == '{"c": "3/2"}'
    assert json.dumps([Fraction(-4)], cls=FractionEncoder) == '["-4"]'


def test_parse_coefficient():
    assert parse_coefficient("3/2") == Fraction(3, 2)
    assert parse_coefficient(2) == 2
    with pytest.raises(InputError):
        parse_coefficient(1.5)
    with pytest.raises(InputError):
        parse_coefficient("1/0")


def test_resolution_export_format(tmp_path, dual):
    res = build_resolution(dual, 2)
    path = tmp_path / "res.json"
    export_resolution(res, path)
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["format"] == "anick-resolution/1"
    assert data["presentation_hash"] == dual.digest()
    first = data["slices"][0]
    assert first["basis"] == ["[x]"]
    assert {"coef": "1", "left": "x", "chain": "[]", "right": ""} in first["differential"]["[x]"]
    assert data == json.loads(json.dumps(resolution_to_dict(res), cls=FractionEncoder))


def test_resolution_reload(tmp_path, w1):
    res = build_resolution(w1, 3)
    path = tmp_path / "w1_res.json"
    export_resolution(res, path)
    assert load_resolution(path, w1) == res


def test_stale_resolution_rejected(tmp_path, dual, trunc3):
    path = tmp_path / "dual_res.json"
    export_resolution(build_resolution(dual, 2), path)
    with pytest.raises(InputError, match="stale"):
        load_resolution(path, trunc3)


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(InputError):
        load_presentation(tmp_path / "absent.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{ not json", encoding="utf-8")
    with pytest.raises(InputError):
        load_presentation(broken)
    no_generators = tmp_path / "empty.json"
    no_generators.write_text('{"relations": []}', encoding="utf-8")
    with pytest.raises(InputError):
        load_presentation(no_generators)


def test_bimodule_defaults_to_zero_action(fixtures_dir, w1):
    M = load_bimodule(fixtures_dir / "triv2.json", w1)
    assert M.dim == 2
    assert all(is_zero(M.left[g]) and is_zero(M.right[g]) for g in w1.generator_names)


def test_bimodule_validation(tmp_path, dual):
    unknown = tmp_path / "unknown.json"
    unknown.write_text('{"dim": 1, "left": {"y": [["0"]]}}', encoding="utf-8")
    with pytest.raises(InputError):
        load_bimodule(unknown, dual)
    shape = tmp_path / "shape.json"
    shape.write_text('{"dim": 2, "left": {"x": [["0"]]}}', encoding="utf-8")
    with pytest.raises(InputError):
        load_bimodule(shape, dual)


def test_load_config(tmp_path):
    assert load_config(None) == {}
    path = tmp_path / "run.yaml"
    path.write_text("workers: 2\nmemo: false\noracle_cap: 5000\n", encoding="utf-8")
    assert load_config(str(path)) == {"workers": 2, "memo": False, "oracle_cap": 5000}


@pytest.mark.parametrize("body", [
    "colour: blue\n",
    "workers: 0\n",
    "workers: true\n",
    "memo: yes please\n",
    "- just\n- a list\n",
    "workers: [unclosed\n",
])
def test_bad_config_rejected(tmp_path, body):
    path = tmp_path / "run.yaml"
    path.write_text(body, encoding="utf-8")
    with pytest.raises(InputError):
        load_config(str(path))


def test_missing_config(tmp_path):
    with pytest.raises(InputError):
        load_config(str(tmp_path / "nope.yaml"))
