from __future__ import annotations

import json

import pytest

from endodyn.groups import GroupError, HomomorphismViolation, WellDefinednessViolation, builtin_table_group
from endodyn.serialize import SpecError, dumps, fdg_from_dict, fdg_to_dict, load_fdg


def test_round_trips():
    for spec in (
        {"type": "cyclic", "n": 12, "a": 4},
        {"type": "abelian", "orders": [4, 2], "matrix": [[0, 2], [0, 0]]},
    ):
        assert fdg_to_dict(fdg_from_dict(spec)) == spec
    S3 = builtin_table_group("S3")
    spec = {"type": "table", "cayley": S3.table.tolist(), "map": [0] * 6}
    assert fdg_to_dict(fdg_from_dict(spec)) == spec


def test_builtin_table_shortcut():
    F = fdg_from_dict({"type": "table", "builtin": "Q8", "map": list(range(8))})
    assert F.order == 8 and F.succ.tolist() == list(range(8))


def test_cyclic_stretch_is_reduced():
    assert fdg_to_dict(fdg_from_dict({"type": "cyclic", "n": 5, "a": -1})) == {"type": "cyclic", "n": 5, "a": 4}


@pytest.mark.parametrize(
    "spec, error",
    [
        ({"n": 3}, SpecError),
        ({"type": "cyclic", "n": 3}, SpecError),
        ({"type": "cyclic", "n": 0, "a": 1}, SpecError),
        ({"type": "mystery"}, SpecError),
        ({"type": "abelian", "orders": [4, 2], "matrix": [[0, 1], [0, 0]]}, WellDefinednessViolation),
        ({"type": "abelian", "orders": [4, 2], "matrix": [[1]]}, GroupError),
        ({"type": "table", "builtin": "S3", "map": [0, 1, 2, 0, 0, 1]}, HomomorphismViolation),
        ({"type": "table", "cayley": [[1, 0], [0, 1]], "map": [0, 1]}, SpecError),
        ({"type": "table", "builtin": "S3", "map": [0, 1]}, GroupError),
    ],
)
def test_invalid_specs(spec, error):
    with pytest.raises(error):
        fdg_from_dict(spec)


def test_load_reports_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(SpecError, match="broken.json"):
        load_fdg(path)


def test_dumps_is_sorted_and_stable():
    text = dumps({"b": 1, "a": [1, 2]})
    assert text == json.dumps({"a": [1, 2], "b": 1}, indent=2) + "\n"
