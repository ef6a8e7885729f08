"""Reading and writing group/endomorphism description files (JSON)."""

from __future__ import annotations

import json
from pathlib import Path

from .dynamics import Fdg
from .groups import (
    AbelianGroup,
    GroupError,
    MatrixEndomorphism,
    TableEndomorphism,
    TableGroup,
    builtin_table_group,
    make_cyclic,
    stretch,
)


class SpecError(GroupError):
    """Malformed description file."""


def _require(data: dict, *keys: str) -> None:
    missing = [k for k in keys if k not in data]
    if missing:
        raise SpecError(f"missing field(s): {', '.join(missing)}")


def fdg_from_dict(data: dict) -> Fdg:
    """Build an FDG from one of the three description forms.

    ``{"type": "cyclic", "n": .., "a": ..}``,
    ``{"type": "abelian", "orders": [..], "matrix": [[..]]}`` or
    ``{"type": "table", "cayley": [[..]], "map": [..]}`` (element 0 is the
    identity).  ``"builtin": "S3"`` may replace ``"cayley"``.
    """
    if not isinstance(data, dict) or "type" not in data:
        raise SpecError("description must be an object with a 'type' field")
    kind = data["type"]
    if kind == "cyclic":
        _require(data, "n", "a")
        n, a = int(data["n"]), int(data["a"])
        if n < 1:
            raise SpecError(f"n must be positive, got {n}")
        return Fdg(make_cyclic(n), stretch(n, a))
    if kind == "abelian":
        _require(data, "orders", "matrix")
        group = AbelianGroup(data["orders"])
        return Fdg(group, MatrixEndomorphism(group, data["matrix"]))
    if kind == "table":
        _require(data, "map")
        if "builtin" in data:
            group = builtin_table_group(data["builtin"])
        else:
            _require(data, "cayley")
            group = TableGroup(data["cayley"])
            if group.identity != 0:
                raise SpecError(f"element 0 must be the identity, found identity {group.identity}")
        return Fdg(group, TableEndomorphism(group, data["map"]))
    raise SpecError(f"unknown type {kind!r}")


def load_fdg(path: str | Path) -> Fdg:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON ({exc})") from exc
    return fdg_from_dict(data)


def fdg_to_dict(F: Fdg) -> dict:
    group = F.group
    if isinstance(group, AbelianGroup):
        matrix = F.endo.matrix.tolist()
        if group.rank == 1:
            return {"type": "cyclic", "n": group.order, "a": matrix[0][0]}
        return {"type": "abelian", "orders": list(group.orders), "matrix": matrix}
    if isinstance(group, TableGroup):
        return {"type": "table", "cayley": group.table.tolist(), "map": F.succ.tolist()}
    raise SpecError(f"no file form for carrier {group!r}")


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
