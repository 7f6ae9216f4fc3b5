"""JSON parsing and DOT emission for posets, lattices, spaces and groups."""

from __future__ import annotations

import json
from typing import Any

from .dlat import DistLattice, from_downsets, from_order
from .errors import InvalidInput
from .oag import ArchSemilattice, OrderedAbelianGroup, default_bound
from .order import FinPoset, UpperSemilattice, fmt_label, validate_poset
from .spectral import SpectralSpace, space_from_opens


def _require(obj: Any, key: str, kind: type | tuple, what: str):
    if not isinstance(obj, dict) or key not in obj:
        raise InvalidInput(f"{what} JSON needs a {key!r} field")
    value = obj[key]
    if not isinstance(value, kind):
        raise InvalidInput(f"{what} field {key!r} has the wrong type")
    return value


def _label(x: Any) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return str(x)
    raise InvalidInput(f"labels must be strings or numbers, got {x!r}")


def _pairs(raw: Any, what: str) -> list[tuple[str, str]]:
    if not isinstance(raw, list):
        raise InvalidInput(f"{what} 'leq' must be a list of pairs")
    out = []
    for p in raw:
        if not isinstance(p, list) or len(p) != 2:
            raise InvalidInput(f"{what} 'leq' entries must be pairs, got {p!r}")
        out.append((_label(p[0]), _label(p[1])))
    return out


def poset_from_json(obj: Any) -> FinPoset:
    elements = [_label(x) for x in _require(obj, "elements", list, "poset")]
    return validate_poset(elements, _pairs(obj.get("leq", []), "poset"))


def lattice_from_json(obj: Any) -> DistLattice:
    if isinstance(obj, dict) and "downsets_of" in obj:
        return from_downsets(poset_from_json(obj["downsets_of"]))
    elements = [_label(x) for x in _require(obj, "elements", list, "lattice")]
    return from_order(elements, _pairs(obj.get("leq", []), "lattice"))


def space_from_json(obj: Any) -> SpectralSpace:
    points = [_label(x) for x in _require(obj, "points", list, "space")]
    opens = _require(obj, "opens", list, "space")
    if not all(isinstance(U, list) for U in opens):
        raise InvalidInput("space 'opens' must be a list of lists")
    return space_from_opens(points, [[_label(p) for p in U] for U in opens])


def _int_vector(x: Any) -> tuple | int:
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    if isinstance(x, list) and all(isinstance(c, int) and not isinstance(c, bool) for c in x):
        return tuple(x)
    raise InvalidInput(f"group elements must be integers or integer lists, got {x!r}")


def group_from_json(obj: Any, bound: int | None = None) -> OrderedAbelianGroup:
    rank = _require(obj, "free_rank", int, "group")
    torsion = obj.get("torsion", [])
    if not isinstance(torsion, list) or not all(isinstance(m, int) for m in torsion):
        raise InvalidInput("group 'torsion' must be a list of integers")
    cone = obj.get("cone", [])
    if not isinstance(cone, list):
        raise InvalidInput("group 'cone' must be a list")
    if bound is None:
        bound = obj.get("bound", default_bound())
    if not isinstance(bound, int) or isinstance(bound, bool):
        raise InvalidInput("group 'bound' must be an integer")
    return OrderedAbelianGroup(rank, tuple(torsion), tuple(_int_vector(g) for g in cone), bound)


def window_from_json(raw: Any, A: OrderedAbelianGroup) -> list:
    if isinstance(raw, str):
        try:
            raw = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"window is not valid JSON: {exc}") from None
    if not isinstance(raw, list):
        raise InvalidInput("window must be a JSON list")
    return [A.element(_int_vector(x)) for x in raw]


def semilattice_to_json(U: UpperSemilattice) -> dict:
    return U.poset.to_json()


def arch_to_json(W: ArchSemilattice) -> dict:
    return {
        "classes": list(W.labels),
        "leq": [[a, b] for a, b in W.semilattice.poset.covers()],
        "window": [W.group.fmt(a) for a in W.window],
    }


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True)


# -- DOT ----------------------------------------------------------------------------------


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(obj: Any, name: str = "G") -> str:
    """Hasse diagram as a Graphviz digraph, edges pointing upward."""
    comment = None
    if isinstance(obj, SpectralSpace):
        n = len(obj)
        comment = f"{n} point{'' if n == 1 else 's'}, {len(obj.opens)} open sets; an edge from p to q means p lies in the closure of q"
        P = obj.specialization
    elif isinstance(obj, DistLattice):
        P = obj.as_poset()
    elif isinstance(obj, ArchSemilattice):
        P = obj.semilattice.poset
    elif isinstance(obj, UpperSemilattice):
        P = obj.poset
    elif isinstance(obj, FinPoset):
        P = obj
    else:
        raise TypeError(f"cannot draw {type(obj).__name__}")
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    if comment:
        lines.append(f"  label={_quote(comment)};")
    for x in P.elements:
        lines.append(f"  {_quote(fmt_label(x))};")
    for a, b in P.covers():
        lines.append(f"  {_quote(fmt_label(a))} -> {_quote(fmt_label(b))};")
    lines.append("}")
    return "\n".join(lines) + "\n"
