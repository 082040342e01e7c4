"""Instance files (format ``brnral-kit/1``) and deterministic JSON output.

An instance file is one JSON object. Sections, all optional except
``version`` and ``gamma``::

    version      "brnral-kit/1"
    mode         "finite-field" | "char-zero"
    gamma        {"group": G, "h": int, "qchar": [...], "frobenius": int, "q": int}
    H            {"group": G, "action": {"σ": permutation}}
    abelianization {"torsion": [...], "map": [[coords] per element of H]}
    M            {"rank": r, "torsion": [...], "action": {"σ": matrix}}
    pairing      "dual" | {"h": int, "table": [["p/q", ...], ...]}
    torf         {"F": G, "fOuter": {"σ": permutation}, "lattice": {...},
                  "M0": int, "z": [{"on": [i, j], "value": [...]}], "n": int, "d": int}
    meta         free-form object

Groups are {"order", "table", "labels"?, "identity"?}. With ``"pairing":
"dual"`` the module M is the twisted dual of H^ab and must be omitted.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import jsonschema

from .abmod import AbelianProjection, EvalPairing, FGAbelianModule, GaloisContext, dual_module
from .brnral import BrnralInstance
from .errors import InvariantError
from .groups import FiniteGroup, GroupAction
from .linalg import identity
from .norms import NormContext
from .torf import TorfExtensionData, TorusLattice, make_torf_data

FORMAT = "brnral-kit/1"
MODES = ("finite-field", "char-zero")


class ParseError(ValueError):
    """Malformed instance file (exit code 2 territory)."""


_int = {"type": "integer"}
_intlist = {"type": "array", "items": _int}
_matrix = {"type": "array", "items": _intlist}
_group = {
    "type": "object",
    "required": ["table"],
    "properties": {"order": _int, "table": _matrix, "identity": _int,
                   "labels": {"type": "array", "items": {"type": "string"}},
                   "name": {"type": "string"}},
}
_keyed = {"type": "object", "patternProperties": {"^[0-9]+$": _intlist}, "additionalProperties": False}
_keyed_matrix = {"type": "object", "patternProperties": {"^[0-9]+$": _matrix},
                 "additionalProperties": False}
_module = {
    "type": "object",
    "properties": {"rank": {"type": "integer", "minimum": 0},
                   "torsion": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                   "action": _keyed_matrix},
    "additionalProperties": False,
}
_cochain2 = {"type": "array", "items": {
    "type": "object", "required": ["on", "value"],
    "properties": {"on": {"type": "array", "items": _int, "minItems": 2, "maxItems": 2},
                   "value": _intlist}}}

SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["version", "gamma"],
    "properties": {
        "version": {"const": FORMAT},
        "mode": {"enum": list(MODES)},
        "gamma": {"type": "object", "required": ["group", "h"],
                  "properties": {"group": _group, "h": {"type": "integer", "minimum": 1},
                                 "qchar": _intlist, "frobenius": _int, "q": _int},
                  "additionalProperties": False},
        "H": {"type": "object", "required": ["group"],
              "properties": {"group": _group, "action": _keyed}, "additionalProperties": False},
        "abelianization": {"type": "object", "required": ["torsion", "map"],
                           "properties": {"torsion": _intlist, "map": _matrix}},
        "M": _module,
        "pairing": {"oneOf": [
            {"const": "dual"},
            {"type": "object", "required": ["table"],
             "properties": {"h": _int,
                            "table": {"type": "array", "items": {
                                "type": "array", "items": {"type": ["string", "integer"]}}}}},
        ]},
        "torf": {"type": "object", "required": ["F", "lattice", "M0"],
                 "properties": {
                     "F": _group, "fOuter": _keyed, "M0": {"type": "integer", "minimum": 1},
                     "n": _int, "d": _int, "z": _cochain2,
                     "lattice": {"type": "object", "required": ["rank"],
                                 "properties": {"rank": {"type": "integer", "minimum": 0},
                                                "gammaAction": _keyed_matrix,
                                                "fAction": _keyed_matrix}}}},
        "meta": {"type": "object"},
    },
}


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def read_json(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return data


def check_schema(data: Any) -> None:
    try:
        jsonschema.validate(data, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ParseError(f"schema violation at {where}: {exc.message}") from None


def _perm_action(actor: FiniteGroup, space: FiniteGroup, keyed: dict | None) -> GroupAction:
    keyed = keyed or {}
    maps = []
    for g in actor:
        m = keyed.get(str(g))
        maps.append(tuple(m) if m is not None else tuple(range(space.order)))
    for k in keyed:
        if int(k) >= actor.order:
            raise InvariantError("action keyed by an unknown actor element", witness={"element": int(k)})
    act = GroupAction(actor, space, tuple(maps))
    act.validate()
    return act


def _keyed_matrices(keyed: dict | None, n: int, r: int) -> tuple:
    keyed = keyed or {}
    for k in keyed:
        if int(k) >= n:
            raise InvariantError("action keyed by an unknown element", witness={"element": int(k)})
    return tuple(keyed.get(str(g), identity(r)) for g in range(n))


class Instance:
    """A parsed and validated instance file."""

    def __init__(self, data: dict):
        check_schema(data)
        self.data = data
        self.mode = data.get("mode")
        self.meta = dict(data.get("meta") or {})
        self.ctx = GaloisContext.from_dict(data["gamma"])

    @classmethod
    def load(cls, path: str | Path) -> "Instance":
        return cls(read_json(path))

    def _need(self, key: str) -> dict:
        if key not in self.data:
            raise ParseError(f"instance has no {key!r} section")
        return self.data[key]

    # --- sections --------------------------------------------------------

    def action(self) -> GroupAction:
        sec = self._need("H")
        H = FiniteGroup.from_dict(sec["group"])
        return _perm_action(self.ctx.gamma, H, sec.get("action"))

    def norm_context(self) -> NormContext:
        act = self.action()
        ab = self.data.get("abelianization")
        if ab is None:
            nc = NormContext.build(self.ctx, act)
        else:
            target = FGAbelianModule(tuple(ab["torsion"]))
            images = tuple(target.reduce(v) for v in ab["map"])
            nc = NormContext.build(self.ctx, act, AbelianProjection(act.space, target, images))
        return nc

    def module(self) -> FGAbelianModule:
        return FGAbelianModule.from_dict(self._need("M"), self.ctx.gamma)

    def brnral(self) -> BrnralInstance:
        nc = self.norm_context()
        pairing = self.data.get("pairing", "dual")
        if pairing == "dual":
            if "M" in self.data:
                raise ParseError("with pairing 'dual' the M section must be omitted")
            M, ev = dual_module(nc.hab, self.ctx)
        else:
            M = self.module()
            ev = EvalPairing.from_dict(pairing, M, nc.hab, self.ctx.h)
        return BrnralInstance(self.ctx, nc, M, ev, self.meta)

    def torf(self) -> TorfExtensionData:
        sec = self._need("torf")
        gamma = self.ctx.gamma
        F = FiniteGroup.from_dict(sec["F"])
        outer = _perm_action(gamma, F, sec.get("fOuter"))
        lat = sec["lattice"]
        r = int(lat["rank"])
        lattice = TorusLattice(r, gamma, F,
                               _keyed_matrices(lat.get("gammaAction"), gamma.order, r),
                               _keyed_matrices(lat.get("fAction"), F.order, r), outer)
        lattice.validate()
        meta = dict(self.meta)
        for key in ("n", "d"):
            if key in sec:
                meta[key] = sec[key]
        data = make_torf_data(self.ctx, lattice, int(sec["M0"]), sec.get("z"), meta)
        data.validate()
        return data


# --- writers -------------------------------------------------------------------

def _keyed_perms(maps, n: int) -> dict:
    return {str(g): list(m) for g, m in enumerate(maps) if tuple(m) != tuple(range(n))}


def _keyed_matrices_out(mats, r: int) -> dict:
    out = {}
    for g, A in enumerate(mats):
        A = [list(row) for row in A]
        if A != identity(r):
            out[str(g)] = A
    return out


def brnral_to_dict(inst: BrnralInstance, mode: str | None = None) -> dict:
    act = inst.nc.action
    out: dict = {
        "version": FORMAT,
        "gamma": inst.ctx.to_dict(),
        "H": {"group": act.space.to_dict(),
              "action": _keyed_perms(act.maps, act.space.order)},
        "abelianization": {"torsion": list(inst.nc.hab.orders),
                           "map": [list(v) for v in inst.nc.abmap.images]},
        "M": inst.M.to_dict(),
        "pairing": {"h": inst.ev.h, "table": inst.ev.to_dict()["table"]},
    }
    if mode:
        out["mode"] = mode
    if inst.meta:
        out["meta"] = inst.meta
    return out


def torf_to_dict(data: TorfExtensionData) -> dict:
    lat = data.lattice
    r = lat.rank
    sec = {
        "F": lat.F.to_dict(),
        "fOuter": _keyed_perms(lat.outer.maps, lat.F.order),
        "lattice": {"rank": r,
                    "gammaAction": _keyed_matrices_out(lat.gamma_action, r),
                    "fAction": _keyed_matrices_out(lat.f_action, r)},
        "M0": data.M0,
        "z": [e for e in data.z.to_list() if any(e["value"])],
    }
    meta = dict(data.meta)
    for key in ("n", "d"):
        if key in meta:
            sec[key] = meta.pop(key)
    out = {"version": FORMAT, "gamma": data.ctx.to_dict(), "torf": sec}
    if meta:
        out["meta"] = meta
    return out


def module_to_dict(ctx: GaloisContext, M: FGAbelianModule, meta: dict | None = None) -> dict:
    out = {"version": FORMAT, "gamma": ctx.to_dict(), "M": M.to_dict()}
    if meta:
        out["meta"] = meta
    return out
