"""JSON structure files: explicit matrices plus builder sections, resolved into live objects.

A file is a JSON object. Matrices are 2-D arrays whose entries are integers or
"p/q" strings (floats are rejected); ``{"shape": [r, c]}`` denotes the zero
matrix and is the only way to write a matrix with no rows or no columns.

Each section maps names to entries. Names live in one namespace per kind:

* ``whq``: explicit ``eta mu eps delta lam``
* ``group_table`` / ``loop_table``: ``table`` (and optional ``identity``) built
  into a group or loop algebra
* ``groupoid``: ``pair: k``, ``groups: [table, ...]`` or an explicit table
* ``cochain``: ``group`` table and ``F`` (±1 entries), built into the loop algebra of
  the sign loop; or ``cayley_dickson: k``
* ``comodule_magma``: ``over`` plus ``eta mu rho``, or ``regular: H``, or
  ``opposite: H`` (which also defines an anchor of the same name)
* ``smash``: ``A`` and ``H`` (whq names) and ``action``; defines a comodule magma
  and an anchor of the same name
* ``anchor``: ``source target h``
* ``modules``: ``anchor`` plus ``phi rho``, or ``regular: true``
* ``right_modules``: ``anchor`` plus ``psi``

Explicit entries are loaded without validation so the checkers can report on
them; builder entries validate as they are built.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .comodule import AnchorMorphism, ComoduleMagma
from .constructions import (
    Cochain2,
    GroupoidTable,
    MulTable,
    TableError,
    cayley_dickson_cochain,
    group_algebra,
    groupoid_algebra,
    groupoid_union,
    loop_algebra,
    opposite_comodule_magma,
    pair_groupoid,
    sign_loop,
    smash_product,
)
from .exactlin import DimensionError, Mat, NotIdempotentError, zero
from .functors import RightModule
from .hopfmod import StrongHopfModule
from .structures import WeakHopfQuasigroup

FORMAT = "hopfq-structure"
VERSION = 1

SECTIONS = (
    "group_table", "loop_table", "groupoid", "cochain", "whq",
    "comodule_magma", "smash", "anchor", "modules", "right_modules",
)
_WHQ_MAPS = ("eta", "mu", "eps", "delta", "lam")

__all__ = [
    "InputError",
    "StructureFile",
    "encode_matrix",
    "decode_matrix",
    "parse",
    "load",
    "serialize",
    "dump",
    "FORMAT",
    "VERSION",
]


class InputError(ValueError):
    """The file cannot be interpreted: syntax, unresolved names or inconsistent shapes."""

    def __init__(self, message: str, path: str = "", line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}, column {column}: "
        if path:
            where += f"at {path}: "
        super().__init__(where + message)
        self.message = message
        self.path = path
        self.line = line
        self.column = column

    def to_dict(self) -> dict:
        return {"message": self.message, "path": self.path, "line": self.line, "column": self.column}


def encode_matrix(m: Mat) -> Any:
    if m.rows == 0 or m.cols == 0:
        return {"shape": [m.rows, m.cols]}
    out = []
    for row in m.tolist():
        out.append([int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}" for x in row])
    return out


def decode_matrix(value: Any, path: str) -> Mat:
    if isinstance(value, dict):
        shape = value.get("shape")
        if set(value) != {"shape"} or not (isinstance(shape, list) and len(shape) == 2
                                          and all(isinstance(v, int) and v >= 0 for v in shape)):
            raise InputError('object form of a matrix must be {"shape": [rows, cols]}', path)
        return zero(shape[0], shape[1])
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise InputError("matrix must be a nonempty 2-D array or a shape object", path)
    width = len(value[0])
    if width == 0:
        raise InputError("use the shape form for a matrix with no columns", path)
    rows = []
    for i, r in enumerate(value):
        if len(r) != width:
            raise InputError(f"row has {len(r)} entries, expected {width}", f"{path}[{i}]")
        row = []
        for j, x in enumerate(r):
            if isinstance(x, bool) or not isinstance(x, (int, str)):
                raise InputError(f"entry {x!r} is not an integer or a 'p/q' string", f"{path}[{i}][{j}]")
            try:
                row.append(Fraction(x.strip().replace("−", "-")) if isinstance(x, str) else Fraction(x))
            except (ValueError, ZeroDivisionError):
                raise InputError(f"cannot read {x!r} as a rational", f"{path}[{i}][{j}]") from None
        rows.append(row)
    return Mat.from_rows(rows)


def _shape_check(m: Mat, shape: tuple[int, int], path: str) -> Mat:
    if m.shape != shape:
        raise InputError(f"expected shape {list(shape)}, got {list(m.shape)}", path)
    return m


def _table(value: Any, path: str) -> MulTable:
    if isinstance(value, dict):
        tbl, ident = value.get("table"), value.get("identity", 0)
    else:
        tbl, ident = value, 0
    if not isinstance(tbl, list) or not all(isinstance(r, list) for r in tbl):
        raise InputError("multiplication table must be a 2-D integer array", path)
    if any(isinstance(v, bool) or not isinstance(v, int) for r in tbl for v in r):
        raise InputError("multiplication table entries must be integers", path)
    if not isinstance(ident, int):
        raise InputError("identity must be an integer", path)
    # TableError from MulTable is an axiom failure, not an input error; let it through
    return MulTable(len(tbl), tuple(map(tuple, tbl)), ident)


@dataclass
class StructureFile:
    """A parsed document: canonical section data plus the objects it resolves to."""

    name: str = ""
    description: str = ""
    sections: dict[str, dict[str, dict]] = field(default_factory=dict)
    whq: dict[str, WeakHopfQuasigroup] = field(default_factory=dict, compare=False)
    comodule_magma: dict[str, ComoduleMagma] = field(default_factory=dict, compare=False)
    anchor: dict[str, AnchorMorphism] = field(default_factory=dict, compare=False)
    modules: dict[str, StrongHopfModule] = field(default_factory=dict, compare=False)
    right_modules: dict[str, RightModule] = field(default_factory=dict, compare=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StructureFile):
            return NotImplemented
        return (self.name, self.description) == (other.name, other.description) and \
            _canon(self.sections) == _canon(other.sections)

    def max_dim(self) -> int:
        dims = [H.dim for H in self.whq.values()] + [B.dim for B in self.comodule_magma.values()]
        dims += [M.dim for M in self.modules.values()] + [N.dim for N in self.right_modules.values()]
        return max(dims, default=0)

    def modules_over(self, anchor_name: str) -> list[StrongHopfModule]:
        return [M for k, M in self.modules.items() if self.sections["modules"][k]["anchor"] == anchor_name]

    def right_modules_over(self, anchor_name: str) -> list[RightModule]:
        return [N for k, N in self.right_modules.items()
                if self.sections["right_modules"][k]["anchor"] == anchor_name]

    # building documents from live objects

    def add_whq(self, name: str, H: WeakHopfQuasigroup) -> None:
        self.sections.setdefault("whq", {})[name] = {k: getattr(H, k) for k in _WHQ_MAPS}
        H.name = name
        self.whq[name] = H

    def add_builder(self, section: str, name: str, params: dict) -> None:
        self.sections.setdefault(section, {})[name] = params

    def add_comodule_magma(self, name: str, B: ComoduleMagma, over: str) -> None:
        self.sections.setdefault("comodule_magma", {})[name] = {"over": over, "eta": B.eta, "mu": B.mu, "rho": B.rho}
        B.name = name
        self.comodule_magma[name] = B

    def add_anchor(self, name: str, A: AnchorMorphism, source: str, target: str) -> None:
        self.sections.setdefault("anchor", {})[name] = {"source": source, "target": target, "h": A.h}
        self.anchor[name] = A

    def add_module(self, name: str, M: StrongHopfModule, anchor: str) -> None:
        self.sections.setdefault("modules", {})[name] = {"anchor": anchor, "phi": M.phi, "rho": M.rho}
        M.name = name
        self.modules[name] = M

    def add_right_module(self, name: str, N: RightModule, anchor: str) -> None:
        self.sections.setdefault("right_modules", {})[name] = {"anchor": anchor, "psi": N.psi}
        N.name = name
        self.right_modules[name] = N


def _canon(x: Any) -> Any:
    if isinstance(x, Mat):
        return ("Mat", x.shape, x.den, tuple(int(v) for v in x.num.ravel()))
    if isinstance(x, dict):
        return tuple(sorted((k, _canon(v)) for k, v in x.items()))
    if isinstance(x, (list, tuple)):
        return tuple(_canon(v) for v in x)
    return x


def _locate(text: str, path: str) -> tuple[int | None, int | None]:
    """Line and column of the innermost named key along ``path`` (best effort)."""
    pos = 0
    found = None
    for key in path.replace("[", ".[").split("."):
        if not key or key.startswith("["):
            continue
        i = text.find(json.dumps(key), pos)
        if i < 0:
            break
        pos = found = i
    if found is None:
        return None, None
    line = text.count("\n", 0, found) + 1
    return line, found - (text.rfind("\n", 0, found) + 1) + 1


def parse(text: str, source: str = "<string>") -> StructureFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {source}: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    try:
        return _build(data)
    except InputError as exc:
        if exc.line is not None or not exc.path:
            raise
        line, column = _locate(text, exc.path)
        raise InputError(exc.message, exc.path, line, column) from None


def load(path: str | Path) -> StructureFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse(text, str(path))


def _entry(data: dict, section: str, name: str) -> dict:
    entry = data[section][name]
    if not isinstance(entry, dict):
        raise InputError("entry must be an object", f"{section}.{name}")
    return entry


def _need(entry: dict, key: str, path: str) -> Any:
    if key not in entry:
        raise InputError(f"missing key {key!r}", path)
    return entry[key]


def _ref(table: dict, entry: dict, key: str, path: str, kind: str):
    name = _need(entry, key, path)
    if not isinstance(name, str) or name not in table:
        raise InputError(f"{key} refers to unknown {kind} {name!r}", f"{path}.{key}")
    return name, table[name]


def _build(data: Any) -> StructureFile:
    if not isinstance(data, dict):
        raise InputError("top level must be a JSON object")
    fmt = data.get("format", FORMAT)
    ver = data.get("version", VERSION)
    if fmt != FORMAT or ver != VERSION:
        raise InputError(f"unsupported format {fmt!r} version {ver!r}", "format")
    unknown = set(data) - set(SECTIONS) - {"format", "version", "name", "description"}
    if unknown:
        raise InputError(f"unknown section {sorted(unknown)[0]!r}", sorted(unknown)[0])
    for s in SECTIONS:
        if s in data and not isinstance(data[s], dict):
            raise InputError("section must be an object mapping names to entries", s)
    doc = StructureFile(name=str(data.get("name", "")), description=str(data.get("description", "")))

    def mats(entry: dict, keys, path: str) -> dict:
        return {k: decode_matrix(_need(entry, k, path), f"{path}.{k}") for k in keys}

    def put_whq(section: str, name: str, H: WeakHopfQuasigroup, params: dict) -> None:
        if name in doc.whq:
            raise InputError(f"duplicate whq name {name!r}", f"{section}.{name}")
        H.name = name
        doc.whq[name] = H
        doc.add_builder(section, name, params)

    for name in data.get("group_table", {}):
        path = f"group_table.{name}"
        e = _entry(data, "group_table", name)
        G = _table(e, path)
        put_whq("group_table", name, group_algebra(G, name), G.to_json())
    for name in data.get("loop_table", {}):
        path = f"loop_table.{name}"
        e = _entry(data, "loop_table", name)
        L = _table(e, path)
        put_whq("loop_table", name, loop_algebra(L, name), L.to_json())
    for name in data.get("groupoid", {}):
        path = f"groupoid.{name}"
        e = _entry(data, "groupoid", name)
        if "pair" in e:
            if not isinstance(e["pair"], int) or e["pair"] < 1:
                raise InputError("pair needs a positive object count", f"{path}.pair")
            T, params = pair_groupoid(e["pair"]), {"pair": e["pair"]}
        elif "groups" in e:
            groups = [_table(g, f"{path}.groups[{i}]") for i, g in enumerate(_need(e, "groups", path))]
            T, params = groupoid_union(groups), {"groups": [g.to_json() for g in groups]}
        else:
            keys = ("objects", "arrows", "compose", "inverse", "identities")
            vals = {k: _need(e, k, path) for k in keys}
            try:
                T = GroupoidTable(vals["objects"], tuple(map(tuple, vals["arrows"])),
                                  tuple(map(tuple, vals["compose"])), tuple(vals["inverse"]),
                                  tuple(vals["identities"]))
            except TableError:
                raise
            except (TypeError, ValueError) as exc:
                raise InputError(f"malformed groupoid table: {exc}", path) from None
            params = T.to_json()
        put_whq("groupoid", name, groupoid_algebra(T, name), params)
    for name in data.get("cochain", {}):
        path = f"cochain.{name}"
        e = _entry(data, "cochain", name)
        if "cayley_dickson" in e:
            k = e["cayley_dickson"]
            if not isinstance(k, int) or not 1 <= k <= 4:
                raise InputError("cayley_dickson needs a level between 1 and 4", f"{path}.cayley_dickson")
            c, params = cayley_dickson_cochain(k), {"cayley_dickson": k}
        else:
            G = _table(_need(e, "group", path), f"{path}.group")
            F = decode_matrix(_need(e, "F", path), f"{path}.F")
            _shape_check(F, (G.order, G.order), f"{path}.F")
            if not F.is_integral():
                raise InputError("cochain values must be integers", f"{path}.F")
            c = Cochain2(G, tuple(map(tuple, F.tolist())))
            params = {"group": G.to_json(), "F": F}
        put_whq("cochain", name, loop_algebra(sign_loop(c), name), params)
    for name in data.get("whq", {}):
        path = f"whq.{name}"
        m = mats(_entry(data, "whq", name), _WHQ_MAPS, path)
        d = m["lam"].rows
        shapes = {"eta": (d, 1), "mu": (d, d * d), "eps": (1, d), "delta": (d * d, d), "lam": (d, d)}
        for k, shp in shapes.items():
            _shape_check(m[k], shp, f"{path}.{k}")
        if name in doc.whq:
            raise InputError(f"duplicate whq name {name!r}", path)
        doc.add_whq(name, WeakHopfQuasigroup.from_maps(**m, validate=False, name=name))

    for name in data.get("comodule_magma", {}):
        path = f"comodule_magma.{name}"
        e = _entry(data, "comodule_magma", name)
        if "regular" in e:
            hn, H = _ref(doc.whq, e, "regular", path, "whq")
            B = ComoduleMagma.regular(H)
            B.name = name
            doc.comodule_magma[name] = B
            doc.add_builder("comodule_magma", name, {"regular": hn})
        elif "opposite" in e:
            hn, H = _ref(doc.whq, e, "opposite", path, "whq")
            try:
                B, A = opposite_comodule_magma(H)
            except NotIdempotentError:
                raise
            except ValueError as exc:
                raise InputError(str(exc), f"{path}.opposite") from None
            B.name = name
            doc.comodule_magma[name] = B
            doc.anchor[name] = A
            doc.add_builder("comodule_magma", name, {"opposite": hn})
        else:
            hn, H = _ref(doc.whq, e, "over", path, "whq")
            m = mats(e, ("eta", "mu", "rho"), path)
            b = m["eta"].rows
            for k, shp in {"eta": (b, 1), "mu": (b, b * b), "rho": (b * H.dim, b)}.items():
                _shape_check(m[k], shp, f"{path}.{k}")
            doc.add_comodule_magma(name, ComoduleMagma.from_maps(**m, H=H, validate=False, name=name), hn)
    for name in data.get("smash", {}):
        path = f"smash.{name}"
        e = _entry(data, "smash", name)
        an, A = _ref(doc.whq, e, "A", path, "whq")
        hn, H = _ref(doc.whq, e, "H", path, "whq")
        phi = decode_matrix(_need(e, "action", path), f"{path}.action")
        _shape_check(phi, (A.dim, H.dim * A.dim), f"{path}.action")
        if name in doc.comodule_magma or name in doc.anchor:
            raise InputError(f"name {name!r} already defined", path)
        B, anc = smash_product(A.magma, H, phi, name=name)
        doc.comodule_magma[name] = B
        doc.anchor[name] = anc
        doc.add_builder("smash", name, {"A": an, "H": hn, "action": phi})
    for name in data.get("anchor", {}):
        path = f"anchor.{name}"
        e = _entry(data, "anchor", name)
        hn, H = _ref(doc.whq, e, "source", path, "whq")
        bn, B = _ref(doc.comodule_magma, e, "target", path, "comodule magma")
        if B.H is not H:
            raise InputError(f"comodule magma {bn!r} is not a comodule over {hn!r}", f"{path}.target")
        h = _shape_check(decode_matrix(_need(e, "h", path), f"{path}.h"), (B.dim, H.dim), f"{path}.h")
        if name in doc.anchor:
            raise InputError(f"duplicate anchor name {name!r}", path)
        doc.add_anchor(name, AnchorMorphism(h, H, B, validate=False), hn, bn)

    for name in data.get("modules", {}):
        path = f"modules.{name}"
        e = _entry(data, "modules", name)
        an, A = _ref(doc.anchor, e, "anchor", path, "anchor")
        if e.get("regular"):
            M = StrongHopfModule.regular(A, validate=False)
            M.name = name
            doc.modules[name] = M
            doc.add_builder("modules", name, {"anchor": an, "regular": True})
            continue
        m = mats(e, ("phi", "rho"), path)
        d = m["phi"].rows
        _shape_check(m["phi"], (d, d * A.target.dim), f"{path}.phi")
        _shape_check(m["rho"], (d * A.source.dim, d), f"{path}.rho")
        doc.add_module(name, StrongHopfModule(m["phi"], m["rho"], A, validate=False, name=name), an)
    for name in data.get("right_modules", {}):
        path = f"right_modules.{name}"
        e = _entry(data, "right_modules", name)
        an, A = _ref(doc.anchor, e, "anchor", path, "anchor")
        psi = decode_matrix(_need(e, "psi", path), f"{path}.psi")
        N = RightModule(psi, A, validate=False, name=name)
        try:
            N.check_shape()
        except DimensionError as exc:
            raise InputError(str(exc), f"{path}.psi") from None
        except (NotIdempotentError, ArithmeticError):
            pass  # the anchor suite reports the broken anchor
        doc.add_right_module(name, N, an)
    return doc


def _encode(x: Any) -> Any:
    if isinstance(x, Mat):
        return encode_matrix(x)
    if isinstance(x, dict):
        return {k: _encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_encode(v) for v in x]
    return x


def serialize(doc: StructureFile) -> str:
    """Canonical text: one matrix row per line so parse errors point at a row."""
    out: dict[str, Any] = {"format": FORMAT, "version": VERSION}
    if doc.name:
        out["name"] = doc.name
    if doc.description:
        out["description"] = doc.description
    for s in SECTIONS:
        if doc.sections.get(s):
            out[s] = _encode(doc.sections[s])
    return _pretty(out) + "\n"


def _pretty(x: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f'{pad}  {json.dumps(k, ensure_ascii=False)}: {_pretty(v, indent + 1)}' for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(x, list) and x and all(isinstance(r, list) for r in x):
        rows = [f"{pad}  {json.dumps(r, ensure_ascii=False, separators=(',', ':'))}" for r in x]
        return "[\n" + ",\n".join(rows) + "\n" + pad + "]"
    return json.dumps(x, ensure_ascii=False, separators=(", ", ": "))


def dump(doc: StructureFile, path: str | Path) -> None:
    Path(path).write_text(serialize(doc), encoding="utf-8")
