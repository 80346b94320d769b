"""The .gog file format: a YAML document describing a graph of groups.

Schema (see README for the full reference):

    base: v                  # optional; defaults to the least vertex
    tree: [e1]               # optional; orbit names forming a spanning tree
    provenance: [...]        # optional; carried through transformations
    vertices:
      v: {free_abelian: [a]}
    edges:
      e1:
        origin: v
        terminus: w
        group: {free_abelian: [c]}
        fwd:  {matrix: [[2]]}    # hom edge group -> origin vertex group
        back: {matrix: [[3]]}    # hom edge group -> terminus vertex group

Each edge record declares one orbit: the half-edge named ``e1`` runs
origin -> terminus and its reverse is named ``e1^-1``.  Group descriptors:
``{free_abelian: rank-or-letter-list}``, ``{free: rank-or-letter-list}``,
``{cyclic: n}`` (optional ``letter``), or ``{table: {elements, mul, id}}``.
Hom descriptors: ``identity``, ``{matrix: rows}``, ``{map: [labels-or-
indices]}``, ``{images: [...]}`` with entries matching the target class
(vector, label/index, or space-separated word such as ``"a b^-1"``).

Parsing is strict and reports the offending key path; serialization is
canonical (sorted keys, shorthands expanded), so parse -> serialize ->
parse is the identity on canonical form.
"""

from __future__ import annotations

import yaml

from .errors import GogParseError
from .gog import GraphOfGroups
from .graph import AbstractGraph, orbits
from .groups import (
    FiniteTable,
    FreeAbelian,
    FreeGroup,
    Hom,
    cyclic_table,
    parse_element,
)

_REVERSE_SUFFIX = "^-1"


def _fail(path, message):
    raise GogParseError(message, path=path)


def _require_mapping(value, path):
    if not isinstance(value, dict):
        _fail(path, f"expected a mapping, got {type(value).__name__}")
    return value


def _name(value, path):
    if isinstance(value, bool) or value is None:
        _fail(path, "names must be strings")
    if isinstance(value, (dict, list)):
        _fail(path, "names must be scalar")
    return str(value)


# ---------------------------------------------------------------------------
# group descriptors


def parse_group(desc, path):
    desc = _require_mapping(desc, path)
    kinds = [k for k in ("free_abelian", "free", "cyclic", "table") if k in desc]
    if len(kinds) != 1:
        _fail(path, "group descriptor needs exactly one of free_abelian/free/cyclic/table")
    kind = kinds[0]
    value = desc[kind]
    extras = set(desc) - {kind, "letter"}
    if extras:
        _fail(path, f"unknown group keys {sorted(extras)}")
    if kind in ("free_abelian", "free"):
        if isinstance(value, int) and not isinstance(value, bool):
            rank, names = value, None
        elif isinstance(value, list):
            names = tuple(_name(x, path) for x in value)
            rank = len(names)
        else:
            _fail(path, f"{kind} takes a rank or a list of letter names")
        if rank < 0:
            _fail(path, "rank must be nonnegative")
        cls = FreeAbelian if kind == "free_abelian" else FreeGroup
        return cls(rank, names)
    if kind == "cyclic":
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            _fail(path, "cyclic takes a positive order")
        letter = _name(desc.get("letter", "a"), path)
        return cyclic_table(value, letter)
    body = _require_mapping(value, path)
    missing = {"elements", "mul"} - set(body)
    if missing:
        _fail(path, f"table needs keys {sorted(missing)}")
    labels = [_name(x, f"{path}.elements") for x in body["elements"]]
    mul = body["mul"]
    if not isinstance(mul, list) or not all(isinstance(r, list) for r in mul):
        _fail(f"{path}.mul", "mul must be a list of rows")
    id_index = body.get("id", 0)
    try:
        return FiniteTable.checked(tuple(labels), tuple(tuple(r) for r in mul), id_index)
    except (ValueError, TypeError) as exc:
        _fail(path, f"invalid multiplication table: {exc}")


def group_descriptor(group):
    if isinstance(group, FreeAbelian):
        return {"free_abelian": list(group.names)}
    if isinstance(group, FreeGroup):
        return {"free": list(group.names)}
    return {
        "table": {
            "elements": list(group.labels),
            "mul": [list(r) for r in group.mul_table],
            "id": group.id_index,
        }
    }


# ---------------------------------------------------------------------------
# hom descriptors


def _parse_image(dst, entry, path):
    if isinstance(entry, list):
        if not isinstance(dst, FreeAbelian):
            _fail(path, "vector images only target free abelian groups")
        vec = tuple(int(x) for x in entry)
        dst.check(vec)
        return vec
    if isinstance(entry, bool):
        _fail(path, "invalid image entry")
    if isinstance(entry, int):
        dst.check(entry)
        return entry
    try:
        return parse_element(dst, str(entry))
    except Exception as exc:
        _fail(path, f"bad image {entry!r}: {exc}")


def parse_hom(desc, src, dst, path):
    try:
        if desc == "identity":
            if type(src) is not type(dst):
                _fail(path, "identity needs source and target in the same class")
            if isinstance(src, (FreeAbelian, FreeGroup)):
                if src.rank != dst.rank:
                    _fail(path, "identity needs equal ranks")
                if isinstance(src, FreeAbelian):
                    from .quotients import mat_identity

                    return Hom.matrix(src, dst, mat_identity(src.rank))
                return Hom.images(src, dst, dst.generators())
            if src.mul_table != dst.mul_table:
                _fail(path, "identity needs identical multiplication tables")
            return Hom.table(src, dst, list(range(src.order())))
        desc = _require_mapping(desc, path)
        kinds = [k for k in ("matrix", "map", "images") if k in desc]
        if len(kinds) != 1 or len(desc) != 1:
            _fail(path, "hom descriptor needs exactly one of matrix/map/images (or the string identity)")
        kind = kinds[0]
        value = desc[kind]
        if kind == "matrix":
            if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
                _fail(path, "matrix must be a list of rows")
            return Hom.matrix(src, dst, [[int(x) for x in row] for row in value])
        if kind == "map":
            if not isinstance(value, list):
                _fail(path, "map must be a list")
            if not isinstance(dst, FiniteTable):
                _fail(path, "map homs target finite tables")
            mapping = []
            for x in value:
                if isinstance(x, int) and not isinstance(x, bool):
                    mapping.append(x)
                else:
                    label = _name(x, path)
                    if label not in dst.labels:
                        _fail(path, f"unknown target label {label!r}")
                    mapping.append(dst.labels.index(label))
            return Hom.table(src, dst, mapping)
        if not isinstance(value, list):
            _fail(path, "images must be a list")
        return Hom.images(src, dst, [_parse_image(dst, x, path) for x in value])
    except GogParseError:
        raise
    except Exception as exc:
        _fail(path, str(exc))


def _free_word_text(group, word):
    if not word:
        return "1"
    return " ".join(
        group.names[abs(s) - 1] + ("^-1" if s < 0 else "") for s in word
    )


def hom_descriptor(h):
    if h.kind == "matrix":
        return {"matrix": [list(r) for r in h.data]}
    if h.kind == "table":
        return {"map": [h.dst.labels[i] for i in h.data]}
    entries = []
    for img in h.data:
        if isinstance(h.dst, FreeAbelian):
            entries.append(list(img))
        elif isinstance(h.dst, FiniteTable):
            entries.append(h.dst.labels[img])
        else:
            entries.append(_free_word_text(h.dst, img))
    return {"images": entries}


# ---------------------------------------------------------------------------
# whole documents


def parse_gog_text(text, path="<gog>") -> GraphOfGroups:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        line = None
        mark = getattr(exc, "problem_mark", None)
        if mark is not None:
            line = mark.line + 1
        raise GogParseError(f"not valid YAML: {exc}", path=path, line=line) from exc
    doc = _require_mapping(doc if doc is not None else {}, path)
    unknown = set(doc) - {"vertices", "edges", "base", "tree", "provenance"}
    if unknown:
        _fail(path, f"unknown top-level keys {sorted(unknown)}")
    if "vertices" not in doc:
        _fail(path, "missing top-level key vertices")

    vgroup = {}
    for raw_name, desc in _require_mapping(doc["vertices"], f"{path}.vertices").items():
        v = _name(raw_name, f"{path}.vertices")
        if v in vgroup:
            _fail(f"{path}.vertices.{v}", "duplicate vertex")
        vgroup[v] = parse_group(desc, f"{path}.vertices.{v}")

    bar, d0 = {}, {}
    egroup, emap = {}, {}
    edges_doc = _require_mapping(doc.get("edges", {}) or {}, f"{path}.edges")
    for raw_name, record in edges_doc.items():
        name = _name(raw_name, f"{path}.edges")
        where = f"{path}.edges.{name}"
        if name.endswith(_REVERSE_SUFFIX):
            _fail(where, f"edge names must not end with {_REVERSE_SUFFIX}")
        if name in bar:
            _fail(where, "duplicate edge")
        record = _require_mapping(record, where)
        missing = {"origin", "terminus", "group", "fwd", "back"} - set(record)
        if missing:
            _fail(where, f"missing keys {sorted(missing)}")
        extra = set(record) - {"origin", "terminus", "group", "fwd", "back"}
        if extra:
            _fail(where, f"unknown keys {sorted(extra)}")
        origin = _name(record["origin"], f"{where}.origin")
        terminus = _name(record["terminus"], f"{where}.terminus")
        for v, key in ((origin, "origin"), (terminus, "terminus")):
            if v not in vgroup:
                _fail(f"{where}.{key}", f"unknown vertex {v}")
        shared = parse_group(record["group"], f"{where}.group")
        back_name = name + _REVERSE_SUFFIX
        bar[name], bar[back_name] = back_name, name
        d0[name], d0[back_name] = origin, terminus
        egroup[name] = shared
        emap[name] = parse_hom(record["fwd"], shared, vgroup[origin], f"{where}.fwd")
        emap[back_name] = parse_hom(record["back"], shared, vgroup[terminus], f"{where}.back")

    graph = AbstractGraph.make(vgroup.keys(), bar, d0)

    tree = None
    if "tree" in doc and doc["tree"] is not None:
        entries = doc["tree"]
        if not isinstance(entries, list):
            _fail(f"{path}.tree", "tree must be a list of edge names")
        tree = frozenset(_name(x, f"{path}.tree") for x in entries)
        for t in sorted(tree):
            if t not in egroup:
                _fail(f"{path}.tree", f"unknown tree edge {t}")

    base = None
    if "base" in doc and doc["base"] is not None:
        base = _name(doc["base"], f"{path}.base")
        if base not in vgroup:
            _fail(f"{path}.base", f"unknown vertex {base}")

    provenance = ()
    if "provenance" in doc and doc["provenance"] is not None:
        if not isinstance(doc["provenance"], list):
            _fail(f"{path}.provenance", "provenance must be a list of strings")
        provenance = tuple(str(x) for x in doc["provenance"])

    if not vgroup:
        _fail(f"{path}.vertices", "at least one vertex required")
    return GraphOfGroups.make(graph, vgroup, egroup, emap, base=base, tree=tree, provenance=provenance)


def parse_gog(path) -> GraphOfGroups:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise GogParseError(f"cannot read file: {exc}", path=str(path)) from exc
    return parse_gog_text(text, path=str(path))


def serialize_gog(g: GraphOfGroups) -> str:
    """Canonical YAML serialization.

    Orbits are keyed by their plus half-edge; reverse half-edge ids are
    regenerated as ``name^-1`` on parse, so documents round-trip on
    canonical form.
    """
    edges = {}
    for o in orbits(g.graph):
        name = o.plus
        if name.endswith(_REVERSE_SUFFIX):
            name = name[: -len(_REVERSE_SUFFIX)]
        edges[name] = {
            "origin": g.graph.d0[o.plus],
            "terminus": g.graph.d0[o.minus],
            "group": group_descriptor(g.egroup[o.plus]),
            "fwd": hom_descriptor(g.emap[o.plus]),
            "back": hom_descriptor(g.emap[o.minus]),
        }
    doc = {
        "base": g.base,
        "vertices": {v: group_descriptor(g.vgroup[v]) for v in sorted(g.graph.vertices)},
        "edges": edges,
    }
    if g.tree is not None:
        doc["tree"] = sorted(g.tree)
    if g.provenance:
        doc["provenance"] = list(g.provenance)
    return yaml.safe_dump(doc, sort_keys=True, default_flow_style=None, width=100)
