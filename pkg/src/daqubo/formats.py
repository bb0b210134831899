"""Readers and writers for instance and model files.

Three formats are supported:

``bqp``
    Sparse QUBO text: a header ``n nnz`` followed by ``nnz`` lines
    ``i j v`` with 1-based indices. ``i == j`` gives a linear term. Lines
    starting with ``#`` are ignored, except ``# constant <v>`` which carries
    the energy offset (the public format has no slot for it).
``qaplib``
    Whitespace-separated ``n``, then the ``n x n`` flow matrix, then the
    ``n x n`` distance matrix.
``native``
    JSON with ``"schema_version": 1`` and a ``"family"`` tag (``qubo``,
    ``qap``, ``qcpp``, ``selcol``). Indices are 0-based.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .problems.qap import QapInstance
from .problems.qcpp import QcppInstance
from .problems.selcol import SelColInstance
from .qubo import QuboModel

SCHEMA_VERSION = 1


class FormatError(ValueError):
    pass


class SchemaError(FormatError):
    """Invalid native document; ``path`` is a JSON pointer to the offending node."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path or '/'}: {message}")
        self.path = path


def _num(v: float):
    v = float(v)
    return int(v) if v.is_integer() and abs(v) < 2**53 else v


# -- bqp ---------------------------------------------------------------------


def read_bqp(text: str, maximize: bool = False) -> QuboModel:
    """Parse sparse QUBO text; ``maximize=True`` negates every coefficient."""
    constant = 0.0
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "constant":
                constant = _parse_float(parts[1], lineno)
            continue
        lines.append((lineno, line.split()))
    if not lines:
        raise FormatError("missing 'n nnz' header")
    lineno, header = lines[0]
    if len(header) != 2:
        raise FormatError(f"line {lineno}: header must be 'n nnz'")
    n, nnz = (_parse_int(t, lineno) for t in header)
    if len(lines) - 1 != nnz:
        raise FormatError(f"header announces {nnz} entries, found {len(lines) - 1}")
    linear = np.zeros(n)
    quad: dict[tuple[int, int], float] = {}
    seen: set[tuple[int, int]] = set()
    for lineno, parts in lines[1:]:
        if len(parts) != 3:
            raise FormatError(f"line {lineno}: expected 'i j v'")
        i, j = _parse_int(parts[0], lineno) - 1, _parse_int(parts[1], lineno) - 1
        v = _parse_float(parts[2], lineno)
        if not (0 <= i < n and 0 <= j < n):
            raise FormatError(f"line {lineno}: index out of range 1..{n}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise FormatError(f"line {lineno}: duplicate entry for pair ({key[0] + 1}, {key[1] + 1})")
        seen.add(key)
        if i == j:
            linear[i] = v
        else:
            quad[key] = v
    sign = -1.0 if maximize else 1.0
    return QuboModel(n, sign * linear, {k: sign * v for k, v in quad.items()}, sign * constant)


def write_bqp(model: QuboModel) -> str:
    lin = np.flatnonzero(model.linear)
    out = []
    if model.constant:
        out.append(f"# constant {_num(model.constant)!r}")
    out.append(f"{model.n} {lin.size + model.nnz}")
    out += [f"{j + 1} {j + 1} {_num(model.linear[j])!r}" for j in lin]
    out += [f"{i + 1} {j + 1} {_num(v)!r}" for i, j, v in zip(model.rows, model.cols, model.vals)]
    return "\n".join(out) + "\n"


def _parse_int(tok, lineno):
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"line {lineno}: expected an integer, got {tok!r}") from None


def _parse_float(tok, lineno):
    try:
        return float(tok)
    except ValueError:
        raise FormatError(f"line {lineno}: expected a number, got {tok!r}") from None


# -- qaplib ------------------------------------------------------------------


def read_qaplib(text: str) -> QapInstance:
    tokens = text.split()
    if not tokens:
        raise FormatError("empty QAPLIB file")
    try:
        n = int(tokens[0])
        values = [float(t) for t in tokens[1:]]
    except ValueError as exc:
        raise FormatError(f"non-numeric token: {exc}") from None
    if n < 1:
        raise FormatError(f"size must be positive, got {n}")
    want = 2 * n * n
    if len(values) < want:
        raise FormatError(f"truncated: expected {want} matrix entries after n={n}, found {len(values)}")
    if len(values) > want:
        raise FormatError(f"expected {want} matrix entries after n={n}, found {len(values)}")
    flow = np.array(values[: n * n]).reshape(n, n)
    dist = np.array(values[n * n :]).reshape(n, n)
    return QapInstance(flow, dist)


def write_qaplib(inst: QapInstance) -> str:
    def block(m):
        return "\n".join(" ".join(repr(_num(v)) for v in row) for row in m)

    return f"{inst.n}\n\n{block(inst.flow)}\n\n{block(inst.dist)}\n"


# -- native JSON -------------------------------------------------------------


def to_native(obj) -> dict:
    doc: dict = {"schema_version": SCHEMA_VERSION}
    if isinstance(obj, QuboModel):
        doc.update(
            family="qubo",
            n=obj.n,
            constant=_num(obj.constant),
            linear=[[int(j), _num(obj.linear[j])] for j in np.flatnonzero(obj.linear)],
            quad=[[int(i), int(j), _num(v)] for i, j, v in zip(obj.rows, obj.cols, obj.vals)],
        )
    elif isinstance(obj, QapInstance):
        doc.update(
            family="qap",
            flow=[[_num(v) for v in row] for row in obj.flow],
            dist=[[_num(v) for v in row] for row in obj.dist],
        )
    elif isinstance(obj, QcppInstance):
        doc.update(
            family="qcpp",
            n_vertices=obj.n_vertices,
            arcs=[[t, h] for t, h in obj.arcs],
            costs=[[[a1, a2], _num(v)] for (a1, a2), v in sorted(obj.cost.items())],
        )
    elif isinstance(obj, SelColInstance):
        doc.update(
            family="selcol",
            n_vertices=obj.n_vertices,
            edges=[[i, j] for i, j in sorted(obj.edges)],
            clusters=[list(c) for c in obj.clusters],
            color_budget=obj.color_budget,
        )
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return doc


def _field(doc, key, path):
    if key not in doc:
        raise SchemaError(f"{path}/{key}", "missing required field")
    return doc[key]


def _int(v, path, low=None):
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(path, f"expected an integer, got {v!r}")
    if low is not None and v < low:
        raise SchemaError(path, f"must be >= {low}")
    return v


def _number(v, path):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaError(path, f"expected a number, got {v!r}")
    return float(v)


def _list(v, path, length=None):
    if not isinstance(v, list):
        raise SchemaError(path, "expected an array")
    if length is not None and len(v) != length:
        raise SchemaError(path, f"expected {length} elements, got {len(v)}")
    return v


def _matrix(v, path):
    rows = _list(v, path)
    return [[_number(x, f"{path}/{i}/{j}") for j, x in enumerate(_list(r, f"{path}/{i}"))] for i, r in enumerate(rows)]


def from_native(doc):
    """Rebuild a model or instance from a native document, validating as it goes."""
    if not isinstance(doc, dict):
        raise SchemaError("", "document must be an object")
    version = _field(doc, "schema_version", "")
    if version != SCHEMA_VERSION:
        raise SchemaError("/schema_version", f"unsupported version {version!r}")
    family = _field(doc, "family", "")
    try:
        if family == "qubo":
            n = _int(_field(doc, "n", ""), "/n", 0)
            linear = {}
            for k, item in enumerate(_list(doc.get("linear", []), "/linear")):
                j, v = _list(item, f"/linear/{k}", 2)
                linear[_int(j, f"/linear/{k}/0", 0)] = _number(v, f"/linear/{k}/1")
            quad = {}
            for k, item in enumerate(_list(doc.get("quad", []), "/quad")):
                i, j, v = _list(item, f"/quad/{k}", 3)
                quad[(_int(i, f"/quad/{k}/0", 0), _int(j, f"/quad/{k}/1", 0))] = _number(v, f"/quad/{k}/2")
            return QuboModel(n, linear, quad, _number(doc.get("constant", 0), "/constant"))
        if family == "qap":
            return QapInstance(_matrix(_field(doc, "flow", ""), "/flow"), _matrix(_field(doc, "dist", ""), "/dist"))
        if family == "qcpp":
            n = _int(_field(doc, "n_vertices", ""), "/n_vertices", 0)
            arcs = []
            for k, a in enumerate(_list(_field(doc, "arcs", ""), "/arcs")):
                t, h = _list(a, f"/arcs/{k}", 2)
                arcs.append((_int(t, f"/arcs/{k}/0", 0), _int(h, f"/arcs/{k}/1", 0)))
            cost = {}
            for k, item in enumerate(_list(doc.get("costs", []), "/costs")):
                pair, v = _list(item, f"/costs/{k}", 2)
                a1, a2 = _list(pair, f"/costs/{k}/0", 2)
                cost[(_int(a1, f"/costs/{k}/0/0", 0), _int(a2, f"/costs/{k}/0/1", 0))] = _number(v, f"/costs/{k}/1")
            return QcppInstance(n, tuple(arcs), cost)
        if family == "selcol":
            n = _int(_field(doc, "n_vertices", ""), "/n_vertices", 0)
            edges = []
            for k, e in enumerate(_list(doc.get("edges", []), "/edges")):
                i, j = _list(e, f"/edges/{k}", 2)
                edges.append((_int(i, f"/edges/{k}/0", 0), _int(j, f"/edges/{k}/1", 0)))
            clusters = [
                tuple(_int(v, f"/clusters/{p}/{q}", 0) for q, v in enumerate(_list(c, f"/clusters/{p}")))
                for p, c in enumerate(_list(_field(doc, "clusters", ""), "/clusters"))
            ]
            budget = _int(doc.get("color_budget", len(clusters)), "/color_budget", 1)
            return SelColInstance(n, frozenset(edges), tuple(clusters), budget)
    except SchemaError:
        raise
    except (ValueError, IndexError) as exc:
        raise SchemaError("", str(exc)) from None
    raise SchemaError("/family", f"unknown family {family!r}")


def dumps_native(obj) -> str:
    return json.dumps(to_native(obj), indent=1) + "\n"


def loads_native(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return from_native(doc)


# -- files -------------------------------------------------------------------


def guess_format(path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".json":
        return "native"
    if suffix in (".dat", ".qap"):
        return "qaplib"
    return "bqp"


def read_file(path, fmt: str | None = None, maximize: bool = False):
    fmt = fmt or guess_format(path)
    text = Path(path).read_text()
    if fmt == "native":
        return loads_native(text)
    if fmt == "qaplib":
        return read_qaplib(text)
    if fmt == "bqp":
        return read_bqp(text, maximize=maximize)
    raise ValueError(f"unknown format {fmt!r}")


def write_file(path, obj, fmt: str | None = None) -> None:
    fmt = fmt or guess_format(path)
    if fmt == "native":
        text = dumps_native(obj)
    elif fmt == "qaplib":
        text = write_qaplib(obj)
    elif fmt == "bqp":
        text = write_bqp(obj)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    Path(path).write_text(text)
