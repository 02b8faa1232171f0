"""Reading and writing structures: JSON, a plain text block format, and DOT.

JSON is ``{"name": ..., "points": [labels], "lines": [[i, j, k], ...]}`` with
ascending triples. The text format has one line per block (whitespace
separated labels), ``#`` comments, and optional ``@name`` / ``@points``
directives; labels are registered in order of first appearance.
"""

from __future__ import annotations

import json
import re
import sys
from pathlib import Path

from .core import IncidenceStructure, InvalidStructure, validate


class FormatError(ValueError):
    def __init__(self, msg: str, line: int | None = None, col: int | None = None, source: str = "<input>"):
        self.line, self.col = line, col
        where = source if line is None else f"{source}:{line}" + (f":{col}" if col else "")
        super().__init__(f"{where}: {msg}")


def _checked(s: IncidenceStructure) -> IncidenceStructure:
    problems = validate(s)
    if problems:
        raise InvalidStructure(problems, s.name)
    return s


# -- JSON ---------------------------------------------------------------------------------


def to_json(s: IncidenceStructure, indent: int | None = None) -> str:
    doc = {"name": s.name, "points": list(s.points), "lines": [list(L) for L in s.lines]}
    if indent is None:
        # one line per block keeps diffs readable without blowing up the file
        head = json.dumps({"name": s.name, "points": list(s.points)})[:-1]
        body = ",\n  ".join(json.dumps(list(L)) for L in s.lines)
        return f'{head}, "lines": [\n  {body}\n]}}\n'
    return json.dumps(doc, indent=indent) + "\n"


def from_json(text: str, source: str = "<json>") -> IncidenceStructure:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(e.msg, e.lineno, e.colno, source) from None
    if not isinstance(doc, dict):
        raise FormatError("top level must be an object", source=source)
    extra = set(doc) - {"name", "points", "lines"}
    if extra:
        raise FormatError(f"unexpected keys {sorted(extra)}", source=source)
    points, lines = doc.get("points"), doc.get("lines")
    if not isinstance(points, list) or not all(isinstance(p, str) for p in points):
        raise FormatError('"points" must be a list of strings', source=source)
    if not isinstance(lines, list):
        raise FormatError('"lines" must be a list of index triples', source=source)
    seen = set()
    for p in points:
        if p in seen:
            raise FormatError(f"duplicate point label {p!r}", source=source)
        seen.add(p)
    for k, L in enumerate(lines):
        if not (isinstance(L, list) and len(L) == 3 and all(type(x) is int for x in L)):
            raise FormatError(f"line #{k} is not a triple of integers: {L!r}", source=source)
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise FormatError('"name" must be a string', source=source)
    return _checked(IncidenceStructure(tuple(points), tuple(tuple(L) for L in lines), name))


# -- text blocks ----------------------------------------------------------------------------


def to_text(s: IncidenceStructure) -> str:
    bad = [p for p in s.points if not p or p.startswith("@") or any(ch.isspace() or ch == "#" for ch in p)]
    if bad:
        raise ValueError(f"labels {bad[:3]!r} cannot be written in the text format")
    out = []
    if s.name:
        out.append(f"@name {s.name}")
    # isolated points (and the label order) would be lost without this
    out.append("@points " + " ".join(s.points))
    out.extend(" ".join(s.points[p] for p in L) for L in s.lines)
    return "\n".join(out) + "\n"


def from_text(text: str, source: str = "<text>") -> IncidenceStructure:
    name = ""
    labels: list[str] = []
    index: dict[str, int] = {}
    lines = []
    declared = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        toks = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", body)]
        if not toks:
            continue
        head, col = toks[0]
        if head == "@name":
            name = body.strip()[len("@name"):].strip()
            continue
        if head == "@points":
            if declared or lines:
                raise FormatError("@points must come once, before any block", lineno, col, source)
            declared = True
            for t, c in toks[1:]:
                if t in index:
                    raise FormatError(f"duplicate point label {t!r}", lineno, c, source)
                index[t] = len(labels)
                labels.append(t)
            continue
        if head.startswith("@"):
            raise FormatError(f"unknown directive {head}", lineno, col, source)
        if len(toks) != 3:
            raise FormatError(f"a block needs 3 labels, got {len(toks)}", lineno, col, source)
        if len({t for t, _ in toks}) != 3:
            raise FormatError("repeated label inside a block", lineno, col, source)
        for t, c in toks:
            if t not in index:
                if declared:
                    raise FormatError(f"label {t!r} not in @points", lineno, c, source)
                index[t] = len(labels)
                labels.append(t)
        lines.append(tuple(index[t] for t, _ in toks))
    return _checked(IncidenceStructure(tuple(labels), tuple(lines), name))


# -- files ----------------------------------------------------------------------------------


def guess_format(path: str | None, text: str) -> str:
    if path and path != "-":
        suffix = Path(path).suffix.lower()
        if suffix == ".json":
            return "json"
        if suffix in (".txt", ".psts", ".blocks"):
            return "text"
    return "json" if text.lstrip().startswith("{") else "text"


def loads(text: str, fmt: str | None = None, source: str = "<input>") -> IncidenceStructure:
    fmt = fmt or guess_format(None, text)
    if fmt == "json":
        return from_json(text, source)
    if fmt == "text":
        return from_text(text, source)
    raise ValueError(f"unknown format {fmt!r}")


def dumps(s: IncidenceStructure, fmt: str = "json") -> str:
    if fmt == "json":
        return to_json(s)
    if fmt == "text":
        return to_text(s)
    if fmt == "dot":
        return export_dot(s)
    raise ValueError(f"unknown format {fmt!r}")


def load(path: str, fmt: str | None = None) -> IncidenceStructure:
    """Read a structure from a path, or stdin for ``-``."""
    if path == "-":
        text = sys.stdin.read()
    else:
        text = Path(path).read_text()
    return loads(text, fmt or guess_format(path, text), source=path)


def save(s: IncidenceStructure, path: str, fmt: str | None = None):
    if fmt is None:
        fmt = "text" if path != "-" and Path(path).suffix.lower() == ".txt" else "json"
    data = dumps(s, fmt)
    if path == "-":
        sys.stdout.write(data)
    else:
        Path(path).write_text(data)


# -- DOT --------------------------------------------------------------------------------------


def _q(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(s: IncidenceStructure, mode: str = "clique") -> str:
    """Graphviz text. ``clique`` draws each line as a triangle of edges;
    ``line-node`` adds one small node per line joined to its three points."""
    if mode not in ("clique", "line-node"):
        raise ValueError(f"unknown dot mode {mode!r}")
    out = [f"graph {_q(s.name or 'psts')} {{", "  node [shape=circle];"]
    out += [f"  {_q(p)};" for p in s.points]
    if mode == "clique":
        for k, (a, b, c) in enumerate(s.lines):
            for x, y in ((a, b), (b, c), (a, c)):
                out.append(f"  {_q(s.points[x])} -- {_q(s.points[y])} [colorscheme=set19, color={k % 9 + 1}];")
    else:
        for k, L in enumerate(s.lines):
            node = _q(f"#line{k}")  # '#' cannot start a label read from text
            out.append(f"  {node} [shape=point];")
            out += [f"  {node} -- {_q(s.points[p])};" for p in L]
    out.append("}")
    return "\n".join(out) + "\n"
