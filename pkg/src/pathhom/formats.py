"""Plain-text and JSON input formats.

* digraph: a ``vertices:`` line of names, then ``edges:`` followed by ``u v`` lines;
* quiver: lines ``label: u -> v`` (parallel arrows allowed);
* path complex: an optional ``vertices:`` line, then one allowed path per line;
* facets: one facet per line, vertices separated by spaces;
* Cayley table: element names (identity first), then the rows of the table;
* algebra: JSON with ``basis``, ``mult`` and an optional ``bimodule``;
* graded pair: JSON with ``dims``, ``boundaries`` and ``sub``.

``#`` starts a comment everywhere except in JSON.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .errors import CompositionNotZero, ParseError, ValidationError
from .exactalg import ExactMatrix, Ring
from .gradedpairs import BoundedComplex, GradedPair
from .nerve import Quiver
from .quiverhom import Digraph, PathComplexInput, SimplicialComplexInput


def resolve_path(path: str) -> Path:
    """The file itself, or a bundled data file with the same name."""
    p = Path(path)
    if p.exists():
        return p
    bundled = resources.files("pathhom") / "data" / p.name
    if bundled.is_file():
        return Path(str(bundled))
    raise ParseError(f"no such file: {path}", source=path)


def read_text(path: str) -> tuple[str, str]:
    p = resolve_path(path)
    return p.read_text(encoding="utf-8"), str(path)


def _lines(text: str):
    """Yield ``(line number, stripped content)`` for non-blank lines, comments removed."""
    for no, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            yield no, content, raw


def _column(raw: str, token: str) -> int:
    i = raw.find(token)
    return i + 1 if i >= 0 else 1


def parse_digraph(text: str, source: str = "<digraph>") -> Digraph:
    vertices: list | None = None
    edges = []
    in_edges = False
    for no, line, raw in _lines(text):
        if line.startswith("vertices:"):
            vertices = line[len("vertices:"):].split()
            in_edges = False
            continue
        if line.startswith("edges:"):
            in_edges = True
            rest = line[len("edges:"):].strip()
            if rest:
                raise ParseError("edges go on the lines after 'edges:'", no, _column(raw, rest), source)
            continue
        if not in_edges:
            raise ParseError(f"unexpected line {line!r} (expected 'vertices:' or 'edges:')", no, 1, source)
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"an edge line has two vertices, got {len(parts)}", no, _column(raw, line), source)
        edges.append((parts[0], parts[1]))
    if vertices is None:
        raise ParseError("missing 'vertices:' line", 1, 1, source)
    return Digraph(vertices, edges)


def parse_quiver(text: str, source: str = "<quiver>") -> Quiver:
    arrows: dict = {}
    vertices: dict = {}
    for no, line, raw in _lines(text):
        if line.startswith("vertices:"):
            for v in line[len("vertices:"):].split():
                vertices[v] = None
            continue
        if ":" not in line or "->" not in line:
            raise ParseError("arrow lines look like 'label: u -> v'", no, 1, source)
        label, rest = line.split(":", 1)
        label = label.strip()
        ends = [s.strip() for s in rest.split("->")]
        if not label or len(ends) != 2 or not all(ends) or any(" " in e for e in ends):
            raise ParseError("arrow lines look like 'label: u -> v'", no, _column(raw, rest.strip()), source)
        if label in arrows:
            raise ParseError(f"repeated arrow label {label!r}", no, 1, source)
        t, h = ends
        if t == h:
            raise ValidationError(f"line {no}: loop {label!r}; degenerate loops are implicit")
        arrows[label] = (t, h)
        vertices[t] = None
        vertices[h] = None
    if not vertices:
        raise ParseError("empty quiver", 1, 1, source)
    return Quiver(list(vertices), arrows)


def is_quiver_text(text: str) -> bool:
    return any("->" in line for _, line, _ in _lines(text))


def parse_graph_like(text: str, source: str):
    """A quiver file or a digraph file, recognised by its arrow syntax."""
    return parse_quiver(text, source) if is_quiver_text(text) else parse_digraph(text, source)


def parse_path_complex(text: str, source: str = "<paths>") -> PathComplexInput:
    vertices: list = []
    paths: dict = {}
    for no, line, raw in _lines(text):
        if line.startswith("vertices:"):
            vertices.extend(line[len("vertices:"):].split())
            continue
        p = tuple(line.split())
        paths.setdefault(len(p) - 1, set()).add(p)
        for v in p:
            if v not in vertices:
                vertices.append(v)
    if not vertices:
        raise ParseError("empty path complex", 1, 1, source)
    return PathComplexInput(vertices, paths)


def parse_facets(text: str, source: str = "<facets>") -> SimplicialComplexInput:
    facets = [tuple(line.split()) for _, line, _ in _lines(text)]
    if not facets:
        raise ParseError("no facets", 1, 1, source)
    return SimplicialComplexInput(facets)


def parse_json(text: str, source: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno, source) from None


def parse_graded_pair(text: str, ring: Ring, source: str = "<pair>") -> GradedPair:
    """``{"dims": [...], "boundaries": {"n": rows}, "sub": {"n": [vectors]}}``."""
    data = parse_json(text, source)
    try:
        dims = [int(d) for d in data["dims"]]
        n_max = len(dims) - 1
        bounds = {}
        for key, rows in data.get("boundaries", {}).items():
            n = int(key)
            bounds[n] = ExactMatrix(rows, ring, cols=dims[n]) if rows else ExactMatrix.zeros(ring, dims[n - 1], dims[n])
        subs = []
        for n in range(n_max + 1):
            vecs = data.get("sub", {}).get(str(n), [])
            subs.append(ExactMatrix.from_columns(vecs, ring, dims[n]))
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"malformed graded pair: {e}", source=source) from None
    cx = BoundedComplex(ring, n_max, dims, bounds)
    try:
        cx.check_d2()
    except CompositionNotZero as e:
        # a bad input file, not a failed theorem
        raise ValidationError(f"{source}: {e}") from None
    return GradedPair(cx, subs)
