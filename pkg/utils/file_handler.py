"""
Project: Turán Workbench - exact simplicial Turán computations at desk scale
File: utils/file_handler.py
Description:
    This module provides the text I/O of the workbench.

    Key Capabilities:
    1. Instance Loading: plain-text hypergraph and complex files, validated line by
       line (errors carry the offending line number).
    2. Deterministic Emission: every result object renders as an aligned table,
       CSV with stable columns, or JSON with sorted keys.
"""

import csv
import io
import json
import logging
import os
from dataclasses import asdict, is_dataclass

from core.errors import ParseError
from core.hypergraph import Complex, GeneratingSet, UniformHypergraph, maximal_masks
from core.vertex_set import mask_of
from services.clique_service import CliqueCount
from services.extremal_service import SearchResult
from services.verify_service import SuiteReport
from tools.formulas import FormulaValue

logger = logging.getLogger("FileLoader")

FORMATS = ("table", "csv", "json")

VERIFY_COLUMNS = ("instance", "expected", "actual", "status")
RESULT_COLUMNS = ("instance_key", "command", "optimum", "status", "nodes", "seconds")
CLIQUE_COLUMNS = ("order", "count")


# ==========================================
# Parsing
# ==========================================

def _content_lines(text: str):
    """(line number, tokens) for every non-blank line, with `#` comments removed."""
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield number, body.split()


def _ints(tokens, number: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", line=number) from None


def _edge_mask(values: list[int], n: int, number: int) -> int:
    for v in values:
        if v < 0 or v >= n:
            raise ParseError(f"vertex id {v} outside [0,{n})", line=number)
    if len(set(values)) != len(values):
        raise ParseError("repeated vertex inside an edge", line=number)
    return mask_of(values)


def parse_uniform(text: str) -> UniformHypergraph:
    """Header `n k`, then one edge of exactly k vertex ids per line."""
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty hypergraph file")
    number, tokens = lines[0]
    header = _ints(tokens, number)
    if len(header) != 2:
        raise ParseError("header must be `n k`", line=number)
    n, k = header
    if n < 0 or k < 1:
        raise ParseError(f"invalid header n={n} k={k}", line=number)
    seen: dict[int, int] = {}
    for number, tokens in lines[1:]:
        values = _ints(tokens, number)
        if len(values) != k:
            raise ParseError(f"edge has {len(values)} vertices, expected {k}", line=number)
        m = _edge_mask(values, n, number)
        if m in seen:
            raise ParseError(f"duplicate edge (first seen on line {seen[m]})", line=number)
        seen[m] = number
    return UniformHypergraph(n, k, frozenset(seen))


def parse_complex(text: str) -> Complex:
    """Header `n`, then one generating edge (size >= 2) per line; closed downward on load."""
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty complex file")
    number, tokens = lines[0]
    header = _ints(tokens, number)
    if len(header) != 1 or header[0] < 0:
        raise ParseError("header must be a single vertex count `n`", line=number)
    n = header[0]
    seen: dict[int, int] = {}
    for number, tokens in lines[1:]:
        values = _ints(tokens, number)
        if len(values) < 2:
            raise ParseError("generating edges need at least 2 vertices", line=number)
        m = _edge_mask(values, n, number)
        if m in seen:
            raise ParseError(f"duplicate edge (first seen on line {seen[m]})", line=number)
        seen[m] = number
    maximal = maximal_masks(seen)
    if len(maximal) != len(seen):
        logger.warning(f"Input is not an antichain: dropped {len(seen) - len(maximal)} non-maximal edge(s)")
    return Complex(GeneratingSet(n, frozenset(maximal)))


def sniff_kind(text: str) -> str:
    """'uniform' for an `n k` header, 'complex' for an `n` header."""
    for _, tokens in _content_lines(text):
        return "uniform" if len(tokens) == 2 else "complex"
    raise ParseError("empty file")


# ==========================================
# Emission
# ==========================================

def _edge_text(edge) -> str:
    return " ".join(str(v) for v in edge)


def _shape(obj) -> tuple[tuple[str, ...], list[tuple], object]:
    """(columns, rows, JSON payload) for every object the CLI prints."""
    if isinstance(obj, SuiteReport):
        rows = [(r.instance, r.expected, r.actual, r.status) for r in obj.rows]
        return VERIFY_COLUMNS, rows, obj.to_dict()
    if isinstance(obj, SearchResult):
        d = obj.to_dict()
        return RESULT_COLUMNS, [tuple(d[c] for c in RESULT_COLUMNS)], d
    if isinstance(obj, CliqueCount):
        rows = sorted(obj.by_order.items())
        payload = {
            "by_order": {str(r): c for r, c in rows},
            "total_geq_k": obj.total_geq_k,
            "total_all": obj.total_all,
        }
        return CLIQUE_COLUMNS, rows, payload
    if isinstance(obj, FormulaValue):
        rows = list(obj.terms) + [("total", obj.value)]
        return ("term", "value"), rows, {"value": obj.value, "terms": [list(t) for t in obj.terms]}
    if isinstance(obj, UniformHypergraph):
        edges = obj.edge_list()
        return ("edge",), [(_edge_text(e),) for e in edges], {"n": obj.n, "k": obj.k, "edges": [list(e) for e in edges]}
    if isinstance(obj, (Complex, GeneratingSet)):
        gens = obj.gens if isinstance(obj, Complex) else obj
        edges = gens.edge_list()
        return ("generator",), [(_edge_text(e),) for e in edges], {"n": gens.n, "generators": [list(e) for e in edges]}
    if is_dataclass(obj):
        obj = asdict(obj)
    if isinstance(obj, dict):
        return ("key", "value"), [(k, _plain(v)) for k, v in sorted(obj.items())], obj
    raise TypeError(f"cannot emit {type(obj).__name__}")


def _plain(value):
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    return value


def _json_default(value):
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    return str(value)


def _structure_text(obj) -> str:
    if isinstance(obj, UniformHypergraph):
        head, edges = f"{obj.n} {obj.k}", obj.edge_list()
    else:
        gens = obj.gens if isinstance(obj, Complex) else obj
        head, edges = f"{gens.n}", gens.edge_list()
    return "\n".join([head] + [_edge_text(e) for e in edges]) + "\n"


def _table(columns, rows) -> str:
    cells = [tuple(str(c) for c in columns)] + [tuple(str(c) for c in row) for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def emit(obj, fmt: str = "table") -> str:
    """
    Deterministic text for a result object.

    Structures (hypergraphs, complexes) render as their input file format in
    `table` mode, so parse(emit(x)) gives x back.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")
    columns, rows, payload = _shape(obj)
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2, default=_json_default) + "\n"
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)
        return buffer.getvalue()
    if isinstance(obj, (UniformHypergraph, Complex, GeneratingSet)):
        return _structure_text(obj)
    text = _table(columns, rows)
    notes = [f"  {r.instance}: {r.note}" for r in getattr(obj, "rows", []) if getattr(r, "note", "")]
    if notes:
        text += "notes:\n" + "\n".join(notes) + "\n"
    return text


# ==========================================
# File access
# ==========================================

class FileLoader:
    """
    A utility class handling all file read/write operations for the CLI.
    """

    def __init__(self):
        self.logger = logging.getLogger("FileLoader")

    def load(self, file_path: str) -> str:
        """
        [Unified Read Interface]
        Reads a text file; a missing file is a ParseError, not an empty string.
        """
        if not os.path.exists(file_path):
            raise ParseError(f"file not found: {file_path}")
        with open(file_path, "r", encoding="utf-8") as f:
            return f.read()

    def load_uniform(self, file_path: str) -> UniformHypergraph:
        return parse_uniform(self.load(file_path))

    def load_complex(self, file_path: str) -> Complex:
        return parse_complex(self.load(file_path))

    def load_any(self, file_path: str) -> UniformHypergraph | Complex:
        text = self.load(file_path)
        return parse_uniform(text) if sniff_kind(text) == "uniform" else parse_complex(text)

    def save(self, content: str, file_path: str) -> str:
        """[Write Interface] Writes emitted text, creating parent directories on demand."""
        directory = os.path.dirname(file_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(file_path, "w", encoding="utf-8") as f:
            f.write(content)
        self.logger.info(f"Saved output: {file_path}")
        return file_path
