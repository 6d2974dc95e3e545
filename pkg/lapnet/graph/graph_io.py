# lapnet/graph/graph_io.py
import logging
import os

from .weighted_graph import GRAPH_KINDS, WeightedGraph, generate
from ..utils.errors import GraphFormatError, ModelValidationError
from ..utils.output import format_float

logger = logging.getLogger(__name__)


def parse_shorthand(spec):
    """`kind:N[:weight]`, e.g. `path:5` or `star:4:2`."""
    parts = spec.split(":")
    if len(parts) not in (2, 3) or parts[0] not in GRAPH_KINDS:
        raise GraphFormatError(f"invalid graph shorthand '{spec}', expected kind:N[:weight]", field="graph")
    try:
        n = int(parts[1])
        weight = float(parts[2]) if len(parts) == 3 else 1.0
    except ValueError as e:
        raise GraphFormatError(f"invalid graph shorthand '{spec}': {e}", field="graph") from e
    return generate(parts[0], n, weight)


def parse_edge_list(text):
    """
    Parses the edge-list format: a `nodes N` header, then one `i j w` line per edge.

    Blank lines and `#` comments are ignored.
    """
    n_nodes = None
    edges = []
    seen = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if n_nodes is None:
            if len(tokens) != 2 or tokens[0] != "nodes":
                raise GraphFormatError("expected header 'nodes N'", line=line_no)
            try:
                n_nodes = int(tokens[1])
            except ValueError:
                raise GraphFormatError(f"node count '{tokens[1]}' is not an integer", line=line_no)
            continue
        if len(tokens) != 3:
            raise GraphFormatError(f"expected 'i j w', got {len(tokens)} fields", line=line_no)
        try:
            i, j, w = int(tokens[0]), int(tokens[1]), float(tokens[2])
        except ValueError as e:
            raise GraphFormatError(f"could not parse edge: {e}", line=line_no)
        key = (min(i, j), max(i, j))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key} (first on line {seen[key]})", line=line_no)
        seen[key] = line_no
        edges.append((i, j, w))
    if n_nodes is None:
        raise GraphFormatError("missing 'nodes N' header")
    try:
        return WeightedGraph(n_nodes, edges)
    except ModelValidationError as e:
        raise GraphFormatError(str(e), field=e.field) from e


def load_graph(spec):
    """Loads a graph from an edge-list file or a `kind:N[:weight]` shorthand."""
    if os.path.isfile(spec):
        logger.info(f"Loading graph: {spec}")
        with open(spec, 'r', encoding='utf-8') as f:
            return parse_edge_list(f.read())
    if ":" in spec and spec.split(":", 1)[0] in GRAPH_KINDS:
        return parse_shorthand(spec)
    raise FileNotFoundError(f"Graph file not found: {spec}")


def format_edge_list(g):
    lines = [f"nodes {g.n_nodes}"]
    lines.extend(f"{i} {j} {format_float(w)}" for i, j, w in g.edges)
    return "\n".join(lines) + "\n"


def save_graph(g, file_path):
    with open(file_path, 'w', encoding='utf-8') as f:
        f.write(format_edge_list(g))
    logger.info(f"Saved graph with {g.n_edges} edges to {file_path}")
