"""Text formats: graph files, barcode CSV/JSON, witness and certificate JSON.

Two input dialects are accepted and auto-detected by their first
non-comment line:

* flag files: a ``dim 0`` header, one line of vertex filtration values,
  then ``dim 1`` followed by ``src dst [weight]`` lines;
* plain edge lists: a ``vertices <n>`` header followed by ``src dst
  [weight]`` lines.

Weights and times are exact rationals (``3``, ``0.5`` and ``1/3`` all
parse exactly); ``inf`` is the literal for infinite deaths in barcode
output.  Self-loops and duplicate edges are hard errors, never repaired.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .chains import MultiStepWitness
from .digraph import INF, Digraph, VertexMap, WeightedDigraph, is_finite
from .persistence import Bar, Barcode, InterleavingCertificate


class ParseError(Exception):
    """Input rejected; carries the 1-based line number."""

    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


def format_rational(x):
    if not is_finite(x):
        return "inf"
    return str(Fraction(x))


def parse_rational(token, line):
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(line, f"not a rational number: {token!r}") from None


@dataclass(frozen=True)
class ParsedGraph:
    """A graph file: vertex count, optional per-vertex values, edges."""

    vertex_count: int
    vertex_values: tuple | None
    edges: tuple  # ((u, v), weight-or-None) in file order

    def digraph(self):
        return Digraph.from_edges(self.vertex_count,
                                  [e for e, _ in self.edges])

    def weighted(self):
        missing = [e for e, w in self.edges if w is None]
        if missing:
            raise ParseError(0, f"edge {missing[0]} has no weight; "
                             "a weighted graph is required")
        return WeightedDigraph.from_edges(
            self.vertex_count, [(u, v, w) for (u, v), w in self.edges])


def _content_lines(text):
    for num, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield num, line


def parse_graph_text(text):
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError(1, "empty input")
    num, first = lines[0]
    if first.lower().startswith("dim"):
        return _parse_flag_file(lines)
    if first.lower().startswith("vertices"):
        return _parse_edge_list(lines)
    raise ParseError(num, "expected a 'dim 0' or 'vertices <n>' header")


def _parse_edge_header(tokens, num, vertex_count):
    if len(tokens) not in (2, 3):
        raise ParseError(num, "expected 'src dst [weight]'")
    try:
        u, v = int(tokens[0]), int(tokens[1])
    except ValueError:
        raise ParseError(num, "vertex indices must be integers") from None
    if not (0 <= u < vertex_count and 0 <= v < vertex_count):
        raise ParseError(num, f"vertex index out of range: {u} {v}")
    if u == v:
        raise ParseError(num, f"self-loop at vertex {u}")
    w = None
    if len(tokens) == 3:
        w = parse_rational(tokens[2], num)
        if not w > 0:
            raise ParseError(num, f"weight must be positive, got {w}")
    return (u, v), w


def _parse_flag_file(lines):
    num0, header = lines[0]
    if header.lower().replace(" ", "") != "dim0":
        raise ParseError(num0, "flag file must start with 'dim 0'")
    if len(lines) < 2:
        raise ParseError(num0, "missing vertex value line after 'dim 0'")
    num1, values_line = lines[1]
    values = tuple(parse_rational(tok, num1) for tok in values_line.split())
    if not values:
        raise ParseError(num1, "no vertex values")
    vertex_count = len(values)
    edges = []
    rest = lines[2:]
    if rest:
        num2, dim1 = rest[0]
        if dim1.lower().replace(" ", "") != "dim1":
            raise ParseError(num2, "expected 'dim 1' after the vertex values")
        seen = set()
        for num, line in rest[1:]:
            if line.lower().startswith("dim"):
                raise ParseError(num, "only dimensions 0 and 1 are supported")
            edge, w = _parse_edge_header(line.split(), num, vertex_count)
            if edge in seen:
                raise ParseError(num, f"duplicate edge {edge}")
            seen.add(edge)
            edges.append((edge, w))
    return ParsedGraph(vertex_count, values, tuple(edges))


def _parse_edge_list(lines):
    num0, header = lines[0]
    tokens = header.split()
    if len(tokens) != 2:
        raise ParseError(num0, "expected 'vertices <n>'")
    try:
        vertex_count = int(tokens[1])
    except ValueError:
        raise ParseError(num0, "vertex count must be an integer") from None
    if vertex_count < 0:
        raise ParseError(num0, "vertex count must be nonnegative")
    edges = []
    seen = set()
    for num, line in lines[1:]:
        edge, w = _parse_edge_header(line.split(), num, vertex_count)
        if edge in seen:
            raise ParseError(num, f"duplicate edge {edge}")
        seen.add(edge)
        edges.append((edge, w))
    return ParsedGraph(vertex_count, None, tuple(edges))


def parse_graph_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph_text(fh.read())


def serialize_flag_file(parsed):
    """Canonical flag-file text; parse(serialize(parse(x))) == parse(x)."""
    values = parsed.vertex_values
    if values is None:
        values = (Fraction(0),) * parsed.vertex_count
    out = ["dim 0", " ".join(format_rational(v) for v in values), "dim 1"]
    for (u, v), w in sorted(parsed.edges):
        if w is None:
            out.append(f"{u} {v}")
        else:
            out.append(f"{u} {v} {format_rational(w)}")
    return "\n".join(out) + "\n"


# --- barcodes ----------------------------------------------------------------

def barcode_to_csv(barcode):
    rows = ["degree,birth,death"]
    for b in barcode.bars:
        rows.append(f"{b.degree},{format_rational(b.birth)},"
                    f"{format_rational(b.death)}")
    return "\n".join(rows) + "\n"


def barcode_to_json_obj(barcode):
    return {"bars": [{"degree": b.degree,
                      "birth": format_rational(b.birth),
                      "death": format_rational(b.death)}
                     for b in barcode.bars]}


def barcode_from_csv(text):
    bars = []
    lines = text.strip().splitlines()
    if not lines or lines[0].strip() != "degree,birth,death":
        raise ParseError(1, "missing 'degree,birth,death' header")
    for num, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise ParseError(num, "expected 'degree,birth,death'")
        degree = int(parts[0])
        birth = parse_rational(parts[1], num)
        death = INF if parts[2].strip() == "inf" else parse_rational(parts[2], num)
        bars.append(Bar(degree, birth, death))
    return Barcode.from_bars(bars)


# --- witnesses and certificates ------------------------------------------------

def digraph_to_json_obj(G):
    obj = {"vertices": G.vertex_count,
           "edges": [list(e) for e in sorted(G.edges)]}
    if G.labels is not None:
        obj["labels"] = list(G.labels)
    return obj


def digraph_from_json_obj(obj):
    labels = obj.get("labels")
    return Digraph.from_edges(obj["vertices"], [tuple(e) for e in obj["edges"]],
                              labels=tuple(labels) if labels else None)


def witness_to_json_obj(witness, target_count):
    return {"maps": [list(m.image) for m in witness.maps],
            "directions": list(witness.directions),
            "target_vertices": target_count}


def witness_from_json_obj(obj, source_count=None, target_count=None):
    target_count = target_count if target_count is not None \
        else obj["target_vertices"]
    maps = []
    for image in obj["maps"]:
        n = source_count if source_count is not None else len(image)
        maps.append(VertexMap(n, target_count, tuple(image)))
    return MultiStepWitness(tuple(maps), tuple(obj["directions"]))


def search_result_to_json_obj(result, system, G, H):
    obj = {"system": str(system),
           "status": result.status,
           "explored": result.explored,
           "map_space": result.space_size,
           "source_graph": digraph_to_json_obj(G),
           "target_graph": digraph_to_json_obj(H)}
    if result.witness is not None:
        obj["witness"] = witness_to_json_obj(result.witness, H.vertex_count)
    return obj


def equivalence_certificate_to_json_obj(cert, system):
    return {"system": str(system),
            "source_graph": digraph_to_json_obj(cert.G),
            "target_graph": digraph_to_json_obj(cert.H),
            "f": list(cert.f.image),
            "g": list(cert.g.image),
            "witness_gf": witness_to_json_obj(cert.witness_gf,
                                              cert.G.vertex_count),
            "witness_fg": witness_to_json_obj(cert.witness_fg,
                                              cert.H.vertex_count)}


def equivalence_certificate_from_json_obj(obj):
    from .homotopy import EquivalenceCertificate
    G = digraph_from_json_obj(obj["source_graph"])
    H = digraph_from_json_obj(obj["target_graph"])
    return EquivalenceCertificate(
        G, H,
        VertexMap(G.vertex_count, H.vertex_count, tuple(obj["f"])),
        VertexMap(H.vertex_count, G.vertex_count, tuple(obj["g"])),
        witness_from_json_obj(obj["witness_gf"], G.vertex_count,
                              G.vertex_count),
        witness_from_json_obj(obj["witness_fg"], H.vertex_count,
                              H.vertex_count))


def interleaving_certificate_to_json_obj(cert):
    def witnesses(spec, target_count):
        if isinstance(spec, MultiStepWitness):
            return {"all": witness_to_json_obj(spec, target_count)}
        return {format_rational(t): witness_to_json_obj(w, target_count)
                for t, w in sorted(spec.items())}

    return {"delta": format_rational(cert.delta),
            "f": list(cert.f.image),
            "g": list(cert.g.image),
            "witnesses_m": witnesses(cert.witnesses_m, cert.g.target_count),
            "witnesses_n": witnesses(cert.witnesses_n, cert.f.target_count)}


def interleaving_certificate_from_json_obj(obj):
    n1 = len(obj["f"])
    n2 = len(obj["g"])

    def witnesses(spec, source_count, target_count):
        if set(spec) == {"all"}:
            return witness_from_json_obj(spec["all"], source_count,
                                         target_count)
        return {Fraction(t): witness_from_json_obj(w, source_count,
                                                   target_count)
                for t, w in spec.items()}

    return InterleavingCertificate(
        Fraction(obj["delta"]),
        VertexMap(n1, n2, tuple(obj["f"])),
        VertexMap(n2, n1, tuple(obj["g"])),
        witnesses(obj["witnesses_m"], n1, n1),
        witnesses(obj["witnesses_n"], n2, n2))


def dump_json(obj):
    """Deterministic JSON text: sorted keys, stable layout."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
