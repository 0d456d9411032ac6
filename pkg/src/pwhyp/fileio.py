"""Line-oriented text formats for complexes and metric assignments.

Complex file sections:
    [mode]            closed | patch
    [vertices]        one name per line
    [edges]           name label q v_from v_to
    [chambers]        name: e1+ e2- ...     (+ traverses v_from -> v_to)

Metric file sections:
    [edge_lengths]    name value            (optional, cross-checked)
    [chambers.angles] name: normal a1 .. an (normal polygon with these angles)
                      name: a1 .. an        (explicit realization; needs
                                             edge lengths for the boundary walk)

Floats are written with 17 significant digits.
"""

import hashlib
from typing import Dict, List, Optional, Tuple

from .building import Chamber, Complex, Edge, MetricAssignment
from .polygon import polygon_from_boundary_walk, solve_normal_polygon


class ParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _sections(text: str):
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip().lower()
            continue
        if current is None:
            raise ParseError(lineno, "content before any section header")
        yield current, lineno, line


def parse_complex(text: str) -> Complex:
    mode = None
    vertices: List[str] = []
    edges: List[Edge] = []
    chambers: List[Chamber] = []
    for section, lineno, line in _sections(text):
        if section == "mode":
            if line not in ("closed", "patch"):
                raise ParseError(lineno, f"unknown mode {line!r}")
            mode = line
        elif section == "vertices":
            vertices.extend(line.split())
        elif section == "edges":
            parts = line.split()
            if len(parts) != 5:
                raise ParseError(lineno, "expected: name label q v_from v_to")
            name, label, q, vf, vt = parts
            try:
                edges.append(Edge(name, int(label), int(q), vf, vt))
            except ValueError:
                raise ParseError(lineno, "label and q must be integers")
        elif section == "chambers":
            if ":" not in line:
                raise ParseError(lineno, "expected: name: e1+ e2- ...")
            name, tail = line.split(":", 1)
            sides = []
            for tok in tail.split():
                if tok[-1] not in "+-":
                    raise ParseError(lineno, f"side {tok!r} needs a +/- orientation")
                sides.append((tok[:-1], 1 if tok[-1] == "+" else -1))
            chambers.append(Chamber(name.strip(), tuple(sides)))
        else:
            raise ParseError(lineno, f"unknown section [{section}]")
    if mode is None:
        raise ParseError(0, "missing [mode] section")
    return Complex(vertices, edges, chambers, mode)


def parse_metric(cx: Complex, text: str) -> MetricAssignment:
    lengths: Dict[str, float] = {}
    specs: Dict[str, Tuple[bool, List[float]]] = {}
    for section, lineno, line in _sections(text):
        if section == "edge_lengths":
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(lineno, "expected: edge_name value")
            lengths[parts[0]] = float(parts[1])
        elif section == "chambers.angles":
            if ":" not in line:
                raise ParseError(lineno, "expected: chamber: [normal] a1 .. an")
            name, tail = line.split(":", 1)
            toks = tail.split()
            normal = bool(toks) and toks[0] == "normal"
            if normal:
                toks = toks[1:]
            try:
                angles = [float(t) for t in toks]
            except ValueError:
                raise ParseError(lineno, "angles must be floats")
            specs[name.strip()] = (normal, angles)
        else:
            raise ParseError(lineno, f"unknown section [{section}]")

    for name in lengths:
        if name not in cx.edge_index:
            raise ParseError(0, f"edge_lengths names unknown edge {name!r}")
    polys = []
    for ci, chamber in enumerate(cx.chambers):
        if chamber.name not in specs:
            raise ParseError(0, f"no angles for chamber {chamber.name}")
        normal, angles = specs[chamber.name]
        if len(angles) != len(chamber.sides):
            raise ParseError(0, f"chamber {chamber.name}: expected "
                                f"{len(chamber.sides)} angles, got {len(angles)}")
        if normal:
            polys.append(solve_normal_polygon(angles))
        else:
            side_lengths = []
            for ename, _ in chamber.sides:
                if ename not in lengths:
                    raise ParseError(0, f"explicit chamber {chamber.name} needs "
                                        f"[edge_lengths] for edge {ename}")
                side_lengths.append(lengths[ename])
            polys.append(polygon_from_boundary_walk(angles, side_lengths))
    declared = [lengths.get(e.name) for e in cx.edges]
    return MetricAssignment(cx, polys, edge_length=declared)


def format_metric(metric: MetricAssignment) -> str:
    cx = metric.complex
    out = ["[edge_lengths]"]
    for e, ln in zip(cx.edges, metric.edge_length):
        out.append(f"{e.name} {ln:.17g}")
    out.append("[chambers.angles]")
    for ch, poly in zip(cx.chambers, metric.chamber_geometry):
        keyword = "normal " if poly.inradius is not None else ""
        out.append(f"{ch.name}: {keyword}" + " ".join(f"{a:.17g}" for a in poly.angles))
    return "\n".join(out) + "\n"


def file_digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def load_data_text(name: str) -> str:
    from importlib.resources import files

    return files("pwhyp.data").joinpath(name).read_text()


def load_complex(path_or_name: str) -> Complex:
    return parse_complex(_read(path_or_name))


def load_metric(cx: Complex, path_or_name: str) -> MetricAssignment:
    return parse_metric(cx, _read(path_or_name))


def _read(path_or_name: str) -> str:
    import os

    if os.path.exists(path_or_name):
        with open(path_or_name) as fh:
            return fh.read()
    try:
        return load_data_text(path_or_name)
    except FileNotFoundError:
        raise FileNotFoundError(f"no such file or bundled dataset: {path_or_name}")
