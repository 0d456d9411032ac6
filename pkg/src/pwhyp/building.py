"""Labeled polygonal 2-complexes and piecewise hyperbolic metric assignments.

A Complex is the combinatorial quotient datum: labeled edges with declared
branching numbers q(e), chambers as cyclic (edge, orientation) sequences,
and a mode flag.  Closed complexes have every edge in exactly q(e) chamber
sides; patches may have fewer, with q(e) recording the ambient branching.
A MetricAssignment realizes each chamber as a convex hyperbolic polygon
with glued side lengths matched across edges.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import minkowski as mk
from .config import DEFAULT, Tolerances
from .mgon import LinkGraph, girth, validate_generalized_mgon
from .polygon import HyperbolicPolygon, polygon_area


class IncidenceError(ValueError):
    pass


class LabelError(ValueError):
    pass


class SingularVertex(RuntimeError):
    """Wall continuation undefined where the link is not exactly 2*pi."""


@dataclass(frozen=True)
class Edge:
    name: str
    label: int
    q: int
    v_from: str
    v_to: str


@dataclass(frozen=True)
class Chamber:
    name: str
    # boundary as (edge name, +1/-1); +1 traverses v_from -> v_to
    sides: Tuple[Tuple[str, int], ...]


class Complex:
    """Validated polygonal 2-complex.

    Side slots are global indices enumerating (chamber, side) pairs; most
    downstream machinery (flows, windows) works in slot terms.
    """

    def __init__(self, vertices: Sequence[str], edges: Sequence[Edge],
                 chambers: Sequence[Chamber], mode: str):
        if mode not in ("closed", "patch"):
            raise ValueError(f"mode must be closed|patch, got {mode!r}")
        self.mode = mode
        self.vertices = list(vertices)
        self.edges = list(edges)
        self.chambers = list(chambers)
        self.edge_index = {e.name: i for i, e in enumerate(edges)}
        self.vertex_index = {v: i for i, v in enumerate(vertices)}
        self.chamber_index = {c.name: i for i, c in enumerate(chambers)}
        if len(self.edge_index) != len(edges):
            raise IncidenceError("duplicate edge name")
        if len(self.chamber_index) != len(chambers):
            raise IncidenceError("duplicate chamber name")

        # global side slots
        self.slot_chamber: List[int] = []
        self.slot_side: List[int] = []
        self.slot_edge: List[int] = []
        self.slot_sign: List[int] = []
        self.chamber_slots: List[List[int]] = []
        for ci, ch in enumerate(chambers):
            slots = []
            for si, (ename, sign) in enumerate(ch.sides):
                if ename not in self.edge_index:
                    raise IncidenceError(f"chamber {ch.name} uses unknown edge {ename}")
                slots.append(len(self.slot_chamber))
                self.slot_chamber.append(ci)
                self.slot_side.append(si)
                self.slot_edge.append(self.edge_index[ename])
                self.slot_sign.append(sign)
            self.chamber_slots.append(slots)
        self.edge_slots: List[List[int]] = [[] for _ in edges]
        for slot, ei in enumerate(self.slot_edge):
            self.edge_slots[ei].append(slot)

        self._validate()
        self.vertex_m = self._derive_vertex_m()

    # -- structural validation ------------------------------------------------

    def side_endpoints(self, slot: int) -> Tuple[str, str]:
        """Vertices at the start and end of a side slot's traversal."""
        e = self.edges[self.slot_edge[slot]]
        return (e.v_from, e.v_to) if self.slot_sign[slot] > 0 else (e.v_to, e.v_from)

    def _validate(self):
        for e in self.edges:
            if e.v_from not in self.vertex_index or e.v_to not in self.vertex_index:
                raise IncidenceError(f"edge {e.name} has unknown endpoint")
            if e.q < 1:
                raise IncidenceError(f"edge {e.name} has q < 1")
            count = len(self.edge_slots[self.edge_index[e.name]])
            if self.mode == "closed" and count != e.q:
                raise IncidenceError(
                    f"edge {e.name}: {count} chamber sides but q={e.q} in closed mode")
            if self.mode == "patch" and count > e.q:
                raise IncidenceError(
                    f"edge {e.name}: {count} chamber sides exceeds declared q={e.q}")
        for ci, ch in enumerate(self.chambers):
            n = len(ch.sides)
            if n < 3:
                raise IncidenceError(f"chamber {ch.name} has fewer than 3 sides")
            for si in range(n):
                slot = self.chamber_slots[ci][si]
                nxt = self.chamber_slots[ci][(si + 1) % n]
                if self.side_endpoints(slot)[1] != self.side_endpoints(nxt)[0]:
                    raise IncidenceError(
                        f"chamber {ch.name}: sides {si} and {(si + 1) % n} do not share a vertex")
            labels = [self.edges[self.slot_edge[s]].label for s in self.chamber_slots[ci]]
            k = len(set(labels))
            for si in range(n):
                if labels[(si + 1) % n] - labels[si] not in (1, 1 - k):
                    raise LabelError(
                        f"chamber {ch.name}: labels {labels} not cyclic 1..{k}")

    def _derive_vertex_m(self) -> Dict[str, int]:
        """Gon parameter per vertex from the link girth; the two labels at a
        vertex must be cyclically consecutive."""
        k = max((e.label for e in self.edges), default=1)
        out = {}
        for v in self.vertices:
            labels = set()
            for slot in range(len(self.slot_edge)):
                a, b = self.side_endpoints(slot)
                if v in (a, b):
                    labels.add(self.edges[self.slot_edge[slot]].label)
            if not labels:
                continue
            if len(labels) > 2:
                raise LabelError(f"vertex {v} meets labels {sorted(labels)}")
            if len(labels) == 2:
                a, b = sorted(labels)
                if (b - a) % k not in (1 % k, (k - 1) % k):
                    raise LabelError(
                        f"vertex {v} meets non-consecutive labels {a}, {b}")
            link = self.vertex_link(v)
            if link.n == 0 or not link.edges:
                continue
            g = girth(link)
            out[v] = g // 2 if g else 0
        return out

    # -- links -----------------------------------------------------------------

    def corner_list(self, v: str) -> List[Tuple[int, int]]:
        """Chamber corners at v as (chamber, vertex position) pairs; the corner
        at position j sits between sides j-1 and j."""
        corners = []
        for ci, ch in enumerate(self.chambers):
            n = len(ch.sides)
            for si in range(n):
                prev_slot = self.chamber_slots[ci][(si - 1) % n]
                if self.side_endpoints(prev_slot)[1] == v:
                    corners.append((ci, si))
        return corners

    def vertex_link(self, v: str, corner_angles: Optional[Dict[Tuple[int, int], float]] = None
                    ) -> LinkGraph:
        """Link graph at v: vertices are edge-ends, edges are chamber corners.

        An edge with both endpoints at v contributes two link vertices (its
        two ends).  With a metric's corner angles supplied the link carries
        the induced weights.
        """
        ends = []  # (edge index, end) with end 0 = v_from side, 1 = v_to side
        for ei, e in enumerate(self.edges):
            if e.v_from == v:
                ends.append((ei, 0))
            if e.v_to == v:
                ends.append((ei, 1))
        end_index = {x: i for i, x in enumerate(ends)}
        colors = [self.edges[ei].label for ei, _ in ends]
        edges = []
        weights = [] if corner_angles is not None else None
        for ci, si in self.corner_list(v):
            n = len(self.chambers[ci].sides)
            prev_slot = self.chamber_slots[ci][(si - 1) % n]
            cur_slot = self.chamber_slots[ci][si]
            # the corner joins the arriving end of the previous side with the
            # departing end of the current side
            pe = self.slot_edge[prev_slot]
            pe_end = 1 if self.slot_sign[prev_slot] > 0 else 0
            ce = self.slot_edge[cur_slot]
            ce_end = 0 if self.slot_sign[cur_slot] > 0 else 1
            edges.append((end_index[(pe, pe_end)], end_index[(ce, ce_end)]))
            if weights is not None:
                weights.append(corner_angles[(ci, si)])
        labels = [f"{self.edges[ei].name}.{'ft'[end]}" for ei, end in ends]
        m = None
        g = LinkGraph(len(ends), colors, edges, m, weights, labels)
        return g

    # -- aggregates --------------------------------------------------------

    def edge(self, name: str) -> Edge:
        return self.edges[self.edge_index[name]]

    def slot_of(self, chamber: str, side: int) -> int:
        return self.chamber_slots[self.chamber_index[chamber]][side]

    def describe(self) -> str:
        return (f"{self.mode} complex: {len(self.vertices)} vertices, "
                f"{len(self.edges)} edges, {len(self.chambers)} chambers")


@dataclass
class MetricAssignment:
    """Per-chamber hyperbolic polygon realizations with matched edge lengths."""

    complex: Complex
    chamber_geometry: List[HyperbolicPolygon]
    edge_length: List[float] = field(default=None)
    corner_angle: Dict[Tuple[int, int], float] = field(default=None)

    def __post_init__(self, tol: Tolerances = DEFAULT):
        cx = self.complex
        if len(self.chamber_geometry) != len(cx.chambers):
            raise ValueError("one polygon per chamber required")
        lengths = [None] * len(cx.edges)
        for ci, poly in enumerate(self.chamber_geometry):
            if poly.n != len(cx.chambers[ci].sides):
                raise ValueError(f"chamber {cx.chambers[ci].name}: polygon has wrong side count")
            for si in range(poly.n):
                ei = cx.slot_edge[cx.chamber_slots[ci][si]]
                got = poly.side_lengths[si]
                if lengths[ei] is None:
                    lengths[ei] = got
                elif abs(lengths[ei] - got) > tol.geometric:
                    raise ValueError(
                        f"edge {cx.edges[ei].name}: glued side lengths differ, "
                        f"{lengths[ei]} vs {got}")
        if self.edge_length is not None:
            for ei, declared in enumerate(self.edge_length):
                if declared is not None and abs(declared - lengths[ei]) > tol.geometric:
                    raise ValueError(
                        f"edge {cx.edges[ei].name}: declared length {declared} "
                        f"!= realized {lengths[ei]}")
        self.edge_length = lengths
        if self.corner_angle is None:
            self.corner_angle = {
                (ci, vi): poly.angles[vi]
                for ci, poly in enumerate(self.chamber_geometry)
                for vi in range(poly.n)
            }

    def weighted_link(self, v: str) -> LinkGraph:
        return self.complex.vertex_link(v, self.corner_angle)


def total_volume(metric: MetricAssignment) -> float:
    return sum(polygon_area(p) for p in metric.chamber_geometry)


@dataclass
class LinkCheck:
    vertex: str
    m: int
    satisfied: bool
    thick: bool
    witness_cycle: Optional[Tuple[int, ...]]
    witness_total: Optional[float]


@dataclass
class LargeLinkReport:
    mode: str
    checks: List[LinkCheck]

    @property
    def passed(self) -> bool:
        return all(c.satisfied for c in self.checks)

    def lines(self) -> List[str]:
        out = []
        for c in self.checks:
            status = "ok" if c.satisfied else "FAIL"
            line = f"vertex {c.vertex}: m={c.m} {status}"
            if c.witness_cycle is not None:
                line += f" witness cycle total {c.witness_total:.12g}"
            out.append(line)
        out.append(f"{self.mode}: " + ("PASS" if self.passed else "FAIL"))
        return out


def check_large_link(metric: MetricAssignment, mode: str = "Exactly2Pi",
                     tol: Tolerances = DEFAULT) -> LargeLinkReport:
    """Check the angle-sum condition over every 2m-cycle of every link.

    AtLeast2Pi is the nonpositive-curvature threshold; Exactly2Pi certifies
    non-singular vertices, and then every corner of a thick link must equal
    pi/m (the equal-angle rigidity corollary, asserted here).
    """
    from .mgon import cycle_weight, enumerate_2m_cycles

    if mode not in ("AtLeast2Pi", "Exactly2Pi"):
        raise ValueError(mode)
    cx = metric.complex
    twopi = 2 * math.pi
    checks = []
    for v in cx.vertices:
        m = cx.vertex_m.get(v)
        if not m:
            continue
        link = metric.weighted_link(v)
        thick = all(link.degree(i) >= 3 for i in range(link.n))
        ok, wit, wit_total = True, None, None
        for cyc in enumerate_2m_cycles(link, m):
            w = cycle_weight(link, cyc)
            bad = (w < twopi - tol.geometric) if mode == "AtLeast2Pi" else (
                abs(w - twopi) > tol.geometric)
            if bad:
                ok, wit, wit_total = False, cyc, w
                break
        if ok and mode == "Exactly2Pi" and thick:
            rep = validate_generalized_mgon(link, m)
            if rep.passed:
                # non-singular vertices force every corner to the
                # combinatorial angle pi/m on thick links
                for eid, w in enumerate(link.edge_weights):
                    if abs(w - math.pi / m) > tol.geometric:
                        raise AssertionError(
                            f"vertex {v}: all 2m-cycles are 2pi but corner "
                            f"{link.label(eid)} is {w}, not pi/{m}")
        checks.append(LinkCheck(v, m, ok, thick, wit, wit_total))
    return LargeLinkReport(mode, checks)


@dataclass
class BalanceReport:
    lhs: float
    rhs: float
    link_volume_total: float
    balanced: bool


class DimensionMismatch(ValueError):
    pass


def gauss_bonnet_balance(n: int, chamber_count: int,
                         angle_table: Sequence[Sequence[float]],
                         curvature_integrals: Sequence[float],
                         tol: Tolerances = DEFAULT) -> BalanceReport:
    """Check sum_C int_C K = -|P| pi (n-2) + sum of all corner angles.

    Accepts abstract curvature integrals so the volume-comparison bookkeeping
    can be exercised for non-hyperbolic chamber data; the corner-angle total
    equals the aggregate link volume sum_v Vol(lk(v)).
    """
    if len(angle_table) != chamber_count or len(curvature_integrals) != chamber_count:
        raise DimensionMismatch("tables must have one row per chamber")
    if any(len(row) != n for row in angle_table):
        raise DimensionMismatch(f"every chamber must have {n} corner angles")
    theta_total = float(sum(sum(row) for row in angle_table))
    lhs = float(sum(curvature_integrals))
    rhs = -chamber_count * math.pi * (n - 2) + theta_total
    return BalanceReport(lhs, rhs, theta_total, abs(lhs - rhs) <= tol.geometric)


@dataclass
class WallSegment:
    """Edge path obtained by straight (link-antipodal) continuation."""

    edges: List[str]
    directions: List[int]
    closed: bool
    hit_boundary: bool

    @property
    def length(self) -> int:
        return len(self.edges)

    def metric_length(self, metric: MetricAssignment) -> float:
        cx = metric.complex
        return sum(metric.edge_length[cx.edge_index[e]] for e in self.edges)


def trace_wall(metric: MetricAssignment, start_edge: str, direction: int = 1,
               tol: Tolerances = DEFAULT) -> WallSegment:
    """Extend an edge through vertices by link-antipodal continuation.

    At each interior vertex the continuation is an edge-end at weighted link
    distance exactly pi (combinatorial distance m).  Requires the traversed
    vertices to satisfy Exactly2Pi; ambiguity is resolved deterministically
    by smallest link index.  Stops on revisiting a directed edge (closed
    wall) or on reaching a patch boundary vertex with no continuation.
    """
    cx = metric.complex
    edges = [start_edge]
    dirs = [direction]
    seen = {(start_edge, direction)}
    while True:
        e = cx.edge(edges[-1])
        v = e.v_to if dirs[-1] > 0 else e.v_from
        m = cx.vertex_m.get(v)
        link = metric.weighted_link(v)
        entry = None
        for i in range(link.n):
            want = f"{e.name}.{'t' if dirs[-1] > 0 else 'f'}"
            if link.label(i) == want:
                entry = i
                break
        if entry is None:
            return WallSegment(edges, dirs, False, True)
        dist, comb = _weighted_dist(link, entry)
        best = None
        for i in range(link.n):
            if i == entry:
                continue
            if abs(dist[i] - math.pi) <= tol.geometric and (m is None or comb[i] == m):
                best = i
                break
        if best is None:
            if cx.mode == "closed":
                raise SingularVertex(
                    f"vertex {v}: no edge-end at link distance pi from {e.name}")
            return WallSegment(edges, dirs, False, True)
        ename, end = link.label(best).rsplit(".", 1)
        ndir = 1 if end == "f" else -1
        if (ename, ndir) in seen:
            return WallSegment(edges, dirs, True, False)
        seen.add((ename, ndir))
        edges.append(ename)
        dirs.append(ndir)


def _weighted_dist(link: LinkGraph, src: int):
    """Dijkstra over corner weights, tracking combinatorial step counts."""
    import heapq

    dist = [math.inf] * link.n
    comb = [0] * link.n
    dist[src] = 0.0
    heap = [(0.0, 0, src)]
    while heap:
        d, steps, u = heapq.heappop(heap)
        if d > dist[u] + 1e-15:
            continue
        for w, eid in link.neighbors(u):
            weight = link.edge_weights[eid] if link.edge_weights else 1.0
            nd = d + weight
            if nd < dist[w] - 1e-15:
                dist[w] = nd
                comb[w] = steps + 1
                heapq.heappush(heap, (nd, steps + 1, w))
    return dist, comb
