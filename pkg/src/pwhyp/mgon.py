"""Finite generalized m-gon combinatorics.

A generalized m-gon is a bipartite graph of diameter m and girth 2m; these
are exactly the vertex links of thick 2-dimensional building quotients.
Everything here is desk scale: graphs have at most a few hundred vertices,
so cycle enumeration is exhaustive DFS with a depth cap.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

FEIT_HIGMAN = {2, 3, 4, 6, 8}


class NotBipartite(ValueError):
    pass


class Disconnected(ValueError):
    pass


class NotEmbedded(ValueError):
    pass


class PathTooLong(ValueError):
    pass


class ExtensionFailed(RuntimeError):
    """Extension per the link lemma failed; signals invalid (non-thick) input."""


class UnsupportedOrder(ValueError):
    pass


@dataclass
class LinkGraph:
    """2-colored multigraph with optional positive edge weights (corner angles).

    Edges are (u, v) pairs indexed by position; parallel edges are allowed
    since two chambers may share consecutive edges.  `labels` carries
    human-readable vertex names for witnesses.
    """

    n: int
    colors: List[int]
    edges: List[Tuple[int, int]]
    m: Optional[int] = None
    edge_weights: Optional[List[float]] = None
    labels: Optional[List[str]] = None
    _adj: List[List[Tuple[int, int]]] = field(default=None, repr=False)

    def __post_init__(self):
        if len(self.colors) != self.n:
            raise ValueError("color list does not match vertex count")
        adj = [[] for _ in range(self.n)]
        for eid, (u, v) in enumerate(self.edges):
            if u == v:
                raise ValueError(f"loop edge at vertex {u}")
            adj[u].append((v, eid))
            adj[v].append((u, eid))
        self._adj = adj
        if self.edge_weights is not None and len(self.edge_weights) != len(self.edges):
            raise ValueError("weight list does not match edge count")

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def neighbors(self, v: int):
        return self._adj[v]

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels else str(v)

    def with_weights(self, weights: Sequence[float]) -> "LinkGraph":
        return LinkGraph(self.n, list(self.colors), list(self.edges), self.m,
                         list(weights), self.labels)


def _bfs_dist(g: LinkGraph, src: int) -> List[int]:
    dist = [-1] * g.n
    dist[src] = 0
    queue = [src]
    for u in queue:
        for v, _ in g.neighbors(u):
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def girth(g: LinkGraph) -> int:
    """Shortest cycle length (BFS from every vertex, edge-distinct closure)."""
    best = math.inf
    for s in range(g.n):
        dist = [-1] * g.n
        par_edge = [-1] * g.n
        dist[s] = 0
        queue = [s]
        for u in queue:
            for v, eid in g.neighbors(u):
                if eid == par_edge[u]:
                    continue
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    par_edge[v] = eid
                    queue.append(v)
                else:
                    best = min(best, dist[u] + dist[v] + 1)
    return int(best) if best < math.inf else 0


def diameter(g: LinkGraph) -> int:
    worst = 0
    for s in range(g.n):
        dist = _bfs_dist(g, s)
        if min(dist) < 0:
            raise Disconnected("graph is disconnected")
        worst = max(worst, max(dist))
    return worst


def check_bipartite(g: LinkGraph):
    """The declared 2-coloring must be proper and use exactly two colors."""
    palette = sorted(set(g.colors))
    if len(palette) != 2:
        raise NotBipartite(f"expected exactly two colors, found {palette}")
    for u, v in g.edges:
        if g.colors[u] == g.colors[v]:
            raise NotBipartite(f"edge ({g.label(u)},{g.label(v)}) joins equal colors")
    return palette


@dataclass
class ValidationReport:
    passed: bool
    m: int
    girth: int
    diameter: int
    thick: bool
    regular: bool
    degrees: Dict[int, int]
    warnings: List[str]

    def lines(self) -> List[str]:
        out = [
            f"m={self.m} girth={self.girth} diameter={self.diameter} "
            f"thick={self.thick} regular={self.regular}",
            "degrees: " + " ".join(f"color{c}={d}" for c, d in sorted(self.degrees.items())),
        ]
        out += [f"warning: {w}" for w in self.warnings]
        out.append("PASS" if self.passed else "FAIL")
        return out


def validate_generalized_mgon(g: LinkGraph, m: int) -> ValidationReport:
    """Check girth = 2m and diameter = m; report thickness and regularity.

    An m outside the Feit-Higman set {2,3,4,6,8} is only a warning so the
    validator can also grade non-building graphs.
    """
    palette = check_bipartite(g)
    gir = girth(g)
    diam = diameter(g)
    warnings = []
    if m not in FEIT_HIGMAN:
        warnings.append(f"m={m} outside the admissible set {sorted(FEIT_HIGMAN)}")
    degrees: Dict[int, int] = {}
    regular = True
    for c in palette:
        degs = {g.degree(v) for v in range(g.n) if g.colors[v] == c}
        if len(degs) != 1:
            regular = False
            warnings.append(f"color {c} has mixed degrees {sorted(degs)}")
            degrees[c] = -1
        else:
            degrees[c] = degs.pop()
    thick = regular and all(d >= 3 for d in degrees.values())
    passed = (gir == 2 * m) and (diam == m) and regular
    return ValidationReport(passed, m, gir, diam, thick, regular, degrees, warnings)


# ---------------------------------------------------------------------------
# cycle enumeration


def cycles_through_edge(g: LinkGraph, eid: int, length: int) -> List[Tuple[int, ...]]:
    """All embedded cycles of the given length containing edge eid.

    Returned as vertex tuples starting u, v = edges[eid]; DFS with the depth
    cap, pruned by the remaining BFS distance back to the start.
    """
    u, v = g.edges[eid]
    dist_u = _bfs_dist(g, u)
    out = []
    path = [u, v]
    used = {u, v}

    def dfs(cur: int, steps_left: int):
        if steps_left == 0:
            return
        for w, e2 in g.neighbors(cur):
            if e2 == eid:
                continue
            if w == u and steps_left == 1:
                out.append(tuple(path))
                continue
            if w in used or dist_u[w] > steps_left - 1:
                continue
            used.add(w)
            path.append(w)
            dfs(w, steps_left - 1)
            path.pop()
            used.discard(w)

    dfs(v, length - 1)
    return out


def count_apartments_through_edge(g: LinkGraph, eid: int, m: int) -> Tuple[int, int]:
    """Exact count of 2m-cycles through an edge, next to the classical
    branching-count formula q_i^(m/2) q_{i+1}^(m/2) (q^m for odd m).

    The two numbers disagree in general (the formula counts with the full
    branching q rather than q-1); enumeration is the trusted value and both
    are reported.
    """
    found = cycles_through_edge(g, eid, 2 * m)
    exact = len(found)
    u, v = g.edges[eid]
    qi, qj = g.degree(u), g.degree(v)
    if m % 2 == 0:
        formula = (qi ** (m // 2)) * (qj ** (m // 2))
    else:
        formula = qi ** m
    return exact, formula


def enumerate_2m_cycles(g: LinkGraph, m: int) -> List[Tuple[int, ...]]:
    """All embedded 2m-cycles, deduplicated by their edge sets."""
    seen = set()
    out = []
    for eid in range(len(g.edges)):
        for cyc in cycles_through_edge(g, eid, 2 * m):
            key = frozenset(_cycle_edge_ids(g, cyc))
            if key not in seen:
                seen.add(key)
                out.append(cyc)
    return out


def _cycle_edge_ids(g: LinkGraph, cyc: Tuple[int, ...]) -> List[int]:
    ids = []
    used = set()
    for i in range(len(cyc)):
        u, v = cyc[i], cyc[(i + 1) % len(cyc)]
        for w, eid in g.neighbors(u):
            if w == v and eid not in used:
                ids.append(eid)
                used.add(eid)
                break
        else:
            raise ValueError("not a closed walk")
    return ids


def cycle_weight(g: LinkGraph, cyc: Tuple[int, ...]) -> float:
    return sum(g.edge_weights[eid] for eid in _cycle_edge_ids(g, cyc))


# ---------------------------------------------------------------------------
# link lemma: intervals extend to embedded circles


def _find_path(g, src, dst, length, forbidden, first_not=None):
    """Embedded path src -> dst with `length` edges avoiding `forbidden`
    interior vertices.  Returns the vertex list or None."""
    dist_dst = _bfs_dist(g, dst)
    path = [src]
    used = {src}

    def dfs(cur, left):
        if left == 0:
            return cur == dst
        for w, _ in g.neighbors(cur):
            if cur == src and first_not is not None and w == first_not:
                continue
            if w == dst:
                if left == 1:
                    path.append(w)
                    return True
                continue
            if w in used or w in forbidden or dist_dst[w] > left - 1:
                continue
            used.add(w)
            path.append(w)
            if dfs(w, left - 1):
                return True
            path.pop()
            used.discard(w)
        return False

    return path if dfs(src, length) else None


def extend_interval_to_cycle(g: LinkGraph, path: Sequence[int], m: int) -> List[int]:
    """Extend an embedded path of p <= 2m edges to an embedded cycle.

    Follows the constructive argument: short paths (p <= m+1) close up
    through an apartment; longer ones are completed through auxiliary
    segments around the midpoint, with the intermediate disjointness facts
    asserted.  Returns the cycle as a vertex list (no repeated endpoint).
    """
    path = list(path)
    p = len(path) - 1
    if len(set(path)) != len(path):
        raise NotEmbedded("path repeats a vertex")
    if p > 2 * m:
        raise PathTooLong(f"path has {p} > 2m = {2 * m} edges")
    if p < 1:
        raise NotEmbedded("need at least one edge")

    if p <= m + 1:
        ret = _find_path(g, path[-1], path[0], 2 * m - p, forbidden=set(path[1:-1]))
        if ret is None:
            raise ExtensionFailed("no apartment closes the short path")
        return path + ret[1:-1]

    # long case: split at the vertex m steps along
    v0, vp, vm = path[0], path[-1], path[m]
    a = path[: m + 1]          # v0 .. vm, m edges
    b = path[m:]               # vm .. vp, p - m edges
    for c in _candidate_paths(g, vm, v0, m, forbidden=set(a[1:-1]), first_not=b[1]):
        if set(c[1:-1]) & set(b):
            continue  # b and c may only meet at vm
        cut = 2 * m + 1 - p
        cprime = c[: cut + 1]
        tail = c[cut:]         # c minus c': from the end of c' back to v0
        for d in _candidate_paths(g, vp, cprime[-1], m - 1,
                                  forbidden=(set(b[1:-1]) | set(cprime[1:-1]))):
            if set(d) & set(a[1:-1]):
                continue  # the argument needs d disjoint from a's interior
            cycle = _assemble_cycle(a, b, d, tail)
            if cycle is not None and len(cycle) >= p:
                _verify_extension(g, cycle, path)
                return cycle
    raise ExtensionFailed("constructive extension found no embedded circle")


def _candidate_paths(g, src, dst, length, forbidden, first_not=None, cap=64):
    """Yield up to `cap` embedded paths src->dst of given length."""
    dist_dst = _bfs_dist(g, dst)
    out = []
    pathv = [src]
    used = {src}

    def dfs(cur, left):
        if len(out) >= cap:
            return
        if left == 0:
            if cur == dst:
                out.append(list(pathv))
            return
        for w, _ in g.neighbors(cur):
            if cur == src and first_not is not None and w == first_not:
                continue
            if w == dst and left == 1:
                out.append(pathv + [w])
                if len(out) >= cap:
                    return
                continue
            if w in used or w in forbidden or w == dst or dist_dst[w] > left - 1:
                continue
            used.add(w)
            pathv.append(w)
            dfs(w, left - 1)
            pathv.pop()
            used.discard(w)

    dfs(src, length)
    return out


def _assemble_cycle(a, b, d, tail):
    """Concatenate a + b + d + tail, canceling backtracks; returns a vertex
    cycle or None when the walk is not an embedded circle."""
    walk = a[:-1] + b[:-1] + d[:-1] + tail[:-1]
    changed = True
    while changed and len(walk) > 2:
        changed = False
        for i in range(len(walk)):
            j, k = (i + 1) % len(walk), (i + 2) % len(walk)
            if walk[i] == walk[k]:
                drop = sorted((j, k), reverse=True)
                for idx in drop:
                    walk.pop(idx)
                changed = True
                break
    if len(walk) < 3 or len(set(walk)) != len(walk):
        return None
    return walk


def _verify_extension(g, cycle, path):
    edgeset = {frozenset((cycle[i], cycle[(i + 1) % len(cycle)])) for i in range(len(cycle))}
    if len(edgeset) != len(cycle):
        raise ExtensionFailed("assembled walk is not an embedded circle")
    adj = {frozenset((u, v)) for u, v in g.edges}
    if not edgeset <= adj:
        raise ExtensionFailed("assembled circle uses a non-edge")
    for i in range(len(path) - 1):
        if frozenset((path[i], path[i + 1])) not in edgeset:
            raise ExtensionFailed("extension lost part of the input path")


# ---------------------------------------------------------------------------
# equal-angle rigidity


@dataclass
class RigidityReport:
    all_cycles_2pi: bool
    all_edges_pi_over_m: bool
    witness_cycle: Optional[Tuple[int, ...]]
    witness_edge: Optional[int]


def check_equal_angle_rigidity(g: LinkGraph, m: int, tol: float = 1e-9) -> RigidityReport:
    """On a thick weighted m-gon, every 2m-cycle summing to 2pi forces every
    edge weight to pi/m; the implication is asserted, and a failing cycle or
    edge is returned as witness."""
    if g.edge_weights is None:
        raise ValueError("needs edge weights")
    twopi = 2 * math.pi
    witness_cycle = None
    for cyc in enumerate_2m_cycles(g, m):
        if abs(cycle_weight(g, cyc) - twopi) > tol:
            witness_cycle = cyc
            break
    witness_edge = None
    for eid, w in enumerate(g.edge_weights):
        if abs(w - math.pi / m) > tol:
            witness_edge = eid
            break
    cycles_ok = witness_cycle is None
    edges_ok = witness_edge is None
    if cycles_ok and not edges_ok:
        raise AssertionError(
            "all 2m-cycles sum to 2pi yet some edge differs from pi/m "
            f"(edge {witness_edge}); contradicts equal-angle rigidity"
        )
    return RigidityReport(cycles_ok, edges_ok, witness_cycle, witness_edge)


# ---------------------------------------------------------------------------
# constructions


class _GF:
    """Tiny finite field: prime moduli plus GF(4) and GF(8) via bit polynomials."""

    _POLY = {4: 0b111, 8: 0b1011}

    def __init__(self, q: int):
        if q in (2, 3, 5, 7):
            self.q, self.char = q, q
        elif q in (4, 8):
            self.q, self.char = q, 2
        else:
            raise UnsupportedOrder(f"no supported field of order {q}")

    def add(self, a: int, b: int) -> int:
        return (a ^ b) if self.char == 2 else (a + b) % self.q

    def mul(self, a: int, b: int) -> int:
        if self.char != 2:
            return (a * b) % self.q
        if self.q == 2:
            return a & b
        acc = 0
        x = a
        while b:
            if b & 1:
                acc ^= x
            b >>= 1
            x <<= 1
            if x & self.q:  # reduce by the defining polynomial
                x ^= self._POLY[self.q]
        return acc


def projective_plane_graph(order: int) -> LinkGraph:
    """Point-line incidence graph of PG(2, order), a generalized 3-gon."""
    gf = _GF(order)
    q = order

    def normalize(vec):
        for lead in vec:
            if lead != 0:
                if lead == 1:
                    return tuple(vec)
                # scale so the leading coefficient is 1: multiply by lead^-1
                inv = next(x for x in range(1, q) if gf.mul(lead, x) == 1)
                return tuple(gf.mul(inv, c) for c in vec)
        raise ValueError("zero vector")

    pts = sorted({normalize((a, b, c))
                  for a in range(q) for b in range(q) for c in range(q)
                  if (a, b, c) != (0, 0, 0)})
    index = {p: i for i, p in enumerate(pts)}
    npts = len(pts)
    edges = []
    for li, line in enumerate(pts):  # lines are the dual copies of the points
        for p in pts:
            s = 0
            for x, y in zip(line, p):
                s = gf.add(s, gf.mul(x, y))
            if s == 0:
                edges.append((index[p], npts + li))
    colors = [1] * npts + [2] * npts
    labels = [f"p{p}" for p in pts] + [f"l{p}" for p in pts]
    g = LinkGraph(2 * npts, colors, edges, m=3, labels=labels)
    report = validate_generalized_mgon(g, 3)
    if not report.passed:
        raise RuntimeError(f"projective plane of order {order} failed validation")
    return g


def complete_bipartite_graph(p: int, q: int) -> LinkGraph:
    """K_{p,q}, the (thin or thick) generalized 2-gon."""
    edges = [(i, p + j) for i in range(p) for j in range(q)]
    colors = [1] * p + [2] * q
    g = LinkGraph(p + q, colors, edges, m=2)
    report = validate_generalized_mgon(g, 2)
    if not report.passed:
        raise RuntimeError("complete bipartite graph failed validation")
    return g


def build_incidence_mgon(kind: str, *params: int) -> LinkGraph:
    if kind == "complete_bipartite":
        return complete_bipartite_graph(*params)
    if kind == "projective_plane":
        return projective_plane_graph(*params)
    raise ValueError(f"unknown construction {kind!r}")


def cycle_graph(n: int) -> LinkGraph:
    """Thin polygon: the 2n-cycle with alternating colors (m = n)."""
    edges = [(i, (i + 1) % (2 * n)) for i in range(2 * n)]
    colors = [1 + (i % 2) for i in range(2 * n)]
    return LinkGraph(2 * n, colors, edges, m=n)


# ---------------------------------------------------------------------------
# exchange format: "vertex color: neighbor neighbor ..." per line


def parse_link_graph(text: str) -> LinkGraph:
    names: Dict[str, int] = {}
    colors: Dict[int, int] = {}
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            head, tail = line.split(":", 1)
            name, color = head.split()
        except ValueError:
            raise ValueError(f"line {lineno}: expected 'vertex color: neighbors'")
        if name not in names:
            names[name] = len(names)
        colors[names[name]] = int(color)
        rows.append((names[name], tail.split()))
    edges = []
    seen = set()
    for u, nbrs in rows:
        for nb in nbrs:
            if nb not in names:
                raise ValueError(f"unknown neighbor {nb!r}")
            v = names[nb]
            key = (min(u, v), max(u, v))
            if key in seen:
                continue
            seen.add(key)
            edges.append((u, v))
    labels = [None] * len(names)
    for name, i in names.items():
        labels[i] = name
    return LinkGraph(len(names), [colors[i] for i in range(len(names))], edges, labels=labels)
