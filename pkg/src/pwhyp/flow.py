"""Geodesic flow through chambers: edge vectors, steps, and symbolic words.

The flow state is an EdgeVector: a unit vector based at an interior point
of an edge, pointing into one incident chamber.  Flowing through the
chamber yields a FlowStep; the continuations across the exit edge are the
q(e)-1 mirrored vectors, one per chamber on the other side.
"""

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .backend import kernel
from .building import MetricAssignment
from .config import DEFAULT, Tolerances
from .geometry import GeometryTables, build_tables


class VertexHit(RuntimeError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class Tangent(RuntimeError):
    pass


class LeftComplex(RuntimeError):
    """Trajectory crossed into a chamber absent from the patch."""


@dataclass(frozen=True)
class EdgeVector:
    slot: int           # (chamber, side) incidence the vector points into
    s: float            # arc length from the edge's v_from endpoint
    theta: float        # signed angle from the inward normal, toward v_to

    def validate(self, tab: GeometryTables, tol: Tolerances = DEFAULT):
        L = tab.edge_len[tab.slot_edge[self.slot]]
        if not tol.sampler_guard <= self.s <= L - tol.sampler_guard:
            raise ValueError("edge position too close to a vertex")
        if abs(self.theta) > math.pi / 2 - tol.tangent:
            raise ValueError("vector is tangent to the edge")


@dataclass(frozen=True)
class FlowStep:
    start: EdgeVector
    exit_slot: int
    exit_s: float
    exit_theta_i: float   # angle of the reversed vector I(v) in edge frame
    length: float         # t_v, the chamber segment length


class Flow:
    """Flow engine bound to one complex + metric."""

    def __init__(self, metric: MetricAssignment, tol: Tolerances = DEFAULT):
        self.metric = metric
        self.complex = metric.complex
        self.tol = tol
        self.tables = build_tables(metric, tol)

    def step(self, v: EdgeVector) -> FlowStep:
        k, s, th, t, status = kernel.flow_step(self.tables, v.slot, v.s, v.theta)
        if status == kernel.VERTEX:
            raise VertexHit(f"segment from slot {v.slot} exits at a corner")
        if status == kernel.TANGENT:
            raise Tangent("exit direction grazes the edge")
        if status != kernel.OK:
            raise VertexHit("no chamber exit found (degenerate input)")
        return FlowStep(v, int(k), float(s), float(th), float(t))

    def continuations(self, step: FlowStep) -> List[EdgeVector]:
        """F(v): the mirrored vectors into every other chamber on the exit
        edge present in the complex."""
        slots = kernel.continuation_slots(self.tables, step.exit_slot)
        return [EdgeVector(int(s), step.exit_s, -step.exit_theta_i) for s in slots]

    def declared_branching(self, step: FlowStep) -> int:
        e = self.tables.slot_edge[step.exit_slot]
        return int(self.tables.edge_q[e]) - 1

    def involution(self, step: FlowStep) -> EdgeVector:
        return EdgeVector(step.exit_slot, step.exit_s, step.exit_theta_i)


@dataclass
class SymbolicWord:
    """Coded trajectory: entry vectors per chamber, segment lengths, and the
    time offset into the first segment."""

    vectors: List[EdgeVector]
    lengths: List[float]
    offset: float = 0.0
    branch_options: List[int] = None

    @property
    def flow_time(self) -> float:
        return sum(self.lengths) - self.offset

    def shifted(self, k: int) -> "SymbolicWord":
        return SymbolicWord(self.vectors[k:], self.lengths[k:], 0.0,
                            self.branch_options[k:] if self.branch_options else None)


def code_geodesic(flow: Flow, start: EdgeVector, steps: int,
                  rng: Optional[np.random.Generator] = None,
                  chooser: str = "uniform") -> SymbolicWord:
    """Flow `steps` chambers from `start`, recording the symbolic word.

    chooser 'uniform' draws branch choices from rng; 'first' always takes
    the first continuation (used to exhibit a biased, non-stationary
    kernel).  Raises VertexHit with the failing index on corner hits.
    """
    if chooser == "uniform":
        if rng is None:
            rng = np.random.default_rng(0)
        uniforms = rng.random(steps)
    elif chooser == "first":
        uniforms = np.zeros(steps)
    else:
        raise ValueError(f"unknown chooser {chooser!r}")
    (slots, ss, thetas, lens), n_done, status = kernel.run_trajectory(
        flow.tables, start.slot, start.s, start.theta, steps, uniforms)
    if status == kernel.VERTEX:
        raise VertexHit("trajectory hit a vertex", index=n_done)
    if status == kernel.TANGENT:
        raise Tangent(f"trajectory became tangent at step {n_done}")
    if status == kernel.LEFT_COMPLEX:
        raise LeftComplex(f"trajectory left the patch at step {n_done}")
    vectors = [EdgeVector(int(slots[i]), float(ss[i]), float(thetas[i]))
               for i in range(n_done)]
    lengths = [float(lens[i]) for i in range(n_done)]
    # branch options at the crossing between consecutive visits
    options = [int(flow.tables.edge_q[flow.tables.slot_edge[int(slots[i + 1])]]) - 1
               for i in range(n_done - 1)]
    return SymbolicWord(vectors, lengths, 0.0, options)
