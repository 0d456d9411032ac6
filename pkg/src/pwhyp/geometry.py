"""Flattened chamber geometry tables and developing isometries.

The kernel backends operate on plain arrays describing every chamber side
("slot"): endpoints, inward pole, length, owning edge with its orientation
sign, plus edge incidence lists.  Slot ids here coincide with the Complex's
slot enumeration.

Conventions for edge vectors (the flow state): a state (slot, s, theta)
is a unit vector based on the slot's edge at arc length s from the edge's
v_from endpoint, pointing into the slot's chamber, with signed angle theta
from the inward normal, positive tilting toward v_to.
"""

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from . import minkowski as mk
from .building import Complex, MetricAssignment
from .config import DEFAULT, Tolerances

J = np.diag([-1.0, 1.0, 1.0])


@dataclass
class GeometryTables:
    n_chambers: int
    chamb_offset: np.ndarray      # (n_chambers+1,) int32, slots per chamber
    slot_A: np.ndarray            # (n_slots, 3) side start vertex
    slot_uA: np.ndarray           # (n_slots, 3) unit tangent at A toward B
    slot_pole: np.ndarray         # (n_slots, 3) inward unit normal
    slot_len: np.ndarray          # (n_slots,)
    slot_edge: np.ndarray         # (n_slots,) int32
    slot_sigma: np.ndarray        # (n_slots,) int8: +1 if A->B matches v_from->v_to
    slot_chamber: np.ndarray      # (n_slots,) int32
    edge_len: np.ndarray          # (n_edges,)
    edge_q: np.ndarray            # (n_edges,) int32 declared branching
    edge_slot_offset: np.ndarray  # (n_edges+1,) int32
    edge_slot_list: np.ndarray    # int32 incident slots per edge
    tol_vertex: float
    tol_tangent: float

    @property
    def n_slots(self) -> int:
        return len(self.slot_edge)

    def chamber_slot_range(self, c: int) -> Tuple[int, int]:
        return int(self.chamb_offset[c]), int(self.chamb_offset[c + 1])


def build_tables(metric: MetricAssignment, tol: Tolerances = DEFAULT) -> GeometryTables:
    cx = metric.complex
    n_slots = len(cx.slot_edge)
    slot_A = np.zeros((n_slots, 3))
    slot_uA = np.zeros((n_slots, 3))
    slot_pole = np.zeros((n_slots, 3))
    slot_len = np.zeros(n_slots)
    offsets = [0]
    for ci, poly in enumerate(metric.chamber_geometry):
        for si in range(poly.n):
            slot = cx.chamber_slots[ci][si]
            a = poly.vertices[si]
            b = poly.vertices[(si + 1) % poly.n]
            slot_A[slot] = a
            slot_uA[slot] = mk.direction_to(a, b)
            slot_pole[slot] = poly.inward_pole(si)
            slot_len[slot] = poly.side_lengths[si]
        offsets.append(offsets[-1] + poly.n)
    edge_slot_offset = [0]
    edge_slot_list = []
    for slots in cx.edge_slots:
        edge_slot_list.extend(slots)
        edge_slot_offset.append(len(edge_slot_list))
    return GeometryTables(
        n_chambers=len(cx.chambers),
        chamb_offset=np.array(offsets, dtype=np.int32),
        slot_A=slot_A,
        slot_uA=slot_uA,
        slot_pole=slot_pole,
        slot_len=slot_len,
        slot_edge=np.array(cx.slot_edge, dtype=np.int32),
        slot_sigma=np.array(cx.slot_sign, dtype=np.int8),
        slot_chamber=np.array(cx.slot_chamber, dtype=np.int32),
        edge_len=np.array(metric.edge_length, dtype=float),
        edge_q=np.array([e.q for e in cx.edges], dtype=np.int32),
        edge_slot_offset=np.array(edge_slot_offset, dtype=np.int32),
        edge_slot_list=np.array(edge_slot_list, dtype=np.int32),
        tol_vertex=tol.vertex_hit,
        tol_tangent=tol.tangent,
    )


# ---------------------------------------------------------------------------
# frames and gluing isometries


def slot_frame_at(tab: GeometryTables, slot: int, s_edge: float):
    """Base point and oriented frame on a slot at edge coordinate s_edge.

    Returns (x, u_edge, n_in): the point, the unit tangent along the edge's
    intrinsic direction, and the inward normal.
    """
    sigma = int(tab.slot_sigma[slot])
    L = tab.slot_len[slot]
    s_poly = s_edge if sigma > 0 else L - s_edge
    A = tab.slot_A[slot]
    uA = tab.slot_uA[slot]
    x = A * math.cosh(s_poly) + uA * math.sinh(s_poly)
    u_side = A * math.sinh(s_poly) + uA * math.cosh(s_poly)
    return x, sigma * u_side, tab.slot_pole[slot].copy()


def edge_vector_frame(tab: GeometryTables, slot: int, s_edge: float, theta: float):
    """Chamber-frame (point, direction) of an edge-vector state."""
    x, u_edge, n_in = slot_frame_at(tab, slot, s_edge)
    w = math.cos(theta) * n_in + math.sin(theta) * u_edge
    return x, w


def minkowski_inverse(M: np.ndarray) -> np.ndarray:
    return J @ M.T @ J


def glue_matrix(tab: GeometryTables, slot_out: int, slot_in: int) -> np.ndarray:
    """Isometry placing slot_in's chamber against slot_out's chamber.

    Maps chamber(slot_in) coordinates into chamber(slot_out)'s frame so the
    shared edge coincides pointwise (matching edge parameters) and the two
    interiors lie on opposite sides.
    """
    if tab.slot_edge[slot_out] != tab.slot_edge[slot_in]:
        raise ValueError("slots do not share an edge")
    P_out, u_out, n_out = slot_frame_at(tab, slot_out, 0.0)
    P_in, u_in, n_in = slot_frame_at(tab, slot_in, 0.0)
    F_out = np.column_stack([P_out, u_out, -n_out])
    F_in = np.column_stack([P_in, u_in, n_in])
    return F_out @ minkowski_inverse(F_in)


def develop_gallery(tab: GeometryTables, steps: List[Tuple[int, int]]) -> List[np.ndarray]:
    """Accumulated placement matrices for a chain of (exit_slot, entry_slot).

    Returns [T_0 .. T_k] where T_0 is the identity (first chamber in its own
    coordinates) and T_{i+1} places the chamber entered at step i.
    """
    mats = [np.eye(3)]
    for slot_out, slot_in in steps:
        mats.append(mats[-1] @ glue_matrix(tab, slot_out, slot_in))
    return mats


def apply_isometry(M: np.ndarray, x: np.ndarray) -> np.ndarray:
    return M @ x


def translation_length(M: np.ndarray) -> float:
    """Translation length of an orientation-preserving Minkowski isometry;
    0 for elliptic or parabolic elements."""
    tr = float(np.trace(M))
    if tr <= 3.0:
        return 0.0
    return math.acosh((tr - 1.0) / 2.0)


def axis_of(M: np.ndarray):
    """Axis of a hyperbolic isometry: (pole, xi_plus, xi_minus).

    The endpoints are the attracting/repelling null eigenvectors; the pole
    is the spacelike unit normal of the invariant geodesic, oriented so the
    translation moves positively with respect to (pole, direction) frames.
    """
    ell = translation_length(M)
    if ell <= 0.0:
        raise ValueError("isometry is not hyperbolic")
    evals, evecs = np.linalg.eig(M)
    order = np.argsort(evals.real)
    xi_minus = evecs[:, order[0]].real
    xi_plus = evecs[:, order[2]].real
    # null vectors, normalized to the upper cone (positive time component)
    if xi_plus[0] < 0:
        xi_plus = -xi_plus
    if xi_minus[0] < 0:
        xi_minus = -xi_minus
    pole = mk.mcross(xi_minus, xi_plus)
    nrm = mk.mdot(pole, pole)
    if nrm <= 0:
        raise ValueError("degenerate axis")
    pole = pole / math.sqrt(nrm)
    return pole, xi_plus, xi_minus


def axis_point_and_direction(xi_plus: np.ndarray, xi_minus: np.ndarray):
    """A point on the axis and the unit tangent toward xi_plus."""
    s = -2.0 * mk.mdot(xi_minus, xi_plus)
    if s <= 0:
        raise ValueError("endpoints do not span a geodesic")
    a = xi_minus / math.sqrt(s)
    b = xi_plus / math.sqrt(s)
    x = a + b
    x = x / math.sqrt(-mk.mdot(x, x))
    w = b - a
    w = w + mk.mdot(w, x) * x
    w = w / math.sqrt(mk.mdot(w, w))
    return x, w
