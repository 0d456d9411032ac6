"""Closed geodesics from free homotopy classes by gallery straightening.

A class is presented as a cyclic edge-crossing word.  The gallery is
developed into the hyperbolic plane; the composed gluing isometry is the
holonomy of the class, whose axis is the geodesic representative.  The
axis is then retraced chamber by chamber with the flow kernel (the limit
of the straighten-and-splice iteration), which both recovers the crossing
data and certifies the result: matched angles at every edge crossing and
total segment length equal to the translation length.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from . import minkowski as mk
from .backend import kernel
from .config import DEFAULT, Tolerances
from .flow import Flow
from .geometry import axis_of, glue_matrix, minkowski_inverse, translation_length


class NotClosed(ValueError):
    pass


class DegenerateClass(ValueError):
    """Null-homotopic input: the straightened length collapses."""


class StraighteningFailed(RuntimeError):
    pass


@dataclass
class GalleryArrays:
    """Flat per-visit arrays of a certified closed geodesic, kernel ready."""

    entry_slot: np.ndarray
    entry_s: np.ndarray
    entry_theta: np.ndarray
    exit_slot: np.ndarray
    exit_s: np.ndarray
    exit_thetaI: np.ndarray
    seg_len: np.ndarray

    @property
    def cum_len(self):
        return np.concatenate([[0.0], np.cumsum(self.seg_len)])


@dataclass
class ClosedGeodesic:
    word: Tuple[str, ...]
    length: float
    gallery: Optional[GalleryArrays]
    is_wall: bool = False
    multiplicity: int = 1
    certificate: dict = field(default_factory=dict)

    @property
    def n_visits(self) -> int:
        return 0 if self.gallery is None else len(self.gallery.entry_slot)


def parse_crossing_word(cx, tokens: Union[str, Sequence[str]]) -> List[Tuple[int, int]]:
    """Crossing word -> list of (exit_slot, entry_slot) pairs.

    Tokens: `e+` exits through the side slot where edge e appears with
    positive orientation (entering the negative one), `e-` the reverse;
    `e:i>j` names raw slot ids for thick complexes.
    """
    if isinstance(tokens, str):
        tokens = tokens.split()
    out = []
    for tok in tokens:
        if ":" in tok:
            ename, tail = tok.split(":", 1)
            i, j = tail.split(">")
            si, sj = int(i), int(j)
            e = cx.edge_index.get(ename)
            if e is None or cx.slot_edge[si] != e or cx.slot_edge[sj] != e:
                raise NotClosed(f"token {tok!r}: slots do not lie on edge {ename}")
            out.append((si, sj))
            continue
        ename, sign = tok[:-1], tok[-1]
        if sign not in "+-" or ename not in cx.edge_index:
            raise NotClosed(f"bad crossing token {tok!r}")
        e = cx.edge_index[ename]
        slots = cx.edge_slots[e]
        if len(slots) != 2:
            raise NotClosed(f"edge {ename} has {len(slots)} sides; use e:i>j syntax")
        plus = [s for s in slots if cx.slot_sign[s] > 0]
        minus = [s for s in slots if cx.slot_sign[s] < 0]
        if len(plus) != 1 or len(minus) != 1:
            raise NotClosed(f"edge {ename} is not two-sided oriented; use e:i>j")
        out.append((plus[0], minus[0]) if sign == "+" else (minus[0], plus[0]))
    if not out:
        raise NotClosed("empty crossing word")
    return out


def _gallery_steps(cx, crossings) -> List[Tuple[int, int]]:
    """Validated cyclic (exit, entry) steps; each exit must lie in the
    chamber entered by the previous crossing."""
    for i in range(len(crossings)):
        prev_entry = crossings[i - 1][1]
        cur_exit = crossings[i][0]
        if cx.slot_chamber[prev_entry] != cx.slot_chamber[cur_exit]:
            raise NotClosed(
                f"crossing {i}: exit slot {cur_exit} not in the chamber entered "
                f"by crossing {i - 1}")
    return list(crossings)


def holonomy(flow: Flow, steps) -> np.ndarray:
    H = np.eye(3)
    for slot_out, slot_in in steps:
        H = H @ glue_matrix(flow.tables, slot_out, slot_in)
    return H


def _axis_seed(flow: Flow, steps, pole, xi_plus, tol: Tolerances):
    """Continuation state where the axis exits a developed gallery side.

    Scans the glued sides of the developed gallery for transversal axis
    crossings, preferring well-conditioned (early) ones.  Returns
    (entry_slot, s_edge, theta) for the state entering the next chamber,
    or None when the axis misses every glued side (wall classes)."""
    tab = flow.tables
    T = np.eye(3)
    best = None
    for i, (slot_out, slot_in) in enumerate(steps):
        Ti = minkowski_inverse(T)
        pole_loc = Ti @ pole
        xi_loc = Ti @ xi_plus
        y = mk.mcross(pole_loc, tab.slot_pole[slot_out])
        yy = mk.mdot(y, y)
        if yy < -1e-12:
            y = y / math.sqrt(-yy)
            if y[0] < 0:
                y = -y
            A = tab.slot_A[slot_out]
            uA = tab.slot_uA[slot_out]
            sinh_tau = mk.mdot(y, uA)
            cosh_tau = -mk.mdot(y, A)
            tau = math.asinh(sinh_tau)
            L = tab.slot_len[slot_out]
            margin = 10 * tol.vertex_hit
            if margin < tau < L - margin:
                w = mk.mcross(pole_loc, y)
                w = w / math.sqrt(mk.mdot(w, w))
                if mk.mdot(w, xi_loc) < 0:
                    w = -w
                n_in = tab.slot_pole[slot_out]
                cos_i = -mk.mdot(w, n_in)  # w must exit through this side
                if cos_i > 0:
                    u_y = A * sinh_tau + uA * cosh_tau
                    sigma = int(tab.slot_sigma[slot_out])
                    theta_i = math.atan2(-sigma * mk.mdot(w, u_y), cos_i)
                    if abs(theta_i) <= math.pi / 2 - tol.tangent:
                        s_edge = tau if sigma > 0 else L - tau
                        score = abs(T[0, 0])
                        if best is None or score < best[0]:
                            best = (score, (slot_in, s_edge, -theta_i))
        T = T @ glue_matrix(tab, slot_out, slot_in)
    return None if best is None else best[1]


def marked_length(flow: Flow, word, tol: Tolerances = DEFAULT,
                  multiplicity: int = 1) -> ClosedGeodesic:
    """Geodesic representative and length of a free homotopy class.

    Raises NotClosed for inconsistent crossing words and DegenerateClass
    when the class is null homotopic (holonomy without an axis).
    """
    cx = flow.complex
    if isinstance(word, (list, tuple)) and word and isinstance(word[0], tuple):
        crossings = list(word)
        wtoks = tuple(f"{cx.edges[cx.slot_edge[a]].name}:{a}>{b}" for a, b in word)
    else:
        crossings = parse_crossing_word(cx, word)
        wtoks = tuple(word) if isinstance(word, (list, tuple)) else tuple(word.split())
    steps = _gallery_steps(cx, crossings)
    H = holonomy(flow, steps)
    ell = translation_length(H)
    if ell < tol.degenerate_length:
        raise DegenerateClass(f"straightening collapses (length {ell:g})")
    pole, xi_plus, xi_minus = axis_of(H)

    seed = _axis_seed(flow, steps, pole, xi_plus, tol)
    if seed is None:
        if _axis_is_wall(flow, steps, pole):
            return ClosedGeodesic(wtoks, ell, None, is_wall=True,
                                  multiplicity=multiplicity,
                                  certificate={"translation_length": ell})
        raise StraighteningFailed(
            "axis misses every glued side of the developed gallery and is "
            "not a wall; the input gallery is too far from taut")
    slot0, s0, th0 = seed
    visits = _trace_period(flow, slot0, s0, th0, ell, tol)
    gallery = _build_arrays(visits)
    total = float(np.sum(gallery.seg_len))
    if abs(total - ell) > max(1.0, ell) * 1e-8:
        raise StraighteningFailed(
            f"traced length {total!r} disagrees with translation length {ell!r}")
    cert = {
        "translation_length": ell,
        "traced_length": total,
        "stationarity_residual": abs(total - ell),
        "visits": len(visits),
    }
    return ClosedGeodesic(wtoks, total, gallery, is_wall=False,
                          multiplicity=multiplicity, certificate=cert)


def _axis_is_wall(flow: Flow, steps, pole) -> bool:
    """True when the developed axis coincides with an edge line of the
    gallery (its pole is parallel to a side pole)."""
    tab = flow.tables
    T = np.eye(3)
    for slot_out, slot_in in steps:
        pole_loc = minkowski_inverse(T) @ pole
        lo, hi = tab.chamber_slot_range(int(tab.slot_chamber[slot_out]))
        for k in range(lo, hi):
            if abs(abs(mk.mdot(pole_loc, tab.slot_pole[k])) - 1.0) < 1e-9:
                return True
        T = T @ glue_matrix(tab, slot_out, slot_in)
    return False


def _trace_period(flow: Flow, slot0, s0, th0, ell, tol, max_steps: int = 100000):
    """Flow the axis state until it closes up at the full translation
    length; forced continuations only (q = 2), so the trace stays in the
    input class."""
    tab = flow.tables
    visits = []
    state = (int(slot0), float(s0), float(th0))
    total = 0.0
    for _ in range(max_steps):
        k, s, th_i, t, status = kernel.flow_step(tab, *state)
        if status != kernel.OK:
            raise StraighteningFailed(
                "axis trace interrupted (vertex or tangent passage); "
                f"status {status}")
        visits.append((state[0], state[1], state[2], int(k), float(s),
                       float(th_i), float(t)))
        total += t
        conts = kernel.continuation_slots(tab, int(k))
        if len(conts) != 1:
            raise StraighteningFailed(
                "straightening across a branching or boundary edge needs the "
                "axis to follow the input gallery; only q = 2 is traced")
        state = (conts[0], float(s), -float(th_i))
        if (state[0] == int(slot0)
                and abs(state[1] - s0) < 1e-7
                and abs(state[2] - th0) < 1e-7
                and abs(total - ell) < 1e-6 * max(1.0, ell)):
            return visits
        if total > ell + 10:
            raise StraighteningFailed("trace failed to close within the period")
    raise StraighteningFailed("trace exceeded the step limit")


def _build_arrays(visits) -> GalleryArrays:
    return GalleryArrays(
        entry_slot=np.array([v[0] for v in visits], dtype=np.int64),
        entry_s=np.array([v[1] for v in visits]),
        entry_theta=np.array([v[2] for v in visits]),
        exit_slot=np.array([v[3] for v in visits], dtype=np.int64),
        exit_s=np.array([v[4] for v in visits]),
        exit_thetaI=np.array([v[5] for v in visits]),
        seg_len=np.array([v[6] for v in visits]),
    )


def close_up_word(flow: Flow, word) -> List[Tuple[int, int]]:
    """Cyclic crossing list of a coded trajectory (SymbolicWord), the
    closure used to produce equidistributing classes."""
    pairs = []
    vecs = word.vectors
    tab = flow.tables
    for i in range(len(vecs)):
        nxt = vecs[(i + 1) % len(vecs)]
        k, s, th_i, t, status = kernel.flow_step(tab, vecs[i].slot, vecs[i].s,
                                                 vecs[i].theta)
        if status != kernel.OK:
            raise StraighteningFailed("coded trajectory does not flow cleanly")
        if i + 1 < len(vecs):
            if tab.slot_edge[k] != tab.slot_edge[nxt.slot]:
                raise NotClosed("consecutive vectors do not share an edge")
            pairs.append((int(k), nxt.slot))
        else:
            # close the gallery: re-enter the first chamber across the final
            # exit edge through any incidence of the first vector's chamber
            first_ch = tab.slot_chamber[vecs[0].slot]
            cands = [int(sl) for sl in kernel.continuation_slots(tab, int(k))
                     if tab.slot_chamber[sl] == first_ch]
            if not cands:
                raise NotClosed("trajectory cannot be closed into the "
                                "starting chamber across its last edge")
            pairs.append((int(k), cands[0]))
    return pairs
