"""Independent test oracle: Poincare-disk Mobius arithmetic for the regular
octagon surface.

Everything here is deliberately disjoint from the package's hyperboloid
code: complex-number Mobius transformations, a closed-form regular octagon,
side-pairing deck transformations composed per crossing word, translation
lengths from half-traces, and an axis-linking crossing counter in the
universal cover.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Mobius:
    """Disk isometry z -> (a z + b)/(conj(b) z + conj(a)), |a|^2-|b|^2 = 1."""

    a: complex
    b: complex

    def __call__(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.b.conjugate() * z + self.a.conjugate())

    def __matmul__(self, other: "Mobius") -> "Mobius":
        a = self.a * other.a + self.b * other.b.conjugate()
        b = self.a * other.b + self.b * other.a.conjugate()
        return Mobius(a, b)

    def inv(self) -> "Mobius":
        return Mobius(self.a.conjugate(), -self.b)

    @property
    def half_trace(self) -> float:
        return (self.a + self.a.conjugate()).real / 2

    def translation_length(self) -> float:
        t = abs(self.half_trace)
        return 2 * math.acosh(t) if t > 1 else 0.0

    def fixed_points(self):
        """Repelling and attracting boundary fixed points."""
        im = self.a.imag
        disc = math.sqrt(max(self.a.real ** 2 - 1.0, 0.0))
        cb = self.b.conjugate()
        if abs(cb) < 1e-300:
            raise ValueError("rotation has no boundary fixed points")
        xi1 = (1j * im + disc) / cb
        xi2 = (1j * im - disc) / cb
        # attracting iff |derivative| = |cb z + conj(a)|^-2 > 1
        d1 = abs(cb * xi1 + self.a.conjugate())
        if d1 < 1.0:
            return xi2 / abs(xi2), xi1 / abs(xi1)
        return xi1 / abs(xi1), xi2 / abs(xi2)


def translate_to(z: complex) -> Mobius:
    s = 1.0 / math.sqrt(1.0 - abs(z) ** 2)
    return Mobius(s, s * z)


def rotate(phi: float) -> Mobius:
    return Mobius(cmath.exp(1j * phi / 2), 0)


def frame_map(p: complex, phi: float) -> Mobius:
    """Isometry taking (0, direction 0) to (p, direction phi)."""
    return translate_to(p) @ rotate(phi)


def direction(z1: complex, z2: complex) -> float:
    """Direction angle at z1 of the geodesic toward z2 (z2 may be on the
    boundary circle)."""
    return cmath.phase((z2 - z1) / (1 - z1.conjugate() * z2))


def dist(z1: complex, z2: complex) -> float:
    num = 2 * abs(z1 - z2) ** 2
    den = (1 - abs(z1) ** 2) * (1 - abs(z2) ** 2)
    return math.acosh(1 + num / den)


class BolzaOracle:
    """Regular-octagon surface: deck transformations per complex edge."""

    def __init__(self, cx):
        # closed form: vertex distance h with cosh h = cot(pi/8)^2
        h = math.acosh(1.0 / math.tan(math.pi / 8) ** 2)
        rho = math.tanh(h / 2)
        self.vertices = [rho * cmath.exp(1j * math.pi * k / 4) for k in range(8)]
        self.cx = cx
        self.gens = {}
        for e, name in enumerate(ex.name for ex in cx.edges):
            slots = cx.edge_slots[e]
            plus = [s for s in slots if cx.slot_sign[s] > 0][0]
            minus = [s for s in slots if cx.slot_sign[s] < 0][0]
            self.gens[name] = self._glue(cx.slot_side[plus], cx.slot_side[minus])

    def _frame(self, side: int, reverse: bool) -> Mobius:
        v1 = self.vertices[side]
        v2 = self.vertices[(side + 1) % 8]
        if reverse:
            v1, v2 = v2, v1
        return frame_map(v1, direction(v1, v2))

    def _glue(self, side_out: int, side_in: int) -> Mobius:
        # the chamber across side_out is D(octagon) with D matching the
        # v_from -> v_to frames of the glued sides
        f_out = self._frame(side_out, reverse=False)
        f_in = self._frame(side_in, reverse=True)
        return f_out @ f_in.inv()

    def holonomy(self, word: str) -> Mobius:
        out = Mobius(1.0, 0.0)
        for tok in word.split():
            g = self.gens[tok[:-1]]
            out = out @ (g if tok[-1] == "+" else g.inv())
        return out

    def length(self, word: str) -> float:
        return self.holonomy(word).translation_length()

    def contains(self, z: complex) -> bool:
        for k in range(8):
            w, r2 = _geo_circle(self.vertices[k], self.vertices[(k + 1) % 8])
            if abs(z - w) ** 2 <= r2:
                return False
        return True


def _geo_circle(z1: complex, z2: complex):
    """Euclidean center and squared radius of the geodesic through z1, z2
    (circle orthogonal to the unit circle); assumes it is not a diameter."""
    ax, ay = z1.real, z1.imag
    bx, by = z2.real, z2.imag
    ra = (abs(z1) ** 2 + 1) / 2
    rb = (abs(z2) ** 2 + 1) / 2
    det = ax * by - ay * bx
    if abs(det) < 1e-13:
        raise ValueError("geodesic is a diameter")
    wx = (ra * by - rb * ay) / det
    wy = (ax * rb - bx * ra) / det
    w = complex(wx, wy)
    return w, abs(w) ** 2 - 1.0


def _boundary_circle(a: complex, b: complex):
    """Geodesic circle through two boundary points a, b."""
    det = a.real * b.imag - a.imag * b.real
    if abs(det) < 1e-12:
        return None  # diameter
    wx = (b.imag - a.imag) / det
    wy = (a.real - b.real) / det
    w = complex(wx, wy)
    return w, abs(w) ** 2 - 1.0


class AxisFrame:
    """Normalizing map sending an axis to the real diameter, attracting
    endpoint to +1; gives signed arc parameters along the axis."""

    def __init__(self, xi_minus: complex, xi_plus: complex):
        circ = _boundary_circle(xi_minus, xi_plus)
        if circ is None:
            p_star = 0j
        else:
            w, r2 = circ
            r = math.sqrt(r2)
            p_star = w * (abs(w) - r) / abs(w)
        self.norm = frame_map(p_star, direction(p_star, xi_plus)).inv()
        self.xi_plus = xi_plus
        self.xi_minus = xi_minus

    def tau(self, z: complex) -> float:
        x = self.norm(z)
        return 2 * math.atanh(max(-0.999999999999, min(0.999999999999, x.real)))

    def cross_tau(self, eta1: complex, eta2: complex):
        """Parameter where the geodesic (eta1, eta2) crosses the axis, or
        None when the endpoints do not link the axis."""
        a = self.norm(eta1)
        b = self.norm(eta2)
        if (a.imag > 0) == (b.imag > 0):
            return None
        circ = _boundary_circle(a, b)
        if circ is None:
            return 0.0
        w, r2 = circ
        disc = w.real ** 2 - (abs(w) ** 2 - r2)
        if disc <= 0:
            return None
        root = math.sqrt(disc)
        for x in (w.real - root, w.real + root):
            if abs(x) < 1.0:
                return 2 * math.atanh(x)
        return None


def tiles_along_segment(oracle: BolzaOracle, pts, radius: float):
    """Group elements whose tile center lies within `radius` of the sampled
    point set, by breadth-first search from the identity tile."""
    gens = []
    for g in oracle.gens.values():
        gens.append(g)
        gens.append(g.inv())

    def close(g):
        c = g(0j)
        return any(dist(c, p) <= radius for p in pts)

    def key(g):
        c = g(0j)
        return (round(c.real, 8), round(c.imag, 8))

    # walk toward the segment first so BFS starts in range
    seed = Mobius(1.0, 0.0)
    for _ in range(64):
        if close(seed):
            break
        c = seed(0j)
        best = min(gens, key=lambda g: min(dist((seed @ g)(0j), p) for p in pts))
        seed = seed @ best
    out = {key(seed): seed}
    frontier = [seed]
    while frontier:
        nxt = []
        for g in frontier:
            for d in gens:
                h = g @ d
                if not close(h):
                    continue
                k = key(h)
                if k not in out:
                    out[k] = h
                    nxt.append(h)
        frontier = nxt
    return list(out.values())


def crossing_number(oracle: BolzaOracle, word_a: str, word_b: str,
                    margin: float = 3.2) -> int:
    """Geometric intersection number of two closed geodesics by counting
    linked axis translates in the universal cover."""
    Ma = oracle.holonomy(word_a)
    Mb = oracle.holonomy(word_b)
    ell_a = Ma.translation_length()
    ell_b = Mb.translation_length()
    xi_am, xi_ap = Ma.fixed_points()
    xi_bm, xi_bp = Mb.fixed_points()
    frame_a = AxisFrame(xi_am, xi_ap)
    frame_b = AxisFrame(xi_bm, xi_bp)

    def axis_points(frame, ell, step=0.35):
        n = max(2, int(ell / step) + 2)
        taus = np.linspace(0.0, ell, n)
        return [frame.norm.inv()(complex(math.tanh(t / 2), 0.0)) for t in taus]

    tiles_a = tiles_along_segment(oracle, axis_points(frame_a, ell_a), margin)
    tiles_b = tiles_along_segment(oracle, axis_points(frame_b, ell_b), margin)

    # axis translation by -ell_a in normalized coordinates, for wrapping
    shift = Mobius(complex(math.cosh(ell_a / 2), 0.0),
                   complex(-math.sinh(ell_a / 2), 0.0))
    events = []
    seen_lines = set()
    for g in tiles_a:
        for t in tiles_b:
            h = g @ t.inv()
            e1 = h(xi_bm)
            e2 = h(xi_bp)
            lk = (round(e1.real, 7), round(e1.imag, 7),
                  round(e2.real, 7), round(e2.imag, 7))
            if lk in seen_lines:
                continue
            seen_lines.add(lk)
            if abs(e1 - xi_am) < 1e-7 or abs(e1 - xi_ap) < 1e-7:
                continue  # shares an endpoint with the axis: not transversal
            tau = frame_a.cross_tau(e1, e2)
            if tau is None:
                continue
            k = math.floor(tau / ell_a)
            tau0 = tau - k * ell_a
            a1, b1 = frame_a.norm(e1), frame_a.norm(e2)
            for _ in range(abs(k)):
                step_m = shift if k > 0 else shift.inv()
                a1, b1 = step_m(a1), step_m(b1)
            ends = sorted([(round(a1.real, 6), round(a1.imag, 6)),
                           (round(b1.real, 6), round(b1.imag, 6))])
            events.append((tau0, tuple(ends)))
    return _cluster_count(events, ell_a)


def _cluster_count(events, period, tol=1e-5):
    uniq = []
    for tau, ends in events:
        matched = False
        for tau2, ends2 in uniq:
            dt = abs(tau - tau2)
            dt = min(dt, period - dt)
            if dt < tol and ends == ends2:
                matched = True
                break
        if not matched:
            uniq.append((tau, ends))
    return len(uniq)
