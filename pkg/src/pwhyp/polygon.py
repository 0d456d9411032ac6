"""Convex hyperbolic polygons and the normal (inscribed-circle) solver."""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from . import minkowski as mk
from .config import DEFAULT, Tolerances


class AngleSumTooLarge(ValueError):
    """Angle sum >= (n-2)*pi leaves no hyperbolic polygon."""


class NoSolution(RuntimeError):
    """Central-angle equation has no root; cannot occur for valid input."""


@dataclass(frozen=True)
class HyperbolicPolygon:
    """Realized convex polygon: counterclockwise vertices plus side data.

    `inradius` is present exactly when the polygon is normal, i.e. has an
    inscribed circle touching every side.
    """

    vertices: List[np.ndarray]
    angles: List[float]
    side_lengths: List[float]
    inradius: Optional[float] = None

    def __post_init__(self):
        n = len(self.vertices)
        if n < 3 or len(self.angles) != n or len(self.side_lengths) != n:
            raise ValueError("inconsistent polygon data")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def side(self, i: int) -> mk.GeodesicArc:
        """Side i runs from vertex i to vertex i+1 (mod n)."""
        return mk.GeodesicArc.through(self.vertices[i], self.vertices[(i + 1) % self.n])

    def sides(self) -> List[mk.GeodesicArc]:
        return [self.side(i) for i in range(self.n)]

    def inward_pole(self, i: int) -> np.ndarray:
        """Pole of side i oriented so that <x, pole> > 0 for interior x."""
        arc = self.side(i)
        probe = self.vertices[(i + 2) % self.n]
        pole = arc.pole
        return pole if mk.mdot(probe, pole) > 0 else -pole

    def contains(self, p, margin: float = 0.0) -> bool:
        return all(mk.mdot(p, self.inward_pole(i)) > margin for i in range(self.n))


def _central_angle_sum(angles: Sequence[float], r: float) -> float:
    """Sum of half-corner central angles seen from the incenter at inradius r."""
    c = math.cosh(r)
    return sum(math.asin(math.cos(a / 2.0) / c) for a in angles)


def solve_normal_polygon(angles: Sequence[float], tol: Tolerances = DEFAULT) -> HyperbolicPolygon:
    """Unique normal polygon with the given interior angles.

    Decomposes about the incenter into right triangles; the inradius solves
    sum_i asin(cos(a_i/2)/cosh r) = pi, found by bisection to residual
    below 1e-12.  Vertices are realized counterclockwise about the incenter
    at the origin.
    """
    angles = [float(a) for a in angles]
    n = len(angles)
    if n < 3:
        raise ValueError("need at least 3 angles")
    if any(not 0.0 < a < math.pi for a in angles):
        raise ValueError("interior angles must lie in (0, pi)")
    if sum(angles) >= (n - 2) * math.pi:
        raise AngleSumTooLarge(
            f"angle sum {sum(angles):.6f} >= (n-2)*pi = {(n - 2) * math.pi:.6f}"
        )

    # f(r) = central angle sum - pi decreases from (n*pi - sum)/2 - pi > 0 to -pi
    lo, hi = 0.0, 1.0
    while _central_angle_sum(angles, hi) > math.pi:
        hi *= 2.0
        if hi > 1e3:
            raise NoSolution("bisection bracket not found")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _central_angle_sum(angles, mid) > math.pi:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-16:
            break
    r = 0.5 * (lo + hi)
    resid = _central_angle_sum(angles, r) - math.pi
    if abs(resid) > 1e-12:
        raise NoSolution(f"bisection residual {resid:g}")

    # tangency length from vertex i along each adjacent side
    tangency = [math.asinh(math.tanh(r) / math.tan(a / 2.0)) for a in angles]
    central = [math.asin(math.cos(a / 2.0) / math.cosh(r)) for a in angles]
    vert_dist = [math.acosh(math.cosh(r) * math.cosh(t)) for t in tangency]

    vertices = []
    phi = 0.0
    for i in range(n):
        vertices.append(mk.HPoint.from_polar(vert_dist[i], phi).coords)
        phi += central[i] + central[(i + 1) % n]
    side_lengths = [tangency[i] + tangency[(i + 1) % n] for i in range(n)]

    poly = HyperbolicPolygon(vertices, angles, side_lengths, inradius=r)
    _check_realization(poly, tol)
    return poly


def polygon_from_boundary_walk(
    angles: Sequence[float], side_lengths: Sequence[float], tol: Tolerances = DEFAULT
) -> HyperbolicPolygon:
    """Realize a polygon from explicit angles and side lengths.

    Walks the boundary turning by the exterior angles and checks closure to
    tol.geometric; the data is overdetermined, so inconsistent input fails.
    """
    angles = [float(a) for a in angles]
    side_lengths = [float(x) for x in side_lengths]
    n = len(angles)
    if len(side_lengths) != n or n < 3:
        raise ValueError("inconsistent boundary data")
    p = np.array([1.0, 0.0, 0.0])
    u = np.array([0.0, 1.0, 0.0])
    vertices = [p]
    for i in range(n):
        q = mk.point_on_ray(p, u, side_lengths[i])
        w = mk.tangent_on_ray(p, u, side_lengths[i])
        q = mk.normalize_point(q)
        # turn left by pi - interior angle at the new vertex
        perp = mk.normalize_spacelike(mk.mcross(q, w))
        turn = math.pi - angles[(i + 1) % n]
        u = w * math.cos(turn) + perp * math.sin(turn)
        u = u + mk.mdot(u, q) * q
        u = u / math.sqrt(mk.mdot(u, u))
        p = q
        if i < n - 1:
            vertices.append(p)
    if mk.distance(p, vertices[0]) > tol.geometric:
        raise ValueError(f"boundary walk fails to close (gap {mk.distance(p, vertices[0]):g})")
    poly = HyperbolicPolygon(vertices, angles, side_lengths)
    _check_realization(poly, tol)
    return poly


def _check_realization(poly: HyperbolicPolygon, tol: Tolerances):
    """Vertex coordinates must reproduce the stated angles and lengths."""
    n = poly.n
    for i in range(n):
        got = mk.distance(poly.vertices[i], poly.vertices[(i + 1) % n])
        if abs(got - poly.side_lengths[i]) > tol.geometric:
            raise ValueError(f"side {i}: realized length {got} != {poly.side_lengths[i]}")
        ang = mk.angle_at(
            poly.vertices[i], poly.vertices[(i - 1) % n], poly.vertices[(i + 1) % n]
        )
        if abs(ang - poly.angles[i]) > tol.geometric:
            raise ValueError(f"vertex {i}: realized angle {ang} != {poly.angles[i]}")
    if poly.inradius is not None:
        # all tangency distances from the incenter (origin) must equal r
        for i, arc in enumerate(poly.sides()):
            d = abs(math.asinh(mk.mdot(mk.ORIGIN, arc.pole)))
            if abs(d - poly.inradius) > tol.geometric:
                raise ValueError(f"side {i}: tangency distance {d} != inradius")


def triangulated_area(poly: HyperbolicPolygon) -> float:
    """Area summed over the fan triangulation at vertex 0.

    Independent of the angle-defect formula: each triangle's angles come
    from its realized vertex coordinates.
    """
    total = 0.0
    v = poly.vertices
    for i in range(1, poly.n - 1):
        a = mk.angle_at(v[0], v[i], v[i + 1])
        b = mk.angle_at(v[i], v[0], v[i + 1])
        c = mk.angle_at(v[i + 1], v[0], v[i])
        total += math.pi - (a + b + c)
    return total


def polygon_area(poly: HyperbolicPolygon, tol: Tolerances = DEFAULT) -> float:
    """Gauss-Bonnet area (n-2)*pi - sum(angles), checked against triangulation."""
    area = (poly.n - 2) * math.pi - sum(poly.angles)
    tri = triangulated_area(poly)
    if abs(area - tri) > tol.geometric:
        raise AssertionError(f"area mismatch: defect {area} vs triangulated {tri}")
    return area


def regular_inradius(n: int, alpha: float) -> float:
    """Closed form cosh r = cos(alpha/2)/sin(pi/n) for the regular n-gon."""
    return math.acosh(math.cos(alpha / 2.0) / math.sin(math.pi / n))
