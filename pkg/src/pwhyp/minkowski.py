"""Hyperbolic plane primitives in the hyperboloid model.

Points live on the upper sheet of <p,p> = -1 in R^{2,1} with the bilinear
form <u,v> = -u0*v0 + u1*v1 + u2*v2.  Geodesics are intersections with
planes through the origin, identified by a spacelike unit pole; all
incidence computations reduce to linear algebra in the form.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .config import DEFAULT, Tolerances

ORIGIN = np.array([1.0, 0.0, 0.0])


class GeometryError(ValueError):
    pass


class NoIntersection(GeometryError):
    pass


def mdot(u, v) -> float:
    """Minkowski inner product."""
    return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def mcross(u, v):
    """Vector Minkowski-orthogonal to u and v (Lorentzian cross product)."""
    c = np.cross(u, v)
    c[0] = -c[0]
    return c


def normalize_point(p):
    """Rescale p onto the hyperboloid sheet x0 > 0."""
    s = -mdot(p, p)
    if s <= 0:
        raise GeometryError("not a timelike vector")
    q = p / np.sqrt(s)
    return q if q[0] > 0 else -q

def normalize_spacelike(v):
    s = mdot(v, v)
    if s <= 0:
        raise GeometryError("not a spacelike vector")
    return v / np.sqrt(s)


def distance(p, q) -> float:
    return float(np.arccosh(max(1.0, -mdot(p, q))))


def point_on_ray(p, v, t):
    """Unit-speed geodesic from p with tangent v at parameter t."""
    return p * np.cosh(t) + v * np.sinh(t)


def tangent_on_ray(p, v, t):
    return p * np.sinh(t) + v * np.cosh(t)


def direction_to(p, q):
    """Unit tangent at p pointing toward q."""
    w = q + mdot(q, p) * p
    n = mdot(w, w)
    if n < 1e-30:
        raise GeometryError("coincident points have no direction")
    return w / np.sqrt(n)


def geodesic_pole(p, q):
    """Spacelike unit pole of the geodesic through two points."""
    return normalize_spacelike(mcross(p, q))


@dataclass(frozen=True)
class HPoint:
    """Point on the hyperboloid sheet."""

    coords: np.ndarray

    def __post_init__(self, tol: Tolerances = DEFAULT):
        c = np.asarray(self.coords, dtype=float)
        object.__setattr__(self, "coords", c)
        if abs(mdot(c, c) + 1.0) > 1e-10 or c[0] < 1.0 - tol.algebraic:
            raise GeometryError(f"not on the hyperboloid: {c}")

    @classmethod
    def from_polar(cls, rho: float, phi: float) -> "HPoint":
        """Point at hyperbolic distance rho from the origin, direction phi."""
        return cls(np.array([np.cosh(rho), np.sinh(rho) * np.cos(phi), np.sinh(rho) * np.sin(phi)]))

    def dist(self, other: "HPoint") -> float:
        return distance(self.coords, other.coords)


@dataclass(frozen=True)
class HDirection:
    """Unit tangent vector at a base point."""

    base: np.ndarray
    v: np.ndarray

    def __post_init__(self, tol: Tolerances = DEFAULT):
        b = np.asarray(self.base, dtype=float)
        w = np.asarray(self.v, dtype=float)
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "v", w)
        if abs(mdot(w, w) - 1.0) > 1e-10 or abs(mdot(w, b)) > 1e-10:
            raise GeometryError("tangent vector not unit or not orthogonal to base")

    def at(self, t: float):
        return point_on_ray(self.base, self.v, t)


@dataclass(frozen=True)
class GeodesicArc:
    """Geodesic segment from a to b with cached pole and length."""

    a: np.ndarray
    b: np.ndarray
    pole: np.ndarray
    length: float

    @classmethod
    def through(cls, a, b) -> "GeodesicArc":
        return cls(np.asarray(a, float), np.asarray(b, float), geodesic_pole(a, b), distance(a, b))

    def tangent_at_a(self):
        return direction_to(self.a, self.b)

    def point_at(self, s: float):
        return point_on_ray(self.a, self.tangent_at_a(), s)


def ray_cross_line(p, v, pole) -> Optional[float]:
    """Parameter t > 0 where the ray p + t*v meets the full geodesic line.

    Returns None when the ray never reaches the line (or runs away from it).
    """
    cp = mdot(p, pole)
    cv = mdot(v, pole)
    if abs(cp) >= abs(cv):
        return None
    t = float(np.arctanh(-cp / cv))
    return t if t > 0 else None


def geodesic_cross_side(
    start: HDirection, side: GeodesicArc, tol: Tolerances = DEFAULT
) -> Tuple[np.ndarray, float, float, bool]:
    """First crossing of the forward ray with a geodesic arc.

    Returns (point, incidence angle in (0, pi), arc parameter from side.a,
    tangent_flag).  The tangent flag marks incidences within tol.tangent of
    grazing, which samplers must reject.  Raises NoIntersection when the ray
    exits elsewhere.
    """
    p, v = start.base, start.v
    cp = mdot(p, pole := side.pole)
    cv = mdot(v, pole)
    if abs(cv) < tol.algebraic and abs(cp) < tol.algebraic:
        # ray runs inside the side's own geodesic
        raise NoIntersection("ray lies along the side (tangent)")
    t = ray_cross_line(p, v, pole)
    if t is None:
        raise NoIntersection("forward ray misses the side's line")
    x = normalize_point(point_on_ray(p, v, t))
    u_a = direction_to(side.a, side.b)
    s = float(np.arcsinh(mdot(x, u_a)))
    if s < -tol.geometric or s > side.length + tol.geometric:
        raise NoIntersection("crossing lies outside the arc")
    w = tangent_on_ray(p, v, t)
    u_x = side.a * np.sinh(s) + u_a * np.cosh(s)
    cosang = float(np.clip(mdot(w, u_x), -1.0, 1.0))
    angle = float(np.arccos(cosang))
    tangent_flag = min(angle, np.pi - angle) < tol.tangent
    return x, angle, s, tangent_flag


def triangle_angles(la: float, lb: float, lc: float):
    """Interior angles of the hyperbolic triangle with side lengths la,lb,lc.

    Angle i is opposite side i (hyperbolic law of cosines).
    """
    sides = (la, lb, lc)
    out = []
    for i in range(3):
        a, b, c = sides[i], sides[(i + 1) % 3], sides[(i + 2) % 3]
        num = np.cosh(b) * np.cosh(c) - np.cosh(a)
        den = np.sinh(b) * np.sinh(c)
        out.append(float(np.arccos(np.clip(num / den, -1.0, 1.0))))
    return out


def angle_at(vertex, p, q) -> float:
    """Angle at `vertex` between the directions toward p and q."""
    u = direction_to(vertex, p)
    w = direction_to(vertex, q)
    return float(np.arccos(np.clip(mdot(u, w), -1.0, 1.0)))
