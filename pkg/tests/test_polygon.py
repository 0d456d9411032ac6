"""Normal polygon solver: frozen closed-form values and area consistency."""

import math

import numpy as np
import pytest

from pwhyp import minkowski as mk
from pwhyp.polygon import (
    AngleSumTooLarge,
    polygon_area,
    polygon_from_boundary_walk,
    regular_inradius,
    solve_normal_polygon,
    triangulated_area,
)

# independent closed forms for regular polygons: cosh r = cos(a/2)/sin(pi/n)
RIGHT_PENTAGON_R = math.acosh(math.cos(math.pi / 4) / math.sin(math.pi / 5))
BOLZA_SIDE = 2 * math.acosh(math.cos(math.pi / 8) / math.sin(math.pi / 8))


def bisect_inradius(angles, lo=1e-9, hi=16.0):
    """Independent bisection oracle on sum_i asin(cos(a_i/2)/cosh r) = pi."""
    f = lambda r: sum(math.asin(math.cos(a / 2) / math.cosh(r)) for a in angles) - math.pi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_right_angled_pentagon():
    pent = solve_normal_polygon([math.pi / 2] * 5)
    assert abs(pent.inradius - RIGHT_PENTAGON_R) < 1e-10
    assert abs(pent.inradius - 0.6268) < 5e-4
    assert abs(pent.inradius - bisect_inradius([math.pi / 2] * 5)) < 1e-10
    assert abs(polygon_area(pent) - math.pi / 2) < 1e-12


def test_bolza_octagon():
    octg = solve_normal_polygon([math.pi / 4] * 8)
    assert all(abs(s - BOLZA_SIDE) < 1e-10 for s in octg.side_lengths)
    assert abs(BOLZA_SIDE - 3.0571) < 5e-4
    assert abs(octg.inradius - bisect_inradius([math.pi / 4] * 8)) < 1e-10
    assert abs(polygon_area(octg) - 4 * math.pi) < 1e-12
    # the Bolza side doubles as 2*arccosh(1+sqrt 2)
    assert abs(BOLZA_SIDE - 2 * math.acosh(1 + math.sqrt(2))) < 1e-12


def test_euclidean_boundary_rejected():
    with pytest.raises(AngleSumTooLarge):
        solve_normal_polygon([math.pi / 3] * 3)
    with pytest.raises(AngleSumTooLarge):
        solve_normal_polygon([math.pi / 2] * 4)


def test_regular_closed_form_agreement():
    for n, alpha in [(5, math.pi / 2), (8, math.pi / 4), (6, math.pi / 3), (7, 0.4)]:
        poly = solve_normal_polygon([alpha] * n)
        assert abs(poly.inradius - regular_inradius(n, alpha)) < 1e-10


def test_random_polygons_area_consistency():
    rng = np.random.default_rng(7)
    for _ in range(200):
        n = int(rng.integers(3, 9))
        angles = rng.uniform(0.15, math.pi - 0.15, size=n)
        excess = angles.sum() - ((n - 2) * math.pi - 0.2)
        if excess > 0:
            angles *= ((n - 2) * math.pi - 0.2) / angles.sum()
        poly = solve_normal_polygon(list(angles))
        defect = (n - 2) * math.pi - sum(poly.angles)
        assert abs(defect - triangulated_area(poly)) < 1e-9
        assert abs(polygon_area(poly) - defect) < 1e-15


def test_tangency_distances_all_equal():
    rng = np.random.default_rng(8)
    for _ in range(20):
        angles = rng.uniform(0.3, 0.7, size=6)
        poly = solve_normal_polygon(list(angles))
        for arc in poly.sides():
            d = abs(math.asinh(mk.mdot(mk.ORIGIN, arc.pole)))
            assert abs(d - poly.inradius) < 1e-9


def test_boundary_walk_roundtrip():
    octg = solve_normal_polygon([math.pi / 4] * 8)
    walked = polygon_from_boundary_walk(octg.angles, octg.side_lengths)
    assert abs(polygon_area(walked) - polygon_area(octg)) < 1e-9


def test_boundary_walk_rejects_inconsistent_data():
    octg = solve_normal_polygon([math.pi / 4] * 8)
    lengths = list(octg.side_lengths)
    lengths[0] += 0.05
    with pytest.raises(ValueError):
        polygon_from_boundary_walk(octg.angles, lengths)
