"""Bundled example complexes and metric families."""

import math
from typing import Tuple

from .building import Complex, MetricAssignment
from .fileio import load_complex, load_metric
from .polygon import solve_normal_polygon


def bolza_complex() -> Complex:
    return load_complex("bolza.complex.txt")


def bolza_regular_metric(cx: Complex = None) -> MetricAssignment:
    cx = cx or bolza_complex()
    return load_metric(cx, "bolza_regular.metric.txt")


def bolza_normal_metric(q_angle: float, s_angle: float, cx: Complex = None) -> MetricAssignment:
    """Admissible non-regular octagon: vertex angles (p q p s p q p s) with
    2p + q + s = pi.

    The antipodal angle symmetry keeps the vertex link at exactly 2 pi and
    makes the normal polygon's tangency lengths match under the
    opposite-side pairing.
    """
    cx = cx or bolza_complex()
    p = (math.pi - q_angle - s_angle) / 2
    if not (0 < p < math.pi and 0 < q_angle < math.pi and 0 < s_angle < math.pi):
        raise ValueError("angles out of range")
    angles = [p, q_angle, p, s_angle, p, q_angle, p, s_angle]
    return MetricAssignment(cx, [solve_normal_polygon(angles)])


def random_admissible_bolza_metrics(n: int, seed: int, spread: float = 0.12,
                                    cx: Complex = None):
    """Sample n admissible octagon metrics around the regular point."""
    import numpy as np

    cx = cx or bolza_complex()
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        q = math.pi / 4 + rng.uniform(-spread, spread)
        s = math.pi / 4 + rng.uniform(-spread, spread)
        out.append(bolza_normal_metric(q, s, cx))
    return out


def pentagon_book() -> Tuple[Complex, MetricAssignment]:
    cx = load_complex("pentagon_book.complex.txt")
    return cx, load_metric(cx, "pentagon_right.metric.txt")


def pentagon_strip() -> Tuple[Complex, MetricAssignment]:
    cx = load_complex("pentagon_strip.complex.txt")
    return cx, load_metric(cx, "pentagon_strip.metric.txt")


def pentagon_double() -> Tuple[Complex, MetricAssignment]:
    cx = load_complex("pentagon_double.complex.txt")
    return cx, load_metric(cx, "pentagon_double.metric.txt")
