"""Chamber flow: additivity, mirror law, branching counts, backend parity."""

import math

import numpy as np
import pytest

from pwhyp import library
from pwhyp import minkowski as mk
from pwhyp.backend import get_kernel, kernel
from pwhyp.flow import EdgeVector, Flow, LeftComplex, VertexHit, code_geodesic
from pwhyp.geometry import edge_vector_frame, glue_matrix


@pytest.fixture(scope="module")
def bolza_flow():
    return Flow(library.bolza_regular_metric())


@pytest.fixture(scope="module")
def book_flow():
    cx, metric = library.pentagon_book()
    return Flow(metric)


def random_vector(flow, rng):
    tab = flow.tables
    while True:
        slot = int(rng.integers(tab.n_slots))
        L = tab.edge_len[tab.slot_edge[slot]]
        s = rng.uniform(0.05 * L, 0.95 * L)
        theta = rng.uniform(-1.2, 1.2)
        return EdgeVector(slot, s, theta)


def test_step_exits_another_side(bolza_flow):
    rng = np.random.default_rng(0)
    for _ in range(200):
        v = random_vector(bolza_flow, rng)
        try:
            step = bolza_flow.step(v)
        except (VertexHit, Exception) as e:
            if isinstance(e, VertexHit):
                continue
            raise
        assert step.exit_slot != v.slot
        assert step.length > 0
        tab = bolza_flow.tables
        L = tab.edge_len[tab.slot_edge[step.exit_slot]]
        assert 0 < step.exit_s < L


def test_segment_length_is_distance(bolza_flow):
    rng = np.random.default_rng(1)
    tab = bolza_flow.tables
    for _ in range(100):
        v = random_vector(bolza_flow, rng)
        try:
            step = bolza_flow.step(v)
        except VertexHit:
            continue
        x0, _ = edge_vector_frame(tab, v.slot, v.s, v.theta)
        x1, _ = edge_vector_frame(tab, step.exit_slot, step.exit_s, step.exit_theta_i)
        assert abs(mk.distance(x0, x1) - step.length) < 1e-10


def test_mirror_law(bolza_flow):
    """Continuation angle mirrors the incidence angle across the edge."""
    rng = np.random.default_rng(2)
    for _ in range(100):
        v = random_vector(bolza_flow, rng)
        try:
            step = bolza_flow.step(v)
        except VertexHit:
            continue
        conts = bolza_flow.continuations(step)
        assert len(conts) == 1  # q = 2 on a surface
        assert abs(abs(conts[0].theta) - abs(step.exit_theta_i)) < 1e-12


def test_developed_straightness(bolza_flow):
    """Two consecutive segments develop to a straight line: total length
    equals the distance between developed endpoints."""
    rng = np.random.default_rng(3)
    tab = bolza_flow.tables
    for _ in range(60):
        v = random_vector(bolza_flow, rng)
        try:
            s1 = bolza_flow.step(v)
            w = bolza_flow.continuations(s1)[0]
            s2 = bolza_flow.step(w)
        except VertexHit:
            continue
        x0, _ = edge_vector_frame(tab, v.slot, v.s, v.theta)
        x2, _ = edge_vector_frame(tab, s2.exit_slot, s2.exit_s, s2.exit_theta_i)
        G = glue_matrix(tab, s1.exit_slot, w.slot)
        x2_dev = G @ x2
        total = s1.length + s2.length
        assert abs(mk.distance(x0, x2_dev) - total) < 1e-9


def test_branching_counts_book(book_flow):
    """|F(v)| = q(e)-1 on the thick spine, with all continuations mirrored."""
    rng = np.random.default_rng(4)
    tab = book_flow.tables
    spine = 0  # edge e0 is declared first
    found = 0
    for _ in range(400):
        v = random_vector(book_flow, rng)
        try:
            step = book_flow.step(v)
        except (VertexHit, Exception) as e:
            if isinstance(e, VertexHit):
                continue
            raise
        e_id = int(tab.slot_edge[step.exit_slot])
        conts = book_flow.continuations(step)
        if e_id == spine:
            assert len(conts) == 2 == book_flow.declared_branching(step)
            for c in conts:
                assert abs(abs(c.theta) - abs(step.exit_theta_i)) < 1e-12
            found += 1
        else:
            assert book_flow.declared_branching(step) == 2
            assert len(conts) == 0  # free sides have no present neighbor
    assert found > 10


def test_code_geodesic_roundtrip(bolza_flow):
    rng = np.random.default_rng(5)
    word = code_geodesic(bolza_flow, EdgeVector(0, 1.0, 0.3), 100, rng)
    assert len(word.vectors) == 100
    # flowing each recorded entry reproduces the recorded segment lengths
    for i in range(0, 100, 7):
        step = bolza_flow.step(word.vectors[i])
        assert abs(step.length - word.lengths[i]) < 1e-9


def test_code_geodesic_shift_consistency(bolza_flow):
    rng = np.random.default_rng(6)
    word = code_geodesic(bolza_flow, EdgeVector(2, 0.8, -0.4), 30, rng)
    k = 11
    again = code_geodesic(bolza_flow, word.vectors[k], 19, rng)
    for a, b in zip(word.shifted(k).vectors, again.vectors):
        assert a.slot == b.slot
        assert abs(a.s - b.s) < 1e-9
        assert abs(a.theta - b.theta) < 1e-9


def test_trajectory_leaves_patch(book_flow):
    rng = np.random.default_rng(7)
    with pytest.raises(LeftComplex):
        for _ in range(50):
            v = random_vector(book_flow, rng)
            code_geodesic(book_flow, v, 200, rng)


def test_vertex_aim_raises(bolza_flow):
    tab = bolza_flow.tables
    # aim straight at the corner shared by sides 0 and 1
    from pwhyp.geometry import slot_frame_at

    x, u, n = slot_frame_at(tab, 0, tab.edge_len[tab.slot_edge[0]] / 2)
    poly = bolza_flow.metric.chamber_geometry[0]
    corner = poly.vertices[1]
    w = mk.direction_to(x, corner)
    costh = mk.mdot(w, n)
    sinth = mk.mdot(w, u)
    theta = math.atan2(sinth, costh)
    with pytest.raises(VertexHit):
        bolza_flow.step(EdgeVector(0, tab.edge_len[tab.slot_edge[0]] / 2, theta))


@pytest.mark.parametrize("case", ["bolza", "book"])
def test_backend_parity(case, bolza_flow, book_flow):
    """Compiled and pure-python kernels agree on trajectories and steps."""
    pure = get_kernel(pure=True)
    fast = kernel
    flow = bolza_flow if case == "bolza" else book_flow
    tab = flow.tables
    rng = np.random.default_rng(8)
    for _ in range(50):
        v = random_vector(flow, rng)
        a = pure.flow_step(tab, v.slot, v.s, v.theta)
        b = fast.flow_step(tab, v.slot, v.s, v.theta)
        assert a[0] == b[0] and a[4] == b[4]
        if a[4] == 0:
            assert abs(a[1] - b[1]) < 1e-13
            assert abs(a[2] - b[2]) < 1e-13
            assert abs(a[3] - b[3]) < 1e-13
    uniforms = rng.random(40)
    va = pure.run_trajectory(tab, 0, 0.7, 0.25, 40, uniforms)
    vb = fast.run_trajectory(tab, 0, 0.7, 0.25, 40, uniforms)
    assert va[1] == vb[1] and va[2] == vb[2]
    assert np.array_equal(va[0][0][: va[1]], vb[0][0][: vb[1]])
    assert np.allclose(va[0][1][: va[1]], vb[0][1][: vb[1]], atol=1e-13)
