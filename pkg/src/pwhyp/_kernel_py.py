"""Pure-python kernel: chamber flow steps and Monte Carlo inner loops.

This is the reference implementation of the hot paths; `_speedups.pyx` is a
line-for-line compiled twin selected at import when available.  Both consume
pre-drawn uniform deviates so that results are reproducible and backend
independent.

Status codes returned by the stepping functions:
    0 OK, 1 vertex hit, 2 tangent, 3 no exit (numerical), 4 left the patch,
    5 window branch mismatch, 6 window cap exceeded, 7 no transversal crossing.
"""

import math

import numpy as np

OK = 0
VERTEX = 1
TANGENT = 2
NO_EXIT = 3
LEFT_COMPLEX = 4
MISMATCH = 5
CAP = 6
NO_CROSS = 7

COMPILED = False


def _mdot(u, v):
    return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _mcross(u, v):
    return np.array([
        -(u[1] * v[2] - u[2] * v[1]),
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ])


def _shoot(tab, c, x, w, skip):
    """First exit of the ray (x, w) over the sides of chamber c.

    Returns (slot, s_edge, theta_I, t, status); skip excludes the side the
    ray is based on.
    """
    lo, hi = int(tab.chamb_offset[c]), int(tab.chamb_offset[c + 1])
    best_t = math.inf
    best_k = -1
    for k in range(lo, hi):
        if k == skip:
            continue
        pole = tab.slot_pole[k]
        cx = _mdot(x, pole)
        cw = _mdot(w, pole)
        if cw >= -1e-300 or cx >= -cw:
            continue
        t = math.atanh(cx / -cw)
        if 1e-15 < t < best_t:
            best_t = t
            best_k = k
    if best_k < 0:
        return -1, 0.0, 0.0, 0.0, NO_EXIT
    k = best_k
    ch, sh = math.cosh(best_t), math.sinh(best_t)
    y = x * ch + w * sh
    y = y / math.sqrt(-_mdot(y, y))
    wy = x * sh + w * ch
    A = tab.slot_A[k]
    uA = tab.slot_uA[k]
    sinh_tau = _mdot(y, uA)
    cosh_tau = -_mdot(y, A)
    tau = math.asinh(sinh_tau)
    L = tab.slot_len[k]
    if tau < tab.tol_vertex or tau > L - tab.tol_vertex:
        return k, 0.0, 0.0, best_t, VERTEX
    u_y = A * sinh_tau + uA * cosh_tau
    pole = tab.slot_pole[k]
    cos_i = -_mdot(wy, pole)
    sin_i = -_mdot(wy, u_y)
    sigma = int(tab.slot_sigma[k])
    theta_i = math.atan2(sigma * sin_i, cos_i)
    if abs(theta_i) > math.pi / 2 - tab.tol_tangent:
        return k, 0.0, 0.0, best_t, TANGENT
    s_edge = tau if sigma > 0 else L - tau
    return k, s_edge, theta_i, best_t, OK


def frame(tab, slot, s_edge, theta):
    """Base point and unit direction of an edge-vector state."""
    sigma = int(tab.slot_sigma[slot])
    L = tab.slot_len[slot]
    sp = s_edge if sigma > 0 else L - s_edge
    A = tab.slot_A[slot]
    uA = tab.slot_uA[slot]
    ch, sh = math.cosh(sp), math.sinh(sp)
    x = A * ch + uA * sh
    u_side = A * sh + uA * ch
    w = math.cos(theta) * tab.slot_pole[slot] + (sigma * math.sin(theta)) * u_side
    return x, w


def flow_step(tab, slot, s_edge, theta):
    x, w = frame(tab, slot, s_edge, theta)
    return _shoot(tab, int(tab.slot_chamber[slot]), x, w, slot)


def flow_interior(tab, chamber, x, w):
    return _shoot(tab, chamber, np.asarray(x, float), np.asarray(w, float), -1)


def continuation_slots(tab, exit_slot):
    e = int(tab.slot_edge[exit_slot])
    lo, hi = int(tab.edge_slot_offset[e]), int(tab.edge_slot_offset[e + 1])
    return [int(s) for s in tab.edge_slot_list[lo:hi] if s != exit_slot]


def pick_continuation(tab, exit_slot, u):
    """Uniform pick among the q-1 continuations; -1 when the chosen chamber
    is absent from a patch."""
    e = int(tab.slot_edge[exit_slot])
    q = int(tab.edge_q[e])
    others = continuation_slots(tab, exit_slot)
    idx = int(u * (q - 1))
    if idx >= q - 1:
        idx = q - 2
    return others[idx] if idx < len(others) else -1


def run_trajectory(tab, slot, s_edge, theta, n_steps, uniforms):
    """Flow with uniform branch choices, recording entry states and segment
    lengths; returns (entries, n_done, status)."""
    out_slot = np.empty(n_steps, dtype=np.int64)
    out_s = np.empty(n_steps)
    out_theta = np.empty(n_steps)
    out_len = np.empty(n_steps)
    cur = (int(slot), float(s_edge), float(theta))
    for i in range(n_steps):
        out_slot[i], out_s[i], out_theta[i] = cur
        k, s2, th_i, t, status = flow_step(tab, *cur)
        if status != OK:
            return (out_slot, out_s, out_theta, out_len), i, status
        out_len[i] = t
        nxt = pick_continuation(tab, k, uniforms[i])
        if nxt < 0:
            return (out_slot, out_s, out_theta, out_len), i + 1, LEFT_COMPLEX
        cur = (nxt, s2, -th_i)
    return (out_slot, out_s, out_theta, out_len), n_steps, OK


def first_lengths(tab, slots, ss, thetas):
    n = len(slots)
    out = np.empty(n)
    status = np.empty(n, dtype=np.int64)
    for i in range(n):
        _, _, _, t, st = flow_step(tab, int(slots[i]), float(ss[i]), float(thetas[i]))
        out[i] = t
        status[i] = st
    return out, status


def push_batch(tab, slots, ss, thetas, steps, uniforms):
    """Markov push: `steps` applications of (flow; uniform continuation)."""
    n = len(slots)
    o_slot = np.empty(n, dtype=np.int64)
    o_s = np.empty(n)
    o_theta = np.empty(n)
    status = np.zeros(n, dtype=np.int64)
    for i in range(n):
        cur = (int(slots[i]), float(ss[i]), float(thetas[i]))
        st = OK
        for j in range(steps):
            k, s2, th_i, _, st = flow_step(tab, *cur)
            if st != OK:
                break
            nxt = pick_continuation(tab, k, uniforms[i * steps + j])
            if nxt < 0:
                st = LEFT_COMPLEX
                break
            cur = (nxt, s2, -th_i)
        o_slot[i], o_s[i], o_theta[i] = cur
        status[i] = st
    return o_slot, o_s, o_theta, status


# ---------------------------------------------------------------------------
# window growth used by the intersection estimators.
#
# A window is grown as a chain of chamber lifts around a transversal
# crossing.  Slot ids are only compared between objects living in the same
# lift: at chain length 1 all four crossing slots lie in one chamber copy,
# and each extension pushes both geodesics through the same edge into the
# same neighboring copy, so end-local comparisons stay lift-consistent.


def _lc_window(tab, beta, i, cA, cB, uniforms, uptr, kmax):
    """Grow the minimal good window for (sampled ray, closed geodesic beta).

    cA/cB are the forward/backward exit records (slot, s, thetaI) of the ray
    in the crossing chamber, visit i of beta.  Returns
    (status, weight, denom, chain, uptr).
    """
    K = len(beta.entry_slot)
    r_idx = i
    l_idx = i
    beta_r = int(beta.exit_slot[i])
    beta_l = int(beta.entry_slot[i])
    # orient the ray's ends relative to beta's (all four slots share a lift)
    if cA[0] == beta_r or cB[0] == beta_l:
        right, left = cA, cB
    elif cA[0] == beta_l or cB[0] == beta_r:
        right, left = cB, cA
    else:
        return OK, 1, 1, 1, uptr  # good window: single chamber
    weight = 1
    denom = 1
    chain = 1
    right_open = True
    left_open = True
    while True:
        right_open = right[0] == beta_r
        left_open = left[0] == beta_l
        if not right_open and not left_open:
            return OK, weight, denom, chain, uptr
        if chain >= kmax:
            return CAP, 0, denom, chain, uptr
        if right_open:
            e = int(tab.slot_edge[beta_r])
            q = int(tab.edge_q[e])
            r_idx = (r_idx + 1) % K
            target = int(beta.entry_slot[r_idx])
            weight *= q - 1
            choice = pick_continuation(tab, right[0], uniforms[uptr])
            uptr += 1
            denom *= q - 1
            if choice != target:
                return MISMATCH, 0, denom, chain, uptr
            k, s2, th_i, t, st = flow_step(tab, target, right[1], -right[2])
            if st != OK:
                return st, 0, denom, chain, uptr
            right = (k, s2, th_i)
            beta_r = int(beta.exit_slot[r_idx])
            chain += 1
        if left_open:
            e = int(tab.slot_edge[beta_l])
            q = int(tab.edge_q[e])
            l_prev = (l_idx - 1) % K
            target = int(beta.exit_slot[l_prev])
            weight *= q - 1
            choice = pick_continuation(tab, left[0], uniforms[uptr])
            uptr += 1
            denom *= q - 1
            if choice != target:
                return MISMATCH, 0, denom, chain, uptr
            k, s2, th_i, t, st = flow_step(tab, target, left[1], -left[2])
            if st != OK:
                return st, 0, denom, chain, uptr
            left = (k, s2, th_i)
            l_idx = l_prev
            beta_l = int(beta.entry_slot[l_idx])
            chain += 1


def lc_batch(tab, beta, visit_idx, offsets, theta_rel, uniforms, kmax):
    """Per-sample weights for the Liouville x closed-geodesic pairing.

    Each sample launches a ray from a point of beta (visit index, distance
    into the segment) at a signed angle; the weight is the window's
    branching product when the sampled branches realize the minimal good
    window, else 0.  `weight * (prod of branch probabilities) == 1` is
    checked exactly in integers via the returned denominators.
    """
    n = len(visit_idx)
    weights = np.zeros(n)
    denoms = np.zeros(n, dtype=np.int64)
    wints = np.zeros(n, dtype=np.int64)
    status = np.zeros(n, dtype=np.int64)
    chains = np.zeros(n, dtype=np.int64)
    uptr = 0
    for j in range(n):
        i = int(visit_idx[j])
        x0, w0 = frame(tab, int(beta.entry_slot[i]), float(beta.entry_s[i]),
                       float(beta.entry_theta[i]))
        d = float(offsets[j])
        ch, sh = math.cosh(d), math.sinh(d)
        x = x0 * ch + w0 * sh
        x = x / math.sqrt(-_mdot(x, x))
        wb = x0 * sh + w0 * ch
        wb = wb + _mdot(wb, x) * x
        wb = wb / math.sqrt(_mdot(wb, wb))
        perp = _mcross(x, wb)
        perp = perp / math.sqrt(_mdot(perp, perp))
        th = float(theta_rel[j])
        g = math.cos(th) * wb + math.sin(th) * perp
        c = int(tab.slot_chamber[beta.entry_slot[i]])
        cA = _shoot(tab, c, x, g, -1)
        cB = _shoot(tab, c, x, -g, -1)
        if cA[4] != OK or cB[4] != OK:
            status[j] = max(cA[4], cB[4])
            continue
        st, w_int, denom, chain, uptr = _lc_window(
            tab, beta, i, (cA[0], cA[1], cA[2]), (cB[0], cB[1], cB[2]),
            uniforms, uptr, kmax)
        status[j] = st
        chains[j] = chain
        denoms[j] = denom
        wints[j] = w_int
        if st == OK:
            weights[j] = float(w_int)
    return weights, wints, denoms, status, chains


def _chord_cross(tab, s1, s2, guard, angle_floor):
    """Transversal crossing data for two edge-vector chords in one chamber.

    Returns (crossed, x, t1, t2, end1, end2) where end_i is the forward exit
    record of chord i."""
    x1, w1 = frame(tab, *s1)
    x2, w2 = frame(tab, *s2)
    c = int(tab.slot_chamber[s1[0]])
    e1 = _shoot(tab, c, x1, w1, s1[0])
    e2 = _shoot(tab, c, x2, w2, s2[0])
    if e1[4] != OK or e2[4] != OK:
        return max(e1[4], e2[4]), None, 0.0, 0.0, e1, e2
    p1 = _mcross(x1, w1)
    p2 = _mcross(x2, w2)
    y = _mcross(p1, p2)
    yy = _mdot(y, y)
    if yy >= -1e-14:
        return NO_CROSS, None, 0.0, 0.0, e1, e2
    y = y / math.sqrt(-yy)
    if y[0] < 0:
        y = -y
    t1 = math.asinh(_mdot(y, w1))
    t2 = math.asinh(_mdot(y, w2))
    if not (guard < t1 < e1[3] - guard and guard < t2 < e2[3] - guard):
        return NO_CROSS, None, 0.0, 0.0, e1, e2
    u1 = x1 * math.sinh(t1) + w1 * math.cosh(t1)
    u2 = x2 * math.sinh(t2) + w2 * math.cosh(t2)
    cosang = abs(_mdot(u1, u2))
    if cosang > math.cos(angle_floor):
        return NO_CROSS, None, 0.0, 0.0, e1, e2
    return OK, y, t1, t2, e1, e2


def _ll_window(tab, ends1, ends2, uniforms, uptr, kmax):
    """Minimal good window for two sampled chords known to cross.

    ends_i = (forward record, backward record); both geodesics extend with
    their own uniform branch choices which must agree edge by edge."""
    a1, b1 = ends1
    a2, b2 = ends2
    # orientation: match shared end slots within the single starting lift
    if a1[0] == a2[0] or b1[0] == b2[0]:
        r1, l1, r2, l2 = a1, b1, a2, b2
    elif a1[0] == b2[0] or b1[0] == a2[0]:
        r1, l1, r2, l2 = a1, b1, b2, a2
    else:
        return OK, 1, 1, 1, uptr
    weight = 1
    denom = 1
    chain = 1
    while True:
        right_open = r1[0] == r2[0]
        left_open = l1[0] == l2[0]
        if not right_open and not left_open:
            return OK, weight, denom, chain, uptr
        if chain >= kmax:
            return CAP, 0, denom, chain, uptr
        if right_open:
            e = int(tab.slot_edge[r1[0]])
            q = int(tab.edge_q[e])
            weight *= q - 1
            denom *= q - 1
            pick1 = pick_continuation(tab, r1[0], uniforms[uptr])
            pick2 = pick_continuation(tab, r2[0], uniforms[uptr + 1])
            uptr += 2
            if pick1 < 0 or pick1 != pick2:
                return MISMATCH, 0, denom, chain, uptr
            k1, s1n, th1, _, st1 = flow_step(tab, pick1, r1[1], -r1[2])
            k2, s2n, th2, _, st2 = flow_step(tab, pick2, r2[1], -r2[2])
            if st1 != OK or st2 != OK:
                return max(st1, st2), 0, denom, chain, uptr
            r1, r2 = (k1, s1n, th1), (k2, s2n, th2)
            chain += 1
        if left_open:
            e = int(tab.slot_edge[l1[0]])
            q = int(tab.edge_q[e])
            weight *= q - 1
            denom *= q - 1
            pick1 = pick_continuation(tab, l1[0], uniforms[uptr])
            pick2 = pick_continuation(tab, l2[0], uniforms[uptr + 1])
            uptr += 2
            if pick1 < 0 or pick1 != pick2:
                return MISMATCH, 0, denom, chain, uptr
            k1, s1n, th1, _, st1 = flow_step(tab, pick1, l1[1], -l1[2])
            k2, s2n, th2, _, st2 = flow_step(tab, pick2, l2[1], -l2[2])
            if st1 != OK or st2 != OK:
                return max(st1, st2), 0, denom, chain, uptr
            l1, l2 = (k1, s1n, th1), (k2, s2n, th2)
            chain += 1


def ll_pairs(tab, v_slots, v_s, v_theta, w_slots, w_s, w_theta,
             uniforms, kmax, guard, angle_floor):
    """Window-weighted crossing indicators for paired chamber chords.

    Both chords of a pair point into the same chamber; the contribution is
    the window weight when the chords cross transversally and the sampled
    branch extensions realize the minimal good window."""
    n = len(v_slots)
    weights = np.zeros(n)
    wints = np.zeros(n, dtype=np.int64)
    denoms = np.zeros(n, dtype=np.int64)
    status = np.zeros(n, dtype=np.int64)
    chains = np.zeros(n, dtype=np.int64)
    uptr = 0
    for j in range(n):
        s1 = (int(v_slots[j]), float(v_s[j]), float(v_theta[j]))
        s2 = (int(w_slots[j]), float(w_s[j]), float(w_theta[j]))
        st, y, t1, t2, e1, e2 = _chord_cross(tab, s1, s2, guard, angle_floor)
        if st != OK:
            status[j] = st
            continue
        # backward exit of a chord is its own base vector reversed
        ends1 = ((e1[0], e1[1], e1[2]), (s1[0], s1[1], s1[2]))
        ends2 = ((e2[0], e2[1], e2[2]), (s2[0], s2[1], s2[2]))
        st, w_int, denom, chain, uptr = _ll_window(tab, ends1, ends2,
                                                   uniforms, uptr, kmax)
        status[j] = st
        chains[j] = chain
        denoms[j] = denom
        wints[j] = w_int
        if st == OK:
            weights[j] = float(w_int)
    return weights, wints, denoms, status, chains
