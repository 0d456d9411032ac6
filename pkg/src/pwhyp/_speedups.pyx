# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel: line-for-line twin of `_kernel_py` (see its docstring).

Consumes the same pre-drawn uniforms in the same order, so both backends
produce identical trajectories and estimator samples.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan2, atanh, asinh, cos, cosh, fabs, pi, sin, sinh, sqrt

cnp.import_array()

OK = 0
VERTEX = 1
TANGENT = 2
NO_EXIT = 3
LEFT_COMPLEX = 4
MISMATCH = 5
CAP = 6
NO_CROSS = 7

COMPILED = True

cdef int C_OK = 0, C_VERTEX = 1, C_TANGENT = 2, C_NO_EXIT = 3
cdef int C_LEFT = 4, C_MISMATCH = 5, C_CAP = 6, C_NO_CROSS = 7

cdef double INF = float("inf")


cdef struct Tables:
    const long long* chamb_offset
    const double* A
    const double* uA
    const double* pole
    const double* slen
    const int* sedge
    const signed char* sigma
    const int* schamber
    const double* elen
    const int* eq
    const long long* eoff
    const int* elist
    double tol_vertex
    double tol_tangent


cdef class _TabView:
    """Owns contiguous copies of the table arrays for the C struct."""
    cdef cnp.ndarray chamb_offset, A, uA, pole, slen, sedge, sigma, schamber
    cdef cnp.ndarray elen, eq, eoff, elist
    cdef Tables tabs

    def __init__(self, tab):
        self.chamb_offset = np.ascontiguousarray(tab.chamb_offset, dtype=np.int64)
        self.A = np.ascontiguousarray(tab.slot_A, dtype=np.float64)
        self.uA = np.ascontiguousarray(tab.slot_uA, dtype=np.float64)
        self.pole = np.ascontiguousarray(tab.slot_pole, dtype=np.float64)
        self.slen = np.ascontiguousarray(tab.slot_len, dtype=np.float64)
        self.sedge = np.ascontiguousarray(tab.slot_edge, dtype=np.int32)
        self.sigma = np.ascontiguousarray(tab.slot_sigma, dtype=np.int8)
        self.schamber = np.ascontiguousarray(tab.slot_chamber, dtype=np.int32)
        self.elen = np.ascontiguousarray(tab.edge_len, dtype=np.float64)
        self.eq = np.ascontiguousarray(tab.edge_q, dtype=np.int32)
        self.eoff = np.ascontiguousarray(tab.edge_slot_offset, dtype=np.int64)
        self.elist = np.ascontiguousarray(tab.edge_slot_list, dtype=np.int32)
        self.tabs.chamb_offset = <const long long*> cnp.PyArray_DATA(self.chamb_offset)
        self.tabs.A = <const double*> cnp.PyArray_DATA(self.A)
        self.tabs.uA = <const double*> cnp.PyArray_DATA(self.uA)
        self.tabs.pole = <const double*> cnp.PyArray_DATA(self.pole)
        self.tabs.slen = <const double*> cnp.PyArray_DATA(self.slen)
        self.tabs.sedge = <const int*> cnp.PyArray_DATA(self.sedge)
        self.tabs.sigma = <const signed char*> cnp.PyArray_DATA(self.sigma)
        self.tabs.schamber = <const int*> cnp.PyArray_DATA(self.schamber)
        self.tabs.elen = <const double*> cnp.PyArray_DATA(self.elen)
        self.tabs.eq = <const int*> cnp.PyArray_DATA(self.eq)
        self.tabs.eoff = <const long long*> cnp.PyArray_DATA(self.eoff)
        self.tabs.elist = <const int*> cnp.PyArray_DATA(self.elist)
        self.tabs.tol_vertex = tab.tol_vertex
        self.tabs.tol_tangent = tab.tol_tangent


def _view(tab):
    cached = getattr(tab, "_speedups_view", None)
    if cached is None:
        cached = _TabView(tab)
        tab._speedups_view = cached
    return cached


cdef inline double mdot(const double* u, const double* v) nogil:
    return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


cdef inline void mcross(const double* u, const double* v, double* out) nogil:
    out[0] = -(u[1] * v[2] - u[2] * v[1])
    out[1] = u[2] * v[0] - u[0] * v[2]
    out[2] = u[0] * v[1] - u[1] * v[0]


cdef struct Exit:
    int slot
    double s
    double theta_i
    double t
    int status


cdef Exit shoot(Tables* T, int c, const double* x, const double* w, int skip) nogil:
    cdef Exit out
    cdef long long lo = T.chamb_offset[c], hi = T.chamb_offset[c + 1]
    cdef double best_t = INF
    cdef int best_k = -1
    cdef long long k
    cdef double cx, cw, t, ch, sh
    cdef double y[3]
    cdef double wy[3]
    cdef double u_y[3]
    cdef const double* pole
    for k in range(lo, hi):
        if k == skip:
            continue
        pole = T.pole + 3 * k
        cx = mdot(x, pole)
        cw = mdot(w, pole)
        if cw >= -1e-300 or cx >= -cw:
            continue
        t = atanh(cx / -cw)
        if 1e-15 < t < best_t:
            best_t = t
            best_k = <int> k
    if best_k < 0:
        out.slot = -1; out.s = 0; out.theta_i = 0; out.t = 0; out.status = C_NO_EXIT
        return out
    ch = cosh(best_t); sh = sinh(best_t)
    cdef int i
    for i in range(3):
        y[i] = x[i] * ch + w[i] * sh
        wy[i] = x[i] * sh + w[i] * ch
    cdef double nrm = sqrt(-mdot(y, y))
    for i in range(3):
        y[i] /= nrm
    cdef const double* Ak = T.A + 3 * best_k
    cdef const double* uAk = T.uA + 3 * best_k
    cdef double sinh_tau = mdot(y, uAk)
    cdef double cosh_tau = -mdot(y, Ak)
    cdef double tau = asinh(sinh_tau)
    cdef double L = T.slen[best_k]
    out.slot = best_k
    out.t = best_t
    if tau < T.tol_vertex or tau > L - T.tol_vertex:
        out.s = 0; out.theta_i = 0; out.status = C_VERTEX
        return out
    for i in range(3):
        u_y[i] = Ak[i] * sinh_tau + uAk[i] * cosh_tau
    pole = T.pole + 3 * best_k
    cdef double cos_i = -mdot(wy, pole)
    cdef double sin_i = -mdot(wy, u_y)
    cdef int sigma = T.sigma[best_k]
    cdef double theta_i = atan2(sigma * sin_i, cos_i)
    if fabs(theta_i) > pi / 2 - T.tol_tangent:
        out.s = 0; out.theta_i = 0; out.status = C_TANGENT
        return out
    out.s = tau if sigma > 0 else L - tau
    out.theta_i = theta_i
    out.status = C_OK
    return out


cdef void c_frame(Tables* T, int slot, double s_edge, double theta,
                  double* x, double* w) nogil:
    cdef int sigma = T.sigma[slot]
    cdef double L = T.slen[slot]
    cdef double sp = s_edge if sigma > 0 else L - s_edge
    cdef const double* A = T.A + 3 * slot
    cdef const double* uA = T.uA + 3 * slot
    cdef const double* pole = T.pole + 3 * slot
    cdef double ch = cosh(sp), sh = sinh(sp)
    cdef double ct = cos(theta), st = sigma * sin(theta)
    cdef int i
    for i in range(3):
        x[i] = A[i] * ch + uA[i] * sh
        w[i] = ct * pole[i] + st * (A[i] * sh + uA[i] * ch)


cdef Exit c_flow_step(Tables* T, int slot, double s_edge, double theta) nogil:
    cdef double x[3]
    cdef double w[3]
    c_frame(T, slot, s_edge, theta, x, w)
    return shoot(T, T.schamber[slot], x, w, slot)


cdef int c_pick(Tables* T, int exit_slot, double u) nogil:
    cdef int e = T.sedge[exit_slot]
    cdef int q = T.eq[e]
    cdef int idx = <int> (u * (q - 1))
    if idx >= q - 1:
        idx = q - 2
    cdef long long lo = T.eoff[e], hi = T.eoff[e + 1]
    cdef long long k
    cdef int count = 0
    for k in range(lo, hi):
        if T.elist[k] == exit_slot:
            continue
        if count == idx:
            return T.elist[k]
        count += 1
    return -1


# ---------------------------------------------------------------------------
# python-visible entry points


def frame(tab, slot, s_edge, theta):
    cdef _TabView V = _view(tab)
    cdef double x[3]
    cdef double w[3]
    c_frame(&V.tabs, slot, s_edge, theta, x, w)
    return (np.array([x[0], x[1], x[2]]), np.array([w[0], w[1], w[2]]))


def flow_step(tab, slot, s_edge, theta):
    cdef _TabView V = _view(tab)
    cdef Exit e = c_flow_step(&V.tabs, slot, s_edge, theta)
    return e.slot, e.s, e.theta_i, e.t, e.status


def flow_interior(tab, chamber, x, w):
    cdef _TabView V = _view(tab)
    cdef double cx[3]
    cdef double cw[3]
    cdef int i
    for i in range(3):
        cx[i] = x[i]
        cw[i] = w[i]
    cdef Exit e = shoot(&V.tabs, chamber, cx, cw, -1)
    return e.slot, e.s, e.theta_i, e.t, e.status


def continuation_slots(tab, exit_slot):
    e = int(tab.slot_edge[exit_slot])
    lo, hi = int(tab.edge_slot_offset[e]), int(tab.edge_slot_offset[e + 1])
    return [int(s) for s in tab.edge_slot_list[lo:hi] if s != exit_slot]


def pick_continuation(tab, exit_slot, u):
    cdef _TabView V = _view(tab)
    return c_pick(&V.tabs, exit_slot, u)


def run_trajectory(tab, slot, s_edge, theta, n_steps, uniforms):
    cdef _TabView V = _view(tab)
    cdef Tables* T = &V.tabs
    out_slot = np.empty(n_steps, dtype=np.int64)
    out_s = np.empty(n_steps, dtype=np.float64)
    out_theta = np.empty(n_steps, dtype=np.float64)
    out_len = np.empty(n_steps, dtype=np.float64)
    cdef long long[::1] v_slot = out_slot
    cdef double[::1] v_s = out_s
    cdef double[::1] v_theta = out_theta
    cdef double[::1] v_len = out_len
    cdef const double[::1] unif = np.ascontiguousarray(uniforms, dtype=np.float64)
    cdef int cur_slot = slot
    cdef double cur_s = s_edge, cur_theta = theta
    cdef Exit e
    cdef int i, nxt
    cdef int n = n_steps
    for i in range(n):
        v_slot[i] = cur_slot
        v_s[i] = cur_s
        v_theta[i] = cur_theta
        e = c_flow_step(T, cur_slot, cur_s, cur_theta)
        if e.status != C_OK:
            return (out_slot, out_s, out_theta, out_len), i, e.status
        v_len[i] = e.t
        nxt = c_pick(T, e.slot, unif[i])
        if nxt < 0:
            return (out_slot, out_s, out_theta, out_len), i + 1, C_LEFT
        cur_slot = nxt
        cur_s = e.s
        cur_theta = -e.theta_i
    return (out_slot, out_s, out_theta, out_len), n, C_OK


def first_lengths(tab, slots, ss, thetas):
    cdef _TabView V = _view(tab)
    cdef Tables* T = &V.tabs
    cdef const long long[::1] v_slots = np.ascontiguousarray(slots, dtype=np.int64)
    cdef const double[::1] v_ss = np.ascontiguousarray(ss, dtype=np.float64)
    cdef const double[::1] v_th = np.ascontiguousarray(thetas, dtype=np.float64)
    cdef Py_ssize_t n = v_slots.shape[0]
    out = np.empty(n, dtype=np.float64)
    status = np.empty(n, dtype=np.int64)
    cdef double[::1] v_out = out
    cdef long long[::1] v_status = status
    cdef Py_ssize_t i
    cdef Exit e
    with nogil:
        for i in range(n):
            e = c_flow_step(T, <int> v_slots[i], v_ss[i], v_th[i])
            v_out[i] = e.t
            v_status[i] = e.status
    return out, status


def push_batch(tab, slots, ss, thetas, steps, uniforms):
    cdef _TabView V = _view(tab)
    cdef Tables* T = &V.tabs
    cdef const long long[::1] v_slots = np.ascontiguousarray(slots, dtype=np.int64)
    cdef const double[::1] v_ss = np.ascontiguousarray(ss, dtype=np.float64)
    cdef const double[::1] v_th = np.ascontiguousarray(thetas, dtype=np.float64)
    cdef const double[::1] unif = np.ascontiguousarray(uniforms, dtype=np.float64)
    cdef Py_ssize_t n = v_slots.shape[0]
    cdef int n_steps = steps
    o_slot = np.empty(n, dtype=np.int64)
    o_s = np.empty(n, dtype=np.float64)
    o_theta = np.empty(n, dtype=np.float64)
    status = np.zeros(n, dtype=np.int64)
    cdef long long[::1] v_oslot = o_slot
    cdef double[::1] v_os = o_s
    cdef double[::1] v_otheta = o_theta
    cdef long long[::1] v_status = status
    cdef Py_ssize_t i
    cdef int j, cur_slot, nxt, st
    cdef double cur_s, cur_theta
    cdef Exit e
    with nogil:
        for i in range(n):
            cur_slot = <int> v_slots[i]
            cur_s = v_ss[i]
            cur_theta = v_th[i]
            st = C_OK
            for j in range(n_steps):
                e = c_flow_step(T, cur_slot, cur_s, cur_theta)
                if e.status != C_OK:
                    st = e.status
                    break
                nxt = c_pick(T, e.slot, unif[i * n_steps + j])
                if nxt < 0:
                    st = C_LEFT
                    break
                cur_slot = nxt
                cur_s = e.s
                cur_theta = -e.theta_i
            v_oslot[i] = cur_slot
            v_os[i] = cur_s
            v_otheta[i] = cur_theta
            v_status[i] = st
    return o_slot, o_s, o_theta, status


cdef struct WinOut:
    int status
    long long weight
    long long denom
    int chain
    long long uptr


cdef WinOut lc_window(Tables* T, const long long* b_entry, const double* b_es,
                      const double* b_eth, const long long* b_exit,
                      const double* b_xs, const double* b_xth,
                      int K, int i, Exit cA, Exit cB,
                      const double* unif, long long uptr, int kmax) nogil:
    cdef WinOut out
    cdef int r_idx = i, l_idx = i
    cdef int beta_r = <int> b_exit[i]
    cdef int beta_l = <int> b_entry[i]
    cdef Exit right, left
    if cA.slot == beta_r or cB.slot == beta_l:
        right = cA; left = cB
    elif cA.slot == beta_l or cB.slot == beta_r:
        right = cB; left = cA
    else:
        out.status = C_OK; out.weight = 1; out.denom = 1; out.chain = 1
        out.uptr = uptr
        return out
    cdef long long weight = 1, denom = 1
    cdef int chain = 1
    cdef bint right_open, left_open
    cdef int e, q, target, choice, l_prev
    cdef Exit step
    while True:
        right_open = right.slot == beta_r
        left_open = left.slot == beta_l
        if not right_open and not left_open:
            out.status = C_OK; out.weight = weight; out.denom = denom
            out.chain = chain; out.uptr = uptr
            return out
        if chain >= kmax:
            out.status = C_CAP; out.weight = 0; out.denom = denom
            out.chain = chain; out.uptr = uptr
            return out
        if right_open:
            e = T.sedge[beta_r]
            q = T.eq[e]
            r_idx = (r_idx + 1) % K
            target = <int> b_entry[r_idx]
            weight *= q - 1
            choice = c_pick(T, right.slot, unif[uptr])
            uptr += 1
            denom *= q - 1
            if choice != target:
                out.status = C_MISMATCH; out.weight = 0; out.denom = denom
                out.chain = chain; out.uptr = uptr
                return out
            step = c_flow_step(T, target, right.s, -right.theta_i)
            if step.status != C_OK:
                out.status = step.status; out.weight = 0; out.denom = denom
                out.chain = chain; out.uptr = uptr
                return out
            right = step
            beta_r = <int> b_exit[r_idx]
            chain += 1
        if left_open:
            e = T.sedge[beta_l]
            q = T.eq[e]
            l_prev = (l_idx - 1) % K
            if l_prev < 0:
                l_prev += K
            target = <int> b_exit[l_prev]
            weight *= q - 1
            choice = c_pick(T, left.slot, unif[uptr])
            uptr += 1
            denom *= q - 1
            if choice != target:
                out.status = C_MISMATCH; out.weight = 0; out.denom = denom
                out.chain = chain; out.uptr = uptr
                return out
            step = c_flow_step(T, target, left.s, -left.theta_i)
            if step.status != C_OK:
                out.status = step.status; out.weight = 0; out.denom = denom
                out.chain = chain; out.uptr = uptr
                return out
            left = step
            l_idx = l_prev
            beta_l = <int> b_entry[l_idx]
            chain += 1


def lc_batch(tab, beta, visit_idx, offsets, theta_rel, uniforms, kmax):
    cdef _TabView V = _view(tab)
    cdef Tables* T = &V.tabs
    b_entry_a = np.ascontiguousarray(beta.entry_slot, dtype=np.int64)
    b_es_a = np.ascontiguousarray(beta.entry_s, dtype=np.float64)
    b_eth_a = np.ascontiguousarray(beta.entry_theta, dtype=np.float64)
    b_exit_a = np.ascontiguousarray(beta.exit_slot, dtype=np.int64)
    b_xs_a = np.ascontiguousarray(beta.exit_s, dtype=np.float64)
    b_xth_a = np.ascontiguousarray(beta.exit_thetaI, dtype=np.float64)
    cdef const long long[::1] b_entry = b_entry_a
    cdef const double[::1] b_es = b_es_a
    cdef const double[::1] b_eth = b_eth_a
    cdef const long long[::1] b_exit = b_exit_a
    cdef const double[::1] b_xs = b_xs_a
    cdef const double[::1] b_xth = b_xth_a
    cdef const long long[::1] v_idx = np.ascontiguousarray(visit_idx, dtype=np.int64)
    cdef const double[::1] v_off = np.ascontiguousarray(offsets, dtype=np.float64)
    cdef const double[::1] v_th = np.ascontiguousarray(theta_rel, dtype=np.float64)
    cdef const double[::1] unif = np.ascontiguousarray(uniforms, dtype=np.float64)
    cdef Py_ssize_t n = v_idx.shape[0]
    cdef int K = <int> b_entry.shape[0]
    weights = np.zeros(n, dtype=np.float64)
    wints = np.zeros(n, dtype=np.int64)
    denoms = np.zeros(n, dtype=np.int64)
    status = np.zeros(n, dtype=np.int64)
    chains = np.zeros(n, dtype=np.int64)
    cdef double[::1] v_w = weights
    cdef long long[::1] v_wi = wints
    cdef long long[::1] v_d = denoms
    cdef long long[::1] v_st = status
    cdef long long[::1] v_ch = chains
    cdef long long uptr = 0
    cdef Py_ssize_t j
    cdef int i, c, m
    cdef double d, ch, sh, th, nrm
    cdef double x0[3]
    cdef double w0[3]
    cdef double x[3]
    cdef double wb[3]
    cdef double perp[3]
    cdef double g[3]
    cdef double gneg[3]
    cdef Exit cA, cB
    cdef WinOut wo
    cdef int kcap = kmax
    with nogil:
        for j in range(n):
            i = <int> v_idx[j]
            c_frame(T, <int> b_entry[i], b_es[i], b_eth[i], x0, w0)
            d = v_off[j]
            ch = cosh(d); sh = sinh(d)
            for m in range(3):
                x[m] = x0[m] * ch + w0[m] * sh
                wb[m] = x0[m] * sh + w0[m] * ch
            nrm = sqrt(-mdot(x, x))
            for m in range(3):
                x[m] /= nrm
            nrm = mdot(wb, x)
            for m in range(3):
                wb[m] += nrm * x[m]
            nrm = sqrt(mdot(wb, wb))
            for m in range(3):
                wb[m] /= nrm
            mcross(x, wb, perp)
            nrm = sqrt(mdot(perp, perp))
            for m in range(3):
                perp[m] /= nrm
            th = v_th[j]
            for m in range(3):
                g[m] = cos(th) * wb[m] + sin(th) * perp[m]
                gneg[m] = -g[m]
            c = T.schamber[b_entry[i]]
            cA = shoot(T, c, x, g, -1)
            cB = shoot(T, c, x, gneg, -1)
            if cA.status != C_OK or cB.status != C_OK:
                v_st[j] = cA.status if cA.status > cB.status else cB.status
                continue
            wo = lc_window(T, &b_entry[0], &b_es[0], &b_eth[0], &b_exit[0],
                           &b_xs[0], &b_xth[0], K, i, cA, cB, &unif[0],
                           uptr, kcap)
            uptr = wo.uptr
            v_st[j] = wo.status
            v_ch[j] = wo.chain
            v_d[j] = wo.denom
            v_wi[j] = wo.weight
            if wo.status == C_OK:
                v_w[j] = <double> wo.weight
    return weights, wints, denoms, status, chains


cdef WinOut ll_window(Tables* T, Exit a1, Exit b1, Exit a2, Exit b2,
                      const double* unif, long long uptr, int kmax) nogil:
    cdef WinOut out
    cdef Exit r1, l1, r2, l2, s1, s2
    if a1.slot == a2.slot or b1.slot == b2.slot:
        r1 = a1; l1 = b1; r2 = a2; l2 = b2
    elif a1.slot == b2.slot or b1.slot == a2.slot:
        r1 = a1; l1 = b1; r2 = b2; l2 = a2
    else:
        out.status = C_OK; out.weight = 1; out.denom = 1; out.chain = 1
        out.uptr = uptr
        return out
    cdef long long weight = 1, denom = 1
    cdef int chain = 1
    cdef bint right_open, left_open
    cdef int e, q, pick1, pick2
    while True:
        right_open = r1.slot == r2.slot
        left_open = l1.slot == l2.slot
        if not right_open and not left_open:
            out.status = C_OK; out.weight = weight; out.denom = denom
            out.chain = chain; out.uptr = uptr
            return out
        if chain >= kmax:
            out.status = C_CAP; out.weight = 0; out.denom = denom
            out.chain = chain; out.uptr = uptr
            return out
        if right_open:
            e = T.sedge[r1.slot]
            q = T.eq[e]
            weight *= q - 1
            denom *= q - 1
            pick1 = c_pick(T, r1.slot, unif[uptr])
            pick2 = c_pick(T, r2.slot, unif[uptr + 1])
            uptr += 2
            if pick1 < 0 or pick1 != pick2:
                out.status = C_MISMATCH; out.weight = 0; out.denom = denom
                out.chain = chain; out.uptr = uptr
                return out
            s1 = c_flow_step(T, pick1, r1.s, -r1.theta_i)
            s2 = c_flow_step(T, pick2, r2.s, -r2.theta_i)
            if s1.status != C_OK or s2.status != C_OK:
                out.status = s1.status if s1.status > s2.status else s2.status
                out.weight = 0; out.denom = denom; out.chain = chain
                out.uptr = uptr
                return out
            r1 = s1; r2 = s2
            chain += 1
        if left_open:
            e = T.sedge[l1.slot]
            q = T.eq[e]
            weight *= q - 1
            denom *= q - 1
            pick1 = c_pick(T, l1.slot, unif[uptr])
            pick2 = c_pick(T, l2.slot, unif[uptr + 1])
            uptr += 2
            if pick1 < 0 or pick1 != pick2:
                out.status = C_MISMATCH; out.weight = 0; out.denom = denom
                out.chain = chain; out.uptr = uptr
                return out
            s1 = c_flow_step(T, pick1, l1.s, -l1.theta_i)
            s2 = c_flow_step(T, pick2, l2.s, -l2.theta_i)
            if s1.status != C_OK or s2.status != C_OK:
                out.status = s1.status if s1.status > s2.status else s2.status
                out.weight = 0; out.denom = denom; out.chain = chain
                out.uptr = uptr
                return out
            l1 = s1; l2 = s2
            chain += 1


def ll_pairs(tab, v_slots, v_s, v_theta, w_slots, w_s, w_theta,
             uniforms, kmax, guard, angle_floor):
    cdef _TabView V = _view(tab)
    cdef Tables* T = &V.tabs
    cdef const long long[::1] a_slots = np.ascontiguousarray(v_slots, dtype=np.int64)
    cdef const double[::1] a_s = np.ascontiguousarray(v_s, dtype=np.float64)
    cdef const double[::1] a_th = np.ascontiguousarray(v_theta, dtype=np.float64)
    cdef const long long[::1] c_slots = np.ascontiguousarray(w_slots, dtype=np.int64)
    cdef const double[::1] c_s = np.ascontiguousarray(w_s, dtype=np.float64)
    cdef const double[::1] c_th = np.ascontiguousarray(w_theta, dtype=np.float64)
    cdef const double[::1] unif = np.ascontiguousarray(uniforms, dtype=np.float64)
    cdef Py_ssize_t n = a_slots.shape[0]
    weights = np.zeros(n, dtype=np.float64)
    wints = np.zeros(n, dtype=np.int64)
    denoms = np.zeros(n, dtype=np.int64)
    status = np.zeros(n, dtype=np.int64)
    chains = np.zeros(n, dtype=np.int64)
    cdef double[::1] v_w = weights
    cdef long long[::1] v_wi = wints
    cdef long long[::1] v_d = denoms
    cdef long long[::1] v_st = status
    cdef long long[::1] v_ch = chains
    cdef long long uptr = 0
    cdef Py_ssize_t j
    cdef int m
    cdef double x1[3]
    cdef double w1[3]
    cdef double x2[3]
    cdef double w2[3]
    cdef double p1[3]
    cdef double p2[3]
    cdef double y[3]
    cdef double u1[3]
    cdef double u2[3]
    cdef double yy, t1, t2, cosang, sh1, ch1, sh2, ch2
    cdef Exit e1, e2, base1, base2
    cdef WinOut wo
    cdef double c_guard = guard, c_floor = angle_floor
    cdef int kcap = kmax
    with nogil:
        for j in range(n):
            c_frame(T, <int> a_slots[j], a_s[j], a_th[j], x1, w1)
            c_frame(T, <int> c_slots[j], c_s[j], c_th[j], x2, w2)
            e1 = shoot(T, T.schamber[a_slots[j]], x1, w1, <int> a_slots[j])
            e2 = shoot(T, T.schamber[c_slots[j]], x2, w2, <int> c_slots[j])
            if e1.status != C_OK or e2.status != C_OK:
                v_st[j] = e1.status if e1.status > e2.status else e2.status
                continue
            mcross(x1, w1, p1)
            mcross(x2, w2, p2)
            mcross(p1, p2, y)
            yy = mdot(y, y)
            if yy >= -1e-14:
                v_st[j] = C_NO_CROSS
                continue
            yy = sqrt(-yy)
            for m in range(3):
                y[m] /= yy
            if y[0] < 0:
                for m in range(3):
                    y[m] = -y[m]
            t1 = asinh(mdot(y, w1))
            t2 = asinh(mdot(y, w2))
            if not (c_guard < t1 < e1.t - c_guard and c_guard < t2 < e2.t - c_guard):
                v_st[j] = C_NO_CROSS
                continue
            sh1 = sinh(t1); ch1 = cosh(t1)
            sh2 = sinh(t2); ch2 = cosh(t2)
            for m in range(3):
                u1[m] = x1[m] * sh1 + w1[m] * ch1
                u2[m] = x2[m] * sh2 + w2[m] * ch2
            cosang = fabs(mdot(u1, u2))
            if cosang > cos(c_floor):
                v_st[j] = C_NO_CROSS
                continue
            base1.slot = <int> a_slots[j]; base1.s = a_s[j]
            base1.theta_i = a_th[j]; base1.t = 0; base1.status = C_OK
            base2.slot = <int> c_slots[j]; base2.s = c_s[j]
            base2.theta_i = c_th[j]; base2.t = 0; base2.status = C_OK
            wo = ll_window(T, e1, base1, e2, base2, &unif[0], uptr, kcap)
            uptr = wo.uptr
            v_st[j] = wo.status
            v_ch[j] = wo.chain
            v_d[j] = wo.denom
            v_wi[j] = wo.weight
            if wo.status == C_OK:
                v_w[j] = <double> wo.weight
    return weights, wints, denoms, status, chains
