# cython: language_level=3
"""Compiled twins of the kernels in ``_pykernels``.

Signatures and semantics match the pure-Python module; see there for the
contract of each function.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, floor, fabs
from libc.stdlib cimport malloc, free

cnp.import_array()

BACKEND = "cython"


# ---------------------------------------------------------------------------
# breadth-first search
# ---------------------------------------------------------------------------

def bfs_rows(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices, sources, long radius):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef cnp.int64_t[::1] src = np.ascontiguousarray(sources, dtype=np.int64)
    cdef Py_ssize_t ns = src.shape[0]
    out = np.full((ns, n), -1, dtype=np.int32)
    cdef int[:, ::1] dist = out
    cdef cnp.int64_t[::1] queue = np.empty(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t r, head, tail, j
    cdef cnp.int64_t v, u
    cdef int dv
    for r in range(ns):
        head = 0
        tail = 0
        dist[r, src[r]] = 0
        queue[tail] = src[r]
        tail += 1
        while head < tail:
            v = queue[head]
            head += 1
            dv = dist[r, v]
            if radius >= 0 and dv >= radius:
                continue
            for j in range(indptr[v], indptr[v + 1]):
                u = indices[j]
                if dist[r, u] < 0:
                    dist[r, u] = dv + 1
                    queue[tail] = u
                    tail += 1
    return out


def bfs_ball(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices, long source, long radius):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef int *dist = <int *> malloc(n * sizeof(int))
    cdef cnp.int64_t *queue = <cnp.int64_t *> malloc(n * sizeof(cnp.int64_t))
    cdef Py_ssize_t head = 0, tail = 0, j, i
    cdef cnp.int64_t v, u
    cdef int dv
    try:
        for i in range(n):
            dist[i] = -1
        dist[source] = 0
        queue[tail] = source
        tail += 1
        while head < tail:
            v = queue[head]
            head += 1
            dv = dist[v]
            if dv >= radius:
                continue
            for j in range(indptr[v], indptr[v + 1]):
                u = indices[j]
                if dist[u] < 0:
                    dist[u] = dv + 1
                    queue[tail] = u
                    tail += 1
        verts = np.empty(tail, dtype=np.int64)
        dd = np.empty(tail, dtype=np.int32)
        for i in range(tail):
            verts[i] = queue[i]
            dd[i] = dist[queue[i]]
        return verts, dd
    finally:
        free(dist)
        free(queue)


def ball(indptr, indices, long source, long radius):
    return bfs_ball(indptr, indices, source, radius)[0]


def nearest_members(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
                    member, sources, long count):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef cnp.uint8_t[::1] mem = np.ascontiguousarray(member, dtype=np.uint8)
    cdef cnp.int64_t[::1] src = np.ascontiguousarray(sources, dtype=np.int64)
    cdef Py_ssize_t ns = src.shape[0]
    idx_a = np.full((ns, count), -1, dtype=np.int64)
    dst_a = np.full((ns, count), -1, dtype=np.int32)
    cdef cnp.int64_t[:, ::1] idx = idx_a
    cdef int[:, ::1] dst = dst_a
    # dist[] is reset only on the touched entries to keep each search local
    cdef int *dist = <int *> malloc(max(n, 1) * sizeof(int))
    cdef cnp.int64_t *queue = <cnp.int64_t *> malloc(max(n, 1) * sizeof(cnp.int64_t))
    cdef Py_ssize_t r, head, tail, j, i, found
    cdef cnp.int64_t v, u, s
    cdef int dv
    try:
        for i in range(n):
            dist[i] = -1
        for r in range(ns):
            s = src[r]
            head = 0
            tail = 0
            found = 0
            dist[s] = 0
            queue[tail] = s
            tail += 1
            while head < tail and found < count:
                v = queue[head]
                head += 1
                dv = dist[v]
                for j in range(indptr[v], indptr[v + 1]):
                    u = indices[j]
                    if dist[u] >= 0:
                        continue
                    dist[u] = dv + 1
                    queue[tail] = u
                    tail += 1
                    if mem[u]:
                        idx[r, found] = u
                        dst[r, found] = dv + 1
                        found += 1
                        if found == count:
                            break
            for i in range(tail):
                dist[queue[i]] = -1
        return idx_a, dst_a
    finally:
        free(dist)
        free(queue)


# ---------------------------------------------------------------------------
# repulsion
# ---------------------------------------------------------------------------

def repulsion_all(const double[:, ::1] pos, const double[::1] coef):
    cdef Py_ssize_t n = pos.shape[0], v, u
    out = np.zeros((n, 2))
    cdef double[:, ::1] o = out
    cdef double dx, dy, d2, fx, fy, w
    for v in range(n):
        fx = 0.0
        fy = 0.0
        for u in range(n):
            dx = pos[v, 0] - pos[u, 0]
            dy = pos[v, 1] - pos[u, 1]
            d2 = dx * dx + dy * dy
            if d2 > 0.0:
                w = coef[u] / d2
                fx += dx * w
                fy += dy * w
        o[v, 0] = fx
        o[v, 1] = fy
    return out


def _cell_index(const double[:, ::1] pos, double cutoff):
    cdef Py_ssize_t n = pos.shape[0], i
    xs = np.asarray(pos[:, 0])
    ys = np.asarray(pos[:, 1])
    cx = np.floor((xs - xs.min()) / cutoff).astype(np.int64)
    cy = np.floor((ys - ys.min()) / cutoff).astype(np.int64)
    ny = int(cy.max()) + 3
    key = (cx + 1) * ny + (cy + 1)
    order = np.argsort(key, kind="stable")
    return cx + 1, cy + 1, ny, key[order], order


cdef Py_ssize_t _lower(const cnp.int64_t[::1] keys, cnp.int64_t target) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = keys.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if keys[mid] < target:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef int _cmp_i64(const void *a, const void *b) noexcept nogil:
    cdef cnp.int64_t x = (<cnp.int64_t *> a)[0]
    cdef cnp.int64_t y = (<cnp.int64_t *> b)[0]
    return (x > y) - (x < y)


from libc.stdlib cimport qsort


def repulsion_grid(const double[:, ::1] pos, const double[::1] coef, double cutoff):
    cdef Py_ssize_t n = pos.shape[0]
    out = np.zeros((n, 2))
    if n == 0:
        return out
    cxa, cya, ny_, skeys, sorder = _cell_index(pos, cutoff)
    cdef cnp.int64_t[::1] cx = cxa
    cdef cnp.int64_t[::1] cy = cya
    cdef cnp.int64_t ny = ny_
    cdef cnp.int64_t[::1] keys = skeys
    cdef cnp.int64_t[::1] order = np.ascontiguousarray(sorder, dtype=np.int64)
    cdef double[:, ::1] o = out
    cdef cnp.int64_t *cand = <cnp.int64_t *> malloc(n * sizeof(cnp.int64_t))
    cdef Py_ssize_t v, c, lo, t, nc
    cdef int da, db
    cdef cnp.int64_t target, u
    cdef double c2 = cutoff * cutoff, dx, dy, d2, fx, fy, w
    try:
        for v in range(n):
            nc = 0
            for da in range(-1, 2):
                for db in range(-1, 2):
                    target = (cx[v] + da) * ny + (cy[v] + db)
                    lo = _lower(keys, target)
                    t = lo
                    while t < n and keys[t] == target:
                        cand[nc] = order[t]
                        nc += 1
                        t += 1
            qsort(cand, nc, sizeof(cnp.int64_t), _cmp_i64)
            fx = 0.0
            fy = 0.0
            for c in range(nc):
                u = cand[c]
                dx = pos[v, 0] - pos[u, 0]
                dy = pos[v, 1] - pos[u, 1]
                d2 = dx * dx + dy * dy
                if d2 > 0.0 and d2 <= c2:
                    w = coef[u] / d2
                    fx += dx * w
                    fy += dy * w
            o[v, 0] = fx
            o[v, 1] = fy
    finally:
        free(cand)
    return out


def grid_candidates(pos, double cutoff):
    pos = np.ascontiguousarray(pos, dtype=np.float64)
    n = pos.shape[0]
    cx, cy, ny, keys, order = _cell_index(pos, cutoff)
    out = []
    for v in range(n):
        parts = []
        for da in (-1, 0, 1):
            for db in (-1, 0, 1):
                target = (cx[v] + da) * ny + (cy[v] + db)
                lo = np.searchsorted(keys, target, side="left")
                hi = np.searchsorted(keys, target, side="right")
                parts.append(order[lo:hi])
        out.append(np.sort(np.concatenate(parts)).astype(np.int64))
    return out


# ---------------------------------------------------------------------------
# quadtree
# ---------------------------------------------------------------------------

def quadtree_build(const double[:, ::1] pts, double x0, double y0, double size, long max_depth):
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t cap = 4 * n + 16
    child_a = np.full((cap, 4), -1, dtype=np.int64)
    count_a = np.zeros(cap, dtype=np.int64)
    cx_a = np.zeros(cap)
    cy_a = np.zeros(cap)
    ox_a = np.zeros(cap)
    oy_a = np.zeros(cap)
    side_a = np.zeros(cap)
    start_a = np.zeros(cap, dtype=np.int64)
    length_a = np.zeros(cap, dtype=np.int64)
    depth_a = np.zeros(cap, dtype=np.int64)
    perm_a = np.empty(n, dtype=np.int64)
    # each node owns a contiguous slice [lo, hi) of ``work`` holding its points
    work_a = np.arange(n, dtype=np.int64)
    tmp_a = np.empty(n, dtype=np.int64)
    lo_a = np.zeros(cap, dtype=np.int64)
    hi_a = np.zeros(cap, dtype=np.int64)

    cdef Py_ssize_t nodes = 1, head = 0, nid, i, q, c, p, nperm = 0, lo, hi, pos_
    cdef Py_ssize_t counts[4]
    cdef Py_ssize_t offs[4]
    cdef double half, mx, my, sx, sy
    cdef cnp.int64_t[:, ::1] child
    cdef cnp.int64_t[::1] count, start, length, depth, perm, work, tmp, los, his
    cdef double[::1] cx, cy, ox, oy, side

    child = child_a
    count = count_a
    cx = cx_a
    cy = cy_a
    ox = ox_a
    oy = oy_a
    side = side_a
    start = start_a
    length = length_a
    depth = depth_a
    perm = perm_a
    work = work_a
    tmp = tmp_a
    los = lo_a
    his = hi_a

    # root
    ox[0] = x0
    oy[0] = y0
    side[0] = size
    count[0] = n
    los[0] = 0
    his[0] = n
    sx = 0.0
    sy = 0.0
    for i in range(n):
        sx += pts[i, 0]
        sy += pts[i, 1]
    if n > 0:
        cx[0] = sx / n
        cy[0] = sy / n

    while head < nodes:
        nid = head
        head += 1
        lo = los[nid]
        hi = his[nid]
        if hi - lo <= 1 or depth[nid] >= max_depth:
            start[nid] = nperm
            length[nid] = hi - lo
            for i in range(lo, hi):
                perm[nperm] = work[i]
                nperm += 1
            continue
        if nodes + 4 > child.shape[0]:
            newcap = child.shape[0] * 2
            child_a = np.concatenate([child_a, np.full((newcap - child_a.shape[0], 4), -1, dtype=np.int64)])
            count_a = np.concatenate([count_a, np.zeros(newcap - count_a.shape[0], dtype=np.int64)])
            cx_a = np.concatenate([cx_a, np.zeros(newcap - cx_a.shape[0])])
            cy_a = np.concatenate([cy_a, np.zeros(newcap - cy_a.shape[0])])
            ox_a = np.concatenate([ox_a, np.zeros(newcap - ox_a.shape[0])])
            oy_a = np.concatenate([oy_a, np.zeros(newcap - oy_a.shape[0])])
            side_a = np.concatenate([side_a, np.zeros(newcap - side_a.shape[0])])
            start_a = np.concatenate([start_a, np.zeros(newcap - start_a.shape[0], dtype=np.int64)])
            length_a = np.concatenate([length_a, np.zeros(newcap - length_a.shape[0], dtype=np.int64)])
            depth_a = np.concatenate([depth_a, np.zeros(newcap - depth_a.shape[0], dtype=np.int64)])
            lo_a = np.concatenate([lo_a, np.zeros(newcap - lo_a.shape[0], dtype=np.int64)])
            hi_a = np.concatenate([hi_a, np.zeros(newcap - hi_a.shape[0], dtype=np.int64)])
            child = child_a
            count = count_a
            cx = cx_a
            cy = cy_a
            ox = ox_a
            oy = oy_a
            side = side_a
            start = start_a
            length = length_a
            depth = depth_a
            los = lo_a
            his = hi_a
        half = side[nid] * 0.5
        mx = ox[nid] + half
        my = oy[nid] + half
        for q in range(4):
            counts[q] = 0
        for i in range(lo, hi):
            p = work[i]
            q = (1 if pts[p, 0] >= mx else 0) + (2 if pts[p, 1] >= my else 0)
            counts[q] += 1
        offs[0] = lo
        for q in range(1, 4):
            offs[q] = offs[q - 1] + counts[q - 1]
        for i in range(lo, hi):
            p = work[i]
            q = (1 if pts[p, 0] >= mx else 0) + (2 if pts[p, 1] >= my else 0)
            tmp[offs[q]] = p
            offs[q] += 1
        for i in range(lo, hi):
            work[i] = tmp[i]
        pos_ = lo
        for q in range(4):
            c = nodes
            nodes += 1
            child[nid, q] = c
            ox[c] = ox[nid] + (half if q & 1 else 0.0)
            oy[c] = oy[nid] + (half if q & 2 else 0.0)
            side[c] = half
            depth[c] = depth[nid] + 1
            los[c] = pos_
            his[c] = pos_ + counts[q]
            count[c] = counts[q]
            # centroid summed in original index order, matching the Python twin
            sx = 0.0
            sy = 0.0
            if counts[q] > 0:
                _sorted_sum(pts, work, pos_, pos_ + counts[q], &sx, &sy)
                cx[c] = sx / counts[q]
                cy[c] = sy / counts[q]
            pos_ += counts[q]
    return (
        child_a[:nodes].copy(),
        count_a[:nodes].copy(),
        cx_a[:nodes].copy(),
        cy_a[:nodes].copy(),
        ox_a[:nodes].copy(),
        oy_a[:nodes].copy(),
        side_a[:nodes].copy(),
        start_a[:nodes].copy(),
        length_a[:nodes].copy(),
        perm_a,
        np.asarray(pts).copy(),
    )


cdef void _sorted_sum(const double[:, ::1] pts, cnp.int64_t[::1] work, Py_ssize_t lo, Py_ssize_t hi,
                      double *sx, double *sy) noexcept:
    # partitioning is stable, so work[lo:hi] is already in ascending index order
    cdef Py_ssize_t i
    cdef double ax = 0.0, ay = 0.0
    for i in range(lo, hi):
        ax += pts[work[i], 0]
        ay += pts[work[i], 1]
    sx[0] = ax
    sy[0] = ay


def quadtree_force(tree, queries, double theta, double k2):
    cdef cnp.int64_t[:, ::1] child = tree[0]
    cdef cnp.int64_t[::1] count = tree[1]
    cdef double[::1] cx = tree[2]
    cdef double[::1] cy = tree[3]
    cdef double[::1] ox = tree[4]
    cdef double[::1] oy = tree[5]
    cdef double[::1] side = tree[6]
    cdef cnp.int64_t[::1] start = tree[7]
    cdef cnp.int64_t[::1] length = tree[8]
    cdef cnp.int64_t[::1] perm = tree[9]
    cdef double[:, ::1] pts = tree[10]
    cdef bint inside
    cdef double[:, ::1] qs = np.ascontiguousarray(queries, dtype=np.float64)
    cdef Py_ssize_t nq = qs.shape[0], r, j, top, q
    out = np.zeros((nq, 2))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t nn = child.shape[0]
    cdef cnp.int64_t *stack = <cnp.int64_t *> malloc((4 * nn + 4) * sizeof(cnp.int64_t))
    cdef cnp.int64_t nid, p
    cdef double qx, qy, fx, fy, dx, dy, d2, w
    try:
        for r in range(nq):
            qx = qs[r, 0]
            qy = qs[r, 1]
            fx = 0.0
            fy = 0.0
            top = 0
            stack[top] = 0
            top += 1
            while top > 0:
                top -= 1
                nid = stack[top]
                if count[nid] == 0:
                    continue
                if child[nid, 0] < 0:
                    for j in range(start[nid], start[nid] + length[nid]):
                        p = perm[j]
                        dx = qx - pts[p, 0]
                        dy = qy - pts[p, 1]
                        d2 = dx * dx + dy * dy
                        if d2 > 0.0:
                            fx += k2 * dx / d2
                            fy += k2 * dy / d2
                    continue
                dx = qx - cx[nid]
                dy = qy - cy[nid]
                d2 = dx * dx + dy * dy
                # a node whose square holds the query is always opened
                inside = (ox[nid] <= qx <= ox[nid] + side[nid]) and (oy[nid] <= qy <= oy[nid] + side[nid])
                if not inside and d2 > 0.0 and side[nid] < theta * sqrt(d2):
                    w = count[nid] * k2
                    fx += w * dx / d2
                    fy += w * dy / d2
                else:
                    for q in range(3, -1, -1):
                        stack[top] = child[nid, q]
                        top += 1
            o[r, 0] = fx
            o[r, 1] = fy
    finally:
        free(stack)
    return out


# ---------------------------------------------------------------------------
# Kamada-Kawai single-vertex Newton updates
# ---------------------------------------------------------------------------

cdef void _kk_row(double[::1] x, double[::1] y, Py_ssize_t m,
                  const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
                  const double[::1] lij, const double[::1] kij, double *res) noexcept:
    cdef Py_ssize_t a = indptr[m], b = indptr[m + 1], t
    cdef cnp.int64_t j
    cdef double dx, dy, r, l, k, lr, r3
    cdef double gx = 0.0, gy = 0.0, hxx = 0.0, hyy = 0.0, hxy = 0.0, ks = 0.0
    for t in range(a, b):
        j = indices[t]
        dx = x[m] - x[j]
        dy = y[m] - y[j]
        r = sqrt(dx * dx + dy * dy)
        k = kij[t]
        ks += k
        if r > 0.0:
            l = lij[t]
            lr = l / r
            gx += k * (dx - lr * dx)
            gy += k * (dy - lr * dy)
            r3 = r * r * r
            hxx += k * (1.0 - l * dy * dy / r3)
            hyy += k * (1.0 - l * dx * dx / r3)
            hxy += k * (l * dx * dy / r3)
    res[0] = gx
    res[1] = gy
    res[2] = hxx
    res[3] = hxy
    res[4] = hyy
    res[5] = ks


cdef double _kk_energy(double[::1] x, double[::1] y, Py_ssize_t m, double px, double py,
                       const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
                       const double[::1] lij, const double[::1] kij) noexcept:
    cdef Py_ssize_t t
    cdef cnp.int64_t j
    cdef double dx, dy, r, e = 0.0, s
    for t in range(indptr[m], indptr[m + 1]):
        j = indices[t]
        dx = px - x[j]
        dy = py - y[j]
        r = sqrt(dx * dx + dy * dy)
        s = r - lij[t]
        e += kij[t] * s * s
    return 0.5 * e


cdef void _kk_shift(double[::1] x, double[::1] y, double[::1] gx, double[::1] gy, Py_ssize_t m,
                    double sign, const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
                    const double[::1] lij, const double[::1] kij) noexcept:
    cdef Py_ssize_t t
    cdef cnp.int64_t j
    cdef double dx, dy, r, lr
    for t in range(indptr[m], indptr[m + 1]):
        j = indices[t]
        dx = x[j] - x[m]
        dy = y[j] - y[m]
        r = sqrt(dx * dx + dy * dy)
        if r > 0.0:
            lr = lij[t] / r
            gx[j] += sign * (kij[t] * (dx - lr * dx))
            gy[j] += sign * (kij[t] * (dy - lr * dy))


def kk_gradients(x, y, const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
                 const double[::1] lij, const double[::1] kij):
    cdef double[::1] xv = x
    cdef double[::1] yv = y
    cdef Py_ssize_t n = xv.shape[0], m
    gxa = np.zeros(n)
    gya = np.zeros(n)
    cdef double[::1] gx = gxa
    cdef double[::1] gy = gya
    cdef double res[6]
    for m in range(n):
        _kk_row(xv, yv, m, indptr, indices, lij, kij, res)
        gx[m] = res[0]
        gy[m] = res[1]
    return gxa, gya


def kk_updates(double[::1] x, double[::1] y, double[::1] gx, double[::1] gy,
               const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
               const double[::1] lij, const double[::1] kij,
               long n_select, long inner_cap, double eps,
               cnp.int64_t[::1] log_m, double[::1] log_x, double[::1] log_y):
    cdef Py_ssize_t n = x.shape[0], i, m, cap = log_m.shape[0]
    cdef long s, it, h, moves = 0, selections = 0, nd, di
    cdef double best, d2, e0, e1, det, tiny, nx = 0.0, ny = 0.0, ddx, ddy
    cdef double res[6]
    cdef double dirs[4]
    cdef bint moved
    for s in range(n_select):
        if n == 0:
            break
        best = -1.0
        m = 0
        for i in range(n):
            d2 = gx[i] * gx[i] + gy[i] * gy[i]
            if d2 > best:
                best = d2
                m = i
        if sqrt(best) <= eps:
            break
        selections += 1
        for it in range(inner_cap):
            _kk_row(x, y, m, indptr, indices, lij, kij, res)
            gx[m] = res[0]
            gy[m] = res[1]
            if sqrt(res[0] * res[0] + res[1] * res[1]) <= eps:
                break
            e0 = _kk_energy(x, y, m, x[m], y[m], indptr, indices, lij, kij)
            moved = False
            det = res[2] * res[4] - res[3] * res[3]
            tiny = 1e-12 * (res[2] * res[2] + res[4] * res[4] + 2.0 * res[3] * res[3])
            nd = 0
            if det > tiny:
                dirs[0] = (-res[0] * res[4] + res[1] * res[3]) / det
                dirs[1] = (-res[1] * res[2] + res[0] * res[3]) / det
                nd = 1
            if res[5] > 0.0:
                dirs[2 * nd] = -res[0] / res[5]
                dirs[2 * nd + 1] = -res[1] / res[5]
                nd += 1
            for di in range(nd):
                ddx = dirs[2 * di]
                ddy = dirs[2 * di + 1]
                for h in range(31):
                    nx = x[m] + ddx
                    ny = y[m] + ddy
                    e1 = _kk_energy(x, y, m, nx, ny, indptr, indices, lij, kij)
                    if e1 <= e0 and (nx != x[m] or ny != y[m]):
                        moved = True
                        break
                    ddx *= 0.5
                    ddy *= 0.5
                if moved:
                    break
            if not moved:
                break
            _kk_shift(x, y, gx, gy, m, -1.0, indptr, indices, lij, kij)
            x[m] = nx
            y[m] = ny
            _kk_shift(x, y, gx, gy, m, 1.0, indptr, indices, lij, kij)
            _kk_row(x, y, m, indptr, indices, lij, kij, res)
            gx[m] = res[0]
            gy[m] = res[1]
            if moves < cap:
                log_m[moves] = m
                log_x[moves] = nx
                log_y[moves] = ny
            moves += 1
    return selections, moves


# ---------------------------------------------------------------------------
# barycentric sweeps
# ---------------------------------------------------------------------------

def gauss_seidel(double[::1] x, double[::1] y, order,
                 const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices):
    cdef cnp.int64_t[::1] ordv = np.ascontiguousarray(order, dtype=np.int64)
    cdef Py_ssize_t i, t
    cdef cnp.int64_t v
    cdef double sx, sy, nx, ny, mv, biggest = 0.0
    for i in range(ordv.shape[0]):
        v = ordv[i]
        sx = 0.0
        sy = 0.0
        for t in range(indptr[v], indptr[v + 1]):
            sx += x[indices[t]]
            sy += y[indices[t]]
        nx = sx / (indptr[v + 1] - indptr[v])
        ny = sy / (indptr[v + 1] - indptr[v])
        mv = fabs(nx - x[v])
        if fabs(ny - y[v]) > mv:
            mv = fabs(ny - y[v])
        if mv > biggest:
            biggest = mv
        x[v] = nx
        y[v] = ny
    return biggest


# ---------------------------------------------------------------------------
# crossings
# ---------------------------------------------------------------------------

cdef inline int _sgn(double v) noexcept nogil:
    return (v > 0.0) - (v < 0.0)


def crossings(const double[::1] x, const double[::1] y,
              const cnp.int64_t[::1] eu, const cnp.int64_t[::1] ev):
    cdef Py_ssize_t m = eu.shape[0], i, j
    cdef long total = 0
    cdef double ax, ay, bx, by, cx_, cy_, dx_, dy_, ex, ey, fx, fy
    cdef int o1, o2, o3, o4
    for i in range(m):
        ax = x[eu[i]]
        ay = y[eu[i]]
        bx = x[ev[i]]
        by = y[ev[i]]
        ex = bx - ax
        ey = by - ay
        for j in range(i + 1, m):
            if eu[j] == eu[i] or eu[j] == ev[i] or ev[j] == eu[i] or ev[j] == ev[i]:
                continue
            cx_ = x[eu[j]]
            cy_ = y[eu[j]]
            dx_ = x[ev[j]]
            dy_ = y[ev[j]]
            o1 = _sgn(ex * (cy_ - ay) - ey * (cx_ - ax))
            o2 = _sgn(ex * (dy_ - ay) - ey * (dx_ - ax))
            if o1 * o2 >= 0:
                continue
            fx = dx_ - cx_
            fy = dy_ - cy_
            o3 = _sgn(fx * (ay - cy_) - fy * (ax - cx_))
            o4 = _sgn(fx * (by - cy_) - fy * (bx - cx_))
            if o3 * o4 < 0:
                total += 1
    return total
