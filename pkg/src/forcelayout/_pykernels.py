"""Pure-Python/numpy implementations of the hot kernels.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
Arrays are float64 for coordinates and int64 for indices unless noted.
"""

from collections import deque

import numpy as np

BACKEND = "python"


# ---------------------------------------------------------------------------
# breadth-first search
# ---------------------------------------------------------------------------

def bfs_rows(indptr, indices, sources, radius):
    """Hop distances from each source, -1 where unreached within ``radius``.

    ``radius < 0`` means unlimited.
    """
    n = len(indptr) - 1
    out = np.full((len(sources), n), -1, dtype=np.int32)
    ip = indptr.tolist()
    ix = indices.tolist()
    for r, s in enumerate(sources):
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            dv = dist[v]
            if radius >= 0 and dv >= radius:
                continue
            for j in range(ip[v], ip[v + 1]):
                u = ix[j]
                if dist[u] < 0:
                    dist[u] = dv + 1
                    queue.append(u)
        out[r] = dist
    return out


def ball(indptr, indices, source, radius):
    """Vertices within ``radius`` hops of ``source`` in BFS visit order."""
    return bfs_ball(indptr, indices, source, radius)[0]


def bfs_ball(indptr, indices, source, radius):
    dist = {source: 0}
    order = [source]
    queue = deque([source])
    ip = indptr
    ix = indices
    while queue:
        v = queue.popleft()
        dv = dist[v]
        if dv >= radius:
            continue
        for j in range(ip[v], ip[v + 1]):
            u = int(ix[j])
            if u not in dist:
                dist[u] = dv + 1
                order.append(u)
                queue.append(u)
    verts = np.array(order, dtype=np.int64)
    return verts, np.array([dist[v] for v in order], dtype=np.int32)


def nearest_members(indptr, indices, member, sources, count):
    """For each source, the ``count`` nearest vertices with ``member[u]`` set.

    Candidates are taken in BFS order (ties by discovery order, neighbours
    scanned in ascending id).  The source itself is excluded.  Rows are
    padded with -1.
    """
    idx = np.full((len(sources), count), -1, dtype=np.int64)
    dst = np.full((len(sources), count), -1, dtype=np.int32)
    ip = indptr.tolist()
    ix = indices.tolist()
    mem = member.tolist()
    for r, s in enumerate(sources):
        seen = {s: 0}
        queue = deque([s])
        found = 0
        while queue and found < count:
            v = queue.popleft()
            dv = seen[v]
            for j in range(ip[v], ip[v + 1]):
                u = ix[j]
                if u in seen:
                    continue
                seen[u] = dv + 1
                queue.append(u)
                if mem[u]:
                    idx[r, found] = u
                    dst[r, found] = dv + 1
                    found += 1
                    if found == count:
                        break
    return idx, dst


# ---------------------------------------------------------------------------
# repulsion
# ---------------------------------------------------------------------------

def repulsion_all(pos, coef):
    """disp[v] = sum_u coef[u] * (p_v - p_u) / |p_v - p_u|^2, coincident pairs skipped.

    Sums run over u in ascending order.
    """
    n = pos.shape[0]
    out = np.zeros((n, 2))
    xs = pos[:, 0]
    ys = pos[:, 1]
    for v in range(n):
        dx = xs[v] - xs
        dy = ys[v] - ys
        d2 = dx * dx + dy * dy
        mask = d2 > 0.0
        w = coef[mask] / d2[mask]
        out[v, 0] = np.sum(dx[mask] * w)
        out[v, 1] = np.sum(dy[mask] * w)
    return out


def _cell_keys(pos, cutoff):
    cx = np.floor((pos[:, 0] - pos[:, 0].min()) / cutoff).astype(np.int64)
    cy = np.floor((pos[:, 1] - pos[:, 1].min()) / cutoff).astype(np.int64)
    return cx, cy


def grid_candidates(pos, cutoff):
    """Per-vertex sorted candidate lists from the 3x3 cell neighbourhood."""
    cx, cy = _cell_keys(pos, cutoff)
    cells = {}
    for v in range(pos.shape[0]):
        cells.setdefault((int(cx[v]), int(cy[v])), []).append(v)
    out = []
    for v in range(pos.shape[0]):
        a, b = int(cx[v]), int(cy[v])
        cand = []
        for da in (-1, 0, 1):
            for db in (-1, 0, 1):
                cand.extend(cells.get((a + da, b + db), ()))
        cand.sort()
        out.append(np.array(cand, dtype=np.int64))
    return out


def repulsion_grid(pos, coef, cutoff):
    """Like ``repulsion_all`` restricted to pairs within ``cutoff`` found via a cell grid."""
    n = pos.shape[0]
    out = np.zeros((n, 2))
    cands = grid_candidates(pos, cutoff)
    c2 = cutoff * cutoff
    for v in range(n):
        c = cands[v]
        dx = pos[v, 0] - pos[c, 0]
        dy = pos[v, 1] - pos[c, 1]
        d2 = dx * dx + dy * dy
        mask = (d2 > 0.0) & (d2 <= c2)
        w = coef[c][mask] / d2[mask]
        out[v, 0] = np.sum(dx[mask] * w)
        out[v, 1] = np.sum(dy[mask] * w)
    return out


# ---------------------------------------------------------------------------
# quadtree
# ---------------------------------------------------------------------------

def quadtree_build(pts, x0, y0, size, max_depth):
    """Breadth-first quadtree over ``pts`` inside the square [x0, x0+size) x [y0, y0+size).

    Returns (child, count, cx, cy, ox, oy, side, start, length, perm).  A node
    with ``child[i, 0] == -1`` is a leaf whose points are
    ``perm[start[i]:start[i] + length[i]]``.
    """
    n = pts.shape[0]
    child, count, cx, cy, ox, oy, side, start, length = ([] for _ in range(9))
    perm = []
    # queue entries: (node id, point index list, depth)
    queue = deque()

    def new_node(x, y, s, members):
        nid = len(count)
        child.append([-1, -1, -1, -1])
        count.append(len(members))
        if members:
            sx = 0.0
            sy = 0.0
            for p in members:
                sx += pts[p, 0]
                sy += pts[p, 1]
            cx.append(sx / len(members))
            cy.append(sy / len(members))
        else:
            cx.append(0.0)
            cy.append(0.0)
        ox.append(x)
        oy.append(y)
        side.append(s)
        start.append(0)
        length.append(0)
        return nid

    root = new_node(x0, y0, size, list(range(n)))
    queue.append((root, list(range(n)), 0))
    while queue:
        nid, members, depth = queue.popleft()
        if len(members) <= 1 or depth >= max_depth:
            start[nid] = len(perm)
            length[nid] = len(members)
            perm.extend(members)
            continue
        half = side[nid] * 0.5
        mx = ox[nid] + half
        my = oy[nid] + half
        quads = ([], [], [], [])
        for p in members:
            q = (1 if pts[p, 0] >= mx else 0) + (2 if pts[p, 1] >= my else 0)
            quads[q].append(p)
        for q in range(4):
            qx = ox[nid] + (half if q & 1 else 0.0)
            qy = oy[nid] + (half if q & 2 else 0.0)
            c = new_node(qx, qy, half, quads[q])
            child[nid][q] = c
            queue.append((c, quads[q], depth + 1))
    return (
        np.array(child, dtype=np.int64),
        np.array(count, dtype=np.int64),
        np.array(cx),
        np.array(cy),
        np.array(ox),
        np.array(oy),
        np.array(side),
        np.array(start, dtype=np.int64),
        np.array(length, dtype=np.int64),
        np.array(perm, dtype=np.int64),
        pts.copy(),
    )


def quadtree_force(tree, queries, theta, k2):
    """Barnes-Hut repulsion k2 * (q - p)/|q - p|^2 summed over tree points."""
    child, count, cx, cy, ox, oy, side, start, length, perm, pts = tree
    out = np.zeros((queries.shape[0], 2))
    for r in range(queries.shape[0]):
        qx = queries[r, 0]
        qy = queries[r, 1]
        fx = 0.0
        fy = 0.0
        stack = [0]
        while stack:
            nid = stack.pop()
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
            inside = ox[nid] <= qx <= ox[nid] + side[nid] and oy[nid] <= qy <= oy[nid] + side[nid]
            if not inside and d2 > 0.0 and side[nid] < theta * np.sqrt(d2):
                w = count[nid] * k2
                fx += w * dx / d2
                fy += w * dy / d2
            else:
                for q in (3, 2, 1, 0):
                    stack.append(child[nid, q])
        out[r, 0] = fx
        out[r, 1] = fy
    return out


# ---------------------------------------------------------------------------
# Kamada-Kawai single-vertex Newton updates
# ---------------------------------------------------------------------------

def kk_gradients(x, y, indptr, indices, lij, kij):
    n = x.shape[0]
    gx = np.zeros(n)
    gy = np.zeros(n)
    for m in range(n):
        gx[m], gy[m] = _kk_row(x, y, m, indptr, indices, lij, kij)[:2]
    return gx, gy


def _kk_row(x, y, m, indptr, indices, lij, kij):
    a, b = indptr[m], indptr[m + 1]
    j = indices[a:b]
    dx = x[m] - x[j]
    dy = y[m] - y[j]
    r = np.sqrt(dx * dx + dy * dy)
    ok = r > 0.0
    dx, dy, r = dx[ok], dy[ok], r[ok]
    l = lij[a:b][ok]
    k = kij[a:b][ok]
    lr = l / r
    gx = np.sum(k * (dx - lr * dx))
    gy = np.sum(k * (dy - lr * dy))
    r3 = r * r * r
    hxx = np.sum(k * (1.0 - l * dy * dy / r3))
    hyy = np.sum(k * (1.0 - l * dx * dx / r3))
    hxy = np.sum(k * l * dx * dy / r3)
    return gx, gy, hxx, hxy, hyy, np.sum(k)


def _kk_local_energy(x, y, m, px, py, indptr, indices, lij, kij):
    a, b = indptr[m], indptr[m + 1]
    j = indices[a:b]
    dx = px - x[j]
    dy = py - y[j]
    r = np.sqrt(dx * dx + dy * dy)
    t = r - lij[a:b]
    return 0.5 * np.sum(kij[a:b] * t * t)


def _kk_shift(x, y, gx, gy, m, sign, indptr, indices, lij, kij):
    """Add ``sign`` times the (m, j) pair contribution to every neighbour's gradient."""
    a, b = indptr[m], indptr[m + 1]
    j = indices[a:b]
    dx = x[j] - x[m]
    dy = y[j] - y[m]
    r = np.sqrt(dx * dx + dy * dy)
    ok = r > 0.0
    jj = j[ok]
    lr = lij[a:b][ok] / r[ok]
    k = kij[a:b][ok]
    np.add.at(gx, jj, sign * k * (dx[ok] - lr * dx[ok]))
    np.add.at(gy, jj, sign * k * (dy[ok] - lr * dy[ok]))


def kk_updates(x, y, gx, gy, indptr, indices, lij, kij,
               n_select, inner_cap, eps, log_m, log_x, log_y):
    """Run up to ``n_select`` argmax-Delta selections with damped Newton steps.

    Positions and gradients are updated in place.  The neighbourhood of each
    vertex is its CSR row; pairs must be listed symmetrically.  Every applied
    move is written to the log arrays while capacity remains.  Returns
    (selections, moves).
    """
    n = x.shape[0]
    cap = log_m.shape[0]
    moves = 0
    selections = 0
    for _ in range(n_select):
        if n == 0:
            break
        delta2 = gx * gx + gy * gy
        m = int(np.argmax(delta2))
        if np.sqrt(delta2[m]) <= eps:
            break
        selections += 1
        for _it in range(inner_cap):
            g_x, g_y, hxx, hxy, hyy, ksum = _kk_row(x, y, m, indptr, indices, lij, kij)
            gx[m] = g_x
            gy[m] = g_y
            if np.sqrt(g_x * g_x + g_y * g_y) <= eps:
                break
            e0 = _kk_local_energy(x, y, m, x[m], y[m], indptr, indices, lij, kij)
            moved = False
            det = hxx * hyy - hxy * hxy
            tiny = 1e-12 * (hxx * hxx + hyy * hyy + 2.0 * hxy * hxy)
            dirs = []
            if det > tiny:
                dirs.append(((-g_x * hyy + g_y * hxy) / det, (-g_y * hxx + g_x * hxy) / det))
            if ksum > 0.0:
                dirs.append((-g_x / ksum, -g_y / ksum))
            for ddx, ddy in dirs:
                for _h in range(31):
                    nx = x[m] + ddx
                    ny = y[m] + ddy
                    e1 = _kk_local_energy(x, y, m, nx, ny, indptr, indices, lij, kij)
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
            g_x, g_y = _kk_row(x, y, m, indptr, indices, lij, kij)[:2]
            gx[m] = g_x
            gy[m] = g_y
            if moves < cap:
                log_m[moves] = m
                log_x[moves] = nx
                log_y[moves] = ny
            moves += 1
    return selections, moves


# ---------------------------------------------------------------------------
# barycentric sweeps
# ---------------------------------------------------------------------------

def gauss_seidel(x, y, order, indptr, indices):
    """One in-place sweep placing each vertex of ``order`` at its neighbours' mean.

    Returns the largest coordinate movement.
    """
    biggest = 0.0
    for v in order:
        a, b = indptr[v], indptr[v + 1]
        nb = indices[a:b]
        nx = float(np.sum(x[nb])) / (b - a)
        ny = float(np.sum(y[nb])) / (b - a)
        mv = max(abs(nx - x[v]), abs(ny - y[v]))
        if mv > biggest:
            biggest = mv
        x[v] = nx
        y[v] = ny
    return biggest


# ---------------------------------------------------------------------------
# crossings
# ---------------------------------------------------------------------------

def crossings(x, y, eu, ev):
    """Number of edge pairs without shared endpoint whose open segments properly cross."""
    m = eu.shape[0]
    ax, ay = x[eu], y[eu]
    bx, by = x[ev], y[ev]
    total = 0
    for i in range(m - 1):
        j = slice(i + 1, m)
        cx_, cy_, dx_, dy_ = ax[j], ay[j], bx[j], by[j]
        ex = bx[i] - ax[i]
        ey = by[i] - ay[i]
        o1 = ex * (cy_ - ay[i]) - ey * (cx_ - ax[i])
        o2 = ex * (dy_ - ay[i]) - ey * (dx_ - ax[i])
        fx = dx_ - cx_
        fy = dy_ - cy_
        o3 = fx * (ay[i] - cy_) - fy * (ax[i] - cx_)
        o4 = fx * (by[i] - cy_) - fy * (bx[i] - cx_)
        shared = (eu[j] == eu[i]) | (eu[j] == ev[i]) | (ev[j] == eu[i]) | (ev[j] == ev[i])
        hit = (np.sign(o1) * np.sign(o2) < 0.0) & (np.sign(o3) * np.sign(o4) < 0.0) & ~shared
        total += int(np.count_nonzero(hit))
    return total
