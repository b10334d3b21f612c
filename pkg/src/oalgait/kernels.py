"""Hot numeric kernels, written in numba-compatible loop style.

Every function here is compiled with ``@njit`` when the numba backend is
active (see :mod:`oalgait.backend`) and runs as plain Python otherwise.
Vectorized numpy equivalents of the grid/DP kernels live in
:mod:`oalgait.vectorized`; higher-level modules pick between the two.

Conventions used throughout:

* ``c1, c2``     cumulative basis sums; link k is oriented at
                 ``c1[k]*w1 + c2[k]*w2`` in the head-link frame.
* ``anchor``     -1 for the central body axis frame, else a 0-based link
                 index whose midpoint frame is used.
* ``D``          3x5 drag matrix: net wrench = D @ (xi_x, xi_y, xi_th, dw1, dw2).
* ``mode``       0 free, 1 single-obstacle (xi_y = 0), 2 multi-obstacle
                 (xi_y = xi_th = 0).
"""

import numpy as np

from .backend import jit

COND_LIMIT = 1e12

MODE_FREE = 0
MODE_SINGLE = 1
MODE_MULTI = 2

DRAG_LINEAR = 0
DRAG_COULOMB = 1


@jit
def frame_kinematics(w1, w2, c1, c2, ell, anchor):
    """Link midpoints, orientations and their shape derivatives.

    Returns (qx, qy, th, dqx, dqy, dth) where qx, qy, th have shape (L,)
    and the derivative arrays have shape (2, L), index 0 for d/dw1.
    """
    L = c1.shape[0]
    phi = c1 * w1 + c2 * w2
    ux = np.cos(phi)
    uy = np.sin(phi)

    mx = np.empty(L)
    my = np.empty(L)
    mx[0] = 0.0
    my[0] = 0.0
    for k in range(1, L):
        mx[k] = mx[k - 1] - 0.5 * ell * (ux[k - 1] + ux[k])
        my[k] = my[k - 1] - 0.5 * ell * (uy[k - 1] + uy[k])

    dmx = np.zeros((2, L))
    dmy = np.zeros((2, L))
    for j in range(2):
        for k in range(1, L):
            ca = c1[k - 1] if j == 0 else c2[k - 1]
            cb = c1[k] if j == 0 else c2[k]
            dmx[j, k] = dmx[j, k - 1] - 0.5 * ell * (-uy[k - 1] * ca - uy[k] * cb)
            dmy[j, k] = dmy[j, k - 1] - 0.5 * ell * (ux[k - 1] * ca + ux[k] * cb)

    if anchor < 0:
        tb = phi.mean()
        bx = mx.mean()
        by = my.mean()
        cb1 = c1.mean()
        cb2 = c2.mean()
        dbx1 = dmx[0].mean()
        dby1 = dmy[0].mean()
        dbx2 = dmx[1].mean()
        dby2 = dmy[1].mean()
    else:
        tb = phi[anchor]
        bx = mx[anchor]
        by = my[anchor]
        cb1 = c1[anchor]
        cb2 = c2[anchor]
        dbx1 = dmx[0, anchor]
        dby1 = dmy[0, anchor]
        dbx2 = dmx[1, anchor]
        dby2 = dmy[1, anchor]

    ct = np.cos(tb)
    st = np.sin(tb)
    qx = np.empty(L)
    qy = np.empty(L)
    th = np.empty(L)
    dqx = np.empty((2, L))
    dqy = np.empty((2, L))
    dth = np.empty((2, L))
    for k in range(L):
        rx = mx[k] - bx
        ry = my[k] - by
        qx[k] = ct * rx + st * ry
        qy[k] = -st * rx + ct * ry
        th[k] = phi[k] - tb
        # d/dw of q = R(-tb)(dm - dmb) - cb_j * J q, with J q = (-qy, qx)
        ex1 = dmx[0, k] - dbx1
        ey1 = dmy[0, k] - dby1
        ex2 = dmx[1, k] - dbx2
        ey2 = dmy[1, k] - dby2
        dqx[0, k] = ct * ex1 + st * ey1 + cb1 * qy[k]
        dqy[0, k] = -st * ex1 + ct * ey1 - cb1 * qx[k]
        dqx[1, k] = ct * ex2 + st * ey2 + cb2 * qy[k]
        dqy[1, k] = -st * ex2 + ct * ey2 - cb2 * qx[k]
        dth[0, k] = c1[k] - cb1
        dth[1, k] = c2[k] - cb2
    return qx, qy, th, dqx, dqy, dth


@jit
def drag_matrix(qx, qy, th, dqx, dqy, ell, cpar, cperp):
    """Assemble the 3x5 linear drag matrix D with wrench = D @ u."""
    L = qx.shape[0]
    D = np.zeros((3, 5))
    vx = np.empty(5)
    vy = np.empty(5)
    for k in range(L):
        c = np.cos(th[k])
        s = np.sin(th[k])
        cxx = cpar * c * c + cperp * s * s
        cxy = (cpar - cperp) * c * s
        cyy = cpar * s * s + cperp * c * c
        vx[0] = 1.0
        vy[0] = 0.0
        vx[1] = 0.0
        vy[1] = 1.0
        vx[2] = -qy[k]
        vy[2] = qx[k]
        vx[3] = dqx[0, k]
        vy[3] = dqy[0, k]
        vx[4] = dqx[1, k]
        vy[4] = dqy[1, k]
        for col in range(5):
            fx = -ell * (cxx * vx[col] + cxy * vy[col])
            fy = -ell * (cxy * vx[col] + cyy * vy[col])
            D[0, col] += fx
            D[1, col] += fy
            D[2, col] += qx[k] * fy - qy[k] * fx
    return D


@jit
def point_drag(w1, w2, c1, c2, ell, cpar, cperp, anchor):
    qx, qy, th, dqx, dqy, dth = frame_kinematics(w1, w2, c1, c2, ell, anchor)
    return drag_matrix(qx, qy, th, dqx, dqy, ell, cpar, cperp)


@jit
def _inv3(m):
    """Explicit 3x3 inverse; returns (inv, ok) with ok from a 1-norm
    condition estimate against COND_LIMIT."""
    a, b, c = m[0, 0], m[0, 1], m[0, 2]
    d, e, f = m[1, 0], m[1, 1], m[1, 2]
    g, h, i = m[2, 0], m[2, 1], m[2, 2]
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    inv = np.empty((3, 3))
    if det == 0.0:
        return inv, False
    inv[0, 0] = (e * i - f * h) / det
    inv[0, 1] = (c * h - b * i) / det
    inv[0, 2] = (b * f - c * e) / det
    inv[1, 0] = (f * g - d * i) / det
    inv[1, 1] = (a * i - c * g) / det
    inv[1, 2] = (c * d - a * f) / det
    inv[2, 0] = (d * h - e * g) / det
    inv[2, 1] = (b * g - a * h) / det
    inv[2, 2] = (a * e - b * d) / det
    n1 = 0.0
    n2 = 0.0
    for col in range(3):
        s1 = np.abs(m[0, col]) + np.abs(m[1, col]) + np.abs(m[2, col])
        s2 = np.abs(inv[0, col]) + np.abs(inv[1, col]) + np.abs(inv[2, col])
        if s1 > n1:
            n1 = s1
        if s2 > n2:
            n2 = s2
    return inv, n1 * n2 < COND_LIMIT


@jit
def solve_free(D):
    """A = -Dxi^{-1} Dw; returns (A(3,2), ok)."""
    inv, ok = _inv3(D[:, :3])
    A = np.zeros((3, 2))
    if not ok:
        return A, False
    for r in range(3):
        for c in range(2):
            acc = 0.0
            for k in range(3):
                acc -= inv[r, k] * D[k, 3 + c]
            A[r, c] = acc
    return A, True


@jit
def solve_single(D):
    """Constrained solve with xi_y = 0 in the contact-link frame.

    Balances the forward-force and torque rows; returns (A, wy, ok) where
    wy is the residual lateral wrench row (2,), i.e. the contact force
    along +y per unit shape velocity.
    """
    a = D[0, 0]
    b = D[0, 2]
    c = D[2, 0]
    d = D[2, 2]
    det = a * d - b * c
    A = np.zeros((3, 2))
    wy = np.zeros(2)
    if det == 0.0:
        return A, wy, False
    n1 = max(np.abs(a) + np.abs(c), np.abs(b) + np.abs(d))
    ninv = max(np.abs(d) + np.abs(c), np.abs(b) + np.abs(a)) / np.abs(det)
    if n1 * ninv >= COND_LIMIT:
        return A, wy, False
    for col in range(2):
        r0 = -D[0, 3 + col]
        r1 = -D[2, 3 + col]
        xi_x = (d * r0 - b * r1) / det
        xi_t = (a * r1 - c * r0) / det
        A[0, col] = xi_x
        A[2, col] = xi_t
        wy[col] = D[1, 0] * xi_x + D[1, 2] * xi_t + D[1, 3 + col]
    return A, wy, True


@jit
def solve_multi(D):
    """Constrained solve with xi_y = xi_th = 0 in the central frame.

    Returns (A, wy, wt, ok); wy and wt are the residual lateral and
    rotational wrench rows per unit shape velocity.
    """
    A = np.zeros((3, 2))
    wy = np.zeros(2)
    wt = np.zeros(2)
    a = D[0, 0]
    if np.abs(a) < 1.0 / COND_LIMIT:
        return A, wy, wt, False
    for col in range(2):
        xi_x = -D[0, 3 + col] / a
        A[0, col] = xi_x
        wy[col] = D[1, 0] * xi_x + D[1, 3 + col]
        wt[col] = D[2, 0] * xi_x + D[2, 3 + col]
    return A, wy, wt, True


@jit
def connection_point(w1, w2, c1, c2, ell, cpar, cperp, mode, anchor):
    """Local connection at one shape point for the linear drag model.

    Returns (A(3,2), R(2,2), ok).  R[0] is the lateral residual wrench
    row, R[1] the rotational one; rows are zero where not applicable.
    """
    D = point_drag(w1, w2, c1, c2, ell, cpar, cperp, anchor)
    R = np.zeros((2, 2))
    if mode == MODE_FREE:
        A, ok = solve_free(D)
    elif mode == MODE_SINGLE:
        A, wy, ok = solve_single(D)
        R[0, 0] = wy[0]
        R[0, 1] = wy[1]
    else:
        A, wy, wt, ok = solve_multi(D)
        R[0, 0] = wy[0]
        R[0, 1] = wy[1]
        R[1, 0] = wt[0]
        R[1, 1] = wt[1]
    return A, R, ok


@jit
def connection_grid_loop(W1, W2, c1, c2, ell, cpar, cperp, mode, anchor):
    """Evaluate the local connection over flat point arrays W1, W2."""
    M = W1.shape[0]
    A = np.empty((M, 3, 2))
    R = np.empty((M, 2, 2))
    ok = np.empty(M, dtype=np.bool_)
    for m in range(M):
        a, r, good = connection_point(
            W1[m], W2[m], c1, c2, ell, cpar, cperp, mode, anchor
        )
        A[m] = a
        R[m] = r
        ok[m] = good
    return A, R, ok


@jit
def net_wrench_kernel(u, w1, w2, c1, c2, ell, cpar, cperp, anchor, model, eps):
    """Net drag wrench for input u = (xi_x, xi_y, xi_th, dw1, dw2)."""
    qx, qy, th, dqx, dqy, dth = frame_kinematics(w1, w2, c1, c2, ell, anchor)
    L = qx.shape[0]
    W = np.zeros(3)
    for k in range(L):
        vx = u[0] - qy[k] * u[2] + dqx[0, k] * u[3] + dqx[1, k] * u[4]
        vy = u[1] + qx[k] * u[2] + dqy[0, k] * u[3] + dqy[1, k] * u[4]
        c = np.cos(th[k])
        s = np.sin(th[k])
        vpar = c * vx + s * vy
        vperp = -s * vx + c * vy
        if model == DRAG_LINEAR:
            fpar = -cpar * vpar
            fperp = -cperp * vperp
        else:
            speed = np.hypot(vpar, vperp)
            if speed > eps:
                fpar = -cpar * vpar / speed
                fperp = -cperp * vperp / speed
            else:
                fpar = 0.0
                fperp = 0.0
        fx = ell * (c * fpar - s * fperp)
        fy = ell * (s * fpar + c * fperp)
        W[0] += fx
        W[1] += fy
        W[2] += qx[k] * fy - qy[k] * fx
    return W


@jit
def solve_point_nonlinear(
    w1, w2, wd1, wd2, c1, c2, ell, cpar, cperp, mode, anchor, model, eps, tol, maxit
):
    """Damped-Newton force balance for one shape velocity (Coulomb drag).

    Unknowns are the active body-velocity components for the mode; the
    linear-drag solution seeds the iteration.  Returns (xi(3,), ok).
    """
    D = point_drag(w1, w2, c1, c2, ell, cpar, cperp, anchor)
    if mode == MODE_FREE:
        nact = 3
        A0, ok0 = solve_free(D)
    elif mode == MODE_SINGLE:
        nact = 2
        A0, _wy, ok0 = solve_single(D)
    else:
        nact = 1
        A0, _wy, _wt, ok0 = solve_multi(D)
    xi = np.zeros(3)
    if not ok0:
        return xi, False
    for r in range(3):
        xi[r] = A0[r, 0] * wd1 + A0[r, 1] * wd2
    if model == DRAG_LINEAR:
        return xi, True

    # active component indices per mode
    act = np.empty(nact, dtype=np.int64)
    if mode == MODE_FREE:
        act[0], act[1], act[2] = 0, 1, 2
    elif mode == MODE_SINGLE:
        act[0], act[1] = 0, 2
    else:
        act[0] = 0

    u = np.zeros(5)
    u[3] = wd1
    u[4] = wd2

    def_scale = max(1.0, np.abs(wd1) + np.abs(wd2))
    x = np.empty(nact)
    for i in range(nact):
        x[i] = xi[act[i]]

    g = np.empty(nact)
    J = np.empty((nact, nact))
    for it in range(maxit):
        for i in range(nact):
            u[act[i]] = x[i]
        W = net_wrench_kernel(u, w1, w2, c1, c2, ell, cpar, cperp, anchor, model, eps)
        gn = 0.0
        for i in range(nact):
            g[i] = W[act[i]]
            gn += g[i] * g[i]
        gn = np.sqrt(gn)
        if gn < tol:
            for i in range(nact):
                xi[act[i]] = x[i]
            return xi, True
        # finite-difference Jacobian
        for jcol in range(nact):
            h = 1e-7 * def_scale
            u[act[jcol]] = x[jcol] + h
            Wp = net_wrench_kernel(
                u, w1, w2, c1, c2, ell, cpar, cperp, anchor, model, eps
            )
            u[act[jcol]] = x[jcol] - h
            Wm = net_wrench_kernel(
                u, w1, w2, c1, c2, ell, cpar, cperp, anchor, model, eps
            )
            u[act[jcol]] = x[jcol]
            for i in range(nact):
                J[i, jcol] = (Wp[act[i]] - Wm[act[i]]) / (2.0 * h)
        step = np.linalg.solve(J, g)
        lam = 1.0
        improved = False
        for _ in range(30):
            xn = x - lam * step
            for i in range(nact):
                u[act[i]] = xn[i]
            Wn = net_wrench_kernel(
                u, w1, w2, c1, c2, ell, cpar, cperp, anchor, model, eps
            )
            gnn = 0.0
            for i in range(nact):
                gnn += Wn[act[i]] * Wn[act[i]]
            if np.sqrt(gnn) < gn:
                x = xn
                improved = True
                break
            lam *= 0.5
        if not improved:
            break
    for i in range(nact):
        xi[act[i]] = x[i]
    return xi, False


@jit
def dp_from_start(start, order, ptr, dst, wts, n_vertices):
    """Single-source longest path in a DAG given a topological order.

    Ties on weight prefer the shorter path.  Returns (dist, dlen, parent).
    """
    NEG = -np.inf
    dist = np.full(n_vertices, NEG)
    dlen = np.zeros(n_vertices, dtype=np.int64)
    parent = np.full(n_vertices, -1, dtype=np.int64)
    dist[start] = 0.0
    for idx in range(n_vertices):
        u = order[idx]
        du = dist[u]
        if du == NEG:
            continue
        lu = dlen[u]
        for e in range(ptr[u], ptr[u + 1]):
            v = dst[e]
            cand = du + wts[e]
            if cand > dist[v] or (cand == dist[v] and lu + 1 < dlen[v]):
                dist[v] = cand
                dlen[v] = lu + 1
                parent[v] = u
    return dist, dlen, parent


@jit
def dp_all_starts_loop(order, ptr, dst, wts, n_vertices):
    """Best path weight/end/length for every start vertex."""
    best_w = np.zeros(n_vertices)
    best_end = np.empty(n_vertices, dtype=np.int64)
    best_len = np.zeros(n_vertices, dtype=np.int64)
    for s in range(n_vertices):
        dist, dlen, _parent = dp_from_start(s, order, ptr, dst, wts, n_vertices)
        bw = 0.0
        be = s
        bl = 0
        for v in range(n_vertices):
            dv = dist[v]
            if dv == -np.inf:
                continue
            if dv > bw or (dv == bw and (dlen[v] < bl or (dlen[v] == bl and v < be))):
                bw = dv
                be = v
                bl = dlen[v]
        best_w[s] = bw
        best_end[s] = be
        best_len[s] = bl
    return best_w, best_end, best_len
