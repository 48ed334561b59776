"""Batched ADER-DG kernels for the hyperbolic SGN/SM system (2D, 6 vars).

Element dof layout: u[e, i, j, v] on tensor Gauss-Legendre nodes, predictor
q[e, i, j, a, v] with a the time node.  All loops are element-local so the
prange parallelism is race-free and deterministic for any thread count.

Element flags returned by the predictor: 0 ok, 1 dry state, 2 Picard did not
converge.  Face flags: 0 ok, 1 segment path crossed a dry state.
"""

import math

import numpy as np
from numba import njit, prange

NV = 6

OK = 0
FLAG_DRY = -1
FLAG_NOCONV = -2


@njit(inline="always")
def _flux_point(q, g, c, fx, fy):
    h = q[0]
    u1 = q[1] / h
    u2 = q[2] / h
    p = q[4] / h
    hyd = 0.5 * g * h * h + q[4]
    fx[0] = q[1]
    fx[1] = q[1] * u1 + hyd
    fx[2] = q[2] * u1
    fx[3] = q[3] * u1
    fx[4] = q[1] * (p + c * c)
    fx[5] = 0.0
    fy[0] = q[2]
    fy[1] = q[1] * u2
    fy[2] = q[2] * u2 + hyd
    fy[3] = q[3] * u2
    fy[4] = q[2] * (p + c * c)
    fy[5] = 0.0


@njit(cache=True, fastmath=True, parallel=True)
def predict(u, q, fxi, fyi, nsi, smax_out, dt, dx, dy,
            w, D, Tinv, e0, g, gamma, c, hfloor, max_iter, tol, extra_iters):
    """Element-local space-time Picard predictor plus corrector feeds.

    Fills q with the converged space-time dofs and the time-integrated feeds:
    fxi/fyi (flux values) and nsi (ncp - source), all shaped (E, n, n, NV).
    smax_out[e] gets the max nodal signal-speed bound of the final predictor
    (diagnostic; dt uses the corrector output instead).
    """
    E = u.shape[0]
    n = u.shape[1]
    flags = np.zeros(E, np.int64)
    for e in prange(E):
        qe = q[e]
        R = np.empty((n, n, n, NV))
        fx = np.empty((n, n, NV))
        fy = np.empty((n, n, NV))
        pt = np.empty(NV)
        fxp = np.empty(NV)
        fyp = np.empty(NV)
        qnew = np.empty(n)
        for i in range(n):
            for j in range(n):
                for v in range(NV):
                    uv = u[e, i, j, v]
                    for a in range(n):
                        qe[i, j, a, v] = uv
        bad = False
        converged = False
        total_iter = max_iter + extra_iters
        it = 0
        while it < total_iter:
            # residual R = div F + B grad q - S at every space-time node
            for a in range(n):
                for i in range(n):
                    for j in range(n):
                        h = qe[i, j, a, 0]
                        if h <= hfloor:
                            bad = True
                            break
                        for v in range(NV):
                            pt[v] = qe[i, j, a, v]
                        _flux_point(pt, g, c, fxp, fyp)
                        for v in range(NV):
                            fx[i, j, v] = fxp[v]
                            fy[i, j, v] = fyp[v]
                    if bad:
                        break
                if bad:
                    break
                for i in range(n):
                    for j in range(n):
                        h = qe[i, j, a, 0]
                        u1 = qe[i, j, a, 1] / h
                        u2 = qe[i, j, a, 2] / h
                        wv = qe[i, j, a, 3] / h
                        p = qe[i, j, a, 4] / h
                        # gradients of h and z_b only (all B needs)
                        gxh = 0.0
                        gxz = 0.0
                        gyh = 0.0
                        gyz = 0.0
                        for m in range(n):
                            gxh += D[i, m] * qe[m, j, a, 0]
                            gxz += D[i, m] * qe[m, j, a, 5]
                            gyh += D[j, m] * qe[i, m, a, 0]
                            gyz += D[j, m] * qe[i, m, a, 5]
                        gxh /= dx
                        gxz /= dx
                        gyh /= dy
                        gyz /= dy
                        coef = g * h + gamma * p
                        ncp1 = coef * gxz
                        ncp2 = coef * gyz
                        ncp4 = c * c * (-u1 * gxh - u2 * gyh
                                        - 2.0 * (u1 * gxz + u2 * gyz))
                        s3 = gamma * p
                        s4 = -2.0 * c * c * wv
                        for v in range(NV):
                            dfx = 0.0
                            dfy = 0.0
                            for m in range(n):
                                dfx += D[i, m] * fx[m, j, v]
                                dfy += D[j, m] * fy[i, m, v]
                            R[i, j, a, v] = dfx / dx + dfy / dy
                        R[i, j, a, 1] += ncp1
                        R[i, j, a, 2] += ncp2
                        R[i, j, a, 3] -= s3
                        R[i, j, a, 4] += ncp4 - s4
            if bad:
                flags[e] = FLAG_DRY
                break
            # time solve, track iterate change
            delta = 0.0
            scale = 0.0
            for i in range(n):
                for j in range(n):
                    for v in range(NV):
                        uv = u[e, i, j, v]
                        for a in range(n):
                            acc = 0.0
                            for b in range(n):
                                acc += Tinv[a, b] * (e0[b] * uv
                                                     - dt * w[b] * R[i, j, b, v])
                            qnew[a] = acc
                        for a in range(n):
                            d = abs(qnew[a] - qe[i, j, a, v])
                            if d > delta:
                                delta = d
                            s = abs(qnew[a])
                            if s > scale:
                                scale = s
                            qe[i, j, a, v] = qnew[a]
            it += 1
            if delta <= tol * max(scale, 1.0):
                converged = True
                break
        if bad:
            continue
        if not converged and it >= total_iter:
            flags[e] = FLAG_NOCONV
            continue
        flags[e] = it
        # corrector feeds from the final predictor, time-integrated
        smax_e = 0.0
        for i in range(n):
            for j in range(n):
                for v in range(NV):
                    fxi[e, i, j, v] = 0.0
                    fyi[e, i, j, v] = 0.0
                    nsi[e, i, j, v] = 0.0
        for a in range(n):
            wa = w[a]
            for i in range(n):
                for j in range(n):
                    h = qe[i, j, a, 0]
                    if h <= hfloor:
                        flags[e] = FLAG_DRY
                        break
                    for v in range(NV):
                        pt[v] = qe[i, j, a, v]
                    _flux_point(pt, g, c, fxp, fyp)
                    for v in range(NV):
                        fxi[e, i, j, v] += wa * fxp[v]
                        fyi[e, i, j, v] += wa * fyp[v]
                    u1 = pt[1] / h
                    u2 = pt[2] / h
                    wv = pt[3] / h
                    p = pt[4] / h
                    gxh = 0.0
                    gxz = 0.0
                    gyh = 0.0
                    gyz = 0.0
                    for m in range(n):
                        gxh += D[i, m] * qe[m, j, a, 0]
                        gxz += D[i, m] * qe[m, j, a, 5]
                        gyh += D[j, m] * qe[i, m, a, 0]
                        gyz += D[j, m] * qe[i, m, a, 5]
                    gxh /= dx
                    gxz /= dx
                    gyh /= dy
                    gyz /= dy
                    coef = g * h + gamma * p
                    nsi[e, i, j, 1] += wa * coef * gxz
                    nsi[e, i, j, 2] += wa * coef * gyz
                    nsi[e, i, j, 3] -= wa * gamma * p
                    nsi[e, i, j, 4] += wa * (
                        c * c * (-u1 * gxh - u2 * gyh
                                 - 2.0 * (u1 * gxz + u2 * gyz))
                        + 2.0 * c * c * wv)
                    rad = math.sqrt(g * h + c * c + 2.0 * abs(p))
                    s1 = abs(u1) + rad
                    s2 = abs(u2) + rad
                    if s1 > smax_e:
                        smax_e = s1
                    if s2 > smax_e:
                        smax_e = s2
        smax_out[e] = smax_e
    return flags


@njit(inline="always")
def _bn_matvec_point(qv, dq, nx, ny, g, gamma, c, out):
    h = qv[0]
    un = (qv[1] * nx + qv[2] * ny) / h
    p = qv[4] / h
    coef = g * h + gamma * p
    out[0] = 0.0
    out[1] = nx * coef * dq[5]
    out[2] = ny * coef * dq[5]
    out[3] = 0.0
    out[4] = -c * c * un * (dq[0] + 2.0 * dq[5])
    out[5] = 0.0


@njit(inline="always")
def _face_point(qm, qp, nx, ny, g, gamma, c, hfloor, spath, wpath,
                fxm, fym, fxp2, fyp2, psi, bpath, gout, dout):
    """Time-slice Rusanov + path terms at one face quadrature point.

    Returns 0 on success, FLAG_DRY when the segment path leaves wet states.
    gout gets G . n, dout gets D . n (identical for both sides for HSGN).
    """
    if qm[0] <= hfloor or qp[0] <= hfloor:
        return FLAG_DRY
    _flux_point(qm, g, c, fxm, fym)
    _flux_point(qp, g, c, fxp2, fyp2)
    um = (qm[1] * nx + qm[2] * ny) / qm[0]
    up = (qp[1] * nx + qp[2] * ny) / qp[0]
    sm = abs(um) + math.sqrt(g * qm[0] + c * c + 2.0 * abs(qm[4] / qm[0]))
    sp = abs(up) + math.sqrt(g * qp[0] + c * c + 2.0 * abs(qp[4] / qp[0]))
    s = max(sm, sp)
    for v in range(NV):
        gout[v] = 0.5 * (nx * (fxm[v] + fxp2[v]) + ny * (fym[v] + fyp2[v])
                         ) - 0.5 * s * (qp[v] - qm[v])
        dout[v] = 0.0
    # the bottom is steady (d_t z_b = 0): its row never updates, so the
    # jump penalty must not diffuse it
    gout[5] = 0.0
    for m in range(spath.shape[0]):
        sv = spath[m]
        for v in range(NV):
            psi[v] = qm[v] + sv * (qp[v] - qm[v])
        if psi[0] <= hfloor:
            return FLAG_DRY
        for v in range(NV):
            bpath[v] = qp[v] - qm[v]
        _bn_matvec_point(psi, bpath, nx, ny, g, gamma, c, fxm)
        for v in range(NV):
            dout[v] += 0.5 * wpath[m] * fxm[v]
    return OK


@njit(cache=True, fastmath=True, parallel=True)
def face_pass(q, axis, periodic, ncx, ncy, gsign_lo, goff_lo, gsign_hi, goff_hi,
              G, DD, w, e0, e1, g, gamma, c, hfloor, spath, wpath):
    """Time-integrated face terms along one axis.

    Face fx of axis 0 sits between elements (fx-1, iy) and (fx, iy) with the
    canonical normal +x (wrap-around when periodic).  G and DD are shaped
    (nf, nother, n, NV); DD is the path term, equal for both sides.
    At non-periodic boundaries the ghost state is sign * trace + offset.
    """
    n = w.shape[0]
    if axis == 0:
        nf = ncx if periodic else ncx + 1
        nother = ncy
        nx, ny = 1.0, 0.0
    else:
        nf = ncy if periodic else ncy + 1
        nother = ncx
        nx, ny = 0.0, 1.0
    flags = np.zeros(nf * nother, np.int64)
    for f in prange(nf * nother):
        fx = f // nother
        io = f % nother
        qm = np.empty(NV)
        qp = np.empty(NV)
        t1 = np.empty(NV)
        t2 = np.empty(NV)
        t3 = np.empty(NV)
        t4 = np.empty(NV)
        psi = np.empty(NV)
        bpath = np.empty(NV)
        gout = np.empty(NV)
        dout = np.empty(NV)
        if axis == 0:
            em = ((fx - 1) % ncx) * ncy + io
            ep = (fx % ncx) * ncy + io
        else:
            em = io * ncy + (fx - 1) % ncy
            ep = io * ncy + fx % ncy
        has_m = periodic or fx > 0
        has_p = periodic or fx < (ncx if axis == 0 else ncy)
        for jn in range(n):
            for v in range(NV):
                G[fx, io, jn, v] = 0.0
                DD[fx, io, jn, v] = 0.0
            for a in range(n):
                for v in range(NV):
                    qm[v] = 0.0
                    qp[v] = 0.0
                if has_m:
                    for i in range(n):
                        c1 = e1[i]
                        if axis == 0:
                            for v in range(NV):
                                qm[v] += c1 * q[em, i, jn, a, v]
                        else:
                            for v in range(NV):
                                qm[v] += c1 * q[em, jn, i, a, v]
                if has_p:
                    for i in range(n):
                        c0 = e0[i]
                        if axis == 0:
                            for v in range(NV):
                                qp[v] += c0 * q[ep, i, jn, a, v]
                        else:
                            for v in range(NV):
                                qp[v] += c0 * q[ep, jn, i, a, v]
                if not has_m:
                    for v in range(NV):
                        qm[v] = gsign_lo[v] * qp[v] + goff_lo[io, jn, a, v]
                if not has_p:
                    for v in range(NV):
                        qp[v] = gsign_hi[v] * qm[v] + goff_hi[io, jn, a, v]
                st = _face_point(qm, qp, nx, ny, g, gamma, c, hfloor,
                                 spath, wpath, t1, t2, t3, t4, psi, bpath,
                                 gout, dout)
                if st != OK:
                    flags[f] = st
                wa = w[a]
                for v in range(NV):
                    G[fx, io, jn, v] += wa * gout[v]
                    DD[fx, io, jn, v] += wa * dout[v]
    return flags


@njit(cache=True, fastmath=True, parallel=True)
def assemble(u, fxi, fyi, nsi, Gx, Dx, Gy, Dy, periodic_x, periodic_y,
             ncx, ncy, dt, dx, dy, w, D, e0, e1):
    """One-step corrector update of the element dofs, in place."""
    E = u.shape[0]
    n = u.shape[1]
    for e in prange(E):
        ix = e // ncy
        iy = e % ncy
        lfx = ix
        rfx = (ix + 1) % ncx if periodic_x else ix + 1
        bfy = iy
        tfy = (iy + 1) % ncy if periodic_y else iy + 1
        for i in range(n):
            ci1 = dt / (dx * w[i]) * e1[i]
            ci0 = dt / (dx * w[i]) * e0[i]
            for j in range(n):
                cj1 = dt / (dy * w[j]) * e1[j]
                cj0 = dt / (dy * w[j]) * e0[j]
                for v in range(NV):
                    upd = 0.0
                    upd -= ci1 * (Gx[rfx, iy, j, v] + Dx[rfx, iy, j, v])
                    upd -= ci0 * (-Gx[lfx, iy, j, v] + Dx[lfx, iy, j, v])
                    upd -= cj1 * (Gy[tfy, ix, i, v] + Dy[tfy, ix, i, v])
                    upd -= cj0 * (-Gy[bfy, ix, i, v] + Dy[bfy, ix, i, v])
                    accx = 0.0
                    accy = 0.0
                    for m in range(n):
                        accx += w[m] * D[m, i] * fxi[e, m, j, v]
                        accy += w[m] * D[m, j] * fyi[e, i, m, v]
                    upd += dt / (dx * w[i]) * accx
                    upd += dt / (dy * w[j]) * accy
                    upd -= dt * nsi[e, i, j, v]
                    u[e, i, j, v] += upd


@njit(cache=True, fastmath=True, parallel=True)
def smax_nodes(u, g, c, hfloor, out):
    """Max signal-speed bound over element nodes and both axes."""
    E = u.shape[0]
    n = u.shape[1]
    flags = np.zeros(E, np.int64)
    for e in prange(E):
        s = 0.0
        for i in range(n):
            for j in range(n):
                h = u[e, i, j, 0]
                if h <= hfloor:
                    flags[e] = FLAG_DRY
                    continue
                rad = math.sqrt(g * h + c * c + 2.0 * abs(u[e, i, j, 4] / h))
                s1 = abs(u[e, i, j, 1] / h) + rad
                s2 = abs(u[e, i, j, 2] / h) + rad
                if s1 > s:
                    s = s1
                if s2 > s:
                    s = s2
        out[e] = s
    return flags
