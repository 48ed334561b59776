"""Batched ADER-DG kernels for linear elasticity (2D: 5 vars, 3D: 9 vars).

The conservative flux is zero, so the Rusanov face term reduces to the
penalty and the volume work is the non-conservative product only.  Materials
are per-element (lam, mu, rho, cp arrays); the system is linear, so the
Picard predictor runs a fixed N+1 iterations (nilpotent iteration matrix)
with no tolerance bookkeeping.

Face layout mirrors kernels_hsgn: face f of an axis sits between the
elements at positions fx-1 and fx with canonical normal along +axis; the
path term differs per side when the material jumps, hence Dm and Dp.
"""

import numpy as np
from numba import njit, prange

OK = 0


# ---------------------------------------------------------------- 2D


@njit(inline="always")
def _resid2d_node(qe, i, j, a, D, dxi, dyi, lp2m, lam, mu, ir, out):
    n = D.shape[0]
    gx0 = 0.0
    gx2 = 0.0
    gx3 = 0.0
    gx4 = 0.0
    gy1 = 0.0
    gy2 = 0.0
    gy3 = 0.0
    gy4 = 0.0
    for m in range(n):
        dxm = D[i, m]
        gx0 += dxm * qe[m, j, a, 0]
        gx2 += dxm * qe[m, j, a, 2]
        gx3 += dxm * qe[m, j, a, 3]
        gx4 += dxm * qe[m, j, a, 4]
        dym = D[j, m]
        gy1 += dym * qe[i, m, a, 1]
        gy2 += dym * qe[i, m, a, 2]
        gy3 += dym * qe[i, m, a, 3]
        gy4 += dym * qe[i, m, a, 4]
    gx0 *= dxi
    gx2 *= dxi
    gx3 *= dxi
    gx4 *= dxi
    gy1 *= dyi
    gy2 *= dyi
    gy3 *= dyi
    gy4 *= dyi
    out[0] = -(lp2m * gx3 + lam * gy4)
    out[1] = -(lam * gx3 + lp2m * gy4)
    out[2] = -mu * (gx4 + gy3)
    out[3] = -ir * (gx0 + gy2)
    out[4] = -ir * (gx2 + gy1)


@njit(cache=True, fastmath=True, parallel=True)
def predict_2d(u, q, ri, dt, dx, dy, w, D, Tinv, e0, lam, mu, rho, niter):
    """Fixed-iteration predictor; ri gets the time-integrated residual feed."""
    E = u.shape[0]
    n = u.shape[1]
    NV = 5
    dxi = 1.0 / dx
    dyi = 1.0 / dy
    for e in prange(E):
        qe = q[e]
        R = np.empty((n, n, n, NV))
        qnew = np.empty(n)
        rv = np.empty(NV)
        lame = lam[e]
        mue = mu[e]
        ire = 1.0 / rho[e]
        lp2m = lame + 2.0 * mue
        for i in range(n):
            for j in range(n):
                for v in range(NV):
                    uv = u[e, i, j, v]
                    for a in range(n):
                        qe[i, j, a, v] = uv
        for it in range(niter):
            for a in range(n):
                for i in range(n):
                    for j in range(n):
                        _resid2d_node(qe, i, j, a, D, dxi, dyi,
                                      lp2m, lame, mue, ire, rv)
                        for v in range(NV):
                            R[i, j, a, v] = rv[v]
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
                            qe[i, j, a, v] = qnew[a]
        for i in range(n):
            for j in range(n):
                for v in range(NV):
                    ri[e, i, j, v] = 0.0
        for a in range(n):
            wa = w[a]
            for i in range(n):
                for j in range(n):
                    _resid2d_node(qe, i, j, a, D, dxi, dyi,
                                  lp2m, lame, mue, ire, rv)
                    for v in range(NV):
                        ri[e, i, j, v] += wa * rv[v]


@njit(inline="always")
def _apply_l_2d(v, out, D, dxi, dyi, lp2m, lam, mu, ir):
    """Spatial operator L = B . grad applied to one spatial slab (n, n, 5)."""
    n = D.shape[0]
    for i in range(n):
        for j in range(n):
            gx0 = 0.0
            gx2 = 0.0
            gx3 = 0.0
            gx4 = 0.0
            gy1 = 0.0
            gy2 = 0.0
            gy3 = 0.0
            gy4 = 0.0
            for m in range(n):
                dxm = D[i, m]
                gx0 += dxm * v[m, j, 0]
                gx2 += dxm * v[m, j, 2]
                gx3 += dxm * v[m, j, 3]
                gx4 += dxm * v[m, j, 4]
                dym = D[j, m]
                gy1 += dym * v[i, m, 1]
                gy2 += dym * v[i, m, 2]
                gy3 += dym * v[i, m, 3]
                gy4 += dym * v[i, m, 4]
            gx0 *= dxi
            gx2 *= dxi
            gx3 *= dxi
            gx4 *= dxi
            gy1 *= dyi
            gy2 *= dyi
            gy3 *= dyi
            gy4 *= dyi
            out[i, j, 0] = -(lp2m * gx3 + lam * gy4)
            out[i, j, 1] = -(lam * gx3 + lp2m * gy4)
            out[i, j, 2] = -mu * (gx4 + gy3)
            out[i, j, 3] = -ir * (gx0 + gy2)
            out[i, j, 4] = -ir * (gx2 + gy1)


@njit(cache=True, fastmath=True, parallel=True)
def predict_lin_2d(u, q, ri, dt, dx, dy, D, K, kap, lam, mu, rho):
    """Factorized linear predictor: the exact N+1 Picard iterate.

    For a linear system the iterate after N+1 sweeps is the truncated series
    sum_m K[m, a] (dt L)^m u with K[m] = (-TW)^m 1; the corrector feed uses
    the same powers with the time-integrated weights kap.  Algebraically
    identical to running the iterative predictor, at a fraction of the cost
    because L acts on spatial slabs only.
    """
    E = u.shape[0]
    n = u.shape[1]
    NV = 5
    nterm = K.shape[0]  # m = 0 .. N+1
    dxi = 1.0 / dx
    dyi = 1.0 / dy
    dti = 1.0 / dt
    for e in prange(E):
        lame = lam[e]
        mue = mu[e]
        ire = 1.0 / rho[e]
        lp2m = lame + 2.0 * mue
        vprev = np.empty((n, n, NV))
        vnew = np.empty((n, n, NV))
        for i in range(n):
            for j in range(n):
                for v in range(NV):
                    uv = u[e, i, j, v]
                    vprev[i, j, v] = uv
                    for a in range(n):
                        q[e, i, j, a, v] = K[0, a] * uv
                    ri[e, i, j, v] = 0.0
        for m in range(1, nterm + 1):
            _apply_l_2d(vprev, vnew, D, dxi, dyi, lp2m, lame, mue, ire)
            kw = kap[m - 1] * dti
            if m < nterm:
                for i in range(n):
                    for j in range(n):
                        for v in range(NV):
                            val = dt * vnew[i, j, v]
                            vnew[i, j, v] = val
                            for a in range(n):
                                q[e, i, j, a, v] += K[m, a] * val
                            ri[e, i, j, v] += kw * val
            else:
                for i in range(n):
                    for j in range(n):
                        for v in range(NV):
                            val = dt * vnew[i, j, v]
                            vnew[i, j, v] = val
                            ri[e, i, j, v] += kw * val
            tmp = vprev
            vprev = vnew
            vnew = tmp


@njit(cache=True, fastmath=True, parallel=True)
def predict_lin_tr_2d(u, ri, tx0, tx1, ty0, ty1, dt, dx, dy,
                      D, K, kap, e0, e1, lam, mu, rho):
    """Linear predictor emitting face traces only (no space-time dofs).

    The corrector consumes nothing but the time-resolved traces at the four
    faces (tx0/tx1 at xi = 0/1 shaped (E, n, nt, V), ty0/ty1 likewise) and
    the time-integrated volume feed ri, so the full q array is never built.
    """
    E = u.shape[0]
    n = u.shape[1]
    NV = 5
    nterm = K.shape[0]
    dxi = 1.0 / dx
    dyi = 1.0 / dy
    dti = 1.0 / dt
    for e in prange(E):
        lame = lam[e]
        mue = mu[e]
        ire = 1.0 / rho[e]
        lp2m = lame + 2.0 * mue
        vprev = np.empty((n, n, NV))
        vnew = np.empty((n, n, NV))
        for i in range(n):
            for j in range(n):
                for v in range(NV):
                    vprev[i, j, v] = u[e, i, j, v]
                    ri[e, i, j, v] = 0.0
        # m = 0 term: K[0, a] = 1, traces of u itself
        for j in range(n):
            for v in range(NV):
                a0 = 0.0
                a1 = 0.0
                b0 = 0.0
                b1 = 0.0
                for i in range(n):
                    a0 += e0[i] * u[e, i, j, v]
                    a1 += e1[i] * u[e, i, j, v]
                    b0 += e0[i] * u[e, j, i, v]
                    b1 += e1[i] * u[e, j, i, v]
                for a in range(n):
                    tx0[e, j, a, v] = a0
                    tx1[e, j, a, v] = a1
                    ty0[e, j, a, v] = b0
                    ty1[e, j, a, v] = b1
        for m in range(1, nterm + 1):
            _apply_l_2d(vprev, vnew, D, dxi, dyi, lp2m, lame, mue, ire)
            kw = kap[m - 1] * dti
            for i in range(n):
                for j in range(n):
                    for v in range(NV):
                        val = dt * vnew[i, j, v]
                        vnew[i, j, v] = val
                        ri[e, i, j, v] += kw * val
            if m < nterm:
                for j in range(n):
                    for v in range(NV):
                        a0 = 0.0
                        a1 = 0.0
                        b0 = 0.0
                        b1 = 0.0
                        for i in range(n):
                            a0 += e0[i] * vnew[i, j, v]
                            a1 += e1[i] * vnew[i, j, v]
                            b0 += e0[i] * vnew[j, i, v]
                            b1 += e1[i] * vnew[j, i, v]
                        for a in range(n):
                            kma = K[m, a]
                            tx0[e, j, a, v] += kma * a0
                            tx1[e, j, a, v] += kma * a1
                            ty0[e, j, a, v] += kma * b0
                            ty1[e, j, a, v] += kma * b1
            tmp = vprev
            vprev = vnew
            vnew = tmp


@njit(cache=True, fastmath=True, parallel=True)
def face_pass_tr_2d(trm, trp, axis, periodic, ncx, ncy,
                    gsign_lo, goff_lo, gsign_hi, goff_hi,
                    upwind_lo, upwind_hi, absb_lo, absb_hi,
                    G, Dm, Dp, w, lam, mu, rho, cp):
    """Face terms from precomputed traces: trm is the minus-side (exit) trace
    array of this axis, trp the plus-side (entry) one, both (E, n, nt, V)."""
    NV = 5
    n = w.shape[0]
    if axis == 0:
        nf = ncx if periodic else ncx + 1
        nother = ncy
        nax = ncx
    else:
        nf = ncy if periodic else ncy + 1
        nother = ncx
        nax = ncy
    for f in prange(nf * nother):
        fx = f // nother
        io = f % nother
        qm = np.empty(NV)
        qp = np.empty(NV)
        dq = np.empty(NV)
        bm = np.empty(NV)
        bp = np.empty(NV)
        if axis == 0:
            em = ((fx - 1) % ncx) * ncy + io
            ep = (fx % ncx) * ncy + io
        else:
            em = io * ncy + (fx - 1) % ncy
            ep = io * ncy + fx % ncy
        has_m = periodic or fx > 0
        has_p = periodic or fx < nax
        lam_m = lam[em] if has_m else lam[ep]
        mu_m = mu[em] if has_m else mu[ep]
        ir_m = 1.0 / (rho[em] if has_m else rho[ep])
        lam_p = lam[ep] if has_p else lam[em]
        mu_p = mu[ep] if has_p else mu[em]
        ir_p = 1.0 / (rho[ep] if has_p else rho[em])
        s = max(cp[em] if has_m else 0.0, cp[ep] if has_p else 0.0)
        upw = (not has_m and upwind_lo) or (not has_p and upwind_hi)
        for jn in range(n):
            for v in range(NV):
                G[fx, io, jn, v] = 0.0
                Dm[fx, io, jn, v] = 0.0
                Dp[fx, io, jn, v] = 0.0
            for a in range(n):
                if has_m:
                    for v in range(NV):
                        qm[v] = trm[em, jn, a, v]
                if has_p:
                    for v in range(NV):
                        qp[v] = trp[ep, jn, a, v]
                if not has_m:
                    for v in range(NV):
                        qm[v] = gsign_lo[v] * qp[v] + goff_lo[io, jn, a, v]
                if not has_p:
                    for v in range(NV):
                        qp[v] = gsign_hi[v] * qm[v] + goff_hi[io, jn, a, v]
                for v in range(NV):
                    dq[v] = qp[v] - qm[v]
                _bn_axis_2d(dq, axis, lam_m + 2 * mu_m, lam_m, mu_m, ir_m, bm)
                _bn_axis_2d(dq, axis, lam_p + 2 * mu_p, lam_p, mu_p, ir_p, bp)
                wa = w[a]
                if upw:
                    AB = absb_lo if not has_m else absb_hi
                    for v in range(NV):
                        acc = 0.0
                        for u2 in range(NV):
                            acc += AB[io, v, u2] * dq[u2]
                        G[fx, io, jn, v] += wa * (-0.5 * acc)
                else:
                    for v in range(NV):
                        G[fx, io, jn, v] += wa * (-0.5 * s * dq[v])
                for v in range(NV):
                    Dm[fx, io, jn, v] += wa * 0.5 * bm[v]
                    Dp[fx, io, jn, v] += wa * 0.5 * bp[v]


@njit(inline="always")
def _bn_axis_2d(dq, axis, lp2m, lam, mu, ir, out):
    if axis == 0:
        out[0] = -lp2m * dq[3]
        out[1] = -lam * dq[3]
        out[2] = -mu * dq[4]
        out[3] = -ir * dq[0]
        out[4] = -ir * dq[2]
    else:
        out[0] = -lam * dq[4]
        out[1] = -lp2m * dq[4]
        out[2] = -mu * dq[3]
        out[3] = -ir * dq[2]
        out[4] = -ir * dq[1]


@njit(cache=True, fastmath=True, parallel=True)
def face_pass_2d(q, axis, periodic, ncx, ncy,
                 gsign_lo, goff_lo, gsign_hi, goff_hi,
                 upwind_lo, upwind_hi, absb_lo, absb_hi,
                 G, Dm, Dp, w, e0, e1, lam, mu, rho, cp):
    """Face terms; boundary faces may use the exact |B.n| upwind penalty
    (Godunov flux for the linear system) instead of the Rusanov speed."""
    NV = 5
    n = w.shape[0]
    if axis == 0:
        nf = ncx if periodic else ncx + 1
        nother = ncy
        nax = ncx
    else:
        nf = ncy if periodic else ncy + 1
        nother = ncx
        nax = ncy
    for f in prange(nf * nother):
        fx = f // nother
        io = f % nother
        qm = np.empty(NV)
        qp = np.empty(NV)
        dq = np.empty(NV)
        bm = np.empty(NV)
        bp = np.empty(NV)
        if axis == 0:
            em = ((fx - 1) % ncx) * ncy + io
            ep = (fx % ncx) * ncy + io
        else:
            em = io * ncy + (fx - 1) % ncy
            ep = io * ncy + fx % ncy
        has_m = periodic or fx > 0
        has_p = periodic or fx < nax
        lam_m = lam[em] if has_m else lam[ep]
        mu_m = mu[em] if has_m else mu[ep]
        ir_m = 1.0 / (rho[em] if has_m else rho[ep])
        lam_p = lam[ep] if has_p else lam[em]
        mu_p = mu[ep] if has_p else mu[em]
        ir_p = 1.0 / (rho[ep] if has_p else rho[em])
        s = max(cp[em] if has_m else 0.0, cp[ep] if has_p else 0.0)
        for jn in range(n):
            for v in range(NV):
                G[fx, io, jn, v] = 0.0
                Dm[fx, io, jn, v] = 0.0
                Dp[fx, io, jn, v] = 0.0
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
                for v in range(NV):
                    dq[v] = qp[v] - qm[v]
                _bn_axis_2d(dq, axis, lam_m + 2 * mu_m, lam_m, mu_m, ir_m, bm)
                _bn_axis_2d(dq, axis, lam_p + 2 * mu_p, lam_p, mu_p, ir_p, bp)
                wa = w[a]
                if (not has_m and upwind_lo) or (not has_p and upwind_hi):
                    AB = absb_lo if not has_m else absb_hi
                    for v in range(NV):
                        acc = 0.0
                        for u2 in range(NV):
                            acc += AB[io, v, u2] * dq[u2]
                        G[fx, io, jn, v] += wa * (-0.5 * acc)
                else:
                    for v in range(NV):
                        G[fx, io, jn, v] += wa * (-0.5 * s * dq[v])
                for v in range(NV):
                    Dm[fx, io, jn, v] += wa * 0.5 * bm[v]
                    Dp[fx, io, jn, v] += wa * 0.5 * bp[v]


@njit(cache=True, fastmath=True, parallel=True)
def assemble_2d(u, ri, Gx, Dmx, Dpx, Gy, Dmy, Dpy, periodic_x, periodic_y,
                ncx, ncy, dt, dx, dy, w, e0, e1):
    E = u.shape[0]
    n = u.shape[1]
    NV = 5
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
                    upd -= ci1 * (Gx[rfx, iy, j, v] + Dmx[rfx, iy, j, v])
                    upd -= ci0 * (-Gx[lfx, iy, j, v] + Dpx[lfx, iy, j, v])
                    upd -= cj1 * (Gy[tfy, ix, i, v] + Dmy[tfy, ix, i, v])
                    upd -= cj0 * (-Gy[bfy, ix, i, v] + Dpy[bfy, ix, i, v])
                    upd -= dt * ri[e, i, j, v]
                    u[e, i, j, v] += upd


# ---------------------------------------------------------------- 3D


@njit(inline="always")
def _resid3d_node(qe, i, j, k, a, D, dxi, dyi, dzi, lp2m, lam, mu, ir, out):
    n = D.shape[0]
    gx0 = 0.0
    gx3 = 0.0
    gx5 = 0.0
    gx6 = 0.0
    gx7 = 0.0
    gx8 = 0.0
    gy1 = 0.0
    gy3 = 0.0
    gy4 = 0.0
    gy6 = 0.0
    gy7 = 0.0
    gy8 = 0.0
    gz2 = 0.0
    gz4 = 0.0
    gz5 = 0.0
    gz6 = 0.0
    gz7 = 0.0
    gz8 = 0.0
    for m in range(n):
        dxm = D[i, m]
        gx0 += dxm * qe[m, j, k, a, 0]
        gx3 += dxm * qe[m, j, k, a, 3]
        gx5 += dxm * qe[m, j, k, a, 5]
        gx6 += dxm * qe[m, j, k, a, 6]
        gx7 += dxm * qe[m, j, k, a, 7]
        gx8 += dxm * qe[m, j, k, a, 8]
        dym = D[j, m]
        gy1 += dym * qe[i, m, k, a, 1]
        gy3 += dym * qe[i, m, k, a, 3]
        gy4 += dym * qe[i, m, k, a, 4]
        gy6 += dym * qe[i, m, k, a, 6]
        gy7 += dym * qe[i, m, k, a, 7]
        gy8 += dym * qe[i, m, k, a, 8]
        dzm = D[k, m]
        gz2 += dzm * qe[i, j, m, a, 2]
        gz4 += dzm * qe[i, j, m, a, 4]
        gz5 += dzm * qe[i, j, m, a, 5]
        gz6 += dzm * qe[i, j, m, a, 6]
        gz7 += dzm * qe[i, j, m, a, 7]
        gz8 += dzm * qe[i, j, m, a, 8]
    gx0 *= dxi
    gx3 *= dxi
    gx5 *= dxi
    gx6 *= dxi
    gx7 *= dxi
    gx8 *= dxi
    gy1 *= dyi
    gy3 *= dyi
    gy4 *= dyi
    gy6 *= dyi
    gy7 *= dyi
    gy8 *= dyi
    gz2 *= dzi
    gz4 *= dzi
    gz5 *= dzi
    gz6 *= dzi
    gz7 *= dzi
    gz8 *= dzi
    out[0] = -(lp2m * gx6 + lam * gy7 + lam * gz8)
    out[1] = -(lam * gx6 + lp2m * gy7 + lam * gz8)
    out[2] = -(lam * gx6 + lam * gy7 + lp2m * gz8)
    out[3] = -mu * (gx7 + gy6)
    out[4] = -mu * (gy8 + gz7)
    out[5] = -mu * (gx8 + gz6)
    out[6] = -ir * (gx0 + gy3 + gz5)
    out[7] = -ir * (gx3 + gy1 + gz4)
    out[8] = -ir * (gx5 + gy4 + gz2)


@njit(cache=True, fastmath=True, parallel=True)
def predict_3d(u, q, ri, dt, dx, dy, dz, w, D, Tinv, e0, lam, mu, rho, niter):
    E = u.shape[0]
    n = u.shape[1]
    NV = 9
    dxi = 1.0 / dx
    dyi = 1.0 / dy
    dzi = 1.0 / dz
    for e in prange(E):
        qe = q[e]
        R = np.empty((n, n, n, n, NV))
        qnew = np.empty(n)
        rv = np.empty(NV)
        lame = lam[e]
        mue = mu[e]
        ire = 1.0 / rho[e]
        lp2m = lame + 2.0 * mue
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for v in range(NV):
                        uv = u[e, i, j, k, v]
                        for a in range(n):
                            qe[i, j, k, a, v] = uv
        for it in range(niter):
            for a in range(n):
                for i in range(n):
                    for j in range(n):
                        for k in range(n):
                            _resid3d_node(qe, i, j, k, a, D, dxi, dyi, dzi,
                                          lp2m, lame, mue, ire, rv)
                            for v in range(NV):
                                R[i, j, k, a, v] = rv[v]
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        for v in range(NV):
                            uv = u[e, i, j, k, v]
                            for a in range(n):
                                acc = 0.0
                                for b in range(n):
                                    acc += Tinv[a, b] * (
                                        e0[b] * uv - dt * w[b] * R[i, j, k, b, v])
                                qnew[a] = acc
                            for a in range(n):
                                qe[i, j, k, a, v] = qnew[a]
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for v in range(NV):
                        ri[e, i, j, k, v] = 0.0
        for a in range(n):
            wa = w[a]
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        _resid3d_node(qe, i, j, k, a, D, dxi, dyi, dzi,
                                      lp2m, lame, mue, ire, rv)
                        for v in range(NV):
                            ri[e, i, j, k, v] += wa * rv[v]


@njit(inline="always")
def _apply_l_3d(v, out, D, dxi, dyi, dzi, lp2m, lam, mu, ir):
    """Spatial operator L = B . grad applied to one spatial slab (n, n, n, 9)."""
    n = D.shape[0]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                gx0 = 0.0
                gx3 = 0.0
                gx5 = 0.0
                gx6 = 0.0
                gx7 = 0.0
                gx8 = 0.0
                gy1 = 0.0
                gy3 = 0.0
                gy4 = 0.0
                gy6 = 0.0
                gy7 = 0.0
                gy8 = 0.0
                gz2 = 0.0
                gz4 = 0.0
                gz5 = 0.0
                gz6 = 0.0
                gz7 = 0.0
                gz8 = 0.0
                for m in range(n):
                    dxm = D[i, m]
                    gx0 += dxm * v[m, j, k, 0]
                    gx3 += dxm * v[m, j, k, 3]
                    gx5 += dxm * v[m, j, k, 5]
                    gx6 += dxm * v[m, j, k, 6]
                    gx7 += dxm * v[m, j, k, 7]
                    gx8 += dxm * v[m, j, k, 8]
                    dym = D[j, m]
                    gy1 += dym * v[i, m, k, 1]
                    gy3 += dym * v[i, m, k, 3]
                    gy4 += dym * v[i, m, k, 4]
                    gy6 += dym * v[i, m, k, 6]
                    gy7 += dym * v[i, m, k, 7]
                    gy8 += dym * v[i, m, k, 8]
                    dzm = D[k, m]
                    gz2 += dzm * v[i, j, m, 2]
                    gz4 += dzm * v[i, j, m, 4]
                    gz5 += dzm * v[i, j, m, 5]
                    gz6 += dzm * v[i, j, m, 6]
                    gz7 += dzm * v[i, j, m, 7]
                    gz8 += dzm * v[i, j, m, 8]
                gx0 *= dxi
                gx3 *= dxi
                gx5 *= dxi
                gx6 *= dxi
                gx7 *= dxi
                gx8 *= dxi
                gy1 *= dyi
                gy3 *= dyi
                gy4 *= dyi
                gy6 *= dyi
                gy7 *= dyi
                gy8 *= dyi
                gz2 *= dzi
                gz4 *= dzi
                gz5 *= dzi
                gz6 *= dzi
                gz7 *= dzi
                gz8 *= dzi
                out[i, j, k, 0] = -(lp2m * gx6 + lam * gy7 + lam * gz8)
                out[i, j, k, 1] = -(lam * gx6 + lp2m * gy7 + lam * gz8)
                out[i, j, k, 2] = -(lam * gx6 + lam * gy7 + lp2m * gz8)
                out[i, j, k, 3] = -mu * (gx7 + gy6)
                out[i, j, k, 4] = -mu * (gy8 + gz7)
                out[i, j, k, 5] = -mu * (gx8 + gz6)
                out[i, j, k, 6] = -ir * (gx0 + gy3 + gz5)
                out[i, j, k, 7] = -ir * (gx3 + gy1 + gz4)
                out[i, j, k, 8] = -ir * (gx5 + gy4 + gz2)


@njit(cache=True, fastmath=True, parallel=True)
def predict_lin_3d(u, q, ri, dt, dx, dy, dz, D, K, kap, lam, mu, rho):
    """3D counterpart of predict_lin_2d."""
    E = u.shape[0]
    n = u.shape[1]
    NV = 9
    nterm = K.shape[0]
    dxi = 1.0 / dx
    dyi = 1.0 / dy
    dzi = 1.0 / dz
    dti = 1.0 / dt
    for e in prange(E):
        lame = lam[e]
        mue = mu[e]
        ire = 1.0 / rho[e]
        lp2m = lame + 2.0 * mue
        vprev = np.empty((n, n, n, NV))
        vnew = np.empty((n, n, n, NV))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for v in range(NV):
                        uv = u[e, i, j, k, v]
                        vprev[i, j, k, v] = uv
                        for a in range(n):
                            q[e, i, j, k, a, v] = K[0, a] * uv
                        ri[e, i, j, k, v] = 0.0
        for m in range(1, nterm + 1):
            _apply_l_3d(vprev, vnew, D, dxi, dyi, dzi, lp2m, lame, mue, ire)
            kw = kap[m - 1] * dti
            if m < nterm:
                for i in range(n):
                    for j in range(n):
                        for k in range(n):
                            for v in range(NV):
                                val = dt * vnew[i, j, k, v]
                                vnew[i, j, k, v] = val
                                ri[e, i, j, k, v] += kw * val
                            for a in range(n):
                                kma = K[m, a]
                                for v in range(NV):
                                    q[e, i, j, k, a, v] += kma * vnew[i, j, k, v]
            else:
                for i in range(n):
                    for j in range(n):
                        for k in range(n):
                            for v in range(NV):
                                val = dt * vnew[i, j, k, v]
                                vnew[i, j, k, v] = val
                                ri[e, i, j, k, v] += kw * val
            tmp = vprev
            vprev = vnew
            vnew = tmp


@njit(cache=True, fastmath=True, parallel=True)
def predict_lin_tr_3d(u, ri, tx0, tx1, ty0, ty1, tz0, tz1, dt, dx, dy, dz,
                      D, K, kap, e0, e1, lam, mu, rho):
    """3D linear predictor emitting face traces (E, n, n, nt, V) and the
    time-integrated volume feed; see predict_lin_tr_2d."""
    E = u.shape[0]
    n = u.shape[1]
    NV = 9
    nterm = K.shape[0]
    dxi = 1.0 / dx
    dyi = 1.0 / dy
    dzi = 1.0 / dz
    dti = 1.0 / dt
    for e in prange(E):
        lame = lam[e]
        mue = mu[e]
        ire = 1.0 / rho[e]
        lp2m = lame + 2.0 * mue
        vprev = np.empty((n, n, n, NV))
        vnew = np.empty((n, n, n, NV))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for v in range(NV):
                        vprev[i, j, k, v] = u[e, i, j, k, v]
                        ri[e, i, j, k, v] = 0.0
        for j in range(n):
            for k in range(n):
                for v in range(NV):
                    x0 = 0.0
                    x1 = 0.0
                    y0 = 0.0
                    y1 = 0.0
                    z0 = 0.0
                    z1 = 0.0
                    for i in range(n):
                        x0 += e0[i] * u[e, i, j, k, v]
                        x1 += e1[i] * u[e, i, j, k, v]
                        y0 += e0[i] * u[e, j, i, k, v]
                        y1 += e1[i] * u[e, j, i, k, v]
                        z0 += e0[i] * u[e, j, k, i, v]
                        z1 += e1[i] * u[e, j, k, i, v]
                    for a in range(n):
                        tx0[e, j, k, a, v] = x0
                        tx1[e, j, k, a, v] = x1
                        ty0[e, j, k, a, v] = y0
                        ty1[e, j, k, a, v] = y1
                        tz0[e, j, k, a, v] = z0
                        tz1[e, j, k, a, v] = z1
        for m in range(1, nterm + 1):
            _apply_l_3d(vprev, vnew, D, dxi, dyi, dzi, lp2m, lame, mue, ire)
            kw = kap[m - 1] * dti
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        for v in range(NV):
                            val = dt * vnew[i, j, k, v]
                            vnew[i, j, k, v] = val
                            ri[e, i, j, k, v] += kw * val
            if m < nterm:
                for j in range(n):
                    for k in range(n):
                        for v in range(NV):
                            x0 = 0.0
                            x1 = 0.0
                            y0 = 0.0
                            y1 = 0.0
                            z0 = 0.0
                            z1 = 0.0
                            for i in range(n):
                                x0 += e0[i] * vnew[i, j, k, v]
                                x1 += e1[i] * vnew[i, j, k, v]
                                y0 += e0[i] * vnew[j, i, k, v]
                                y1 += e1[i] * vnew[j, i, k, v]
                                z0 += e0[i] * vnew[j, k, i, v]
                                z1 += e1[i] * vnew[j, k, i, v]
                            for a in range(n):
                                kma = K[m, a]
                                tx0[e, j, k, a, v] += kma * x0
                                tx1[e, j, k, a, v] += kma * x1
                                ty0[e, j, k, a, v] += kma * y0
                                ty1[e, j, k, a, v] += kma * y1
                                tz0[e, j, k, a, v] += kma * z0
                                tz1[e, j, k, a, v] += kma * z1
            tmp = vprev
            vprev = vnew
            vnew = tmp


@njit(cache=True, fastmath=True, parallel=True)
def face_pass_tr_3d(trm, trp, axis, periodic, ncx, ncy, ncz,
                    gsign_lo, goff_lo, gsign_hi, goff_hi,
                    upwind_lo, upwind_hi, absb_lo, absb_hi,
                    G, Dm, Dp, w, lam, mu, rho, cp):
    """3D face terms from precomputed traces (E, n, n, nt, V)."""
    NV = 9
    n = w.shape[0]
    if axis == 0:
        nf = ncx if periodic else ncx + 1
        no1, no2 = ncy, ncz
        nax = ncx
    elif axis == 1:
        nf = ncy if periodic else ncy + 1
        no1, no2 = ncx, ncz
        nax = ncy
    else:
        nf = ncz if periodic else ncz + 1
        no1, no2 = ncx, ncy
        nax = ncz
    for f in prange(nf * no1 * no2):
        fx = f // (no1 * no2)
        rem = f % (no1 * no2)
        io1 = rem // no2
        io2 = rem % no2
        qm = np.empty(NV)
        qp = np.empty(NV)
        dq = np.empty(NV)
        bm = np.empty(NV)
        bp = np.empty(NV)
        if axis == 0:
            em = (((fx - 1) % ncx) * ncy + io1) * ncz + io2
            ep = ((fx % ncx) * ncy + io1) * ncz + io2
        elif axis == 1:
            em = (io1 * ncy + (fx - 1) % ncy) * ncz + io2
            ep = (io1 * ncy + fx % ncy) * ncz + io2
        else:
            em = (io1 * ncy + io2) * ncz + (fx - 1) % ncz
            ep = (io1 * ncy + io2) * ncz + fx % ncz
        has_m = periodic or fx > 0
        has_p = periodic or fx < nax
        lam_m = lam[em] if has_m else lam[ep]
        mu_m = mu[em] if has_m else mu[ep]
        ir_m = 1.0 / (rho[em] if has_m else rho[ep])
        lam_p = lam[ep] if has_p else lam[em]
        mu_p = mu[ep] if has_p else mu[em]
        ir_p = 1.0 / (rho[ep] if has_p else rho[em])
        s = max(cp[em] if has_m else 0.0, cp[ep] if has_p else 0.0)
        upw = (not has_m and upwind_lo) or (not has_p and upwind_hi)
        for jn in range(n):
            for kn in range(n):
                for v in range(NV):
                    G[fx, io1, io2, jn, kn, v] = 0.0
                    Dm[fx, io1, io2, jn, kn, v] = 0.0
                    Dp[fx, io1, io2, jn, kn, v] = 0.0
                for a in range(n):
                    if has_m:
                        for v in range(NV):
                            qm[v] = trm[em, jn, kn, a, v]
                    if has_p:
                        for v in range(NV):
                            qp[v] = trp[ep, jn, kn, a, v]
                    if not has_m:
                        for v in range(NV):
                            qm[v] = gsign_lo[v] * qp[v] + goff_lo[io1, io2, jn, kn, a, v]
                    if not has_p:
                        for v in range(NV):
                            qp[v] = gsign_hi[v] * qm[v] + goff_hi[io1, io2, jn, kn, a, v]
                    for v in range(NV):
                        dq[v] = qp[v] - qm[v]
                    _bn_axis_3d(dq, axis, lam_m + 2 * mu_m, lam_m, mu_m, ir_m, bm)
                    _bn_axis_3d(dq, axis, lam_p + 2 * mu_p, lam_p, mu_p, ir_p, bp)
                    wa = w[a]
                    if upw:
                        AB = absb_lo if not has_m else absb_hi
                        for v in range(NV):
                            acc = 0.0
                            for u2 in range(NV):
                                acc += AB[io1, io2, v, u2] * dq[u2]
                            G[fx, io1, io2, jn, kn, v] += wa * (-0.5 * acc)
                    else:
                        for v in range(NV):
                            G[fx, io1, io2, jn, kn, v] += wa * (-0.5 * s * dq[v])
                    for v in range(NV):
                        Dm[fx, io1, io2, jn, kn, v] += wa * 0.5 * bm[v]
                        Dp[fx, io1, io2, jn, kn, v] += wa * 0.5 * bp[v]


@njit(inline="always")
def _bn_axis_3d(dq, axis, lp2m, lam, mu, ir, out):
    if axis == 0:
        out[0] = -lp2m * dq[6]
        out[1] = -lam * dq[6]
        out[2] = -lam * dq[6]
        out[3] = -mu * dq[7]
        out[4] = 0.0
        out[5] = -mu * dq[8]
        out[6] = -ir * dq[0]
        out[7] = -ir * dq[3]
        out[8] = -ir * dq[5]
    elif axis == 1:
        out[0] = -lam * dq[7]
        out[1] = -lp2m * dq[7]
        out[2] = -lam * dq[7]
        out[3] = -mu * dq[6]
        out[4] = -mu * dq[8]
        out[5] = 0.0
        out[6] = -ir * dq[3]
        out[7] = -ir * dq[1]
        out[8] = -ir * dq[4]
    else:
        out[0] = -lam * dq[8]
        out[1] = -lam * dq[8]
        out[2] = -lp2m * dq[8]
        out[3] = 0.0
        out[4] = -mu * dq[7]
        out[5] = -mu * dq[6]
        out[6] = -ir * dq[5]
        out[7] = -ir * dq[4]
        out[8] = -ir * dq[2]


@njit(cache=True, fastmath=True, parallel=True)
def face_pass_3d(q, axis, periodic, ncx, ncy, ncz,
                 gsign_lo, goff_lo, gsign_hi, goff_hi,
                 upwind_lo, upwind_hi, absb_lo, absb_hi,
                 G, Dm, Dp, w, e0, e1, lam, mu, rho, cp):
    """Face terms along one axis; face nodes indexed by the two other axes
    in (lower axis, higher axis) order.  Boundary faces may use the exact
    |B.n| upwind penalty (Godunov flux) instead of the Rusanov speed."""
    NV = 9
    n = w.shape[0]
    if axis == 0:
        nf = ncx if periodic else ncx + 1
        no1, no2 = ncy, ncz
        nax = ncx
    elif axis == 1:
        nf = ncy if periodic else ncy + 1
        no1, no2 = ncx, ncz
        nax = ncy
    else:
        nf = ncz if periodic else ncz + 1
        no1, no2 = ncx, ncy
        nax = ncz
    for f in prange(nf * no1 * no2):
        fx = f // (no1 * no2)
        rem = f % (no1 * no2)
        io1 = rem // no2
        io2 = rem % no2
        qm = np.empty(NV)
        qp = np.empty(NV)
        dq = np.empty(NV)
        bm = np.empty(NV)
        bp = np.empty(NV)
        if axis == 0:
            em = (((fx - 1) % ncx) * ncy + io1) * ncz + io2
            ep = ((fx % ncx) * ncy + io1) * ncz + io2
        elif axis == 1:
            em = (io1 * ncy + (fx - 1) % ncy) * ncz + io2
            ep = (io1 * ncy + fx % ncy) * ncz + io2
        else:
            em = (io1 * ncy + io2) * ncz + (fx - 1) % ncz
            ep = (io1 * ncy + io2) * ncz + fx % ncz
        has_m = periodic or fx > 0
        has_p = periodic or fx < nax
        lam_m = lam[em] if has_m else lam[ep]
        mu_m = mu[em] if has_m else mu[ep]
        ir_m = 1.0 / (rho[em] if has_m else rho[ep])
        lam_p = lam[ep] if has_p else lam[em]
        mu_p = mu[ep] if has_p else mu[em]
        ir_p = 1.0 / (rho[ep] if has_p else rho[em])
        s = max(cp[em] if has_m else 0.0, cp[ep] if has_p else 0.0)
        for jn in range(n):
            for kn in range(n):
                for v in range(NV):
                    G[fx, io1, io2, jn, kn, v] = 0.0
                    Dm[fx, io1, io2, jn, kn, v] = 0.0
                    Dp[fx, io1, io2, jn, kn, v] = 0.0
                for a in range(n):
                    for v in range(NV):
                        qm[v] = 0.0
                        qp[v] = 0.0
                    if has_m:
                        for i in range(n):
                            c1 = e1[i]
                            if axis == 0:
                                for v in range(NV):
                                    qm[v] += c1 * q[em, i, jn, kn, a, v]
                            elif axis == 1:
                                for v in range(NV):
                                    qm[v] += c1 * q[em, jn, i, kn, a, v]
                            else:
                                for v in range(NV):
                                    qm[v] += c1 * q[em, jn, kn, i, a, v]
                    if has_p:
                        for i in range(n):
                            c0 = e0[i]
                            if axis == 0:
                                for v in range(NV):
                                    qp[v] += c0 * q[ep, i, jn, kn, a, v]
                            elif axis == 1:
                                for v in range(NV):
                                    qp[v] += c0 * q[ep, jn, i, kn, a, v]
                            else:
                                for v in range(NV):
                                    qp[v] += c0 * q[ep, jn, kn, i, a, v]
                    if not has_m:
                        for v in range(NV):
                            qm[v] = gsign_lo[v] * qp[v] + goff_lo[io1, io2, jn, kn, a, v]
                    if not has_p:
                        for v in range(NV):
                            qp[v] = gsign_hi[v] * qm[v] + goff_hi[io1, io2, jn, kn, a, v]
                    for v in range(NV):
                        dq[v] = qp[v] - qm[v]
                    _bn_axis_3d(dq, axis, lam_m + 2 * mu_m, lam_m, mu_m, ir_m, bm)
                    _bn_axis_3d(dq, axis, lam_p + 2 * mu_p, lam_p, mu_p, ir_p, bp)
                    wa = w[a]
                    if (not has_m and upwind_lo) or (not has_p and upwind_hi):
                        AB = absb_lo if not has_m else absb_hi
                        for v in range(NV):
                            acc = 0.0
                            for u2 in range(NV):
                                acc += AB[io1, io2, v, u2] * dq[u2]
                            G[fx, io1, io2, jn, kn, v] += wa * (-0.5 * acc)
                    else:
                        for v in range(NV):
                            G[fx, io1, io2, jn, kn, v] += wa * (-0.5 * s * dq[v])
                    for v in range(NV):
                        Dm[fx, io1, io2, jn, kn, v] += wa * 0.5 * bm[v]
                        Dp[fx, io1, io2, jn, kn, v] += wa * 0.5 * bp[v]


@njit(cache=True, fastmath=True, parallel=True)
def assemble_3d(u, ri, Gx, Dmx, Dpx, Gy, Dmy, Dpy, Gz, Dmz, Dpz,
                periodic_x, periodic_y, periodic_z,
                ncx, ncy, ncz, dt, dx, dy, dz, w, e0, e1):
    E = u.shape[0]
    n = u.shape[1]
    NV = 9
    for e in prange(E):
        ix = e // (ncy * ncz)
        iy = (e // ncz) % ncy
        iz = e % ncz
        lfx = ix
        rfx = (ix + 1) % ncx if periodic_x else ix + 1
        bfy = iy
        tfy = (iy + 1) % ncy if periodic_y else iy + 1
        dfz = iz
        ufz = (iz + 1) % ncz if periodic_z else iz + 1
        for i in range(n):
            ci1 = dt / (dx * w[i]) * e1[i]
            ci0 = dt / (dx * w[i]) * e0[i]
            for j in range(n):
                cj1 = dt / (dy * w[j]) * e1[j]
                cj0 = dt / (dy * w[j]) * e0[j]
                for k in range(n):
                    ck1 = dt / (dz * w[k]) * e1[k]
                    ck0 = dt / (dz * w[k]) * e0[k]
                    for v in range(NV):
                        upd = 0.0
                        upd -= ci1 * (Gx[rfx, iy, iz, j, k, v]
                                      + Dmx[rfx, iy, iz, j, k, v])
                        upd -= ci0 * (-Gx[lfx, iy, iz, j, k, v]
                                      + Dpx[lfx, iy, iz, j, k, v])
                        upd -= cj1 * (Gy[tfy, ix, iz, i, k, v]
                                      + Dmy[tfy, ix, iz, i, k, v])
                        upd -= cj0 * (-Gy[bfy, ix, iz, i, k, v]
                                      + Dpy[bfy, ix, iz, i, k, v])
                        upd -= ck1 * (Gz[ufz, ix, iy, i, j, v]
                                      + Dmz[ufz, ix, iy, i, j, v])
                        upd -= ck0 * (-Gz[dfz, ix, iy, i, j, v]
                                      + Dpz[dfz, ix, iy, i, j, v])
                        upd -= dt * ri[e, i, j, k, v]
                        u[e, i, j, k, v] += upd


@njit(cache=True)
def eval_predictor_var_2d(q, cells, wx, wy, var, out):
    """Predictor polynomial of one variable at mapped points, all time nodes.

    q: (E, n, n, nt, V); cells: (P,) containing-element ids; wx, wy: (P, n)
    Lagrange basis values at the reference coordinates; out: (P, nt).
    """
    P = cells.shape[0]
    n = q.shape[1]
    nt = q.shape[3]
    for p in range(P):
        e = cells[p]
        for a in range(nt):
            acc = 0.0
            for i in range(n):
                wxi = wx[p, i]
                for j in range(n):
                    acc += wxi * wy[p, j] * q[e, i, j, a, var]
            out[p, a] = acc
