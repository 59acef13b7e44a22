"""Numba time-stepping kernels.

The interior loops are branch-free so they vectorise; the CPML psi recursion
runs only over the boundary strips, whose index ranges are passed in.  Raw
(undivided) field differences are used; the psi recursion is linear, so the
1/dx factor folds into the update coefficients.  Conductors are encoded as
cb == 0 (the field there starts at zero and stays zero).  All updates are
element-wise: results are bit-identical regardless of worker-thread count.
"""

import numba as nb


@nb.njit(cache=True, parallel=True)
def update_h(ez, hx, hy, psi_hx, psi_hy, bh_x, ch_x, bh_y, ch_y, hcoef,
             jlo, jhi):
    nx, ny = ez.shape
    for i in nb.prange(nx):
        for j in range(jlo):
            d = ez[i, j + 1] - ez[i, j]
            p = bh_y[j] * psi_hx[i, j] + ch_y[j] * d
            psi_hx[i, j] = p
            hx[i, j] -= hcoef * (d + p)
        for j in range(jlo, jhi):
            hx[i, j] -= hcoef * (ez[i, j + 1] - ez[i, j])
        for j in range(jhi, ny - 1):
            d = ez[i, j + 1] - ez[i, j]
            p = bh_y[j] * psi_hx[i, j] + ch_y[j] * d
            psi_hx[i, j] = p
            hx[i, j] -= hcoef * (d + p)
    for i in nb.prange(nx - 1):
        if ch_x[i] != 0.0:
            for j in range(ny):
                d = ez[i + 1, j] - ez[i, j]
                p = bh_x[i] * psi_hy[i, j] + ch_x[i] * d
                psi_hy[i, j] = p
                hy[i, j] += hcoef * (d + p)
        else:
            for j in range(ny):
                hy[i, j] += hcoef * (ez[i + 1, j] - ez[i, j])


@nb.njit(cache=True, parallel=True)
def update_e(ez, hx, hy, psi_ex, psi_ey, be_x, ce_x, be_y, ce_y, cb,
             jlo, jhi):
    nx, ny = ez.shape
    for i in nb.prange(1, nx - 1):
        xpml = ce_x[i] != 0.0
        for j in range(1, jlo):
            dhy = hy[i, j] - hy[i - 1, j]
            dhx = hx[i, j] - hx[i, j - 1]
            if xpml:
                p = be_x[i] * psi_ex[i, j] + ce_x[i] * dhy
                psi_ex[i, j] = p
                dhy += p
            p = be_y[j] * psi_ey[i, j] + ce_y[j] * dhx
            psi_ey[i, j] = p
            dhx += p
            ez[i, j] += cb[i, j] * (dhy - dhx)
        if xpml:
            for j in range(jlo, jhi):
                dhy = hy[i, j] - hy[i - 1, j]
                dhx = hx[i, j] - hx[i, j - 1]
                p = be_x[i] * psi_ex[i, j] + ce_x[i] * dhy
                psi_ex[i, j] = p
                ez[i, j] += cb[i, j] * (dhy + p - dhx)
        else:
            for j in range(jlo, jhi):
                ez[i, j] += cb[i, j] * ((hy[i, j] - hy[i - 1, j])
                                        - (hx[i, j] - hx[i, j - 1]))
        for j in range(jhi, ny - 1):
            dhy = hy[i, j] - hy[i - 1, j]
            dhx = hx[i, j] - hx[i, j - 1]
            if xpml:
                p = be_x[i] * psi_ex[i, j] + ce_x[i] * dhy
                psi_ex[i, j] = p
                dhy += p
            p = be_y[j] * psi_ey[i, j] + ce_y[j] * dhx
            psi_ey[i, j] = p
            dhx += p
            ez[i, j] += cb[i, j] * (dhy - dhx)


@nb.njit(cache=True, parallel=True)
def update_e_lossy(ez, hx, hy, psi_ex, psi_ey, be_x, ce_x, be_y, ce_y, ca, cb,
                   jlo, jhi):
    nx, ny = ez.shape
    for i in nb.prange(1, nx - 1):
        xpml = ce_x[i] != 0.0
        for j in range(1, jlo):
            dhy = hy[i, j] - hy[i - 1, j]
            dhx = hx[i, j] - hx[i, j - 1]
            if xpml:
                p = be_x[i] * psi_ex[i, j] + ce_x[i] * dhy
                psi_ex[i, j] = p
                dhy += p
            p = be_y[j] * psi_ey[i, j] + ce_y[j] * dhx
            psi_ey[i, j] = p
            dhx += p
            ez[i, j] = ca[i, j] * ez[i, j] + cb[i, j] * (dhy - dhx)
        if xpml:
            for j in range(jlo, jhi):
                dhy = hy[i, j] - hy[i - 1, j]
                dhx = hx[i, j] - hx[i, j - 1]
                p = be_x[i] * psi_ex[i, j] + ce_x[i] * dhy
                psi_ex[i, j] = p
                ez[i, j] = ca[i, j] * ez[i, j] + cb[i, j] * (dhy + p - dhx)
        else:
            for j in range(jlo, jhi):
                ez[i, j] = (ca[i, j] * ez[i, j]
                            + cb[i, j] * ((hy[i, j] - hy[i - 1, j])
                                          - (hx[i, j] - hx[i, j - 1])))
        for j in range(jhi, ny - 1):
            dhy = hy[i, j] - hy[i - 1, j]
            dhx = hx[i, j] - hx[i, j - 1]
            if xpml:
                p = be_x[i] * psi_ex[i, j] + ce_x[i] * dhy
                psi_ex[i, j] = p
                dhy += p
            p = be_y[j] * psi_ey[i, j] + ce_y[j] * dhx
            psi_ey[i, j] = p
            dhx += p
            ez[i, j] = ca[i, j] * ez[i, j] + cb[i, j] * (dhy - dhx)


@nb.njit(cache=True, parallel=True)
def accumulate_dft(ez, acc_re, acc_im, cosw, sinw):
    nx, ny = ez.shape
    for i in nb.prange(nx):
        for j in range(ny):
            v = ez[i, j]
            acc_re[i, j] += v * cosw
            acc_im[i, j] -= v * sinw


@nb.njit(cache=True, parallel=True)
def track_peak(ez, peak):
    nx, ny = ez.shape
    for i in nb.prange(nx):
        for j in range(ny):
            a = abs(ez[i, j])
            peak[i, j] = max(peak[i, j], a)
