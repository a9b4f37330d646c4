# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_kernels_py`` for the reference semantics.

Every output entry is accumulated in a fixed loop order, so results do not
depend on BLAS threading.
"""

import numpy as np
from cython.parallel cimport prange
from libc.math cimport exp, fabs


def bilinear_contract(c, phi):
    cdef const double complex[:, ::1] cv = np.ascontiguousarray(c, dtype=np.complex128)
    cdef const double[:, :, ::1] ph = np.ascontiguousarray(phi, dtype=np.float64)
    cdef Py_ssize_t n = cv.shape[0], m = cv.shape[1], kk = ph.shape[1]
    if ph.shape[0] != m or ph.shape[2] != m:
        raise ValueError("kernel table shape does not match coefficients")
    out = np.zeros((n, kk), dtype=np.complex128)
    cdef double complex[:, ::1] ov = out
    cdef Py_ssize_t i, k, p, q
    cdef double acc_re, acc_im, in_re, in_im, pre, pim, w
    # rows are independent; each entry keeps a fixed summation order.
    # Parts are split by hand: complex*real products otherwise go through __muldc3.
    for i in prange(n, nogil=True, schedule="static"):
        for k in range(kk):
            acc_re = 0.0
            acc_im = 0.0
            for p in range(m):
                pre = cv[i, p].real
                pim = cv[i, p].imag
                if pre == 0.0 and pim == 0.0:
                    continue
                in_re = 0.0
                in_im = 0.0
                for q in range(m):
                    w = ph[p, k, q]
                    in_re = in_re + cv[i, q].real * w
                    in_im = in_im - cv[i, q].imag * w
                acc_re = acc_re + (pre * in_re - pim * in_im)
                acc_im = acc_im + (pre * in_im + pim * in_re)
            ov[i, k].real = acc_re
            ov[i, k].imag = acc_im
    return out


def choi_williams_table(lam, double gamma, double tol):
    cdef const double[::1] lv = np.ascontiguousarray(lam, dtype=np.float64)
    cdef Py_ssize_t n = lv.shape[0]
    table = np.zeros((n, n, n), dtype=np.float64)
    cdef double[:, :, ::1] t = table
    cdef Py_ssize_t p, k, q
    cdef double dpq, s, v
    # slices p are written by one task each
    for p in prange(n, nogil=True, schedule="static"):
        for q in range(n):
            dpq = fabs(lv[p] - lv[q])
            if dpq <= tol:
                t[p, q, q] = 1.0
                continue
            s = 0.0
            for k in range(n):
                v = exp(-gamma * fabs(lv[k] - lv[q]) / dpq)
                t[p, k, q] = v
                s = s + v
            for k in range(n):
                t[p, k, q] = t[p, k, q] / s
    return table


def gfed_hat_moments(x, noise, fa, ua_conj, uh):
    cdef const double complex[::1] xv = np.ascontiguousarray(x, dtype=np.complex128)
    cdef const double complex[:, ::1] wv = np.ascontiguousarray(noise, dtype=np.complex128)
    cdef const double complex[:, ::1] uac = np.ascontiguousarray(ua_conj, dtype=np.complex128)
    cdef const double complex[:, ::1] uhv = np.ascontiguousarray(uh, dtype=np.complex128)
    cdef Py_ssize_t n = xv.shape[0], draws = wv.shape[0]
    # per-draw signals and conjugated transforms; one small matmul for all draws
    ys = np.asarray(xv)[None, :] + np.asarray(wv)
    cdef const double complex[:, ::1] y = np.ascontiguousarray(ys)
    cdef const double complex[:, ::1] yhc = np.ascontiguousarray((ys @ np.asarray(fa).T).conj())
    s1 = np.zeros((n, n), dtype=np.complex128)
    s2 = np.zeros((n, n), dtype=np.float64)
    s4 = np.zeros((n, n), dtype=np.float64)
    cdef double complex[:, ::1] s1v = s1
    cdef double[:, ::1] s2v = s2
    cdef double[:, ::1] s4v = s4
    # row l of the scratch buffers belongs to the task handling output row l
    cdef double[:, ::1] zr = np.empty((n, n))
    cdef double[:, ::1] zi = np.empty((n, n))
    cdef Py_ssize_t d, i, k, l
    cdef double cr, ci, ur, ui, er, ei, a2
    # Ehat[l, k] = yhc[k] * sum_i (uh[l, i] y[i]) ua_conj[i, k]; each output
    # row is one task with a fixed summation order, so threading is deterministic.
    # Real and imaginary parts are split by hand to avoid __muldc3.
    for l in prange(n, nogil=True, schedule="static"):
        for d in range(draws):
            for k in range(n):
                zr[l, k] = 0.0
                zi[l, k] = 0.0
            for i in range(n):
                cr = uhv[l, i].real * y[d, i].real - uhv[l, i].imag * y[d, i].imag
                ci = uhv[l, i].real * y[d, i].imag + uhv[l, i].imag * y[d, i].real
                for k in range(n):
                    ur = uac[i, k].real
                    ui = uac[i, k].imag
                    zr[l, k] = zr[l, k] + (cr * ur - ci * ui)
                    zi[l, k] = zi[l, k] + (cr * ui + ci * ur)
            for k in range(n):
                er = zr[l, k] * yhc[d, k].real - zi[l, k] * yhc[d, k].imag
                ei = zr[l, k] * yhc[d, k].imag + zi[l, k] * yhc[d, k].real
                a2 = er * er + ei * ei
                s1v[l, k].real = s1v[l, k].real + er
                s1v[l, k].imag = s1v[l, k].imag + ei
                s2v[l, k] = s2v[l, k] + a2
                s4v[l, k] = s4v[l, k] + a2 * a2
    return s1, s2, s4
