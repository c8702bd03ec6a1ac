# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dormand-Prince 5(4) integrator for the Hill monodromy.

Integrates the two fundamental solutions of ``-y'' + q y = lam y`` over
``[0, 1]`` for a batch of spectral parameters.  The potential is either a
trigonometric sum (``mode == 0``) or a piecewise polynomial in the local
variable ``x - breaks[i]`` (``mode == 1``).  Pieces are integrated one at a
time so the step controller never straddles a breakpoint.

The pure-Python twin lives in ``_kernels_py`` and must stay step-for-step
identical.
"""

from libc.math cimport cos, sin, sqrt, fabs, pow, M_PI

import numpy as np

cdef double A21 = 1.0 / 5.0
cdef double A31 = 3.0 / 40.0
cdef double A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0
cdef double A42 = -56.0 / 15.0
cdef double A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0
cdef double A52 = -25360.0 / 2187.0
cdef double A53 = 64448.0 / 6561.0
cdef double A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0
cdef double A62 = -355.0 / 33.0
cdef double A63 = 46732.0 / 5247.0
cdef double A64 = 49.0 / 176.0
cdef double A65 = -5103.0 / 18656.0
cdef double B1 = 35.0 / 384.0
cdef double B3 = 500.0 / 1113.0
cdef double B4 = 125.0 / 192.0
cdef double B5 = -2187.0 / 6784.0
cdef double B6 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0
cdef double E3 = -71.0 / 16695.0
cdef double E4 = 71.0 / 1920.0
cdef double E5 = -17253.0 / 339200.0
cdef double E6 = 22.0 / 525.0
cdef double E7 = -1.0 / 40.0
cdef double C2 = 1.0 / 5.0
cdef double C3 = 3.0 / 10.0
cdef double C4 = 4.0 / 5.0
cdef double C5 = 8.0 / 9.0

cdef int MAX_STEPS = 2000000


cdef inline double cabs_(double complex z) nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


cdef inline double complex eval_q(int mode, double x, int piece,
                                  const long[:] freqs,
                                  const double complex[:] fcoefs,
                                  const double[:] breaks,
                                  const double complex[:, :] pcoefs) nogil:
    cdef double complex acc = 0
    cdef Py_ssize_t k, deg
    cdef double arg, u
    if mode == 0:
        for k in range(freqs.shape[0]):
            arg = 2.0 * M_PI * freqs[k] * x
            acc = acc + fcoefs[k] * (cos(arg) + 1j * sin(arg))
        return acc
    u = x - breaks[piece]
    deg = pcoefs.shape[1] - 1
    acc = pcoefs[piece, deg]
    for k in range(deg - 1, -1, -1):
        acc = acc * u + pcoefs[piece, k]
    return acc


cdef int integrate_one(int mode, double complex lam, double tol,
                       const long[:] freqs, const double complex[:] fcoefs,
                       const double[:] breaks, const double complex[:, :] pcoefs,
                       double complex* out, double* est, double* xfail) nogil:
    # state: y0 = theta, y1 = theta', y2 = phi, y3 = phi'
    cdef double complex y[4]
    cdef double complex yn[4]
    cdef double complex k1[4]
    cdef double complex k2[4]
    cdef double complex k3[4]
    cdef double complex k4[4]
    cdef double complex k5[4]
    cdef double complex k6[4]
    cdef double complex k7[4]
    cdef double complex tmp[4]
    cdef double complex w
    cdef double x, a, b, h, hmin, err, e, sc, fac, total_err
    cdef Py_ssize_t piece, npieces, i
    cdef int steps = 0
    cdef double sq = sqrt(cabs_(lam))

    y[0] = 1.0
    y[1] = 0.0
    y[2] = 0.0
    y[3] = 1.0
    total_err = 0.0
    npieces = breaks.shape[0] - 1
    h = 0.1 / (1.0 + sq)

    for piece in range(npieces):
        a = breaks[piece]
        b = breaks[piece + 1]
        x = a
        if h > b - a:
            h = b - a
        hmin = 1e-14 * (b - a)
        w = eval_q(mode, x, piece, freqs, fcoefs, breaks, pcoefs) - lam
        k1[0] = y[1]; k1[1] = w * y[0]; k1[2] = y[3]; k1[3] = w * y[2]
        while x < b:
            if x + h >= b or b - (x + h) < 1e-12 * (b - a):
                h = b - x
            for i in range(4):
                tmp[i] = y[i] + h * A21 * k1[i]
            w = eval_q(mode, x + C2 * h, piece, freqs, fcoefs, breaks, pcoefs) - lam
            k2[0] = tmp[1]; k2[1] = w * tmp[0]; k2[2] = tmp[3]; k2[3] = w * tmp[2]
            for i in range(4):
                tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i])
            w = eval_q(mode, x + C3 * h, piece, freqs, fcoefs, breaks, pcoefs) - lam
            k3[0] = tmp[1]; k3[1] = w * tmp[0]; k3[2] = tmp[3]; k3[3] = w * tmp[2]
            for i in range(4):
                tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i])
            w = eval_q(mode, x + C4 * h, piece, freqs, fcoefs, breaks, pcoefs) - lam
            k4[0] = tmp[1]; k4[1] = w * tmp[0]; k4[2] = tmp[3]; k4[3] = w * tmp[2]
            for i in range(4):
                tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
            w = eval_q(mode, x + C5 * h, piece, freqs, fcoefs, breaks, pcoefs) - lam
            k5[0] = tmp[1]; k5[1] = w * tmp[0]; k5[2] = tmp[3]; k5[3] = w * tmp[2]
            for i in range(4):
                tmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i]
                                     + A64 * k4[i] + A65 * k5[i])
            w = eval_q(mode, x + h, piece, freqs, fcoefs, breaks, pcoefs) - lam
            k6[0] = tmp[1]; k6[1] = w * tmp[0]; k6[2] = tmp[3]; k6[3] = w * tmp[2]
            for i in range(4):
                yn[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i]
                                    + B5 * k5[i] + B6 * k6[i])
            # w still holds q(x + h) - lam
            k7[0] = yn[1]; k7[1] = w * yn[0]; k7[2] = yn[3]; k7[3] = w * yn[2]

            err = 0.0
            for i in range(4):
                e = cabs_(h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i]
                               + E6 * k6[i] + E7 * k7[i]))
                sc = cabs_(y[i])
                if cabs_(yn[i]) > sc:
                    sc = cabs_(yn[i])
                e = e / (tol * (1.0 + sc))
                if e > err:
                    err = e
            steps += 1
            if steps > MAX_STEPS:
                xfail[0] = x
                return 2
            # error per unit step: accept when err <= h
            if err <= h:
                x = x + h
                total_err += err * tol
                for i in range(4):
                    y[i] = yn[i]
                    k1[i] = k7[i]
                if err == 0.0:
                    fac = 5.0
                else:
                    fac = 0.9 * pow(h / err, 0.25)
                    if fac > 5.0:
                        fac = 5.0
                    if fac < 0.2:
                        fac = 0.2
            else:
                fac = 0.9 * pow(h / err, 0.25)
                if fac < 0.1:
                    fac = 0.1
                if fac > 0.9:
                    fac = 0.9
            h = h * fac
            if h < hmin and x < b:
                xfail[0] = x
                return 1
    for i in range(4):
        out[i] = y[i]
    est[0] = total_err
    return 0


def monodromy_batch(int mode, const double complex[:] lams, double tol,
                    const long[:] freqs, const double complex[:] fcoefs,
                    const double[:] breaks, const double complex[:, :] pcoefs):
    """Integrate the fundamental system for every entry of ``lams``.

    Returns ``(values, est, status, xfail)`` where ``values[j]`` holds
    ``theta(1), theta'(1), phi(1), phi'(1)`` and ``status[j]`` is 0 on
    success, 1 on step-size underflow and 2 on step-count exhaustion.
    """
    cdef Py_ssize_t n = lams.shape[0]
    values = np.zeros((n, 4), dtype=np.complex128)
    est = np.zeros(n, dtype=np.float64)
    status = np.zeros(n, dtype=np.int32)
    xfail = np.zeros(n, dtype=np.float64)
    cdef double complex[:, ::1] vv = values
    cdef double[::1] ev = est
    cdef int[::1] sv = status
    cdef double[::1] xv = xfail
    cdef Py_ssize_t j
    with nogil:
        for j in range(n):
            sv[j] = integrate_one(mode, lams[j], tol, freqs, fcoefs, breaks, pcoefs,
                                  &vv[j, 0], &ev[j], &xv[j])
    return values, est, status, xfail
