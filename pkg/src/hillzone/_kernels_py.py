"""Pure-Python twin of the compiled monodromy kernel.

Same Dormand-Prince 5(4) tableau, same step controller and same return
layout as ``_kernels.monodromy_batch``; used when the extension is not built
or when ``HILLZONE_PURE=1`` is set.
"""

import math

import numpy as np

A21 = 1.0 / 5.0
A31, A32 = 3.0 / 40.0, 9.0 / 40.0
A41, A42, A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
A51, A52, A53, A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
A61, A62, A63, A64, A65 = (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0,
                           49.0 / 176.0, -5103.0 / 18656.0)
B1, B3, B4, B5, B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
E1, E3, E4, E5, E6, E7 = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0,
                          -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)
C2, C3, C4, C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0

MAX_STEPS = 2_000_000


def _make_eval(mode, freqs, fcoefs, breaks, pcoefs):
    if mode == 0:
        terms = [(2.0 * math.pi * int(k), complex(c)) for k, c in zip(freqs, fcoefs)]

        def q(x, piece):
            acc = 0j
            for w, c in terms:
                arg = w * x
                acc += c * complex(math.cos(arg), math.sin(arg))
            return acc
        return q

    rows = [[complex(c) for c in row] for row in np.asarray(pcoefs)]
    starts = [float(b) for b in breaks]

    def q(x, piece):
        row = rows[piece]
        u = x - starts[piece]
        acc = row[-1]
        for c in reversed(row[:-1]):
            acc = acc * u + c
        return acc
    return q


def _integrate_one(q, lam, tol, breaks):
    y0, y1, y2, y3 = 1.0 + 0j, 0j, 0j, 1.0 + 0j
    total_err = 0.0
    steps = 0
    h = 0.1 / (1.0 + math.sqrt(abs(lam)))
    for piece in range(len(breaks) - 1):
        a, b = float(breaks[piece]), float(breaks[piece + 1])
        x = a
        h = min(h, b - a)
        hmin = 1e-14 * (b - a)
        w = q(x, piece) - lam
        k1 = (y1, w * y0, y3, w * y2)
        while x < b:
            if x + h >= b or b - (x + h) < 1e-12 * (b - a):
                h = b - x
            t = [y0 + h * A21 * k1[0], y1 + h * A21 * k1[1],
                 y2 + h * A21 * k1[2], y3 + h * A21 * k1[3]]
            w = q(x + C2 * h, piece) - lam
            k2 = (t[1], w * t[0], t[3], w * t[2])
            y = (y0, y1, y2, y3)
            t = [y[i] + h * (A31 * k1[i] + A32 * k2[i]) for i in range(4)]
            w = q(x + C3 * h, piece) - lam
            k3 = (t[1], w * t[0], t[3], w * t[2])
            t = [y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]) for i in range(4)]
            w = q(x + C4 * h, piece) - lam
            k4 = (t[1], w * t[0], t[3], w * t[2])
            t = [y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
                 for i in range(4)]
            w = q(x + C5 * h, piece) - lam
            k5 = (t[1], w * t[0], t[3], w * t[2])
            t = [y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i]
                             + A65 * k5[i]) for i in range(4)]
            w = q(x + h, piece) - lam
            k6 = (t[1], w * t[0], t[3], w * t[2])
            yn = [y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i])
                  for i in range(4)]
            k7 = (yn[1], w * yn[0], yn[3], w * yn[2])

            err = 0.0
            for i in range(4):
                e = abs(h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i]
                             + E6 * k6[i] + E7 * k7[i]))
                sc = max(abs(y[i]), abs(yn[i]))
                err = max(err, e / (tol * (1.0 + sc)))
            steps += 1
            if steps > MAX_STEPS:
                return None, 0.0, 2, x
            if err <= h:
                x += h
                total_err += err * tol
                y0, y1, y2, y3 = yn
                k1 = k7
                fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * (h / err) ** 0.25))
            else:
                fac = min(0.9, max(0.1, 0.9 * (h / err) ** 0.25))
            h *= fac
            if h < hmin and x < b:
                return None, 0.0, 1, x
    return (y0, y1, y2, y3), total_err, 0, 0.0


def monodromy_batch(mode, lams, tol, freqs, fcoefs, breaks, pcoefs):
    """Python implementation of ``_kernels.monodromy_batch``."""
    q = _make_eval(mode, freqs, fcoefs, breaks, pcoefs)
    n = len(lams)
    values = np.zeros((n, 4), dtype=np.complex128)
    est = np.zeros(n)
    status = np.zeros(n, dtype=np.int32)
    xfail = np.zeros(n)
    for j, lam in enumerate(lams):
        vals, e, st, xf = _integrate_one(q, complex(lam), tol, breaks)
        status[j] = st
        xfail[j] = xf
        if st == 0:
            values[j] = vals
            est[j] = e
    return values, est, status, xfail
