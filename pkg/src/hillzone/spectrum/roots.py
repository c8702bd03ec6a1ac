"""Periodic and antiperiodic eigenvalues as roots of ``F(lam) = +-2``.

Roots are counted with the argument principle on rectangles that tile
``[lam_floor, inf) x [-im_cap, im_cap]``; the numerical range of ``L_t``
guarantees every 2-periodic eigenvalue lies inside.  Each rectangle holding
one or two roots is solved locally from a Taylor expansion of
``G = F -+ 2`` whose coefficients come from an FFT of ``G`` sampled on a
circle (Cauchy's formula), which gives derivatives far more accurate than
finite differences along a line.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..errors import ContourFailure, NumberingAmbiguity
from ..floquet import discriminant
from ..parallel import pmap
from ..potential import PeriodicPotential
from .galerkin import assign_indices, galerkin_eigenvalues, reliable_max
from .types import (TOL_DOUBLE, TOL_REAL, Boundary, Classification, TwoPeriodicEigenvalue,
                    partner)

TOL_COUNT = 1e-9     # integrator tolerance while tracing contours
TOL_POLISH = 1e-11   # integrator tolerance for the local expansions
TAYLOR_POINTS = 16
KAPPA = 4.0          # safety factor on the double-root resolution
MAX_RETRIES = 5
MAX_DEPTH = 12
SIDE_DEPTH = 0.6     # horizontal contour sides at |Im lam| >= SIDE_DEPTH sqrt(lam)

log = logging.getLogger(__name__)


class _Touch(Exception):
    """The contour passed too close to a root."""


def _G(q, boundary: Boundary, tol):
    shift = 2.0 * boundary.sign

    def g(z):
        return discriminant(q, np.asarray(z, dtype=complex), tol, workers=1) - shift
    return g


def _wrap(a):
    return (a + np.pi) % (2 * np.pi) - np.pi


def _contour(g, x0: float, x1: float, y0: float, y1: float):
    """Winding number of ``g`` around the rectangle and the root mean.

    Returns ``(count, mean)``; ``mean`` is ``None`` when the count is 0.
    """
    corners = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)]
    pts = []
    for a, b, m in zip(corners, corners[1:] + corners[:1], (32, 8, 32, 8)):
        pts.extend(a + (b - a) * np.arange(m) / m)
    pts.append(corners[0])
    z = np.array(pts)
    v = g(z)
    scale = max(abs(x1 - x0), abs(y1 - y0))
    for _ in range(40):
        dphi = _wrap(np.diff(np.angle(v)))
        bad = np.nonzero(np.abs(dphi) > np.pi / 4)[0]
        if not len(bad):
            break
        if np.min(np.abs(z[bad + 1] - z[bad])) < 1e-10 * scale:
            raise _Touch()
        mids = 0.5 * (z[bad] + z[bad + 1])
        vm = g(mids)
        z = np.insert(z, bad + 1, mids)
        v = np.insert(v, bad + 1, vm)
    else:
        raise _Touch()
    if np.min(np.abs(v)) < 1e-7 * max(1.0, float(np.max(np.abs(v)))):
        raise _Touch()
    dlog = np.log(np.abs(v[1:]) / np.abs(v[:-1])) + 1j * _wrap(np.diff(np.angle(v)))
    wind = float(np.sum(dlog.imag)) / (2 * np.pi)
    count = int(round(wind))
    if abs(wind - count) > 0.1:
        raise _Touch()
    if count == 0:
        return 0, None
    zm = 0.5 * (z[1:] + z[:-1])
    return count, complex(np.sum(zm * dlog) / (2j * np.pi * count))


def _count(g, x0, x1, y0, y1, jitter: float):
    """Contour count with up to ``MAX_RETRIES`` perturbations of the
    vertical sides."""
    for k in range(MAX_RETRIES + 1):
        d = jitter * k * (1 if k % 2 else -1)
        try:
            return _contour(g, x0 + d, x1 + d, y0, y1), (x0 + d, x1 + d)
        except _Touch:
            continue
    raise ContourFailure(f"contour near roots in [{x0:.6g}, {x1:.6g}] after {MAX_RETRIES} retries")


def _taylor(g, z: complex, r: float, g_ref=None):
    """Taylor coefficients of ``g`` at ``z`` (first ``M/2``) and a noise estimate.

    The integration error is a smooth function of ``lam`` and so hides in
    the low-order coefficients; when ``g_ref`` (a tighter-tolerance twin)
    is given, the noise estimate includes the largest disagreement with it.
    """
    M = TAYLOR_POINTS
    w = r * np.exp(2j * np.pi * np.arange(M) / M)
    v = g(z + w)
    c = np.fft.fft(v) / M
    noise = math.sqrt(M) * float(np.sqrt(np.mean(np.abs(c[M // 2 + 1:]) ** 2)))
    if g_ref is not None:
        noise += 3.0 * float(np.max(np.abs(v - g_ref(z + w))))
    a = c[: M // 2] / r ** np.arange(M // 2)
    return a, max(noise, 1e-16)


def _local_roots(a, m: int):
    """The ``m`` roots of the Taylor polynomial nearest the expansion point."""
    coeffs = np.trim_zeros(a[::-1], "f")
    if len(coeffs) <= m:
        return None
    rts = np.roots(coeffs)
    return rts[np.argsort(np.abs(rts))][:m]


def _solve_local(g, z0: complex, m: int, scale: float, tol_double: float, g_ref=None):
    """Roots near ``z0``: list of ``(lam, multiplicity)`` or ``None`` on failure."""
    r = 0.5 * scale
    z = z0
    for _ in range(40):
        a, noise = _taylor(g, z, r)
        rts = _local_roots(a, m)
        if rts is None:
            return None
        shift = complex(np.mean(rts))
        if abs(shift) > r / 2:
            shift *= (r / 2) / abs(shift)
        z += shift
        if abs(shift) <= 1e-13 * (1 + abs(z)):
            break
        # shrink toward the roots once they are inside the disc
        if np.max(np.abs(rts)) < r / 4:
            r = max(min(r, 8 * float(np.max(np.abs(rts - shift)))), 1e-3 * scale)
    else:
        return None
    a, noise = _taylor(g, z, r, g_ref if m == 2 else None)
    rts = _local_roots(a, m)
    if rts is None:
        return None
    if m == 1:
        return [(z + complex(rts[0]), 1)]
    sep = abs(rts[0] - rts[1])
    res = 2.0 * math.sqrt(KAPPA * noise / max(abs(a[2]), 1e-300))
    if sep <= max(tol_double, res):
        return [(z + complex(np.mean(rts)), 2)]
    out = []
    for rt in rts:
        zr = z + complex(rt)
        rr = max(min(r, sep / 3), 1e-3 * scale)
        for _ in range(3):
            a1, _ = _taylor(g, zr, rr)
            step = _local_roots(a1, 1)
            if step is None:
                return None
            zr += complex(step[0])
            if abs(step[0]) <= 1e-13 * (1 + abs(zr)):
                break
        out.append((zr, 1))
    return out


def _inside(lam: complex, x0, x1, y0, y1, pad: float) -> bool:
    return x0 - pad <= lam.real <= x1 + pad and y0 - pad <= lam.imag <= y1 + pad


def _solve_rect(g_count, g_fine, g_ref, x0, x1, y0, y1, tol_double, depth=0, known=None):
    if depth > MAX_DEPTH:
        raise ContourFailure(f"root isolation did not converge in [{x0:.6g}, {x1:.6g}]")
    jitter = 1e-3 * (x1 - x0)
    if known is None:
        (m, mean), _ = _count(g_count, x0, x1, y0, y1, jitter)
    else:
        m, mean = known
    if m == 0:
        return []
    if m <= 2:
        scale = math.sqrt(max(abs(mean.real), 4.0))
        found = _solve_local(g_fine, mean, m, scale, tol_double, g_ref)
        if found is not None and sum(k for _, k in found) == m and all(
                _inside(lam, x0, x1, y0, y1, 1e-6 * (1 + abs(lam))) for lam, _ in found):
            return found
    # split along the real axis and recurse
    xm = 0.5 * (x0 + x1)
    for k in range(MAX_RETRIES + 1):
        xs = xm + jitter * k * (1 if k % 2 else -1)
        try:
            left = _contour(g_count, x0, xs, y0, y1)
            right = _contour(g_count, xs, x1, y0, y1)
        except _Touch:
            continue
        if left[0] + right[0] != m:
            continue
        return (_solve_rect(g_count, g_fine, g_ref, x0, xs, y0, y1, tol_double, depth + 1, left)
                + _solve_rect(g_count, g_fine, g_ref, xs, x1, y0, y1, tol_double, depth + 1, right))
    raise ContourFailure(f"could not split [{x0:.6g}, {x1:.6g}] consistently")


def _windows(boundary: Boundary, lam_floor: float, lambda_max: float):
    """Real-axis tiles: one per localization centre ``(2 pi n + t)^2``."""
    off = 0 if boundary is Boundary.PERIODIC else 1
    edges = [lam_floor]
    k = 0
    while True:
        c = ((2 * k + off) * math.pi) ** 2
        if k > 0 and c > lambda_max:
            break
        edges.append(((2 * k + off + 1) * math.pi) ** 2)
        k += 1
    return list(zip(edges[:-1], edges[1:]))


def classify(e: TwoPeriodicEigenvalue, cluster, tol_double: float = TOL_DOUBLE,
             tol_real: float = TOL_REAL, N_est: int | None = None) -> Classification:
    """SR, Double or Nonreal for ``e`` given its localization cluster."""
    cluster = list(cluster)
    if N_est is not None and abs(e.n) >= N_est and len(cluster) != 2:
        raise NumberingAmbiguity(e.n, e.boundary.t, len(cluster))
    others = [c for c in cluster if c.n != e.n]
    if e.multiplicity == 2 or any(abs(c.lam - e.lam) <= tol_double for c in others):
        return Classification.DOUBLE
    if abs(e.lam.imag) > tol_real:
        return Classification.NONREAL
    if any(abs(c.lam.imag) > tol_real for c in others):
        # a real eigenvalue whose partner is nonreal should not occur for
        # large n; record it instead of reclassifying
        log.warning("index %d (%s): real eigenvalue %s with nonreal partner",
                    e.n, e.boundary.value, e.lam)
    return Classification.SR


def _family(q, boundary, lambda_max, lam_floor, im_cap, tol_count, tol_polish,
            tol_double, workers, N_est):
    g_count = _G(q, boundary, tol_count)
    g_fine = _G(q, boundary, tol_polish)
    g_ref = _G(q, boundary, tol_polish / 10)
    wins = _windows(boundary, lam_floor, lambda_max)

    def solve(win):
        x0, x1 = win
        # Im sqrt(lam) on the horizontal sides must stay well above the
        # sample spacing in sqrt(lam), or near-real pairs alias away
        y = max(im_cap, SIDE_DEPTH * math.sqrt(max(x1, 1.0)))
        return _solve_rect(g_count, g_fine, g_ref, x0, x1, -y, y, tol_double)

    per_window = pmap(solve, wins, workers)
    if N_est is not None:
        for k, roots in enumerate(per_window):
            if k >= max(N_est, 1) and sum(m for _, m in roots) != 2:
                raise NumberingAmbiguity(k, boundary.t, sum(m for _, m in roots))
    flat = []
    for roots in per_window:
        for lam, m in roots:
            flat.extend([(lam, m)] * m)
    flat.sort(key=lambda p: (round(p[0].real, 9), p[0].imag))
    lams = [lam for lam, _ in flat]
    idx = assign_indices(lams)
    mult = {complex(lam): m for lam, m in flat}
    return [(n, lam, mult[lam]) for n, lam in idx.items()]


def two_periodic_roots(q: PeriodicPotential, lambda_max: float, tol_double: float = TOL_DOUBLE,
                       tol_real: float = TOL_REAL, tol_count: float = TOL_COUNT,
                       tol_polish: float = TOL_POLISH, workers=None,
                       N_est: int | None = None) -> list[TwoPeriodicEigenvalue]:
    """All periodic and antiperiodic eigenvalues up to ``lambda_max``.

    Every localization window whose centre is at most ``lambda_max`` is
    searched in full, so pairs are never split at the cut-off.  A pair whose
    separation is below ``tol_double`` or below the resolution allowed by the
    integration noise is returned as one eigenvalue of multiplicity 2,
    listed under both of its indices.
    """
    inf_re, sup_im = q.bounds()
    lam_floor = inf_re - 1.0
    im_cap = sup_im + 1.0
    out = []
    for boundary in (Boundary.PERIODIC, Boundary.ANTIPERIODIC):
        fam = _family(q, boundary, lambda_max, lam_floor, im_cap, tol_count, tol_polish,
                      tol_double, workers, N_est)
        raw = {n: TwoPeriodicEigenvalue(n, boundary, lam, m, Classification.SR)
               for n, lam, m in fam}
        for n, e in raw.items():
            p = partner(n, boundary)
            cluster = [e] + ([raw[p]] if p in raw and p != n else [])
            cls = classify(e, cluster, tol_double, tol_real)
            out.append(TwoPeriodicEigenvalue(n, boundary, e.lam, e.multiplicity, cls))
    return out


@dataclass(frozen=True)
class CrossCheck:
    max_defect: float
    defects: dict


def galerkin_cross_check(q: PeriodicPotential, roots, K: int = 64,
                         lam_cap: float = 500.0) -> CrossCheck:
    """Compare discriminant roots with the numbered Galerkin spectrum at the
    same quasimomentum, index by index, for ``|lam| <= lam_cap``."""
    defects = {}
    n_max = reliable_max(K)
    for boundary in (Boundary.PERIODIC, Boundary.ANTIPERIODIC):
        raw = galerkin_eigenvalues(q, boundary.t, K)
        s = raw[np.lexsort((raw.imag, raw.real))][: 2 * n_max + 1]
        gal = assign_indices(s)
        for e in roots:
            if e.boundary is boundary and abs(e.lam) <= lam_cap and e.n in gal:
                defects[(boundary.value, e.n)] = abs(e.lam - gal[e.n])
    worst = max(defects.values()) if defects else 0.0
    return CrossCheck(float(worst), defects)
