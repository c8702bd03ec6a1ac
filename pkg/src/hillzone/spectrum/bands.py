"""Band curves ``Gamma_n = {lam_n(t) : 0 <= t <= pi}`` and their real parts."""

from __future__ import annotations

import math

import numpy as np

from ..errors import CoalescenceNotFound
from ..parallel import pmap
from ..potential import PeriodicPotential
from .galerkin import estimate_horizon, galerkin_eigenvalues, number_eigenvalues, reliable_max
from .types import TOL_REAL, BandCurve, Boundary, RealInterval, partner

T_BISECT = 1e-10


def default_truncation(q: PeriodicPotential, N: int) -> int:
    """``max(64, 3N + 6)``, capped so that sampled data stay within bandwidth."""
    K = max(64, 3 * N + 6)
    if q.bandwidth is not None:
        K = min(K, q.bandwidth // 2)
    return K


class BlochSweep:
    """Numbered Galerkin spectra of ``L_t`` on a uniform grid over ``[0, pi]``.

    Spectra at distinct ``t`` are computed concurrently.  ``N_est`` is the
    smallest index from which every localization disc on the grid holds the
    expected number of eigenvalues.
    """

    def __init__(self, q: PeriodicPotential, K: int = 64, grid_size: int = 128,
                 tol_real: float = TOL_REAL, workers=None):
        if grid_size < 64:
            raise ValueError("grid_size must be at least 64")
        self.q = q
        self.K = K
        self.tol_real = tol_real
        self.n_max = reliable_max(K)
        self.t = np.linspace(0.0, math.pi, grid_size)
        raws = pmap(lambda t: galerkin_eigenvalues(q, t, K), self.t, workers)
        self.N_est = estimate_horizon(zip(self.t, raws), self.n_max)
        self._numbered = [number_eigenvalues(r, t, self.N_est, self.n_max, tol_real)
                          for t, r in zip(self.t, raws)]
        self._extra = {}
        self._transitions = {}

    def at(self, t: float) -> dict[int, complex]:
        """Numbered spectrum at an arbitrary ``t`` (cached)."""
        t = float(t)
        if t not in self._extra:
            raw = galerkin_eigenvalues(self.q, t, self.K)
            self._extra[t] = number_eigenvalues(raw, t, self.N_est, self.n_max, self.tol_real)
        return self._extra[t]

    def band(self, n: int) -> np.ndarray:
        if abs(n) > self.n_max:
            raise ValueError(f"index {n} beyond reliable range {self.n_max} for K={self.K}")
        return np.array([spec[n] for spec in self._numbered])

    def _is_real(self, lam: complex) -> bool:
        return abs(lam.imag) <= self.tol_real

    def transition(self, n: int, side: Boundary, t_nonreal: float, t_real: float):
        """Bisect for the point where ``lam_n`` reaches the real axis.

        Returns ``(t*, value)``.  When the band collides with its partner
        there (the coalescence of a conjugate pair), ``value`` is the mean
        of the pair, which is well conditioned where each member is not.
        """
        p = partner(n, side)
        key = (side, frozenset((n, p)), round(t_nonreal, 12), round(t_real, 12))
        if key in self._transitions:
            return self._transitions[key]
        lo, hi = t_nonreal, t_real
        lam_lo = self.at(lo)
        collide = p in lam_lo and abs(lam_lo[p] - np.conj(lam_lo[n])) <= 0.5 * abs(lam_lo[n].imag)
        if self._is_real(lam_lo[n]) or not self._is_real(self.at(hi)[n]):
            raise CoalescenceNotFound(n)
        for _ in range(80):
            if abs(hi - lo) <= T_BISECT:
                break
            mid = 0.5 * (lo + hi)
            if self._is_real(self.at(mid)[n]):
                hi = mid
            else:
                lo = mid
        else:
            raise CoalescenceNotFound(n)
        spec = self.at(hi)
        if collide and p in spec:
            value = 0.5 * (spec[n] + spec[p]).real
        else:
            value = spec[n].real
        self._transitions[key] = (hi, float(value))
        return hi, float(value)


def _band_from_sweep(sweep: BlochSweep, n: int) -> BandCurve:
    t = sweep.t
    vals = sweep.band(n)
    real = np.abs(vals.imag) <= sweep.tol_real
    e0, epi = complex(vals[0]), complex(vals[-1])
    if not real.any():
        return BandCurve(n, tuple(t), tuple(vals), e0, epi, RealInterval.empty())
    idx = np.nonzero(real)[0]
    i0, i1 = int(idx[0]), int(idx[-1])
    picks = [v.real for v in vals[i0:i1 + 1][real[i0:i1 + 1]]]
    eps = delta = None
    if i0 == 0:
        t_lo = 0.0
    else:
        t_lo, v = sweep.transition(n, Boundary.PERIODIC, t[i0 - 1], t[i0])
        picks.append(v)
        eps = t_lo
    if i1 == len(t) - 1:
        t_hi = math.pi
    else:
        t_hi, v = sweep.transition(n, Boundary.ANTIPERIODIC, t[i1 + 1], t[i1])
        picks.append(v)
        delta = t_hi
    A, B = float(min(picks)), float(max(picks))
    if B - A <= 1e-12 * max(1.0, abs(A)):
        interval = RealInterval("point", A, A)
    else:
        interval = RealInterval("interval", A, B)
    # a_n / b_n follow the orientation of the band: A_n is reached at a_n
    if n >= 0:
        a_n, b_n = t_lo, t_hi
    else:
        a_n, b_n = t_hi, t_lo
    return BandCurve(n, tuple(t), tuple(complex(v) for v in vals), e0, epi, interval,
                     a_n, b_n, eps, delta)


def trace_band(q: PeriodicPotential, n: int, grid_size: int = 128, K: int = 64,
               sweep: BlochSweep | None = None) -> BandCurve:
    """Sample ``lam_n(t)`` on a uniform grid and extract ``Re(Gamma_n)``.

    The real interval is ``[lam_n(a_n), lam_n(b_n)]`` where ``a_n``/``b_n``
    are found by bisection on the grid cells where ``|Im lam_n|`` crosses
    ``tol_real``.  ``epsilon``/``delta`` record the coalescence points when
    ``lam_n(0)``/``lam_n(pi)`` is nonreal.
    """
    if sweep is None:
        sweep = BlochSweep(q, K, grid_size)
    return _band_from_sweep(sweep, n)


def trace_bands(sweep: BlochSweep, indices) -> dict[int, BandCurve]:
    return {n: _band_from_sweep(sweep, n) for n in indices}
