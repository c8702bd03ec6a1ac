"""Fourier-Galerkin discretization of ``L_t`` and eigenvalue numbering."""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import toeplitz

from ..errors import NumberingAmbiguity, NumericsError
from ..potential import PeriodicPotential
from .types import H_LOCAL, TOL_REAL, center, order_index


def galerkin_matrix(q: PeriodicPotential, t: float, K: int) -> np.ndarray:
    """``(2K+1)``-square matrix of ``L_t`` in the basis ``exp(i(2 pi k + t)x)``.

    Entry ``(k, m)`` is ``(2 pi k + t)^2 delta_km + q_{k-m}``.
    """
    if K < 8:
        raise ValueError("truncation K must be at least 8")
    key = ("toeplitz", K)
    if key not in q._cache:
        c = q.coefficients(np.arange(0, 2 * K + 1))
        r = q.coefficients(-np.arange(0, 2 * K + 1))
        q._cache[key] = toeplitz(c, r)
    H = q._cache[key].copy()
    k = np.arange(-K, K + 1)
    H[np.diag_indices_from(H)] += (2.0 * math.pi * k + t) ** 2
    return H


def galerkin_eigenvalues(q: PeriodicPotential, t: float, K: int) -> np.ndarray:
    """Unsorted eigenvalues of the truncated ``L_t``.

    Roughly the central ``2K/3`` of them (indices ``|n| <= K // 3``) are
    trustworthy; the accuracy follows the decay of ``q_n`` beyond ``K``.
    """
    try:
        return np.linalg.eigvals(galerkin_matrix(q, t, K))
    except np.linalg.LinAlgError as exc:
        raise NumericsError(f"eigensolver failed at t={t}: {exc}") from exc


def reliable_max(K: int) -> int:
    return K // 3


def _is_conjugate_pair(a: complex, b: complex, tol_real: float) -> bool:
    if min(abs(a.imag), abs(b.imag)) <= tol_real or a.imag * b.imag >= 0:
        return False
    im = max(abs(a.imag), abs(b.imag))
    return (abs(a.real - b.real) <= max(1e-9 * (1 + abs(a.real)), 0.5 * im)
            and abs(a.imag + b.imag) <= 0.5 * im)


def _half_gap(m: int, t: float) -> float:
    """Half the distance from ``(2 pi m + t)^2`` to the nearest other centre."""
    c = center(m, t)
    near = {j for k in (m, -m) for j in range(k - 2, k + 3)} - {m}
    return 0.5 * min(abs(c - center(j, t)) for j in near)


def localization_failures(raw, t: float, n_lo: int, n_hi: int) -> dict[int, int]:
    """Indices ``n`` in ``[n_lo, n_hi]`` whose localization discs hold the
    wrong number of eigenvalues.

    For ``t`` within ``h`` of 0 or pi the disc of radius ``n`` around
    ``(2 pi n + t)^2`` must hold exactly two; in between, the discs of
    half-gap radius around ``(2 pi n + t)^2`` and ``(2 pi n - t)^2`` must
    each hold exactly one.
    """
    lam = np.asarray(raw)
    bad = {}
    edge = t <= H_LOCAL or t >= math.pi - H_LOCAL
    for n in range(max(1, n_lo), n_hi + 1):
        if edge:
            cnt = int(np.count_nonzero(np.abs(lam - center(n, t)) < n))
            if cnt != 2:
                bad[n] = cnt
            continue
        for m in (n, -n):
            cnt = int(np.count_nonzero(np.abs(lam - center(m, t)) < _half_gap(m, t)))
            if cnt != 1:
                bad[n] = cnt
                break
    return bad


def assign_indices(values, tol_real: float = TOL_REAL) -> dict[int, complex]:
    """Index values already sorted by real part as ``0, -1, 1, -2, 2, ...``,
    giving the member with positive imaginary part of a conjugate pair the
    non-negative index."""
    s = [complex(v) for v in values]
    p = 0
    while p < len(s) - 1:
        a, b = s[p], s[p + 1]
        if _is_conjugate_pair(a, b, tol_real):
            if (a.imag > 0) != (order_index(p) >= 0):
                s[p], s[p + 1] = b, a
            p += 2
        else:
            p += 1
    return {order_index(i): v for i, v in enumerate(s)}


def number_eigenvalues(raw, t: float, N_est: int, n_max: int | None = None,
                       tol_real: float = TOL_REAL) -> dict[int, complex]:
    """Assign band indices to raw Galerkin eigenvalues at quasimomentum ``t``.

    Eigenvalues are sorted by real part and given the indices
    ``0, -1, 1, -2, 2, ...``: near ``t = 0`` the pair around ``(2 pi n)^2``
    receives ``{-n, n}`` with the larger one carrying ``n``; near ``t = pi``
    the pair around ``((2n+1) pi)^2`` receives ``{n, -n-1}`` with the larger
    one carrying ``-n-1``.  A conjugate pair has equal real parts; the
    non-negative index then takes the member with positive imaginary part.
    Indices ``|n| >= N_est`` are audited against their localization discs.
    """
    lam = np.asarray(raw, dtype=complex)
    if n_max is None:
        n_max = reliable_max((len(lam) - 1) // 2)
    s = lam[np.lexsort((lam.imag, lam.real))]
    out = assign_indices(s[: min(len(s), 2 * n_max + 1)], tol_real)
    if N_est <= n_max:
        bad = localization_failures(lam, t, N_est, n_max)
        if bad:
            n = min(bad)
            raise NumberingAmbiguity(n, t, bad[n])
    return out


def estimate_horizon(raws_by_t, n_max: int) -> int:
    """Smallest ``n0`` such that every ``n0 <= n <= n_max`` passes the
    localization audit at every sampled ``t``; ``n_max + 1`` if none does."""
    worst = 0
    for t, raw in raws_by_t:
        bad = localization_failures(raw, t, 1, n_max)
        if bad:
            worst = max(worst, max(bad))
    return worst + 1


def conjugation_closure(q: PeriodicPotential, t: float, K: int) -> float:
    """``max_lam min_mu |conj(lam) - mu|`` over the reliable eigenvalues."""
    raw = galerkin_eigenvalues(q, t, K)
    s = raw[np.argsort(raw.real)]
    central = s[: 2 * reliable_max(K) + 1]
    return float(max(np.min(np.abs(np.conj(v) - raw)) for v in central))
