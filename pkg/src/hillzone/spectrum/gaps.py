"""Gap enumeration for ``Re(sigma(L))`` and the horizon-bounded verdict."""

from __future__ import annotations

import math

from .bands import BlochSweep, default_truncation, trace_bands
from .roots import classify
from .types import (TOL_DOUBLE, TOL_GAP, TOL_REAL, Boundary, Classification, Gap, GapReport,
                    RealInterval, TwoPeriodicEigenvalue, Verdict, partner)


def sequence(N: int) -> list[int]:
    """Band indices in spectral order ``0, -1, 1, -2, 2, ..., -N, N``."""
    out = [0]
    for n in range(1, N + 1):
        out += [-n, n]
    return out


def endpoint_eigenvalues(sweep: BlochSweep, N: int, tol_double: float = TOL_DOUBLE,
                         tol_real: float = TOL_REAL) -> list[TwoPeriodicEigenvalue]:
    """Classified 2-periodic eigenvalues from the Galerkin spectra at 0 and pi."""
    out = []
    for boundary, spec in ((Boundary.PERIODIC, sweep.at(0.0)),
                           (Boundary.ANTIPERIODIC, sweep.at(math.pi))):
        raw = {n: TwoPeriodicEigenvalue(n, boundary, spec[n], 1, Classification.SR)
               for n in sequence(N) if n in spec}
        for n, e in raw.items():
            p = partner(n, boundary)
            if p not in raw or p == n:
                if n != 0 or boundary is Boundary.ANTIPERIODIC:
                    continue   # partner beyond the horizon
            cluster = [e] + ([raw[p]] if p in raw and p != n else [])
            out.append(TwoPeriodicEigenvalue(n, boundary, e.lam, 1,
                                             classify(e, cluster, tol_double, tol_real,
                                                      sweep.N_est)))
    return out


def _gap_list(intervals: dict[int, RealInterval], N: int, tol_gap: float) -> list[Gap]:
    present = [(n, intervals[n]) for n in sequence(N) if not intervals[n].is_empty]
    gaps = []
    for (m, I), (n, J) in zip(present, present[1:]):
        left, right = I.B, J.A
        if right - left <= tol_gap:
            continue
        # a band out of sequence order may still cover the candidate gap
        covered = any(K.A < right and K.B > left for k, K in present if k not in (m, n))
        if not covered:
            gaps.append(Gap(float(left), float(right), (m, n)))
    return gaps


def _pair_status(eigs, n_lo: int, n_hi: int):
    """Classifications of the pairs with ``n_lo <= n <= n_hi``: the periodic
    pair ``{-n, n}`` and the antiperiodic pair ``{n - 1, -n}``."""
    cls = {(e.boundary, e.n): e.classification for e in eigs}
    out = []
    for n in range(n_lo, n_hi + 1):
        for key in ((Boundary.PERIODIC, n), (Boundary.ANTIPERIODIC, n - 1)):
            if key in cls:
                out.append((key, cls[key]))
    return out


def verdict(eigs, N: int, N_est: int) -> tuple[Verdict, str]:
    """Spectral finite-zone verdict from the classifications up to ``N``.

    The largest third of the indices (never below ``N_est``) decides:
    SR pairs throughout mean open gaps persist (InfiniteZone); no SR pair
    there and either a nonreal pair there or no SR pair anywhere means the
    gaps have closed (FiniteZone).  Double pairs at the top after SR pairs
    lower down cannot be told apart from gaps narrower than ``tol_double``,
    so that case and mixed cases are Undetermined.
    """
    lo = max(N_est, N - N // 3, 1)
    if lo > N:
        return Verdict.UNDETERMINED, f"no index in [N_est={N_est}, N={N}] is reliably numbered"
    top = _pair_status(eigs, lo, N)
    kinds = {c for _, c in top}
    # lam_0(0) is the bottom of the spectrum and never bounds a gap
    every = {e.classification for e in eigs if (e.boundary, e.n) != (Boundary.PERIODIC, 0)}
    if Classification.SR in kinds:
        if kinds == {Classification.SR}:
            return Verdict.INFINITE_ZONE, f"SR pairs persist for every index in [{lo}, {N}]"
        return Verdict.UNDETERMINED, f"SR and non-SR pairs mixed in [{lo}, {N}]"
    if Classification.NONREAL in kinds:
        return Verdict.FINITE_ZONE, f"only nonreal or double pairs in [{lo}, {N}] (horizon-bounded)"
    if Classification.SR not in every:
        return Verdict.FINITE_ZONE, f"all 2-periodic pairs up to N={N} are double (horizon-bounded)"
    return Verdict.UNDETERMINED, (
        f"pairs in [{lo}, {N}] are double within tol_double after SR pairs at lower indices; "
        "gaps narrower than tol_double cannot be resolved")


def gaps(q, N_horizon: int, grid_size: int = 128, K: int | None = None,
         tol_gap: float = TOL_GAP, tol_double: float = TOL_DOUBLE,
         tol_real: float = TOL_REAL, workers=None, sweep: BlochSweep | None = None) -> GapReport:
    """Real intervals of the bands ``|n| <= N_horizon``, the gaps between
    consecutive ones wider than ``tol_gap``, and the spectral verdict."""
    if N_horizon < 1:
        raise ValueError("N_horizon must be at least 1")
    if sweep is None:
        K = K or default_truncation(q, N_horizon)
        sweep = BlochSweep(q, K, grid_size, tol_real, workers)
    bands = trace_bands(sweep, sequence(N_horizon))
    intervals = {n: b.real_interval for n, b in bands.items()}
    eigs = endpoint_eigenvalues(sweep, N_horizon, tol_double, tol_real)
    v, reason = verdict(eigs, N_horizon, sweep.N_est)
    rows = [{"n": e.n, "boundary": e.boundary.value,
             "lambda": [e.lam.real, e.lam.imag], "multiplicity": e.multiplicity,
             "classification": e.classification.value} for e in eigs]
    return GapReport(N_horizon, sweep.N_est, [(n, intervals[n]) for n in sequence(N_horizon)],
                     _gap_list(intervals, N_horizon, tol_gap), v, reason, rows)
