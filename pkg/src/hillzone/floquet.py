"""Fundamental solutions, monodromy data and the Hill discriminant.

``theta`` and ``phi`` solve ``-y'' + q y = lam y`` with
``theta(0) = phi'(0) = 1`` and ``theta'(0) = phi(0) = 0``.  The
discriminant is ``F(lam) = theta(1) + phi'(1)``; ``lam`` lies in the
spectrum iff ``F(lam)`` is in ``[-2, 2]``, periodic eigenvalues are the
roots of ``F = 2`` and antiperiodic ones the roots of ``F = -2``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import IntegrationFailure
from .parallel import chunked, pmap, worker_count
from .potential import PeriodicPotential

TOL_ODE = 1e-10
TOL_WRONSKIAN = 1e-8
TOL_MEMBER = 1e-7


@dataclass(frozen=True)
class MonodromyResult:
    lam: complex
    theta1: complex
    theta1p: complex
    phi1: complex
    phi1p: complex
    discriminant: complex
    est_error: float

    @property
    def wronskian(self) -> complex:
        return self.theta1 * self.phi1p - self.theta1p * self.phi1

    @property
    def wronskian_error(self) -> float:
        return abs(self.wronskian - 1.0)

    @property
    def wronskian_scale(self) -> float:
        """Size of the products that cancel in the Wronskian."""
        return max(1.0, abs(self.theta1 * self.phi1p), abs(self.theta1p * self.phi1))


def _run_kernel(q: PeriodicPotential, lams: np.ndarray, tol_ode: float, backend=None):
    mode, freqs, fco, breaks, pco = q.kernel_data()
    impl = _backend.kernel(backend)
    vals, est, status, xfail = impl.monodromy_batch(
        mode, np.ascontiguousarray(lams, dtype=np.complex128), float(tol_ode),
        freqs, fco, breaks, pco)
    bad = np.nonzero(status)[0]
    if len(bad):
        j = bad[0]
        reason = "step-size underflow" if status[j] == 1 else "step budget exhausted"
        raise IntegrationFailure(lams[j], xfail[j], reason)
    return vals, est


def monodromy_many(q: PeriodicPotential, lams, tol_ode: float = TOL_ODE,
                   workers=None, backend=None) -> list[MonodromyResult]:
    """Monodromy data at every ``lam`` in ``lams``, split across workers."""
    if tol_ode <= 0:
        raise ValueError("tol_ode must be positive")
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    parts = chunked(range(len(lams)), worker_count(workers))

    def work(idx):
        return _run_kernel(q, lams[idx], tol_ode, backend)

    results = []
    for idx, (vals, est) in zip(parts, pmap(work, parts, workers)):
        for j, v, e in zip(idx, vals, est):
            results.append(MonodromyResult(complex(lams[j]), complex(v[0]), complex(v[1]),
                                           complex(v[2]), complex(v[3]),
                                           complex(v[0] + v[3]), float(e)))
    return results


def monodromy(q: PeriodicPotential, lam: complex, tol_ode: float = TOL_ODE,
              backend=None) -> MonodromyResult:
    """Integrate both initial-value problems over ``[0, 1]`` at one ``lam``."""
    return monodromy_many(q, [lam], tol_ode, workers=1, backend=backend)[0]


def discriminant(q: PeriodicPotential, lams, tol_ode: float = TOL_ODE, workers=None) -> np.ndarray:
    """Vectorized ``F(lam)``."""
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    if len(lams) < 64:
        vals, _ = _run_kernel(q, lams, tol_ode)
        return vals[:, 0] + vals[:, 3]
    return np.array([r.discriminant for r in monodromy_many(q, lams, tol_ode, workers)])


def asymptotic_reference(lam: complex) -> complex:
    """``2 cos(sqrt(lam))`` on the principal branch."""
    return 2.0 * cmath.cos(cmath.sqrt(complex(lam)))


@dataclass(frozen=True)
class RealityReport:
    max_imag: float
    worst_lambda: float
    passes: bool
    tol: float


def discriminant_real_check(q: PeriodicPotential, lambda_grid, tol: float = 1e-8,
                            tol_ode: float = TOL_ODE) -> RealityReport:
    """Largest ``|Im F(lam)|`` over a real grid; PT symmetry predicts zero."""
    grid = np.asarray(lambda_grid, dtype=float)
    F = discriminant(q, grid, tol_ode)
    j = int(np.argmax(np.abs(F.imag)))
    worst = float(abs(F[j].imag))
    return RealityReport(worst, float(grid[j]), worst <= tol, tol)


def membership(q: PeriodicPotential, lam: float, tol_member: float = TOL_MEMBER,
               tol_ode: float = TOL_ODE) -> bool:
    """True iff ``F(lam)`` is real and in ``[-2, 2]`` up to ``tol_member``."""
    F = monodromy(q, complex(lam), tol_ode).discriminant
    return abs(F.imag) <= tol_member and -2.0 - tol_member <= F.real <= 2.0 + tol_member
