"""Bloch eigenvalues, band curves, 2-periodic eigenvalues and gaps."""

from .bands import BlochSweep, default_truncation, trace_band, trace_bands
from .galerkin import (conjugation_closure, estimate_horizon, galerkin_eigenvalues,
                       galerkin_matrix, number_eigenvalues)
from .types import (H_LOCAL, TOL_CONJ, TOL_DOUBLE, TOL_GAP, TOL_REAL, BandCurve,
                    BlochEigenvalue, Boundary, Classification, Gap, GapReport, RealInterval,
                    TwoPeriodicEigenvalue, Verdict, partner)
from .gaps import endpoint_eigenvalues, gaps, sequence, verdict
from .roots import CrossCheck, classify, galerkin_cross_check, two_periodic_roots
