"""Bloch spectra, band gaps and finite-zone tests for PT-symmetric
1-periodic Schrodinger operators ``-y'' + q y``."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .criteria import (CriteriaReport, PnRecord, antiderivative_coefficients, criteria_report,
                       p_coefficient, p_coefficients, summary4_reality, theorem5_check,
                       theorem6_check, theorem7_check)
from .errors import (BandwidthExceeded, CoalescenceNotFound, ConfigError, ContourFailure,
                     HillzoneError, IntegrationFailure, InvalidPotential,
                     JumpDeclarationRequired, NumberingAmbiguity, NumericsError)
from .floquet import (MonodromyResult, asymptotic_reference, discriminant,
                      discriminant_real_check, membership, monodromy, monodromy_many)
from .potential import (FourierTriple, Jump, PeriodicPotential, exponential, fourier_potential,
                        fourier_triple, mathieu, normalize, piecewise_potential,
                        sample_function, sampled_potential, sawtooth, validate_pt)
from .potential_file import load_potential, parse_potential
