"""Trace criteria for central and Z_d-symmetry of spectra, Fredholm determinants
from power traces, and generators of test operators."""

from .core import DEFAULT_TOL, SpectrumMultiset, Tolerance, lp_norm, mat_mul, mat_pow, multiset_equal, spectrum_of
from .fredholm import (
    DetCoefficients,
    d_even_check,
    det_coeffs_from_traces,
    det_eval_product,
    det_eval_series,
    det_zeros,
    inverse_zeros,
)
from .symmetry import (
    RouteDisagreementError,
    SymmetryReport,
    central_symmetry,
    equivalence_harness,
    threshold_collapse_check,
    trace_criterion,
    zd_symmetric_spectrum,
)
from .traces import NuclearRepresentation, TraceSequence, induced_operator, nuclear_trace, power_traces, s_quasinorm

__version__ = "0.1.0"
