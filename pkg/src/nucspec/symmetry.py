"""Z_d-symmetry verdicts by spectral, trace and determinant routes.

The trace and determinant routes work from power traces alone.  Before
taking traces the operator is divided by a Gelfand-type estimate of its
spectral radius (repeated squaring, no eigensolver), so the dominant terms of
trace T**n stay O(1) across the whole window and a single scale-aware
threshold is meaningful.  Verdicts are invariant under that rescaling.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import DEFAULT_TOL, SpectrumMultiset, Tolerance, as_operator, multiset_equal, spectrum_of
from .fredholm import d_even_check, det_coeffs_from_traces
from .traces import TraceSequence, power_traces

__all__ = [
    "SymmetryReport",
    "RouteDisagreementError",
    "CollapseCheck",
    "HarnessResult",
    "zd_symmetric_spectrum",
    "trace_criterion",
    "determinant_criterion",
    "central_symmetry",
    "equivalence_harness",
    "threshold_collapse_check",
    "default_n_max",
    "gelfand_radius",
    "normalized_traces",
    "DIM_CAP",
]

DIM_CAP = 64
N_MAX_CAP = 512
ALL_ZERO_NOTE = "all-zero spectrum at tolerance"

ROUTES = ("spectral", "trace-criterion", "determinant")


@dataclass(frozen=True)
class SymmetryReport:
    d: int
    verdict: bool
    route: str
    threshold_K: int = 0
    witness: complex | int | None = None
    tol: Tolerance = DEFAULT_TOL
    n_max: int | None = None
    notes: tuple[str, ...] = ()
    corroborating: SymmetryReport | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.route not in ROUTES:
            raise ValueError(f"unknown route {self.route!r}")
        if not self.verdict and self.witness is None:
            raise ValueError("a negative verdict needs a witness")

    def to_dict(self) -> dict:
        w = self.witness
        if isinstance(w, complex):
            w = {"re": w.real, "im": w.imag}
        out = {
            "route": self.route,
            "d": self.d,
            "verdict": self.verdict,
            "threshold_K": self.threshold_K,
            "witness": w,
            "n_max": self.n_max,
            "rel_tol": self.tol.rel,
            "abs_tol": self.tol.abs,
            "notes": list(self.notes),
        }
        return out


class RouteDisagreementError(RuntimeError):
    """Two routes reached different verdicts on the same operator."""

    def __init__(self, message: str, reports: tuple[SymmetryReport, ...]):
        super().__init__(message)
        self.reports = reports


def default_n_max(dim: int, d: int) -> int:
    return min(3 * dim * d, N_MAX_CAP)


def _check_d(d: int):
    if int(d) != d or d < 2:
        raise ValueError(f"d must be an integer >= 2, got {d!r}")


def gelfand_radius(t, squarings: int = 12) -> float:
    """Estimate of the spectral radius as ||T^(2^k)||^(1/2^k), computed in log space.

    Falls back to the Frobenius norm when T is (numerically) nilpotent, and
    returns 0.0 only for the zero matrix.
    """
    t = as_operator(t)
    norm = float(np.linalg.norm(t))
    if norm == 0.0:
        return 0.0
    b = t / norm
    log_r = 0.0
    for k in range(1, squarings + 1):
        b = b @ b
        nb = float(np.linalg.norm(b))
        if nb == 0.0 or not math.isfinite(nb):
            return norm
        log_r += math.log(nb) / 2.0**k
        b = b / nb
    r = norm * math.exp(log_r)
    # a radius this far below the norm is indistinguishable from nilpotent rounding
    return r if r > 1e-6 * norm else norm


def normalized_traces(t, n_max: int) -> tuple[TraceSequence, float]:
    """Power traces of T / rho_hat with rho_hat = :func:`gelfand_radius`."""
    t = as_operator(t)
    rho = gelfand_radius(t)
    if rho == 0.0:
        return TraceSequence((0j,) * n_max, t.shape[0]), 0.0
    return power_traces(t / rho, n_max), rho


def zd_symmetric_spectrum(spec: SpectrumMultiset, d: int, tol: Tolerance = DEFAULT_TOL) -> SymmetryReport:
    """Invariance of the nonzero eigenvalues under rotation by exp(2 pi i / d).

    The generator suffices: invariance under it gives invariance under the
    whole cyclic group.  Zeros are exempt.
    """
    _check_d(d)
    nz = spec.nonzero(tol)
    omega = cmath.exp(2j * math.pi / d)
    ok, w = multiset_equal(nz.scaled(omega), nz, tol)
    witness = None
    notes = ()
    if not nz.values:
        notes = (ALL_ZERO_NOTE,)
    if not ok:
        # report the original eigenvalue whose rotated image has no partner
        cands = [z for z, _ in nz.values]
        witness = min(cands, key=lambda z: abs(z * omega - w))
    return SymmetryReport(d, ok, "spectral", 0, witness, tol, None, notes)


def trace_criterion(s: TraceSequence, d: int, K: int = 0, tol: Tolerance = DEFAULT_TOL) -> SymmetryReport:
    """trace T^n = 0 for every n > K*d with n not divisible by d, up to n_max."""
    _check_d(d)
    if K < 0:
        raise ValueError(f"K must be >= 0, got {K}")
    if s.n_max < (K + 1) * d:
        raise ValueError(
            f"trace window 1..{s.n_max} too short for d={d}, K={K}: need n_max >= {(K + 1) * d}"
        )
    window = range(K * d + 1, s.n_max + 1)
    scale = max(abs(s[n]) for n in window)
    if scale <= tol.abs:
        return SymmetryReport(d, True, "trace-criterion", K, None, tol, s.n_max, (ALL_ZERO_NOTE,))
    thr = tol.threshold(scale)
    for n in window:
        if n % d and abs(s[n]) > thr:
            return SymmetryReport(d, False, "trace-criterion", K, n, tol, s.n_max)
    return SymmetryReport(d, True, "trace-criterion", K, None, tol, s.n_max)


def determinant_criterion(s: TraceSequence, d: int, tol: Tolerance = DEFAULT_TOL) -> SymmetryReport:
    """d-evenness of det(1 - zT) built from the traces."""
    ok, n = d_even_check(det_coeffs_from_traces(s), d, tol)
    return SymmetryReport(d, ok, "determinant", 0, n, tol, s.n_max)


def _require_agreement(reference: SymmetryReport, *others: SymmetryReport):
    for other in others:
        if other.verdict != reference.verdict:
            raise RouteDisagreementError(
                f"{reference.route} says {reference.verdict} (witness {reference.witness!r}) but "
                f"{other.route} says {other.verdict} (witness {other.witness!r}) for d={reference.d}",
                (reference, *others),
            )


def central_symmetry(t, tol: Tolerance = DEFAULT_TOL, n_max: int | None = None) -> SymmetryReport:
    """Central symmetry (d = 2, K = 0) checked by the spectral and trace routes.

    Returns the spectral report with the trace report attached as
    ``corroborating``; raises :class:`RouteDisagreementError` if they differ.
    """
    t = as_operator(t)
    n_max = n_max or default_n_max(t.shape[0], 2)
    spectral = zd_symmetric_spectrum(spectrum_of(t, tol), 2, tol)
    traces, _ = normalized_traces(t, n_max)
    by_trace = trace_criterion(traces, 2, 0, tol)
    _require_agreement(spectral, by_trace)
    return replace(spectral, corroborating=by_trace)


@dataclass(frozen=True)
class HarnessResult:
    determinant: SymmetryReport
    spectral: SymmetryReport
    trace: SymmetryReport
    radius_estimate: float

    @property
    def verdict(self) -> bool:
        return self.spectral.verdict

    def __iter__(self):
        return iter((self.determinant, self.spectral, self.trace))


def equivalence_harness(
    t,
    d: int,
    tol: Tolerance = DEFAULT_TOL,
    K: int = 0,
    n_max: int | None = None,
    dim_cap: int = DIM_CAP,
) -> HarnessResult:
    """Determinant, spectral and trace verdicts for one operator, required to agree."""
    _check_d(d)
    t = as_operator(t)
    dim = t.shape[0]
    if dim > dim_cap:
        raise ValueError(f"dimension {dim} exceeds the harness cap {dim_cap}")
    n_max = n_max or max(default_n_max(dim, d), (K + 1) * d)
    traces, rho = normalized_traces(t, n_max)
    det_traces = TraceSequence(traces.values[:dim], dim)
    result = HarnessResult(
        determinant_criterion(det_traces, d, tol),
        zd_symmetric_spectrum(spectrum_of(t, tol), d, tol),
        trace_criterion(traces, d, K, tol),
        rho,
    )
    # the spectral route is the reference; name it in every complaint
    _require_agreement(result.spectral, result.determinant, result.trace)
    return result


@dataclass(frozen=True)
class CollapseCheck:
    holds: bool
    vacuous: bool
    at_K: SymmetryReport
    at_zero: SymmetryReport

    def __bool__(self):
        return self.holds


def threshold_collapse_check(
    t, d: int, K: int, tol: Tolerance = DEFAULT_TOL, dim_cap: int = DIM_CAP
) -> CollapseCheck:
    """In finite dimension, vanishing beyond K*d forces vanishing from index 1.

    Evaluates ``trace_criterion`` at K and at 0 on one window of length
    max(default, K*d + dim*d); the implication holds unless the first passes
    and the second fails.  A failing premise is flagged as vacuous.
    """
    _check_d(d)
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    t = as_operator(t)
    dim = t.shape[0]
    if dim > dim_cap:
        raise ValueError(f"dimension {dim} exceeds the cap {dim_cap}")
    n_max = max(default_n_max(dim, d), K * d + dim * d)
    traces, _ = normalized_traces(t, n_max)
    at_k = trace_criterion(traces, d, K, tol)
    at_0 = trace_criterion(traces, d, 0, tol)
    if not at_k.verdict:
        return CollapseCheck(True, True, at_k, at_0)
    return CollapseCheck(at_0.verdict, False, at_k, at_0)
