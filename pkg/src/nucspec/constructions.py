"""Test-operator generators.

Symmetric spectra by construction, companion matrices for prescribed
spectra, symmetry-breaking perturbations, and the trace-one family whose
operator norm, spectral radius and trace of T^2 all shrink like 1/N while the
trace and the eigenvalue l_1 mass stay pinned at 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
import scipy.linalg

from .core import SpectrumMultiset, as_operator, spectrum_of
from .traces import NuclearRepresentation, induced_operator, nuclear_trace, s_quasinorm

__all__ = [
    "DefectFamilyPoint",
    "QuasinormRow",
    "cyclic_shift",
    "kronecker_symmetrize",
    "monic_coefficients",
    "from_spectrum",
    "perturb_break_symmetry",
    "random_operator",
    "jordan_block",
    "jordan_case",
    "trace_one_representation",
    "trace_one_family_representation",
    "trace_one_shrinking_family",
    "quasinorm_sweep",
    "loglog_slopes",
    "DEFAULT_S_GRID",
]

DEFAULT_S_GRID = (0.5, 2.0 / 3.0, 0.75, 1.0)


def cyclic_shift(d: int) -> np.ndarray:
    c = np.zeros((d, d), dtype=np.complex128)
    c[np.arange(d), (np.arange(d) + 1) % d] = 1.0
    return c


def kronecker_symmetrize(a, d: int) -> np.ndarray:
    """A (x) C_d; its spectrum is {lam * omega**j} so it is Z_d-symmetric."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    return np.kron(as_operator(a), cyclic_shift(d))


def monic_coefficients(roots: Sequence[complex]) -> np.ndarray:
    """Descending coefficients of prod (z - r), built one root at a time."""
    coeffs = np.array([1 + 0j])
    for r in roots:
        coeffs = np.append(coeffs, 0j) - r * np.insert(coeffs, 0, 0j)
    return coeffs


def from_spectrum(spec: SpectrumMultiset | Iterable[complex]) -> np.ndarray:
    """Companion matrix (ones on the superdiagonal, coefficients in the last row)."""
    roots = spec.expanded() if isinstance(spec, SpectrumMultiset) else list(spec)
    n = len(roots)
    if n < 1:
        raise ValueError("need at least one eigenvalue")
    c = monic_coefficients(roots)
    comp = np.zeros((n, n), dtype=np.complex128)
    if n > 1:
        comp[np.arange(n - 1), np.arange(1, n)] = 1.0
    comp[-1, :] = -c[:0:-1]
    return comp


def perturb_break_symmetry(t, eps: float, seed) -> np.ndarray:
    """T + eps * R, R complex Gaussian with unit-variance entries, seeded."""
    t = as_operator(t)
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    if eps == 0:
        return t
    rng = np.random.default_rng(seed)
    n = t.shape[0]
    r = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    return t + eps * r


def random_operator(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Complex Gaussian matrix scaled so the spectrum fills roughly the unit disc."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return g / math.sqrt(2.0 * dim)


def jordan_block(eig: complex, size: int) -> np.ndarray:
    j = np.diag(np.full(size, eig, dtype=np.complex128))
    if size > 1:
        j[np.arange(size - 1), np.arange(1, size)] = 1.0
    return j


def jordan_case(rng: np.random.Generator, max_block: int = 4, dense_dim: int | None = None):
    """Jordan blocks followed by a dense random block.

    Blocks come first and stay upper triangular, so their eigenvalues are
    recovered exactly by a Hessenberg-QR eigensolver.  Returns the matrix and
    the exact expanded spectrum of the Jordan part.
    """
    blocks, exact = [], []
    for _ in range(int(rng.integers(1, 4))):
        size = int(rng.integers(1, max_block + 1))
        if rng.random() < 0.2:
            eig = 0j
        else:
            eig = complex(rng.uniform(0.3, 1.0) * np.exp(2j * np.pi * rng.random()))
        blocks.append(jordan_block(eig, size))
        exact.extend([eig] * size)
    dense_dim = int(rng.integers(1, 7)) if dense_dim is None else dense_dim
    if dense_dim:
        blocks.append(random_operator(dense_dim, rng))
    return scipy.linalg.block_diag(*blocks).astype(np.complex128), exact


@dataclass(frozen=True)
class DefectFamilyPoint:
    N: int
    nuclear_trace: complex
    trace_sq: float
    op_norm: float
    spectral_radius: float
    s_quasinorms: tuple[tuple[float, float], ...]
    eigen_l1_mass: float


def trace_one_representation(N: int, ambient_p: float = 1.0) -> NuclearRepresentation:
    """sum_k (1/N) e_k (x) e_k: trace 1, induced operator I_N / N."""
    if N < 1:
        raise ValueError("N must be positive")
    eye = np.eye(N)
    return NuclearRepresentation(N, [(1.0 / N, eye[k], eye[k]) for k in range(N)], ambient_p)


def trace_one_family_representation(N: int, ambient_p: float = 1.0) -> NuclearRepresentation:
    """Diagonal part padded to N + 2 plus the nilpotent term (1/N) e_{N+1} (x) e_N."""
    diag = trace_one_representation(N, ambient_p)
    eye = np.eye(N + 2)
    terms = [(t.mu, np.pad(t.functional, (0, 2)), np.pad(t.vector, (0, 2))) for t in diag.terms]
    terms.append((1.0 / N, eye[N + 1], eye[N]))
    return NuclearRepresentation(N + 2, terms, ambient_p)


def trace_one_shrinking_family(
    N: int, s_grid: Sequence[float] = DEFAULT_S_GRID, ambient_p: float = 1.0
) -> tuple[np.ndarray, DefectFamilyPoint]:
    """T_N = (1/N) I_N (+) (1/N) J_2 together with its recorded quantities.

    Quasinorms are those of the trace-carrying diagonal representation,
    whose closed form is N**(1/s - 1).
    """
    rep = trace_one_family_representation(N, ambient_p)
    t = induced_operator(rep)
    ev = spectrum_of(t).expanded()
    diag = trace_one_representation(N, ambient_p)
    point = DefectFamilyPoint(
        N=N,
        nuclear_trace=nuclear_trace(rep),
        trace_sq=float(np.trace(t @ t).real),
        op_norm=float(np.linalg.norm(t, 2)),
        spectral_radius=float(max(abs(z) for z in ev)),
        s_quasinorms=tuple((float(s), s_quasinorm(diag, s)) for s in s_grid),
        eigen_l1_mass=math.fsum(abs(z) for z in ev),
    )
    return t, point


@dataclass(frozen=True)
class QuasinormRow:
    N: int
    s: float
    value: float


def quasinorm_sweep(
    family: Callable[[int], NuclearRepresentation] = trace_one_representation,
    s_grid: Sequence[float] = DEFAULT_S_GRID,
    N_grid: Sequence[int] = (4, 16, 64, 256),
) -> list[QuasinormRow]:
    if not s_grid or not N_grid:
        raise ValueError("grids must be nonempty")
    for s in s_grid:
        if not 0 < s <= 1:
            raise ValueError(f"s must lie in (0, 1], got {s!r}")
    rows = []
    for N in N_grid:
        rep = family(N)
        rows.extend(QuasinormRow(N, float(s), s_quasinorm(rep, s)) for s in s_grid)
    return rows


def loglog_slopes(rows: Sequence[QuasinormRow]) -> dict[float, float]:
    """Least-squares slope of log(value) against log(N) for each s."""
    out = {}
    for s in sorted({r.s for r in rows}):
        pts = [(math.log(r.N), math.log(r.value)) for r in rows if r.s == s]
        x, y = np.array(pts).T
        out[s] = float(np.polyfit(x, y, 1)[0]) if len(pts) > 1 else float("nan")
    return out
