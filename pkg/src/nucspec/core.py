"""Complex scalars, dense operators, l_p norms and tolerance-aware eigenvalue multisets.

Operators are plain ``complex128`` numpy arrays; :func:`as_operator` is the
single validation gate.  Eigenvalue multisets are immutable and always kept in
canonical (merged) form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "SpectrumMultiset",
    "EigensolverError",
    "as_operator",
    "as_vector",
    "lp_norm",
    "dual_exponent",
    "mat_mul",
    "mat_pow",
    "spectrum_of",
    "merge_eigenvalues",
    "canonical_order",
    "single_linkage_components",
    "multiset_equal",
]


class EigensolverError(RuntimeError):
    """The dense eigensolver failed to converge."""


@dataclass(frozen=True)
class Tolerance:
    rel: float = 1e-8
    abs: float = 1e-12

    def __post_init__(self):
        if not (self.rel > 0 and math.isfinite(self.rel)):
            raise ValueError(f"rel tolerance must be positive and finite, got {self.rel!r}")
        if not (self.abs >= 0 and math.isfinite(self.abs)):
            raise ValueError(f"abs tolerance must be nonnegative and finite, got {self.abs!r}")

    def threshold(self, scale: float) -> float:
        """Effective comparison threshold at reference magnitude ``scale``."""
        return max(self.abs, self.rel * scale)


DEFAULT_TOL = Tolerance()


def as_operator(a) -> np.ndarray:
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"operator must be a square matrix, got shape {m.shape}")
    if m.shape[0] < 1:
        raise ValueError("operator dimension must be at least 1")
    if not np.all(np.isfinite(m)):
        raise ValueError("operator entries must be finite")
    return m


def as_vector(v) -> np.ndarray:
    x = np.array(v, dtype=np.complex128)
    if x.ndim != 1 or x.size == 0:
        raise ValueError(f"expected a nonempty vector, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("vector entries must be finite")
    return x


def dual_exponent(p: float) -> float:
    """Conjugate exponent p' with 1/p + 1/p' = 1."""
    if p < 1:
        raise ValueError(f"exponent must be >= 1, got {p!r}")
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def lp_norm(v, p: float) -> float:
    """l_p norm of a complex vector, ``p`` in [1, inf]."""
    if not p >= 1:
        raise ValueError(f"l_p exponent must be >= 1 or inf, got {p!r}")
    mod = np.abs(as_vector(v))
    if math.isinf(p):
        return float(mod.max())
    top = mod.max()
    if top == 0:
        return 0.0
    # factor out the max so large p does not overflow
    return float(top * np.sum((mod / top) ** p) ** (1.0 / p))


def mat_mul(a, b) -> np.ndarray:
    a, b = as_operator(a), as_operator(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return a @ b


def mat_pow(t, m: int) -> np.ndarray:
    t = as_operator(t)
    if m < 0:
        raise ValueError("negative matrix powers are not supported")
    return np.linalg.matrix_power(t, m)


@dataclass(frozen=True)
class SpectrumMultiset:
    """Canonical eigenvalue multiset: ``values`` holds (eigenvalue, multiplicity) pairs."""

    values: tuple[tuple[complex, int], ...]
    scale: float = field(default=0.0)

    def __post_init__(self):
        vals = tuple((complex(z), int(m)) for z, m in self.values)
        for z, m in vals:
            if m < 1:
                raise ValueError(f"multiplicity must be >= 1, got {m}")
            if not cmath.isfinite(z):
                raise ValueError("eigenvalues must be finite")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "scale", max((abs(z) for z, _ in vals), default=0.0))

    @property
    def total(self) -> int:
        return sum(m for _, m in self.values)

    def expanded(self) -> list[complex]:
        return [z for z, m in self.values for _ in range(m)]

    def nonzero(self, tol: Tolerance = DEFAULT_TOL) -> SpectrumMultiset:
        """Drop eigenvalues that are zero at the effective threshold."""
        thr = tol.threshold(self.scale)
        return SpectrumMultiset(tuple((z, m) for z, m in self.values if abs(z) > thr))

    def scaled(self, c: complex) -> SpectrumMultiset:
        """Every eigenvalue multiplied by ``c``; listing order is preserved."""
        return SpectrumMultiset(tuple((c * z, m) for z, m in self.values))

    def inverted(self) -> SpectrumMultiset:
        return SpectrumMultiset(canonical_order((1.0 / z, m) for z, m in self.values))

    def __len__(self):
        return len(self.values)


def canonical_order(items: Iterable[tuple[complex, int]]) -> tuple[tuple[complex, int], ...]:
    # largest modulus first, then by argument in [0, 2pi)
    return tuple(
        sorted(items, key=lambda zm: (-abs(zm[0]), math.atan2(zm[0].imag, zm[0].real) % (2 * math.pi)))
    )


def single_linkage_components(z: np.ndarray, radius: float) -> list[list[int]]:
    """Single-linkage connected components of points within ``radius``."""
    n = z.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    if n > 1:
        dist = np.abs(z[:, None] - z[None, :])
        for i, j in zip(*np.nonzero(np.triu(dist <= radius, k=1))):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def merge_eigenvalues(values: Sequence[complex], tol: Tolerance = DEFAULT_TOL) -> SpectrumMultiset:
    """Merge raw eigenvalues into canonical form by single-linkage clustering.

    Each cluster is represented by its centroid, which is far better
    conditioned than any individual member of a split multiple eigenvalue.
    """
    z = np.asarray(values, dtype=np.complex128).ravel()
    if z.size == 0:
        return SpectrumMultiset(())
    thr = tol.threshold(float(np.abs(z).max()))
    items = [(complex(z[g].mean()), len(g)) for g in single_linkage_components(z, thr)]
    return SpectrumMultiset(canonical_order(items))


def spectrum_of(t, tol: Tolerance = DEFAULT_TOL) -> SpectrumMultiset:
    """Eigenvalue multiset of a dense operator (total multiplicity = dim)."""
    t = as_operator(t)
    try:
        ev = np.linalg.eigvals(t)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigenvalue computation did not converge: {exc}") from exc
    if not np.all(np.isfinite(ev)):
        raise EigensolverError("eigensolver returned non-finite eigenvalues")
    return merge_eigenvalues(ev, tol)


def multiset_equal(
    a: SpectrumMultiset, b: SpectrumMultiset, tol: Tolerance = DEFAULT_TOL
) -> tuple[bool, complex | None]:
    """Multiplicity-respecting match of two multisets.

    Returns ``(True, None)`` when every eigenvalue of ``a`` pairs with one of
    ``b`` within the threshold at scale ``max(a.scale, b.scale)``; otherwise
    ``(False, w)`` with ``w`` an eigenvalue of ``a`` left unmatched (or of
    ``b`` when ``a`` is exhausted first).
    """
    xa, xb = a.expanded(), b.expanded()
    thr = tol.threshold(max(a.scale, b.scale))
    if not xa and not xb:
        return True, None

    if len(xa) == len(xb):
        # greedy nearest neighbour, then fall back to optimal assignment
        free = list(range(len(xb)))
        ok = True
        for z in xa:
            j = min(free, key=lambda k: abs(xb[k] - z))
            if abs(xb[j] - z) > thr:
                ok = False
                break
            free.remove(j)
        if ok:
            return True, None

    if not xa or not xb:
        return False, (xa or xb)[0]
    va, vb = np.array(xa), np.array(xb)
    dist = np.abs(va[:, None] - vb[None, :])
    far = dist > thr
    # matched-within-threshold pairs cost only their distance; others are penalised
    cost = np.where(far, 1.0 + dist.max() * len(xa), dist)
    rows, cols = linear_sum_assignment(cost)
    matched_a = {r for r, c in zip(rows, cols) if not far[r, c]}
    if len(matched_a) == len(xa) == len(xb):
        return True, None
    for i, z in enumerate(xa):
        if i not in matched_a:
            return False, z
    matched_b = {c for r, c in zip(rows, cols) if not far[r, c]}
    return False, next(z for j, z in enumerate(xb) if j not in matched_b)
