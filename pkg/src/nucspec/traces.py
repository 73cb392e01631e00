"""Power traces of dense operators and finite nuclear representations.

A :class:`NuclearRepresentation` stores the terms ``mu_k * f_k (x) x_k`` of a
finite tensor; the dual pairing is bilinear throughout (no conjugation), and
``ambient_p`` enters only the norms used by :func:`s_quasinorm`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import as_operator, as_vector, dual_exponent, lp_norm

__all__ = [
    "TraceOverflowError",
    "TraceSequence",
    "NuclearRepresentation",
    "Term",
    "power_traces",
    "nuclear_trace",
    "induced_operator",
    "s_quasinorm",
    "OVERFLOW_LIMIT",
]

OVERFLOW_LIMIT = 1e140


class TraceOverflowError(OverflowError):
    pass


@dataclass(frozen=True)
class TraceSequence:
    """``values[n - 1] = trace T**n`` for n = 1 .. n_max."""

    values: tuple[complex, ...]
    source_dim: int

    def __post_init__(self):
        vals = tuple(complex(v) for v in self.values)
        if not vals:
            raise ValueError("a trace sequence needs at least one entry")
        if not all(math.isfinite(v.real) and math.isfinite(v.imag) for v in vals):
            raise ValueError("trace values must be finite")
        if self.source_dim < 1:
            raise ValueError("source_dim must be positive")
        object.__setattr__(self, "values", vals)

    @property
    def n_max(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> complex:
        """1-based access: ``s[n] == trace T**n``."""
        if not 1 <= n <= len(self.values):
            raise IndexError(f"trace index {n} outside 1..{len(self.values)}")
        return self.values[n - 1]

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=np.complex128)


def power_traces(t, n_max: int) -> TraceSequence:
    """``trace T**n`` for n = 1..n_max by repeated multiplication.

    Deliberately avoids eigenvalues so the result is an independent check on
    eigenvalue power sums.
    """
    t = as_operator(t)
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    out = []
    power = t.copy()
    for n in range(1, n_max + 1):
        if n > 1:
            power = power @ t
        big = np.abs(power).max()
        if not big <= OVERFLOW_LIMIT:
            raise TraceOverflowError(
                f"entries of T^{n} exceed {OVERFLOW_LIMIT:g}; rescale the operator "
                f"(e.g. divide by an estimate of its spectral radius) or lower n_max"
            )
        out.append(complex(np.trace(power)))
    return TraceSequence(tuple(out), t.shape[0])


@dataclass(frozen=True)
class Term:
    mu: complex
    functional: np.ndarray
    vector: np.ndarray


class NuclearRepresentation:
    """Finite sum of rank-one terms ``mu_k <functional_k, .> vector_k``."""

    def __init__(self, dim: int, terms=(), ambient_p: float = 2.0):
        if dim < 1:
            raise ValueError("dim must be positive")
        if not ambient_p >= 1:
            raise ValueError(f"ambient exponent must lie in [1, inf], got {ambient_p!r}")
        self.dim = int(dim)
        self.ambient_p = float(ambient_p)
        checked = []
        for k, term in enumerate(terms):
            mu, f, x = term if not isinstance(term, Term) else (term.mu, term.functional, term.vector)
            mu = complex(mu)
            if not (math.isfinite(mu.real) and math.isfinite(mu.imag)):
                raise ValueError(f"term {k}: mu must be finite")
            f, x = as_vector(f), as_vector(x)
            if f.size != self.dim or x.size != self.dim:
                raise ValueError(
                    f"term {k}: functional/vector lengths {f.size}/{x.size} differ from dim {self.dim}"
                )
            f.setflags(write=False)
            x.setflags(write=False)
            checked.append(Term(mu, f, x))
        self.terms: tuple[Term, ...] = tuple(checked)

    def __len__(self):
        return len(self.terms)

    def __add__(self, other: NuclearRepresentation) -> NuclearRepresentation:
        """Concatenate term lists (the tensor sum)."""
        if other.dim != self.dim:
            raise ValueError("cannot add representations of different dimension")
        return NuclearRepresentation(self.dim, self.terms + other.terms, self.ambient_p)

    def __repr__(self):
        return f"NuclearRepresentation(dim={self.dim}, terms={len(self.terms)}, ambient_p={self.ambient_p})"


def nuclear_trace(u: NuclearRepresentation) -> complex:
    """sum_k mu_k <functional_k, vector_k> with the bilinear pairing."""
    parts = [t.mu * complex(np.dot(t.functional, t.vector)) for t in u.terms]
    return complex(math.fsum(z.real for z in parts), math.fsum(z.imag for z in parts))


def induced_operator(u: NuclearRepresentation) -> np.ndarray:
    """Matrix of x -> sum_k mu_k <functional_k, x> vector_k."""
    m = np.zeros((u.dim, u.dim), dtype=np.complex128)
    for t in u.terms:
        m += t.mu * np.outer(t.vector, t.functional)
    return m


def s_quasinorm(u: NuclearRepresentation, s: float) -> float:
    """(sum_k |mu_k|^s ||f_k||_{p'}^s ||x_k||_p^s)^(1/s) for this representation.

    This is the value of one given representation, not the infimum over all
    representations of the same tensor.
    """
    if not 0 < s <= 1:
        raise ValueError(f"s must lie in (0, 1], got {s!r}")
    p = u.ambient_p
    q = dual_exponent(p)
    weights = [abs(t.mu) * lp_norm(t.functional, q) * lp_norm(t.vector, p) for t in u.terms]
    if not weights:
        return 0.0
    return math.fsum(w**s for w in weights) ** (1.0 / s)
