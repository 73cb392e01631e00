"""Fredholm determinant coefficients from power traces.

Convention: det(1 - zT) = sum_n (-1)**n alpha[n] z**n, so alpha[n] is the n-th
elementary symmetric function of the eigenvalues and alpha[1] = trace T.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOL, SpectrumMultiset, Tolerance, canonical_order, single_linkage_components
from .traces import TraceSequence

__all__ = [
    "DetCoefficients",
    "det_coeffs_from_traces",
    "det_eval_series",
    "det_eval_product",
    "det_zeros",
    "inverse_zeros",
    "d_even_check",
    "ROOT_BACKWARD_TOL",
]

# coefficient change tolerated when a group of computed roots is collapsed to one multiple root
ROOT_BACKWARD_TOL = 1e-12


@dataclass(frozen=True)
class DetCoefficients:
    alpha: tuple[complex, ...]

    def __post_init__(self):
        a = tuple(complex(x) for x in self.alpha)
        if not a or a[0] != 1:
            raise ValueError("alpha[0] must be exactly 1")
        object.__setattr__(self, "alpha", a)

    @property
    def n_max(self) -> int:
        return len(self.alpha) - 1

    def as_array(self) -> np.ndarray:
        return np.array(self.alpha, dtype=np.complex128)

    def series_coefficients(self) -> np.ndarray:
        """Ascending coefficients of z**n, i.e. (-1)**n alpha[n]."""
        a = self.as_array()
        return a * (-1.0) ** np.arange(a.size)


def det_coeffs_from_traces(s: TraceSequence) -> DetCoefficients:
    """Newton/Plemelj recursion n*alpha[n] = sum_j (-1)**(j-1) s_j alpha[n-j]."""
    p = s.as_array()
    alpha = [1 + 0j]
    for n in range(1, p.size + 1):
        acc = 0j
        for j in range(1, n + 1):
            term = p[j - 1] * alpha[n - j]
            acc += term if j % 2 else -term
        alpha.append(acc / n)
    return DetCoefficients(tuple(alpha))


def det_eval_series(c: DetCoefficients, z: complex) -> complex:
    """Horner evaluation of sum_n (-1)**n alpha[n] z**n."""
    acc = 0j
    for coef in c.series_coefficients()[::-1]:
        acc = acc * z + coef
    return complex(acc)


def det_eval_product(spec: SpectrumMultiset, tr: complex, z: complex) -> complex:
    """e^{-z tr} prod_i ((1 - z lam_i) e^{z lam_i})^{mult_i}."""
    out = cmath.exp(-z * tr)
    for lam, mult in spec.values:
        out *= ((1 - z * lam) * cmath.exp(z * lam)) ** mult
    return out


def _trimmed(c: DetCoefficients, tol: Tolerance) -> np.ndarray:
    a = c.as_array()
    thr = tol.threshold(float(np.abs(a).max()))
    last = 0
    for n in range(a.size - 1, 0, -1):
        if abs(a[n]) > thr:
            last = n
            break
    return a[: last + 1]


def inverse_zeros(c: DetCoefficients, tol: Tolerance = DEFAULT_TOL) -> SpectrumMultiset:
    """Inverses of the determinant's zeros, i.e. the nonzero eigenvalues it encodes.

    These are the roots of the reversed polynomial w**N - alpha[1] w**(N-1) + ...,
    found as eigenvalues of its companion matrix and then grouped into
    multiple roots (see :func:`_multiplicity_structure`).
    """
    a = _trimmed(c, tol)
    deg = a.size - 1
    if deg == 0:
        return SpectrumMultiset(())
    # monic prod (w - lam_i) = sum_n (-1)**n alpha[n] w**(deg - n)
    mono = a * (-1.0) ** np.arange(a.size)
    comp = np.zeros((deg, deg), dtype=np.complex128)
    comp[0, :] = -mono[1:]
    if deg > 1:
        comp[np.arange(1, deg), np.arange(deg - 1)] = 1.0
    roots = np.linalg.eigvals(comp)
    spec = _multiplicity_structure(mono, roots)
    # anything the structure search left as separate but indistinguishable at tol
    return _merge_weighted(spec, tol)


def _merge_weighted(spec: SpectrumMultiset, tol: Tolerance) -> SpectrumMultiset:
    if len(spec.values) < 2:
        return spec
    z = np.array([v for v, _ in spec.values])
    m = np.array([k for _, k in spec.values])
    items = [
        (complex(np.average(z[g], weights=m[g])), int(m[g].sum()))
        for g in single_linkage_components(z, tol.threshold(spec.scale))
    ]
    return SpectrumMultiset(canonical_order(items))


def _monic_powers(roots, mults) -> np.ndarray:
    return np.poly(np.repeat(roots, mults)).astype(np.complex128)


def _structured_fit(mono: np.ndarray, z0: np.ndarray, mults: list[int], iters: int = 40):
    """Gauss-Newton fit of prod (w - z_j)**m_j to monic coefficients ``mono``.

    Returns the fitted distinct roots and the weighted max residual.  With the
    multiplicity structure fixed, distinct roots are well conditioned even
    where unstructured root-finding smears an m-fold root by noise**(1/m).
    Steps are halved until the residual decreases.
    """
    weight = 1.0 / np.maximum(1.0, np.abs(mono[1:]))
    m = np.asarray(mults, dtype=float)

    def residual(zz):
        return (_monic_powers(zz, mults)[1:] - mono[1:]) * weight

    z = z0.astype(np.complex128)
    r = residual(z)
    res = float(np.abs(r).max())
    for _ in range(iters):
        if res <= 1e-3 * ROOT_BACKWARD_TOL:
            break
        p = _monic_powers(z, mults)
        # d/dz_j prod = -m_j * p / (w - z_j); synthetic division for all j at once
        q = np.empty((p.size - 1, z.size), dtype=np.complex128)
        q[0] = 1.0
        for k in range(1, p.size - 1):
            q[k] = p[k] + z * q[k - 1]
        jac = -(q * m) * weight[:, None]
        step = np.linalg.lstsq(jac, -r, rcond=None)[0]
        for _ in range(12):
            z_new = z + step
            r_new = residual(z_new)
            res_new = float(np.abs(r_new).max())
            if res_new < res:
                break
            step = step / 2
        else:
            break
        z, r, res = z_new, r_new, res_new
    return z, res


def _multiplicity_structure(mono: np.ndarray, roots: np.ndarray) -> SpectrumMultiset:
    """Group computed roots into multiple roots by structured backward error.

    Candidate groups are single-linkage components of the roots at
    increasing radii (they nest).  A group is accepted as one multiple root
    when the polynomial with that structure, refitted by
    :func:`_structured_fit`, reproduces the coefficients within
    ``ROOT_BACKWARD_TOL``.  Forcing two distinct roots a distance h apart
    together leaves a residual of order h**2, so only genuine splits pass.
    """
    n = roots.size
    groups: list[list[int]] = [[i] for i in range(n)]

    def fit(gs, start):
        z0 = np.array([start[tuple(g)] if tuple(g) in start else roots[g].mean() for g in gs])
        return _structured_fit(mono, z0, [len(g) for g in gs])

    fitted, _ = fit(groups, {})
    scale = float(np.abs(roots).max())
    if n < 2 or scale == 0:
        return SpectrumMultiset(tuple((complex(v), len(g)) for v, g in zip(fitted, groups)))
    dist = np.abs(roots[:, None] - roots[None, :])
    radii = np.unique(dist[np.triu_indices(n, k=1)])
    candidates = []
    for r in radii[radii <= 0.5 * scale]:
        for comp in single_linkage_components(roots, r):
            if len(comp) > 1 and sorted(comp) not in candidates:
                candidates.append(sorted(comp))
    # accepting one cluster sharpens the fit around its neighbours, so sweep until stable
    for _ in range(4):
        changed = False
        for comp in candidates:
            key = frozenset(comp)
            if any(key <= frozenset(g) for g in groups):
                continue
            trial = [g for g in groups if not key.issuperset(g)] + [comp]
            z, res = fit(trial, {tuple(g): v for g, v in zip(groups, fitted)})
            if res <= ROOT_BACKWARD_TOL:
                groups, fitted, changed = trial, z, True
        if not changed:
            break
    return SpectrumMultiset(tuple((complex(v), len(g)) for v, g in zip(fitted, groups)))


def det_zeros(c: DetCoefficients, tol: Tolerance = DEFAULT_TOL) -> SpectrumMultiset:
    """Zeros of det(1 - zT) with multiplicities; empty when the determinant is constant."""
    return inverse_zeros(c, tol).inverted()


def d_even_check(c: DetCoefficients, d: int, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, int | None]:
    """A series is d-even iff only exponents divisible by d survive."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    a = c.as_array()
    thr = tol.threshold(float(np.abs(a).max()))
    for n in range(1, a.size):
        if n % d and abs(a[n]) > thr:
            return False, n
    return True, None
