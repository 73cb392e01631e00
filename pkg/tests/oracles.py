"""Reference computations that share no code with the package."""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def naive_matmul(a, b):
    n = len(a)
    out = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            acc = 0j
            for k in range(n):
                acc += a[i][k] * b[k][j]
            out[i, j] = acc
    return out


def elementary_symmetric(eigs) -> np.ndarray:
    """e_0..e_n of the eigenvalues, read off from the expansion of prod (1 + t*lam)."""
    poly = [1 + 0j]
    for lam in eigs:
        nxt = poly + [0j]
        for k in range(len(poly)):
            nxt[k + 1] += lam * poly[k]
        poly = nxt
    return np.array(poly)


def exact_char_poly(rows) -> list[Fraction]:
    """Faddeev-LeVerrier in rational arithmetic: c with det(zI - A) = sum c[k] z^(n-k)."""
    n = len(rows)
    a = [[Fraction(x) for x in r] for r in rows]
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def mul(x, y):
        return [[sum(x[i][k] * y[k][j] for k in range(n)) for j in range(n)] for i in range(n)]

    c = [Fraction(1)]
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        m = [[m2 + c[-1] * id_ for m2, id_ in zip(rm, ri)] for rm, ri in zip(m, ident)]
        am = mul(a, m)
        c.append(-sum(am[i][i] for i in range(n)) / k)
        m = am
    return c


def exact_power_traces(rows, n_max: int) -> list[Fraction]:
    n = len(rows)
    a = [[Fraction(x) for x in r] for r in rows]
    p = a
    out = []
    for _ in range(n_max):
        out.append(sum(p[i][i] for i in range(n)))
        p = [[sum(p[i][k] * a[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return out
