"""Monomial test functions on spheres.

The certification routines test designs against the raw monomial basis
x^alpha of P_t(S^d).  Sphere averages are computed exactly with integer
double factorials and only converted to float at the end.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

MultiIndex = tuple[int, ...]


def _compositions(k: int, parts: int):
    # exponent vectors of total degree k, lexicographically descending
    if parts == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _compositions(k - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _basis(D: int, t: int) -> tuple[MultiIndex, ...]:
    out = []
    for k in range(t + 1):
        out.extend(_compositions(k, D))
    return tuple(out)


def monomial_basis(D: int, t: int) -> np.ndarray:
    """All exponent vectors of degree <= t in D variables, graded-lex order.

    Returns an integer array of shape (C(t+D, D), D).

    >>> monomial_basis(2, 1).tolist()
    [[0, 0], [1, 0], [0, 1]]
    """
    if D < 1 or t < 0:
        raise ValueError(f"need D >= 1 and t >= 0, got D={D}, t={t}")
    basis = np.array(_basis(D, t), dtype=np.int64).reshape(-1, D)
    assert len(basis) == comb(t + D, D)
    return basis


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def sphere_average_exact(alpha, d: int | None = None) -> Fraction:
    """Exact normalized average of x^alpha over S^d as a Fraction."""
    alpha = tuple(int(a) for a in alpha)
    if d is None:
        d = len(alpha) - 1
    if len(alpha) != d + 1:
        raise ValueError(f"exponent vector of length {len(alpha)} does not live on S^{d}")
    if any(a % 2 for a in alpha):
        return Fraction(0)
    k = sum(alpha) // 2
    num = 1
    for a in alpha:
        num *= _double_factorial(a - 1)
    den = 1
    for j in range(1, k + 1):
        den *= d + 2 * j - 1
    return Fraction(num, den)


def sphere_average(alpha, d: int | None = None) -> float:
    return float(sphere_average_exact(alpha, d))


def sphere_averages(exps: np.ndarray) -> np.ndarray:
    exps = np.atleast_2d(exps)
    return np.array([sphere_average(a) for a in exps])


def monomial_sup(alpha) -> float:
    """sup of x^alpha over the unit sphere.

    Odd coordinates can always be sign-flipped, so this is also sup |x^alpha|;
    the maximum is attained at x_i = sqrt(alpha_i / |alpha|).
    """
    alpha = [int(a) for a in alpha]
    k = sum(alpha)
    if k == 0:
        return 1.0
    out = 1.0
    for a in alpha:
        if a:
            out *= (a / k) ** (a / 2)
    return out


def monomial_sups(exps: np.ndarray) -> np.ndarray:
    exps = np.atleast_2d(exps)
    return np.array([monomial_sup(a) for a in exps])


def monomial_maximizer(alpha) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    k = alpha.sum()
    if k == 0:
        x = np.zeros(len(alpha))
        x[0] = 1.0
        return x
    return np.sqrt(alpha / k)


def monomial_values(points: np.ndarray, exps: np.ndarray) -> np.ndarray:
    """Evaluate every monomial in ``exps`` at every point.

    points has shape (n, D), exps shape (K, D); returns shape (n, K).
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    exps = np.atleast_2d(np.asarray(exps, dtype=np.int64))
    n, D = points.shape
    if exps.shape[1] != D:
        raise ValueError(f"monomials in {exps.shape[1]} variables, points in {D}")
    top = int(exps.max()) if exps.size else 0
    # powers[j, e, :] = x_j^e
    powers = np.ones((D, top + 1, n))
    for e in range(1, top + 1):
        powers[:, e, :] = powers[:, e - 1, :] * points.T
    out = np.ones((n, len(exps)))
    for j in range(D):
        out *= powers[j, exps[:, j], :].T
    return out
