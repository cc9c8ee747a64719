"""Small shared numeric kernels: quadrature nodes, 1-d minimization, finite differences."""

from __future__ import annotations

import functools
import math

import numpy as np

_INV_GOLDEN = 2.0 / (1.0 + math.sqrt(5.0))


@functools.lru_cache(maxsize=64)
def _leggauss_cached(k: int):
    x, w = np.polynomial.legendre.leggauss(k)
    return x, w


def gauss_legendre(k: int, lo: float = -1.0, hi: float = 1.0):
    """Gauss-Legendre nodes and weights mapped to [lo, hi]."""
    x, w = _leggauss_cached(int(k))
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), w * half


def bracket_minimum(f, x0: float = 0.0, step: float = 1.0, max_expand: int = 80):
    """Expanding bracket around a minimum of a convex 1-d function.

    Doubles the step from x0 in both directions until the objective increases
    at both ends.  Returns (lo, hi) containing the minimizer.
    """
    f0 = f(x0)
    lo, hi = x0 - step, x0 + step
    flo, fhi = f(lo), f(hi)
    n = 0
    while flo < f0 and n < max_expand:
        step_l = (x0 - lo) * 2.0
        lo = x0 - step_l
        flo = f(lo)
        n += 1
    n = 0
    while fhi < f0 and n < max_expand:
        step_r = (hi - x0) * 2.0
        hi = x0 + step_r
        fhi = f(hi)
        n += 1
    return lo, hi


def golden_minimize(f, lo: float, hi: float, rel_tol: float = 1e-10, max_iter: int = 200):
    """Golden-section minimization of a unimodal function on [lo, hi].

    Returns (argmin, min).  Tolerance is relative to 1 + |argmin|.
    """
    a, b = float(lo), float(hi)
    x1 = b - _INV_GOLDEN * (b - a)
    x2 = a + _INV_GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if (b - a) <= rel_tol * (1.0 + abs(a) + abs(b)):
            break
        if f2 > f1:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_GOLDEN * (b - a)
            f2 = f(x2)
    xm = 0.5 * (a + b)
    return xm, f(xm)


def minimize_convex_1d(f, x0: float = 0.0, step: float = 1.0, rel_tol: float = 1e-10,
                       max_iter: int = 200):
    """Expanding bracket followed by golden section; for convex scalar objectives."""
    lo, hi = bracket_minimum(f, x0, step)
    return golden_minimize(f, lo, hi, rel_tol, max_iter)


def central_gradient(f, u: np.ndarray, rel_step: float = 1e-6) -> np.ndarray:
    """Central-difference gradient with step rel_step * ||u|| per coordinate."""
    u = np.asarray(u, dtype=float)
    h = rel_step * (np.linalg.norm(u) or 1.0)
    g = np.empty_like(u)
    for i in range(u.size):
        e = np.zeros_like(u)
        e[i] = h
        g[i] = (f(u + e) - f(u - e)) / (2.0 * h)
    return g


def one_sided_derivative(f, u: np.ndarray, w: np.ndarray, step: float = 1e-5) -> float:
    """Right derivative of t -> f(u + t w) at t=0, Richardson-extrapolated.

    Uses steps t and t/2 scaled by (1 + ||u||): the O(t) term of the one-sided
    expansion cancels, leaving O(t^2) error where f is C^2 along the ray.
    """
    u = np.asarray(u, dtype=float)
    w = np.asarray(w, dtype=float)
    if not np.any(w):
        return 0.0
    t = step * (1.0 + np.linalg.norm(u))
    f0 = f(u)
    d1 = (f(u + t * w) - f0) / t
    d2 = (f(u + 0.5 * t * w) - f0) / (0.5 * t)
    return 2.0 * d2 - d1


def tangential_hessian_eigs(f, v: np.ndarray, step: float = 1e-4) -> np.ndarray:
    """Eigenvalues of the finite-difference Hessian of f restricted to v-perp.

    v must be a unit vector; the Hessian is assembled in an orthonormal basis
    of the orthogonal complement and symmetrized before diagonalization.
    """
    v = np.asarray(v, dtype=float)
    d = v.size
    basis = _complement_basis(v)
    k = d - 1
    H = np.empty((k, k))
    f0 = f(v)
    for i in range(k):
        ei = step * basis[i]
        H[i, i] = (f(v + ei) - 2.0 * f0 + f(v - ei)) / step**2
        for j in range(i + 1, k):
            ej = step * basis[j]
            H[i, j] = H[j, i] = (
                f(v + ei + ej) - f(v + ei - ej) - f(v - ei + ej) + f(v - ei - ej)
            ) / (4.0 * step**2)
    return np.linalg.eigvalsh(0.5 * (H + H.T))


def _complement_basis(v: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of a unit vector."""
    d = v.size
    # Householder reflection mapping e_k -> v gives the remaining columns.
    k = int(np.argmax(np.abs(v)))
    w = v.copy()
    w[k] += math.copysign(1.0, v[k])
    w /= np.linalg.norm(w)
    Q = np.eye(d) - 2.0 * np.outer(w, w)
    cols = [i for i in range(d) if i != k]
    return Q[:, cols].T
