"""
Numeric kernels: adaptive tensor Gauss-Legendre quadrature on the unit square,
finite differences, bisection inversion of monotone functions and truncated
infinite products.

All functions are pure and vectorised over numpy arrays where that makes sense.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

__all__ = [
    "QuadratureResult",
    "ProductResult",
    "integrate2d",
    "central_diff",
    "invert_monotone",
    "truncated_product",
]

BASE_ORDER = 32
DIFF_STEP = 1e-5
PRODUCT_TOL = 1e-12
PRODUCT_MAX_TERMS = 10_000

# cells split per vectorised batch; bounds peak memory at ~batch * order**2 points
_SPLIT_BATCH = 256


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool = True


@dataclass(frozen=True)
class ProductResult:
    """Outcome of :func:`truncated_product`.

    For array-valued terms every field is an array of the broadcast shape.
    """

    value: float | np.ndarray
    terms_used: int | np.ndarray
    converged: bool | np.ndarray


@lru_cache(maxsize=8)
def _gauss_legendre(order):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _cell_rule(f, lo_u, hi_u, lo_v, hi_v, order):
    """Tensor Gauss-Legendre estimate for each cell of a batch."""
    x, w = _gauss_legendre(order)
    cu = 0.5 * (lo_u + hi_u)
    hu = 0.5 * (hi_u - lo_u)
    cv = 0.5 * (lo_v + hi_v)
    hv = 0.5 * (hi_v - lo_v)
    U = cu[:, None, None] + hu[:, None, None] * x[None, :, None]
    V = cv[:, None, None] + hv[:, None, None] * x[None, None, :]
    U, V = np.broadcast_arrays(U, V)
    vals = np.broadcast_to(np.asarray(f(U, V), dtype=float), U.shape)
    return hu * hv * np.einsum("mij,i,j->m", vals, w, w), U.size


def _split(lo_u, hi_u, lo_v, hi_v):
    mu = 0.5 * (lo_u + hi_u)
    mv = 0.5 * (lo_v + hi_v)
    # children ordered (SW, SE, NW, NE) per parent, parents contiguous
    clo_u = np.stack([lo_u, mu, lo_u, mu], axis=1).ravel()
    chi_u = np.stack([mu, hi_u, mu, hi_u], axis=1).ravel()
    clo_v = np.stack([lo_v, lo_v, mv, mv], axis=1).ravel()
    chi_v = np.stack([mv, mv, hi_v, hi_v], axis=1).ravel()
    return clo_u, chi_u, clo_v, chi_v


def integrate2d(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    tol: float = 1e-8,
    *,
    order: int = BASE_ORDER,
    initial: int = 2,
    max_evaluations: int = 50_000_000,
) -> QuadratureResult:
    """Integrate ``f`` over the unit square.

    A tensor Gauss-Legendre rule of the given order is applied on an
    ``initial x initial`` grid of cells.  Cells are then split dyadically
    (globally adaptive: the cells carrying most of the estimated error are split
    first) until the summed error estimate drops to ``tol`` or the evaluation
    budget is spent.  The error estimate of a split cell is the change between
    its own rule and the sum over its four children, shared equally among the
    children.

    ``f`` must accept two broadcastable float arrays and return an array of the
    same shape.  On non-convergence the best estimate is returned with
    ``error_estimate > tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    edges = np.linspace(0.0, 1.0, initial + 1)
    lo_u, lo_v = np.meshgrid(edges[:-1], edges[:-1], indexing="ij")
    hi_u, hi_v = np.meshgrid(edges[1:], edges[1:], indexing="ij")
    lo_u, hi_u, lo_v, hi_v = (a.ravel() for a in (lo_u, hi_u, lo_v, hi_v))
    q, evals = _cell_rule(f, lo_u, hi_u, lo_v, hi_v, order)
    est = np.full(q.shape, np.inf)

    while True:
        total = est.sum()
        if total <= tol or evals >= max_evaluations:
            break
        # split the largest-error cells holding at least half the total error
        ordering = np.argsort(est)[::-1]
        if np.isinf(total):
            chosen = ordering[np.isinf(est[ordering])]
        else:
            cum = np.cumsum(est[ordering])
            count = int(np.searchsorted(cum, 0.5 * total)) + 1
            chosen = ordering[: min(count, _SPLIT_BATCH)]
        keep = np.ones(q.shape, dtype=bool)
        keep[chosen] = False

        c_lo_u, c_hi_u, c_lo_v, c_hi_v = _split(lo_u[chosen], hi_u[chosen], lo_v[chosen], hi_v[chosen])
        cq, used = _cell_rule(f, c_lo_u, c_hi_u, c_lo_v, c_hi_v, order)
        evals += used
        delta = np.abs(q[chosen] - cq.reshape(-1, 4).sum(axis=1))
        c_est = np.repeat(delta / 4.0, 4)

        lo_u = np.concatenate([lo_u[keep], c_lo_u])
        hi_u = np.concatenate([hi_u[keep], c_hi_u])
        lo_v = np.concatenate([lo_v[keep], c_lo_v])
        hi_v = np.concatenate([hi_v[keep], c_hi_v])
        q = np.concatenate([q[keep], cq])
        est = np.concatenate([est[keep], c_est])

    total = float(est.sum())
    return QuadratureResult(float(q.sum()), total, int(evals), total <= tol)


def central_diff(f, x, h: float = DIFF_STEP, lo: float = 0.0, hi: float = 1.0):
    """Central difference ``(f(x+h) - f(x-h)) / 2h``.

    Evaluation points are clamped into ``[lo, hi]`` and the quotient uses the
    actual distance between them, so the formula degrades to a one-sided
    difference at the edges of the domain.  Works elementwise on arrays.
    """
    x = np.asarray(x, dtype=float)
    xp = np.minimum(x + h, hi)
    xm = np.maximum(x - h, lo)
    out = (np.asarray(f(xp), dtype=float) - np.asarray(f(xm), dtype=float)) / (xp - xm)
    return float(out) if out.ndim == 0 else out


def invert_monotone(F, t, tol: float = 1e-10):
    """Leftmost ``x`` in ``[0, 1]`` with ``F(x) >= t`` for nondecreasing ``F``.

    Bisection on the whole batch at once; ``F`` is called with arrays.  A jump
    of ``F`` at ``x0`` maps every ``t`` inside the jump to ``x0``, which is how
    atoms of a conditional distribution are reproduced.  Values of ``t`` at or
    below ``F(0)`` give 0, values above ``F(1)`` give 1.
    """
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    lo = np.zeros_like(t)
    hi = np.ones_like(t)
    f0 = np.asarray(F(lo), dtype=float)
    f1 = np.asarray(F(hi), dtype=float)
    at_zero = t <= f0
    above = t > f1
    steps = max(1, int(np.ceil(np.log2(1.0 / tol))))
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        right = np.asarray(F(mid), dtype=float) >= t
        hi = np.where(right, mid, hi)
        lo = np.where(right, lo, mid)
    x = np.where(at_zero, 0.0, np.where(above, 1.0, hi))
    return float(x[0]) if scalar else x


def truncated_product(
    term: Callable[[int], float | np.ndarray],
    tol: float = PRODUCT_TOL,
    max_terms: int = PRODUCT_MAX_TERMS,
) -> ProductResult:
    """Multiply ``term(0) * term(1) * ...`` for terms in ``[0, 1]``.

    ``term`` is called with ``k = 0, 1, 2, ...`` in order, so it may advance
    internal state between calls.  Multiplication stops once ``1 - term(k) <
    tol`` (the remaining factors are then treated as 1), when a term is exactly
    0, or after ``max_terms`` factors; only the last case reports
    ``converged=False``.  Array-valued terms are handled elementwise, each entry
    stopping independently.
    """
    first = np.asarray(term(0), dtype=float)
    scalar = first.ndim == 0
    first = np.atleast_1d(first)
    value = np.ones_like(first)
    used = np.zeros(first.shape, dtype=int)
    active = np.ones(first.shape, dtype=bool)
    converged = np.zeros(first.shape, dtype=bool)

    t = first
    k = 0
    while True:
        t = np.clip(t, 0.0, 1.0)
        zero = active & (t == 0.0)
        value[zero] = 0.0
        used[zero] = k + 1
        converged[zero] = True
        active &= ~zero

        value = np.where(active, value * t, value)
        used[active] = k + 1
        done = active & (1.0 - t < tol)
        converged[done] = True
        active &= ~done

        k += 1
        if not active.any() or k >= max_terms:
            break
        t = np.atleast_1d(np.asarray(term(k), dtype=float))

    if scalar:
        return ProductResult(float(value[0]), int(used[0]), bool(converged[0]))
    return ProductResult(value, used, converged)
