"""
Bivariate maxmin (MM) and reflected maxmin (RMM) transforms, their n-step
iterates and their limit copulas.

All constructors return lazily evaluated :class:`BivariateCopula` objects.
RMM generators are checked with :func:`validate_g` when a transform is built;
flagged ``f(0) != 0`` exceptions are allowed.
"""
from __future__ import annotations

import numpy as np

from .copula import BivariateCopula
from .errors import ConvergenceError, ValidationError
from .generators import Generator, MMGenerator, from_mm, from_mm_psi
from .numerics import PRODUCT_MAX_TERMS, PRODUCT_TOL, truncated_product

__all__ = ["rmm", "mm", "rmm_iter", "mm_iter", "rmm_limit", "mm_limit", "shock_factor"]


def _check(gen: Generator, name: str):
    if not isinstance(gen, Generator):
        raise ValidationError(f"{name} must be a Generator, got {type(gen).__name__}")
    report = gen.report
    if not report.passed:
        raise ValidationError(f"generator {name}={gen.label} is invalid: " + "; ".join(report.failures))


def _check_mm(gen: MMGenerator, kind: str, name: str):
    if not isinstance(gen, MMGenerator) or gen.kind != kind:
        raise ValidationError(f"{name} must be an {kind} MM generator")


def _mul(a, b):
    """Product with ``0 * inf = 0``: a zero factor wins over an infinite one."""
    with np.errstate(invalid="ignore"):
        out = a * b
    return np.where((a == 0.0) | (b == 0.0), 0.0, out)


def shock_factor(fs, gs):
    """``max{0, 1 - fs * gs}`` with the infinite-flag convention."""
    return np.maximum(0.0, 1.0 - _mul(fs, gs))


def _ratio(x):
    """``x / (1 - x)`` on ``[0, 1]``, ``inf`` at 1."""
    with np.errstate(divide="ignore"):
        return np.where(x < 1.0, x / np.where(x < 1.0, 1.0 - x, 1.0), np.inf)


def _inv_ratio(x):
    """``(1 - x) / x`` on ``[0, 1]``, ``inf`` at 0."""
    with np.errstate(divide="ignore"):
        return np.where(x > 0.0, (1.0 - x) / np.where(x > 0.0, x, 1.0), np.inf)


def _rmm_scaled(C_dot, u, v, x, y):
    """``uv * C(x, y) / (xy)`` with 0 on the axes."""
    pos = (u > 0.0) & (v > 0.0)
    xs = np.where(pos, x, 1.0)
    ys = np.where(pos, y, 1.0)
    return np.where(pos, u * v * C_dot.evaluate(xs, ys) / (xs * ys), 0.0)


def rmm(C_dot: BivariateCopula, f: Generator, g: Generator) -> BivariateCopula:
    """RMM transform ``uv C(f^(u), g^(v)) / (f^(u) g^(v)) max{0, 1 - f*(u) g*(v)}``."""
    _check(f, "f")
    _check(g, "g")

    def func(u, v):
        x = f.f_hat(u)
        y = g.f_hat(v)
        return _rmm_scaled(C_dot, u, v, x, y) * shock_factor(f.star_func(u), g.star_func(v))

    return BivariateCopula(func, f"rmm({C_dot.label}; {f.label}, {g.label})")


def mm(C: BivariateCopula, phi: MMGenerator, psi: MMGenerator) -> BivariateCopula:
    """MM transform ``u + (C(phi(u), psi(v)) - phi(u)) max{0, phi*(u) - psi_*(v)}``."""
    _check_mm(phi, "F1", "phi")
    _check_mm(psi, "F2", "psi")

    def func(u, v):
        pu = phi._eval(u)
        pv = psi._eval(v)
        weight = np.maximum(0.0, phi.star(u) - psi.star(v))
        return u + (C.evaluate(pu, pv) - pu) * weight

    return BivariateCopula(func, f"mm({C.label}; {phi.label}, {psi.label})")


def rmm_iter(C_dot: BivariateCopula, f: Generator, g: Generator, n: int) -> BivariateCopula:
    """Closed form of the ``n``-fold RMM iterate; ``n = 0`` returns ``C_dot``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    _check(f, "f")
    _check(g, "g")
    if n == 0:
        return C_dot

    def func(u, v):
        x, y = u, v
        prod = np.ones(np.broadcast(u, v).shape)
        for _ in range(n):
            prod = prod * shock_factor(f.star_func(x), g.star_func(y))
            x = np.clip(x + f.func(x), 0.0, 1.0)
            y = np.clip(y + g.func(y), 0.0, 1.0)
        return _rmm_scaled(C_dot, u, v, x, y) * prod

    return BivariateCopula(func, f"rmm^{n}({C_dot.label}; {f.label}, {g.label})")


def mm_iter(C: BivariateCopula, phi: MMGenerator, psi: MMGenerator, n: int) -> BivariateCopula:
    """Closed form of the ``n``-fold MM iterate; ``n = 0`` returns ``C``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    _check_mm(phi, "F1", "phi")
    _check_mm(psi, "F2", "psi")
    if n == 0:
        return C

    def func(u, v):
        x, y = u, v
        prod = np.ones(np.broadcast(u, v).shape)
        for _ in range(n):
            prod = prod * shock_factor(_inv_ratio(phi.star(x)), _ratio(psi.star(y)))
            x = phi._eval(x)
            y = psi._eval(y)
        inner = (u > 0.0) & (v < 1.0)
        xs = np.where(inner, x, 1.0)
        ys = np.where(inner, y, 0.0)
        gap = (xs - C.evaluate(xs, ys)) / (xs * (1.0 - ys))
        return np.where(inner, u - u * (1.0 - v) * gap * prod, u)

    return BivariateCopula(func, f"mm^{n}({C.label}; {phi.label}, {psi.label})")


def _orbit_product(fs_step, gs_step, x0, y0, tol, max_terms):
    """``prod_k max{0, 1 - a(x_k) b(y_k)}`` along the generator orbits.

    ``fs_step(x)`` returns ``(a(x), next x)`` and likewise ``gs_step``.
    """
    state = {"x": x0, "y": y0}

    def term(k):
        a, state["x"] = fs_step(state["x"])
        b, state["y"] = gs_step(state["y"])
        return shock_factor(a, b)

    res = truncated_product(term, tol=tol, max_terms=max_terms)
    if not np.all(res.converged):
        used = int(np.max(res.terms_used))
        raise ConvergenceError(f"limit product did not converge after {used} terms", terms_used=used)
    return res.value


def rmm_limit(
    C_dot: BivariateCopula,
    f: Generator,
    g: Generator,
    tol: float = PRODUCT_TOL,
    max_terms: int = PRODUCT_MAX_TERMS,
) -> BivariateCopula:
    """Limit of the RMM iterates, evaluated corner by corner.

    With ``a = alpha(f)`` and ``b = alpha(g)``: ``C(u, v)`` for ``u >= a, v >= b``;
    ``(v/b) C(u, b)`` for ``u >= a, v < b``; ``(u/a) C(a, v)`` for ``u < a,
    v >= b``; and on the lower-left corner ``uv C(a, b)/(ab)`` times the infinite
    product of shock factors along the orbits of ``f^`` and ``g^``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    _check(f, "f")
    _check(g, "g")
    a, b = f.alpha, g.alpha

    def f_step(x):
        return f.star_func(x), np.clip(x + f.func(x), 0.0, 1.0)

    def g_step(y):
        return g.star_func(y), np.clip(y + g.func(y), 0.0, 1.0)

    def func(u, v):
        u, v = np.broadcast_arrays(u, v)
        out = np.zeros(u.shape)
        hi_u = u >= a
        hi_v = v >= b
        ne = hi_u & hi_v
        out[ne] = C_dot.evaluate(u[ne], v[ne])
        nw = hi_u & ~hi_v
        if nw.any():
            out[nw] = v[nw] / b * C_dot.evaluate(u[nw], b)
        se = ~hi_u & hi_v
        if se.any():
            out[se] = u[se] / a * C_dot.evaluate(a, v[se])
        sw = ~hi_u & ~hi_v & (u > 0.0) & (v > 0.0)
        if sw.any():
            us, vs = u[sw], v[sw]
            scale = us * vs * float(C_dot.evaluate(a, b)) / (a * b)
            out[sw] = scale * _orbit_product(f_step, g_step, us, vs, tol, max_terms)
        return out

    return BivariateCopula(func, f"rmm_limit({C_dot.label}; {f.label}, {g.label})")


def mm_limit(
    C: BivariateCopula,
    phi: MMGenerator,
    psi: MMGenerator,
    tol: float = PRODUCT_TOL,
    max_terms: int = PRODUCT_MAX_TERMS,
) -> BivariateCopula:
    """Limit of the MM iterates, evaluated corner by corner.

    ``a`` is the smallest point with ``phi = id`` on ``[a, 1]`` and ``1 - b`` the
    largest with ``psi = id`` on ``[0, 1 - b]``.  The four corners are
    ``C(u, v)``; ``(u/a) C(a, v)``; ``u - ((1-v)/b)(u - C(u, 1-b))``; and, for
    ``u < a, v > 1 - b``, either ``u`` (when ``phi*(u) <= psi_*(v)``) or ``u``
    minus a multiple of an infinite product along the generator orbits.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    _check_mm(phi, "F1", "phi")
    _check_mm(psi, "F2", "psi")
    a = from_mm(phi, check=False).alpha
    b = from_mm_psi(psi, check=False).alpha
    edge = 1.0 - b

    def phi_step(x):
        return _inv_ratio(phi.star(x)), phi._eval(x)

    def psi_step(y):
        return _ratio(psi.star(y)), psi._eval(y)

    def func(u, v):
        u, v = np.broadcast_arrays(u, v)
        out = np.array(u, dtype=float)
        hi_u = u >= a
        lo_v = v <= edge
        se = hi_u & lo_v
        out[se] = C.evaluate(u[se], v[se])
        sw = ~hi_u & lo_v
        if sw.any():
            out[sw] = u[sw] / a * C.evaluate(a, v[sw])
        ne = hi_u & ~lo_v
        if ne.any():
            us, vs = u[ne], v[ne]
            out[ne] = us - (1.0 - vs) / b * (us - C.evaluate(us, edge))
        nw = ~hi_u & ~lo_v & (u > 0.0) & (v < 1.0)
        if nw.any():
            us, vs = u[nw], v[nw]
            shortcut = phi.star(us) <= psi.star(vs)
            val = np.array(us)
            rest = ~shortcut
            if rest.any():
                ur, vr = us[rest], vs[rest]
                coef = ur * (1.0 - vr) / (a * b) * (a - float(C.evaluate(a, edge)))
                val[rest] = ur - coef * _orbit_product(phi_step, psi_step, ur, vr, tol, max_terms)
            out[nw] = val
        return out

    return BivariateCopula(func, f"mm_limit({C.label}; {phi.label}, {psi.label})")
