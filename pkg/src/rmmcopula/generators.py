"""
Generating functions of reflected maxmin (RMM) and maxmin (MM) transforms.

An RMM generator ``f`` comes with the auxiliaries ``f*(u) = f(u)/u`` and
``f^(u) = u + f(u)``, and with the fixed-point parameter ``alpha``: the
smallest ``u`` such that ``f`` vanishes identically on ``[u, 1]``.  Valid
generators satisfy

* (G1) ``f(0) = 0``, ``f(1) = 0``, ``f*(1) = 0``,
* (G2) ``f^`` nondecreasing on ``[0, 1]``,
* (G3) ``f*`` nonincreasing on ``(0, 1]``.

``f(0) != 0`` is tolerated and reported as an exception rather than a failure:
generators such as ``c(1 - u)`` still yield copulas because ``f*(0+) = inf``
forces a zero region along the axes.

MM generators come in two classes: ``F1`` (``phi``, with ``phi* = id/phi``
nondecreasing) and ``F2`` (``psi``, with ``psi_*(v) = (v - psi(v))/(1 - psi(v))``
nondecreasing).  They convert to RMM generators via ``f(u) = phi(u) - u`` and
``g(v) = 1 - v - psi(1 - v)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, ValidationError

__all__ = [
    "Generator",
    "GeneratorReport",
    "MMGenerator",
    "power",
    "scaled_complement",
    "quadratic",
    "tent",
    "trunc_linear",
    "zero",
    "tabulated",
    "from_function",
    "compute_alpha",
    "validate_g",
    "mm_identity",
    "mm_power",
    "mm_from_function",
    "check_mm_class",
    "from_mm",
    "from_mm_psi",
    "to_mm",
    "FAMILIES",
]

_ALPHA_GRID = 1001


def _arr(x):
    return np.asarray(x, dtype=float)


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


@dataclass(frozen=True, eq=False)
class Generator:
    """An RMM generating function.

    Instances are built by the family constructors (:func:`power`,
    :func:`quadratic`, ...) and are immutable; ``alpha`` is fixed at
    construction.
    """

    family: str
    params: tuple
    func: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    star_func: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    alpha: float = 1.0
    closed_form_alpha: bool = True
    knots: tuple | None = field(default=None, repr=False)

    @property
    def label(self):
        if not self.params:
            return self.family
        return f"{self.family}({', '.join(f'{p:g}' for p in self.params)})"

    def __call__(self, u):
        return _out(_arr(self.func(_arr(u))))

    def f_star(self, u):
        """``f(u)/u``; at ``u = 0`` the right limit, ``inf`` when it diverges."""
        return _out(_arr(self.star_func(_arr(u))))

    def f_hat(self, u):
        u = _arr(u)
        return _out(np.clip(u + self.func(u), 0.0, 1.0))

    def f_hat_iter(self, u, n: int):
        """``n``-fold composition of ``f^``; ``n = 0`` is the identity."""
        if n < 0:
            raise ValueError("n must be nonnegative")
        x = _arr(u)
        for _ in range(n):
            x = np.clip(x + self.func(x), 0.0, 1.0)
        return _out(x)

    def f_hat_limit(self, u):
        """Pointwise limit of the iterates of ``f^``."""
        u = _arr(u)
        out = np.where(u == 0.0, 0.0, np.where(u < self.alpha, self.alpha, u))
        return _out(out)

    @property
    def g1_exceptions(self):
        return tuple(self.report.exceptions)

    @cached_property
    def report(self):
        return validate_g(self)


def _star_from_f(f, u):
    """Generic ``f(u)/u`` with the right limit at 0 estimated numerically."""
    u = _arr(u)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = f(u) / u
    if np.any(u == 0.0):
        f0 = float(np.asarray(f(np.array(0.0))))
        if f0 > 0.0:
            limit = np.inf
        else:
            eps = 1e-12
            limit = float(np.asarray(f(np.array(eps)))) / eps
        val = np.where(u == 0.0, limit, val)
    return val


def power(a: float) -> Generator:
    """``f(u) = u^(1-a) - u`` for ``a`` in (0, 1)."""
    a = float(a)
    if not 0.0 < a < 1.0:
        raise DomainError(f"power generator needs a in (0, 1), got {a}")

    def func(u):
        return u ** (1.0 - a) - u

    def star(u):
        with np.errstate(divide="ignore"):
            return np.where(u > 0.0, u ** (-a) - 1.0, np.inf)

    return Generator("power", (a,), func, star, alpha=1.0)


def scaled_complement(c: float) -> Generator:
    """``f(u) = c(1 - u)`` for ``c`` in (0, 1]; note ``f(0) = c``."""
    c = float(c)
    if not 0.0 < c <= 1.0:
        raise DomainError(f"scaled_complement generator needs c in (0, 1], got {c}")

    def func(u):
        return c * (1.0 - u)

    def star(u):
        with np.errstate(divide="ignore"):
            return np.where(u > 0.0, c * (1.0 - u) / u, np.inf)

    return Generator("scaled_complement", (c,), func, star, alpha=1.0)


def quadratic(c: float) -> Generator:
    """``f(u) = c u (1 - u)`` for ``c`` in (0, 1]."""
    c = float(c)
    if not 0.0 < c <= 1.0:
        raise DomainError(f"quadratic generator needs c in (0, 1], got {c}")

    def func(u):
        return c * u * (1.0 - u)

    def star(u):
        return c * (1.0 - u)

    return Generator("quadratic", (c,), func, star, alpha=1.0)


def tent() -> Generator:
    """``f(u) = min(u, 1 - u)``."""

    def func(u):
        return np.minimum(u, 1.0 - u)

    def star(u):
        with np.errstate(divide="ignore"):
            return np.where(u > 0.0, np.minimum(1.0, (1.0 - u) / u), 1.0)

    return Generator("tent", (), func, star, alpha=1.0)


def trunc_linear(c: float, s: float) -> Generator:
    """``f(u) = c max(0, s - u)`` for ``c, s`` in (0, 1]; vanishes on ``[s, 1]``."""
    c, s = float(c), float(s)
    if not 0.0 < c <= 1.0:
        raise DomainError(f"trunc_linear generator needs c in (0, 1], got {c}")
    if not 0.0 < s <= 1.0:
        raise DomainError(f"trunc_linear generator needs s in (0, 1], got {s}")

    def func(u):
        return c * np.maximum(0.0, s - u)

    def star(u):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(u > 0.0, c * np.maximum(0.0, s - u) / u, np.inf)

    return Generator("trunc_linear", (c, s), func, star, alpha=s)


def zero() -> Generator:
    """The zero generator; its RMM transform is the identity."""

    def func(u):
        return np.zeros_like(u)

    return Generator("zero", (), func, func, alpha=0.0)


def tabulated(knots: Sequence[Sequence[float]]) -> Generator:
    """Piecewise linear generator through ``(u_i, f_i)`` knots.

    Knot abscissae must increase strictly from 0 to 1.  (G2) and (G3) are
    checked at knots and midpoints; a violation raises ValidationError.
    """
    pts = np.asarray(knots, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise DomainError("tabulated generator needs a list of (u, f) pairs")
    xs, ys = pts[:, 0], pts[:, 1]
    if xs[0] != 0.0 or xs[-1] != 1.0 or np.any(np.diff(xs) <= 0.0):
        raise DomainError("tabulated knots must increase strictly from 0 to 1")
    if np.any(ys < 0.0):
        raise DomainError("tabulated generator values must be nonnegative")

    def func(u):
        return np.interp(u, xs, ys)

    first_slope = ys[1] / xs[1]

    def star(u):
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.interp(u, xs, ys) / u
        limit = np.inf if ys[0] > 0.0 else first_slope
        return np.where(u > 0.0, val, limit)

    alpha = _scan_alpha(func, _ALPHA_GRID, extra=xs)
    gen = Generator(
        "tabulated",
        (),
        func,
        star,
        alpha=alpha,
        closed_form_alpha=False,
        knots=tuple(map(tuple, pts)),
    )
    report = gen.report
    if not report.passed:
        raise ValidationError("tabulated generator: " + "; ".join(report.failures))
    return gen


def from_function(func, label: str = "custom", star=None, alpha: float | None = None) -> Generator:
    """Wrap an arbitrary vectorised ``f``; ``alpha`` is found by a zero scan.

    The result is not validated here: call :func:`validate_g` (the transforms
    do so before use).
    """

    def f(u):
        return np.asarray(func(_arr(u)), dtype=float) * np.ones_like(_arr(u))

    star_func = star if star is not None else (lambda u: _star_from_f(f, u))
    closed = alpha is not None
    if alpha is None:
        alpha = _scan_alpha(f, _ALPHA_GRID)
    return Generator(label, (), f, star_func, alpha=float(alpha), closed_form_alpha=closed)


def _scan_alpha(f, grid_n, extra=None):
    """Smallest ``u`` with ``f = 0`` on ``[u, 1]``: grid scan, then bisection."""
    t = np.linspace(0.0, 1.0, grid_n)
    if extra is not None:
        t = np.union1d(t, np.asarray(extra, dtype=float))
    vals = np.asarray(f(t), dtype=float)
    positive = np.nonzero(vals[1:] > 0.0)[0]
    if positive.size == 0:
        return 0.0
    i = positive[-1] + 1
    if i >= t.size - 1:
        return 1.0
    lo, hi = t[i], t[i + 1]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if float(np.asarray(f(np.array(mid)))) > 0.0:
            lo = mid
        else:
            hi = mid
    return float(hi)


def compute_alpha(gen: Generator, grid_n: int = _ALPHA_GRID, closed_form: bool = True) -> float:
    """Fixed-point parameter of ``gen``.

    Families with an analytic value return it unless ``closed_form`` is False,
    in which case (and for tabulated/custom generators) the zero set of ``f`` is
    located by scanning an equispaced grid and bisecting at its left boundary.
    """
    if closed_form and gen.closed_form_alpha:
        return gen.alpha
    return _scan_alpha(gen.func, grid_n, extra=None if gen.knots is None else [k[0] for k in gen.knots])


@dataclass
class GeneratorReport:
    passed: bool
    failures: list
    exceptions: list

    def __str__(self):
        head = "PASS" if self.passed else "FAIL"
        parts = [head] + self.failures + [f"exception: {e}" for e in self.exceptions]
        return "; ".join(parts)


def validate_g(gen: Generator, grid_n: int = _ALPHA_GRID, tol: float = 1e-12) -> GeneratorReport:
    """Check (G1)-(G3) on a grid (plus knots and midpoints for tabulated rules)."""
    if grid_n < 3:
        raise ValueError("grid_n must be at least 3")
    t = np.linspace(0.0, 1.0, grid_n)
    if gen.knots is not None:
        xs = np.array([k[0] for k in gen.knots])
        t = np.union1d(t, np.concatenate([xs, 0.5 * (xs[1:] + xs[:-1])]))
    f = np.asarray(gen.func(t), dtype=float)
    failures, exceptions = [], []

    if not np.isfinite(f).all():
        failures.append("f takes non-finite values")
        return GeneratorReport(False, failures, exceptions)
    if abs(f[-1]) > tol:
        failures.append(f"(G1) f(1) = {f[-1]:.3g} != 0")
    star_one = float(np.asarray(gen.star_func(np.array(1.0))))
    if abs(star_one) > tol:
        failures.append(f"(G1) f*(1) = {star_one:.3g} != 0")
    if abs(f[0]) > tol:
        exceptions.append(f"f(0) = {f[0]:.6g} != 0")

    hat = t + f
    if hat.min() < -tol or hat.max() > 1.0 + tol:
        failures.append("f^ leaves [0, 1]")
    dh = np.diff(hat)
    if dh.min() < -tol:
        failures.append(f"(G2) f^ decreases by {-dh.min():.3g}")

    inner = t[1:]
    star = np.asarray(gen.star_func(inner), dtype=float)
    ds = np.diff(star)
    scale = np.maximum(1.0, np.abs(star[:-1]))
    if np.any(ds > tol * scale):
        failures.append(f"(G3) f* increases by {ds.max():.3g}")
    return GeneratorReport(not failures, failures, exceptions)


# --- MM generators ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MMGenerator:
    """A maxmin generating function of class ``F1`` (phi) or ``F2`` (psi)."""

    kind: str
    func: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    label: str = "custom"
    family: str = "custom"
    params: tuple = ()
    source: Generator | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in ("F1", "F2"):
            raise DomainError(f"MM generator kind must be F1 or F2, got {self.kind!r}")

    def __call__(self, x):
        return _out(np.clip(np.asarray(self.func(_arr(x)), dtype=float), 0.0, 1.0))

    def _eval(self, x):
        return np.clip(np.asarray(self.func(x), dtype=float) * np.ones_like(x), 0.0, 1.0)

    def star(self, x):
        """``phi*(u) = u/phi(u)`` for F1, ``psi_*(v) = (v - psi(v))/(1 - psi(v))`` for F2."""
        x = _arr(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.kind == "F1":
                safe = np.where(x > 0.0, x, 1e-300)
                out = safe / self._eval(safe)
            else:
                y = self._eval(x)
                out = np.where(x < 1.0, (x - y) / (1.0 - y), 1.0)
        return _out(out)

    def iterate(self, x, n: int):
        """``n``-fold composition; ``n = 0`` is the identity."""
        if n < 0:
            raise ValueError("n must be nonnegative")
        x = _arr(x)
        for _ in range(n):
            x = self._eval(x)
        return _out(x)

    @cached_property
    def alpha(self):
        """Fixed-point parameter of the associated RMM generator.

        For F1 the smallest ``u`` with ``phi = id`` on ``[u, 1]``; for F2 the
        number ``beta`` such that ``1 - beta`` is the largest ``v`` with
        ``psi = id`` on ``[0, v]``.
        """
        rmm = from_mm(self, check=False) if self.kind == "F1" else from_mm_psi(self, check=False)
        return rmm.alpha


def mm_identity(kind: str = "F1") -> MMGenerator:
    return MMGenerator(kind, lambda x: x, label="identity", family="identity")


def mm_power(exponent: float) -> MMGenerator:
    """F1 generator ``phi(u) = u^exponent`` for exponent in (0, 1]."""
    e = float(exponent)
    if not 0.0 < e <= 1.0:
        raise DomainError(f"phi exponent must lie in (0, 1], got {e}")
    return MMGenerator("F1", lambda x: x**e, label=f"u^{e:g}", family="power", params=(e,))


def mm_from_function(kind: str, func, label: str = "custom") -> MMGenerator:
    return MMGenerator(kind, func, label=label)


def check_mm_class(
    gen: MMGenerator, grid_n: int = _ALPHA_GRID, tol: float = 1e-12, endpoints: bool = True
) -> list:
    """Return the list of class violations of an MM generator on a grid.

    ``endpoints=False`` skips the endpoint condition that mirrors ``f(0) = 0``
    (``phi(0) = 0`` for F1, ``psi(1) = 1`` for F2).
    """
    t = np.linspace(0.0, 1.0, grid_n)
    vals = gen._eval(t)
    problems = []
    if abs(vals[0]) > tol and (endpoints or gen.kind == "F2"):
        problems.append(f"{gen.kind}: value at 0 is {vals[0]:.3g}, expected 0")
    if abs(vals[-1] - 1.0) > tol and (endpoints or gen.kind == "F1"):
        problems.append(f"{gen.kind}: value at 1 is {vals[-1]:.3g}, expected 1")
    if np.diff(vals).min() < -tol:
        problems.append(f"{gen.kind}: not nondecreasing")
    pts = t[1:] if gen.kind == "F1" else t
    star = np.asarray(gen.star(pts), dtype=float)
    if np.diff(star).min() < -tol * 10:
        problems.append(f"{gen.kind}: auxiliary star function not nondecreasing")
    return problems


def _require_class(gen, kind, check):
    if gen.kind != kind:
        raise ValidationError(f"expected an {kind} generator, got {gen.kind}")
    if check:
        problems = check_mm_class(gen)
        if problems:
            raise ValidationError("; ".join(problems))


def from_mm(phi: MMGenerator, check: bool = True) -> Generator:
    """RMM generator ``f(u) = phi(u) - u`` of an F1 generator."""
    _require_class(phi, "F1", check)
    if phi.source is not None:
        return phi.source
    if phi.family == "identity":
        return zero()
    if phi.family == "power":
        (e,) = phi.params
        return zero() if e == 1.0 else power(1.0 - e)
    return from_function(lambda u: phi._eval(u) - u, label=f"from_phi[{phi.label}]")


def from_mm_psi(psi: MMGenerator, check: bool = True) -> Generator:
    """RMM generator ``g(v) = 1 - v - psi(1 - v)`` of an F2 generator."""
    _require_class(psi, "F2", check)
    if psi.source is not None:
        return psi.source
    if psi.family == "identity":
        return zero()
    return from_function(lambda v: 1.0 - v - psi._eval(1.0 - v), label=f"from_psi[{psi.label}]")


def to_mm(gen: Generator, kind: str = "F1", check: bool = True) -> MMGenerator:
    """Inverse of :func:`from_mm` (F1) or :func:`from_mm_psi` (F2)."""
    if kind == "F1":
        out = MMGenerator("F1", lambda u: u + gen.func(u), label=f"phi[{gen.label}]", source=gen)
    elif kind == "F2":
        out = MMGenerator("F2", lambda w: w - gen.func(1.0 - w), label=f"psi[{gen.label}]", source=gen)
    else:
        raise DomainError(f"kind must be F1 or F2, got {kind!r}")
    if check:
        problems = check_mm_class(out, endpoints=not gen.report.exceptions)
        if problems:
            raise ValidationError(f"{gen.label} does not convert to {kind}: " + "; ".join(problems))
    return out


FAMILIES = {
    "power": (power, ("a",)),
    "scaled_complement": (scaled_complement, ("c",)),
    "quadratic": (quadratic, ("c",)),
    "tent": (tent, ()),
    "trunc_linear": (trunc_linear, ("c", "s")),
    "zero": (zero, ()),
    "tabulated": (tabulated, ("knots",)),
}
