"""
Bivariate copulas as immutable, lazily evaluated function objects.

A :class:`BivariateCopula` wraps a vectorised evaluator ``(u, v) -> C(u, v)``.
Transforms build new copulas on top of existing ones, so an iterate or a limit
is an expression tree that is evaluated pointwise on demand.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "BivariateCopula",
    "Rectangle",
    "CopulaReport",
    "flip_second",
    "flip_first",
    "volume",
    "validate_copula",
    "builtin",
    "independence",
    "upper_bound",
    "lower_bound",
    "efgm",
    "clayton",
    "BUILTIN_NAMES",
]


def _as_unit(x, name):
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"{name} must lie in [0, 1]")
    return arr


def _scalar_or_array(out):
    return float(out) if np.ndim(out) == 0 else out


class BivariateCopula:
    """An evaluable 2-copula.

    Parameters
    ----------
    func : callable
        Vectorised evaluator taking two broadcastable float arrays in ``[0, 1]``.
    label : str
        Human readable description of how the copula was constructed.
    """

    __slots__ = ("_func", "label")

    def __init__(self, func, label):
        self._func = func
        self.label = label

    def __repr__(self):
        return f"BivariateCopula({self.label})"

    def raw(self, u, v):
        """Evaluate without domain checks or clamping (used by validation)."""
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        return np.asarray(self._func(u, v), dtype=float)

    def evaluate(self, u, v):
        """Evaluate on arrays already known to lie in the unit square.

        The result is clamped into the Frechet-Hoeffding band to absorb
        roundoff before it reaches downstream ``max{0, .}`` factors.
        """
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        out = np.asarray(self._func(u, v), dtype=float)
        return np.clip(out, np.maximum(0.0, u + v - 1.0), np.minimum(u, v))

    def __call__(self, u, v):
        u = _as_unit(u, "u")
        v = _as_unit(v, "v")
        return _scalar_or_array(self.evaluate(u, v))

    def diagonal(self, t):
        """The diagonal section ``t -> C(t, t)``."""
        t = _as_unit(t, "t")
        return _scalar_or_array(self.evaluate(t, t))


@dataclass(frozen=True)
class Rectangle:
    u_lo: float
    u_hi: float
    v_lo: float
    v_hi: float

    def __post_init__(self):
        for name in ("u_lo", "u_hi", "v_lo", "v_hi"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise DomainError(f"{name}={val} outside [0, 1]")
        if self.u_lo > self.u_hi or self.v_lo > self.v_hi:
            raise DomainError("rectangle bounds must satisfy lo <= hi")


def flip_second(C: BivariateCopula) -> BivariateCopula:
    """Reflection in the second variable, ``u - C(u, 1 - v)``."""

    def func(u, v):
        return u - C.evaluate(u, 1.0 - v)

    return BivariateCopula(func, f"flip2({C.label})")


def flip_first(C: BivariateCopula) -> BivariateCopula:
    """Reflection in the first variable, ``v - C(1 - u, v)``."""

    def func(u, v):
        return v - C.evaluate(1.0 - u, v)

    return BivariateCopula(func, f"flip1({C.label})")


def volume(C: BivariateCopula, rect: Rectangle) -> float:
    """C-volume of a rectangle."""
    return float(
        C.evaluate(rect.u_hi, rect.v_hi)
        - C.evaluate(rect.u_hi, rect.v_lo)
        - C.evaluate(rect.u_lo, rect.v_hi)
        + C.evaluate(rect.u_lo, rect.v_lo)
    )


@dataclass
class CopulaReport:
    """Worst violation per copula axiom on a grid; ``passed`` if all within tol."""

    grid_n: int
    tol: float
    groundedness: float
    margins: float
    volume: float
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def __str__(self):
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} grid={self.grid_n} tol={self.tol:g} "
            f"groundedness={self.groundedness:.3e} margins={self.margins:.3e} "
            f"min_volume={self.volume:.3e}"
        )


def validate_copula(C: BivariateCopula, grid_n: int = 101, tol: float = 1e-9) -> CopulaReport:
    """Check groundedness, uniform margins and 2-increasingness on a grid.

    Uses the unclamped evaluator so that a non-copula cannot hide behind the
    Frechet band clamp.
    """
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    t = np.linspace(0.0, 1.0, grid_n)
    U, V = np.meshgrid(t, t, indexing="ij")
    G = C.raw(U, V)
    grounded = max(np.max(np.abs(G[:, 0])), np.max(np.abs(G[0, :])))
    margins = max(np.max(np.abs(G[:, -1] - t)), np.max(np.abs(G[-1, :] - t)))
    vols = G[1:, 1:] - G[1:, :-1] - G[:-1, 1:] + G[:-1, :-1]
    min_vol = float(np.min(vols))

    failures = []
    if not np.isfinite(G).all():
        failures.append("non-finite values")
    if grounded > tol:
        failures.append(f"groundedness violated by {grounded:.3e}")
    if margins > tol:
        failures.append(f"margins violated by {margins:.3e}")
    if min_vol < -tol:
        failures.append(f"negative rectangle volume {min_vol:.3e}")
    return CopulaReport(grid_n, tol, float(grounded), float(margins), min_vol, failures)


def independence() -> BivariateCopula:
    return BivariateCopula(lambda u, v: u * v, "pi")


def upper_bound() -> BivariateCopula:
    return BivariateCopula(np.minimum, "m")


def lower_bound() -> BivariateCopula:
    return BivariateCopula(lambda u, v: np.maximum(0.0, u + v - 1.0), "w")


def efgm(theta: float) -> BivariateCopula:
    """Eyraud-Farlie-Gumbel-Morgenstern copula ``uv + theta u(1-u) v(1-v)``."""
    theta = float(theta)
    if not -1.0 <= theta <= 1.0:
        raise DomainError(f"EFGM parameter theta={theta} must lie in [-1, 1]")

    def func(u, v):
        return u * v + theta * u * (1.0 - u) * v * (1.0 - v)

    return BivariateCopula(func, f"efgm({theta:g})")


def clayton(theta: float) -> BivariateCopula:
    """Clayton copula ``max(u^-t + v^-t - 1, 0)^(-1/t)`` for t in [-1, inf) minus 0."""
    theta = float(theta)
    if theta < -1.0 or theta == 0.0 or not np.isfinite(theta):
        raise DomainError(f"Clayton parameter theta={theta} must lie in [-1, inf) and be nonzero")

    def func(u, v):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            inner = np.maximum(u ** (-theta) + v ** (-theta) - 1.0, 0.0)
            out = inner ** (-1.0 / theta)
        return np.where((u == 0.0) | (v == 0.0), 0.0, out)

    return BivariateCopula(func, f"clayton({theta:g})")


_BUILTINS = {
    "pi": (independence, 0),
    "m": (upper_bound, 0),
    "w": (lower_bound, 0),
    "efgm": (efgm, 1),
    "clayton": (clayton, 1),
}
BUILTIN_NAMES = tuple(_BUILTINS)


def builtin(name: str, *params) -> BivariateCopula:
    """Construct a built-in copula by name: pi, m, w, efgm(theta), clayton(theta)."""
    key = name.lower()
    if key not in _BUILTINS:
        raise DomainError(f"unknown copula {name!r}; expected one of {', '.join(BUILTIN_NAMES)}")
    ctor, arity = _BUILTINS[key]
    if len(params) != arity:
        raise DomainError(f"{name} takes {arity} parameter(s), got {len(params)}")
    return ctor(*params)
