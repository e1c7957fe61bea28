"""
Dependence measures of bivariate copulas: Spearman's rho and Kendall's tau by
quadrature, tail-dependence coefficients, quadrant dependence, Monte Carlo
estimates from samples, and the power-generator rho/tau tables.
"""
from __future__ import annotations

import csv
import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .copula import BivariateCopula, clayton, flip_second, independence, lower_bound, upper_bound
from .errors import ValidationError
from .generators import power
from .numerics import DIFF_STEP, integrate2d
from .transforms import rmm_iter, rmm_limit

__all__ = [
    "MeasureReport",
    "TableCell",
    "TableConfig",
    "QuadrantClass",
    "spearman_rho",
    "kendall_tau",
    "tail_coefficients",
    "quadrant_class",
    "is_nqd",
    "is_pqd",
    "table_base",
    "table_run",
    "write_table_csv",
    "estimate_measures",
    "TABLE_BASES",
]

_QUAD_BUDGET = 20_000_000


@dataclass(frozen=True)
class MeasureReport:
    kind: str
    value: float
    error_estimate: float
    method: str
    converged: bool = True

    def __str__(self):
        return f"{self.kind} = {self.value:.6f} +/- {self.error_estimate:.1e} ({self.method})"


def spearman_rho(C: BivariateCopula, tol: float = 1e-5, max_evaluations: int = _QUAD_BUDGET) -> MeasureReport:
    """``12 * integral of C over the unit square - 3``; ``tol`` bounds the error on rho."""
    res = integrate2d(lambda u, v: C.evaluate(u, v), tol=tol / 12.0, max_evaluations=max_evaluations)
    return MeasureReport("rho", 12.0 * res.value - 3.0, 12.0 * res.error_estimate, "quadrature", res.converged)


def _partials(C: BivariateCopula, h: float):
    def integrand(u, v):
        up, um = np.minimum(u + h, 1.0), np.maximum(u - h, 0.0)
        vp, vm = np.minimum(v + h, 1.0), np.maximum(v - h, 0.0)
        du = (C.evaluate(up, v) - C.evaluate(um, v)) / (up - um)
        dv = (C.evaluate(u, vp) - C.evaluate(u, vm)) / (vp - vm)
        return np.clip(du, 0.0, 1.0) * np.clip(dv, 0.0, 1.0)

    return integrand


def kendall_tau(
    C: BivariateCopula, tol: float = 4e-4, h: float = DIFF_STEP, max_evaluations: int = _QUAD_BUDGET
) -> MeasureReport:
    """``1 - 4 * integral of C_u C_v``, partials by clamped central differences."""
    res = integrate2d(_partials(C, h), tol=tol / 4.0, max_evaluations=max_evaluations)
    return MeasureReport("tau", 1.0 - 4.0 * res.value, 4.0 * res.error_estimate, "finite-difference", res.converged)


def tail_coefficients(C: BivariateCopula, t_sequence=(1e-2, 1e-3, 1e-4, 1e-5)):
    """Lower and upper tail dependence from the diagonal section.

    Evaluates ``delta(t)/t`` and ``(1 - 2s + delta(s))/(1 - s)`` with ``s = 1 - t``
    along ``t_sequence`` and reports the last value; the error estimate is the
    spread of the last two.
    """
    t = np.asarray(t_sequence, dtype=float)
    if t.size < 2 or np.any(t <= 0.0) or np.any(t >= 1.0):
        raise ValueError("t_sequence needs at least two values in (0, 1)")
    lower = C.evaluate(t, t) / t
    s = 1.0 - t
    upper = (1.0 - 2.0 * s + C.evaluate(s, s)) / t
    reports = []
    for kind, seq in (("lambda_L", lower), ("lambda_U", upper)):
        val = float(np.clip(seq[-1], 0.0, 1.0))
        reports.append(MeasureReport(kind, val, float(abs(seq[-1] - seq[-2])), "limit-extrapolation"))
    return tuple(reports)


class QuadrantClass(enum.Enum):
    PQD = "PQD"
    NQD = "NQD"
    NEITHER = "NEITHER"


def _gap_to_product(C: BivariateCopula, grid_n: int):
    if grid_n < 3:
        raise ValueError("grid_n must be at least 3")
    t = np.linspace(0.0, 1.0, grid_n)
    U, V = np.meshgrid(t, t, indexing="ij")
    return C.evaluate(U, V) - U * V


def is_nqd(C: BivariateCopula, grid_n: int = 101, tol: float = 1e-9) -> bool:
    """``C <= Pi + tol`` on the grid (true for ``Pi`` itself)."""
    return bool(_gap_to_product(C, grid_n).max() <= tol)


def is_pqd(C: BivariateCopula, grid_n: int = 101, tol: float = 1e-9) -> bool:
    """``C >= Pi - tol`` on the grid."""
    return bool(_gap_to_product(C, grid_n).min() >= -tol)


def quadrant_class(C: BivariateCopula, grid_n: int = 101, tol: float = 1e-9) -> QuadrantClass:
    """Compare ``C`` with the product copula on a grid; ``C = Pi`` reports PQD."""
    diff = _gap_to_product(C, grid_n)
    if diff.min() >= -tol:
        return QuadrantClass.PQD
    if diff.max() <= tol:
        return QuadrantClass.NQD
    return QuadrantClass.NEITHER


# --- tables ----------------------------------------------------------------

TABLE_BASES = ("pi", "m", "w", "k")
_CLAYTON_THETA = -0.7


def table_base(name: str) -> BivariateCopula:
    """Reflected input copula of a table block.

    ``pi``, ``m`` and ``w`` give the second-variable flips of the product,
    upper and lower bound copulas.  ``k`` gives the Clayton copula with
    ``theta = -0.7`` itself, with no flip (see the README).
    """
    key = name.lower()
    if key == "pi":
        return flip_second(independence())
    if key == "m":
        return flip_second(upper_bound())
    if key == "w":
        return flip_second(lower_bound())
    if key == "k":
        return clayton(_CLAYTON_THETA)
    raise ValidationError(f"unknown table base {name!r}; expected one of {', '.join(TABLE_BASES)}")


@dataclass(frozen=True)
class TableCell:
    base: str
    a: float
    b: float
    n: float
    kind: str
    value: float
    error: float
    message: str | None = None

    @property
    def ok(self):
        return self.message is None


@dataclass(frozen=True)
class TableConfig:
    bases: tuple = TABLE_BASES
    a_values: tuple = (0.1, 0.5, 0.9)
    b_values: tuple = (0.1, 0.5, 0.9)
    n_values: tuple = (0, 1, 2, 3, 4)
    kind: str = "rho"
    tol: float | None = None
    workers: int | None = None

    def __post_init__(self):
        if self.kind not in ("rho", "tau"):
            raise ValidationError(f"kind must be rho or tau, got {self.kind!r}")
        for name in self.bases:
            if name not in TABLE_BASES:
                raise ValidationError(f"unknown table base {name!r}")
        for x in tuple(self.a_values) + tuple(self.b_values):
            if not 0.0 < x < 1.0:
                raise ValidationError(f"generator parameter {x} outside (0, 1)")
        for n in self.n_values:
            if not (n == math.inf or (float(n).is_integer() and n >= 0)):
                raise ValidationError(f"iteration count {n} must be a nonnegative integer or inf")


def _cell_copula(base, a, b, n):
    C_dot = table_base(base)
    f, g = power(a), power(b)
    if n == math.inf:
        return rmm_limit(C_dot, f, g)
    return rmm_iter(C_dot, f, g, int(n))


def _compute_cell(config: TableConfig, base, a, b, n) -> TableCell:
    try:
        C = _cell_copula(base, a, b, n)
        if config.kind == "rho":
            rep = spearman_rho(C, tol=config.tol or 1e-5)
        else:
            rep = kendall_tau(C, tol=config.tol or 4e-4)
        msg = None if rep.converged else "quadrature did not reach tolerance"
        return TableCell(base, a, b, n, config.kind, rep.value, rep.error_estimate, msg)
    except Exception as exc:  # recorded per cell; the run continues
        return TableCell(base, a, b, n, config.kind, math.nan, math.nan, f"{type(exc).__name__}: {exc}")


def table_run(config: TableConfig) -> list:
    """Compute every (base, a, b, n) cell; rows come back in configuration order."""
    jobs = [
        (base, a, b, n)
        for base in config.bases
        for a in config.a_values
        for b in config.b_values
        for n in config.n_values
    ]
    workers = config.workers or min(8, os.cpu_count() or 1)
    if workers <= 1:
        return [_compute_cell(config, *job) for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: _compute_cell(config, *job), jobs))


def write_table_csv(cells, fh):
    """Write cells as CSV with header ``base,a,b,n,kind,value,error``."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["base", "a", "b", "n", "kind", "value", "error"])
    for c in cells:
        n = "inf" if c.n == math.inf else str(int(c.n))
        writer.writerow([c.base, f"{c.a:g}", f"{c.b:g}", n, c.kind, f"{c.value:.4f}", f"{c.error:.4f}"])


# --- Monte Carlo -----------------------------------------------------------

_MC_BATCHES = 20


def estimate_measures(batch) -> tuple:
    """Sample Spearman rho and Kendall tau of a bivariate sample.

    ``batch`` is a :class:`~rmmcopula.sampling.SampleBatch` or an ``(m, 2)``
    array.  Standard errors come from batch means over 20 equal sub-batches.
    """
    data = np.asarray(getattr(batch, "points", batch), dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValidationError("estimate_measures needs bivariate samples")
    m = data.shape[0]
    if m < 100:
        raise ValidationError(f"need at least 100 samples, got {m}")
    if np.unique(data[:, 0]).size < 2 or np.unique(data[:, 1]).size < 2:
        raise ValidationError("degenerate sample: a coordinate is constant")
    x, y = data[:, 0], data[:, 1]
    rho = float(stats.spearmanr(x, y)[0])
    tau = float(stats.kendalltau(x, y)[0])
    size = m // _MC_BATCHES
    rho_b, tau_b = [], []
    for k in range(_MC_BATCHES):
        xs, ys = x[k * size : (k + 1) * size], y[k * size : (k + 1) * size]
        rho_b.append(stats.spearmanr(xs, ys)[0])
        tau_b.append(stats.kendalltau(xs, ys)[0])
    se_tau = float(np.std(tau_b, ddof=1) / math.sqrt(_MC_BATCHES))
    se_rho = float(np.std(rho_b, ddof=1) / math.sqrt(_MC_BATCHES))
    return (
        MeasureReport("rho", rho, se_rho, "monte-carlo"),
        MeasureReport("tau", tau, se_tau, "monte-carlo"),
    )
