"""
Pseudo-random sampling by conditional inversion.

Bivariate draws take ``u`` uniform and invert the conditional distribution
``x -> dC/du(u, x)``.  The partial derivative is the smaller of the forward and
backward difference quotients: both are nondecreasing in ``x`` for a copula,
and taking the minimum keeps draws out of zero regions bordered by kinks.
Trivariate draws first sample ``(u1, u2)`` from the ``(1, 2)`` margin and then
invert ``z -> d2C/du1du2(u1, u2, z) / d2C/du1du2(u1, u2, 1)``, built from
the C-volumes of small boxes around ``(u1, u2)``.

Generators are ``numpy.random.Philox`` streams (counter based, 64-bit seeds),
so a given seed reproduces a batch exactly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .copula import BivariateCopula
from .errors import SamplingError
from .multivariate import NCopula
from .numerics import invert_monotone

__all__ = ["SampleBatch", "sample2", "sample3", "export_csv", "read_csv", "make_rng"]

STEP_2D = 1e-7
STEP_3D = 1e-6
INVERT_TOL = 1e-10
MONOTONE_TOL = 1e-6
MASS_FLOOR = 1e-14
MAX_RETRIES = 20
_CHUNK = 4096
_CHECK_GRID = np.linspace(0.0, 1.0, 33)


@dataclass(frozen=True)
class SampleBatch:
    dim: int
    seed: int
    points: np.ndarray
    label: str = ""

    def __len__(self):
        return self.points.shape[0]


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


def _conditional_2d(C: BivariateCopula, u: np.ndarray, h: float):
    """``x -> dC/du(u, x)`` as the minimum of the available one-sided quotients."""
    up = np.minimum(u + h, 1.0)
    um = np.maximum(u - h, 0.0)
    has_fwd = up > u
    has_bwd = um < u
    dfwd = np.where(has_fwd, up - u, 1.0)
    dbwd = np.where(has_bwd, u - um, 1.0)

    def H(x):
        mid = C.evaluate(u, x)
        fwd = np.where(has_fwd, (C.evaluate(up, x) - mid) / dfwd, np.inf)
        bwd = np.where(has_bwd, (mid - C.evaluate(um, x)) / dbwd, np.inf)
        return np.clip(np.minimum(fwd, bwd), 0.0, 1.0)

    return H


def _check_monotone(H, u, label):
    vals = np.stack([H(np.full(u.shape, x)) for x in _CHECK_GRID], axis=1)
    drops = np.diff(vals, axis=1).min(axis=1)
    bad = np.nonzero(drops < -MONOTONE_TOL)[0]
    if bad.size:
        i = bad[0]
        raise SamplingError(
            f"conditional distribution of {label} is not monotone at u={u[i]:.10g} "
            f"(drop {-drops[i]:.3g}); not a valid copula"
        )


def _draw_2d(C: BivariateCopula, u: np.ndarray, t: np.ndarray, h: float = STEP_2D):
    H = _conditional_2d(C, u, h)
    _check_monotone(H, u, C.label)
    return invert_monotone(H, t, tol=INVERT_TOL)


def sample2(C: BivariateCopula, n: int, seed: int) -> SampleBatch:
    """Draw ``n`` points from a bivariate copula."""
    if int(n) < 0:
        raise ValueError("n must be nonnegative")
    n = int(n)
    rng = make_rng(seed)
    draws = rng.random((n, 2))
    out = np.empty((n, 2))
    for start in range(0, n, _CHUNK):
        sl = slice(start, start + _CHUNK)
        u, t = draws[sl, 0], draws[sl, 1]
        out[sl, 0] = u
        out[sl, 1] = _draw_2d(C, u, t)
    return SampleBatch(2, int(seed), out, C.label)


def _quadrant_volumes(C: NCopula, u1, u2, z, h):
    """Box volumes ``[u1, u1 +/- h] x [u2, u2 +/- h] x [0, z]`` for the four quadrants.

    Returns an array of shape ``(4, m)``; quadrants leaving the unit square are NaN.
    """
    vols = np.full((4,) + u1.shape, np.nan)
    for q, (s1, s2) in enumerate(((1, 1), (1, -1), (-1, 1), (-1, -1))):
        a1 = u1 + s1 * h
        a2 = u2 + s2 * h
        inside = (a1 >= 0.0) & (a1 <= 1.0) & (a2 >= 0.0) & (a2 <= 1.0)
        a1 = np.clip(a1, 0.0, 1.0)
        a2 = np.clip(a2, 0.0, 1.0)
        lo1, hi1 = np.minimum(u1, a1), np.maximum(u1, a1)
        lo2, hi2 = np.minimum(u2, a2), np.maximum(u2, a2)

        def at(x, y):
            return C.evaluate(np.stack([x, y, z], axis=-1))

        vol = at(hi1, hi2) - at(hi1, lo2) - at(lo1, hi2) + at(lo1, lo2)
        vols[q] = np.where(inside, vol, np.nan)
    return vols


def _draw_third(C: NCopula, u1, u2, t, h):
    """Invert the conditional law of ``u3``; returns values and a mask of pairs without mass."""
    ones = np.ones_like(u1)
    total = _quadrant_volumes(C, u1, u2, ones, h)
    usable = np.isfinite(total) & (total > MASS_FLOOR)
    dead = ~usable.any(axis=0)
    denom = np.where(usable, total, 1.0)

    def H(z):
        vols = _quadrant_volumes(C, u1, u2, z, h)
        ratio = np.where(usable, vols / denom, np.inf)
        return np.clip(ratio.min(axis=0), 0.0, 1.0)

    z = invert_monotone(H, t, tol=INVERT_TOL)
    return z, dead


def sample3(C: NCopula, n: int, seed: int) -> SampleBatch:
    """Draw ``n`` points from a trivariate copula.

    Pairs whose neighbourhood carries no mass are redrawn up to 20 times before
    a :class:`SamplingError` is raised.
    """
    if C.dim != 3:
        raise SamplingError(f"sample3 needs a 3-copula, got dim {C.dim}")
    if int(n) < 0:
        raise ValueError("n must be nonnegative")
    n = int(n)
    rng = make_rng(seed)
    margin = C.margin(1, 2)
    out = np.empty((n, 3))
    for start in range(0, n, _CHUNK):
        m = min(_CHUNK, n - start)
        pending = np.arange(m)
        block = np.empty((m, 3))
        for attempt in range(MAX_RETRIES + 1):
            k = pending.size
            draws = rng.random((k, 3))
            u1 = draws[:, 0]
            u2 = _draw_2d(margin, u1, draws[:, 1])
            z, dead = _draw_third(C, u1, u2, draws[:, 2], STEP_3D)
            ok = ~dead
            block[pending[ok]] = np.stack([u1[ok], u2[ok], z[ok]], axis=1)
            pending = pending[dead]
            if pending.size == 0:
                break
        else:
            raise SamplingError(
                f"no conditional mass near {pending.size} pair(s) after {MAX_RETRIES} redraws"
            )
        out[start : start + m] = block
    return SampleBatch(3, int(seed), out, C.label)


def export_csv(batch: SampleBatch, path, meta: dict | None = None) -> None:
    """Write ``u1,u2[,u3]`` rows with 10 significant digits.

    With ``meta`` a JSON companion file with the same basename and suffix
    ``.meta`` is written as well.
    """
    path = Path(path)
    header = ",".join(f"u{i + 1}" for i in range(batch.dim))
    lines = [header] + [",".join(f"{x:.10g}" for x in row) for row in batch.points]
    try:
        path.write_text("\n".join(lines) + "\n")
        if meta is not None:
            info = {"seed": batch.seed, "n": len(batch), "dim": batch.dim, **meta}
            path.with_suffix(".meta").write_text(json.dumps(info, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write samples to {path}: {exc.strerror or exc}") from exc


def read_csv(path) -> np.ndarray:
    """Read a sample file written by :func:`export_csv` into an ``(m, dim)`` array."""
    path = Path(path)
    with path.open() as fh:
        header = fh.readline().strip().split(",")
        rows = fh.read()
    if not rows.strip():
        return np.empty((0, len(header)))
    return np.loadtxt(rows.splitlines(), delimiter=",", ndmin=2)
