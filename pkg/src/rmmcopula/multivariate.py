"""
n-variate maxmin copulas with ``p`` maxima and ``n - p`` minima, and their
reflected counterparts.

Points are arrays whose last axis has length ``dim``; evaluators broadcast over
the leading axes.  Coordinates are numbered from 1 in the public API (flip
index sets, the maxima block ``1..p``), matching the usual mathematical
convention.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .copula import BivariateCopula
from .errors import DomainError, ValidationError
from .generators import Generator, MMGenerator, from_mm, from_mm_psi
from .transforms import _check

__all__ = [
    "NCopula",
    "MMNSpec",
    "NCopulaReport",
    "pi_n",
    "m_n",
    "from_bivariate",
    "flip_vars",
    "mm_n",
    "rmm_n",
    "rmm_3",
    "reflect_spec",
    "rule",
    "validate_ncopula",
]


class NCopula:
    """An evaluable n-copula on ``[0, 1]^dim``."""

    __slots__ = ("dim", "_func", "label")

    def __init__(self, dim: int, func, label: str):
        if int(dim) < 2:
            raise DomainError("an n-copula needs dim >= 2")
        self.dim = int(dim)
        self._func = func
        self.label = label

    def __repr__(self):
        return f"NCopula(dim={self.dim}, {self.label})"

    def _points(self, u):
        arr = np.asarray(u, dtype=float)
        if arr.shape[-1:] != (self.dim,):
            raise DomainError(f"points must have last axis of length {self.dim}, got shape {arr.shape}")
        return arr

    def raw(self, u):
        return np.asarray(self._func(self._points(u)), dtype=float)

    def evaluate(self, u):
        """Evaluate points already known to lie in the unit cube, clamped to the Frechet band."""
        u = self._points(u)
        out = np.asarray(self._func(u), dtype=float)
        lower = np.maximum(0.0, u.sum(axis=-1) - (self.dim - 1))
        return np.clip(out, lower, u.min(axis=-1))

    def __call__(self, u):
        u = self._points(u)
        if np.any(np.isnan(u)) or np.any(u < 0.0) or np.any(u > 1.0):
            raise DomainError("coordinates must lie in [0, 1]")
        out = self.evaluate(u)
        return float(out) if out.ndim == 0 else out

    def margin(self, i: int, j: int) -> BivariateCopula:
        """Bivariate margin in coordinates ``i < j`` (1-based), others set to 1."""
        if not (1 <= i <= self.dim and 1 <= j <= self.dim and i != j):
            raise DomainError(f"invalid margin indices ({i}, {j}) for dim {self.dim}")

        def func(u, v):
            u, v = np.broadcast_arrays(u, v)
            pts = np.ones(u.shape + (self.dim,))
            pts[..., i - 1] = u
            pts[..., j - 1] = v
            return self.evaluate(pts)

        return BivariateCopula(func, f"margin{i}{j}({self.label})")


def pi_n(dim: int) -> NCopula:
    return NCopula(dim, lambda u: np.prod(u, axis=-1), f"pi{dim}")


def m_n(dim: int) -> NCopula:
    return NCopula(dim, lambda u: np.min(u, axis=-1), f"m{dim}")


def from_bivariate(C: BivariateCopula) -> NCopula:
    return NCopula(2, lambda u: C.evaluate(u[..., 0], u[..., 1]), C.label)


def flip_vars(C: NCopula, idx) -> NCopula:
    """Reflect ``C`` in the coordinates ``idx`` (1-based) by inclusion-exclusion.

    The result is ``sum_z (-1)^{|z|} C(w_z)`` over ``z`` in ``{0,1}^idx``, where
    ``w_z`` replaces ``u_i`` by ``1 - u_i`` if ``z_i = 1`` and by 1 otherwise.
    """
    idx = sorted(set(int(i) for i in idx))
    if not idx:
        raise DomainError("flip_vars needs a nonempty index set")
    if idx[0] < 1 or idx[-1] > C.dim:
        raise DomainError(f"flip indices must lie in 1..{C.dim}")
    cols = [i - 1 for i in idx]

    def func(u):
        total = np.zeros(u.shape[:-1])
        for z in itertools.product((0, 1), repeat=len(cols)):
            w = np.array(u, dtype=float)
            for c, zi in zip(cols, z):
                w[..., c] = 1.0 - u[..., c] if zi else 1.0
            sign = -1.0 if sum(z) % 2 else 1.0
            total = total + sign * C.evaluate(w)
        return total

    return NCopula(C.dim, func, f"flip{{{','.join(map(str, idx))}}}({C.label})")


@dataclass(frozen=True)
class MMNSpec:
    """Base copula, one generator per coordinate and the number ``p`` of maxima.

    For :func:`mm_n` the generators are MM generators (F1 for coordinates
    ``1..p``, F2 for ``p+1..n``); for :func:`rmm_n` they are RMM generators and
    ``base`` is the already reflected copula.
    """

    base: NCopula
    generators: tuple
    p: int

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        n = self.base.dim
        if len(self.generators) != n:
            raise ValidationError(f"expected {n} generators for a {n}-copula, got {len(self.generators)}")
        if not 1 <= self.p <= n - 1:
            raise ValidationError(f"p must satisfy 1 <= p <= n-1 = {n - 1}, got {self.p}")

    @property
    def dim(self):
        return self.base.dim


def _mm_generators(spec: MMNSpec):
    for i, gen in enumerate(spec.generators, start=1):
        kind = "F1" if i <= spec.p else "F2"
        if not isinstance(gen, MMGenerator) or gen.kind != kind:
            raise ValidationError(f"generator {i} must be an {kind} MM generator")
    return spec.generators


def _rmm_generators(spec: MMNSpec):
    for i, gen in enumerate(spec.generators, start=1):
        _check(gen, f"f{i}")
    return spec.generators


def mm_n(spec: MMNSpec) -> NCopula:
    """Maxmin n-copula as a sum over subsets ``K`` of the minima block.

    Each term is ``C`` evaluated with ``phi_i(u_i)`` on the maxima and on the
    minima outside ``K``, and 1 on ``K``, times
    ``max{0, min_{i <= p or i in K} s_i - max_{i in S minus K} s_i}`` where
    ``s_i`` is ``phi_i*`` on the maxima and ``psi_i_*`` on the minima (empty max
    is 0).
    """
    gens = _mm_generators(spec)
    n, p = spec.dim, spec.p
    S = list(range(p, n))

    def func(u):
        phis = np.stack([gens[i]._eval(u[..., i]) for i in range(n)], axis=-1)
        stars = np.stack([np.asarray(gens[i].star(u[..., i]), dtype=float) for i in range(n)], axis=-1)
        head = stars[..., :p].min(axis=-1)
        total = np.zeros(u.shape[:-1])
        for r in range(len(S) + 1):
            for K in itertools.combinations(S, r):
                Kc = [i for i in S if i not in K]
                args = np.array(phis)
                low = head
                for i in K:
                    args[..., i] = 1.0
                    low = np.minimum(low, stars[..., i])
                high = stars[..., Kc].max(axis=-1) if Kc else 0.0
                total = total + spec.base.evaluate(args) * np.maximum(0.0, low - high)
        return np.where((u == 0.0).any(axis=-1), 0.0, total)

    return NCopula(n, func, f"mm_n(p={p}; {spec.base.label})")


def rmm_n(spec: MMNSpec) -> NCopula:
    """Reflected maxmin n-copula.

    ``C(f^_1(u_1), ..., f^_n(u_n)) / prod_i f^_i(u_i)`` times
    ``max{0, min_{j <= p < k} (u_j u_k - f_j(u_j) f_k(u_k)) prod_{i != j,k} f^_i(u_i)}``,
    and 0 whenever a coordinate is 0.
    """
    gens = _rmm_generators(spec)
    n, p = spec.dim, spec.p

    def func(u):
        fs = np.stack([gens[i].func(u[..., i]) * np.ones(u.shape[:-1]) for i in range(n)], axis=-1)
        hats = np.clip(u + fs, 0.0, 1.0)
        zero = (u == 0.0).any(axis=-1)
        hats_safe = np.where(zero[..., None], 1.0, hats)
        prod_all = np.prod(hats_safe, axis=-1)
        inner = np.full(u.shape[:-1], np.inf)
        for j in range(p):
            for k in range(p, n):
                others = np.prod(np.delete(hats_safe, [j, k], axis=-1), axis=-1)
                cand = (u[..., j] * u[..., k] - fs[..., j] * fs[..., k]) * others
                inner = np.minimum(inner, cand)
        val = spec.base.evaluate(hats_safe) / prod_all * np.maximum(0.0, inner)
        return np.where(zero, 0.0, val)

    return NCopula(n, func, f"rmm_n(p={p}; {spec.base.label})")


def rmm_3(C_dot: NCopula, f1: Generator, f2: Generator, f3: Generator) -> NCopula:
    """Trivariate reflected maxmin copula with one maximum and two minima."""
    if C_dot.dim != 3:
        raise ValidationError("rmm_3 needs a 3-copula")
    for i, g in enumerate((f1, f2, f3), start=1):
        _check(g, f"f{i}")

    def func(u):
        u1, u2, u3 = u[..., 0], u[..., 1], u[..., 2]
        a1, a2, a3 = f1.func(u1), f2.func(u2), f3.func(u3)
        h1 = np.clip(u1 + a1, 0.0, 1.0)
        h2 = np.clip(u2 + a2, 0.0, 1.0)
        h3 = np.clip(u3 + a3, 0.0, 1.0)
        zero = (u1 == 0.0) | (u2 == 0.0) | (u3 == 0.0)
        h1, h2, h3 = (np.where(zero, 1.0, h) for h in (h1, h2, h3))
        first = (u1 * u2 - a1 * a2) * h3
        second = (u1 * u3 - a1 * a3) * h2
        lead = C_dot.evaluate(np.stack([h1, h2, h3], axis=-1)) / (h1 * h2 * h3)
        return np.where(zero, 0.0, lead * np.maximum(0.0, np.minimum(first, second)))

    return NCopula(3, func, f"rmm_3({C_dot.label}; {f1.label}, {f2.label}, {f3.label})")


def reflect_spec(spec: MMNSpec) -> MMNSpec:
    """Turn an MM spec into the RMM spec describing its reflection in ``p+1..n``.

    The base becomes the reflected base and each generator is converted to its
    RMM generating function, so that
    ``flip_vars(mm_n(spec), S) == rmm_n(reflect_spec(spec))`` with ``S = {p+1..n}``.
    """
    gens = _mm_generators(spec)
    converted = tuple(
        from_mm(g, check=False) if i < spec.p else from_mm_psi(g, check=False) for i, g in enumerate(gens)
    )
    base = flip_vars(spec.base, range(spec.p + 1, spec.dim + 1))
    return MMNSpec(base, converted, spec.p)


def rule(a, b):
    """``max{0, min{a, a - b}}``, the simplified form of ``max{0,a} - max{0,min{a,b}}``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.maximum(0.0, np.minimum(a, a - b))


@dataclass
class NCopulaReport:
    grid_n: int
    tol: float
    groundedness: float
    margins: float
    volume: float
    failures: list

    @property
    def passed(self):
        return not self.failures

    def __str__(self):
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} boxes={self.grid_n - 1}^n tol={self.tol:g} groundedness={self.groundedness:.3e} "
            f"margins={self.margins:.3e} min_volume={self.volume:.3e}"
        )


def validate_ncopula(C: NCopula, grid_n: int = 10, tol: float = 1e-8) -> NCopulaReport:
    """Check groundedness, margins and n-box volumes on a lattice with ``grid_n`` points per axis.

    ``grid_n = 10`` gives ``9^n`` boxes.
    """
    n = C.dim
    t = np.linspace(0.0, 1.0, grid_n)
    mesh = np.stack(np.meshgrid(*([t] * n), indexing="ij"), axis=-1)
    G = C.raw(mesh)
    failures = []
    if not np.isfinite(G).all():
        failures.append("non-finite values")

    grounded = 0.0
    margins = 0.0
    for axis in range(n):
        grounded = max(grounded, float(np.max(np.abs(np.take(G, 0, axis=axis)))))
        index = [-1] * n
        index[axis] = slice(None)
        margins = max(margins, float(np.max(np.abs(G[tuple(index)] - t))))
    vols = G
    for axis in range(n):
        vols = np.diff(vols, axis=axis)
    min_vol = float(vols.min())
    if grounded > tol:
        failures.append(f"groundedness violated by {grounded:.3e}")
    if margins > tol:
        failures.append(f"margins violated by {margins:.3e}")
    if min_vol < -tol:
        failures.append(f"negative box volume {min_vol:.3e}")
    return NCopulaReport(grid_n, tol, grounded, margins, min_vol, failures)
