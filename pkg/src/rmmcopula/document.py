"""
Copula expression documents.

A document is a YAML tree describing how a copula is built from base copulas,
generators, transforms and flips; ``docs/grammar.md`` gives the grammar.
:func:`parse_spec` validates the tree and builds the copula, reporting errors
as :class:`SpecError` with the dotted path of the offending node.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

import yaml

from . import copula as cop
from . import generators as gens
from . import multivariate as mv
from . import transforms as tr
from .errors import DomainError, SpecError, ValidationError

__all__ = ["CopulaSpecDoc", "parse_spec", "parse_generator", "rmm_components", "TRANSFORMS"]

BIVARIATE_TRANSFORMS = ("rmm", "mm", "rmm_iter", "mm_iter", "rmm_limit", "mm_limit")
TRANSFORMS = BIVARIATE_TRANSFORMS + ("rmm_n", "mm_n")
_BASE_PARAMS = {"pi": (), "m": (), "w": (), "efgm": ("theta",), "clayton": ("theta",)}
_NBASES = {"pi": mv.pi_n, "m": mv.m_n, "pi3": lambda d=3: mv.pi_n(3), "m3": lambda d=3: mv.m_n(3)}
_CALL = re.compile(r"^\s*([A-Za-z_]\w*)\s*\((.*)\)\s*$")


@dataclass(frozen=True)
class CopulaSpecDoc:
    """A validated document: its source text, parsed tree and the built copula."""

    source: str
    tree: object
    copula: object

    @property
    def dim(self):
        return getattr(self.copula, "dim", 2)


def _join(path, key):
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else str(key)


def _normalise(node, path):
    """Expand flow-style shorthands: ``{power, a:0.5}`` parses as keys ``power`` and ``a:0.5``."""
    if not isinstance(node, dict):
        return node
    out = {}
    for key, value in node.items():
        key = str(key)
        if value is None and ":" in key:
            name, _, raw = key.partition(":")
            try:
                value = yaml.safe_load(raw)
            except yaml.YAMLError as exc:
                raise SpecError(_join(path, name.strip()), f"cannot parse value {raw!r}") from exc
            key = name.strip()
        out[key] = value
    return out


def _number(node, key, path, lo=-math.inf, hi=math.inf, integer=False):
    p = _join(path, key)
    if key not in node:
        raise SpecError(p, "missing required value")
    val = node[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise SpecError(p, f"expected a number, got {val!r}")
    if integer and not float(val).is_integer():
        raise SpecError(p, f"expected an integer, got {val!r}")
    if not lo <= val <= hi:
        raise SpecError(p, f"value {val} out of range [{lo}, {hi}]")
    return int(val) if integer else float(val)


def _reject_extra(node, allowed, path):
    for key in node:
        if key not in allowed:
            raise SpecError(_join(path, key), "unexpected key")


def _family_of(node, path, known):
    """Family name of a generator node in long (``family: x``) or short (``x: null``) form."""
    if "family" in node:
        return str(node["family"]), "family"
    flags = [k for k, v in node.items() if v is None and k in known]
    if len(flags) == 1:
        return flags[0], flags[0]
    raise SpecError(path, f"cannot determine generator family; expected one of {', '.join(known)}")


def parse_generator(node, path="") -> gens.Generator:
    """Build an RMM generator from a document node."""
    known = tuple(gens.FAMILIES)
    if isinstance(node, str):
        m = _CALL.match(node)
        name, args = (m.group(1), m.group(2)) if m else (node.strip(), "")
        if name not in gens.FAMILIES or name == "tabulated":
            raise SpecError(path, f"unknown generator family {name!r}")
        ctor, params = gens.FAMILIES[name]
        values = [a for a in args.split(",") if a.strip()]
        if len(values) != len(params):
            raise SpecError(path, f"{name} takes {len(params)} parameter(s), got {len(values)}")
        try:
            nums = [float(v) for v in values]
        except ValueError:
            raise SpecError(path, f"bad parameters in {node!r}") from None
        try:
            return ctor(*nums)
        except (DomainError, ValidationError) as exc:
            raise SpecError(path, str(exc)) from exc
    if not isinstance(node, dict):
        raise SpecError(path, f"expected a generator, got {node!r}")
    node = _normalise(node, path)
    name, tag = _family_of(node, path, known)
    if name not in gens.FAMILIES:
        raise SpecError(_join(path, "family"), f"unknown generator family {name!r}")
    ctor, params = gens.FAMILIES[name]
    _reject_extra(node, {tag, *params}, path)
    try:
        if name == "tabulated":
            if "knots" not in node:
                raise SpecError(_join(path, "knots"), "missing required value")
            return ctor(node["knots"])
        if name == "power":
            return ctor(_number(node, "a", path, 0.0, 1.0))
        args = [_number(node, p, path, 0.0, 1.0) for p in params]
        return ctor(*args)
    except (DomainError, ValidationError) as exc:
        where = _join(path, params[0]) if len(params) == 1 else path
        raise SpecError(where, str(exc)) from exc


def _mm_generator(node, kind, path) -> gens.MMGenerator:
    if node == "identity" or (isinstance(node, dict) and node.get("family") == "identity"):
        return gens.mm_identity(kind)
    gen = parse_generator(node, path)
    try:
        return gens.to_mm(gen, kind)
    except ValidationError as exc:
        raise SpecError(path, str(exc)) from exc


def _base(node, path, dim=None):
    """Base copula node: a name, or a mapping with ``base`` and parameters."""
    if isinstance(node, str):
        node = {"base": node}
    name = str(node["base"]).lower()
    declared = node.get("dim")
    if (dim is not None and dim > 2) or name in ("pi3", "m3") or (isinstance(declared, int) and declared > 2):
        if name not in _NBASES:
            raise SpecError(_join(path, "base"), f"unknown {dim}-dimensional base {name!r}; expected pi, m, pi3 or m3")
        _reject_extra(node, {"base", "dim"}, path)
        d = 3 if name in ("pi3", "m3") else node.get("dim", dim)
        if d is None:
            raise SpecError(_join(path, "dim"), "missing dimension")
        if dim is not None and d != dim:
            raise SpecError(_join(path, "dim"), f"dimension mismatch: base has {d}, expected {dim}")
        return _NBASES[name](int(d))
    if name not in _BASE_PARAMS:
        raise SpecError(_join(path, "base"), f"unknown copula {name!r}; expected one of {', '.join(_BASE_PARAMS)}")
    params = _BASE_PARAMS[name]
    _reject_extra(node, {"base", *params}, path)
    values = []
    for p in params:
        lo, hi = (-1.0, 1.0) if name == "efgm" else (-1.0, math.inf)
        values.append(_number(node, p, path, lo, hi))
    try:
        return cop.builtin(name, *values)
    except DomainError as exc:
        raise SpecError(_join(path, params[0]) if params else path, str(exc)) from exc


def _build(node, path, dim=None):
    if isinstance(node, str):
        return _base(node, path, dim)
    if not isinstance(node, dict):
        raise SpecError(path or "<root>", f"expected a mapping or a name, got {node!r}")
    node = _normalise(node, path)
    if "transform" in node:
        return _transform(node, path)
    if "flip" in node:
        return _flip(node, path, dim)
    if "base" in node:
        inner = node["base"]
        if isinstance(inner, dict):
            _reject_extra(node, {"base"}, path)
            return _build(inner, _join(path, "base"), dim)
        return _base(node, path, dim)
    raise SpecError(path or "<root>", "node needs one of: base, transform, flip")


def _child(node, key, path, dim=None):
    if key not in node:
        raise SpecError(_join(path, key), "missing required value")
    return _build(node[key], _join(path, key), dim)


def _flip(node, path, dim):
    _reject_extra(node, {"flip", "base"}, path)
    C = _child(node, "base", path, dim)
    idx = node["flip"]
    if isinstance(idx, int):
        idx = [idx]
    if not isinstance(idx, list) or not idx or not all(isinstance(i, int) for i in idx):
        raise SpecError(_join(path, "flip"), "expected a nonempty list of coordinate indices")
    n = getattr(C, "dim", 2)
    for i in idx:
        if not 1 <= i <= n:
            raise SpecError(_join(path, "flip"), f"index {i} outside 1..{n}")
    if isinstance(C, mv.NCopula):
        return mv.flip_vars(C, idx)
    out = C
    for i in sorted(set(idx)):
        out = cop.flip_second(out) if i == 2 else cop.flip_first(out)
    return out


def _transform(node, path):
    kind = str(node["transform"])
    if kind not in TRANSFORMS:
        raise SpecError(_join(path, "transform"), f"unknown transform {kind!r}; expected one of {', '.join(TRANSFORMS)}")
    if kind in ("rmm_n", "mm_n"):
        return _transform_n(node, path, kind)
    reflected = kind.startswith("rmm")
    keys = ("f", "g") if reflected else ("phi", "psi")
    allowed = {"transform", "base", *keys}
    if kind.endswith("_iter"):
        allowed.add("n")
    if kind.endswith("_limit"):
        allowed.add("tol")
    _reject_extra(node, allowed, path)
    C = _child(node, "base", path)
    if isinstance(C, mv.NCopula):
        raise SpecError(_join(path, "base"), f"{kind} needs a bivariate base")
    for key in keys:
        if key not in node:
            raise SpecError(_join(path, key), "missing required value")
    if reflected:
        a = parse_generator(node["f"], _join(path, "f"))
        b = parse_generator(node["g"], _join(path, "g"))
    else:
        a = _mm_generator(node["phi"], "F1", _join(path, "phi"))
        b = _mm_generator(node["psi"], "F2", _join(path, "psi"))
    try:
        if kind.endswith("_iter"):
            n = _number(node, "n", path, 0, math.inf, integer=True)
            return (tr.rmm_iter if reflected else tr.mm_iter)(C, a, b, n)
        if kind.endswith("_limit"):
            tol = _number(node, "tol", path, 0.0, 1.0) if "tol" in node else 1e-12
            if tol <= 0.0:
                raise SpecError(_join(path, "tol"), "tol must be positive")
            return (tr.rmm_limit if reflected else tr.mm_limit)(C, a, b, tol=tol)
        return (tr.rmm if reflected else tr.mm)(C, a, b)
    except ValidationError as exc:
        raise SpecError(path, str(exc)) from exc


def _transform_n(node, path, kind):
    _reject_extra(node, {"transform", "base", "generators", "p", "dim"}, path)
    gens_node = node.get("generators")
    if not isinstance(gens_node, list):
        raise SpecError(_join(path, "generators"), "expected a list of generators")
    n = _number(node, "dim", path, 2, math.inf, integer=True) if "dim" in node else len(gens_node)
    if len(gens_node) != n:
        raise SpecError(_join(path, "generators"), f"dimension mismatch: {len(gens_node)} generators for dim {n}")
    p = _number(node, "p", path, -math.inf, math.inf, integer=True)
    if not 1 <= p <= n - 1:
        raise SpecError(_join(path, "p"), f"p must be ≤ n−1 and ≥ 1 (got p={p}, n={n})")
    C = _child(node, "base", path, n)
    if isinstance(C, cop.BivariateCopula) and n == 2:
        C = mv.from_bivariate(C)
    if not isinstance(C, mv.NCopula) or C.dim != n:
        raise SpecError(_join(path, "base"), f"dimension mismatch: base must be a {n}-copula")
    if kind == "rmm_n":
        items = [parse_generator(g, _join(_join(path, "generators"), i)) for i, g in enumerate(gens_node)]
        build = mv.rmm_n
    else:
        items = [
            _mm_generator(g, "F1" if i < p else "F2", _join(_join(path, "generators"), i))
            for i, g in enumerate(gens_node)
        ]
        build = mv.mm_n
    try:
        return build(mv.MMNSpec(C, items, p))
    except ValidationError as exc:
        raise SpecError(path, str(exc)) from exc


def parse_spec(text: str) -> CopulaSpecDoc:
    """Parse and validate a document, building the copula it describes."""
    try:
        tree = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SpecError("<root>", f"malformed document: {exc}") from exc
    if tree is None:
        raise SpecError("<root>", "empty document")
    return CopulaSpecDoc(text, tree, _build(tree, ""))


def rmm_components(doc: CopulaSpecDoc):
    """``(C_dot, f, g)`` of a document whose root is a bivariate rmm-family transform."""
    node = _normalise(doc.tree, "") if isinstance(doc.tree, dict) else None
    if node is None or node.get("transform") not in ("rmm", "rmm_iter", "rmm_limit"):
        raise SpecError("transform", "expected a bivariate rmm, rmm_iter or rmm_limit document")
    C = _child(node, "base", "")
    return C, parse_generator(node["f"], "f"), parse_generator(node["g"], "g")
