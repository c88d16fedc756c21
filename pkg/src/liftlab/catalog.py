"""Lie's transitive algebras on C^2 and their metric, affine and projective lifts.

Each entry is instantiated from a small parameter assignment::

    >>> [str(X) for X in instantiate("g8", {"r": 5, "alpha": 2})]
    ['Dx', 'Dy', 'x*Dy', 'x^2*Dy', 'x*Dx + 2*y*Dy']

Capital-letter constants in lift entries (``A``, ``B``, ``C``, ``C_j_k``)
stay symbolic unless a value is supplied in the assignment.

Text form of an instance: ``g8[r=5,alpha=2]``, ``g4[alphas=0;1,ms=1;1]``,
``g6.a``.  List values are separated by ``;``.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .errors import InvalidParameter, ParseError, UnknownId
from .expoly import ExpPoly, parse_constant
from .gq import GaussianRational, as_gq
from .vfield import VectorField

__all__ = [
    "CatalogEntry",
    "TestGrid",
    "ENTRIES",
    "get_entry",
    "ids",
    "base_ids",
    "lift_ids",
    "instantiate",
    "instantiate_text",
    "parse_instance",
    "format_instance",
    "enumerate_instances",
    "default_grid",
    "parse_grid",
    "free_constants",
]

# -- small helpers for building fields -----------------------------------------

_x = ExpPoly.monomial(1, x=1)
_y = ExpPoly.monomial(1, y=1)
_u = ExpPoly.monomial(1, u=1)
_1 = ExpPoly.const(1)


def _c(v) -> ExpPoly:
    return ExpPoly.const(v)


def _s(name: str) -> ExpPoly:
    return ExpPoly.monomial(1, params=((name, 1),))


def _e(a) -> ExpPoly:
    return ExpPoly.monomial(1, freq=(a, 0))


def _B(ax=0, ay=0) -> VectorField:
    return VectorField(ax, ay, 0, total=False)


def _L(ax=0, ay=0, au=0) -> VectorField:
    return VectorField(ax, ay, au, total=True)


def _xp(k: int) -> ExpPoly:
    return _x**k


# -- parameter schema ---------------------------------------------------------

_INT = "int"
_CONST = "const"
_CLIST = "list_const"
_ILIST = "list_int"


@dataclass(frozen=True)
class CatalogEntry:
    """One family of the classification.

    ``params`` maps parameter names to kinds (``int``, ``const``,
    ``list_const``, ``list_int``).  ``check`` returns an error message for an
    invalid assignment.  ``build`` returns the generators and ``constants``
    the free constant symbols for a valid assignment.
    """

    id: str
    base_id: Optional[str]
    params: Dict[str, str]
    check: Callable[[dict], Optional[str]]
    build: Callable[[dict], List[VectorField]]
    constants: Callable[[dict], List[str]] = lambda p: []
    formula: str = ""
    r_min: int = 0
    transitive: bool = True
    sample_point: Tuple[int, int] = (0, 0)

    @property
    def is_lift(self) -> bool:
        return self.base_id is not None

    @property
    def suffix(self) -> Optional[str]:
        return self.id.split(".", 1)[1] if self.is_lift else None

    @property
    def lift_type(self) -> Optional[str]:
        if not self.is_lift:
            return None
        return {"m": "metric", "a": "affine", "p": "projective"}[self.suffix[0]]


ENTRIES: Dict[str, CatalogEntry] = {}


def _reg(entry: CatalogEntry):
    ENTRIES[entry.id] = entry


def _ok(_p):
    return None


def _r_at_least(n):
    def check(p):
        if p["r"] < n:
            return f"r >= {n} required (got r = {p['r']})"
        return None

    return check


def _all(*checks):
    def check(p):
        for c in checks:
            msg = c(p)
            if msg:
                return msg
        return None

    return check


def _s_range(lo, hi_offset):
    def check(p):
        s, r = p["s"], p["r"]
        if not lo <= s <= r - hi_offset:
            return f"{lo} <= s <= r - {hi_offset} required (got s = {s}, r = {r})"
        return None

    return check


# -- primitive ----------------------------------------------------------------

_G1 = [_B(1, 0), _B(0, 1), _B(_x, 0), _B(0, _x), _B(_y, 0), _B(0, _y), _B(_x**2, _x * _y), _B(_x * _y, _y**2)]
_G2 = _G1[:6]
_G3 = [_B(1, 0), _B(0, 1), _B(0, _x), _B(_y, 0), _B(_x, -_y)]

_reg(CatalogEntry("g1", None, {}, _ok, lambda p: list(_G1), r_min=8,
                  formula="Dx, Dy, x*Dx, x*Dy, y*Dx, y*Dy, x^2*Dx + x*y*Dy, x*y*Dx + y^2*Dy"))
_reg(CatalogEntry("g2", None, {}, _ok, lambda p: list(_G2), r_min=6,
                  formula="Dx, Dy, x*Dx, x*Dy, y*Dx, y*Dy"))
_reg(CatalogEntry("g3", None, {}, _ok, lambda p: list(_G3), r_min=5,
                  formula="Dx, Dy, x*Dy, y*Dx, x*Dx - y*Dy"))


def _g1m(p):
    C = _s("C")
    return [
        _L(1), _L(0, 1), _L(0, _x), _L(_x, -_y), _L(_y, 0),
        _L(_x, _y, 2 * C),
        _L(_x**2, _x * _y, 3 * C * _x),
        _L(_x * _y, _y**2, 3 * C * _y),
    ]


def _g1p(p):
    w = _y - _x * _u
    return [
        _L(1), _L(0, 1), _L(0, _x, 1), _L(_x, -_y, -2 * _u), _L(_y, 0, -(_u**2)), _L(_x, _y),
        _L(_x**2, _x * _y, w), _L(_x * _y, _y**2, _u * w),
    ]


def _g2m(p):
    return [_L(1), _L(0, 1), _L(0, _x), _L(_x, -_y), _L(_y, 0), _L(_x, _y, _s("C"))]


def _g2p(p):
    return [_L(1), _L(0, 1), _L(0, _x, 1), _L(_x, -_y, -2 * _u), _L(_y, 0, -(_u**2)), _L(_x, _y)]


def _g3p(p):
    return [_L(1), _L(0, 1), _L(0, _x, 1), _L(_x, -_y, -2 * _u), _L(_y, 0, -(_u**2))]


_reg(CatalogEntry("g1.m", "g1", {}, _ok, _g1m, lambda p: ["C"], r_min=8))
_reg(CatalogEntry("g1.p", "g1", {}, _ok, _g1p, r_min=8))
_reg(CatalogEntry("g2.m", "g2", {}, _ok, _g2m, lambda p: ["C"], r_min=6))
_reg(CatalogEntry("g2.p", "g2", {}, _ok, _g2p, r_min=6))
_reg(CatalogEntry("g3.p", "g3", {}, _ok, _g3p, r_min=5))


# -- g4 / g5 ---------------------------------------------------------------------


def _check_freqs(offset, rmin):
    def check(p):
        al, ms = p["alphas"], p["ms"]
        if len(al) != len(ms) or not al:
            return "alphas and ms must be nonempty lists of equal length"
        if any(m < 1 for m in ms):
            return "m_i >= 1 required"
        if len(set(al)) != len(al):
            return "the alpha_i must be distinct"
        r = sum(ms) + offset
        if "r" in p and p["r"] != r:
            return f"r must equal sum(m_i) + {offset} = {r}"
        if r < rmin:
            return f"sum(m_i) + {offset} = r >= {rmin} required (got r = {r})"
        return None

    return check


def _exp_block(p):
    """``(j, i, alpha_j)`` for the fields x^i e^(alpha_j x) Dy, j counted from 1."""
    out = []
    for j, (a, m) in enumerate(zip(p["alphas"], p["ms"]), start=1):
        for i in range(m):
            out.append((j, i, a))
    return out


def _g4_const_names(p):
    names = []
    for j, i, _a in _exp_block(p):
        if (j, i) != (1, 0):
            names.append(f"C_{j}_{i}")
    return names


def _binom_sum(j, i):
    """sum_k binom(i, k) C_{j,k} x^(i-k), with C_{1,0} = 0."""
    out = ExpPoly()
    for k in range(i + 1):
        if (j, k) == (1, 0):
            continue
        out = out + _s(f"C_{j}_{k}") * _xp(i - k) * comb(i, k)
    return out


def _g4(p):
    return [_B(1, 0)] + [_B(0, _xp(i) * _e(a)) for j, i, a in _exp_block(p)]


def _g5(p):
    return [_B(1, 0), _B(0, _y)] + [_B(0, _xp(i) * _e(a)) for j, i, a in _exp_block(p)]


def _g4m(p):
    return [_L(1)] + [_L(0, _xp(i) * _e(a), _e(a) * _binom_sum(j, i)) for j, i, a in _exp_block(p)]


def _g5m(p):
    return [_L(1), _L(0, _y, _s("C"))] + [_L(0, _xp(i) * _e(a)) for j, i, a in _exp_block(p)]


def _g5a(p):
    return [_L(1), _L(0, _y, _u)] + [
        _L(0, _xp(i) * _e(a), _e(a) * _binom_sum(j, i)) for j, i, a in _exp_block(p)
    ]


_FREQ = {"alphas": _CLIST, "ms": _ILIST}
_reg(CatalogEntry("g4", None, dict(_FREQ), _check_freqs(1, 2), _g4, r_min=2,
                  formula="Dx, x^i*e^(alpha_j*x)*Dy  (0 <= i < m_j)"))
_reg(CatalogEntry("g5", None, dict(_FREQ), _check_freqs(2, 4), _g5, r_min=4,
                  formula="Dx, y*Dy, x^i*e^(alpha_j*x)*Dy  (0 <= i < m_j)"))
_reg(CatalogEntry("g4.m", "g4", dict(_FREQ), _check_freqs(1, 3), _g4m, _g4_const_names, r_min=3))
_reg(CatalogEntry("g5.m", "g5", dict(_FREQ), _check_freqs(2, 4), _g5m, lambda p: ["C"], r_min=4))
_reg(CatalogEntry("g5.a", "g5", dict(_FREQ), _check_freqs(2, 4), _g5a, _g4_const_names, r_min=4))


# -- g6, g7, g11, g12 ---------------------------------------------------------------


def _fixed(fields):
    return lambda p: list(fields)


_reg(CatalogEntry("g6", None, {}, _ok, _fixed([_B(1, 0), _B(0, 1), _B(0, _y), _B(0, _y**2)]), r_min=4,
                  formula="Dx, Dy, y*Dy, y^2*Dy"))
_reg(CatalogEntry("g7", None, {}, _ok, _fixed([_B(1, 0), _B(0, 1), _B(_x, 0), _B(_x**2, _x)]), r_min=4,
                  formula="Dx, Dy, x*Dx, x^2*Dx + x*Dy"))
_reg(CatalogEntry("g11", None, {}, _ok,
                  _fixed([_B(1, 0), _B(_x, 0), _B(0, 1), _B(0, _y), _B(0, _y**2)]), r_min=5,
                  formula="Dx, x*Dx, Dy, y*Dy, y^2*Dy"))
_reg(CatalogEntry("g12", None, {}, _ok,
                  _fixed([_B(1, 0), _B(_x, 0), _B(_x**2, 0), _B(0, 1), _B(0, _y), _B(0, _y**2)]), r_min=6,
                  formula="Dx, x*Dx, x^2*Dx, Dy, y*Dy, y^2*Dy"))

_A, _Bs, _C = _s("A"), _s("B"), _s("C")

_reg(CatalogEntry("g6.m", "g6", {}, _ok,
                  lambda p: [_L(1), _L(0, 1), _L(0, _y, _C), _L(0, _y**2, 2 * _C * _y)], lambda p: ["C"], r_min=4))
_reg(CatalogEntry("g6.a", "g6", {}, _ok,
                  lambda p: [_L(1), _L(0, 1), _L(0, _y, -_u), _L(0, _y**2, 1 - 2 * _y * _u)], r_min=4))
_reg(CatalogEntry("g7.m", "g7", {}, _ok,
                  lambda p: [_L(1), _L(0, 1), _L(_x, 0, _C), _L(_x**2, _x, 2 * _C * _x)], lambda p: ["C"], r_min=4))
_reg(CatalogEntry("g7.a", "g7", {}, _ok,
                  lambda p: [_L(1), _L(0, 1), _L(_x, 0, -_u), _L(_x**2, _x, 1 - 2 * _x * _u)], r_min=4))
_reg(CatalogEntry("g11.m", "g11", {}, _ok,
                  lambda p: [_L(1), _L(0, 1), _L(_x, 0, _A), _L(0, _y, _Bs), _L(0, _y**2, 2 * _Bs * _y)],
                  lambda p: ["A", "B"], r_min=5))
_reg(CatalogEntry("g11.a", "g11", {}, _ok,
                  lambda p: [_L(1), _L(0, 1), _L(_x, 0), _L(0, _y, -_u), _L(0, _y**2, 1 - 2 * _y * _u)], r_min=5))
_reg(CatalogEntry("g12.m", "g12", {}, _ok,
                  lambda p: [_L(1), _L(0, 1), _L(_x, 0, _A), _L(0, _y, _Bs), _L(_x**2, 0, 2 * _A * _x),
                             _L(0, _y**2, 2 * _Bs * _y)],
                  lambda p: ["A", "B"], r_min=6))
_reg(CatalogEntry("g12.a1", "g12", {}, _ok,
                  lambda p: [_L(1), _L(0, 1), _L(_x, 0, -_u), _L(0, _y), _L(_x**2, 0, 1 - 2 * _x * _u), _L(0, _y**2)],
                  r_min=6))
_reg(CatalogEntry("g12.a2", "g12", {}, _ok,
                  lambda p: [_L(1), _L(0, 1), _L(_x, 0), _L(0, _y, -_u), _L(_x**2, 0), _L(0, _y**2, 1 - 2 * _y * _u)],
                  r_min=6))


# -- g8, g9, g10 -------------------------------------------------------------------


def _dy_powers(lo, hi, lift=False):
    mk = _L if lift else _B
    return [mk(0, _xp(k)) for k in range(lo, hi + 1)]


def _g8(p):
    r, a = p["r"], p["alpha"]
    return [_B(1, 0), _B(0, 1)] + _dy_powers(1, r - 3) + [_B(_x, _y * a)]


def _g8m_s(p) -> Optional[int]:
    a, r = p["alpha"], p["r"]
    if a.is_integer() and 1 <= int(a) <= r - 3:
        return int(a)
    return None


def _g8m(p):
    r, a = p["r"], p["alpha"]
    s = _g8m_s(p)
    gens = [_L(1), _L(0, 1)]
    if s is None:
        gens += _dy_powers(1, r - 3, lift=True)
    else:
        gens += _dy_powers(1, s - 1, lift=True)
        gens += [_L(0, _xp(s + i), _Bs * _xp(i) * comb(s + i, s)) for i in range(r - 2 - s)]
    gens.append(_L(_x, _y * a, _A))
    return gens


def _g8m_consts(p):
    return ["A", "B"] if _g8m_s(p) is not None else ["A"]


def _g8a(p):
    r, a, s = p["r"], p["alpha"], p["s"]
    gens = [_L(1), _L(0, 1)]
    gens += _dy_powers(1, s - 1, lift=True)
    gens += [_L(0, _xp(s + i), _xp(i) * comb(s + i, s)) for i in range(r - 2 - s)]
    gens.append(_L(_x, _y * a, _u * (a - s)))
    return gens


def _alpha_ne_s(p):
    if p["alpha"] == p["s"]:
        return "alpha != s required"
    return None


def _g9_top(r):
    return _B(_x, _y * (r - 2) + _xp(r - 2))


def _g9(p):
    r = p["r"]
    return [_B(1, 0), _B(0, 1)] + _dy_powers(1, r - 3) + [_g9_top(r)]


def _g9m(p):
    r = p["r"]
    t = _g9_top(r)
    return [_L(1), _L(0, 1)] + _dy_powers(1, r - 3, lift=True) + [_L(t.ax, t.ay, _C)]


def _g9a(p):
    r, s = p["r"], p["s"]
    t = _g9_top(r)
    gens = [_L(1), _L(0, 1)]
    gens += _dy_powers(1, s - 1, lift=True)
    gens += [_L(0, _xp(s + i), _xp(i) * comb(s + i, s)) for i in range(r - 2 - s)]
    gens.append(_L(t.ax, t.ay, _xp(r - s - 2) * comb(r - 2, s) + _u * (r - s - 2)))
    return gens


def _g10(p):
    r = p["r"]
    return [_B(1, 0), _B(0, 1)] + _dy_powers(1, r - 4) + [_B(_x, 0), _B(0, _y)]


def _g10m(p):
    r = p["r"]
    return [_L(1), _L(0, 1)] + _dy_powers(1, r - 4, lift=True) + [_L(_x, 0, _A), _L(0, _y, _Bs)]


def _g10a(p):
    r, s = p["r"], p["s"]
    gens = [_L(1), _L(0, 1)]
    gens += _dy_powers(1, s - 1, lift=True)
    gens += [_L(0, _xp(s + i), _xp(i) * comb(s + i, s)) for i in range(r - 3 - s)]
    gens += [_L(_x, 0, _u * (-s)), _L(0, _y, _u)]
    return gens


_RA = {"r": _INT, "alpha": _CONST}
_RS = {"r": _INT, "s": _INT}
_reg(CatalogEntry("g8", None, dict(_RA), _r_at_least(3), _g8, r_min=3,
                  formula="Dx, Dy, x*Dy, ..., x^(r-3)*Dy, x*Dx + alpha*y*Dy"))
_reg(CatalogEntry("g9", None, {"r": _INT}, _r_at_least(3), _g9, r_min=3,
                  formula="Dx, Dy, x*Dy, ..., x^(r-3)*Dy, x*Dx + ((r-2)*y + x^(r-2))*Dy"))
_reg(CatalogEntry("g10", None, {"r": _INT}, _r_at_least(4), _g10, r_min=4,
                  formula="Dx, Dy, x*Dy, ..., x^(r-4)*Dy, x*Dx, y*Dy"))
_reg(CatalogEntry("g8.m", "g8", dict(_RA), _r_at_least(3), _g8m, _g8m_consts, r_min=3))
_reg(CatalogEntry("g8.a", "g8", {"r": _INT, "alpha": _CONST, "s": _INT},
                  _all(_r_at_least(4), _s_range(1, 3), _alpha_ne_s), _g8a, r_min=4))
_reg(CatalogEntry("g9.m", "g9", {"r": _INT}, _r_at_least(3), _g9m, lambda p: ["C"], r_min=3))
_reg(CatalogEntry("g9.a", "g9", dict(_RS), _all(_r_at_least(4), _s_range(1, 3)), _g9a, r_min=4))
_reg(CatalogEntry("g10.m", "g10", {"r": _INT}, _r_at_least(4), _g10m, lambda p: ["A", "B"], r_min=4))
_reg(CatalogEntry("g10.a", "g10", dict(_RS), _all(_r_at_least(5), _s_range(1, 4)), _g10a, r_min=5))


# -- g13, g14 ------------------------------------------------------------------------


def _half(n):
    return GaussianRational(n) / 2


def _g13(p):
    r = p["r"]
    return (
        [_B(1, 0), _B(0, 1)]
        + _dy_powers(1, r - 4)
        + [_B(_x**2, _x * _y * (r - 4)), _B(_x, _y * _half(r - 4))]
    )


def _g13m1(p):
    return [
        _L(1), _L(0, 1),
        _L(0, _x, _Bs), _L(0, _x**2, 2 * _Bs * _x),
        _L(_x**2, 2 * _x * _y, 2 * _x * _A + 2 * _y * _Bs),
        _L(_x, _y, _A),
    ]


def _g13m2(p):
    r = p["r"]
    return (
        [_L(1), _L(0, 1)]
        + _dy_powers(1, r - 4, lift=True)
        + [_L(_x**2, _x * _y * (r - 4), 2 * _C * _x), _L(_x, _y * _half(r - 4), _C)]
    )


def _g13a1(p):
    r = p["r"]
    return (
        [_L(1), _L(0, 1)]
        + _dy_powers(1, r - 4, lift=True)
        + [_L(_x**2, _x * _y * (r - 4), 1 - 2 * _x * _u), _L(_x, _y * _half(r - 4), -_u)]
    )


def _g13a2(p):
    r = p["r"]
    return (
        [_L(1), _L(0, 1)]
        + [_L(0, _xp(i), _xp(i - 1) * i) for i in range(1, r - 3)]
        + [
            _L(_x**2, _x * _y * (r - 4), _x * _u * (r - 6) + _y * (r - 4)),
            _L(_x, _y * _half(r - 4), _u * _half(r - 6)),
        ]
    )


def _g14(p):
    r = p["r"]
    return (
        [_B(1, 0), _B(0, 1)]
        + _dy_powers(1, r - 5)
        + [_B(0, _y), _B(_x, 0), _B(_x**2, _x * _y * (r - 5))]
    )


def _g14m(p):
    r = p["r"]
    return (
        [_L(1), _L(0, 1)]
        + _dy_powers(1, r - 5, lift=True)
        + [_L(0, _y, _Bs), _L(_x, 0, _A), _L(_x**2, _x * _y * (r - 5), (2 * _A + _Bs * (r - 5)) * _x)]
    )


def _g14a1(p):
    r = p["r"]
    return (
        [_L(1), _L(0, 1)]
        + _dy_powers(1, r - 5, lift=True)
        + [_L(0, _y), _L(_x, 0, -_u), _L(_x**2, _x * _y * (r - 5), 1 - 2 * _x * _u)]
    )


def _g14a2(p):
    r = p["r"]
    return (
        [_L(1), _L(0, 1)]
        + [_L(0, _xp(i), _xp(i - 1) * i) for i in range(1, r - 4)]
        + [
            _L(0, _y, _u),
            _L(_x, 0, -_u),
            _L(_x**2, _x * _y * (r - 5), _x * _u * (r - 7) + _y * (r - 5)),
        ]
    )


def _r_not_6(p):
    # at r = 6 every u-term with a factor (r - 6) drops out and the family
    # coincides with g13.m1 at A = 0, B = 1, a metric lift
    if p["r"] == 6:
        return "r != 6 required (at r = 6 this is the metric lift g13.m1 with A=0, B=1)"
    return None


def _r_is_6(p):
    if p["r"] != 6:
        return "this family only exists for r = 6"
    return None


_reg(CatalogEntry("g13", None, {"r": _INT}, _r_at_least(5), _g13, r_min=5,
                  formula="Dx, Dy, x*Dy, ..., x^(r-4)*Dy, x^2*Dx + (r-4)*x*y*Dy, x*Dx + (r-4)/2*y*Dy"))
_reg(CatalogEntry("g14", None, {"r": _INT}, _r_at_least(6), _g14, r_min=6,
                  formula="Dx, Dy, x*Dy, ..., x^(r-5)*Dy, y*Dy, x*Dx, x^2*Dx + (r-5)*x*y*Dy"))
_reg(CatalogEntry("g13.m1", "g13", {"r": _INT}, _r_is_6, _g13m1, lambda p: ["A", "B"], r_min=6))
_reg(CatalogEntry("g13.m2", "g13", {"r": _INT}, _r_at_least(5), _g13m2, lambda p: ["C"], r_min=5))
_reg(CatalogEntry("g13.a1", "g13", {"r": _INT}, _r_at_least(5), _g13a1, r_min=5))
_reg(CatalogEntry("g13.a2", "g13", {"r": _INT}, _all(_r_at_least(5), _r_not_6), _g13a2, r_min=5))
_reg(CatalogEntry("g14.m", "g14", {"r": _INT}, _r_at_least(6), _g14m, lambda p: ["A", "B"], r_min=6))
_reg(CatalogEntry("g14.a1", "g14", {"r": _INT}, _r_at_least(6), _g14a1, r_min=6))
_reg(CatalogEntry("g14.a2", "g14", {"r": _INT}, _r_at_least(6), _g14a2, r_min=6))


# -- g15, g16 and the singular realizations -------------------------------------------------

_reg(CatalogEntry("g15", None, {}, _ok, _fixed([_B(1, 0), _B(_x, 1), _B(_x**2, 2 * _x)]), r_min=3,
                  formula="Dx, x*Dx + Dy, x^2*Dx + 2*x*Dy"))
_reg(CatalogEntry("g16", None, {}, _ok, _fixed([_B(1, 0), _B(_x, -_y), _B(_x**2, 1 - 2 * _x * _y)]), r_min=3,
                  formula="Dx, x*Dx - y*Dy, x^2*Dx + (1 - 2*x*y)*Dy"))
_reg(CatalogEntry("g15.m", "g15", {}, _ok,
                  lambda p: [_L(1), _L(_x, 1), _L(_x**2, 2 * _x, _C * ExpPoly.monomial(1, freq=(0, 1)))],
                  lambda p: ["C"], r_min=3))
_reg(CatalogEntry("g16.m", "g16", {}, _ok,
                  lambda p: [_L(1), _L(_x, -_y, _C), _L(_x**2, 1 - 2 * _x * _y, 2 * _C * _x)],
                  lambda p: ["C"], r_min=3))
_reg(CatalogEntry("g15t", None, {}, _ok, _fixed([_B(_y, 0), _B(0, _x), _B(_x, -_y)]), r_min=3,
                  transitive=False, formula="y*Dx, x*Dy, x*Dx - y*Dy"))
_reg(CatalogEntry("g16t", None, {}, _ok,
                  _fixed([_B(1, 0), _B(_x, _y), _B(_x**2, _y * (2 * _x + _y))]), r_min=3,
                  transitive=False, formula="Dx, x*Dx + y*Dy, x^2*Dx + y*(2*x + y)*Dy"))


# -- public API ------------------------------------------------------------------------------


def _sort_key(eid: str):
    m = re.match(r"g(\d+)(t?)(?:\.(\w+))?$", eid)
    return (int(m.group(1)), m.group(2), m.group(3) or "")


def ids() -> List[str]:
    return sorted(ENTRIES, key=_sort_key)


def base_ids() -> List[str]:
    return [i for i in ids() if not ENTRIES[i].is_lift]


def lift_ids() -> List[str]:
    return [i for i in ids() if ENTRIES[i].is_lift]


def get_entry(eid: str) -> CatalogEntry:
    try:
        return ENTRIES[eid]
    except KeyError:
        raise UnknownId(f"unknown catalog id {eid!r}") from None


def _normalize(entry: CatalogEntry, params: dict) -> Tuple[dict, dict]:
    """Split an assignment into schema parameters and constant values."""
    sp: dict = {}
    consts: dict = {}
    for k, v in params.items():
        kind = entry.params.get(k)
        if k == "r" and kind is None and entry.params.get("alphas"):
            kind = _INT
        if kind is None:
            if re.match(r"^[A-Z][A-Za-z0-9_]*$", k):
                consts[k] = as_gq(v)
                continue
            raise InvalidParameter(f"{entry.id} has no parameter {k!r}")
        try:
            if kind == _INT:
                g = as_gq(v)
                if not g.is_integer():
                    raise ValueError
                sp[k] = int(g)
            elif kind == _CONST:
                sp[k] = as_gq(v)
            elif kind == _CLIST:
                sp[k] = [as_gq(x) for x in v]
            else:
                sp[k] = [int(as_gq(x)) for x in v]
        except (ValueError, TypeError, ParseError):
            raise InvalidParameter(f"bad value {v!r} for {k}") from None
    for k in entry.params:
        if k not in sp:
            if entry.id == "g13.m1" and k == "r":
                sp["r"] = 6
                continue
            raise InvalidParameter(f"{entry.id} needs parameter {k!r}")
    return sp, consts


def free_constants(eid: str, params: Optional[dict] = None) -> List[str]:
    entry = get_entry(eid)
    sp, consts = _normalize(entry, params or {})
    msg = entry.check(sp)
    if msg:
        raise InvalidParameter(msg)
    return [c for c in entry.constants(sp) if c not in consts]


def instantiate(eid: str, params: Optional[dict] = None) -> List[VectorField]:
    """Concrete generators of an entry; unassigned constants stay symbolic."""
    entry = get_entry(eid)
    sp, consts = _normalize(entry, params or {})
    msg = entry.check(sp)
    if msg:
        raise InvalidParameter(f"{eid}: {msg}")
    known = set(entry.constants(sp))
    extra = set(consts) - known
    if extra:
        raise InvalidParameter(f"{eid} has no constant(s) {', '.join(sorted(extra))}")
    gens = entry.build(sp)
    if consts:
        gens = [X.subs(consts) for X in gens]
    return gens


def base_params(eid: str, params: Optional[dict] = None) -> dict:
    """The assignment restricted to the base entry's schema."""
    entry = get_entry(eid)
    if not entry.is_lift:
        return dict(params or {})
    base = get_entry(entry.base_id)
    sp, _ = _normalize(entry, params or {})
    out = {k: v for k, v in sp.items() if k in base.params}
    return out


# -- text form ----------------------------------------------------------------------------

_INST_RE = re.compile(r"^\s*(g\d+t?(?:\.[a-z]\d?)?)\s*(?:\[(.*)\])?\s*$")


def parse_instance(text: str) -> Tuple[str, dict]:
    """``'g4[alphas=0;1,ms=1;1]'`` -> ``('g4', {'alphas': [0, 1], 'ms': [1, 1]})``."""
    m = _INST_RE.match(text)
    if not m:
        raise ParseError(f"cannot parse instance {text!r}")
    eid, body = m.group(1), m.group(2)
    entry = get_entry(eid)
    params: dict = {}
    if body:
        for item in body.split(","):
            if "=" not in item:
                raise ParseError(f"expected key=value in {item!r}")
            k, v = (s.strip() for s in item.split("=", 1))
            kind = entry.params.get(k)
            try:
                if kind in (_CLIST, _ILIST):
                    vals = [parse_constant(s) for s in v.split(";") if s.strip()]
                    params[k] = [int(x) for x in vals] if kind == _ILIST else vals
                elif kind == _INT or k == "r":
                    params[k] = int(parse_constant(v))
                else:
                    params[k] = parse_constant(v)
            except (ValueError, TypeError) as exc:
                raise ParseError(f"bad value {v!r} for {k}") from exc
    return eid, params


def _fmt_value(v) -> str:
    if isinstance(v, (list, tuple)):
        return ";".join(_fmt_value(x) for x in v)
    return str(as_gq(v)).replace(" ", "")


def format_instance(eid: str, params: Optional[dict] = None) -> str:
    if not params:
        return eid
    entry = get_entry(eid)
    order = list(entry.params) + sorted(k for k in params if k not in entry.params)
    items = [f"{k}={_fmt_value(params[k])}" for k in order if k in params]
    return f"{eid}[{','.join(items)}]"


def instantiate_text(text: str) -> List[VectorField]:
    eid, params = parse_instance(text)
    return instantiate(eid, params)


# -- test grid -----------------------------------------------------------------------------


@dataclass(frozen=True)
class TestGrid:
    """Bounds for :func:`enumerate_instances`.

    ``r_max`` and ``r_span`` bound the parameter ``r``; families without
    parameters are always included.
    """

    __test__ = False

    r_max: int = 7
    r_span: int = 2
    alphas: Tuple[GaussianRational, ...] = field(
        default_factory=lambda: tuple(as_gq(a) for a in ("0", "1", "2", "1/2", "i"))
    )
    freqs: Tuple[GaussianRational, ...] = field(default_factory=lambda: tuple(as_gq(a) for a in ("0", "1", "i")))
    max_freqs: int = 2


def parse_grid(text: str) -> TestGrid:
    """``'r_max=5,r_span=1,alphas=0;1,freqs=0;1,max_freqs=2'``; missing keys keep defaults."""
    kw: dict = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        if "=" not in item:
            raise ParseError(f"expected key=value in grid item {item!r}")
        k, v = (s.strip() for s in item.split("=", 1))
        if k in ("r_max", "r_span", "max_freqs"):
            kw[k] = int(v)
        elif k in ("alphas", "freqs"):
            kw[k] = tuple(parse_constant(s) for s in v.split(";") if s.strip())
        else:
            raise ParseError(f"unknown grid key {k!r}")
    return TestGrid(**kw)


def default_grid() -> TestGrid:
    """The default grid, overridden by the ``LIFTLAB_GRID`` environment variable."""
    text = os.environ.get("LIFTLAB_GRID")
    return parse_grid(text) if text else TestGrid()


def _r_values(entry: CatalogEntry, grid: TestGrid) -> List[int]:
    lo = entry.r_min
    return [r for r in range(lo, lo + grid.r_span + 1) if r <= grid.r_max]


def _compositions(total: int, parts: int):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _candidates(entry: CatalogEntry, grid: TestGrid) -> List[dict]:
    keys = set(entry.params)
    if entry.id == "g13.m1":
        return [{}] if 6 <= grid.r_max else []
    if not keys:  # r_max bounds the parameter r; fixed-dimension families always appear
        return [{}]
    out = []
    if "alphas" in keys:
        offset = 2 if entry.id.startswith("g5") else 1
        for r in _r_values(entry, grid):
            for k in range(1, grid.max_freqs + 1):
                for al in combinations(grid.freqs, k):
                    for ms in _compositions(r - offset, k):
                        out.append({"alphas": list(al), "ms": list(ms)})
        return out
    for r in _r_values(entry, grid):
        base = [{"r": r}]
        if "alpha" in keys:
            base = [dict(b, alpha=a) for b in base for a in grid.alphas]
        if "s" in keys:
            base = [dict(b, s=s) for b in base for s in range(1, r)]
        out.extend(base)
    return out


def enumerate_instances(grid: Optional[TestGrid] = None, only: Optional[Sequence[str]] = None):
    """All ``(id, assignment)`` pairs of the grid in catalog order."""
    grid = grid or default_grid()
    out = []
    for eid in ids():
        if only is not None and eid not in only:
            continue
        entry = ENTRIES[eid]
        for p in _candidates(entry, grid):
            try:
                sp, _ = _normalize(entry, p)
            except InvalidParameter:
                continue
            if entry.check(sp) is None:
                out.append((eid, p))
    return out
