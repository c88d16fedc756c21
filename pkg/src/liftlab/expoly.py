"""Exact exponential polynomials.

An :class:`ExpPoly` is a finite sum of terms

    q * x^a * y^b * u^c * (parameter monomial) * e^(wx*x + wy*y)

with Gaussian-rational ``q``, ``wx`` and ``wy``.  Parameter symbols
(``A``, ``B``, ``C_1_0``, ...) are indeterminate constants: they commute
with everything and have zero derivative.

Internally a term is keyed by ``(wx, wy, a, b, c, params)`` where ``params``
is a name-sorted tuple of ``(name, power)`` pairs.  Keys are totally ordered
by ``(wx, wy, a, b, c, params)`` which fixes the printed order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import factorial
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

from .errors import (
    ContainsFiberVariable,
    NonExactEvaluation,
    ParameterDifferentiation,
    ParseError,
)
from .gq import GQ, ONE, ZERO, GaussianRational, as_gq

__all__ = [
    "ExpPoly",
    "Term",
    "parse",
    "parse_constant",
    "const",
    "var",
    "sym",
    "exp",
    "X",
    "Y",
    "U",
    "is_param_name",
]

Key = Tuple[GaussianRational, GaussianRational, int, int, int, tuple]

_BASE_VARS = ("x", "y", "u")
_PARAM_RE = re.compile(r"^[A-Z][A-Za-z0-9_]*$")
_RESERVED = {"Dx", "Dy", "Du"}


def is_param_name(name: str) -> bool:
    return bool(_PARAM_RE.match(name)) and name not in _RESERVED


def _merge_params(p: tuple, q: tuple) -> tuple:
    if not p:
        return q
    if not q:
        return p
    d = dict(p)
    for name, k in q:
        d[name] = d.get(name, 0) + k
    return tuple(sorted(d.items()))


def _fadd(f: GaussianRational, g: GaussianRational) -> GaussianRational:
    if not f:
        return g
    if not g:
        return f
    return f + g


def _key_order(key: Key):
    return (key[0].sort_key(), key[1].sort_key(), key[2], key[3], key[4], key[5])


@dataclass(frozen=True)
class Term:
    """Public read-only view of one term."""

    coeff: GaussianRational
    exps: Tuple[Tuple[str, int], ...]
    freq: Tuple[GaussianRational, GaussianRational]

    def exps_dict(self) -> Dict[str, int]:
        return dict(self.exps)


class ExpPoly:
    """Immutable exponential polynomial in ``x, y, u`` and parameter symbols."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Optional[Mapping[Key, GaussianRational]] = None):
        if terms:
            self._t = {k: v for k, v in terms.items() if v}
        else:
            self._t = {}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "ExpPoly":
        obj = object.__new__(cls)
        obj._t = terms
        obj._hash = None
        return obj

    # -- constructors ----------------------------------------------------
    @classmethod
    def const(cls, c) -> "ExpPoly":
        c = as_gq(c)
        if not c:
            return cls._raw({})
        return cls._raw({(ZERO, ZERO, 0, 0, 0, ()): c})

    @classmethod
    def monomial(cls, coeff=1, x=0, y=0, u=0, params=(), freq=(0, 0)) -> "ExpPoly":
        coeff = as_gq(coeff)
        if not coeff:
            return cls._raw({})
        if isinstance(params, Mapping):
            params = params.items()
        ps = tuple(sorted((n, k) for n, k in params if k))
        for n, _ in ps:
            if not is_param_name(n):
                raise ValueError(f"invalid parameter symbol {n!r}")
        fx, fy = as_gq(freq[0]), as_gq(freq[1])
        if min(x, y, u) < 0 or any(k < 0 for _, k in ps):
            raise ValueError("exponents must be nonnegative")
        return cls._raw({(fx, fy, x, y, u, ps): coeff})

    # -- inspection ------------------------------------------------------
    def keys(self):
        return self._t.keys()

    def items(self):
        return self._t.items()

    def sorted_items(self):
        return sorted(self._t.items(), key=lambda kv: _key_order(kv[0]))

    def terms(self):
        out = []
        for (fx, fy, a, b, c, ps), q in self.sorted_items():
            exps = []
            for name, k in zip(_BASE_VARS, (a, b, c)):
                if k:
                    exps.append((name, k))
            exps.extend(ps)
            out.append(Term(q, tuple(exps), (fx, fy)))
        return out

    def __len__(self):
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and (ZERO, ZERO, 0, 0, 0, ()) in self._t)

    def constant_value(self) -> GaussianRational:
        if not self._t:
            return ZERO
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self._t[(ZERO, ZERO, 0, 0, 0, ())]

    def constant_term(self) -> GaussianRational:
        return self._t.get((ZERO, ZERO, 0, 0, 0, ()), ZERO)

    def degree(self, v: str) -> int:
        if not self._t:
            return -1
        if v in _BASE_VARS:
            idx = 2 + _BASE_VARS.index(v)
            return max(k[idx] for k in self._t)
        return max(dict(k[5]).get(v, 0) for k in self._t)

    def xy_degree(self) -> int:
        if not self._t:
            return -1
        return max(k[2] + k[3] for k in self._t)

    def has_u(self) -> bool:
        return any(k[4] for k in self._t)

    def has_exp(self) -> bool:
        return any(k[0] or k[1] for k in self._t)

    def params(self) -> set:
        out = set()
        for k in self._t:
            out.update(n for n, _ in k[5])
        return out

    def is_param_free(self) -> bool:
        return not any(k[5] for k in self._t)

    def frequencies(self) -> set:
        return {(k[0], k[1]) for k in self._t}

    # -- ring operations -------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, ExpPoly):
            try:
                other = ExpPoly.const(other)
            except TypeError:
                return NotImplemented
        if not other._t:
            return self
        if not self._t:
            return other
        t = dict(self._t)
        for k, v in other._t.items():
            w = t.get(k)
            if w is None:
                t[k] = v
            else:
                w = w + v
                if w:
                    t[k] = w
                else:
                    del t[k]
        return ExpPoly._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly._raw({k: -v for k, v in self._t.items()})

    def __sub__(self, other):
        if not isinstance(other, ExpPoly):
            try:
                other = ExpPoly.const(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "ExpPoly":
        c = as_gq(c)
        if not c:
            return ExpPoly._raw({})
        if c == ONE:
            return self
        return ExpPoly._raw({k: v * c for k, v in self._t.items()})

    def __mul__(self, other):
        if not isinstance(other, ExpPoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        if not self._t or not other._t:
            return ExpPoly._raw({})
        t: dict = {}
        for (f1, g1, a1, b1, c1, p1), q1 in self._t.items():
            for (f2, g2, a2, b2, c2, p2), q2 in other._t.items():
                k = (_fadd(f1, f2), _fadd(g1, g2), a1 + a2, b1 + b2, c1 + c2, _merge_params(p1, p2))
                w = t.get(k)
                q = q1 * q2
                if w is None:
                    t[k] = q
                else:
                    w = w + q
                    if w:
                        t[k] = w
                    else:
                        del t[k]
        return ExpPoly._raw(t)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = ExpPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        c = as_gq(other.constant_value() if isinstance(other, ExpPoly) else other)
        return self.scale(c.inverse())

    # -- calculus --------------------------------------------------------
    def diff(self, v: str) -> "ExpPoly":
        """Partial derivative with respect to ``x``, ``y`` or ``u``."""
        if v not in _BASE_VARS:
            if is_param_name(v):
                raise ParameterDifferentiation(f"cannot differentiate by parameter symbol {v}")
            raise ValueError(f"unknown variable {v!r}")
        t: dict = {}

        def put(k, q):
            w = t.get(k)
            if w is None:
                t[k] = q
            else:
                w = w + q
                if w:
                    t[k] = w
                else:
                    del t[k]

        for key, q in self._t.items():
            fx, fy, a, b, c, ps = key
            if v == "x":
                if a:
                    put((fx, fy, a - 1, b, c, ps), q * a)
                if fx:
                    put(key, q * fx)
            elif v == "y":
                if b:
                    put((fx, fy, a, b - 1, c, ps), q * b)
                if fy:
                    put(key, q * fy)
            else:
                if c:
                    put((fx, fy, a, b, c - 1, ps), q * c)
        return ExpPoly._raw(t)

    def _antideriv(self, axis: int) -> "ExpPoly":
        if self.has_u():
            raise ContainsFiberVariable("antiderivative requires a u-free argument")
        t: dict = {}

        def put(k, q):
            w = t.get(k)
            if w is None:
                t[k] = q
            else:
                w = w + q
                if w:
                    t[k] = w
                else:
                    del t[k]

        for key, q in self._t.items():
            fx, fy, a, b, c, ps = key
            w = (fx, fy)[axis]
            n = (a, b)[axis]
            if not w:
                if axis == 0:
                    put((fx, fy, a + 1, b, c, ps), q / (a + 1))
                else:
                    put((fx, fy, a, b + 1, c, ps), q / (b + 1))
                continue
            # integral of t^n e^{wt} = e^{wt} sum_k (-1)^k n!/(n-k)! t^(n-k) / w^(k+1)
            winv = w.inverse()
            scale = winv
            for k in range(n + 1):
                coeff = q * scale * (factorial(n) // factorial(n - k))
                if k % 2:
                    coeff = -coeff
                if axis == 0:
                    put((fx, fy, n - k, b, c, ps), coeff)
                else:
                    put((fx, fy, a, n - k, c, ps), coeff)
                scale = scale * winv
        return ExpPoly._raw(t)

    def antideriv_x(self) -> "ExpPoly":
        """x-antiderivative with zero integration constant."""
        return self._antideriv(0)

    def antideriv_y(self) -> "ExpPoly":
        return self._antideriv(1)

    # -- substitution ----------------------------------------------------
    def eval_at(self, point: Mapping[str, object]):
        """Substitute constants for variables and/or parameter symbols.

        Returns a :class:`GaussianRational` when nothing symbolic is left and
        an :class:`ExpPoly` otherwise.
        """
        res = self.subs_values(point)
        if res.is_constant():
            return res.constant_value()
        return res

    def subs_values(self, point: Mapping[str, object]) -> "ExpPoly":
        vals = {k: as_gq(v) for k, v in point.items()}
        vx, vy, vu = vals.get("x"), vals.get("y"), vals.get("u")
        t: dict = {}
        for (fx, fy, a, b, c, ps), q in self._t.items():
            if fx and vx is not None:
                if vx:
                    raise NonExactEvaluation("e^(w*x) with w != 0 is only exact at x = 0")
                fx = ZERO
            if fy and vy is not None:
                if vy:
                    raise NonExactEvaluation("e^(w*y) with w != 0 is only exact at y = 0")
                fy = ZERO
            if vx is not None and a:
                q = q * vx**a
                a = 0
            if vy is not None and b:
                q = q * vy**b
                b = 0
            if vu is not None and c:
                q = q * vu**c
                c = 0
            if ps:
                rest = []
                for name, k in ps:
                    val = vals.get(name)
                    if val is None:
                        rest.append((name, k))
                    else:
                        q = q * val**k
                ps = tuple(rest)
            if not q:
                continue
            key = (fx, fy, a, b, c, ps)
            w = t.get(key)
            if w is None:
                t[key] = q
            else:
                w = w + q
                if w:
                    t[key] = w
                else:
                    del t[key]
        return ExpPoly._raw(t)

    def subs(self, mapping: Mapping[str, "ExpPoly"]) -> "ExpPoly":
        """Substitute ExpPolys for ``u`` and/or parameter symbols."""
        if not mapping:
            return self
        for name in mapping:
            if name in ("x", "y"):
                raise ValueError("substitution for x or y is not supported; use eval_at or swap_xy")
        mapping = {k: (v if isinstance(v, ExpPoly) else ExpPoly.const(v)) for k, v in mapping.items()}
        powcache: dict = {}

        def power(name, k):
            key = (name, k)
            if key not in powcache:
                powcache[key] = mapping[name] ** k
            return powcache[key]

        out = ExpPoly()
        acc: dict = {}
        for (fx, fy, a, b, c, ps), q in self._t.items():
            factor = None
            if c and "u" in mapping:
                factor = power("u", c)
                c = 0
            rest = []
            for name, k in ps:
                if name in mapping:
                    p = power(name, k)
                    factor = p if factor is None else factor * p
                else:
                    rest.append((name, k))
            base_key = (fx, fy, a, b, c, tuple(rest))
            if factor is None:
                w = acc.get(base_key)
                acc[base_key] = q if w is None else w + q
            else:
                out = out + ExpPoly._raw({base_key: q}) * factor
        return out + ExpPoly(acc)

    def swap_xy(self) -> "ExpPoly":
        return ExpPoly._raw({(fy, fx, b, a, c, ps): q for (fx, fy, a, b, c, ps), q in self._t.items()})

    def collect(self, names: Iterable[str]) -> Dict[tuple, "ExpPoly"]:
        """Split into coefficients of monomials in the given parameter symbols.

        Returns ``{params_monomial: ExpPoly}`` where the keys are sorted
        ``(name, power)`` tuples over ``names`` only.
        """
        names = set(names)
        out: Dict[tuple, dict] = {}
        for (fx, fy, a, b, c, ps), q in self._t.items():
            sel = tuple((n, k) for n, k in ps if n in names)
            rest = tuple((n, k) for n, k in ps if n not in names)
            out.setdefault(sel, {})[(fx, fy, a, b, c, rest)] = q
        return {k: ExpPoly._raw(v) for k, v in out.items()}

    def u_coefficients(self) -> Dict[int, "ExpPoly"]:
        """``{power: coefficient}`` for this as a polynomial in ``u``."""
        out: Dict[int, dict] = {}
        for (fx, fy, a, b, c, ps), q in self._t.items():
            out.setdefault(c, {})[(fx, fy, a, b, 0, ps)] = q
        return {k: ExpPoly._raw(v) for k, v in out.items()}

    def canonical(self) -> "ExpPoly":
        return ExpPoly(self._t)

    # -- equality / text -------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, ExpPoly):
            return self._t == other._t
        try:
            return self._t == ExpPoly.const(other)._t
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def __repr__(self):
        return f"ExpPoly({str(self)!r})"

    def __str__(self):
        return format_expoly(self)

    def __reduce__(self):
        return (parse, (str(self),))


def const(c) -> ExpPoly:
    return ExpPoly.const(c)


def var(name: str) -> ExpPoly:
    if name not in _BASE_VARS:
        raise ValueError(f"unknown variable {name!r}")
    return ExpPoly.monomial(1, **{name: 1})


def sym(name: str) -> ExpPoly:
    return ExpPoly.monomial(1, params=((name, 1),))


def exp(wx=0, wy=0) -> ExpPoly:
    return ExpPoly.monomial(1, freq=(wx, wy))


X = var("x")
Y = var("y")
U = var("u")


# ---------------------------------------------------------------------------
# printing


def _fmt_abs_real(q) -> Tuple[bool, str, bool]:
    """(negative, text, is_one) for a real Fraction."""
    neg = q < 0
    q = -q if neg else q
    if q.denominator == 1:
        return neg, str(q.numerator), q == 1
    return neg, f"({q.numerator}/{q.denominator})", False


def _monomial_text(key: Key) -> str:
    fx, fy, a, b, c, ps = key
    parts = []
    for name, k in ps:
        parts.append(name if k == 1 else f"{name}^{k}")
    for name, k in zip(_BASE_VARS, (a, b, c)):
        if k:
            parts.append(name if k == 1 else f"{name}^{k}")
    if fx or fy:
        inner = ""
        for w, key1 in ((fx, (ZERO, ZERO, 1, 0, 0, ())), (fy, (ZERO, ZERO, 0, 1, 0, ()))):
            if not w:
                continue
            neg, body = _term_text(key1, w)
            if not inner:
                inner = f"-{body}" if neg else body
            else:
                inner += f" - {body}" if neg else f" + {body}"
        parts.append(f"e^({inner})")
    return "*".join(parts)


def _term_text(key: Key, q: GaussianRational) -> Tuple[bool, str]:
    m = _monomial_text(key)
    if q.is_real():
        neg, body, one = _fmt_abs_real(q.re)
        if not m:
            return neg, body.strip("()") if "/" in body else body
        return neg, m if one else f"{body}*{m}"
    if q.re == 0:
        neg, body, one = _fmt_abs_real(q.im)
        imag = "i" if one else f"{body}*i"
        return neg, f"{imag}*{m}" if m else imag
    text = f"({q})"
    return False, f"{text}*{m}" if m else text


def format_expoly(p: ExpPoly) -> str:
    if not p._t:
        return "0"
    out = []
    for i, (key, q) in enumerate(p.sorted_items()):
        neg, body = _term_text(key, q)
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            break
        num, ident, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif ident is not None:
            tokens.append(("id", ident))
        else:
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r} in {text!r}")
            tokens.append(("op", op))
        pos = m.end()
    tokens.append(("end", None))
    return tokens


class _Parser:
    def __init__(self, text: str, allow_fields: bool = False):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_fields = allow_fields

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok != ("op", op):
            raise ParseError(f"expected {op!r} in {self.text!r}, got {tok[1]!r}")

    def parse(self) -> ExpPoly:
        if self.peek()[0] == "end":
            raise ParseError("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            raise ParseError(f"trailing input in {self.text!r} at token {self.peek()[1]!r}")
        return value

    def expr(self) -> ExpPoly:
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _starts_operand(self, tok) -> bool:
        return tok[0] in ("num", "id") or tok == ("op", "(")

    def term(self) -> ExpPoly:
        value = self.unary()
        while True:
            tok = self.peek()
            if tok == ("op", "*"):
                self.take()
                value = value * self.unary()
            elif tok == ("op", "/"):
                self.take()
                den = self.unary()
                if not den.is_constant() or den.is_zero():
                    raise ParseError(f"division by non-constant or zero {den} in {self.text!r}")
                value = value.scale(den.constant_value().inverse())
            elif self._starts_operand(tok):
                value = value * self.unary()
            else:
                return value

    def unary(self) -> ExpPoly:
        tok = self.peek()
        if tok == ("op", "-"):
            self.take()
            return -self.unary()
        if tok == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> ExpPoly:
        tok = self.peek()
        if tok == ("id", "e"):
            self.take()
            self.expect("^")
            arg = self.atom()
            return _exp_of_linear(arg, self.text)
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            n = self._int_exponent()
            return base**n
        return base

    def _int_exponent(self) -> int:
        tok = self.take()
        if tok[0] == "num":
            return tok[1]
        if tok == ("op", "("):
            inner = self.take()
            if inner[0] != "num":
                raise ParseError(f"exponent must be a nonnegative integer in {self.text!r}")
            self.expect(")")
            return inner[1]
        raise ParseError(f"exponent must be a nonnegative integer in {self.text!r}")

    def atom(self) -> ExpPoly:
        tok = self.take()
        kind, val = tok
        if kind == "num":
            return ExpPoly.const(val)
        if kind == "id":
            if val in _BASE_VARS:
                return var(val)
            if val == "i":
                return ExpPoly.const(GQ(0, 1))
            if val in _RESERVED:
                if not self.allow_fields:
                    raise ParseError(f"vector symbol {val} not allowed in a scalar expression")
                return ExpPoly._raw({(ZERO, ZERO, 0, 0, 0, ((val, 1),)): ONE})
            if is_param_name(val):
                return sym(val)
            raise ParseError(f"unknown identifier {val!r} in {self.text!r}")
        if tok == ("op", "("):
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def _exp_of_linear(arg: ExpPoly, text: str) -> ExpPoly:
    wx, wy = ZERO, ZERO
    for (fx, fy, a, b, c, ps), q in arg.items():
        if fx or fy or c or ps or (a, b) not in ((1, 0), (0, 1)):
            raise ParseError(f"exponent must be linear in x and y with constant coefficients: {text!r}")
        if a:
            wx = q
        else:
            wy = q
    return exp(wx, wy)


def parse(text: str) -> ExpPoly:
    """Parse the text syntax, e.g. ``'(1/2)*x^2*e^(2*x) - C*y + i'``."""
    return _Parser(text).parse()


def parse_with_vectors(text: str) -> ExpPoly:
    return _Parser(text, allow_fields=True).parse()


def parse_constant(text: str) -> GaussianRational:
    p = parse(text)
    if not p.is_constant():
        raise ParseError(f"{text!r} is not a constant")
    return p.constant_value()
