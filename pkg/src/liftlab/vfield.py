"""Vector fields on C^2 (base) and C^2 x C (total space) with exact coefficients."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

from .errors import DegreeTooHigh, NotInvertible, NotProjectable, ParseError, SpaceMismatch
from .expoly import ExpPoly, format_expoly, parse_with_vectors
from .gq import GaussianRational, as_gq

__all__ = [
    "VectorField",
    "FiberMap",
    "bracket",
    "apply",
    "project",
    "pushforward",
    "parse_field",
    "format_field",
    "Dx",
    "Dy",
    "Du",
]

_ZERO = ExpPoly()


def _as_poly(p) -> ExpPoly:
    if isinstance(p, ExpPoly):
        return p
    if isinstance(p, str):
        from .expoly import parse

        return parse(p)
    return ExpPoly.const(p)


class VectorField:
    """``ax*Dx + ay*Dy + au*Du``; ``total`` tags fields on C^2 x C."""

    __slots__ = ("ax", "ay", "au", "total", "_hash")

    def __init__(self, ax=0, ay=0, au=0, total: Optional[bool] = None):
        self.ax = _as_poly(ax)
        self.ay = _as_poly(ay)
        self.au = _as_poly(au)
        if total is None:
            total = bool(self.au) or self.ax.has_u() or self.ay.has_u()
        if not total and (self.au or self.ax.has_u() or self.ay.has_u()):
            raise SpaceMismatch("a field on C^2 cannot involve u or Du")
        self.total = total
        self._hash = None

    @property
    def components(self) -> Tuple[ExpPoly, ExpPoly, ExpPoly]:
        return (self.ax, self.ay, self.au)

    def is_zero(self) -> bool:
        return not (self.ax or self.ay or self.au)

    def as_total(self) -> "VectorField":
        if self.total:
            return self
        return VectorField(self.ax, self.ay, self.au, total=True)

    def is_projectable(self) -> bool:
        return not (self.ax.has_u() or self.ay.has_u())

    def params(self) -> set:
        return self.ax.params() | self.ay.params() | self.au.params()

    # -- linear structure --------------------------------------------------
    def _check(self, other: "VectorField"):
        if self.total != other.total:
            raise SpaceMismatch("fields live on different spaces")

    def __add__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField(self.ax + other.ax, self.ay + other.ay, self.au + other.au, self.total)

    def __sub__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField(self.ax - other.ax, self.ay - other.ay, self.au - other.au, self.total)

    def __neg__(self) -> "VectorField":
        return VectorField(-self.ax, -self.ay, -self.au, self.total)

    def __mul__(self, c) -> "VectorField":
        if isinstance(c, ExpPoly):
            return VectorField(self.ax * c, self.ay * c, self.au * c, self.total or c.has_u())
        c = as_gq(c)
        return VectorField(self.ax.scale(c), self.ay.scale(c), self.au.scale(c), self.total)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return (
            self.total == other.total
            and self.ax == other.ax
            and self.ay == other.ay
            and self.au == other.au
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.total, self.ax, self.ay, self.au))
        return self._hash

    # -- calculus -------------------------------------------------------------
    def __call__(self, f: ExpPoly) -> ExpPoly:
        return apply(self, f)

    def bracket(self, other: "VectorField") -> "VectorField":
        return bracket(self, other)

    def eval_at(self, point) -> tuple:
        return tuple(c.eval_at(point) for c in self.components[: 3 if self.total else 2])

    def subs(self, mapping) -> "VectorField":
        return VectorField(self.ax.subs(mapping), self.ay.subs(mapping), self.au.subs(mapping), self.total)

    def subs_values(self, point) -> "VectorField":
        return VectorField(
            self.ax.subs_values(point), self.ay.subs_values(point), self.au.subs_values(point), self.total
        )

    def swap_xy(self) -> "VectorField":
        return VectorField(self.ay.swap_xy(), self.ax.swap_xy(), self.au.swap_xy(), self.total)

    def coordinate_vector(self) -> dict:
        """Sparse vector keyed by ``(component, term key)`` for linear algebra."""
        vec = {}
        for i, comp in enumerate(self.components):
            for k, q in comp.items():
                vec[(i, k)] = q
        return vec

    def __str__(self):
        return format_field(self)

    def __repr__(self):
        return f"VectorField({format_field(self)!r})"

    def __reduce__(self):
        return (parse_field, (format_field(self), self.total))


def bracket(X: VectorField, Y: VectorField) -> VectorField:
    """Lie bracket ``[X, Y]``, componentwise ``X(Y^c) - Y(X^c)``."""
    X._check(Y)
    comps = []
    n = 3 if X.total else 2
    for i in range(3):
        if i >= n:
            comps.append(_ZERO)
            continue
        comps.append(apply(X, Y.components[i]) - apply(Y, X.components[i]))
    return VectorField(*comps, total=X.total)


def apply(X: VectorField, f: ExpPoly) -> ExpPoly:
    """Directional derivative ``ax*f_x + ay*f_y + au*f_u``."""
    f = _as_poly(f)
    if not X.total and f.has_u():
        raise SpaceMismatch("field on C^2 applied to a function of u")
    out = _ZERO
    if X.ax:
        out = out + X.ax * f.diff("x")
    if X.ay:
        out = out + X.ay * f.diff("y")
    if X.au:
        out = out + X.au * f.diff("u")
    return out


def project(X: VectorField) -> VectorField:
    """Image under d(pi): drop the Du component."""
    if not X.is_projectable():
        raise NotProjectable(f"{X} has u-dependent base components")
    return VectorField(X.ax, X.ay, 0, total=False)


def lift(X: VectorField, f=0) -> VectorField:
    """``X + f*Du`` for a base field ``X``."""
    return VectorField(X.ax, X.ay, _as_poly(f), total=True)


# ---------------------------------------------------------------------------
# fiber maps


def _is_unit_monomial(p: ExpPoly) -> bool:
    if len(p) != 1:
        return False
    (fx, fy, a, b, c, ps), _ = next(iter(p.items()))
    return not (a or b or c or ps)


def _unit_inverse(p: ExpPoly) -> ExpPoly:
    (fx, fy, a, b, c, ps), q = next(iter(p.items()))
    return ExpPoly.monomial(q.inverse(), freq=(-fx, -fy))


@dataclass(frozen=True)
class FiberMap:
    """Fiber-preserving change of coordinates, written as old ``u`` in terms of new.

    * translation: ``u = v + U``
    * affine:      ``u = A*v + B``
    * moebius:     ``u = (A*v + B) / (C*v + D)``

    ``unit_inv`` is the declared inverse of ``A`` (affine) or ``A*D - B*C``
    (moebius).  Coefficients are functions of ``x, y`` only.
    """

    kind: str
    A: ExpPoly = field(default_factory=ExpPoly)
    B: ExpPoly = field(default_factory=ExpPoly)
    C: ExpPoly = field(default_factory=ExpPoly)
    D: ExpPoly = field(default_factory=ExpPoly)
    U: ExpPoly = field(default_factory=ExpPoly)
    unit_inv: Optional[ExpPoly] = None

    @classmethod
    def identity(cls) -> "FiberMap":
        return cls("translation")

    @classmethod
    def translation(cls, U) -> "FiberMap":
        U = _as_poly(U)
        _check_u_free(U)
        return cls("translation", U=U)

    @classmethod
    def affine(cls, A, B=0, A_inv=None) -> "FiberMap":
        A, B = _as_poly(A), _as_poly(B)
        _check_u_free(A, B)
        inv = _declared_inverse(A, A_inv)
        return cls("affine", A=A, B=B, unit_inv=inv)

    @classmethod
    def moebius(cls, A, B, C, D, det_inv=None) -> "FiberMap":
        A, B, C, D = (_as_poly(p) for p in (A, B, C, D))
        _check_u_free(A, B, C, D)
        inv = _declared_inverse(A * D - B * C, det_inv)
        return cls("moebius", A=A, B=B, C=C, D=D, unit_inv=inv)

    def inverse(self) -> "FiberMap":
        if self.kind == "translation":
            return FiberMap("translation", U=-self.U)
        if self.kind == "affine":
            # v = A^{-1} u - A^{-1} B
            inv = self.unit_inv
            return FiberMap("affine", A=inv, B=-(inv * self.B), unit_inv=self.A)
        # inverse matrix (D, -B, -C, A) has the same determinant
        return FiberMap("moebius", A=self.D, B=-self.B, C=-self.C, D=self.A, unit_inv=self.unit_inv)

    def describe(self) -> str:
        if self.kind == "translation":
            return f"u -> u + ({self.U})"
        if self.kind == "affine":
            return f"u -> ({self.A})*u + ({self.B})"
        return f"u -> (({self.A})*u + ({self.B}))/(({self.C})*u + ({self.D}))"


def _check_u_free(*polys: ExpPoly):
    for p in polys:
        if p.has_u():
            raise ValueError("fiber map coefficients must not depend on u")


def _declared_inverse(unit: ExpPoly, inv) -> ExpPoly:
    if inv is None:
        if _is_unit_monomial(unit):
            return _unit_inverse(unit)
        raise NotInvertible(f"{unit} is not a recognisable unit; declare its inverse")
    inv = _as_poly(inv)
    if unit * inv != ExpPoly.const(1):
        raise NotInvertible(f"declared inverse {inv} of {unit} is wrong")
    return inv


def pushforward(X: VectorField, m: FiberMap) -> VectorField:
    """Express ``X`` in the new fiber coordinate defined by ``m``."""
    X = X.as_total()
    if not X.is_projectable():
        raise NotProjectable(f"{X} has u-dependent base components")
    base = VectorField(X.ax, X.ay, 0, total=False)
    U = ExpPoly.monomial(1, u=1)
    if m.kind == "translation":
        new_u = X.au.subs({"u": U + m.U}) - apply(base, m.U)
    elif m.kind == "affine":
        num = X.au.subs({"u": m.A * U + m.B}) - apply(base, m.A) * U - apply(base, m.B)
        new_u = num * m.unit_inv
    elif m.kind == "moebius":
        coeffs = X.au.u_coefficients()
        if any(k > 2 for k in coeffs):
            raise DegreeTooHigh("Moebius pushforward needs a Du component of degree <= 2 in u")
        alpha = coeffs.get(0, _ZERO)
        beta = coeffs.get(1, _ZERO)
        gamma = coeffs.get(2, _ZERO)
        N = m.A * U + m.B
        Q = m.C * U + m.D
        num = (
            alpha * Q * Q
            + beta * N * Q
            + gamma * N * N
            - Q * (apply(base, m.A) * U + apply(base, m.B))
            + N * (apply(base, m.C) * U + apply(base, m.D))
        )
        new_u = num * m.unit_inv
    else:
        raise ValueError(f"unknown fiber map kind {m.kind!r}")
    return VectorField(X.ax, X.ay, new_u, total=True)


# ---------------------------------------------------------------------------
# text syntax

_VEC = ("Dx", "Dy", "Du")


def format_field(X: VectorField) -> str:
    parts = []
    for comp, name in zip(X.components, _VEC):
        if not comp:
            continue
        s = format_expoly(comp)
        if len(comp) == 1:
            if s == "1":
                parts.append(name)
            elif s == "-1":
                parts.append(f"-{name}")
            else:
                parts.append(f"{s}*{name}")
        else:
            parts.append(f"({s})*{name}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def parse_field(text: str, total: Optional[bool] = None) -> VectorField:
    """Parse e.g. ``'x^2*Dx + (1-2*x*u)*Du'``."""
    p = parse_with_vectors(text)
    parts = p.collect(_VEC)
    comps = {name: _ZERO for name in _VEC}
    for mono, coeff in parts.items():
        if not mono:
            raise ParseError(f"scalar term {coeff} in vector field {text!r}")
        if len(mono) != 1 or mono[0][1] != 1:
            raise ParseError(f"nonlinear use of Dx/Dy/Du in {text!r}")
        comps[mono[0][0]] = coeff
    return VectorField(comps["Dx"], comps["Dy"], comps["Du"], total=total)


Dx = VectorField(1, 0, 0, total=False)
Dy = VectorField(0, 1, 0, total=False)
Du = VectorField(0, 0, 1, total=True)
