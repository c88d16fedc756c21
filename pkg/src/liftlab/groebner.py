"""Buchberger's algorithm over Q(i) and branch enumeration for small systems.

Polynomials here are in finitely many constant symbols; they are converted
from and to :class:`~liftlab.expoly.ExpPoly` at the boundary.  Monomials are
compared lexicographically in the order the variables are given.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BranchEnumerationFailed, LimitExceeded
from .expoly import ExpPoly
from .gq import GaussianRational, as_gq

__all__ = [
    "Poly",
    "groebner_basis",
    "reduce",
    "solve_constant_system",
    "Branch",
    "gaussian_rational_roots",
]

_ZERO = GaussianRational(0)
_ONE = GaussianRational(1)

Mono = Tuple[int, ...]


class Poly:
    """Sparse polynomial ``{exponent tuple: coefficient}`` in ``nvars`` variables."""

    __slots__ = ("n", "t")

    def __init__(self, n: int, terms: Optional[Dict[Mono, GaussianRational]] = None):
        self.n = n
        self.t = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, n: int, c) -> "Poly":
        return cls(n, {(0,) * n: as_gq(c)})

    @classmethod
    def var(cls, n: int, i: int) -> "Poly":
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): _ONE})

    def __bool__(self):
        return bool(self.t)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.t == other.t

    def __hash__(self):
        return hash(frozenset(self.t.items()))

    def lead(self) -> Mono:
        return max(self.t)

    def lc(self) -> GaussianRational:
        return self.t[max(self.t)]

    def is_constant(self) -> bool:
        return not self.t or set(self.t) == {(0,) * self.n}

    def variables(self) -> set:
        out = set()
        for e in self.t:
            out |= {i for i, k in enumerate(e) if k}
        return out

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.t), default=0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.t), default=0)

    def __add__(self, other: "Poly") -> "Poly":
        t = dict(self.t)
        for k, v in other.t.items():
            w = t.get(k)
            if w is None:
                t[k] = v
            else:
                w = w + v
                if w:
                    t[k] = w
                else:
                    del t[k]
        return Poly(self.n, t)

    def __neg__(self):
        return Poly(self.n, {k: -v for k, v in self.t.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def scale(self, c) -> "Poly":
        c = as_gq(c)
        return Poly(self.n, {k: v * c for k, v in self.t.items()})

    def mul_term(self, mono: Mono, c: GaussianRational) -> "Poly":
        return Poly(self.n, {tuple(a + b for a, b in zip(k, mono)): v * c for k, v in self.t.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        out = Poly(self.n)
        for k, v in other.t.items():
            out = out + self.mul_term(k, v)
        return out

    def monic(self) -> "Poly":
        return self.scale(self.lc().inverse()) if self.t else self

    def subs(self, i: int, value: "Poly") -> "Poly":
        """Replace variable ``i`` by ``value``."""
        out = Poly(self.n)
        powers = {0: Poly.const(self.n, 1)}
        for k, v in self.t.items():
            d = k[i]
            if d not in powers:
                p = powers[max(powers)]
                for _ in range(d - max(powers)):
                    p = p * value
                powers[d] = p
            rest = list(k)
            rest[i] = 0
            out = out + powers[d].mul_term(tuple(rest), v)
        return out

    def eval_const(self) -> GaussianRational:
        return self.t.get((0,) * self.n, _ZERO)

    def to_expoly(self, names: Sequence[str]) -> ExpPoly:
        out = {}
        for k, v in self.t.items():
            ps = tuple((names[i], e) for i, e in sorted(enumerate(k), key=lambda t: names[t[0]]) if e)
            out[(_ZERO, _ZERO, 0, 0, 0, ps)] = v
        return ExpPoly(out)

    @classmethod
    def from_expoly(cls, p: ExpPoly, names: Sequence[str]) -> "Poly":
        idx = {n: i for i, n in enumerate(names)}
        n = len(names)
        t: Dict[Mono, GaussianRational] = {}
        for (fx, fy, a, b, c, ps), q in p.items():
            if fx or fy or a or b or c:
                raise ValueError("equation depends on x, y or u")
            e = [0] * n
            for name, k in ps:
                if name not in idx:
                    raise ValueError(f"unknown symbol {name}")
                e[idx[name]] = k
            e = tuple(e)
            t[e] = t.get(e, _ZERO) + q
        return cls(n, t)

    def text(self, names: Sequence[str]) -> str:
        return str(self.to_expoly(names))

    def __repr__(self):
        return f"Poly({self.t!r})"


def _divides(a: Mono, b: Mono) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Mono, b: Mono) -> Mono:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_mono(a: Mono, b: Mono) -> Mono:
    return tuple(x - y for x, y in zip(a, b))


def reduce(f: Poly, G: Sequence[Poly]) -> Poly:
    """Full normal form of ``f`` modulo ``G``."""
    rem = Poly(f.n)
    p = Poly(f.n, f.t)
    leads = [(g.lead(), g.lc().inverse(), g) for g in G if g]
    while p.t:
        lt = p.lead()
        c = p.t[lt]
        for lm, inv, g in leads:
            if _divides(lm, lt):
                p = p - g.mul_term(_sub_mono(lt, lm), c * inv)
                break
        else:
            rem = rem + Poly(f.n, {lt: c})
            del p.t[lt]
    return rem


def groebner_basis(F: Sequence[Poly], max_pairs: int = 20000, max_terms: int = 5000) -> List[Poly]:
    """Reduced Groebner basis (monic, sorted by leading monomial)."""
    G = [f.monic() for f in F if f]
    if not G:
        return []
    pairs = list(combinations(range(len(G)), 2))
    processed = 0
    while pairs:
        i, j = pairs.pop(0)
        processed += 1
        if processed > max_pairs:
            raise LimitExceeded(f"more than {max_pairs} S-pairs")
        gi, gj = G[i], G[j]
        li, lj = gi.lead(), gj.lead()
        L = _lcm(li, lj)
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue  # coprime leading monomials
        s = gi.mul_term(_sub_mono(L, li), gi.lc().inverse()) - gj.mul_term(_sub_mono(L, lj), gj.lc().inverse())
        r = reduce(s, G)
        if r:
            if len(r.t) > max_terms:
                raise LimitExceeded(f"intermediate polynomial with {len(r.t)} terms")
            if r.is_constant():
                return [Poly.const(r.n, 1)]
            G.append(r.monic())
            k = len(G) - 1
            pairs.extend((m, k) for m in range(k))
    # minimize
    G = sorted(G, key=lambda g: g.lead())
    mins = []
    for g in G:
        if not any(_divides(h.lead(), g.lead()) for h in mins):
            mins = [h for h in mins if not _divides(g.lead(), h.lead())]
            mins.append(g)
    out = []
    for k, g in enumerate(mins):
        others = mins[:k] + mins[k + 1 :]
        r = reduce(g, others).monic()
        if r:
            out.append(r)
    return sorted(out, key=lambda g: g.lead())


# -- roots -----------------------------------------------------------------------


def _to_gq(z: complex, bound: int = 10**6) -> GaussianRational:
    return GaussianRational(Fraction(z.real).limit_denominator(bound), Fraction(z.imag).limit_denominator(bound))


def _synthetic_div(coeffs: List[GaussianRational], r: GaussianRational) -> Tuple[List[GaussianRational], GaussianRational]:
    """Divide ``sum coeffs[k] t^k`` by ``t - r``; returns (quotient, remainder)."""
    deg = len(coeffs) - 1
    q = [_ZERO] * deg
    acc = _ZERO
    for k in range(deg, -1, -1):
        acc = acc * r + coeffs[k]
        if k > 0:
            q[k - 1] = acc
    return q, acc


def gaussian_rational_roots(coeffs: List[GaussianRational]) -> Tuple[List[GaussianRational], int]:
    """Distinct Gaussian-rational roots of a univariate polynomial.

    ``coeffs[k]`` is the coefficient of ``t^k``.  Also returns the degree of
    the cofactor that has no such roots (0 when the polynomial splits).
    """
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    roots: List[GaussianRational] = []
    while len(coeffs) > 1:
        arr = [complex(c) for c in reversed(coeffs)]
        found = False
        for z in np.roots(arr):
            for bound in (10, 1000, 10**6):
                r = _to_gq(z, bound)
                q, rem = _synthetic_div(coeffs, r)
                if not rem:
                    if r not in roots:
                        roots.append(r)
                    coeffs = q
                    found = True
                    break
            if found:
                break
        if not found:
            break
    return sorted(roots, key=lambda q: q.sort_key()), len(coeffs) - 1


# -- branch enumeration ----------------------------------------------------------------


@dataclass
class Branch:
    """One component: ``assignment`` maps symbols to polynomials in ``free``."""

    assignment: Dict[str, ExpPoly]
    free: List[str]
    basis: List[str] = field(default_factory=list)

    def substitute(self, p: ExpPoly) -> ExpPoly:
        return p.subs(self.assignment) if self.assignment else p

    def report(self) -> dict:
        return {
            "assignment": {k: str(v) for k, v in sorted(self.assignment.items())},
            "free": list(self.free),
        }


def _linear_pivot(g: Poly, avoid: set) -> Optional[Tuple[int, Poly]]:
    """A variable occurring only as ``c * v`` (c constant) in ``g``, and its value."""
    for i in sorted(g.variables()):
        if i in avoid:
            continue
        if g.degree_in(i) != 1:
            continue
        coeff = None
        ok = True
        rest = {}
        for e, v in g.t.items():
            if e[i]:
                if any(k for j, k in enumerate(e) if j != i):
                    ok = False
                    break
                coeff = v
            else:
                rest[e] = v
        if ok and coeff is not None:
            return i, Poly(g.n, rest).scale(-coeff.inverse())
    return None


def _common_var(g: Poly) -> Optional[int]:
    for i in range(g.n):
        if all(e[i] > 0 for e in g.t):
            return i
    return None


def _divide_var(g: Poly, i: int) -> Poly:
    t = {}
    for e, v in g.t.items():
        e = list(e)
        e[i] -= 1
        t[tuple(e)] = v
    return Poly(g.n, t)


class _Solver:
    def __init__(self, names, max_branches, max_pairs, trace):
        self.names = names
        self.n = len(names)
        self.max_branches = max_branches
        self.max_pairs = max_pairs
        self.trace = trace
        self.out: List[Tuple[Dict[int, Poly], List[Poly]]] = []
        self.calls = 0

    def run(self, eqs: List[Poly], fixed: Dict[int, Poly]):
        self.calls += 1
        if self.calls > 50 * self.max_branches:
            raise LimitExceeded("branch recursion limit")
        G = groebner_basis(eqs, max_pairs=self.max_pairs)
        if self.trace is not None:
            self.trace.append([g.text(self.names) for g in G])
        if G and G[0].is_constant():
            return
        if not G:
            self._emit(fixed, G)
            return
        # rule 1: substitute a linear variable with constant coefficient
        for g in G:
            piv = _linear_pivot(g, set())
            if piv is not None:
                i, val = piv
                new_fixed = {k: v.subs(i, val) for k, v in fixed.items()}
                new_fixed[i] = val
                rest = [h.subs(i, val) for h in G if h is not g]
                self.run([h for h in rest if h], new_fixed)
                return
        # rule 2: split on a variable factor
        for g in G:
            i = _common_var(g)
            if i is not None:
                self.run(G + [Poly.var(self.n, i)], fixed)
                self.run([h for h in G if h is not g] + [_divide_var(g, i)], fixed)
                return
        # rule 3: univariate generator with Gaussian-rational roots
        for g in G:
            vs = g.variables()
            if len(vs) == 1:
                (i,) = vs
                deg = g.degree_in(i)
                coeffs = [_ZERO] * (deg + 1)
                for e, v in g.t.items():
                    coeffs[e[i]] = v
                roots, rest = gaussian_rational_roots(coeffs)
                if rest:
                    break
                for r in roots:
                    self.run(G + [Poly.var(self.n, i) - Poly.const(self.n, r)], fixed)
                return
        raise BranchEnumerationFailed(
            "basis is not of an enumerable shape", basis=[g.text(self.names) for g in G]
        )

    def _emit(self, fixed, G):
        self.out.append((fixed, G))
        if len(self.out) > self.max_branches:
            raise LimitExceeded(f"more than {self.max_branches} branches")


def solve_constant_system(
    eqs: Sequence[ExpPoly],
    variables: Optional[Sequence[str]] = None,
    max_branches: int = 64,
    max_pairs: int = 20000,
    trace: Optional[list] = None,
) -> List[Branch]:
    """Enumerate the solution components of a polynomial system in constants.

    Each branch fixes some symbols as polynomials in the remaining free
    ones.  Every input equation is checked to vanish on every branch.
    Duplicate branches are merged; a branch contained in another one is kept
    (the decomposition is not necessarily irredundant).
    """
    names = set()
    for e in eqs:
        names |= e.params()
    if variables is None:
        variables = sorted(names)
    else:
        variables = list(variables) + sorted(names - set(variables))
    polys = [Poly.from_expoly(e, variables) for e in eqs]
    polys = [p for p in polys if p]
    solver = _Solver(variables, max_branches, max_pairs, trace)
    solver.run(polys, {})
    branches: List[Branch] = []
    seen = set()
    for fixed, _G in solver.out:
        assignment = {variables[i]: fixed[i].to_expoly(variables) for i in sorted(fixed)}
        key = tuple(sorted((k, str(v)) for k, v in assignment.items()))
        if key in seen:
            continue
        seen.add(key)
        used = set()
        for v in assignment.values():
            used |= v.params()
        free = [v for v in variables if v not in assignment]
        br = Branch(assignment, free)
        for e in eqs:
            if br.substitute(e):
                raise AssertionError(f"branch {key} does not satisfy {e}")
        branches.append(br)
    return branches
