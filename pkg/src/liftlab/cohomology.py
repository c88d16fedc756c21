"""First Chevalley-Eilenberg cohomology with values in functions on C^2.

The module of functions is replaced by a finite window: exponential
monomials ``x^a y^b e^(wx*x + wy*y)`` with ``a + b <= D`` and frequencies
drawn from a set closed under sums of at most ``F`` seed frequencies.
Dimensions reported here are always "at truncation (D, F)".

A one-form ``psi`` assigns a function ``psi_i`` to each basis field ``X_i``;

    d psi(X_i, X_j) = X_i(psi_j) - X_j(psi_i) - psi_[X_i, X_j]

and ``d U`` is the one-form ``X_i -> X_i(U)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DegreeTooSmall, NotACocycle
from .expoly import ExpPoly
from .gq import GaussianRational
from .linalg import RREF, EchelonBasis, add_scaled, nullspace, solve
from .liealg import LieAlgebraRealization
from .vfield import VectorField, apply

__all__ = [
    "TruncatedSpace",
    "Cocycle",
    "CohomologyResult",
    "build_truncated_space",
    "default_space",
    "compute_h1",
    "coboundary",
    "cocycle_defect",
    "is_cocycle",
    "is_coboundary",
    "metric_lift_from_cocycle",
    "metric_lift_cocycles",
    "frequency_seeds",
    "max_coefficient_degree",
    "class_coordinates",
]

_ZERO = GaussianRational(0)
_ONE = GaussianRational(1)

Freq = Tuple[GaussianRational, GaussianRational]


@dataclass(frozen=True)
class TruncatedSpace:
    """Finite window of exponential monomials in ``x, y``."""

    degree_bound: int
    max_sums: int
    frequencies: Tuple[Freq, ...]
    basis: Tuple[tuple, ...]  # ExpPoly term keys with unit coefficient
    index: Dict[tuple, int] = field(compare=False, repr=False, hash=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def frequency_set(self) -> Tuple[Freq, ...]:
        return self.frequencies

    def element(self, i: int) -> ExpPoly:
        return ExpPoly({self.basis[i]: _ONE})

    def combine(self, coeffs: Dict[int, GaussianRational]) -> ExpPoly:
        return ExpPoly({self.basis[i]: c for i, c in coeffs.items() if c})

    def coords(self, f: ExpPoly) -> Optional[Dict[int, GaussianRational]]:
        out = {}
        for k, q in f.items():
            i = self.index.get(k)
            if i is None:
                return None
            out[i] = q
        return out

    def contains(self, f: ExpPoly) -> bool:
        return self.coords(f) is not None

    def with_degree(self, D: int) -> "TruncatedSpace":
        return _make_space(D, self.max_sums, self.frequencies)


def _freq_key(f: Freq):
    return (f[0].sort_key(), f[1].sort_key())


def _make_space(D: int, F: int, freqs) -> TruncatedSpace:
    freqs = tuple(sorted(set(freqs), key=lambda f: (f != (_ZERO, _ZERO), _freq_key(f))))
    basis = []
    for fr in freqs:
        for deg in range(D + 1):
            for a in range(deg, -1, -1):
                basis.append((fr[0], fr[1], a, deg - a, 0, ()))
    return TruncatedSpace(D, F, freqs, tuple(basis), {k: i for i, k in enumerate(basis)})


def max_coefficient_degree(fields: Sequence[VectorField]) -> int:
    d = 0
    for X in fields:
        for comp in X.components:
            if comp:
                d = max(d, comp.xy_degree())
    return d


# -- frequency seeds ---------------------------------------------------------------


def _to_gq(z: complex) -> GaussianRational:
    return GaussianRational(Fraction(z.real).limit_denominator(1000), Fraction(z.imag).limit_denominator(1000))


def _exact_eigenvalues(alg: LieAlgebraRealization, v: Dict[int, GaussianRational]) -> List[GaussianRational]:
    """Gaussian-rational eigenvalues of ``ad(v)``, verified exactly."""
    n = alg.dim
    rows = alg.ad_matrix(v)
    m = np.zeros((n, n), dtype=complex)
    for k, row in enumerate(rows):
        for j, val in row.items():
            m[k, j] = complex(val)
    out = []
    for z in np.linalg.eigvals(m):
        lam = _to_gq(z)
        if lam in out:
            continue
        shifted = [dict(r) for r in rows]
        for k in range(n):
            w = shifted[k].get(k, _ZERO) - lam
            if w:
                shifted[k][k] = w
            else:
                shifted[k].pop(k, None)
        ech = EchelonBasis()
        for r in shifted:
            if r:
                ech.add(r)
        if ech.rank < n:
            out.append(lam)
    return sorted(out, key=lambda q: q.sort_key())


_DX = VectorField(1, 0, 0, total=False)
_DY = VectorField(0, 1, 0, total=False)
_XDX_DY = VectorField(ExpPoly.monomial(1, x=1), 1, 0, total=False)


def frequency_seeds(alg: LieAlgebraRealization) -> List[Freq]:
    """Seed frequencies: those of the generators plus spectra of translations.

    ``ad(Dx)`` eigenvalues become x-frequencies and ``ad(Dy)`` (or
    ``ad(x*Dx + Dy)``) eigenvalues become y-frequencies, whenever these
    fields lie in the algebra.
    """
    seeds = set()
    for X in alg.basis:
        for comp in X.components:
            seeds |= comp.frequencies()
    base = alg.basis if not alg.total else None
    if base is not None:
        v = alg.coords(_DX)
        if v is not None:
            for lam in _exact_eigenvalues(alg, v):
                seeds.add((lam, _ZERO))
        for Y in (_DY, _XDX_DY):
            v = alg.coords(Y)
            if v is not None:
                for lam in _exact_eigenvalues(alg, v):
                    seeds.add((_ZERO, lam))
                break
    seeds.discard((_ZERO, _ZERO))
    return sorted(seeds, key=_freq_key)


def build_truncated_space(alg: LieAlgebraRealization, D: int, F: int = 2, signed: bool = False) -> TruncatedSpace:
    """Window of degree ``<= D`` with frequencies summed from at most ``F`` seeds.

    ``signed`` adds the negated seeds, which non-translation pairs need.
    """
    d = max_coefficient_degree(alg.basis)
    if D < d:
        raise DegreeTooSmall(f"degree bound {D} is below the generator degree {d}")
    seeds = frequency_seeds(alg)
    if signed:
        seeds = seeds + [(-a, -b) for a, b in seeds]
    freqs = {(_ZERO, _ZERO)}
    layer = {(_ZERO, _ZERO)}
    for _ in range(F):
        layer = {(a[0] + s[0], a[1] + s[1]) for a in layer for s in seeds} | layer
        freqs |= layer
    return _make_space(D, F, freqs)


def default_space(
    alg: LieAlgebraRealization, D: Optional[int] = None, F: Optional[int] = None, signed: bool = False
) -> TruncatedSpace:
    if D is None:
        D = max_coefficient_degree(alg.basis) + 3
    return build_truncated_space(alg, D, 2 if F is None else F, signed)


# -- cocycles ----------------------------------------------------------------------


@dataclass(frozen=True)
class Cocycle:
    """One-form on the algebra: ``components[i]`` is the value on ``X_i``."""

    components: Tuple[ExpPoly, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(ExpPoly.const(0) if c == 0 else c for c in self.components))

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def text(self) -> List[str]:
        return [str(c) for c in self.components]


def _as_cocycle(psi) -> Cocycle:
    if isinstance(psi, Cocycle):
        return psi
    return Cocycle(tuple(c if isinstance(c, ExpPoly) else ExpPoly.const(c) for c in psi))


def cocycle_defect(alg: LieAlgebraRealization, psi) -> Dict[Tuple[int, int], ExpPoly]:
    """Nonzero values ``d psi(X_i, X_j)`` for ``i < j``."""
    psi = _as_cocycle(psi)
    out = {}
    for i, j in combinations(range(alg.dim), 2):
        val = apply(alg.basis[i], psi[j]) - apply(alg.basis[j], psi[i])
        for k, c in alg.c(i, j).items():
            val = val - psi[k].scale(c)
        if val:
            out[(i, j)] = val
    return out


def is_cocycle(alg: LieAlgebraRealization, psi) -> bool:
    return not cocycle_defect(alg, psi)


def coboundary(alg: LieAlgebraRealization, U: ExpPoly) -> Cocycle:
    return Cocycle(tuple(apply(X, U) for X in alg.basis))


def metric_lift_from_cocycle(alg: LieAlgebraRealization, psi) -> List[VectorField]:
    """Generators ``X_i + psi_i * Du``."""
    psi = _as_cocycle(psi)
    if len(psi) != alg.dim:
        raise ValueError("one-form has the wrong number of components")
    bad = cocycle_defect(alg, psi)
    if bad:
        (i, j), val = next(iter(sorted(bad.items())))
        raise NotACocycle(f"d psi(X{i + 1}, X{j + 1}) = {val} != 0")
    return [VectorField(X.ax, X.ay, c, total=True) for X, c in zip(alg.basis, psi)]


def metric_lift_cocycles(hat: Sequence[VectorField], constants: Sequence[str]) -> Tuple[Cocycle, List[Cocycle]]:
    """Split the u-components of a metric lift into ``psi0 + sum K * psi_K``."""
    base = []
    per = {K: [] for K in constants}
    for X in hat:
        parts = X.au.collect(constants)
        base.append(parts.get((), ExpPoly()))
        for K in constants:
            per[K].append(parts.get(((K, 1),), ExpPoly()))
        for mono in parts:
            if mono and (len(mono) != 1 or mono[0][1] != 1):
                raise ValueError(f"u-component {X.au} is not affine in the constants")
    return Cocycle(tuple(base)), [Cocycle(tuple(per[K])) for K in constants]


# -- linear systems ---------------------------------------------------------------


def _apply_table(alg: LieAlgebraRealization, space: TruncatedSpace) -> List[List[ExpPoly]]:
    return [[apply(X, space.element(m)) for m in range(space.dim)] for X in alg.basis]


def _cocycle_rows(alg, space, table) -> List[dict]:
    N = space.dim
    rows: Dict[tuple, dict] = {}
    for i, j in combinations(range(alg.dim), 2):
        cij = alg.c(i, j)
        for m in range(N):
            # X_i(psi_j) contributes to column j*N + m
            for key, q in table[i][m].items():
                add_scaled(rows.setdefault((i, j, key), {}), {j * N + m: q}, _ONE)
            for key, q in table[j][m].items():
                add_scaled(rows.setdefault((i, j, key), {}), {i * N + m: q}, -_ONE)
            key = space.basis[m]
            for k, c in cij.items():
                add_scaled(rows.setdefault((i, j, key), {}), {k * N + m: c}, -_ONE)
    return [r for r in rows.values() if r]


def _coboundary_space(alg, space: TruncatedSpace) -> Tuple[TruncatedSpace, List[dict], List[dict]]:
    """``(Wspace, W basis in Wspace coords, images d U in cocycle coords)``."""
    big = space.with_degree(space.degree_bound + 1)
    N, M = space.dim, big.dim
    table = _apply_table(alg, big)
    cons: Dict[tuple, dict] = {}
    for i in range(alg.dim):
        for m in range(M):
            for key, q in table[i][m].items():
                if key not in space.index:
                    cons.setdefault((i, key), {})[m] = q
    W = nullspace(list(cons.values()), M)
    images = []
    for w in W:
        acc: dict = {}
        for i in range(alg.dim):
            for m, c in w.items():
                for key, q in table[i][m].items():
                    add_scaled(acc, {(i, key): q}, c)
        images.append({i * N + space.index[key]: q for (i, key), q in acc.items()})
    return big, W, images


@dataclass
class CohomologyResult:
    dim_Z1: int
    dim_B1: int
    dim_H1: int
    representatives: List[Cocycle]
    truncation: TruncatedSpace

    def report(self) -> dict:
        return {
            "D": self.truncation.degree_bound,
            "F": self.truncation.max_sums,
            "frequencies": [_fmt_freq(f) for f in self.truncation.frequencies],
            "dim_Z1": self.dim_Z1,
            "dim_B1": self.dim_B1,
            "dim_H1": self.dim_H1,
            "representatives": [c.text() for c in self.representatives],
        }


def _fmt_freq(f: Freq) -> str:
    return f"({f[0]}, {f[1]})"


def _vec_to_cocycle(vec: dict, space: TruncatedSpace, r: int) -> Cocycle:
    N = space.dim
    comps = [dict() for _ in range(r)]
    for col, q in vec.items():
        comps[col // N][col % N] = q
    return Cocycle(tuple(space.combine(c) for c in comps))


def compute_h1(alg: LieAlgebraRealization, space: Optional[TruncatedSpace] = None) -> CohomologyResult:
    """Cocycles, coboundaries and canonical representatives of H^1 on the window."""
    if space is None:
        space = default_space(alg)
    N = space.dim
    ncols = alg.dim * N
    table = _apply_table(alg, space)
    Z = nullspace(_cocycle_rows(alg, space, table), ncols)
    _, _, images = _coboundary_space(alg, space)
    Bred = RREF()
    for img in images:
        if img:
            Bred.insert(img)
    quot = RREF()
    for z in Z:
        rem = Bred.reduce(z)
        if rem:
            quot.insert(rem)
    reps = [_vec_to_cocycle(row, space, alg.dim) for _, row in sorted(quot.pivots.items())]
    return CohomologyResult(len(Z), Bred.rank, quot.rank, reps, space)


def is_coboundary(alg: LieAlgebraRealization, psi, W: Optional[TruncatedSpace] = None) -> Optional[ExpPoly]:
    """``U`` in the window ``W`` with ``d U = psi``, or ``None``.

    Components may be affine-linear in constant symbols; each symbol
    monomial is solved separately.
    """
    psi = _as_cocycle(psi)
    if W is None:
        W = default_space(alg).with_degree(default_space(alg).degree_bound + 1)
    names = set()
    for c in psi.components:
        names |= c.params()
    pieces: Dict[tuple, List[ExpPoly]] = {}
    for i, c in enumerate(psi.components):
        for mono, part in c.collect(names).items():
            pieces.setdefault(mono, [ExpPoly() for _ in psi.components])[i] = part
    table = _apply_table(alg, W)
    total = ExpPoly()
    for mono, comps in sorted(pieces.items()):
        rows: Dict[tuple, dict] = {}
        rhs: Dict[tuple, GaussianRational] = {}
        for i in range(alg.dim):
            for m in range(W.dim):
                for key, q in table[i][m].items():
                    rows.setdefault((i, key), {})[m] = q
            for key, q in comps[i].items():
                rows.setdefault((i, key), {})
                rhs[(i, key)] = q
        keys = list(rows)
        sol = solve([rows[k] for k in keys], [rhs.get(k, _ZERO) for k in keys], W.dim)
        if sol is None:
            return None
        U = W.combine(sol)
        if mono:
            U = U * ExpPoly.monomial(1, params=mono)
        total = total + U
    return total


def class_coordinates(
    alg: LieAlgebraRealization, psi, reps: Sequence[Cocycle], W: Optional[TruncatedSpace] = None
) -> Optional[Tuple[List[ExpPoly], ExpPoly]]:
    """Write ``psi = sum t_k reps[k] + d U``; returns ``(t, U)`` or ``None``.

    ``psi`` may be affine-linear in constant symbols, in which case ``t`` and
    ``U`` carry the same symbols.
    """
    psi = _as_cocycle(psi)
    if W is None:
        sp = default_space(alg)
        W = sp.with_degree(sp.degree_bound + 1)
    names = set()
    for c in psi.components:
        names |= c.params()
    pieces: Dict[tuple, List[ExpPoly]] = {}
    for i, c in enumerate(psi.components):
        for mono, part in c.collect(names).items():
            pieces.setdefault(mono, [ExpPoly() for _ in psi.components])[i] = part
    table = _apply_table(alg, W)
    nrep = len(reps)
    ts = [ExpPoly() for _ in range(nrep)]
    total = ExpPoly()
    for mono, comps in sorted(pieces.items()):
        rows: Dict[tuple, dict] = {}
        rhs: Dict[tuple, GaussianRational] = {}
        for i in range(alg.dim):
            for m in range(W.dim):
                for key, q in table[i][m].items():
                    rows.setdefault((i, key), {})[m] = q
            for k, rep in enumerate(reps):
                for key, q in rep[i].items():
                    rows.setdefault((i, key), {})[W.dim + k] = q
            for key, q in comps[i].items():
                rows.setdefault((i, key), {})
                rhs[(i, key)] = q
        keys = list(rows)
        sol = solve([rows[k] for k in keys], [rhs.get(k, _ZERO) for k in keys], W.dim + nrep)
        if sol is None:
            return None
        factor = ExpPoly.monomial(1, params=mono)
        U = W.combine({m: c for m, c in sol.items() if m < W.dim})
        total = total + U * factor
        for k in range(nrep):
            c = sol.get(W.dim + k)
            if c:
                ts[k] = ts[k] + factor.scale(c)
    return ts, total
