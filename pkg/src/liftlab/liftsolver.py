"""Re-derive the lifts of a transitive algebra on C^2.

Strategy.  Normalize the lift on a transitive pair ``(X1, X2)`` so that
their ``Du`` components vanish.  The remaining components are then forced
by linear equations along the pair, so a lift is fixed by its action on the
fiber over the base point.  For the stabilizer basis ``S_1..S_n`` write

    f_{S_m} = sum_j rho_j(u) * Phi^(j)_m(x, y),

where ``Phi^(j)`` is the solution of the pair equations with value ``e_j``
at the base point and ``rho_j`` is a polynomial of degree at most 1
(affine) or 2 (projective) in ``u``.  The bracket relations reduce to
``rho`` being a homomorphism from the stabilizer into vector fields on the
line, a small polynomial system in the coefficients of ``rho``.  Constant
fiber maps act on ``rho``; one gauge slice per orbit is imposed before
solving.

Metric lifts are read off from first cohomology instead.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

from .cohomology import (
    TruncatedSpace,
    class_coordinates,
    compute_h1,
    default_space,
    metric_lift_cocycles,
    metric_lift_from_cocycle,
)
from .errors import (
    LiftLabError,
    NotALift,
    NotTransitive,
    OutsideRing,
    TruncationExhausted,
)
from .expoly import ExpPoly
from .gq import GaussianRational, as_gq
from .groebner import Branch, solve_constant_system
from .liealg import (
    LieAlgebraRealization,
    LiftTypeTag,
    classify_lift_type,
    is_abelian,
    is_solvable,
    normalized_pair_coords,
    stabilizer_coords,
    structure_constants,
)
from .linalg import EchelonBasis, add_scaled, nullspace, solve
from .vfield import FiberMap, VectorField, apply, project, pushforward

__all__ = [
    "LiftBranch",
    "LiftSolveResult",
    "EquivalenceWitness",
    "normalize_lift",
    "normalize_lift_maps",
    "solve_metric_lifts",
    "solve_ansatz_lifts",
    "solve_lifts",
    "metric_witness",
    "ansatz_witness",
    "align_to_base",
    "CAPS",
]

CAPS = ("metric", "affine", "projective")
_CAP_DIM = {"metric": 1, "affine": 2, "projective": 3}

_ZERO = GaussianRational(0)
_ONE = GaussianRational(1)
_U = ExpPoly.monomial(1, u=1)

Vec = Dict[int, GaussianRational]


# ---------------------------------------------------------------------------
# results


@dataclass
class LiftBranch:
    """One solution component: generators in the base's basis order."""

    assignment: Dict[str, ExpPoly]
    free: List[str]
    generators: List[VectorField]
    tag: Optional[LiftTypeTag]
    transitive: bool
    slice: Optional[tuple] = None
    rho: List[ExpPoly] = field(default_factory=list)

    def report(self) -> dict:
        return {
            "assignment": {k: str(v) for k, v in sorted(self.assignment.items())},
            "free": list(self.free),
            "generators": [str(X) for X in self.generators],
            "type": self.tag.kind if self.tag else None,
            "transitive": self.transitive,
        }


@dataclass
class LiftSolveResult:
    cap: str
    base: LieAlgebraRealization
    branches: List[LiftBranch]
    truncation: TruncatedSpace
    notes: List[str] = field(default_factory=list)
    groebner_traces: List[list] = field(default_factory=list)
    timings: Dict[str, float] = field(default_factory=dict)
    data: dict = field(default_factory=dict, repr=False)

    def report(self) -> dict:
        return {
            "cap": self.cap,
            "branches": [b.report() for b in self.branches],
            "notes": list(self.notes),
            "truncation": {"D": self.truncation.degree_bound, "F": self.truncation.max_sums},
        }


@dataclass
class EquivalenceWitness:
    """Fiber maps taking a (specialized) catalog lift to a solver branch."""

    branch: int
    maps: List[FiberMap]
    constants: Dict[str, GaussianRational]
    symbols: Dict[str, ExpPoly]
    verified: bool

    def report(self) -> dict:
        return {
            "branch": self.branch,
            "maps": [m.describe() for m in self.maps],
            "constants": {k: str(v) for k, v in sorted(self.constants.items())},
            "symbols": {k: str(v) for k, v in sorted(self.symbols.items())},
            "verified": self.verified,
        }


# ---------------------------------------------------------------------------
# normalization along the pair

_DX = VectorField(1, 0, 0, total=False)
_DY = VectorField(0, 1, 0, total=False)
_XDX_DY = VectorField(ExpPoly.monomial(1, x=1), 1, 0, total=False)


def _linear_form(I: ExpPoly) -> bool:
    """``I = c1*x + c2*y`` (no constant needed, no other terms)."""
    for (fx, fy, a, b, c, ps), _q in I.items():
        if fx or fy or c or ps or a + b != 1:
            return False
    return True


def _affine_parts(f: ExpPoly) -> Tuple[ExpPoly, ExpPoly]:
    co = f.u_coefficients()
    if any(k > 1 for k in co):
        raise NotALift(f"{f} is not affine in u")
    return co.get(0, ExpPoly()), co.get(1, ExpPoly())


def _straighten(X: VectorField, f: ExpPoly, axis: str, cap: str) -> FiberMap:
    anti = (lambda p: p.antideriv_x()) if axis == "x" else (lambda p: p.antideriv_y())
    if cap == "metric":
        if f.has_u():
            raise NotALift(f"{f} depends on u; not a metric lift")
        return FiberMap.translation(anti(f))
    alpha, beta = _affine_parts(f)
    if beta:
        I = anti(beta)
        if not _linear_form(I):
            raise OutsideRing(f"integrating factor exp({I}) is not an exponential polynomial")
        fx = I.diff("x").constant_value() if I.diff("x").is_constant() else _ZERO
        fy = I.diff("y").constant_value() if I.diff("y").is_constant() else _ZERO
        A = ExpPoly.monomial(1, freq=(fx, fy))
        A_inv = ExpPoly.monomial(1, freq=(-fx, -fy))
    else:
        A = A_inv = ExpPoly.const(1)
    B = A * anti(alpha * A_inv)
    return FiberMap.affine(A, B, A_inv)


def normalize_lift_maps(
    hat: Sequence[VectorField], pair: Tuple[int, int] = (0, 1), cap: str = "metric"
) -> Tuple[List[VectorField], List[FiberMap]]:
    """Make the ``Du`` components of the pair vanish; also return the maps used.

    The pair must project to ``Dx`` and ``Dy`` (or ``x*Dx + Dy``).  Metric
    lifts use translations, affine lifts affine maps whose integrating
    factor is ``e^(c1*x + c2*y)``.
    """
    if cap not in ("metric", "affine"):
        raise ValueError("normalization is implemented for metric and affine lifts")
    hat = [X.as_total() for X in hat]
    i1, i2 = pair
    if project(hat[i1]) != _DX or project(hat[i2]) not in (_DY, _XDX_DY):
        raise NotALift("pair must project to Dx and Dy (or x*Dx + Dy)")
    maps = []
    if hat[i1].au:
        m = _straighten(hat[i1], hat[i1].au, "x", cap)
        hat = [pushforward(X, m) for X in hat]
        maps.append(m)
    f2 = hat[i2].au
    if f2:
        if f2.diff("x"):
            raise NotALift("pair components do not satisfy the pair bracket relation")
        m = _straighten(hat[i2], f2, "y", cap)
        hat = [pushforward(X, m) for X in hat]
        maps.append(m)
    if hat[i1].au or hat[i2].au:
        raise NotALift("normalization did not clear the pair components")
    return hat, maps


def normalize_lift(hat: Sequence[VectorField], pair: Tuple[int, int] = (0, 1), cap: str = "metric") -> List[VectorField]:
    return normalize_lift_maps(hat, pair, cap)[0]


# ---------------------------------------------------------------------------
# metric lifts via cohomology


def _symbols(prefix: str, n: int) -> List[str]:
    if n == 1:
        return [prefix]
    return [f"{prefix}_{k}" for k in range(1, n + 1)]


def _tag_or_none(hat_fields, base, p):
    try:
        hat = structure_constants(hat_fields)
        return classify_lift_type(hat, base, p), True
    except NotTransitive:
        return None, False


def solve_metric_lifts(base: LieAlgebraRealization, space: Optional[TruncatedSpace] = None) -> LiftSolveResult:
    """The family ``X_i + (sum K_k psi^(k)_i) Du`` over H^1 representatives ``psi^(k)``."""
    t0 = time.perf_counter()
    space = space or default_space(base)
    res = compute_h1(base, space)
    p = base.sample_point[:2]
    out = LiftSolveResult("metric", base, [], space, data={"h1": res})
    h = res.dim_H1
    if h == 0:
        out.notes.append("H^1 vanishes on the window: only the trivial, intransitive lift")
        out.timings["total"] = time.perf_counter() - t0
        return out
    names = _symbols("K", h)
    syms = [ExpPoly.monomial(1, params=((n, 1),)) for n in names]
    psi = [ExpPoly() for _ in range(base.dim)]
    for s, rep in zip(syms, res.representatives):
        psi = [a + s * b for a, b in zip(psi, rep.components)]
    gens = metric_lift_from_cocycle(base, psi)
    tag, trans = _tag_or_none(gens, base, p)
    out.branches.append(LiftBranch({}, list(names), gens, tag, trans))
    for k, rep in enumerate(res.representatives):
        gens = metric_lift_from_cocycle(base, rep)
        tag, trans = _tag_or_none(gens, base, p)
        assignment = {n: ExpPoly.const(1 if j == k else 0) for j, n in enumerate(names)}
        out.branches.append(LiftBranch(assignment, [], gens, tag, trans))
    out.timings["total"] = time.perf_counter() - t0
    return out


def metric_witness(
    base: LieAlgebraRealization, catalog_gens: Sequence[VectorField], constants: Sequence[str], result: LiftSolveResult
) -> EquivalenceWitness:
    """Translation and constant substitution taking a catalog metric family to the solver family.

    The substitution ``K -> t(C)`` must be injective; it is bijective
    exactly when the catalog family exhausts H^1.
    """
    reps = result.data["h1"].representatives
    catalog_gens = align_to_base(base, catalog_gens)
    psi0, psis = metric_lift_cocycles(catalog_gens, constants)
    names = result.branches[0].free if result.branches else []
    symbols: Dict[str, ExpPoly] = {}
    U_total = ExpPoly()
    ts_all = []
    for K, psi in [(None, psi0)] + list(zip(constants, psis)):
        found = class_coordinates(base, psi, reps)
        if found is None:
            return EquivalenceWitness(0, [], {}, {}, False)
        ts, U = found
        if K is None:
            if any(ts):
                return EquivalenceWitness(0, [], {}, {}, False)
            U_total = U_total + U
            continue
        Ksym = ExpPoly.monomial(1, params=((K, 1),))
        ts_all.append([t.constant_value() if t.is_constant() else None for t in ts])
        U_total = U_total + U * Ksym
        for n, t in zip(names, ts):
            symbols[n] = symbols.get(n, ExpPoly()) + Ksym * t
    # bijectivity of the constant substitution
    ech = EchelonBasis()
    for row in ts_all:
        if None in row:
            return EquivalenceWitness(0, [], {}, symbols, False)
        ech.add({k: v for k, v in enumerate(row) if v})
    if ech.rank != len(constants):
        return EquivalenceWitness(0, [], {}, symbols, False)
    for n in names:
        symbols.setdefault(n, ExpPoly())
    m = FiberMap.translation(U_total)
    moved = [pushforward(X, m) for X in catalog_gens]
    target = [X.subs(symbols) for X in result.branches[0].generators]
    return EquivalenceWitness(0, [m], {}, symbols, moved == target)


# ---------------------------------------------------------------------------
# affine and projective lifts


class _Adapted:
    """Pair + stabilizer basis, its c table and the propagation basis Phi."""

    def __init__(self, base: LieAlgebraRealization, space: TruncatedSpace, p):
        self.base = base
        self.p = tuple(p)[:2]
        P1, P2, literal = normalized_pair_coords(base, self.p)
        self.literal = literal
        self.st = stabilizer_coords(base, self.p)
        self.n = len(self.st)
        self.vecs: List[Vec] = [P1, P2] + self.st
        ech = EchelonBasis()
        for v in self.vecs:
            if ech.add(v) is not None:
                raise NotTransitive("pair and stabilizer do not span the algebra")
        self.ech = ech
        self.fields = [base.combine(v) for v in self.vecs]
        r = len(self.vecs)
        self.c = {}
        for a, b in combinations(range(r), 2):
            co = ech.coords(base.bracket_vec(self.vecs[a], self.vecs[b]))
            self.c[(a, b)] = co
            self.c[(b, a)] = {k: -v for k, v in co.items()}
        # original basis element i in adapted coordinates
        self.M = [ech.coords({i: _ONE}) for i in range(base.dim)]
        self.phi = self._propagation(space)

    def _propagation(self, space: TruncatedSpace) -> List[List[ExpPoly]]:
        n, N = self.n, space.dim
        rows: Dict[tuple, dict] = {}
        for P in (0, 1):
            Y = self.fields[P]
            table = [apply(Y, space.element(t)) for t in range(N)]
            for m in range(n):
                for t in range(N):
                    for key, q in table[t].items():
                        add_scaled(rows.setdefault((P, m, key), {}), {m * N + t: q}, _ONE)
                for k, c in self.c.get((P, 2 + m), {}).items():
                    if k < 2:
                        continue
                    for t in range(N):
                        add_scaled(rows.setdefault((P, m, space.basis[t]), {}), {(k - 2) * N + t: c}, -_ONE)
        sol = nullspace([r for r in rows.values() if r], n * N)
        if len(sol) != n:
            raise TruncationExhausted(
                f"pair equations have {len(sol)} solutions on the window, expected {n}; enlarge D or F"
            )
        pt = {"x": self.p[0], "y": self.p[1]}
        funcs = []
        evals = []
        for v in sol:
            comps = [space.combine({t - m * N: q for t, q in v.items() if m * N <= t < (m + 1) * N}) for m in range(n)]
            funcs.append(comps)
            evals.append([c.eval_at(pt) for c in comps])
        # Phi^(j) = sum_s X[j][s] * funcs[s] with sum_s X[j][s] evals[s][m] = delta_jm
        phi = []
        for j in range(n):
            rows_ = [{s: evals[s][m] for s in range(n) if evals[s][m]} for m in range(n)]
            rhs = [_ONE if m == j else _ZERO for m in range(n)]
            x = solve(rows_, rhs, n)
            if x is None:
                raise TruncationExhausted("evaluation at the base point is not bijective on the window")
            comps = [ExpPoly() for _ in range(n)]
            for s, coef in x.items():
                comps = [a + b.scale(coef) for a, b in zip(comps, funcs[s])]
            phi.append(comps)
        return phi

    def stab_c(self, a: int, b: int) -> Vec:
        return {k - 2: v for k, v in self.c[(2 + a, 2 + b)].items() if k >= 2}

    def lift(self, rho: Sequence[ExpPoly]) -> List[VectorField]:
        """Generators in the original basis order for fiber data ``rho``."""
        f = [ExpPoly() for _ in range(self.n)]
        for j, r in enumerate(rho):
            if not r:
                continue
            for m in range(self.n):
                if self.phi[j][m]:
                    f[m] = f[m] + r * self.phi[j][m]
        gens = []
        for i, X in enumerate(self.base.basis):
            au = ExpPoly()
            for a, coef in self.M[i].items():
                if a >= 2 and f[a - 2]:
                    au = au + f[a - 2].scale(coef)
            gens.append(VectorField(X.ax, X.ay, au, total=True))
        return gens

    def fiber_data(self, gens: Sequence[VectorField]) -> List[ExpPoly]:
        """``rho_j(u)``: Du component of the lifted ``S_j`` over the base point."""
        pt = {"x": self.p[0], "y": self.p[1]}
        out = []
        for v in self.st:
            f = ExpPoly()
            for i, c in v.items():
                f = f + gens[i].au.scale(c)
            out.append(f.subs_values(pt))
        return out


def _rho_symbols(n: int, cap: str):
    names = []
    rho = []
    for j in range(1, n + 1):
        P, Q = f"P_{j}", f"Q_{j}"
        r = ExpPoly.monomial(1, params=((P, 1),)) + ExpPoly.monomial(1, u=1, params=((Q, 1),))
        names += [P, Q]
        if cap == "projective":
            R = f"R_{j}"
            r = r + ExpPoly.monomial(1, u=2, params=((R, 1),))
            names.append(R)
        rho.append(r)
    return names, rho


def _hom_equations(ad: _Adapted, rho: List[ExpPoly]) -> List[ExpPoly]:
    eqs = []
    for a, b in combinations(range(ad.n), 2):
        lhs = rho[a] * rho[b].diff("u") - rho[b] * rho[a].diff("u")
        for k, c in ad.stab_c(a, b).items():
            lhs = lhs - rho[k].scale(c)
        eqs.extend(v for v in lhs.u_coefficients().values() if v)
    return eqs


def _combo(rho: List[ExpPoly], vec: Vec) -> ExpPoly:
    out = ExpPoly()
    for j, c in vec.items():
        out = out + rho[j].scale(c)
    return out


def _u_coeff_eqs(p: ExpPoly, target: ExpPoly) -> List[ExpPoly]:
    return [v for v in (p - target).u_coefficients().values() if v]


def _sym(name: str) -> ExpPoly:
    return ExpPoly.monomial(1, params=((name, 1),))


def _affine_slices(n: int):
    for m0 in range(n):
        for m1 in range(n):
            if m1 != m0:
                yield (m0, m1)


def _affine_gauge(m0: int, m1: int) -> List[ExpPoly]:
    eqs = [_sym(f"Q_{j + 1}") for j in range(m0)]
    eqs.append(_sym(f"P_{m0 + 1}"))
    eqs += [_sym(f"P_{j + 1}") for j in range(m1) if j != m0]
    eqs.append(_sym(f"P_{m1 + 1}") - ExpPoly.const(1))
    return eqs


# -- sl2 inside the stabilizer ----------------------------------------------------------


def _ad_st(ad: _Adapted, v: Vec) -> List[Vec]:
    """Matrix rows of ad(v) on stabilizer coordinates."""
    rows: List[Vec] = [dict() for _ in range(ad.n)]
    for j in range(ad.n):
        col: Vec = {}
        for i, a in v.items():
            if i != j:
                add_scaled(col, ad.stab_c(i, j), a)
        for k, val in col.items():
            rows[k][j] = val
    return rows


def _bracket_st(ad: _Adapted, v: Vec, w: Vec) -> Vec:
    out: Vec = {}
    for i, a in v.items():
        for j, b in w.items():
            if i != j:
                add_scaled(out, ad.stab_c(i, j), a * b)
    return out


def _matmul_vec(rows: List[Vec], v: Vec) -> Vec:
    out = {}
    for k, row in enumerate(rows):
        s = _ZERO
        for j, a in row.items():
            b = v.get(j)
            if b:
                s = s + a * b
        if s:
            out[k] = s
    return out


def _killing(ad: _Adapted) -> List[List[GaussianRational]]:
    n = ad.n
    mats = [_ad_st(ad, {i: _ONE}) for i in range(n)]
    K = [[_ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            tr = _ZERO
            for k in range(n):
                # (ad_i ad_j)_{kk} = sum_l ad_i[k][l] ad_j[l][k]
                for l, a in mats[i][k].items():
                    b = mats[j][l].get(k)
                    if b:
                        tr = tr + a * b
            K[i][j] = K[j][i] = tr
    return K


def _levi_triple(ad: _Adapted):
    """``(E, H, F, radical basis)`` in stabilizer coordinates, or ``None`` if solvable.

    Raises when the semisimple quotient is not three dimensional.
    """
    n = ad.n
    K = _killing(ad)
    derived = [_bracket_st(ad, {a: _ONE}, {b: _ONE}) for a, b in combinations(range(n), 2)]
    derived = [d for d in derived if d]
    rows = []
    for d in derived:
        row = {}
        for i in range(n):
            s = _ZERO
            for j, c in d.items():
                s = s + K[i][j] * c
            if s:
                row[i] = s
        rows.append(row)
    rad = nullspace(rows, n)
    if len(rad) == n:
        return None
    if n - len(rad) != 3:
        raise LiftLabError(f"semisimple quotient of the stabilizer has dimension {n - len(rad)}, expected 3")
    ech = EchelonBasis()
    for v in rad:
        ech.add(v)
    comp = []
    for i in range(n):
        if ech.add({i: _ONE}) is None:
            comp.append({i: _ONE})
    full = EchelonBasis()
    for v in rad + comp:
        full.add(v)
    nr = len(rad)

    def q_coords(v: Vec) -> Vec:
        co = full.coords(v)
        return {k - nr: c for k, c in co.items() if k >= nr}

    def q_lift(w: Vec) -> Vec:
        out: Vec = {}
        for k, c in w.items():
            add_scaled(out, comp[k], c)
        return out

    def q_bracket(a: Vec, b: Vec) -> Vec:
        return q_coords(_bracket_st(ad, q_lift(a), q_lift(b)))

    def q_ad(a: Vec) -> List[Vec]:
        rows_ = [dict() for _ in range(3)]
        for j in range(3):
            for k, val in q_bracket(a, {j: _ONE}).items():
                rows_[k][j] = val
        return rows_

    for coeffs in product(range(-2, 3), repeat=3):
        if not any(coeffs) or next(c for c in coeffs if c) != 1:
            continue
        e = {k: GaussianRational(c) for k, c in enumerate(coeffs) if c}
        A = q_ad(e)
        if not any(A):
            continue
        v1 = [_matmul_vec(A, {j: _ONE}) for j in range(3)]
        v3 = [_matmul_vec(A, _matmul_vec(A, w)) for w in v1]
        if any(v3):
            continue
        # [e, h] = -2 e
        h = solve(A, [-2 * e.get(k, _ZERO) for k in range(3)], 3)
        if h is None:
            continue
        # [e, f] = h and [h, f] = -2 f
        Ah = q_ad(h)
        rows_f = [dict(r) for r in A]
        rhs_f = [h.get(k, _ZERO) for k in range(3)]
        for k in range(3):
            r = dict(Ah[k])
            r[k] = r.get(k, _ZERO) + 2
            rows_f.append({a: b for a, b in r.items() if b})
            rhs_f.append(_ZERO)
        f = solve(rows_f, rhs_f, 3)
        if f is None:
            continue
        return q_lift(e), q_lift(h), q_lift(f), rad
    raise LiftLabError("no sl2 triple found on the search grid")


def _projective_gauge(ad: _Adapted, rho: List[ExpPoly]) -> Optional[List[ExpPoly]]:
    triple = _levi_triple(ad)
    if triple is None:
        return None
    E, H, F, rad = triple
    eqs = []
    eqs += _u_coeff_eqs(_combo(rho, E), ExpPoly.const(1))
    eqs += _u_coeff_eqs(_combo(rho, H), _U.scale(-2))
    eqs += _u_coeff_eqs(_combo(rho, F), -(_U * _U))
    for v in rad:
        eqs += _u_coeff_eqs(_combo(rho, v), ExpPoly())
    ad.triple = triple
    return eqs


def _finish_branch(ad: _Adapted, br: Branch, rho, cap: str, slc) -> Optional[LiftBranch]:
    rho_b = [br.substitute(r) for r in rho]
    gens = ad.lift(rho_b)
    hat = structure_constants(gens)
    for (i, j), co in ad.base.structure.items():
        if hat.structure[(i, j)] != co:
            raise AssertionError("lift does not reproduce the base structure constants")
    try:
        tag = classify_lift_type(hat, ad.base, ad.p)
    except NotTransitive:
        return None
    if tag.dimension != _CAP_DIM[cap]:
        return None
    free = sorted(set().union(*(X.params() for X in gens))) if gens else []
    return LiftBranch(br.assignment, free, gens, tag, True, slc, rho_b)


def solve_ansatz_lifts(
    base: LieAlgebraRealization, cap: str, space: Optional[TruncatedSpace] = None
) -> LiftSolveResult:
    """Affine or projective lifts of ``base``, one branch per gauge slice component."""
    if cap not in ("affine", "projective"):
        raise ValueError("cap must be 'affine' or 'projective'")
    t0 = time.perf_counter()
    explicit = space is not None
    space = space or default_space(base)
    p = base.sample_point[:2]
    out = LiftSolveResult(cap, base, [], space)
    st = stabilizer_coords(base, p)
    if cap == "projective" and is_solvable(base, st):
        out.notes.append("pruned: the stabilizer is solvable, so there are no projective lifts")
        return out
    if cap == "affine" and is_abelian(base, st):
        out.notes.append("pruned: the stabilizer is abelian, so there are no affine or projective lifts")
        return out
    try:
        ad = _Adapted(base, space, p)
    except TruncationExhausted:
        if explicit:
            raise
        # a pair other than Dx, Dy can need decaying exponentials
        space = default_space(base, signed=True)
        out.truncation = space
        ad = _Adapted(base, space, p)
    out.data["adapted"] = ad
    out.timings["linear"] = time.perf_counter() - t0
    names, rho = _rho_symbols(ad.n, cap)
    hom = _hom_equations(ad, rho)
    if cap == "affine":
        slices = [(s, _affine_gauge(*s)) for s in _affine_slices(ad.n)]
    else:
        gauge = _projective_gauge(ad, rho)
        slices = [] if gauge is None else [(None, gauge)]
        if gauge is None:
            out.notes.append("pruned: the stabilizer is solvable, so there are no projective lifts")
    t1 = time.perf_counter()
    for slc, gauge in slices:
        trace: list = []
        branches = solve_constant_system(hom + gauge, names, trace=trace)
        out.groebner_traces.append(trace[:1])
        for br in branches:
            if slc is not None:
                q = br.substitute(_sym(f"Q_{slc[0] + 1}"))
                if not q:
                    continue
            lb = _finish_branch(ad, br, rho, cap, slc)
            if lb is not None:
                out.branches.append(lb)
    out.timings["polynomial"] = time.perf_counter() - t1
    out.timings["total"] = time.perf_counter() - t0
    return out


def solve_lifts(base: LieAlgebraRealization, cap: str, space: Optional[TruncatedSpace] = None) -> LiftSolveResult:
    if cap == "metric":
        return solve_metric_lifts(base, space)
    return solve_ansatz_lifts(base, cap, space)


# ---------------------------------------------------------------------------
# equivalence with a given lift


def align_to_base(base: LieAlgebraRealization, gens: Sequence[VectorField]) -> List[VectorField]:
    """Recombine lifted generators so that they project onto ``base.basis`` in order."""
    gens = [X.as_total() for X in gens]
    ech = EchelonBasis()
    for X in gens:
        co = base.coords(project(X))
        if co is None:
            raise NotALift(f"projection of {X} is not in the base algebra")
        ech.add(co)
    out = []
    for i in range(base.dim):
        w = ech.coords({i: _ONE})
        if w is None:
            raise NotALift("projection does not span the base algebra")
        Y = VectorField(total=True)
        for k, c in sorted(w.items()):
            Y = Y + gens[k] * c
        out.append(Y)
    return out


def _specialize(gens, constants) -> Tuple[List[VectorField], Dict[str, GaussianRational]]:
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
    values = {K: GaussianRational(primes[k % len(primes)] + 12 * (k // len(primes))) for k, K in enumerate(constants)}
    if not values:
        return list(gens), {}
    return [X.subs(values) for X in gens], values


def _poly_div_linear(num: ExpPoly, Q: ExpPoly) -> Optional[ExpPoly]:
    """Exact division of a polynomial in ``u`` by a polynomial of degree <= 1 in ``u``."""
    qc = Q.u_coefficients()
    nc = num.u_coefficients()
    q1 = qc.get(1, ExpPoly())
    q0 = qc.get(0, ExpPoly())
    coeffs = {k: v.constant_value() for k, v in nc.items()}
    if not q1:
        d = q0.constant_value()
        return num.scale(d.inverse())
    c1, c0 = q1.constant_value(), q0.constant_value()
    deg = max(coeffs, default=0)
    quot = {}
    rem = dict(coeffs)
    for k in range(deg, 0, -1):
        ck = rem.get(k, _ZERO)
        if not ck:
            continue
        t = ck / c1
        quot[k - 1] = t
        rem[k] = _ZERO
        rem[k - 1] = rem.get(k - 1, _ZERO) - t * c0
    if any(v for v in rem.values()):
        return None
    out = ExpPoly()
    for k, v in quot.items():
        out = out + ExpPoly.monomial(v, u=k)
    return out


def ansatz_witness(
    result: LiftSolveResult,
    catalog_gens: Sequence[VectorField],
    constants: Sequence[str] = (),
    values: Optional[Dict[str, object]] = None,
) -> Optional[EquivalenceWitness]:
    """Constant fiber map taking the catalog lift to one of ``result``'s branches.

    Free constants of the catalog lift are first specialized, to ``values``
    when given and otherwise to fixed distinct nonzero numbers.  The map is
    verified by exact pushforward.
    """
    ad: _Adapted = result.data.get("adapted")
    if ad is None:
        return None
    gens = align_to_base(result.base, catalog_gens)
    if values is None:
        gens, values = _specialize(gens, constants)
    else:
        values = {k: as_gq(v) for k, v in values.items()}
        gens = [X.subs(values) for X in gens]
    maps: List[FiberMap] = []
    m = _pair_gauge(ad, gens, result.truncation)
    if m is not None:
        gens = [pushforward(X, m) for X in gens]
        maps.append(m)
    rho_c = ad.fiber_data(gens)
    for idx, br in enumerate(result.branches):
        if result.cap == "affine":
            m = _affine_match(ad, rho_c, br)
        else:
            m = _projective_match(ad, rho_c)
        if m is None:
            continue
        fmap, symvals = m
        moved = [pushforward(X, fmap) for X in gens]
        target = [X.subs(symvals) if symvals else X for X in br.generators]
        if moved == target:
            return EquivalenceWitness(idx, maps + [fmap], values, symvals, True)
    return None


def _solve_along_pair(pair: Sequence[VectorField], targets: Sequence[ExpPoly], space: TruncatedSpace) -> Optional[ExpPoly]:
    """``g`` in the window with ``pair[k](g) = targets[k]``, or ``None``."""
    rows: Dict[tuple, dict] = {}
    rhs: Dict[tuple, GaussianRational] = {}
    base = [VectorField(P.ax, P.ay, 0, total=False) for P in pair]
    for k, P in enumerate(base):
        for t in range(space.dim):
            for key, q in apply(P, space.element(t)).items():
                rows.setdefault((k, key), {})[t] = q
        for key, q in targets[k].items():
            rows.setdefault((k, key), {})
            rhs[(k, key)] = q
    keys = list(rows)
    sol = solve([rows[k] for k in keys], [rhs.get(k, _ZERO) for k in keys], space.dim)
    return None if sol is None else space.combine(sol)


def _pair_gauge(ad: "_Adapted", gens: Sequence[VectorField], space: TruncatedSpace) -> Optional[FiberMap]:
    """Affine map clearing the ``Du`` components of the pair, ``None`` if already clear."""
    pair = [_combine(gens, ad.vecs[k]) for k in (0, 1)]
    if not (pair[0].au or pair[1].au):
        return None
    parts = [_affine_parts(P.au) for P in pair]
    if any(b for _a, b in parts):
        I = _solve_along_pair(pair, [b for _a, b in parts], space)
        if I is None:
            raise TruncationExhausted("integrating factor not found on the window")
        I = I - ExpPoly.const(I.constant_term())
        if not _linear_form(I):
            raise OutsideRing(f"integrating factor exp({I}) is not an exponential polynomial")
        fx, fy = I.diff("x").constant_value(), I.diff("y").constant_value()
        A = ExpPoly.monomial(1, freq=(fx, fy))
        A_inv = ExpPoly.monomial(1, freq=(-fx, -fy))
    else:
        A = A_inv = ExpPoly.const(1)
    W = _solve_along_pair(pair, [a * A_inv for a, _b in parts], space)
    if W is None:
        raise TruncationExhausted("pair gauge not found on the window")
    return FiberMap.affine(A, A * W, A_inv)


def _combine(gens: Sequence[VectorField], vec: Vec) -> VectorField:
    out = VectorField(total=True)
    for i, c in sorted(vec.items()):
        out = out + gens[i] * c
    return out


def _affine_match(ad: _Adapted, rho_c: List[ExpPoly], br: LiftBranch):
    a = [r.u_coefficients().get(0, ExpPoly()) for r in rho_c]
    b = [r.u_coefficients().get(1, ExpPoly()) for r in rho_c]
    if any(r.u_coefficients().get(2) for r in rho_c):
        return None
    if not all(x.is_constant() for x in a + b):
        return None
    a = [x.constant_value() if x else _ZERO for x in a]
    b = [x.constant_value() if x else _ZERO for x in b]
    m0 = next((j for j in range(ad.n) if b[j]), None)
    if m0 is None:
        return None
    mu = -a[m0] / b[m0]
    shifted = [a[j] + b[j] * mu for j in range(ad.n)]
    m1 = next((j for j in range(ad.n) if j != m0 and shifted[j]), None)
    if m1 is None or br.slice != (m0, m1):
        return None
    lam = shifted[m1]
    canon = [ExpPoly.const(shifted[j] / lam) + ExpPoly.monomial(b[j], u=1) for j in range(ad.n)]
    eqs = []
    for r, c in zip(br.rho, canon):
        eqs += _u_coeff_eqs(r, c)
    eqs = [e for e in eqs if e]
    symvals: Dict[str, ExpPoly] = {}
    if eqs:
        if any(e.is_constant() for e in eqs):
            return None
        sols = solve_constant_system(eqs)
        if not sols:
            return None
        symvals = dict(sols[0].assignment)
        for name in sols[0].free:
            symvals[name] = ExpPoly()
    # old catalog coordinate u = lam * v + mu
    return FiberMap.affine(ExpPoly.const(lam), ExpPoly.const(mu)), symvals


def _projective_match(ad: _Adapted, rho_c: List[ExpPoly]):
    E, H, F, _rad = ad.triple
    qE, qH = _combo(rho_c, E), _combo(rho_c, H)
    co = qE.u_coefficients()
    if not all(v.is_constant() for v in co.values()) or any(k > 2 for k in co):
        return None
    e0 = co.get(0, ExpPoly()).constant_value() if co.get(0) else _ZERO
    e1 = co.get(1, ExpPoly()).constant_value() if co.get(1) else _ZERO
    e2 = co.get(2, ExpPoly()).constant_value() if co.get(2) else _ZERO
    # q_E = Q^2 / Delta with Q = c*v + d
    if e0:
        d, delta = _ONE, e0.inverse()
        c = e1 / (2 * e0)
    elif e2:
        d, c, delta = _ZERO, _ONE, e2.inverse()
    else:
        return None
    Q = ExpPoly.monomial(c, u=1) + ExpPoly.const(d)
    # q_H = -2 N Q / Delta
    N = _poly_div_linear(qH.scale(-delta / 2), Q)
    if N is None:
        return None
    nc = N.u_coefficients()
    a = nc.get(1, ExpPoly()).constant_value() if nc.get(1) else _ZERO
    b = nc.get(0, ExpPoly()).constant_value() if nc.get(0) else _ZERO
    if a * d - b * c != delta:
        return None
    # branch coordinate u_br = (a v + b)/(c v + d) in terms of the catalog coordinate v;
    # the witness map goes from catalog to branch, so invert it
    m = FiberMap.moebius(ExpPoly.const(a), ExpPoly.const(b), ExpPoly.const(c), ExpPoly.const(d))
    return m.inverse(), {}
