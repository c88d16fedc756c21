"""Finite-dimensional Lie algebras of vector fields and their lifts.

A :class:`LieAlgebraRealization` wraps an ordered basis of vector fields
together with exact structure constants.  Ranks at a point are computed
generically over any parameter symbols via minors, so a field such as
``y*Dy + C*Du`` counts as nonvanishing at the origin.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    DegreeTooHigh,
    LinearlyDependent,
    NoTransitivePair,
    NotALift,
    NotProjectable,
    NotClosed,
    NotTransitive,
)
from .expoly import ExpPoly
from .gq import GaussianRational, as_gq
from .linalg import EchelonBasis, add_scaled, nullspace, solve
from .vfield import VectorField, bracket, project

__all__ = [
    "LieAlgebraRealization",
    "LiftTypeTag",
    "structure_constants",
    "transitive_at",
    "stabilizer_at",
    "stabilizer_coords",
    "classify_lift_type",
    "find_normalized_pair",
    "derived_series",
    "is_solvable",
    "is_abelian",
    "generic_rank",
]

_ONE = GaussianRational(1)
_ZERO_P = ExpPoly()

Vec = Dict[int, GaussianRational]


class LieAlgebraRealization:
    """Basis of vector fields closed under bracket, with its c table.

    ``structure[(i, j)]`` for ``i < j`` holds the sparse coordinates of
    ``[X_i, X_j]``.  Use :func:`structure_constants` to build one.
    """

    def __init__(self, basis: Sequence[VectorField], structure, echelon, sample_point=None):
        self.basis: Tuple[VectorField, ...] = tuple(basis)
        self.structure: Dict[Tuple[int, int], Vec] = structure
        self._ech = echelon
        self.total = self.basis[0].total
        if sample_point is None:
            sample_point = (0, 0, 0) if self.total else (0, 0)
        self.sample_point = tuple(sample_point)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def c(self, i: int, j: int) -> Vec:
        """Coordinates of ``[X_i, X_j]``."""
        if i == j:
            return {}
        if i < j:
            return self.structure[(i, j)]
        return {k: -v for k, v in self.structure[(j, i)].items()}

    def c_tensor(self) -> List[List[List[GaussianRational]]]:
        n = self.dim
        zero = GaussianRational(0)
        return [[[self.c(i, j).get(k, zero) for k in range(n)] for j in range(n)] for i in range(n)]

    def coords(self, X: VectorField) -> Optional[Vec]:
        """Constant coordinates of ``X`` in the basis, or ``None``."""
        if X.total != self.total:
            return None
        return self._ech.coords(X.coordinate_vector())

    def combine(self, vec: Vec) -> VectorField:
        out = VectorField(total=self.total)
        for i, c in sorted(vec.items()):
            if c:
                out = out + self.basis[i] * c
        return out

    def bracket_vec(self, v: Vec, w: Vec) -> Vec:
        out: Vec = {}
        for i, a in v.items():
            for j, b in w.items():
                if i != j:
                    add_scaled(out, self.c(i, j), a * b)
        return out

    def ad_matrix(self, v: Vec) -> List[Vec]:
        """Rows ``k`` of ``ad(v)`` as maps on coordinates: ``(ad v)(w)_k = row_k . w``."""
        rows: List[Vec] = [dict() for _ in range(self.dim)]
        for j in range(self.dim):
            col = self.bracket_vec(v, {j: _ONE})
            for k, val in col.items():
                rows[k][j] = val
        return rows

    def params(self) -> set:
        out = set()
        for X in self.basis:
            out |= X.params()
        return out

    def __repr__(self):
        gens = ", ".join(str(X) for X in self.basis)
        return f"LieAlgebraRealization([{gens}])"


def structure_constants(fields: Sequence[VectorField], sample_point=None) -> LieAlgebraRealization:
    """Check independence and closure; return the realization with its c table."""
    fields = list(fields)
    if not fields:
        raise ValueError("need at least one vector field")
    total = fields[0].total
    fields = [X if X.total == total else X.as_total() for X in fields]
    ech = EchelonBasis()
    for i, X in enumerate(fields):
        if ech.add(X.coordinate_vector()) is not None:
            raise LinearlyDependent(f"generator {i + 1} ({X}) is a constant combination of the others")
    structure = {}
    for i, j in combinations(range(len(fields)), 2):
        Z = bracket(fields[i], fields[j])
        co = ech.coords(Z.coordinate_vector())
        if co is None:
            raise NotClosed(
                f"[X{i + 1}, X{j + 1}] = {Z} is not a constant combination of the basis",
                pair=(i, j),
                bracket=Z,
            )
        structure[(i, j)] = co
    return LieAlgebraRealization(fields, structure, ech, sample_point)


# ---------------------------------------------------------------------------
# evaluation and generic rank


def _point_dict(p, total: bool) -> dict:
    names = ("x", "y", "u")
    p = tuple(p)
    if total and len(p) == 2:
        p = p + (0,)
    return {n: v for n, v in zip(names, p)}


def _eval_rows(fields: Sequence[VectorField], p, total: bool) -> List[List[ExpPoly]]:
    pt = _point_dict(p, total)
    n = 3 if total else 2
    rows = []
    for X in fields:
        comps = X.components[:n]
        rows.append([c.subs_values(pt) for c in comps])
    return rows


def _det(m: List[List[ExpPoly]]) -> ExpPoly:
    k = len(m)
    if k == 1:
        return m[0][0]
    if k == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    out = _ZERO_P
    for j in range(k):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        term = m[0][j] * _det(minor)
        out = out + term if j % 2 == 0 else out - term
    return out


def generic_rank(rows: List[List[ExpPoly]]) -> int:
    """Rank over the field of rational functions in any parameter symbols."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    if all(e.is_constant() for r in rows for e in r):
        ech = EchelonBasis()
        for r in rows:
            ech.add({j: e.constant_value() for j, e in enumerate(r) if e})
        return ech.rank
    best = 1
    for k in range(2, min(len(rows), ncols) + 1):
        found = False
        for ri in combinations(range(len(rows)), k):
            for ci in combinations(range(ncols), k):
                if _det([[rows[a][b] for b in ci] for a in ri]):
                    found = True
                    break
            if found:
                break
        if not found:
            break
        best = k
    return best


def transitive_at(alg: LieAlgebraRealization, p=None) -> bool:
    """Whether the basis spans the tangent space at ``p`` (generically in parameters)."""
    if p is None:
        p = alg.sample_point
    rows = _eval_rows(alg.basis, p, alg.total)
    return generic_rank(rows) == (3 if alg.total else 2)


def stabilizer_coords(alg: LieAlgebraRealization, p=None) -> List[Vec]:
    """Nullspace basis of the evaluation map at ``p``, as basis coordinates.

    Parameter-dependent values are split by parameter monomial so that the
    combinations vanish at ``p`` identically in the parameters.
    """
    if p is None:
        p = alg.sample_point
    rows_eval = _eval_rows(alg.basis, p, alg.total)
    eqs: Dict[tuple, Vec] = {}
    for i, row in enumerate(rows_eval):
        for comp, val in enumerate(row):
            for key, q in val.items():
                eqs.setdefault((comp, key), {})[i] = q
    return nullspace(list(eqs.values()), alg.dim)


def stabilizer_at(alg: LieAlgebraRealization, p=None) -> List[VectorField]:
    return [alg.combine(v) for v in stabilizer_coords(alg, p)]


# ---------------------------------------------------------------------------
# abstract structure on the c table


def _span_basis(vecs: Sequence[Vec]) -> List[Vec]:
    ech = EchelonBasis()
    out = []
    for v in vecs:
        if v and ech.add(v) is None:
            out.append(v)
    return out


def derived_series(alg: LieAlgebraRealization, sub: Optional[Sequence[Vec]] = None) -> List[int]:
    """Dimensions of the derived series of ``sub`` (default: the whole algebra)."""
    if sub is None:
        sub = [{i: _ONE} for i in range(alg.dim)]
    cur = _span_basis(sub)
    dims = [len(cur)]
    while cur:
        nxt = _span_basis([alg.bracket_vec(v, w) for v, w in combinations(cur, 2)])
        if len(nxt) == len(cur):
            break
        cur = nxt
        dims.append(len(cur))
    return dims


def is_solvable(alg: LieAlgebraRealization, sub: Optional[Sequence[Vec]] = None) -> bool:
    return derived_series(alg, sub)[-1] == 0


def is_abelian(alg: LieAlgebraRealization, sub: Optional[Sequence[Vec]] = None) -> bool:
    dims = derived_series(alg, sub)
    return len(dims) == 1 and dims[0] == 0 or (len(dims) > 1 and dims[1] == 0)


# ---------------------------------------------------------------------------
# lifts


_KINDS = {1: "metric", 2: "affine", 3: "projective"}


@dataclass
class LiftTypeTag:
    """Dimension of the fiber action of the lifted stabilizer, with witness."""

    kind: str
    dimension: int
    witness: List[ExpPoly]
    normal_form: bool = True
    points: List[tuple] = field(default_factory=list)

    @property
    def suffix(self) -> str:
        return self.kind[0]


def check_lift(hat: LieAlgebraRealization, base: LieAlgebraRealization) -> None:
    """Raise :class:`NotALift` unless ``hat`` projects isomorphically onto ``base``."""
    if not hat.total or base.total:
        raise NotALift("expected a realization on C^2 x C over one on C^2")
    if hat.dim != base.dim:
        raise NotALift(f"dimension {hat.dim} differs from base dimension {base.dim}")
    ech = EchelonBasis()
    for i, X in enumerate(hat.basis):
        try:
            P = project(X)
        except NotProjectable as exc:
            raise NotALift(f"generator {i + 1} is not projectable") from exc
        if base.coords(P) is None:
            raise NotALift(f"projection {P} of generator {i + 1} is not in the base algebra")
        if ech.add(P.coordinate_vector()) is not None:
            raise NotALift("projection has a nontrivial kernel")


def _fiber_rows(fields: Sequence[VectorField], p) -> List[List[ExpPoly]]:
    pt = {"x": p[0], "y": p[1]}
    rows = []
    for X in fields:
        f = X.au.subs_values(pt)
        coeffs = f.u_coefficients()
        deg = max(coeffs) if coeffs else 0
        if deg > 2:
            raise DegreeTooHigh(f"fiber action {f} is not quadratic in u")
        rows.append([coeffs.get(k, _ZERO_P) for k in range(3)])
    return rows


def _fiber_action(hat: LieAlgebraRealization, base: LieAlgebraRealization, p) -> Tuple[int, List[ExpPoly], bool]:
    st = stabilizer_coords(base, p)
    proj_coords = []
    for X in hat.basis:
        proj_coords.append(base.coords(project(X)))
    # express base stabilizer in hat coordinates via projection
    ech = EchelonBasis()
    for co in proj_coords:
        ech.add(co)
    lifted = []
    for v in st:
        w = ech.coords(v)
        lifted.append(hat.combine(w))
    rows = _fiber_rows(lifted, p)
    rank = generic_rank(rows)
    pt = {"x": p[0], "y": p[1]}
    witness = [X.au.subs_values(pt) for X in lifted if X.au.subs_values(pt)]
    maxdeg = max((k for r in rows for k, e in enumerate(r) if e), default=0)
    return rank, witness, maxdeg <= rank - 1


def _secondary_points(hat: LieAlgebraRealization) -> List[tuple]:
    fx = fy = False
    for X in hat.basis:
        for comp in X.components:
            for f in comp.frequencies():
                fx = fx or bool(f[0])
                fy = fy or bool(f[1])
    pts = []
    if not fy:
        pts.append((0, 1))
    elif not fx:
        pts.append((1, 0))
    return pts


def classify_lift_type(hat: LieAlgebraRealization, base: LieAlgebraRealization, p=None) -> LiftTypeTag:
    """Metric / affine / projective tag from the fiber action of the lifted stabilizer."""
    if p is None:
        p = base.sample_point
    p = tuple(p)[:2]
    check_lift(hat, base)
    for X in hat.basis:
        if max(X.au.u_coefficients(), default=0) > 2:
            raise DegreeTooHigh(f"{X} has a Du component of degree > 2 in u")
    if not transitive_at(base, p):
        raise NotTransitive(f"base algebra is not transitive at {p}")
    if not transitive_at(hat, p + (0,)):
        raise NotTransitive(f"lift is not transitive at {p + (0,)}")
    rank, witness, normal = _fiber_action(hat, base, p)
    if rank == 0:
        raise NotTransitive("lifted stabilizer acts trivially on the fiber")
    points = [p]
    for q in _secondary_points(hat):
        if q == p or not transitive_at(base, q) or not transitive_at(hat, q + (0,)):
            continue
        r2, _, n2 = _fiber_action(hat, base, q)
        points.append(q)
        if r2 != rank:
            raise NotALift(f"fiber action has dimension {rank} at {p} but {r2} at {q}")
        normal = normal and n2
    return LiftTypeTag(_KINDS[rank], rank, witness, normal, points)


# ---------------------------------------------------------------------------
# normalized transitive pair

_DX = VectorField(1, 0, 0, total=False)
_DY = VectorField(0, 1, 0, total=False)
_XDX_DY = VectorField("x", 1, 0, total=False)


def _pair_det(alg: LieAlgebraRealization, v: Vec, w: Vec, p) -> ExpPoly:
    rows = _eval_rows([alg.combine(v), alg.combine(w)], p, alg.total)
    return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]


def _grid_vectors(n: int):
    seen = set()
    for size in (1, 2, 3):
        for idx in combinations(range(n), size):
            rest = [c for c in range(-2, 3) if c]
            for tail in product(rest, repeat=size - 1):
                vec = {idx[0]: _ONE}
                for i, c in zip(idx[1:], tail):
                    vec[i] = GaussianRational(c)
                key = tuple(sorted(vec.items()))
                if key not in seen:
                    seen.add(key)
                    yield vec


def _scale(v: Vec, c) -> Vec:
    return {k: x * c for k, x in v.items() if x * c}


def _try_partner(alg: LieAlgebraRealization, x: Vec, p) -> Optional[Tuple[Vec, Vec]]:
    ad = alg.ad_matrix(x)
    null = nullspace(ad, alg.dim)
    # abelian partner
    for w in null:
        if _pair_det(alg, x, w, p):
            return x, w
    # [X1, X2] = X1
    rhs = [x.get(k, GaussianRational(0)) for k in range(alg.dim)]
    y0 = solve(ad, rhs, alg.dim)
    if y0 is not None:
        if _pair_det(alg, x, y0, p):
            return x, y0
        for w in null:
            y = dict(y0)
            add_scaled(y, w, _ONE)
            if _pair_det(alg, x, y, p):
                return x, y
    return None


def find_normalized_pair(alg: LieAlgebraRealization, p=None) -> Tuple[VectorField, VectorField]:
    """``(X1, X2)`` spanning a transitive subalgebra with ``[X1, X2]`` in ``{0, X1}``."""
    X1, X2, _ = normalized_pair_coords(alg, p)
    return alg.combine(X1), alg.combine(X2)


def normalized_pair_coords(alg: LieAlgebraRealization, p=None) -> Tuple[Vec, Vec, bool]:
    """Like :func:`find_normalized_pair` but returns coordinates and a literal flag.

    The flag is true when ``X1 = Dx`` and ``X2`` is ``Dy`` or ``x*Dx + Dy``
    exactly (after projection for lifted algebras).
    """
    if p is None:
        p = alg.sample_point
    p = tuple(p)[:2]
    if not transitive_at(alg, p):
        raise NoTransitivePair(f"algebra is not transitive at {p}")
    fields = [project(X) if alg.total else X for X in alg.basis]
    ix = [i for i, X in enumerate(fields) if X == _DX]
    iy = [i for i, X in enumerate(fields) if X == _DY] + [i for i, X in enumerate(fields) if X == _XDX_DY]
    if ix and iy:
        return {ix[0]: _ONE}, {iy[0]: _ONE}, True
    for x in _grid_vectors(alg.dim):
        found = _try_partner(alg, x, p)
        if found is not None:
            return found[0], found[1], False
    raise NoTransitivePair("no transitive pair with [X1, X2] in {0, X1} found on the grid")
