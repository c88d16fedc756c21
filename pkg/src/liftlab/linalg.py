"""Exact sparse linear algebra over the Gaussian rationals.

Rows and vectors are ``dict`` objects mapping a column key to a nonzero
:class:`~liftlab.gq.GaussianRational`.  The elimination kernel lives in
:mod:`liftlab._kernels`; a compiled build is used when available.
"""

from __future__ import annotations

from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from ._kernels import rref_insert, reduce_row
from .gq import GaussianRational

__all__ = [
    "RREF",
    "nullspace",
    "solve",
    "rank",
    "EchelonBasis",
    "add_scaled",
]

Vec = Dict[Hashable, GaussianRational]


def add_scaled(acc: dict, vec: dict, c) -> None:
    """In place ``acc += c * vec``, dropping zeros."""
    for k, v in vec.items():
        w = acc.get(k)
        if w is None:
            acc[k] = v * c
        else:
            w = w + v * c
            if w:
                acc[k] = w
            else:
                del acc[k]


class RREF:
    """Reduced row echelon form built incrementally over integer columns."""

    def __init__(self):
        self.pivots: Dict[int, dict] = {}

    def insert(self, row: dict) -> Optional[int]:
        """Insert ``row``; returns the new pivot column or ``None`` if dependent."""
        return rref_insert(self.pivots, row)

    def reduce(self, row: dict) -> dict:
        return reduce_row(self.pivots, row)

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _build(rows: Iterable[dict]) -> RREF:
    r = RREF()
    for row in rows:
        if row:
            r.insert(row)
    return r


def rank(rows: Iterable[dict]) -> int:
    return _build(rows).rank


def nullspace(rows: Iterable[dict], ncols: int) -> List[dict]:
    """Basis of ``{v : row . v = 0 for all rows}`` over columns ``0..ncols-1``.

    Basis vectors are indexed by free column in increasing order and have a
    1 in their own free column.
    """
    r = _build(rows)
    free = [c for c in range(ncols) if c not in r.pivots]
    basis = []
    # column -> pivots using it
    uses: Dict[int, List[Tuple[int, GaussianRational]]] = {}
    for p, row in r.pivots.items():
        for c, v in row.items():
            if c != p:
                uses.setdefault(c, []).append((p, v))
    for f in free:
        vec = {f: GaussianRational(1)}
        for p, v in uses.get(f, ()):
            vec[p] = -v
        basis.append(vec)
    return basis


def solve(rows: Sequence[dict], rhs: Sequence, ncols: int) -> Optional[dict]:
    """One solution of ``rows . v = rhs`` (free columns set to 0) or ``None``."""
    aug = []
    for row, b in zip(rows, rhs):
        row = dict(row)
        if b:
            row[ncols] = -b if isinstance(b, GaussianRational) else -GaussianRational(b)
        if row:
            aug.append(row)
    r = _build(aug)
    if ncols in r.pivots:
        return None
    sol = {}
    for p, row in r.pivots.items():
        v = row.get(ncols)
        if v:
            sol[p] = -v
    return sol


class EchelonBasis:
    """Incremental basis of a span of sparse vectors with coordinate tracking.

    Vectors may use arbitrary hashable keys.  ``coords`` expresses a vector
    in terms of the originally added vectors (by insertion index).
    """

    def __init__(self, ordered: bool = False):
        self.ordered = ordered  # pivot on the smallest key (keys must be orderable)
        self._rows: List[Tuple[Hashable, dict, dict]] = []
        self._pivot_set = set()
        self.size = 0  # number of vectors offered via add()
        self.independent: List[int] = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _reduce(self, vec: dict) -> Tuple[dict, dict]:
        r = dict(vec)
        comb: dict = {}
        for pivot, row, rcomb in self._rows:
            c = r.get(pivot)
            if c:
                add_scaled(r, row, -c)
                add_scaled(comb, rcomb, -c)
        return r, comb

    def add(self, vec: dict) -> Optional[dict]:
        """Add a vector.  Returns ``None`` if independent, else its coordinates."""
        idx = self.size
        self.size += 1
        r, comb = self._reduce(vec)
        if not r:
            return {k: -v for k, v in comb.items()}
        pivot = min(r) if self.ordered else next(iter(r))
        inv = r[pivot].inverse()
        comb[idx] = comb.get(idx, GaussianRational(0)) + 1
        row = {k: v * inv for k, v in r.items()}
        rcomb = {k: v * inv for k, v in comb.items() if v}
        self._rows.append((pivot, row, rcomb))
        self._pivot_set.add(pivot)
        self.independent.append(idx)
        return None

    def contains(self, vec: dict) -> bool:
        r, _ = self._reduce(vec)
        return not r

    def coords(self, vec: dict) -> Optional[dict]:
        r, comb = self._reduce(vec)
        if r:
            return None
        return {k: -v for k, v in comb.items() if v}

    def remainder(self, vec: dict) -> dict:
        return self._reduce(vec)[0]
