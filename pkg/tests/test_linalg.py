import os
import random
import subprocess
import sys

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from conftest import gq_to_sympy, small_gq
from liftlab import _kernels_py
from liftlab.gq import GaussianRational
from liftlab.linalg import EchelonBasis, nullspace, rank, solve

try:
    from liftlab import _kernels_c
except ImportError:  # extension not built
    _kernels_c = None


def rows_strategy(max_rows=5, max_cols=5):
    return st.integers(1, max_cols).flatmap(
        lambda n: st.lists(
            st.dictionaries(st.integers(0, n - 1), small_gq.filter(bool), max_size=n), min_size=1, max_size=max_rows
        ).map(lambda rows: (rows, n))
    )


def to_matrix(rows, n):
    return sp.Matrix([[gq_to_sympy(r.get(j, GaussianRational(0))) for j in range(n)] for r in rows])


@given(rows_strategy())
def test_rank_and_nullspace_match_sympy(data):
    rows, n = data
    M = to_matrix(rows, n)
    assert rank(rows) == M.rank()
    null = nullspace(rows, n)
    assert len(null) == n - M.rank()
    for v in null:
        vec = sp.Matrix([gq_to_sympy(v.get(j, GaussianRational(0))) for j in range(n)])
        assert (M * vec).expand() == sp.zeros(len(rows), 1)


@given(rows_strategy(), st.lists(small_gq, min_size=5, max_size=5))
def test_solve_is_exact_or_none(data, rhs):
    rows, n = data
    rhs = rhs[: len(rows)]
    sol = solve(rows, rhs, n)
    M = to_matrix(rows, n)
    b = sp.Matrix([gq_to_sympy(c) for c in rhs])
    consistent = M.rank() == M.row_join(b).rank()
    assert (sol is not None) == consistent
    if sol is not None:
        x = sp.Matrix([gq_to_sympy(sol.get(j, GaussianRational(0))) for j in range(n)])
        assert (M * x - b).expand() == sp.zeros(len(rows), 1)


def test_echelon_coordinates():
    e = EchelonBasis()
    assert e.add({"a": GaussianRational(1), "b": GaussianRational(2)}) is None
    assert e.add({"b": GaussianRational(1)}) is None
    assert e.add({"a": GaussianRational(1), "b": GaussianRational(5)}) == {0: 1, 1: 3}
    assert e.coords({"a": GaussianRational(2), "b": GaussianRational(3)}) == {0: 2, 1: -1}
    assert e.coords({"c": GaussianRational(1)}) is None


@pytest.mark.skipif(_kernels_c is None, reason="compiled kernel not built")
def test_backends_agree():
    rng = random.Random(7)
    rows = [
        {j: GaussianRational(rng.randint(-5, 5), rng.randint(-2, 2)) for j in range(30) if rng.random() < 0.3}
        for _ in range(30)
    ]
    rows = [{k: v for k, v in r.items() if v} for r in rows]
    piv_py, piv_c = {}, {}
    for r in rows:
        assert _kernels_py.rref_insert(piv_py, r) == _kernels_c.rref_insert(piv_c, r)
    assert piv_py == piv_c
    probe = rows[0]
    assert _kernels_py.reduce_row(piv_py, probe) == _kernels_c.reduce_row(piv_c, probe)


def test_pure_python_override():
    out = subprocess.run(
        [sys.executable, "-c", "import liftlab; print(liftlab.BACKEND)"],
        env={**os.environ, "LIFTLAB_PURE_PYTHON": "1"},
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "python"
