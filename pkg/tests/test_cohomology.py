import pytest
import sympy as sp

from conftest import X as SX, Y as SY, to_sympy
from liftlab import catalog
from liftlab.catalog import enumerate_instances
from liftlab.cohomology import (
    Cocycle,
    build_truncated_space,
    class_coordinates,
    coboundary,
    compute_h1,
    default_space,
    is_coboundary,
    is_cocycle,
    metric_lift_cocycles,
    metric_lift_from_cocycle,
)
from liftlab.errors import DegreeTooSmall, NotACocycle
from liftlab.expoly import ExpPoly, parse as parse_expoly
from liftlab.gq import GaussianRational
from liftlab.liealg import check_lift, classify_lift_type, structure_constants
from liftlab.vfield import apply, parse_field


def alg_of(eid, params=None):
    return structure_constants(catalog.instantiate(eid, params or {}))


def cocycle(*texts):
    return Cocycle(tuple(parse_expoly(t) for t in texts))


G6 = alg_of("g6")


def test_space_g6_degree3():
    sp3 = build_truncated_space(G6, 3)
    assert sp3.frequency_set == ((GaussianRational(0), GaussianRational(0)),)
    got = {str(sp3.element(i)) for i in range(sp3.dim)}
    assert got == {"1", "x", "y", "x^2", "x*y", "y^2", "x^3", "x^2*y", "x*y^2", "y^3"}
    assert sp3.dim == 10


def test_space_frequency_sums():
    alg = alg_of("g4", {"alphas": [0, 1], "ms": [1, 1]})
    space = build_truncated_space(alg, 1, 2)
    assert {f[0] for f in space.frequency_set} == {GaussianRational(k) for k in (0, 1, 2)}
    assert all(f[1] == 0 for f in space.frequency_set)


def test_space_degree_too_small():
    with pytest.raises(DegreeTooSmall):
        build_truncated_space(G6, 0)


def test_generators_map_low_degree_into_space():
    for eid in ("g6", "g16", "g15t"):
        alg = alg_of(eid)
        space = default_space(alg)
        d = max(c.xy_degree() for X in alg.basis for c in X.components if c)
        for i in range(space.dim):
            f = space.element(i)
            if f.xy_degree() <= space.degree_bound - d:
                for X in alg.basis:
                    assert space.contains(apply(X, f))


@pytest.mark.parametrize("eid,h1", [("g16", 1), ("g15", 1), ("g16t", 2), ("g15t", 0), ("g6", 1), ("g3", 0)])
def test_h1_table(eid, h1):
    alg = alg_of(eid)
    res = compute_h1(alg)
    assert res.dim_H1 == h1
    assert res.dim_H1 == res.dim_Z1 - res.dim_B1
    assert len(res.representatives) == h1
    for rep in res.representatives:
        assert is_cocycle(alg, rep)
        assert is_coboundary(alg, rep) is None


def test_report_carries_truncation():
    rep = compute_h1(G6).report()
    assert rep["D"] == 5 and rep["F"] == 2
    assert rep["dim_H1"] == 1


def test_h1_stable_under_larger_window():
    for eid, p in enumerate_instances():
        if catalog.get_entry(eid).is_lift:
            continue
        alg = alg_of(eid, p)
        space = default_space(alg)
        F = 3 if len(space.frequency_set) > 1 else 2
        wider = default_space(alg, space.degree_bound + 2, F)
        assert compute_h1(alg, space).dim_H1 == compute_h1(alg, wider).dim_H1, (eid, p)


def test_g6_metric_lift_from_cocycle():
    psi = cocycle("0", "0", "C", "2*C*y")
    gens = metric_lift_from_cocycle(G6, psi)
    assert gens == [parse_field(t, True) for t in ("Dx", "Dy", "y*Dy + C*Du", "y^2*Dy + 2*C*y*Du")]
    hat = structure_constants(gens)
    check_lift(hat, G6)
    assert classify_lift_type(hat, G6).kind == "metric"


def test_trivial_lift():
    gens = metric_lift_from_cocycle(G6, [0, 0, 0, 0])
    check_lift(structure_constants(gens), G6)


def test_exact_cocycle_is_accepted():
    psi = cocycle("1", "0", "0", "0")
    assert is_cocycle(G6, psi)
    metric_lift_from_cocycle(G6, psi)
    assert is_coboundary(G6, psi) == parse_expoly("x")


def test_not_a_cocycle():
    with pytest.raises(NotACocycle):
        metric_lift_from_cocycle(G6, cocycle("0", "0", "1", "0"))


def test_zero_is_coboundary_of_zero():
    assert is_coboundary(G6, [0, 0, 0, 0]) == ExpPoly()


def test_parameter_class_is_not_exact_sympy_oracle():
    """Independent check: no polynomial U of degree <= 6 has dU = (0, 0, 1, 2y)."""
    assert is_coboundary(G6, cocycle("0", "0", "1", "2*y")) is None
    deg = 6
    cs = sp.symbols(f"c0:{(deg + 1) * (deg + 2) // 2}")
    mons = [SX**a * SY**b for a in range(deg + 1) for b in range(deg + 1 - a)]
    U = sum(c * m for c, m in zip(cs, mons))
    fields = [(1, 0), (0, 1), (0, SY), (0, SY**2)]
    target = [0, 0, 1, 2 * SY]
    eqs = []
    for (a, b), t in zip(fields, target):
        expr = sp.expand(a * sp.diff(U, SX) + b * sp.diff(U, SY) - t)
        eqs += sp.Poly(expr, SX, SY).coeffs()
    assert sp.linsolve(eqs, cs) == sp.EmptySet


def test_coboundaries_are_cocycles():
    space = default_space(G6)
    for i in range(space.dim):
        U = space.element(i)
        psi = coboundary(G6, U)
        assert is_cocycle(G6, psi)
        assert is_coboundary(G6, psi) is not None


def test_class_coordinates_recover_parameter():
    res = compute_h1(G6)
    psi = cocycle("x", "0", "C", "2*C*y")
    t, U = class_coordinates(G6, psi, res.representatives)
    # psi - sum t_k rep_k - dU vanishes
    rest = [psi[i] - sum((tk * rep[i] for tk, rep in zip(t, res.representatives)), ExpPoly()) for i in range(4)]
    assert list(coboundary(G6, U)) == rest
    assert t[0].params() == {"C"}


def test_catalog_metric_cocycles_match_h1():
    hat = catalog.instantiate("g10.m", {"r": 5})
    base = alg_of("g10", {"r": 5})
    psi0, per = metric_lift_cocycles(hat, ["A", "B"])
    res = compute_h1(base)
    assert res.dim_H1 == 2
    assert is_cocycle(base, psi0)
    for psi in per:
        assert is_cocycle(base, psi)
    coords = [class_coordinates(base, psi, res.representatives)[0] for psi in per]
    m = sp.Matrix([[to_sympy(c) for c in row] for row in coords])
    assert m.rank() == 2
