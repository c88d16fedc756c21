import pytest
import sympy as sp
from hypothesis import given

from conftest import U, base_fields, field_to_sympy, lifted_fields, sym_equal, sympy_bracket, to_sympy
from liftlab.errors import DegreeTooHigh, NotInvertible, NotProjectable, SpaceMismatch
from liftlab.expoly import ExpPoly, parse
from liftlab.vfield import FiberMap, VectorField, apply, bracket, parse_field, project, pushforward


def F(text, total=None):
    return parse_field(text, total)


def test_bracket_examples():
    assert bracket(F("Dx"), F("x*Dx")) == F("Dx")
    assert bracket(F("y*Dy"), F("y^2*Dy")) == F("y^2*Dy")
    assert bracket(F("x*Dy"), F("y*Dx")) == F("x*Dx - y*Dy")


def test_bracket_space_mismatch():
    with pytest.raises(SpaceMismatch):
        bracket(F("Dx", total=False), F("Du"))


def test_apply_examples():
    assert apply(F("y*Dy"), parse("y^2")) == parse("2*y^2")
    assert apply(F("Dx"), parse("e^(2x)")) == parse("2*e^(2x)")
    assert apply(F("x*Dx + y*Dy"), parse("x*y")) == parse("2*x*y")


def test_project_examples():
    assert project(F("x*Dy + Du")) == F("x*Dy", total=False)
    assert project(F("Du")).is_zero()
    assert project(F("y^2*Dy + (1 - 2*y*u)*Du")) == F("y^2*Dy", total=False)


def test_project_rejects_u_dependent_base_part():
    with pytest.raises(NotProjectable):
        project(F("u*Dx + Du"))


def test_translation_clears_constant_component():
    assert pushforward(F("Dx + Du"), FiberMap.translation(parse("x"))) == F("Dx", total=True)


def test_moebius_inversion_of_scaling_field():
    m = FiberMap.moebius(0, 1, 1, 0)
    assert pushforward(F("u*Du"), m) == F("-u*Du")


def test_moebius_matches_chain_rule(sympy_xyu):
    x, y, u = sympy_xyu
    v = sp.Symbol("v")
    X = F("x*Dy + (1 + x*u - y*u^2)*Du")
    A, B, C, D = parse("1"), parse("x"), parse("y"), parse("1 + x*y")
    m = FiberMap.moebius(A, B, C, D)  # determinant 1 + x*y - x*y = 1
    new = pushforward(X, m)
    # oracle: u = (A v + B)/(C v + D); dv/dt = (du/dt - u_x x' - u_y y') / u_v
    a_, b_, c_, d_ = (to_sympy(p) for p in (A, B, C, D))
    uu = (a_ * v + b_) / (c_ * v + d_)
    ax, ay, au = field_to_sympy(X)
    au_sub = au.subs(u, uu)
    expected = (au_sub - ax * sp.diff(uu, x) - ay * sp.diff(uu, y)) / sp.diff(uu, v)
    got = to_sympy(new.au).subs(u, v)
    assert sym_equal(got, expected)


def test_moebius_degree_limit():
    with pytest.raises(DegreeTooHigh):
        pushforward(F("u^3*Du"), FiberMap.moebius(1, 0, 0, 1))


def test_declared_inverse_checked():
    with pytest.raises(NotInvertible):
        FiberMap.affine(parse("1 + x"))
    with pytest.raises(NotInvertible):
        FiberMap.affine(parse("1 + x"), A_inv=parse("1 - x"))
    m = FiberMap.affine(parse("2*e^(x)"))
    assert m.unit_inv == parse("(1/2)*e^(-x)")


def test_identity_map():
    X = F("x^2*Dx + (1 - 2*x*u)*Du")
    assert pushforward(X, FiberMap.identity()) == X


def test_text_round_trip():
    for t in ("x^2*Dx + (1 - 2*x*u)*Du", "Dx", "e^(i*x)*Dy + C_2_0*e^(i*x)*Du", "0"):
        X = F(t)
        assert F(str(X), X.total) == X


@given(base_fields(), base_fields())
def test_bracket_matches_sympy(A, B):
    got = field_to_sympy(bracket(A, B))
    exp = sympy_bracket(field_to_sympy(A), field_to_sympy(B))
    assert all(sym_equal(g, e) for g, e in zip(got, exp))


@given(lifted_fields(), lifted_fields())
def test_projection_commutes_with_bracket(A, B):
    assert project(bracket(A, B)) == bracket(project(A), project(B))
