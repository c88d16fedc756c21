import pytest
import sympy as sp
from hypothesis import given

from conftest import X, Y, U, expolys, sym_equal, to_sympy
from liftlab.errors import ContainsFiberVariable, NonExactEvaluation, ParameterDifferentiation, ParseError
from liftlab.expoly import ExpPoly, parse
from liftlab.gq import GaussianRational


def P(t):
    return parse(t)


# -- ring ------------------------------------------------------------------------------


def test_frequencies_add_under_product():
    assert P("x*e^(x)") * P("e^(2x)") == P("x*e^(3x)")


def test_square_of_binomial_in_u():
    assert P("1+u") * P("1+u") == P("1 + 2*u + u^2")


def test_parameter_symbols_commute():
    assert P("C*y") * P("2*y") == P("2*C*y^2")


def test_zero_is_empty():
    assert not ExpPoly()
    assert P("x - x") == ExpPoly()
    assert len(P("0")) == 0


# -- calculus ---------------------------------------------------------------------------


def test_diff_product_rule_on_exponential():
    assert P("x^2*e^(2x)").diff("x") == P("(2*x + 2*x^2)*e^(2x)")


def test_diff_in_u_of_ansatz():
    assert P("A + B*u + C*u^2").diff("u") == P("B + 2*C*u")


def test_diff_keeps_parameters():
    assert P("2*C*y").diff("y") == P("2*C")


def test_diff_by_parameter_rejected():
    with pytest.raises(ParameterDifferentiation):
        P("C*x").diff("C")


@pytest.mark.parametrize(
    "p, q",
    [("x", "(1/2)*x^2"), ("e^(2x)", "(1/2)*e^(2x)"), ("x*e^(x)", "(x - 1)*e^(x)"), ("y", "x*y")],
)
def test_antideriv_x_examples(p, q):
    assert P(p).antideriv_x() == P(q)


def test_antideriv_y_mixed_frequency():
    p = P("x*e^(x + y)")
    assert p.antideriv_y().diff("y") == p


def test_antideriv_rejects_u():
    with pytest.raises(ContainsFiberVariable):
        P("u*x").antideriv_x()


# -- evaluation --------------------------------------------------------------------------


def test_eval_exponential_at_zero():
    for w in ("2", "1/2", "i", "1+i"):
        assert P(f"e^(({w})*x)").eval_at({"x": 0}) == 1


def test_eval_polynomial():
    assert P("x^2*y").eval_at({"x": 2, "y": 3}) == 12


def test_eval_exponential_off_origin_is_inexact():
    with pytest.raises(NonExactEvaluation):
        P("e^(2x)").eval_at({"x": 1})


def test_partial_evaluation_leaves_residual():
    r = P("x*y + C*y^2").eval_at({"y": 2})
    assert r == P("2*x + 4*C")


# -- text ---------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "text",
    ["0", "1", "x^2*e^(x)", "(1/2)*x^2 - i*y", "C_1_2*x + A*B*u^2", "e^((1+i)*x)", "x*e^(x + 2*y)"],
)
def test_text_round_trip(text):
    p = P(text)
    assert P(str(p)) == p


def test_parse_errors():
    for bad in ("x +", "e^(x^2)", "x^-1", "(x", "x $ y"):
        with pytest.raises(ParseError):
            P(bad)


# -- sympy oracle -----------------------------------------------------------------------


@given(expolys(u=True, params=True), expolys(u=True, params=True))
def test_product_matches_sympy(p, q):
    assert sym_equal(to_sympy(p * q), to_sympy(p) * to_sympy(q))


@given(expolys(u=True, params=True))
def test_diff_matches_sympy(p):
    for v, s in (("x", X), ("y", Y), ("u", U)):
        assert sym_equal(to_sympy(p.diff(v)), sp.diff(to_sympy(p), s))


@given(expolys(params=True))
def test_canonical_form_is_idempotent(p):
    assert p.canonical() == p
    assert parse(str(p)) == p


def test_gaussian_frequency_arithmetic():
    p = ExpPoly.monomial(1, freq=(GaussianRational(0, 1), 0))
    assert (p * p).diff("x") == ExpPoly.monomial(GaussianRational(0, 2), freq=(GaussianRational(0, 2), 0))
