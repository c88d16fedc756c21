import os

import pytest
import sympy as sp
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from liftlab.expoly import ExpPoly
from liftlab.gq import GaussianRational
from liftlab.vfield import VectorField

settings.register_profile(
    "liftlab",
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "liftlab"))

X, Y, U = sp.symbols("x y u")

# -- sympy oracle ---------------------------------------------------------------------


def gq_to_sympy(q: GaussianRational):
    return sp.Rational(q.re.numerator, q.re.denominator) + sp.I * sp.Rational(q.im.numerator, q.im.denominator)


def to_sympy(p: ExpPoly):
    out = sp.Integer(0)
    for (fx, fy, a, b, c, ps), q in p.items():
        term = gq_to_sympy(q) * X**a * Y**b * U**c
        for name, k in ps:
            term *= sp.Symbol(name) ** k
        if fx or fy:
            term *= sp.exp(gq_to_sympy(fx) * X + gq_to_sympy(fy) * Y)
        out += term
    return out


def sym_equal(a, b) -> bool:
    return sp.simplify(sp.expand(a - b)) == 0


def field_to_sympy(F: VectorField):
    return [to_sympy(c) for c in F.components]


def sympy_bracket(A, B):
    vars_ = (X, Y, U)
    return [
        sum(A[k] * sp.diff(B[c], vars_[k]) - B[k] * sp.diff(A[c], vars_[k]) for k in range(3)) for c in range(3)
    ]


# -- hypothesis strategies ----------------------------------------------------------------

small_gq = st.builds(
    GaussianRational,
    st.integers(-3, 3),
    st.sampled_from([0, 0, 0, 1, -1, 2]),
)
nonzero_gq = small_gq.filter(bool)
freqs = st.sampled_from([(0, 0), (1, 0), (-1, 0), (0, 1), (GaussianRational(0, 1), 0), (2, 0)])


@st.composite
def expolys(draw, u=False, params=False, max_terms=3, max_deg=2, freq=True):
    p = ExpPoly()
    for _ in range(draw(st.integers(0, max_terms))):
        ps = ()
        if params and draw(st.booleans()):
            ps = ((draw(st.sampled_from(["A", "B"])), 1),)
        p = p + ExpPoly.monomial(
            draw(nonzero_gq),
            x=draw(st.integers(0, max_deg)),
            y=draw(st.integers(0, max_deg)),
            u=draw(st.integers(0, 2)) if u else 0,
            params=ps,
            freq=draw(freqs) if freq else (0, 0),
        )
    return p


@st.composite
def base_fields(draw, freq=True):
    return VectorField(draw(expolys(freq=freq)), draw(expolys(freq=freq)), 0, total=False)


@st.composite
def lifted_fields(draw, max_u=2, freq=True):
    """Projectable fields on C^2 x C with Du component of u-degree <= max_u."""
    au = ExpPoly()
    for k in range(max_u + 1):
        au = au + draw(expolys(freq=freq, max_terms=2)) * ExpPoly.monomial(1, u=k)
    return VectorField(draw(expolys(freq=freq)), draw(expolys(freq=freq)), au, total=True)


@pytest.fixture(scope="session")
def sympy_xyu():
    return X, Y, U


# -- acceptance report -----------------------------------------------------------------
# Tests marked ``criterion(n, title)`` are grouped; a criterion passes when all
# of its tests pass.  One line per criterion is printed after the run.

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion the test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    n, title = mark.args
    entry = _CRITERIA.setdefault(n, {"title": title, "passed": True, "tests": 0})
    if rep.when == "call":
        entry["tests"] += 1
    if rep.failed or rep.skipped:
        entry["passed"] = False


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        status = "PASS" if e["passed"] else "FAIL"
        terminalreporter.write_line(f"{status} criterion {n}: {e['title']} ({e['tests']} test(s))")
