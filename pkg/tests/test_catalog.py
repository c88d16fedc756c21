import pytest

from liftlab import catalog
from liftlab.catalog import TestGrid, enumerate_instances, format_instance, parse_grid, parse_instance
from liftlab.linalg import rank
from liftlab.errors import InvalidParameter, ParseError, UnknownId
from liftlab.vfield import parse_field, project


def fields(*texts, total=None):
    return [parse_field(t, total) for t in texts]


def test_entry_counts():
    assert len(catalog.base_ids()) == 18  # g1..g16 plus the two realizations from the cohomology example
    lifts = catalog.lift_ids()
    assert len(lifts) == 32
    assert {"g13.m1", "g13.m2", "g13.a1", "g13.a2", "g12.a1", "g12.a2", "g14.a1", "g14.a2"} <= set(lifts)
    for lid in lifts:
        assert catalog.get_entry(lid).base_id in catalog.base_ids()


def test_g8_instance():
    assert catalog.instantiate("g8", {"r": 5, "alpha": 2}) == fields("Dx", "Dy", "x*Dy", "x^2*Dy", "x*Dx + 2*y*Dy")


def test_g4_instance():
    assert catalog.instantiate("g4", {"alphas": [0, 1], "ms": [1, 1]}) == fields("Dx", "Dy", "e^(x)*Dy")


def test_invalid_parameters():
    with pytest.raises(InvalidParameter, match="r >= 3"):
        catalog.instantiate("g8", {"r": 2, "alpha": 1})
    with pytest.raises(InvalidParameter):
        catalog.instantiate("g8.a", {"r": 5, "alpha": 1, "s": 1})  # alpha = s excluded
    with pytest.raises(InvalidParameter):
        catalog.instantiate("g13.a2", {"r": 6})  # degenerates to a metric lift
    with pytest.raises(UnknownId):
        catalog.instantiate("g17")


def test_free_constants_stay_symbolic():
    gens = catalog.instantiate("g6.m")
    assert gens[3] == parse_field("y^2*Dy + 2*C*y*Du")
    assert catalog.free_constants("g6.m") == ["C"]
    assert catalog.instantiate("g6.m", {"C": 3})[2] == parse_field("y*Dy + 3*Du")


def test_g8_metric_constant_b_only_at_resonance():
    assert catalog.free_constants("g8.m", {"r": 5, "alpha": 2}) == ["A", "B"]
    assert catalog.free_constants("g8.m", {"r": 5, "alpha": "1/2"}) == ["A"]


def test_g12_affine_lifts_swap():
    a1 = catalog.instantiate("g12.a1")
    a2 = catalog.instantiate("g12.a2")
    assert sorted(map(str, (X.swap_xy() for X in a1))) == sorted(map(str, a2))


def test_instance_grammar_round_trip():
    for text in ("g8[r=5,alpha=2]", "g4[alphas=0;1,ms=1;1]", "g6.a", "g16t", "g8[r=4,alpha=1/2]", "g4[alphas=i,ms=2]"):
        eid, params = parse_instance(text)
        assert format_instance(eid, params) == text
    for eid, p in enumerate_instances():
        assert parse_instance(format_instance(eid, p)) == (eid, p)


def test_instance_grammar_errors():
    for bad in ("g8[r]", "g8[r=x]", "G8", "g8[r=5"):
        with pytest.raises((ParseError, UnknownId)):
            parse_instance(bad)


def test_grid_examples():
    small = enumerate_instances(parse_grid("r_max=4"))
    assert ("g6", {}) in small and ("g6.a", {}) in small
    assert not any(eid.startswith("g14") for eid, _ in small)
    assert ("g13.m2", {"r": 5}) in enumerate_instances(parse_grid("r_max=5"))


def test_default_grid_and_override(monkeypatch):
    assert len(enumerate_instances()) == 252
    monkeypatch.setenv("LIFTLAB_GRID", "r_max=4,r_span=0")
    assert catalog.default_grid() == TestGrid(r_max=4, r_span=0)
    assert len(enumerate_instances()) < 252


def test_enumeration_is_deterministic():
    assert enumerate_instances() == enumerate_instances()


def test_each_lift_has_valid_base_instance():
    for eid, p in enumerate_instances():
        e = catalog.get_entry(eid)
        if e.is_lift:
            lift = catalog.instantiate(eid, p)
            base = catalog.instantiate(e.base_id, catalog.base_params(eid, p))
            assert len(lift) == len(base)
            proj = [project(X).coordinate_vector() for X in lift]
            assert rank(proj) == rank(proj + [X.coordinate_vector() for X in base]) == len(base)


def test_module_doctest():
    import doctest

    assert doctest.testmod(catalog).failed == 0
