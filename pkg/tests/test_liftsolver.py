import pytest

from liftlab import catalog
from liftlab.cohomology import default_space
from liftlab.errors import NotALift, OutsideRing, TruncationExhausted
from liftlab.liealg import check_lift, classify_lift_type, structure_constants
from liftlab.liftsolver import (
    ansatz_witness,
    metric_witness,
    normalize_lift,
    normalize_lift_maps,
    solve_ansatz_lifts,
    solve_lifts,
    solve_metric_lifts,
)
from liftlab.vfield import parse_field, pushforward


def alg_of(eid, params=None):
    return structure_constants(catalog.instantiate(eid, params or {}))


def lifted(*texts):
    return [parse_field(t, True) for t in texts]


G6 = alg_of("g6")


def assert_sound(result):
    for br in result.branches:
        hat = structure_constants(br.generators)
        check_lift(hat, result.base)
        assert hat.c_tensor() == result.base.c_tensor()


# -- normalization ----------------------------------------------------------------


def test_normalize_translation():
    hat, maps = normalize_lift_maps(lifted("Dx + Du", "Dy"))
    assert hat == lifted("Dx", "Dy")
    assert len(maps) == 1 and str(maps[0].U) == "x"


def test_normalize_already_normal():
    gens = lifted("Dx", "Dy", "y*Dy + Du")
    assert normalize_lift(gens) == gens


def test_normalize_keeps_other_generators_consistent():
    gens = lifted("Dx + y*Du", "Dy + x*Du", "y*Dy + y*x*Du")
    hat, maps = normalize_lift_maps(gens)
    assert hat[:2] == lifted("Dx", "Dy")
    moved = gens
    for m in maps:
        moved = [pushforward(X, m) for X in moved]
    assert moved == hat


def test_normalize_affine_integrating_factor():
    hat, maps = normalize_lift_maps(lifted("Dx + u*Du", "Dy"), cap="affine")
    assert hat == lifted("Dx", "Dy")
    assert str(maps[0].A) == "e^(x)"


@pytest.mark.parametrize("beta", ["x*y", "y"])
def test_normalize_affine_outside_ring(beta):
    with pytest.raises(OutsideRing):
        normalize_lift(lifted(f"Dx + {beta}*u*Du", "Dy"), cap="affine")


def test_normalize_requires_pair():
    with pytest.raises(NotALift):
        normalize_lift(lifted("y*Dy", "Dy"))


# -- metric -------------------------------------------------------------------------


def test_g6_metric_family():
    res = solve_metric_lifts(G6)
    family = res.branches[0]
    assert family.free == ["K"]
    assert family.tag.kind == "metric" and family.transitive
    wit = metric_witness(G6, catalog.instantiate("g6.m"), ["C"], res)
    assert wit.verified
    assert_sound(res)


def test_g10_metric_two_parameters():
    base = alg_of("g10", {"r": 5})
    res = solve_metric_lifts(base)
    assert res.branches[0].free == ["K_1", "K_2"]
    assert metric_witness(base, catalog.instantiate("g10.m", {"r": 5}), ["A", "B"], res).verified


def test_g4_metric_family_dimension():
    p = {"alphas": [0, 1], "ms": [1, 1]}
    base = alg_of("g4", p)
    res = solve_metric_lifts(base)
    assert len(res.branches[0].free) == 3 - 2
    consts = catalog.free_constants("g4.m", p)
    assert metric_witness(base, catalog.instantiate("g4.m", p), consts, res).verified


def test_metric_without_cohomology():
    res = solve_metric_lifts(alg_of("g15t"))
    assert res.branches == []
    assert res.notes


# -- affine and projective ---------------------------------------------------------------


def test_g6_affine_single_branch():
    res = solve_ansatz_lifts(G6, "affine")
    assert len(res.branches) == 1
    br = res.branches[0]
    assert br.tag.kind == "affine" and br.transitive
    expected = lifted("Dx", "Dy", "y*Dy - u*Du", "y^2*Dy + (1 - 2*y*u)*Du")
    wit = ansatz_witness(res, expected)
    assert wit is not None and wit.verified
    assert ansatz_witness(res, catalog.instantiate("g6.a")).verified
    assert_sound(res)


def test_g6_projective_pruned():
    res = solve_ansatz_lifts(G6, "projective")
    assert res.branches == []
    assert any("solvable" in n for n in res.notes)


def test_g3_projective_matches_catalog():
    base = alg_of("g3")
    res = solve_ansatz_lifts(base, "projective")
    assert res.branches and all(b.tag.kind == "projective" for b in res.branches)
    wit = ansatz_witness(res, lifted("Dx", "Dy", "x*Dy + Du", "x*Dx - y*Dy - 2*u*Du", "y*Dx - u^2*Du"))
    assert wit is not None and wit.verified
    assert_sound(res)


def test_affine_witness_rejects_metric_lift():
    res = solve_ansatz_lifts(G6, "affine")
    wit = ansatz_witness(res, catalog.instantiate("g6.m"), ["C"])
    assert wit is None or not wit.verified


def test_truncation_exhausted_on_explicit_window():
    base = alg_of("g5", {"alphas": [1, "i"], "ms": [1, 1]})
    with pytest.raises(TruncationExhausted):
        solve_ansatz_lifts(base, "affine", default_space(base))
    # the default path retries with decaying exponentials
    assert solve_ansatz_lifts(base, "affine").branches


def test_solve_lifts_dispatch_and_report():
    rep = solve_lifts(G6, "affine").report()
    assert rep["cap"] == "affine" and rep["truncation"] == {"D": 5, "F": 2}
    (br,) = rep["branches"]
    assert br["type"] == "affine" and br["transitive"] is True
    assert [parse_field(t, True) for t in br["generators"]]
    with pytest.raises(ValueError):
        solve_ansatz_lifts(G6, "metric")


def test_branch_tags_match_classifier():
    for eid in ("g13", "g14"):
        base = alg_of(eid, {"r": 6})
        res = solve_ansatz_lifts(base, "affine")
        assert res.branches
        for br in res.branches:
            assert classify_lift_type(structure_constants(br.generators), base).kind == br.tag.kind == "affine"
