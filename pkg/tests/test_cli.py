import io
import json
import subprocess
import sys

import pytest

from liftlab import catalog, cli
from liftlab.vfield import parse_field


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, _ = run("--json", *argv)
    return code, json.loads(out)


def test_list():
    code, rep = run_json("list")
    assert code == 0
    listed = [e["id"] for e in rep["entries"]]
    assert listed == catalog.ids()


def test_show_round_trips():
    code, rep = run_json("show", "g8[r=5,alpha=2]")
    assert code == 0
    gens = [parse_field(t) for t in rep["generators"]]
    assert gens == catalog.instantiate("g8", {"r": 5, "alpha": 2})


def test_verify_affine_lift():
    code, out, _ = run("verify", "g6.a")
    assert code == 0 and out.startswith("ok")
    code, rep = run_json("verify", "g6.a")
    assert rep["ok"] and rep["checks"]["type"] == "affine"
    assert all(rep["checks"][k] for k in ("closure", "projection", "kernel"))


def test_verify_failure_exit_1(monkeypatch):
    real = catalog.instantiate

    def broken(eid, params=None):
        gens = real(eid, params)
        if eid == "g6.a":
            gens[2] = parse_field("y*Dy + u*Du", True)
        return gens

    monkeypatch.setattr(catalog, "instantiate", broken)
    code, rep = run_json("verify", "g6.a")
    assert code == 1 and not rep["ok"]
    assert "error" in rep


def test_verify_failure_reports_bracket(monkeypatch):
    real = catalog.instantiate

    def open_set(eid, params=None):
        if eid == "g6":
            return [parse_field(t) for t in ("Dx", "Dy", "y*Dy", "y^3*Dy")]
        return real(eid, params)

    monkeypatch.setattr(catalog, "instantiate", open_set)
    code, rep = run_json("verify", "g6")
    assert code == 1
    parse_field(rep["bracket"])


def test_cohomology_g16():
    code, rep = run_json("cohomology", "g16")
    assert code == 0
    assert rep["dim_H1"] == 1
    assert (rep["D"], rep["F"]) == (5, 2)
    code, out, _ = run("cohomology", "g16")
    assert "dim H1 = 1 at truncation (D=5, F=2)" in out


def test_cohomology_window_options():
    code, rep = run_json("cohomology", "g16", "--degree", "7", "--freq", "3")
    assert code == 0 and (rep["D"], rep["F"], rep["dim_H1"]) == (7, 3, 1)


def test_solve_projective_pruned():
    code, rep = run_json("solve", "g6", "--cap", "projective")
    assert code == 0
    assert rep["branches"] == []
    assert any("pruned" in n for n in rep["notes"])


def test_solve_against_catalog():
    code, rep = run_json("solve", "g6", "--cap", "affine", "--against", "g6.a")
    assert code == 0
    assert rep["equivalence"]["verified"] is True
    for br in rep["branches"]:
        for g in br["generators"]:
            parse_field(g, True)


def test_solve_metric_against_catalog():
    code, rep = run_json("solve", "g10[r=5]", "--cap", "metric", "--against", "g10.m[r=5]")
    assert code == 0 and rep["equivalence"]["verified"]


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["verify", "g99"],
        ["verify", "g8[r=2,alpha=1]"],
        ["solve", "g6"],
        ["solve", "g6", "--cap", "quadratic"],
        ["solve", "g6.a", "--cap", "affine"],
        ["cohomology", "g6.m"],
        ["cohomology", "g6", "--degree", "0"],
        ["verify-all", "--grid", "r_max"],
    ],
)
def test_usage_errors(argv):
    code, out, err = run(*argv)
    assert code == 2
    assert err and not out


def test_verify_all_small_grid():
    code, rep = run_json("verify-all", "--grid", "r_max=4,r_span=0")
    assert code == 0
    assert rep["ok"] and rep["failures"] == 0
    assert rep["count"] == len(rep["results"]) > 0


def test_verify_all_only():
    code, rep = run_json("verify-all", "--only", "g6,g6.a,g6.m")
    assert code == 0
    assert [r["id"] for r in rep["results"]] == ["g6", "g6.a", "g6.m"]


def test_grid_env_override(monkeypatch):
    monkeypatch.setenv("LIFTLAB_GRID", "r_max=4,r_span=0")
    _, small = run_json("verify-all")
    monkeypatch.delenv("LIFTLAB_GRID")
    _, full = run_json("verify-all", "--only", ",".join(catalog.ids()))
    assert small["count"] < full["count"]


def test_json_is_deterministic():
    argv = ["--json", "solve", "g13[r=6]", "--cap", "affine"]
    assert run(*argv)[1] == run(*argv)[1]
    assert run("--json", "cohomology", "g16t")[1] == run("--json", "cohomology", "g16t")[1]


def test_json_generators_reparse():
    for argv in (["show", "g14.a1[r=6]"], ["solve", "g3", "--cap", "projective"], ["solve", "g16", "--cap", "metric"]):
        _, rep = run_json(*argv)
        texts = rep.get("generators") or [g for b in rep["branches"] for g in b["generators"]]
        for t in texts:
            X = parse_field(t)
            assert parse_field(str(X)) == X


def test_timings_opt_in():
    _, rep = run_json("solve", "g6", "--cap", "affine")
    assert "timings" not in rep
    code, out, _ = run("--json", "--timings", "solve", "g6", "--cap", "affine")
    assert "timings" in json.loads(out)


def test_version():
    code, out, _ = run("--version")
    assert code == 0 and out.startswith("liftlab 0.1.0")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "liftlab", "--json", "verify", "g6.a"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["ok"] is True
