"""Command line surface: spec'd outputs, exit codes, JSON determinism."""

import json
import subprocess
import sys

import pytest

from petrisheaf import intlinalg as la
from petrisheaf.cli import main
from petrisheaf.formats import (
    parse_morphism,
    parse_net,
    serialize_morphism,
    serialize_net,
    serialize_winskel,
)
from petrisheaf.morphism import identity_morphism, morphisms_equal
from petrisheaf.net import place_transition_net
from petrisheaf.product import kronecker

from fixtures import (
    TAU1,
    TAU2,
    fold_morphism,
    unfolding_morphism,
    winskel_data,
    winskel_nets,
    x_net,
    y_net,
)


@pytest.fixture()
def workdir(tmp_path):
    fold = fold_morphism()
    unfold = unfolding_morphism()
    (tmp_path / "runX.pnet").write_text(serialize_net(fold.source))
    (tmp_path / "runY.pnet").write_text(
        serialize_net(fold.target, marking={("u", "c"): 2})
    )
    (tmp_path / "unfoldY.pnet").write_text(
        serialize_net(unfold.source, marking={("v", "v"): 2})
    )
    (tmp_path / "fold.pmor").write_text(
        serialize_morphism(fold, "runX.pnet", "runY.pnet")
    )
    (tmp_path / "unfold.pmor").write_text(
        serialize_morphism(unfold, "unfoldY.pnet", "runY.pnet")
    )
    (tmp_path / "idY.pmor").write_text(
        serialize_morphism(identity_morphism(fold.target), "runY.pnet", "runY.pnet")
    )
    grow = place_transition_net(
        "grow", ["h"], ["g"], consume={"g": {"h": 1}}, produce={"g": {"h": 2}}
    )
    (tmp_path / "grow.pnet").write_text(serialize_net(grow, marking={("h", "h"): 1}))
    wsrc, wtgt = winskel_nets()
    (tmp_path / "wsrc.pnet").write_text(serialize_net(wsrc))
    (tmp_path / "wtgt.pnet").write_text(serialize_net(wtgt))
    (tmp_path / "loop.pwin").write_text(
        serialize_winskel(winskel_data(), "wsrc.pnet", "wtgt.pnet")
    )
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out


def test_show_reports_topology_and_marking(workdir, capsys):
    code, out = run(capsys, "show", workdir / "runY.pnet")
    assert code == 0
    assert "net runY [strict, ring Z]" in out
    assert "basic open a = {u,a}" in out
    assert "basic closed u = {u,a}" in out
    assert "marking: u.c=2" in out


def test_flows_over_the_folded_fibre(workdir, capsys):
    code, out = run(
        capsys,
        "flows", workdir / "runX.pnet",
        "--region", "fibre:a", "--via", workdir / "fold.pmor", "--json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["rank"] == 2
    assert payload["axis"] == ["t1.t1", "t2.t2", "t3.t3", "t4.t4"]
    spanned = la.Lattice(4, [tuple(v) for v in payload["basis"]])
    assert spanned == la.Lattice(4, [TAU1[:4], TAU2[:4]])


def test_flows_over_the_whole_net(workdir, capsys):
    code, out = run(capsys, "flows", workdir / "runX.pnet", "--json")
    payload = json.loads(out)
    assert code == 0 and payload["rank"] == 3
    assert [0, 0, 0, 0, 1, 1] in payload["basis"]


def test_flows_hilbert_generators(workdir, capsys):
    code, out = run(
        capsys,
        "flows", workdir / "runX.pnet",
        "--region", "fibre:a", "--via", workdir / "fold.pmor",
        "--ring", "n", "--json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["generators"] == [[1, 0, 1, 0], [1, 1, 0, 1]]


def test_classes_identify_the_fibre_units(workdir, capsys):
    code, out = run(
        capsys,
        "classes", workdir / "runX.pnet",
        "--region", "fibre:u", "--via", workdir / "fold.pmor", "--json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["rank"] == 1
    reps = payload["classes"]
    assert reps["p3.p3"] == reps["p4.p4"]
    assert any(reps["p3.p3"])


def test_classes_identify_all_units_over_the_whole_net(workdir, capsys):
    code, out = run(capsys, "classes", workdir / "runX.pnet", "--json")
    payload = json.loads(out)
    assert code == 0 and payload["rank"] == 1
    reps = list(payload["classes"].values())
    assert all(r == reps[0] for r in reps) and any(reps[0])


def test_classes_reject_ring_n(workdir, capsys):
    code, _ = run(capsys, "classes", workdir / "runX.pnet", "--ring", "n")
    assert code == 2


def test_axioms_sweep_is_exact(workdir, capsys):
    code, out = run(
        capsys, "axioms", workdir / "runX.pnet", "--random", "2", "--seed", "3"
    )
    assert code == 0
    assert "all exact" in out
    assert "random nets: 2 swept" in out


def test_check_morphism_prints_the_classification(workdir, capsys):
    code, out = run(capsys, "check-morphism", workdir / "fold.pmor")
    assert code == 0
    assert "abstraction: yes; embedding: no; discrete: no" in out
    assert "incidence-compat: ok" in out


def test_check_morphism_json_shape(workdir, capsys):
    code, out = run(capsys, "check-morphism", workdir / "fold.pmor", "--json")
    payload = json.loads(out)
    assert code == 0 and payload["status"] == "ok"
    assert [c["clause"] for c in payload["clauses"]] == [
        "continuity",
        "flow-basis",
        "flow-map-extends",
        "mark-map-defined",
        "class-transport",
        "signedness",
        "incidence-compat",
    ]
    assert payload["classification"]["abstraction"] is True
    assert payload["classification"]["discrete"] is False


def test_compose_with_the_identity_returns_the_morphism(workdir, capsys):
    code, out = run(
        capsys, "compose", workdir / "unfold.pmor", workdir / "idY.pmor"
    )
    assert code == 0
    doc = parse_morphism(out)
    unfold = unfolding_morphism()
    again = doc.to_morphism(unfold.source, unfold.target)
    assert morphisms_equal(again, unfold)


def test_compose_rejects_mismatched_middles(workdir, capsys):
    code, _ = run(capsys, "compose", workdir / "unfold.pmor", workdir / "fold.pmor")
    assert code == 2


def test_product_marked_output_round_trips(workdir, capsys):
    code, out = run(
        capsys, "product", workdir / "runY.pnet", workdir / "unfoldY.pnet", "--marked"
    )
    assert code == 0
    doc = parse_net(out)
    assert not doc.strict and doc.ring == "Q"
    assert doc.marking == {("(u,v)", "1:c"): 2, ("(u,v)", "2:v"): 2}
    built = doc.to_net()
    expected = kronecker(y_net(), unfolding_morphism().source).net
    assert built.space.nodes == expected.space.nodes
    assert built.bindings == expected.bindings
    assert built.tokens == expected.tokens


def test_product_marked_needs_both_markings(workdir, capsys):
    code, _ = run(
        capsys, "product", workdir / "runX.pnet", workdir / "runY.pnet", "--marked"
    )
    assert code == 2


def test_check_product_reach_passes_on_the_loop_pair(workdir, capsys):
    code, out = run(
        capsys,
        "check-product-reach", workdir / "runY.pnet", workdir / "unfoldY.pnet",
        "--depth", "4",
    )
    assert code == 0
    assert "status: ok" in out


def test_check_product_reach_budget_is_inconclusive(workdir, capsys):
    code, out = run(
        capsys,
        "check-product-reach", workdir / "grow.pnet", workdir / "grow.pnet",
        "--depth", "3", "--max-states", "3",
    )
    assert code == 3
    assert "status: inconclusive" in out
    assert "budget" in out


def test_fibre_product_of_the_unfoldings(workdir, capsys):
    code, out = run(
        capsys, "fibre-product", workdir / "unfold.pmor", workdir / "unfold.pmor"
    )
    assert code == 0
    assert "(beta1,beta1)" in out and "(beta2,beta2)" in out
    assert "(beta1,beta2)" not in out
    doc = parse_net(out)
    assert doc.to_net().space.places == ("(v,v)",)


def test_fibre_product_needs_discrete_legs(workdir, capsys):
    code, _ = run(capsys, "fibre-product", workdir / "fold.pmor", workdir / "fold.pmor")
    assert code == 2


def test_diagonal_verifies_on_the_target(workdir, capsys):
    code, out = run(capsys, "diagonal", workdir / "runY.pnet")
    assert code == 0
    assert "# embedding into the square: ok" in out
    assert parse_net(out).to_net().space.nodes == ("(u,u)", "(a,a)")


def test_diagonal_names_the_failing_clause(workdir, capsys):
    code, out = run(capsys, "diagonal", workdir / "runX.pnet")
    assert code == 1
    assert "# embedding into the square: failed" in out
    assert "# failing clause: class-transport" in out


def test_simulate_prints_the_trace(workdir, capsys):
    code, out = run(
        capsys, "simulate", workdir / "runY.pnet", "--sequence", "a.b1,a.b2"
    )
    assert code == 0
    assert "step 2 (a.b2): u.c=2" in out
    assert "final: u.c=2" in out


def test_simulate_reports_disabled_steps(workdir, capsys):
    code, out = run(
        capsys,
        "simulate", workdir / "runY.pnet",
        "--marking", "u.c=1", "--sequence", "a.b1",
    )
    assert code == 1
    assert "step 1 (a.b1) is not enabled" in out


def test_reach_counts_the_loop(workdir, capsys):
    code, out = run(
        capsys,
        "reach", workdir / "runY.pnet", "--marking", "u.c=2", "--depth", "5",
    )
    assert code == 0
    assert out.startswith("1 marking\n")


def test_reach_budget_exhaustion_is_inconclusive(workdir, capsys):
    code, out = run(capsys, "reach", workdir / "grow.pnet", "--max-states", "3")
    assert code == 3
    assert "state budget exhausted" in out


def test_map_behaviour_transports_a_saturated_run(workdir, capsys):
    code, out = run(
        capsys,
        "map-behaviour", workdir / "fold.pmor",
        "--marking", "p1.p1=1 p2.p2=1", "--sequence", "t1,t3",
    )
    assert code == 0
    assert "image sequence: a[1*b1]" in out
    assert "target post: u.c=2" in out


def test_map_behaviour_rejects_unsaturated_runs(workdir, capsys):
    code, out = run(
        capsys,
        "map-behaviour", workdir / "fold.pmor",
        "--marking", "p1.p1=1 p2.p2=1", "--sequence", "t1",
    )
    assert code == 1
    assert "not saturated" in out


def test_winskel_conversion_summary(workdir, capsys):
    code, out = run(capsys, "winskel", workdir / "loop.pwin")
    assert code == 0
    assert "closed in wsrc: yes" in out
    assert "place-modification: yes" in out
    assert "discrete: yes" in out


def test_json_reports_are_byte_deterministic(workdir, capsys):
    _, first = run(capsys, "flows", workdir / "runX.pnet", "--json")
    _, second = run(capsys, "flows", workdir / "runX.pnet", "--json")
    assert first == second
    _, third = run(capsys, "check-morphism", workdir / "fold.pmor", "--json")
    _, fourth = run(capsys, "check-morphism", workdir / "fold.pmor", "--json")
    assert third == fourth


USAGE_CASES = [
    lambda d: ("show", d / "missing.pnet"),
    lambda d: ("flows", d / "runX.pnet", "--region", "fibre:a"),
    lambda d: ("flows", d / "runX.pnet", "--region", "nodes:zz"),
    lambda d: ("reach", d / "runX.pnet"),
    lambda d: ("simulate", d / "runY.pnet", "--marking", "u.c", "--sequence", "a.b1"),
    lambda d: ("simulate", d / "runY.pnet", "--marking", "u.c=2", "--sequence", "a"),
    lambda d: ("classes", d / "runX.pnet", "--region", "fibre:u"),
]


@pytest.mark.parametrize("case", USAGE_CASES)
def test_usage_errors_exit_2(workdir, capsys, case):
    code, _ = run(capsys, *case(workdir))
    assert code == 2


def test_unknown_command_exits_2(workdir, capsys):
    assert main(["no-such-command"]) == 2
    capsys.readouterr()


def test_module_entry_point_runs(workdir):
    proc = subprocess.run(
        [sys.executable, "-m", "petrisheaf.cli", "show", str(workdir / "runY.pnet")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "net runY" in proc.stdout
