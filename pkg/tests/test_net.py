"""Coloured nets: incidence, flows, marking classes, sheaf axioms."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from petrisheaf.net import (
    ColouredNet,
    NetError,
    basic_covers,
    place_transition_net,
    verify_binding_cosheaf,
    verify_flow_gluing,
    verify_token_sheaf,
)
from petrisheaf.topology import PetriSpace

from fixtures import (
    A1,
    TAU1,
    TAU2,
    TAU3,
    U1,
    X_COLUMNS,
    X_PLACES,
    X_TRANSITIONS,
    x_net,
    y_net,
)


# ---------------------------------------------------------------------------
# construction and incidence


def test_incidence_matrix_matches_columns():
    net = x_net()
    mat = net.incidence_matrix()
    assert mat.row_labels == tuple((p, p) for p in X_PLACES)
    assert mat.col_labels == tuple((t, t) for t in X_TRANSITIONS)
    for j, t in enumerate(X_TRANSITIONS):
        assert tuple(mat.entries[i][j] for i in range(4)) == X_COLUMNS[t]


def test_target_net_weights():
    net = y_net()
    mat = net.incidence_matrix(kind="minus")
    assert mat.entries == ((2, 2),)
    assert net.incidence_matrix(kind="difference").entries == ((0, 0),)


def test_strict_support_must_match_adjacency():
    space = PetriSpace(
        [("p", "place"), ("t", "transition")], [("p", "t")]
    )
    with pytest.raises(NetError):
        # declared adjacency but no weight anywhere
        ColouredNet(space, {"t": ("t",)}, {"p": ("p",)}, {}, {})
    lonely = PetriSpace([("p", "place"), ("t", "transition")], [])
    with pytest.raises(NetError):
        # weight without adjacency
        ColouredNet(
            lonely, {"t": ("t",)}, {"p": ("p",)}, {("t", "t", "p", "p"): 1}, {}
        )
    # both are fine in relaxed mode
    ColouredNet(
        lonely,
        {"t": ("t",)},
        {"p": ("p",)},
        {("t", "t", "p", "p"): 1},
        {},
        strict=False,
    )


def test_degenerate_nets_rejected():
    with pytest.raises(NetError):
        place_transition_net("bad", ("p",), (), {}, {})
    with pytest.raises(NetError):
        ColouredNet(
            PetriSpace([("p", "place"), ("t", "transition")], [("p", "t")]),
            {"t": ()},
            {"p": ("p",)},
            {("t", "t", "p", "p"): 1},
            {},
        )


# ---------------------------------------------------------------------------
# flows


def test_flows_on_closed_fibre():
    net = x_net()
    flows = net.flows(A1)
    assert flows.axis == (("t1", "t1"), ("t2", "t2"), ("t3", "t3"), ("t4", "t4"))
    assert flows.rank == 2
    assert flows.contains((1, 0, 1, 0))
    assert flows.contains((1, 1, 0, 1))
    assert not flows.contains((1, 0, 0, 0))
    assert flows.same_module([(1, 0, 1, 0), (1, 1, 0, 1)])


def test_flows_on_whole_net():
    net = x_net()
    flows = net.flows()
    assert flows.rank == 3
    for tau in (TAU1, TAU2, TAU3):
        assert flows.contains(tau)
    assert flows.same_module([TAU1, TAU2, TAU3])


def test_flows_need_closed_region():
    net = x_net()
    with pytest.raises(NetError):
        net.flows(U1 | {"t1"})  # t1 drags p1, p2 in


def test_restrict_flow_on_strict_net():
    net = x_net()
    assert net.restrict_flow(TAU2, net.space.nodes, A1) == [1, 1, 0, 1]
    # restriction to a transition point region is trivially a flow
    assert net.restrict_flow(TAU1, net.space.nodes, {"t5"}) == [0]


def test_restrict_flow_can_fail_on_relaxed_net():
    space = PetriSpace(
        [("q1", "place"), ("s1", "transition"), ("s2", "transition")],
        [("q1", "s1")],
    )
    net = ColouredNet(
        space,
        {"s1": ("s1",), "s2": ("s2",)},
        {"q1": ("q1",)},
        {("s2", "s2", "q1", "q1"): 1},
        {("s1", "s1", "q1", "q1"): 1},
        strict=False,
    )
    flows = net.flows()
    assert flows.contains((1, 1))
    with pytest.raises(NetError):
        net.restrict_flow((1, 1), net.space.nodes, {"q1", "s1"})


# ---------------------------------------------------------------------------
# marking classes


def test_marking_classes_on_open_region():
    net = x_net()
    classes = net.marking_classes(U1)
    assert classes.axis == (("p3", "p3"), ("p4", "p4"))
    assert classes.rank == 1
    assert classes.invariant_factors == (1,)
    assert classes.class_equal((1, 0), (0, 1))
    assert not classes.class_equal((1, 0), (0, 2))


def test_marking_classes_on_whole_net():
    net = x_net()
    classes = net.marking_classes()
    assert classes.rank == 1
    assert classes.invariant_factors == (1, 1, 1)
    assert classes.torsion == ()
    e = lambda i: tuple(1 if j == i else 0 for j in range(4))
    # all four tokens fall in one generating class
    assert classes.class_equal(e(0), e(1))
    assert classes.class_equal(e(1), e(2))
    assert classes.class_equal(e(2), e(3))
    assert not classes.is_zero_class(e(2))


def test_marking_classes_need_open_region():
    net = x_net()
    with pytest.raises(NetError):
        net.marking_classes(A1)


def test_class_extension():
    net = x_net()
    assert net.extend_class([5, 7], U1, net.space.nodes) == [0, 0, 5, 7]


# ---------------------------------------------------------------------------
# subnets


def test_subnet_of_closed_region():
    net = x_net()
    sub = net.subnet(A1)
    assert sub.space.places == ("p1", "p2")
    assert sub.space.transitions == ("t1", "t2", "t3", "t4")
    assert sub.strict
    mat = sub.incidence_matrix()
    assert mat.entries == ((-1, 1, 1, 0), (-1, 0, 1, 1))


# ---------------------------------------------------------------------------
# sheaf / cosheaf axioms


def test_token_sheaf_axioms_on_running_example():
    net = x_net()
    assert verify_token_sheaf(net).ok
    for cover in basic_covers(net.space, kind="open"):
        assert verify_token_sheaf(net, covering=cover).ok


def test_binding_cosheaf_axioms_on_running_example():
    net = x_net()
    assert verify_binding_cosheaf(net).ok
    covers = basic_covers(net.space, kind="closed")
    for cover in covers[:16]:
        assert verify_binding_cosheaf(net, covering=cover).ok


def test_flow_gluing_on_running_example():
    net = x_net()
    assert verify_flow_gluing(net).ok
    report = verify_flow_gluing(net, A1, [net.space.basic_closed(p) for p in ("p1", "p2")])
    assert report.ok


def test_corrupted_restriction_fails_sheaf_axioms():
    net = x_net()

    def corrupt(vec, big, small):
        out = net.restrict_token_section(vec, big, small)
        if out:
            out[0] = 0  # drop information on the first token slot
        return out

    report = verify_token_sheaf(net, restrict=corrupt)
    assert not report.ok
    assert report.failures


def test_corrupted_extension_fails_cosheaf_axioms():
    net = x_net()

    def corrupt(vec, small, big):
        out = net.extend_binding_section(vec, small, big)
        if len(small) == 1 and out:
            out[0] += sum(vec)  # leak into an unrelated slot
        return out

    report = verify_binding_cosheaf(net, extend=corrupt)
    assert not report.ok


def test_bad_cover_reported():
    net = x_net()
    report = verify_token_sheaf(net, covering=[net.space.basic_open("t1")])
    assert not report.ok
    assert any("exhaust" in f for f in report.failures)


# ---------------------------------------------------------------------------
# random strict nets


@st.composite
def strict_nets(draw, max_places=4, max_transitions=4):
    np_ = draw(st.integers(1, max_places))
    nt = draw(st.integers(1, max_transitions))
    places = [f"q{i}" for i in range(np_)]
    transitions = [f"s{i}" for i in range(nt)]
    consume = {}
    produce = {}
    for t in transitions:
        consume[t] = {}
        produce[t] = {}
        for p in places:
            kind = draw(st.integers(0, 3))
            w = draw(st.integers(1, 3))
            if kind == 1:
                consume[t][p] = w
            elif kind == 2:
                produce[t][p] = w
            elif kind == 3:
                consume[t][p] = w
                produce[t][p] = draw(st.integers(1, 3))
    return place_transition_net("rand", places, transitions, consume, produce)


@given(strict_nets())
@settings(max_examples=40, deadline=None)
def test_axioms_hold_on_random_strict_nets(net):
    assert verify_token_sheaf(net).ok
    assert verify_binding_cosheaf(net).ok
    assert verify_flow_gluing(net).ok


@given(strict_nets())
@settings(max_examples=40, deadline=None)
def test_flow_restriction_total_on_strict_nets(net):
    flows = net.flows()
    for x in net.space.nodes:
        region = net.space.basic_closed(x)
        for b in flows.basis:
            out = net.restrict_flow(list(b), net.space.nodes, region)
            assert net.flows(region).contains(out)


@given(strict_nets())
@settings(max_examples=30, deadline=None)
def test_flows_agree_with_adjacent_only_form_on_strict_nets(net):
    # on a strict net, summing over all pairs in the region equals summing
    # over adjacent pairs only, because off-adjacency weights vanish
    region = net.space.nodes
    axis = net.binding_axis(region)
    rows = []
    for p, c in net.token_axis(region):
        row = []
        for t, b in axis:
            row.append(net.w(t, b, p, c) if net.space.adjacent(p, t) else 0)
        rows.append(row)
    from petrisheaf import intlinalg as la

    assert la.kernel_lattice(rows, len(axis)) == net.flows(region).module
