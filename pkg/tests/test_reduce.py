from fractions import Fraction

import pytest
from hypothesis import assume, given

from app.core.exceptions import GenusMismatch, InvalidGenus
from app.models.models import CorrectionLedger, Edge
from app.services.families import bouquet, example3, ladder
from app.services.graph import build_graph, genus, is_connected, total_length
from app.services.invariants import compute_all, core_invariants
from app.services.laplacian import solve_system
from app.services.reduce import apply_corrections, bouquet_invariants, \
    eliminate_valence2, is_adequate, reduce_to_adequate, strip_self_loops, \
    subdivide_parallel_edges, subdivide_self_loops
from tests.strategies import pm_graphs


def test_series_merge():
    graph = build_graph([("p", 1), "s", ("t", 1)],
                        [("p", "s", 2), ("s", "t", 5)])
    merged = eliminate_valence2(graph)
    assert merged.vertex_ids == ["p", "t"]
    assert [(e.id, e.u, e.v, e.length) for e in merged.edges] == \
        [("e0+e1", "p", "t", 7)]


def test_k4_has_nothing_to_eliminate(k4):
    assert eliminate_valence2(k4) == k4
    assert subdivide_parallel_edges(k4) == k4
    core, ledger = strip_self_loops(k4)
    assert core == k4 and ledger.is_empty


def test_circle_keeps_one_vertex(triangle):
    reduced = eliminate_valence2(triangle)
    assert len(reduced.vertices) == 1
    assert len(reduced.edges) == 1 and reduced.edges[0].is_loop
    assert reduced.edges[0].length == 3


def test_marked_point_on_circle_is_kept():
    graph = build_graph([("v0", 1), "v1", "v2"],
                        [("v0", "v1", 1), ("v1", "v2", 1), ("v2", "v0", 1)])
    reduced = eliminate_valence2(graph)
    assert reduced.vertex_ids == ["v0"]


def test_parallel_pair_split_at_midpoint():
    graph = build_graph(["p", "q"], [("p", "q", 2), ("p", "q", 3)])
    split = subdivide_parallel_edges(graph)
    assert [(e.u, e.v, e.length) for e in split.edges] == [
        ("p", "q", 2), ("p", "e1~m", Fraction(3, 2)),
        ("e1~m", "q", Fraction(3, 2))]
    assert split.vertex("e1~m").q == 0


def test_banana_graph():
    graph = build_graph(["p", "q"], [("p", "q", 1)] * 3)
    split = subdivide_parallel_edges(graph)
    assert (len(split.vertices), len(split.edges)) == (4, 5)
    assert total_length(split) == 3
    assert is_adequate(split)


def test_off_midpoint_split():
    graph = build_graph(["p", "q"], [("p", "q", 2), ("p", "q", 3)])
    split = subdivide_parallel_edges(graph, ratio=Fraction(1, 3))
    assert [e.length for e in split.edges] == [2, 1, 2]
    with pytest.raises(ValueError):
        subdivide_parallel_edges(graph, ratio=1)


def test_example3_loop_goes_to_ledger():
    graph = eliminate_valence2(example3(a=2))
    core, ledger = strip_self_loops(graph)
    assert ledger.loop_length_total == 6
    assert ledger.q_increments == {"v0": 1}
    assert ledger.removed_loops == 1
    assert core.vertex("v0").q == 2
    assert genus(core).gbar == genus(graph).gbar == 12


def test_two_loop_bouquet_is_flagged():
    core, ledger = strip_self_loops(bouquet([1, 2]))
    assert ledger.bouquet_flag
    assert ledger.loop_length_total == 3
    assert len(core.edges) == 2


def test_self_loop_subdivision():
    graph = subdivide_self_loops(bouquet([3]))
    assert (len(graph.vertices), len(graph.edges)) == (3, 3)
    assert all(e.length == 1 for e in graph.edges)
    assert is_adequate(graph)


def test_ladder_corners_are_merged():
    graph = ladder(4)
    assert is_adequate(graph)
    core, ledger = reduce_to_adequate(graph)
    assert ledger.is_empty
    assert is_adequate(core)
    assert "v0" not in core.vertex_ids
    assert total_length(core) == total_length(graph)



def test_generated_edge_ids_avoid_existing_ids():
    graph = build_graph(
        [("p", 1), ("q", 1), ("s", 1)],
        [Edge(id="a", u="p", v="q", length=1),
         Edge(id="b", u="p", v="q", length=2),
         Edge(id="b.1", u="q", v="s", length=3),
         Edge(id="c", u="s", v="p", length=4)])
    result = compute_all(graph, measures=True)
    ids = [e.id for e in result.core.edges]
    assert len(ids) == len(set(ids)) == 5
    assert "b.1" in ids
    assert result.canonical.total_mass() == 1
    assert result.admissible.total_mass() == 1


def test_merged_and_loop_ids_avoid_existing_ids():
    path = build_graph(
        [("p", 1), "s", ("t", 1), ("u", 1)],
        [Edge(id="x", u="p", v="s", length=1),
         Edge(id="y", u="s", v="t", length=1),
         Edge(id="x+y", u="t", v="u", length=1)])
    merged = eliminate_valence2(path)
    assert sorted(e.id for e in merged.edges) == ["x+y", "x+y1"]

    looped = build_graph(
        ["p"], [Edge(id="l", u="p", v="p", length=3),
                Edge(id="l.2", u="p", v="p", length=3)])
    split = subdivide_self_loops(looped)
    ids = [e.id for e in split.edges]
    assert len(ids) == len(set(ids)) == 6


@given(pm_graphs(max_vertices=6, parallel=True))
def test_split_point_does_not_change_invariants(graph):
    results = []
    for ratio in (Fraction(1, 2), Fraction(1, 3), Fraction(5, 7)):
        core, ledger = reduce_to_adequate(graph, ratio=ratio)
        assume(not ledger.bouquet_flag)
        results.append(apply_corrections(
            core_invariants(solve_system(core)), ledger))
    assert results[0] == results[1] == results[2]


@given(pm_graphs(loops=True, parallel=True))
def test_reduction_preserves_connectivity_genus_and_length(graph):
    for strategy in ("analytic", "subdivide"):
        core, ledger = reduce_to_adequate(graph, strategy)
        assert is_connected(core)
        assert genus(core).gbar == genus(graph).gbar
        assert total_length(core) + ledger.loop_length_total \
            == total_length(graph)
        if not ledger.bouquet_flag:
            assert is_adequate(core)


@pytest.mark.parametrize("length, gbar, expected", [
    (Fraction(5), 1, dict(tau=Fraction(5, 12), theta=0, phi=0, epsilon=0,
                          lambda_inv=Fraction(5, 12), z=Fraction(5, 12))),
    (Fraction(2), 2, dict(tau=Fraction(1, 6), theta=0, phi=Fraction(1, 6),
                          epsilon=Fraction(1, 3), lambda_inv=Fraction(1, 5),
                          z=Fraction(1, 8))),
    (Fraction(3), 3, dict(tau=Fraction(1, 4), theta=0, phi=Fraction(1, 3),
                          epsilon=Fraction(2, 3), lambda_inv=Fraction(9, 28),
                          z=Fraction(5, 36))),
])
def test_bouquet_closed_forms(length, gbar, expected):
    result = bouquet_invariants(length, gbar)
    for name, value in expected.items():
        assert getattr(result, name) == value, name


def test_bouquet_requires_positive_genus():
    with pytest.raises(InvalidGenus):
        bouquet_invariants(Fraction(1), 0)


def test_empty_ledger_is_identity(k4_system):
    core = core_invariants(k4_system)
    assert apply_corrections(core, CorrectionLedger()) == core


def test_ledger_genus_must_match(k4_system):
    core = core_invariants(k4_system)
    ledger = CorrectionLedger(loop_length_total=Fraction(1),
                              q_increments={"v0": 1}, gbar=core.gbar + 1)
    with pytest.raises(GenusMismatch):
        apply_corrections(core, ledger)


def test_loop_correction_adds_length_over_twelve(k4_system):
    core = core_invariants(k4_system)
    ledger = CorrectionLedger(loop_length_total=Fraction(6),
                              q_increments={"v0": 1}, gbar=core.gbar)
    result = apply_corrections(core, ledger)
    assert result.tau == core.tau + Fraction(1, 2)
    assert result.theta == core.theta
    assert result.length == core.length + 6
    assert result.g == core.g + 1
