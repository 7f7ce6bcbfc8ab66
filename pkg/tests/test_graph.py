from fractions import Fraction

import pytest
from hypothesis import given

from app.core.exceptions import DisconnectedGraph, DuplicateVertexId, \
    EmptyGraph, NonEffectiveCanonicalDivisor, NonpositiveEdgeLength, \
    UnknownVertex
from app.models.models import Edge, PMGraph, Vertex
from app.services.families import example3, ladder
from app.services.graph import build_graph, canonical_weight, \
    canonical_weights, ensure_valid, genus, total_length, valences, validate
from tests.strategies import pm_graphs


def test_k4_is_valid_with_unit_weights(k4):
    outcome = validate(k4, require_effective=True)
    assert outcome.ok
    assert canonical_weights(k4) == {f"v{i}": 1 for i in range(4)}


def test_circle_loop_counts_twice():
    circle = build_graph(["v0"], [("v0", "v0", 2)])
    assert validate(circle, require_effective=True).ok
    assert valences(circle) == {"v0": 2}
    assert canonical_weight(circle, "v0") == 0


def test_leaves_make_canonical_divisor_non_effective():
    graph = build_graph(["p", "q"], [("p", "q", 1)])
    outcome = validate(graph, require_effective=True)
    assert [v.subject for v in outcome.of_kind("non_effective")] == ["p", "q"]
    assert validate(graph).ok
    with pytest.raises(NonEffectiveCanonicalDivisor) as info:
        ensure_valid(graph, require_effective=True)
    assert info.value.exit_code == 2


def test_nonpositive_length_reported():
    graph = build_graph(["p", "q"], [("p", "q", 0)])
    with pytest.raises(NonpositiveEdgeLength):
        ensure_valid(graph)


def test_disconnected_graph():
    graph = build_graph(["a", "b", "c", "d"], [("a", "b", 1), ("c", "d", 1)])
    outcome = validate(graph)
    assert outcome.of_kind("disconnected")
    with pytest.raises(DisconnectedGraph):
        ensure_valid(graph)


def test_duplicate_vertex_ids():
    graph = PMGraph(vertices=(Vertex(id="a"), Vertex(id="a")),
                    edges=(Edge(id="e0", u="a", v="a", length=1),))
    with pytest.raises(DuplicateVertexId):
        ensure_valid(graph)


def test_empty_graph():
    with pytest.raises(EmptyGraph):
        ensure_valid(PMGraph(vertices=(), edges=()))


def test_unknown_endpoint():
    graph = build_graph(["a"], [("a", "b", 1)])
    with pytest.raises(UnknownVertex):
        ensure_valid(graph)


def test_canonical_weight_unknown_vertex(k4):
    with pytest.raises(UnknownVertex):
        canonical_weight(k4, "nope")


@pytest.mark.parametrize("k", [0, 1, 2, 5])
def test_k4_genus_with_polarization(k):
    from app.services.families import complete_graph

    graph = complete_graph(4, [Fraction(1, 6)] * 6, q=k)
    data = genus(graph)
    assert (data.g, data.gbar, data.deg_k) == (3, 3 + 4 * k, 4 + 8 * k)
    assert canonical_weight(graph, "v2") == 1 + 2 * k


def test_ladder3_genus_and_length():
    graph = ladder(3, Fraction(2), Fraction(5))
    assert (len(graph.edges), len(graph.vertices)) == (7, 6)
    assert genus(graph).g == 2
    assert total_length(graph) == 4 * 2 + 3 * 5


def test_example3_genus_and_length():
    graph = example3(1, 2, 3, 4, 5)
    data = genus(graph)
    assert (data.g, data.gbar) == (2, 12)
    assert total_length(graph) == 3 * 1 + 2 + 2 * 3 + 4 + 5
    assert sum(v.q for v in graph.vertices) == 10


def test_decimal_length_literal_is_exact():
    graph = build_graph(["p", "q"], [("p", "q", "0.1")])
    assert graph.edges[0].length == Fraction(1, 10)


@given(pm_graphs(loops=True, parallel=True))
def test_weights_sum_to_degree_of_k(graph):
    data = genus(graph)
    assert sum(canonical_weights(graph).values()) == data.deg_k
    assert validate(graph, require_effective=True).ok


@given(pm_graphs(parallel=True))
def test_genus_and_length_survive_subdivision(graph):
    edge = graph.edges[0]
    middle = Vertex(id="mid", q=0)
    split = PMGraph(
        vertices=graph.vertices + (middle,),
        edges=(Edge(id="a", u=edge.u, v="mid", length=edge.length / 3),
               Edge(id="b", u="mid", v=edge.v, length=edge.length * 2 / 3))
        + graph.edges[1:],
    )
    assert genus(split) == genus(graph)
    assert total_length(split) == total_length(graph)
