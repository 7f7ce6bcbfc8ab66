import json
from fractions import Fraction

import pytest

from app.core.exceptions import NonpositiveEdgeLength, ParseError
from app.services.documents import dump_graph, parse_graph
from app.services.families import example3
from app.services.graph import ensure_valid

K4_DOCUMENT = json.dumps({
    "vertices": [{"id": x} for x in "pqst"],
    "edges": [{"u": u, "v": v, "length": "1/6"}
              for u, v in ("pq", "ps", "pt", "qs", "qt", "st")],
})


def test_parse_k4():
    graph = parse_graph(K4_DOCUMENT)
    assert graph.vertex_ids == ["p", "q", "s", "t"]
    assert [e.id for e in graph.edges] == [f"e{i}" for i in range(6)]
    assert {e.length for e in graph.edges} == {Fraction(1, 6)}


def test_length_literals():
    text = json.dumps({"vertices": [{"id": "p", "q": 1}, {"id": "q", "q": 1}],
                       "edges": [{"u": "p", "v": "q", "length": 2},
                                 {"u": "p", "v": "q", "length": "0.25"}]})
    text = text.replace('"0.25"', "0.1")
    graph = parse_graph(text)
    assert [e.length for e in graph.edges] == [2, Fraction(1, 10)]


def test_self_loop_is_accepted():
    text = '{"vertices": [{"id": "p"}], "edges": [{"u": "p", "v": "p", "length": 1}]}'
    graph = parse_graph(text)
    assert graph.edges[0].is_loop


def test_zero_length_fails_validation_not_parsing():
    text = '{"vertices": [{"id": "p"}, {"id": "q"}], "edges": [{"u": "p", "v": "q", "length": "0"}]}'
    graph = parse_graph(text)
    with pytest.raises(NonpositiveEdgeLength):
        ensure_valid(graph)


def test_syntax_error_reports_line():
    with pytest.raises(ParseError) as info:
        parse_graph('{\n  "vertices": [\n  ,]\n}')
    assert info.value.exit_code == 3
    assert info.value.context["line"] == 3


@pytest.mark.parametrize("text, field", [
    ('{"vertices": [{"id": "p", "q": -1}], "edges": []}', "vertices.0.q"),
    ('{"vertices": [], "edges": [{"u": "p", "length": 1}]}', "edges.0.v"),
    ('{"vertices": [], "edges": [], "extra": 1}', "extra"),
    ('{"vertices": [], "edges": [{"u": "p", "v": "p", "length": "x/y"}]}',
     "edges.0.length"),
    ('{"vertices": [], "edges": [{"u": "p", "v": "p", "length": true}]}',
     "edges.0.length"),
    ('{"vertices": [{"id": "p", "q": true}], "edges": []}', "vertices.0.q"),
    ('{"vertices": [], "edges": [{"id": "a", "u": "p", "v": "p", "length": 1},'
     ' {"id": "a", "u": "p", "v": "p", "length": 1}]}', "edges.1.id"),
])
def test_field_errors(text, field):
    with pytest.raises(ParseError) as info:
        parse_graph(text)
    assert info.value.context["field"] == field


def test_round_trip():
    graph = example3(Fraction(1, 3), 2, "0.5", 1, 7)
    assert parse_graph(dump_graph(graph)) == graph
    document = json.loads(dump_graph(graph))
    assert document["edges"][3]["length"] == "1"
