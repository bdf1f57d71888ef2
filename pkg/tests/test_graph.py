import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forcelayout import families
from forcelayout.graph import (
    UNREACHABLE,
    Graph,
    GraphParseError,
    GraphWarning,
    bfs_apsp,
    connected_components,
    dump_json_graph,
    is_connected,
    k_neighborhood,
    parse_edge_list,
    parse_json_graph,
    to_edge_list,
)


def floyd_warshall(g):
    n = g.n
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0)
    for u, v in g.edges:
        d[u, v] = d[v, u] = 1
    for k in range(n):
        d = np.minimum(d, d[:, k:k + 1] + d[k:k + 1, :])
    return d


@st.composite
def graphs(draw, max_n=10):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, chosen)


def test_parse_simple():
    g = parse_edge_list("0 1\n1 2")
    assert g.n == 3 and g.m == 2
    assert g.labels == ("0", "1", "2")


def test_parse_duplicate_reversed():
    with pytest.warns(GraphWarning):
        g = parse_edge_list("a b\nb a")
    assert g.n == 2 and g.m == 1


def test_parse_self_loop():
    with pytest.warns(GraphWarning) as rec:
        g = parse_edge_list("x x")
    assert g.n == 1 and g.m == 0 and len(rec) == 1


def test_parse_comments_and_blanks():
    g = parse_edge_list("# header\n\na b\n  # indented comment\nb c\n")
    assert g.m == 2 and g.labels == ("a", "b", "c")


def test_parse_malformed_reports_line():
    with pytest.raises(GraphParseError) as err:
        parse_edge_list("a b\nc\n")
    assert err.value.line == 2


def test_parse_empty():
    with pytest.raises(GraphParseError):
        parse_edge_list("# nothing\n\n")


def test_graph_invariants_rejected():
    with pytest.raises(ValueError):
        Graph(2, [(0, 0)])
    with pytest.raises(ValueError):
        Graph(2, [(0, 2)])


def test_json_roundtrip_bit_exact():
    text = '{"n": 3, "edges": [[0, 1], [1, 2]], "labels": ["a", "é", "c"]}\n'
    g = parse_json_graph(text)
    assert dump_json_graph(g) == text


def test_json_errors():
    for bad in ('{"n": 2}', '{"n": 2, "edges": [[0, 5]]}', "not json", '{"n": 0, "edges": []}'):
        with pytest.raises(GraphParseError):
            parse_json_graph(bad)


def test_bfs_examples():
    c4 = families.cycle(4)
    d = bfs_apsp(c4)
    assert d(0, 2) == 2 and d(0, 1) == 1
    assert bfs_apsp(families.path(5), [0]).row(0).tolist() == [0, 1, 2, 3, 4]
    two = Graph(4, [(0, 1), (2, 3)])
    assert bfs_apsp(two, [0])(0, 2) == UNREACHABLE


def test_bfs_invalid_source():
    with pytest.raises(ValueError):
        bfs_apsp(families.path(3), [5])


def test_k_neighborhood_examples():
    assert k_neighborhood(families.path(5), 2, 1) == {1, 2, 3}
    assert k_neighborhood(families.path(5), 4, 0) == {4}
    assert k_neighborhood(families.cycle(8), 0, 2) == {6, 7, 0, 1, 2}
    with pytest.raises(ValueError):
        k_neighborhood(families.path(3), 7, 1)


def test_components_examples():
    assert connected_components(families.path(3)) == [[0, 1, 2]]
    assert connected_components(Graph(4, [(0, 1), (2, 3)])) == [[0, 1], [2, 3]]
    assert connected_components(families.empty(3)) == [[0], [1], [2]]


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_bfs_matches_floyd_warshall(g):
    fw = floyd_warshall(g)
    d = bfs_apsp(g).as_float()
    assert np.array_equal(d, fw)
    assert np.array_equal(d, d.T)
    assert np.all(np.diag(d) == 0)
    # d[i, k] <= d[i, j] + d[j, k] for every triple
    assert np.all(d[:, None, :] <= d[:, :, None] + d[None, :, :])


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_neighborhood_at_diameter_is_component(g):
    d = bfs_apsp(g)
    comps = connected_components(g)
    for comp in comps:
        v = comp[0]
        assert k_neighborhood(g, v, max(d.diameter(), 0)) == set(comp)


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_components_partition(g):
    comps = connected_components(g)
    assert sorted(v for c in comps for v in c) == list(range(g.n))
    for c in comps:
        assert is_connected(g.subgraph(c))
        inside = set(c)
        for v in c:
            assert set(g.neighbors(v)) <= inside


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_edge_list_roundtrip(g):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GraphWarning)
        back = parse_edge_list(to_edge_list(g))
    assert back == g


def test_adjacency_symmetric():
    g = families.dodecahedron()
    for v in range(g.n):
        for u in g.neighbors(v):
            assert v in g.neighbors(u)
    assert all(g.degree(v) == 3 for v in range(20))


def test_families_shapes():
    assert families.grid(3, 4).m == 3 * 3 + 2 * 4
    assert families.hypercube(3).m == 12
    assert families.icosahedron().m == 30 and all(families.icosahedron().degree(v) == 5 for v in range(12))
    assert families.nested_triangles(3).m == 3 * 3 + 2 * 3
    assert families.from_spec("grid:2x3") == families.grid(2, 3)
    with pytest.raises(ValueError):
        families.from_spec("nope:3")
