import itertools

import pytest

from surfcluster import mutation as mu, surface as sf, tagged as tg, trimap as tm


def start(desc):
    s = sf.validate_surface(*desc)
    return tg.tag_with(tm.initial_triangulation(s))


def graph(desc, max_nodes=200):
    return tg.exchange_graph_bfs(start(desc), max_nodes=max_nodes)


def degrees(G):
    d = {}
    for i, j in G.edges:
        d[i] = d.get(i, 0) + 1
        d[j] = d.get(j, 0) + 1
    return d


def test_digon_four_cycle():
    G = graph((0, [2], 1))
    assert len(G.nodes) == 4 and not G.truncated
    assert set(degrees(G).values()) == {2}
    assert len(G.edges) == 4


def test_punctured_triangle_fourteen():
    G = graph((0, [3], 1))
    assert len(G.nodes) == 14 and not G.truncated
    assert set(degrees(G).values()) == {3}


def test_tag_with_eps_toggles():
    s = sf.validate_surface(0, [2], 1)
    T0 = tm.initial_triangulation(s)
    (a,) = T0.punctures()
    plain = tg.tag_with(T0)
    notched = tg.tag_with(T0, {a: -1})
    assert plain.base == notched.base
    assert plain.sig(a) == 1 and notched.sig(a) == -1


def test_tag_untag_roundtrip():
    G = graph((0, [3], 1))
    for node in G.nodes:
        opts = [(v, [1, -1] if s == 0 else [s]) for v, s in node.signatures]
        for combo in itertools.product(*[o[1] for o in opts]):
            signs = {opts[i][0]: combo[i] for i in range(len(opts))}
            back = tg.tag_with(tg.untag(node), signs)
            assert back.base == node.base and back.signatures == node.signatures


def test_untag_b_matrix_consistent():
    G = graph((0, [3], 1))
    for node in G.nodes:
        assert tg.b_matrix(node).rows == tm.signed_adjacency(tg.untag(node)).rows


def test_tagged_flip_involution():
    for desc in [(0, [2], 1), (0, [3], 1), (0, [1], 2), (1, [], 1)]:
        G = graph(desc, max_nodes=40)
        for node in G.nodes:
            for k in range(node.num_arcs):
                T2 = tg.tagged_flip(node, k)
                T3 = tg.tagged_flip(T2, k)
                assert T3.base == node.base and T3.signatures == node.signatures
                assert not (T2.base == node.base and T2.signatures == node.signatures)


def test_tagged_flip_unknown_arc():
    T = start((0, [2], 1))
    with pytest.raises(tg.ArcNotPresent):
        tg.tagged_flip(T, 5)


def test_b_matrix_commutation():
    for desc in [(0, [2], 1), (0, [3], 1), (0, [1], 2), (0, [2, 1], 1)]:
        G = graph(desc, max_nodes=30)
        for node in G.nodes:
            B = tg.b_matrix(node)
            for k in range(node.num_arcs):
                assert tg.b_matrix(tg.tagged_flip(node, k)).rows == mu.mutate(B, k).rows


def test_signature_changes_through_zero_only():
    for desc in [(0, [3], 1), (0, [1], 2), (0, [], 4)]:
        G = graph(desc, max_nodes=50)
        for node in G.nodes:
            for k in range(node.num_arcs):
                T2 = tg.tagged_flip(node, k)
                for v, s1 in node.signatures:
                    assert s1 * T2.sig(v) >= 0


def test_r2_cycles():
    checked = 0
    for desc in [(0, [3], 1), (0, [2], 1), (0, [1, 1], 0), (0, [], 4)]:
        G = graph(desc, max_nodes=20)
        for node in G.nodes:
            B = tg.b_matrix(node)
            n = node.num_arcs
            for i in range(n):
                for j in range(i + 1, n):
                    if abs(B[i, j]) > 1:
                        continue
                    length = 4 if B[i, j] == 0 else 5
                    cur = node
                    for k in ([i, j] * 3)[:length]:
                        cur = tg.tagged_flip(cur, k)
                    if length == 5:
                        cur = tg.TaggedTriangulation(cur.base.relabel_arcs({i: j, j: i}), cur.signatures)
                    assert cur.base == node.base and cur.signatures == node.signatures
                    checked += 1
    assert checked >= 200


def test_torus_two_components():
    s = sf.validate_surface(1, [], 1)
    T0 = tm.initial_triangulation(s)
    G = tg.exchange_graph_bfs(tg.tag_with(T0), max_nodes=500)
    assert not G.truncated
    assert all(sig == 1 for node in G.nodes for _, sig in node.signatures)
    (a,) = T0.punctures()
    Gn = tg.exchange_graph_bfs(tg.tag_with(T0, {a: -1}), max_nodes=500)
    assert all(sig == -1 for node in Gn.nodes for _, sig in node.signatures)
    assert len(Gn.nodes) == len(G.nodes)


def test_twice_punctured_monogon_all_strata():
    G = graph((0, [1], 2), max_nodes=400)
    assert not G.truncated
    strata = {tuple(sorted(s for _, s in node.signatures)) for node in G.nodes}
    assert strata == {(-1, -1), (-1, 0), (-1, 1), (0, 0), (0, 1), (1, 1)}


def test_bfs_truncation_flag():
    G = graph((0, [4], 1), max_nodes=5)
    assert G.truncated and len(G.nodes) == 5


def test_graph_exports():
    G = graph((0, [2], 1))
    data = G.to_json()
    assert data["truncated"] is False
    assert len(data["vertices"]) == 4
    assert sorted(tuple(e) for e in data["edges"]) == list(G.edges)
    dot = G.to_dot()
    assert dot.startswith("graph") and dot.count("--") == 4


def test_parallel_bfs_matches_serial():
    G1 = graph((0, [3], 1))
    G2 = tg.exchange_graph_bfs(start((0, [3], 1)), max_nodes=200, threads=4)
    assert len(G1.nodes) == len(G2.nodes)
    assert G1.edges == G2.edges
