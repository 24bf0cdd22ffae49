import pytest

# battery of validated surfaces (g <= 2, b <= 3, p <= 3, c_i <= 4) used by
# the flip/mutation, corank and block-criterion checks
BATTERY = [
    (0, [4], 0), (0, [4], 1), (0, [4], 2),
    (0, [2], 1), (0, [3], 1), (0, [2], 2), (0, [1], 2), (0, [1], 3),
    (0, [1, 1], 0), (0, [2, 1], 0), (0, [4, 4], 0), (0, [3, 2], 1),
    (0, [1, 1, 1], 0), (0, [4, 2, 1], 0),
    (1, [], 1), (1, [], 2), (1, [], 3), (1, [1], 0), (1, [2], 1),
    (2, [], 1), (2, [1], 0),
]

# larger members exercised under the slow marker
BATTERY_SLOW = [
    (0, [4], 3), (0, [2, 2], 2), (1, [1, 1], 1), (2, [3], 2),
    (0, [3, 3, 3], 3), (2, [4, 4, 4], 3),
]


@pytest.fixture(scope="session")
def battery_triangulations():
    """descriptor -> (surface, list of triangulations reached by flips)."""
    from surfcluster import surface as sf, trimap as tm

    cache = {}
    for desc in BATTERY:
        s = sf.validate_surface(*desc)
        T0 = tm.initial_triangulation(s)
        nodes, _, _ = tm.flip_graph_bfs(T0, max_nodes=60)
        cache[tuple(map(str, desc))] = (s, nodes)
    return cache
