import io
import json

import pytest

from surfcluster import cli


def run(argv):
    out = io.StringIO()
    code = cli.main(argv, out=out)
    text = out.getvalue()
    try:
        return code, json.loads(text)
    except json.JSONDecodeError:
        return code, text


def test_surface_classify_hexagon():
    code, data = run(["surface", "classify", '{"genus":0,"boundary":[6],"punctures":0}'])
    assert code == 0
    assert data["classification"]["rank"] == 3
    assert data["classification"]["growth"] == "A(3)"


def test_surface_classify_rejection():
    code, data = run(["surface", "classify", '{"genus":0,"boundary":[],"punctures":3}'])
    assert code == 1
    assert data == {"error": "excluded-surface", "detail": "thrice-punctured sphere"}


def test_triangulate_flip_bmatrix(tmp_path):
    code, tri = run(["triangulate", "--surface", '{"genus":0,"boundary":[1,1],"punctures":0}'])
    assert code == 0
    assert tri["arcs"] == 2
    path = tmp_path / "t.json"
    path.write_text(json.dumps(tri))
    code, mat = run(["b-matrix", "--triangulation", str(path)])
    assert code == 0
    assert mat == {"n": 2, "rows": [[0, 2], [-2, 0]]}
    code, flipped = run(["flip", "--triangulation", str(path), "--arc", "0"])
    assert code == 0
    assert flipped["arcs"] == 2
    code, mat2 = run(["b-matrix", "--triangulation", json.dumps(flipped)])
    assert mat2 == {"n": 2, "rows": [[0, -2], [2, 0]]}


def test_flip_rejects_fold():
    code, tri = run(["triangulate", "--surface", '{"genus":0,"boundary":[5],"punctures":0}'])
    code, data = run(["flip", "--triangulation", json.dumps(tri), "--arc", "7"])
    assert code == 1
    assert data["error"] == "not-flippable"


def test_tagged_bfs_json_and_dot():
    code, data = run(["tagged-bfs", "--surface", '{"genus":0,"boundary":[2],"punctures":1}',
                      "--max-nodes", "50"])
    assert code == 0
    assert len(data["vertices"]) == 4
    assert sorted(map(tuple, data["edges"])) == [(0, 1), (0, 2), (1, 3), (2, 3)]
    assert data["truncated"] is False
    code, dot = run(["tagged-bfs", "--surface", '{"genus":0,"boundary":[2],"punctures":1}',
                     "--format", "dot"])
    assert code == 0
    assert dot.startswith("graph")


def test_mutation_class_cmd():
    code, data = run(["mutation-class", "--matrix", '{"n":2,"rows":[[0,1],[-1,0]]}',
                      "--max-size", "50"])
    assert code == 0
    assert data["size"] == 1 and data["complete"] is True


def test_recognize_type_cmd():
    code, data = run(["recognize-type", "--matrix",
                      '{"n":4,"edges":[[0,1,1],[1,2,1],[2,3,1],[3,0,1]]}'])
    assert code == 0
    assert data["type"] == "D(4)"
    code, data = run(["recognize-type", "--matrix", '{"n":2,"edges":[[0,1,3]]}',
                      "--budget", "50"])
    assert code == 1
    assert data["type"] == "Unknown"


def test_corank_cmd():
    code, data = run(["corank", "--matrix", '{"n":3,"rows":[[0,2,-2],[-2,0,2],[2,-2,0]]}'])
    assert code == 0
    assert data == {"n": 3, "rank": 2, "corank": 1}


def test_is_surface_matrix_positive_negative(tmp_path):
    code, data = run(["is-surface-matrix", '{"n":2,"rows":[[0,1],[-1,0]]}'])
    assert code == 0
    assert data["decomposition"]["blocks"]
    e6 = {"n": 6, "edges": [[0, 1, 1], [1, 2, 1], [2, 3, 1], [3, 4, 1], [2, 5, 1]]}
    path = tmp_path / "e6.json"
    path.write_text(json.dumps(e6))
    code, data = run(["is-surface-matrix", str(path)])
    assert code == 1
    assert data["error"] == "not-block-decomposable"


def test_block_assemble_cmd():
    dec = {"n": 3, "blocks": [{"kind": "II", "vertices": [0, 1, 2]}], "bare": []}
    code, data = run(["block-assemble", json.dumps(dec)])
    assert code == 0
    assert data["matrix"]["rows"] == [[0, 1, -1], [-1, 0, 1], [1, -1, 0]]
    assert data["surface"] == {"genus": 0, "boundary": [6], "punctures": 0}


def test_denominators_cmd():
    code, data = run(["denominators", "--matrix", '{"n":2,"rows":[[0,1],[-1,0]]}',
                      "--path", "0,1"])
    assert code == 0
    assert data["denominator_vectors"] == [[1, 0], [1, 1]]


def test_cluster_vars_cmd():
    code, data = run(["cluster-vars", "--matrix", '{"n":2,"rows":[[0,1],[-1,0]]}',
                      "--limit", "100"])
    assert code == 0
    assert data["count"] == 5 and data["complete"] is True


def test_clusters_cmd():
    code, data = run(["clusters", "--model", "punctured", "--m", "3"])
    assert code == 0
    assert data["count"] == 14
    code, data = run(["clusters", "--model", "polygon", "--m", "3"])
    assert code == 1
    assert data["error"] == "excluded-model"


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        cli.main(["no-such-command"])
    assert exc.value.code == 2


def test_threads_flag():
    code, data = run(["--threads", "2", "tagged-bfs",
                      "--surface", '{"genus":0,"boundary":[3],"punctures":1}'])
    assert code == 0
    assert len(data["vertices"]) == 14
