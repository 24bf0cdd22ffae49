"""Explicit tagged-arc models for the two finite families.

Polygon(m): an unpunctured m-gon with vertices 0..m-1 counterclockwise;
arcs are chords between non-adjacent vertices. PuncturedPolygon(m): an
m-gon with one central puncture; arcs are plain/notched radii plus chords
carrying a bit for which side of the puncture they pass. Arc identity is
global here, so compatibility, intersection numbers and full complex
enumeration are closed-form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .mutation import ExchangeMatrix, mutate


class ExcludedModel(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Model:
    kind: str  # "polygon" | "punctured"
    m: int

    def __post_init__(self):
        if self.kind == "polygon":
            if self.m < 4:
                raise ExcludedModel("polygon model needs at least 4 boundary vertices")
        elif self.kind == "punctured":
            if self.m < 3:
                raise ExcludedModel("punctured polygon model needs at least 3 boundary vertices")
        else:
            raise ExcludedModel(f"unknown model kind {self.kind!r}")

    @property
    def rank(self) -> int:
        return self.m - 3 if self.kind == "polygon" else self.m


PLAIN = 1
NOTCHED = -1

# chord side flags: which region (walking counterclockwise from i to j, or
# from j to i) contains the puncture
CCW = "ccw"
CW = "cw"


@dataclass(frozen=True, order=True)
class ModelArc:
    model: Model
    kind: str  # "chord" | "radius"
    i: int
    j: int = -1
    side: str = ""  # chords in the punctured model
    tag: int = 0    # radii: PLAIN or NOTCHED

    def __str__(self):
        if self.kind == "radius":
            return f"r{self.i}{'x' if self.tag == NOTCHED else ''}"
        if self.side:
            return f"c{self.i}-{self.j}({self.side})"
        return f"c{self.i}-{self.j}"

    def to_json(self) -> dict:
        out = {"model": self.model.kind, "m": self.model.m}
        if self.kind == "radius":
            out["radius"] = self.i
            out["tag"] = "notched" if self.tag == NOTCHED else "plain"
        else:
            out["chord"] = [self.i, self.j]
            if self.side:
                out["side"] = self.side
        return out

    @staticmethod
    def from_json(data: dict) -> "ModelArc":
        model = Model(data["model"], int(data["m"]))
        if "radius" in data:
            tag = NOTCHED if data.get("tag") == "notched" else PLAIN
            return radius(model, int(data["radius"]), tag)
        i, j = data["chord"]
        return chord(model, int(i), int(j), data.get("side", ""))


def _ccw_between(m: int, i: int, j: int) -> tuple[int, ...]:
    """Vertices strictly between i and j walking counterclockwise."""
    out = []
    v = (i + 1) % m
    while v != j:
        out.append(v)
        v = (v + 1) % m
    return tuple(out)


def chord(model: Model, i: int, j: int, side: str = "") -> ModelArc:
    m = model.m
    if not (0 <= i < m and 0 <= j < m) or i == j:
        raise ValueError("chord endpoints must be distinct boundary vertices")
    if model.kind == "polygon":
        if (j - i) % m in (1, m - 1):
            raise ValueError("adjacent boundary vertices bound no chord")
        if side:
            raise ValueError("polygon chords carry no puncture side")
        i, j = min(i, j), max(i, j)
        return ModelArc(model, "chord", i, j)
    if side not in (CCW, CW):
        raise ValueError("punctured-model chords need side 'ccw' or 'cw'")
    # normalize so side is measured from the smaller endpoint
    if i > j:
        i, j = j, i
        side = CCW if side == CW else CW
    puncture_free = _ccw_between(m, j, i) if side == CCW else _ccw_between(m, i, j)
    if not puncture_free:
        raise ValueError("chord would cut off an unpunctured digon")
    return ModelArc(model, "chord", i, j, side)


def radius(model: Model, i: int, tag: int = PLAIN) -> ModelArc:
    if model.kind != "punctured":
        raise ValueError("radii exist only in the punctured model")
    if not 0 <= i < model.m:
        raise ValueError("radius endpoint out of range")
    if tag not in (PLAIN, NOTCHED):
        raise ValueError("tag must be plain or notched")
    return ModelArc(model, "radius", i, tag=tag)


def enumerate_tagged_arcs(model: Model) -> tuple[ModelArc, ...]:
    """All tagged arcs of the model, duplicate-free and sorted."""
    m = model.m
    arcs = []
    if model.kind == "polygon":
        for i in range(m):
            for j in range(i + 2, m):
                if (j - i) % m == m - 1:
                    continue
                arcs.append(chord(model, i, j))
    else:
        for i in range(m):
            arcs.append(radius(model, i, PLAIN))
            arcs.append(radius(model, i, NOTCHED))
        for i in range(m):
            for j in range(i + 1, m):
                for side in (CCW, CW):
                    try:
                        arcs.append(chord(model, i, j, side))
                    except ValueError:
                        pass
    return tuple(sorted(set(arcs)))


def _cup(arc: ModelArc) -> tuple[int, ...]:
    """Boundary vertices strictly inside the puncture-free side of a chord."""
    m = arc.model.m
    if arc.side == CCW:
        return _ccw_between(m, arc.j, arc.i)
    return _ccw_between(m, arc.i, arc.j)


def _crossing_number(a: ModelArc, b: ModelArc) -> int:
    """Minimal transverse crossings of the untagged arcs."""
    m = a.model.m
    if a.model.kind == "polygon":
        # strict cyclic interleaving of the endpoint pairs
        inside = _ccw_between(m, a.i, a.j)
        x = b.i in inside
        y = b.j in inside
        shared = {a.i, a.j} & {b.i, b.j}
        return 1 if (x != y and not shared) else 0
    if a.kind == "radius" and b.kind == "radius":
        return 0
    if a.kind == "radius" or b.kind == "radius":
        r, c = (a, b) if a.kind == "radius" else (b, a)
        if r.i in (c.i, c.j):
            return 0
        return 1 if r.i in _cup(c) else 0
    ea = {a.i, a.j}
    eb = {b.i, b.j}
    cup_a, cup_b = _cup(a), _cup(b)
    return min(sum(1 for v in eb if v in cup_a), sum(1 for v in ea if v in cup_b))


def _untagged_same(a: ModelArc, b: ModelArc) -> bool:
    if a.kind != b.kind:
        return False
    if a.kind == "radius":
        return a.i == b.i
    return (a.i, a.j, a.side) == (b.i, b.j, b.side)


def _tag_mismatches(a: ModelArc, b: ModelArc) -> int:
    """Ends of b at endpoints of a carrying the opposite tag (the D term)."""
    if a.model.kind == "polygon":
        return 0
    count = 0
    if b.kind == "radius":  # b's end at the puncture
        if a.kind == "radius" and b.tag != a.tag:
            count += 1
    # boundary ends are always plain, matching every plain boundary end of a
    return count


def intersection_number(a: ModelArc, b: ModelArc) -> int:
    """The pairing (a|b) = A + B + C + D; B = 0 in these loop-free models."""
    if a.model != b.model:
        raise ValueError("arcs live in different models")
    A = _crossing_number(a, b)
    C = -1 if _untagged_same(a, b) else 0
    D = _tag_mismatches(a, b)
    return A + C + D


def compatible(a: ModelArc, b: ModelArc) -> bool:
    """Tagged compatibility: untagged disjointness plus the tag rules."""
    if a.model != b.model:
        raise ValueError("arcs live in different models")
    if a == b:
        return True
    if _crossing_number(a, b) != 0:
        return False
    if _untagged_same(a, b):
        # boundary ends agree, so at least one end always matches
        return True
    if a.model.kind == "punctured" and a.kind == "radius" and b.kind == "radius":
        return a.tag == b.tag  # shared puncture endpoint
    return True


def enumerate_clusters(model: Model):
    """All maximal compatible sets (each of size rank) plus the flip graph.

    Returns (clusters, edges): clusters is a sorted tuple of sorted
    arc-tuples, edges joins clusters sharing all but one arc.
    """
    arcs = enumerate_tagged_arcs(model)
    n = model.rank
    idx = {a: i for i, a in enumerate(arcs)}
    compat = [[False] * len(arcs) for _ in arcs]
    for i, a in enumerate(arcs):
        for j in range(i + 1, len(arcs)):
            if compatible(a, arcs[j]):
                compat[i][j] = compat[j][i] = True

    clusters = []

    def grow(chosen, start):
        if len(chosen) == n:
            clusters.append(tuple(arcs[i] for i in chosen))
            return
        for nxt in range(start, len(arcs)):
            if all(compat[c][nxt] for c in chosen):
                grow(chosen + [nxt], nxt + 1)

    grow([], 0)
    # purity: no compatible set may exceed the rank; the greedy growth above
    # only collects sets of that exact size, so check maximality explicitly
    for cl in clusters:
        chosen = [idx[a] for a in cl]
        for other in range(len(arcs)):
            if other not in chosen and all(compat[c][other] for c in chosen):
                raise AssertionError("compatible set larger than the rank")

    clusters = tuple(sorted(clusters))
    edges = set()
    for ci, cl in enumerate(clusters):
        base = set(cl)
        for cj in range(ci + 1, len(clusters)):
            if len(base & set(clusters[cj])) == n - 1:
                edges.add((ci, cj))
    return clusters, tuple(sorted(edges))


# ---------------------------------------------------------------------------
# root seeds for the exchange of this model


def root_cluster(model: Model) -> tuple[ModelArc, ...]:
    """Fan triangulation (polygon) or all-plain radius wheel (punctured)."""
    if model.kind == "polygon":
        return tuple(chord(model, 0, i) for i in range(2, model.m - 1))
    return tuple(radius(model, i, PLAIN) for i in range(model.m))


def root_matrix(model: Model) -> ExchangeMatrix:
    """Signed adjacency matrix of the root cluster, rows in its arc order."""
    m = model.m
    if model.kind == "polygon":
        n = m - 3
        rows = [[0] * n for _ in range(n)]
        for t in range(n - 1):  # fan triangles pair consecutive diagonals
            rows[t][t + 1] += 1
            rows[t + 1][t] -= 1
        return ExchangeMatrix.from_rows(rows)
    n = m
    rows = [[0] * n for _ in range(n)]
    for i in range(m):
        j = (i + 1) % m
        rows[i][j] += 1
        rows[j][i] -= 1
    return ExchangeMatrix.from_rows(rows)


def exchange_matrices(model: Model, clusters=None, edges=None):
    """Exchange matrix for every cluster, propagated from the root by
    matrix mutation along flip-graph edges.

    Returns a dict cluster -> ExchangeMatrix whose row order matches the
    cluster's sorted arc order; propagation along different paths must
    agree, which is asserted.
    """
    if clusters is None or edges is None:
        clusters, edges = enumerate_clusters(model)
    pos = {cl: i for i, cl in enumerate(clusters)}
    root = tuple(sorted(root_cluster(model)))
    B0 = root_matrix(model)
    order0 = root_cluster(model)
    perm = [order0.index(a) for a in root]
    rows = [[B0[perm[i], perm[j]] for j in range(len(perm))] for i in range(len(perm))]

    adj: dict[int, list[int]] = {}
    for i, j in edges:
        adj.setdefault(i, []).append(j)
        adj.setdefault(j, []).append(i)

    labeled: dict[int, tuple[tuple[ModelArc, ...], ExchangeMatrix]] = {}
    start = pos[root]
    labeled[start] = (root, ExchangeMatrix.from_rows(rows))
    queue = [start]
    qi = 0
    while qi < len(queue):
        ci = queue[qi]
        qi += 1
        arcs_i, Bi = labeled[ci]
        set_i = set(arcs_i)
        for cj in adj.get(ci, ()):
            arcs_j = clusters[cj]
            leaving = set_i - set(arcs_j)
            entering = set(arcs_j) - set_i
            (old,) = leaving
            (new,) = entering
            k = arcs_i.index(old)
            Bj = mutate(Bi, k)
            order_j = tuple(new if a == old else a for a in arcs_i)
            if cj in labeled:
                prev_order, prev_B = labeled[cj]
                rp = [order_j.index(a) for a in prev_order]
                rerows = [[Bj[rp[i], rp[j]] for j in range(len(rp))] for i in range(len(rp))]
                if tuple(tuple(r) for r in rerows) != prev_B.rows:
                    raise AssertionError("flip-graph matrix propagation is path-dependent")
            else:
                labeled[cj] = (order_j, Bj)
                queue.append(cj)
    if len(labeled) != len(clusters):
        raise AssertionError("flip graph is not connected")
    return {clusters[ci]: labeled[ci] for ci in labeled}
