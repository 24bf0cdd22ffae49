"""Skew-symmetric exchange matrices and their mutation combinatorics.

Provides the matrix type shared by the whole package, matrix mutation,
fraction-free integer rank, canonical forms up to simultaneous row/column
permutation, mutation-class enumeration, a catalog of named quivers, and
mutation-class type recognition against that catalog.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass


class IndexOutOfRange(ValueError):
    pass


class DimensionTooLarge(ValueError):
    pass


class BadSpec(ValueError):
    pass


# Mutation-class search treats entries beyond this magnitude as runaway
# growth and reports truncation instead of continuing.
ENTRY_CEILING = 10 ** 9


@dataclass(frozen=True)
class ExchangeMatrix:
    """Skew-symmetric integer matrix; row/column i is labeled by index i."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        for row in self.rows:
            if len(row) != n:
                raise ValueError("matrix must be square")
        for i in range(n):
            if self.rows[i][i] != 0:
                raise ValueError("diagonal entries must vanish")
            for j in range(i + 1, n):
                if self.rows[i][j] != -self.rows[j][i]:
                    raise ValueError("matrix must be skew-symmetric")

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @staticmethod
    def from_rows(rows) -> "ExchangeMatrix":
        return ExchangeMatrix(tuple(tuple(int(x) for x in row) for row in rows))

    def to_json(self) -> dict:
        return {"n": self.n, "rows": [list(row) for row in self.rows]}

    @staticmethod
    def from_json(data: dict) -> "ExchangeMatrix":
        rows = data["rows"]
        if "n" in data and int(data["n"]) != len(rows):
            raise ValueError("declared dimension does not match rows")
        return ExchangeMatrix.from_rows(rows)

    def entries_bounded_by(self, bound: int) -> bool:
        return all(abs(x) <= bound for row in self.rows for x in row)


def zero_matrix(n: int) -> ExchangeMatrix:
    return ExchangeMatrix.from_rows([[0] * n for _ in range(n)])


def from_edges(n: int, edges) -> ExchangeMatrix:
    """Build B from weighted quiver edges (i, j, w): w arrows from i to j."""
    rows = [[0] * n for _ in range(n)]
    for edge in edges:
        if len(edge) == 2:
            i, j = edge
            w = 1
        else:
            i, j, w = edge
        rows[i][j] += w
        rows[j][i] -= w
    return ExchangeMatrix.from_rows(rows)


def quiver_edges(B: ExchangeMatrix) -> list[tuple[int, int, int]]:
    """Positive-entry arrow list (i, j, w), sorted."""
    out = []
    for i in range(B.n):
        for j in range(B.n):
            if B[i, j] > 0:
                out.append((i, j, B[i, j]))
    return out


def quiver_to_json(B: ExchangeMatrix) -> dict:
    return {"n": B.n, "edges": [list(e) for e in quiver_edges(B)]}


def quiver_from_json(data: dict) -> ExchangeMatrix:
    return from_edges(int(data["n"]), data["edges"])


def mutate(B: ExchangeMatrix, k: int) -> ExchangeMatrix:
    """Matrix mutation in direction k."""
    n = B.n
    if not 0 <= k < n:
        raise IndexOutOfRange(f"mutation index {k} out of range for n={n}")
    old = B.rows
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == k or j == k:
                row.append(-old[i][j])
            else:
                row.append(old[i][j] + (abs(old[i][k]) * old[k][j] + old[i][k] * abs(old[k][j])) // 2)
        rows.append(tuple(row))
    return ExchangeMatrix(tuple(rows))


def rank(B: ExchangeMatrix) -> int:
    """Integer rank via fraction-free (Bareiss) elimination."""
    m = [list(row) for row in B.rows]
    n = B.n
    r = 0
    prev = 1
    col = 0
    for col in range(n):
        piv = None
        for i in range(r, n):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, n):
            for j in range(col + 1, n):
                m[i][j] = (m[r][col] * m[i][j] - m[i][col] * m[r][j]) // prev
            m[i][col] = 0
        prev = m[r][col]
        r += 1
    return r


def corank(B: ExchangeMatrix) -> int:
    return B.n - rank(B)


def is_acyclic(B: ExchangeMatrix) -> bool:
    """True iff the quiver of B has no directed cycle."""
    n = B.n
    state = [0] * n  # 0 unseen, 1 on stack, 2 done

    def dfs(v):
        state[v] = 1
        for w in range(n):
            if B[v, w] > 0:
                if state[w] == 1:
                    return False
                if state[w] == 0 and not dfs(w):
                    return False
        state[v] = 2
        return True

    return all(state[v] == 2 or dfs(v) for v in range(n))


# ---------------------------------------------------------------------------
# canonical form under simultaneous row/column permutation


def _refine(rows, colors):
    n = len(rows)
    while True:
        sig = [(colors[i], tuple(sorted((colors[j], rows[i][j]) for j in range(n)))) for i in range(n)]
        order = sorted(set(sig))
        new = [order.index(s) for s in sig]
        if new == colors:
            return colors
        colors = new


def _permuted_rows(rows, perm):
    # perm[i] = original index placed at position i
    return tuple(tuple(rows[perm[i]][perm[j]] for j in range(len(perm))) for i in range(len(perm)))


def canonical_form(B: ExchangeMatrix, max_n: int = 64) -> ExchangeMatrix:
    """Canonical representative of B's orbit under simultaneous permutation.

    Iterated partition refinement on (color, entry) multisets, then
    depth-first individualization over the remaining cells, keeping the
    lexicographically least permuted matrix.
    """
    n = B.n
    if n > max_n:
        raise DimensionTooLarge(f"n={n} exceeds canonical-form bound {max_n}")
    if n <= 1:
        return B
    rows = B.rows
    vals = {x for row in rows for x in row}
    if vals <= {0}:
        return B

    def twins(v, w):
        # transposing v and w is an automorphism
        if rows[v][w] != rows[w][v]:
            return False
        return all(rows[v][u] == rows[w][u] for u in range(n) if u not in (v, w))

    colors = _refine(rows, [0] * n)
    best = [None]

    def search(colors):
        cells = {}
        for v in range(n):
            cells.setdefault(colors[v], []).append(v)
        branch = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                branch = cells[c]
                break
        if branch is None:
            perm = [v for _, v in sorted((colors[v], v) for v in range(n))]
            cand = _permuted_rows(rows, perm)
            if best[0] is None or cand < best[0]:
                best[0] = cand
            return
        chosen = []
        for v in branch:
            # siblings swappable by an automorphism yield identical subtrees
            if any(twins(v, w) for w in chosen):
                continue
            chosen.append(v)
            nxt = [c * 2 for c in colors]
            nxt[v] -= 1
            search(_refine(rows, nxt))

    search(colors)
    return ExchangeMatrix(best[0])


def canonical_key(B: ExchangeMatrix) -> tuple:
    return canonical_form(B).rows


@dataclass(frozen=True)
class MutationClass:
    """Canonical representatives of a mutation class, with completion status."""

    matrices: tuple[ExchangeMatrix, ...]
    complete: bool
    limit: int

    @property
    def size(self) -> int:
        return len(self.matrices)


def mutation_class(B: ExchangeMatrix, max_size: int = 10000) -> MutationClass:
    """Enumerate B's mutation class up to simultaneous permutation by BFS."""
    if max_size < 1:
        raise ValueError("max_size must be positive")
    start = canonical_form(B)
    seen = {start.rows}
    frontier = [start]
    complete = True
    while frontier:
        nxt = []
        for M in frontier:
            for k in range(M.n):
                Mk = mutate(M, k)
                if not Mk.entries_bounded_by(ENTRY_CEILING):
                    complete = False
                    continue
                key = canonical_form(Mk).rows
                if key not in seen:
                    if len(seen) >= max_size:
                        complete = False
                        continue
                    seen.add(key)
                    nxt.append(ExchangeMatrix(key))
        frontier = nxt
        if not complete:
            break
    mats = tuple(ExchangeMatrix(rows) for rows in sorted(seen))
    return MutationClass(matrices=mats, complete=complete, limit=max_size)


# ---------------------------------------------------------------------------
# named quivers


def _tree_from_arms(arm_lengths) -> ExchangeMatrix:
    # star-shaped tree: a center with arms of the given edge counts,
    # every edge oriented away from the center
    edges = []
    idx = 1
    for arm in arm_lengths:
        prev = 0
        for _ in range(arm):
            edges.append((prev, idx))
            prev = idx
            idx += 1
    return from_edges(idx, edges)


def _path(n: int) -> ExchangeMatrix:
    return from_edges(n, [(i, i + 1) for i in range(n - 1)])


def _bipartition(B: ExchangeMatrix) -> list[int]:
    n = B.n
    color = [None] * n
    for s in range(n):
        if color[s] is not None:
            continue
        color[s] = 1
        stack = [s]
        while stack:
            v = stack.pop()
            for w in range(n):
                if B[v, w] != 0:
                    if color[w] is None:
                        color[w] = -color[v]
                        stack.append(w)
                    elif color[w] == color[v]:
                        raise BadSpec("diagram is not bipartite")
    return color


def quiver_product(B1: ExchangeMatrix, B2: ExchangeMatrix) -> ExchangeMatrix:
    """Square product of two bipartite diagrams: every unit square of the
    vertex grid becomes an oriented 4-cycle."""
    s1, s2 = _bipartition(B1), _bipartition(B2)
    n1, n2 = B1.n, B2.n

    def vid(u, v):
        return u * n2 + v

    edges = []
    for u in range(n1):
        for u2 in range(n1):
            if B1[u, u2] != 0 and s1[u] == 1:  # undirected edge, + side first
                for v in range(n2):
                    if s2[v] == 1:
                        edges.append((vid(u, v), vid(u2, v)))
                    else:
                        edges.append((vid(u2, v), vid(u, v)))
    for v in range(n2):
        for v2 in range(n2):
            if B2[v, v2] != 0 and s2[v] == 1:
                for u in range(n1):
                    if s1[u] == 1:
                        edges.append((vid(u, v2), vid(u, v)))
                    else:
                        edges.append((vid(u, v), vid(u, v2)))
    return from_edges(n1 * n2, edges)


def _extended_affine_e(k: int) -> ExchangeMatrix:
    # two rows joined by a doubled edge pair (A, B) plus a tail; every
    # triangle oriented, tree edges oriented outward
    if k == 6:
        tail, bottom, top = 2, 2, 2  # beyond A resp. B
    elif k == 7:
        tail, bottom, top = 1, 3, 3
    elif k == 8:
        tail, bottom, top = 1, 2, 5
    else:
        raise BadSpec("extended affine type must be E6, E7 or E8")
    # vertices: 0=A, 1=B, tail chain, bottom chain off A, top chain off B
    edges = [(0, 1, 2)]
    idx = 2
    prev = None
    for t in range(tail):
        if t == 0:
            # tail head closes two oriented triangles with the double edge
            edges += [(1, idx), (idx, 0)]
        else:
            edges.append((prev, idx))
        prev = idx
        idx += 1
    prevb = 0
    for t in range(bottom):
        if t == 0:
            edges += [(1, idx), (idx, 0)]
        else:
            edges.append((prevb, idx))
        prevb = idx
        idx += 1
    prevt = 1
    for t in range(top):
        if t == 0:
            edges += [(1, idx), (idx, 0)]
        else:
            edges.append((prevt, idx))
        prevt = idx
        idx += 1
    return from_edges(idx, edges)


def _gamma2(n1: int, n2: int) -> ExchangeMatrix:
    if n1 < 1 or n2 < 1:
        raise BadSpec("Gamma2 parameters must be positive")
    # a-chain a1..a_{n1}, doubled pair (a_{n1}, bL), b-chain b_{n2+1}..b_1,
    # then a plain fork b0, b0'
    n = n1 + n2 + 3
    a = list(range(n1))            # a_1 .. a_{n1}
    bL = n1                        # partner of a_{n1} across the double edge
    b = list(range(n1 + 1, n1 + 1 + n2))  # b_{n2} .. b_1
    f1, f2 = n - 2, n - 1
    X = a[-1]
    edges = [(X, bL, 2)]
    if n1 >= 2:
        edges += [(bL, a[-2]), (a[-2], X)]
        edges += [(a[i], a[i + 1]) for i in range(n1 - 2)]
    nxt = b[0] if n2 >= 1 else None
    edges += [(bL, nxt), (nxt, X)]
    edges += [(b[i], b[i + 1]) for i in range(n2 - 1)]
    last = b[-1]
    edges += [(last, f1), (last, f2)]
    return from_edges(n, edges)


def _gamma3(n1: int, n2: int, n3: int) -> ExchangeMatrix:
    if min(n1, n2, n3) < 1:
        raise BadSpec("Gamma3 parameters must be positive")
    n = n1 + n2 + n3 + 3
    a = list(range(n1))
    Y1 = n1
    b = list(range(n1 + 1, n1 + 1 + n2 + 1))  # b_{n2+1} .. b_1
    X2 = n1 + n2 + 2
    Y2 = n1 + n2 + 3
    c = list(range(n1 + n2 + 4, n))  # c_{n3-1} .. c_1
    X1 = a[-1]
    edges = [(X1, Y1, 2)]
    if n1 >= 2:
        edges += [(Y1, a[-2]), (a[-2], X1)]
        edges += [(a[i], a[i + 1]) for i in range(n1 - 2)]
    edges += [(Y1, b[0]), (b[0], X1)]
    edges += [(b[i], b[i + 1]) for i in range(len(b) - 1)]
    b1 = b[-1]
    edges += [(X2, Y2, 2), (Y2, b1), (b1, X2)]
    if n3 >= 2:
        edges += [(Y2, c[0]), (c[0], X2)]
        edges += [(c[i], c[i + 1]) for i in range(len(c) - 1)]
    return from_edges(n, edges)


def _octahedron() -> ExchangeMatrix:
    # signed adjacencies of the tetrahedral triangulation of a 4-punctured
    # sphere: arcs are tetrahedron edges, each coherently oriented face
    # contributes an oriented triangle
    eidx = {}
    for i, pair in enumerate(itertools.combinations(range(4), 2)):
        eidx[pair] = i
    faces = [(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)]
    edges = []
    for (x, y, z) in faces:
        sides = [eidx[tuple(sorted((x, y)))], eidx[tuple(sorted((y, z)))], eidx[tuple(sorted((z, x)))]]
        for t in range(3):
            edges.append((sides[t], sides[(t + 1) % 3]))
    return from_edges(6, edges)


def make_quiver(kind: str, *params: int) -> ExchangeMatrix:
    """Construct a named quiver from the catalog.

    Kinds: A(n), D(n), E(6|7|8), AffineA(n1,n2), AffineD(n), AffineE(6|7|8),
    ExtAffE(6|7|8), Gamma2(n1,n2), Gamma3(n1,n2,n3), Grid(k,l), Octahedron.
    """
    try:
        if kind == "A":
            (n,) = params
            if n < 1:
                raise BadSpec("A(n) needs n >= 1")
            return _path(n)
        if kind == "D":
            (n,) = params
            if n < 4:
                raise BadSpec("D(n) needs n >= 4")
            return _tree_from_arms([1, 1, n - 3])
        if kind == "E":
            (n,) = params
            arms = {6: [1, 2, 2], 7: [1, 2, 3], 8: [1, 2, 4]}
            if n not in arms:
                raise BadSpec("E(n) needs n in {6,7,8}")
            return _tree_from_arms(arms[n])
        if kind == "AffineA":
            n1, n2 = params
            if n1 < n2 or n2 < 1:
                raise BadSpec("AffineA(n1,n2) needs n1 >= n2 >= 1")
            n = n1 + n2
            if n == 2:
                return from_edges(2, [(0, 1, 2)])
            edges = [(i, (i + 1) % n) for i in range(n1)]
            edges += [((i + 1) % n, i) for i in range(n1, n)]
            return from_edges(n, edges)
        if kind == "AffineD":
            (n,) = params
            if n < 4:
                raise BadSpec("AffineD(n) needs n >= 4")
            return _affine_d(n)
        if kind == "AffineE":
            (n,) = params
            arms = {6: [2, 2, 2], 7: [1, 3, 3], 8: [1, 2, 5]}
            if n not in arms:
                raise BadSpec("AffineE(n) needs n in {6,7,8}")
            return _tree_from_arms(arms[n])
        if kind == "ExtAffE":
            (n,) = params
            return _extended_affine_e(n)
        if kind == "Gamma2":
            n1, n2 = params
            return _gamma2(n1, n2)
        if kind == "Gamma3":
            n1, n2, n3 = params
            return _gamma3(n1, n2, n3)
        if kind == "Grid":
            k, l = params
            if k < 2 or l < 2:
                raise BadSpec("Grid(k,l) needs k,l >= 2")
            return quiver_product(_path(k - 1), _path(l - 1))
        if kind == "Octahedron":
            if params:
                raise BadSpec("Octahedron takes no parameters")
            return _octahedron()
    except ValueError as exc:
        if isinstance(exc, BadSpec):
            raise
        raise BadSpec(str(exc)) from exc
    raise BadSpec(f"unknown quiver kind {kind!r}")


def _affine_d(n: int) -> ExchangeMatrix:
    # affine D_n diagram: n+1 vertices, forked at both ends
    edges = [(0, 2), (1, 2)]
    prev = 2
    for v in range(3, n - 1):
        edges.append((prev, v))
        prev = v
    edges += [(prev, n - 1), (prev, n)]
    return from_edges(n + 1, edges)


# ---------------------------------------------------------------------------
# type recognition

_CLASS_CACHE: dict[tuple, frozenset] = {}


def _class_keys(tag: tuple, budget: int) -> frozenset | None:
    """Canonical keys of a catalog class; None if the budget truncated it."""
    cached = _CLASS_CACHE.get(tag)
    if cached is not None:
        return cached
    cls = mutation_class(make_quiver(tag[0], *tag[1]), max_size=budget)
    if not cls.complete:
        return None
    keys = frozenset(M.rows for M in cls.matrices)
    _CLASS_CACHE[tag] = keys
    return keys


def _candidates(n: int):
    cands = [("A", (n,))]
    if n >= 4:
        cands.append(("D", (n,)))
    if n in (6, 7, 8):
        cands.append(("E", (n,)))
    for n1 in range((n + 1) // 2, n):
        n2 = n - n1
        if n2 >= 1:
            cands.append(("AffineA", (n1, n2)))
    if n - 1 >= 4:
        cands.append(("AffineD", (n - 1,)))
    if n - 1 in (6, 7, 8):
        cands.append(("AffineE", (n - 1,)))
    if n - 2 in (6, 7, 8):
        cands.append(("ExtAffE", (n - 2,)))
    for n1 in range(1, n - 3 + 1):
        n2 = n - 3 - n1
        if 1 <= n2 <= n1:
            cands.append(("Gamma2", (n1, n2)))
    for n1 in range(1, n - 2):
        for n2 in range(1, n1 + 1):
            n3 = n - 3 - n1 - n2
            if 1 <= n3 <= n2:
                cands.append(("Gamma3", (n1, n2, n3)))
    return cands


def recognize_type(B: ExchangeMatrix, budget: int = 20000) -> str:
    """Match B's mutation class against the named catalog.

    Returns a tag such as "A(3)", "AffineA(2,1)" or "ExtAffE(6)"; "Unknown"
    when nothing matches within the exploration budget.
    """
    key = canonical_form(B).rows
    for kind, params in _candidates(B.n):
        keys = _class_keys((kind, params), budget)
        if keys is not None and key in keys:
            return f"{kind}({','.join(str(p) for p in params)})"
    return "Unknown"


def class_ceiling_default() -> int:
    return int(os.environ.get("SURFCLUSTER_CLASS_CEILING", "60000"))
