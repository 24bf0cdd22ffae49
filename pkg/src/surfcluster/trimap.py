"""Ideal triangulations as oriented combinatorial maps.

A triangulation is a list of triangles, each carrying its three corner
vertices and three side edges in counterclockwise cyclic order: side i runs
from corner i to corner i+1. Edge ids 0..n-1 are arcs (each in exactly two
side slots, traversed in opposite directions), ids n..n+c-1 are boundary
segments (one slot each). Self-folded triangles put the same arc in two of
their own slots.

The validator enforces slot counts, opposite traversal, the Euler count,
vertex-link consistency and the rank formula; every constructor and flip
runs it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .mutation import ExchangeMatrix
from .surface import MarkedSurface


class UnknownArc(ValueError):
    pass


class NotFlippable(ValueError):
    pass


class InvalidTriangulation(ValueError):
    pass


@dataclass(frozen=True)
class Triangle:
    vertices: tuple[int, int, int]
    edges: tuple[int, int, int]

    @property
    def self_folded(self) -> bool:
        e = self.edges
        return e[0] == e[1] or e[1] == e[2] or e[0] == e[2]

    def fold_data(self):
        """(fold edge, enclosing edge, enclosed corner index) or None."""
        e = self.edges
        for i in range(3):
            if e[i] == e[(i + 1) % 3]:
                return e[i], e[(i + 2) % 3], (i + 1) % 3
        return None

    def rotated(self, r: int) -> "Triangle":
        return Triangle(
            tuple(self.vertices[(r + i) % 3] for i in range(3)),
            tuple(self.edges[(r + i) % 3] for i in range(3)),
        )

    def normalized(self) -> "Triangle":
        return min((self.rotated(r) for r in range(3)), key=lambda t: (t.edges, t.vertices))


class IdealTriangulation:
    """Immutable triangulated marked surface; flips return new values."""

    def __init__(self, surface: MarkedSurface, triangles, num_arcs: int,
                 num_boundary: int, puncture_flags, validate: bool = True):
        self.surface = surface
        self.triangles = tuple(t if isinstance(t, Triangle) else Triangle(tuple(t[0]), tuple(t[1]))
                               for t in triangles)
        self.num_arcs = num_arcs
        self.num_boundary = num_boundary
        self.puncture_flags = tuple(bool(f) for f in puncture_flags)
        self._normal = None
        if validate:
            self.validate()

    # -- basic queries ----------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.puncture_flags)

    def is_arc(self, e: int) -> bool:
        return 0 <= e < self.num_arcs

    def arcs(self):
        return range(self.num_arcs)

    def punctures(self):
        return [v for v, f in enumerate(self.puncture_flags) if f]

    def arc_slots(self, e: int) -> list[tuple[int, int]]:
        out = []
        for t, tri in enumerate(self.triangles):
            for i in range(3):
                if tri.edges[i] == e:
                    out.append((t, i))
        return out

    def fold_map(self) -> dict[int, int]:
        """fold arc -> enclosing loop, for every self-folded triangle."""
        out = {}
        for tri in self.triangles:
            fd = tri.fold_data()
            if fd is not None:
                fold, loop, _ = fd
                out[fold] = loop
        return out

    def enclosed_punctures(self) -> dict[int, tuple[int, int]]:
        """puncture vertex -> (fold arc, loop edge) for self-folded triangles."""
        out = {}
        for tri in self.triangles:
            fd = tri.fold_data()
            if fd is not None:
                fold, loop, corner = fd
                out[tri.vertices[corner]] = (fold, loop)
        return out

    # -- validation --------------------------------------------------------

    def validate(self):
        s = self.surface
        n, c = self.num_arcs, self.num_boundary
        if n != s.rank:
            raise InvalidTriangulation(f"{n} arcs but surface rank is {s.rank}")
        if c != s.boundary_points:
            raise InvalidTriangulation("boundary segment count must equal marked boundary points")
        if len(self.puncture_flags) != s.boundary_points + s.punctures:
            raise InvalidTriangulation("vertex count must equal number of marked points")
        if sum(self.puncture_flags) != s.punctures:
            raise InvalidTriangulation("puncture flag count mismatch")

        slots: dict[int, list[tuple[int, int]]] = {}
        for t, tri in enumerate(self.triangles):
            for i in range(3):
                e = tri.edges[i]
                if not 0 <= e < n + c:
                    raise InvalidTriangulation(f"edge id {e} out of range")
                slots.setdefault(e, []).append((t, i))
            for v in tri.vertices:
                if not 0 <= v < self.num_vertices:
                    raise InvalidTriangulation(f"vertex id {v} out of range")
        for e in range(n + c):
            occ = slots.get(e, [])
            if self.is_arc(e):
                if len(occ) != 2:
                    raise InvalidTriangulation(f"arc {e} occupies {len(occ)} slots")
                (t1, i1), (t2, i2) = occ
                a1, b1 = self._slot_ends(t1, i1)
                a2, b2 = self._slot_ends(t2, i2)
                if (a1, b1) != (b2, a2):
                    raise InvalidTriangulation(f"arc {e} is not traversed in opposite directions")
            else:
                if len(occ) != 1:
                    raise InvalidTriangulation(f"boundary segment {e} occupies {len(occ)} slots")

        V = self.num_vertices
        E = n + c
        F = len(self.triangles)
        chi = V - E + F
        g, b = s.genus, s.num_boundary
        if chi != 2 - 2 * g - b:
            raise InvalidTriangulation(f"Euler characteristic {chi} != {2 - 2 * g - b}")

        self._check_links(slots)

    def _slot_ends(self, t: int, i: int) -> tuple[int, int]:
        tri = self.triangles[t]
        return tri.vertices[i], tri.vertices[(i + 1) % 3]

    def _check_links(self, slots):
        # Rotating around a vertex: corner (t, i) -> cross the outgoing side
        # slot (t, i); its partner slot (t', i') ends at the same vertex, so
        # the next corner is (t', i'+1). Punctures must close into one cycle,
        # boundary vertices form one path ending at boundary slots.
        partner = {}
        for e, occ in slots.items():
            if self.is_arc(e):
                (t1, i1), (t2, i2) = occ
                partner[(t1, i1)] = (t2, i2)
                partner[(t2, i2)] = (t1, i1)
        corners_at: dict[int, set] = {}
        for t, tri in enumerate(self.triangles):
            for i in range(3):
                corners_at.setdefault(tri.vertices[i], set()).add((t, i))
        for v in range(self.num_vertices):
            corners = corners_at.get(v, set())
            if not corners:
                raise InvalidTriangulation(f"vertex {v} has no corners")
            if self.puncture_flags[v]:
                start = next(iter(corners))
                seen = set()
                cur = start
                while cur not in seen:
                    seen.add(cur)
                    t, i = cur
                    nxt = partner.get((t, i))
                    if nxt is None:
                        raise InvalidTriangulation(f"puncture {v} touches the boundary")
                    cur = (nxt[0], (nxt[1] + 1) % 3)
                if seen != corners or cur != start:
                    raise InvalidTriangulation(f"link of puncture {v} is not a single cycle")
            else:
                # walk backward to the boundary, then forward through all corners
                starts = [cr for cr in corners
                          if partner.get((cr[0], (cr[1] + 2) % 3)) is None]
                if len(starts) != 1:
                    raise InvalidTriangulation(f"boundary vertex {v} has {len(starts)} link starts")
                cur = starts[0]
                seen = set()
                while True:
                    if cur in seen:
                        raise InvalidTriangulation(f"link of boundary vertex {v} loops")
                    seen.add(cur)
                    nxt = partner.get(cur)
                    if nxt is None:
                        break
                    cur = (nxt[0], (nxt[1] + 1) % 3)
                if seen != corners:
                    raise InvalidTriangulation(f"link of boundary vertex {v} is disconnected")

    # -- equality up to representation ------------------------------------

    def normal_form(self):
        if self._normal is None:
            tris = sorted((t.normalized() for t in self.triangles),
                          key=lambda t: (t.edges, t.vertices))
            self._normal = (self.surface, self.num_arcs, self.num_boundary,
                            self.puncture_flags, tuple((t.edges, t.vertices) for t in tris))
        return self._normal

    def __eq__(self, other):
        return isinstance(other, IdealTriangulation) and self.normal_form() == other.normal_form()

    def __hash__(self):
        return hash(self.normal_form())

    def relabel_arcs(self, perm: dict[int, int]) -> "IdealTriangulation":
        """New triangulation with arc e renamed perm.get(e, e)."""
        tris = [Triangle(t.vertices, tuple(perm.get(e, e) if self.is_arc(e) else e for e in t.edges))
                for t in self.triangles]
        return IdealTriangulation(self.surface, tris, self.num_arcs, self.num_boundary,
                                  self.puncture_flags)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "surface": self.surface.to_json(),
            "triangles": [{"v": list(t.vertices), "e": list(t.edges)} for t in self.triangles],
            "arcs": self.num_arcs,
            "boundary_segments": self.num_boundary,
            "punctures": [v for v in range(self.num_vertices) if self.puncture_flags[v]],
        }

    @staticmethod
    def from_json(data: dict) -> "IdealTriangulation":
        surf = MarkedSurface.from_json(data["surface"])
        num_vertices = max(max(t["v"]) for t in data["triangles"]) + 1
        punctures = set(data.get("punctures", []))
        flags = [v in punctures for v in range(num_vertices)]
        tris = [Triangle(tuple(t["v"]), tuple(t["e"])) for t in data["triangles"]]
        return IdealTriangulation(surf, tris, data["arcs"], data["boundary_segments"], flags)


# ---------------------------------------------------------------------------
# construction


class _Builder:
    """Mutable scratch state; ids are relabeled canonically on finish."""

    def __init__(self):
        self.triangles: list[tuple[list[int], list[int]]] = []
        self.edge_kind: dict[int, str] = {}
        self.boundary_component: dict[int, int] = {}
        self.vertex_puncture: dict[int, bool] = {}
        self._next_edge = 0
        self._next_vertex = 0

    def new_vertex(self, puncture: bool) -> int:
        v = self._next_vertex
        self._next_vertex += 1
        self.vertex_puncture[v] = puncture
        return v

    def new_edge(self, kind: str, component: int | None = None) -> int:
        e = self._next_edge
        self._next_edge += 1
        self.edge_kind[e] = kind
        if kind == "boundary":
            self.boundary_component[e] = component
        return e

    def add_triangle(self, verts, edges):
        self.triangles.append((list(verts), list(edges)))

    def boundary_slots(self, component: int | None = None):
        out = []
        for t, (_, edges) in enumerate(self.triangles):
            for i, e in enumerate(edges):
                if self.edge_kind[e] == "boundary":
                    if component is None or self.boundary_component[e] == component:
                        out.append((t, i, e))
        return out

    def subdivide(self, t: int):
        """Insert a puncture inside triangle t (one triangle -> three)."""
        verts, edges = self.triangles[t]
        u, v, w = verts
        e0, e1, e2 = edges
        q = self.new_vertex(puncture=True)
        ru = self.new_edge("arc")
        rv = self.new_edge("arc")
        rw = self.new_edge("arc")
        self.triangles[t] = ([u, v, q], [e0, rv, ru])
        self.add_triangle([v, w, q], [e1, rw, rv])
        self.add_triangle([w, u, q], [e2, ru, rw])

    def split_boundary(self, component: int):
        """Add one marked point on the given boundary component."""
        t, i, _seg = self.boundary_slots(component)[0]
        verts, edges = self.triangles[t]
        u, v, w = verts[i], verts[(i + 1) % 3], verts[(i + 2) % 3]
        f, g = edges[(i + 1) % 3], edges[(i + 2) % 3]
        m = self.new_vertex(puncture=False)
        s1 = self.new_edge("boundary", component)
        s2 = self.new_edge("boundary", component)
        d = self.new_edge("arc")
        self.triangles[t] = ([u, m, w], [s1, d, g])
        self.add_triangle([m, v, w], [s2, f, d])

    def finish(self, surface: MarkedSurface) -> IdealTriangulation:
        arc_order: list[int] = []
        bnd_order: list[int] = []
        vert_order: list[int] = []
        seen_e, seen_v = set(), set()
        for verts, edges in self.triangles:
            for e in edges:
                if e not in seen_e:
                    seen_e.add(e)
                    (arc_order if self.edge_kind[e] == "arc" else bnd_order).append(e)
            for v in verts:
                if v not in seen_v:
                    seen_v.add(v)
                    vert_order.append(v)
        n = len(arc_order)
        emap = {e: i for i, e in enumerate(arc_order)}
        emap.update({e: n + i for i, e in enumerate(bnd_order)})
        vmap = {v: i for i, v in enumerate(vert_order)}
        tris = [Triangle(tuple(vmap[v] for v in verts), tuple(emap[e] for e in edges))
                for verts, edges in self.triangles]
        flags = [False] * len(vert_order)
        for v, i in vmap.items():
            flags[i] = self.vertex_puncture[v]
        return IdealTriangulation(surface, tris, n, len(bnd_order), flags)


def _fan_polygon(bld: _Builder, c: int, component: int = 0):
    """Unpunctured c-gon fan (c >= 3): returns the list of corner vertices."""
    vs = [bld.new_vertex(False) for _ in range(c)]
    sides = [bld.new_edge("boundary", component) for _ in range(c)]
    diag = {}
    for i in range(2, c - 1):
        diag[i] = bld.new_edge("arc")
    for i in range(1, c - 1):
        e0 = sides[0] if i == 1 else diag[i]
        e2 = sides[c - 1] if i == c - 2 else diag[i + 1]
        bld.add_triangle([vs[0], vs[i], vs[i + 1]], [e0, sides[i], e2])
    return vs


def _wheel(bld: _Builder, c: int, component: int = 0):
    """Once-punctured c-gon: all boundary vertices joined to the puncture."""
    vs = [bld.new_vertex(False) for _ in range(c)]
    center = bld.new_vertex(True)
    sides = [bld.new_edge("boundary", component) for _ in range(c)]
    radii = [bld.new_edge("arc") for _ in range(c)]
    for i in range(c):
        j = (i + 1) % c
        bld.add_triangle([vs[i], vs[j], center], [sides[i], radii[j], radii[i]])


def _glued_polygon(bld: _Builder, g: int, b: int):
    """Fan-triangulated disk with side identifications.

    Boundary word: g handle quadruples a b a' b', then for each extra
    boundary component a tether pair t f t', then one free side for
    component 0. Free sides become boundary segments with one marked point
    per component; glued pairs become arcs.
    """
    word: list[tuple[str, object]] = []
    for h in range(g):
        word += [("glue", ("a", h, 0)), ("glue", ("b", h, 0)),
                 ("glue", ("a", h, 1)), ("glue", ("b", h, 1))]
    for comp in range(1, b):
        word += [("glue", ("t", comp, 0)), ("free", comp), ("glue", ("t", comp, 1))]
    if b >= 1:
        word += [("free", 0)]
    K = len(word)
    if K < 3:
        raise InvalidTriangulation("polygon template needs at least 3 sides")

    # union-find over template corners driven by the identifications
    parent = list(range(K))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    first: dict[tuple, int] = {}
    for i, (kind, datum) in enumerate(word):
        if kind == "glue":
            name = datum[:2]
            if name in first:
                j = first[name]
                # side j runs P_j -> P_{j+1}; side i is the reversed copy
                union(j, (i + 1) % K)
                union((j + 1) % K, i)
            else:
                first[name] = i

    corner_vertex = {}
    for i in range(K):
        root = find(i)
        if root not in corner_vertex:
            corner_vertex[root] = bld.new_vertex(False)
    vs = [corner_vertex[find(i)] for i in range(K)]

    side_edge: dict[int, int] = {}
    first.clear()
    for i, (kind, datum) in enumerate(word):
        if kind == "free":
            side_edge[i] = bld.new_edge("boundary", datum)
        else:
            name = datum[:2]
            if name in first:
                side_edge[i] = side_edge[first[name]]
            else:
                first[name] = i
                side_edge[i] = bld.new_edge("arc")

    diag = {i: bld.new_edge("arc") for i in range(2, K - 1)}
    for i in range(1, K - 1):
        e0 = side_edge[0] if i == 1 else diag[i]
        e2 = side_edge[K - 1] if i == K - 2 else diag[i + 1]
        bld.add_triangle([vs[0], vs[i], vs[i + 1]], [e0, side_edge[i], e2])


def initial_triangulation(s: MarkedSurface) -> IdealTriangulation:
    """A deterministic triangulation of s without self-folded triangles.

    Template: a fan-triangulated disk whose boundary word encodes handles
    and extra boundary components, a wheel for once-punctured polygons, and
    the boundary of a tetrahedron for spheres; remaining punctures enter by
    triangle subdivision and extra marked points by boundary splits.
    """
    bld = _Builder()
    g, b, p = s.genus, s.num_boundary, s.punctures
    cs = s.boundary
    extra_punctures = p

    if b == 0:
        if g == 0:
            # boundary of a tetrahedron: a 4-punctured sphere
            vs = [bld.new_vertex(True) for _ in range(4)]
            eid = {}
            for pair in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]:
                eid[pair] = bld.new_edge("arc")

            def E(x, y):
                return eid[(min(x, y), max(x, y))]

            for (x, y, z) in [(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)]:
                bld.add_triangle([vs[x], vs[y], vs[z]], [E(x, y), E(y, z), E(z, x)])
            extra_punctures = p - 4
        else:
            # 4g-gon with all corners identified to one puncture
            K = 4 * g
            v = bld.new_vertex(True)
            side_edge = {}
            for h in range(g):
                ea = bld.new_edge("arc")
                eb = bld.new_edge("arc")
                side_edge[4 * h] = ea
                side_edge[4 * h + 1] = eb
                side_edge[4 * h + 2] = ea
                side_edge[4 * h + 3] = eb
            diag = {i: bld.new_edge("arc") for i in range(2, K - 1)}
            for i in range(1, K - 1):
                e0 = side_edge[0] if i == 1 else diag[i]
                e2 = side_edge[K - 1] if i == K - 2 else diag[i + 1]
                bld.add_triangle([v, v, v], [e0, side_edge[i], e2])
            extra_punctures = p - 1
    elif g == 0 and b == 1:
        if p == 0:
            _fan_polygon(bld, cs[0])
        else:
            _wheel(bld, cs[0])
            extra_punctures = p - 1
    else:
        _glued_polygon(bld, g, b)
        # component j currently has one marked point; add the rest
        for comp, cj in enumerate(cs):
            for _ in range(cj - 1):
                bld.split_boundary(comp)

    for _ in range(extra_punctures):
        target = None
        for t, (_, edges) in enumerate(bld.triangles):
            if len(set(edges)) < 3:  # clear self-folded intermediates first
                target = t
                break
        if target is None:
            target = len(bld.triangles) - 1
        bld.subdivide(target)

    tri = bld.finish(s)
    if any(t.self_folded for t in tri.triangles):
        raise InvalidTriangulation("initial triangulation must avoid self-folded triangles")
    return tri


# ---------------------------------------------------------------------------
# flips


def is_flippable(T: IdealTriangulation, k: int) -> bool:
    """False exactly when k is the fold of a self-folded triangle."""
    if not T.is_arc(k):
        raise UnknownArc(f"{k} is not an arc of this triangulation")
    (t1, _), (t2, _) = T.arc_slots(k)
    return t1 != t2


def flip(T: IdealTriangulation, k: int) -> IdealTriangulation:
    """Replace arc k by the other diagonal of its quadrilateral.

    Slot-level rewiring, so repeated side ids (loops, identified sides,
    newly created self-folded triangles) need no special cases. The new arc
    reuses id k.
    """
    if not is_flippable(T, k):
        raise NotFlippable(f"arc {k} is the fold of a self-folded triangle")
    (t1, i1), (t2, i2) = T.arc_slots(k)
    tri1, tri2 = T.triangles[t1], T.triangles[t2]
    A = tri1.vertices[i1]
    Bv = tri1.vertices[(i1 + 1) % 3]
    C = tri1.vertices[(i1 + 2) % 3]
    D = tri2.vertices[(i2 + 2) % 3]
    x = tri1.edges[(i1 + 1) % 3]
    y = tri1.edges[(i1 + 2) % 3]
    z = tri2.edges[(i2 + 1) % 3]
    w = tri2.edges[(i2 + 2) % 3]
    new1 = Triangle((C, A, D), (y, z, k))
    new2 = Triangle((D, Bv, C), (w, x, k))
    tris = list(T.triangles)
    tris[t1] = new1
    tris[t2] = new2
    return IdealTriangulation(T.surface, tris, T.num_arcs, T.num_boundary, T.puncture_flags)


# ---------------------------------------------------------------------------
# signed adjacency and signature


def signed_adjacency(T: IdealTriangulation) -> ExchangeMatrix:
    """Signed adjacency matrix B(T), summed over non-self-folded triangles.

    Fold arcs contribute through their enclosing loop; entries land in
    {0, +-1, +-2} and B is skew-symmetric.
    """
    n = T.num_arcs
    fold = T.fold_map()
    pre: dict[int, list[int]] = {}
    for a in range(n):
        img = fold.get(a, a)
        pre.setdefault(img, []).append(a)
    rows = [[0] * n for _ in range(n)]
    for tri in T.triangles:
        if tri.self_folded:
            continue
        for i in range(3):
            u = tri.edges[i]
            v = tri.edges[(i + 1) % 3]
            if T.is_arc(u) and T.is_arc(v):
                for a in pre.get(u, ()):
                    for bb in pre.get(v, ()):
                        rows[a][bb] -= 1
                        rows[bb][a] += 1
    return ExchangeMatrix.from_rows(rows)


def signature(T: IdealTriangulation) -> dict[int, int]:
    """0 at punctures enclosed by a self-folded triangle, 1 elsewhere."""
    enclosed = T.enclosed_punctures()
    return {v: (0 if v in enclosed else 1) for v in T.punctures()}


# ---------------------------------------------------------------------------
# canonical keys and flip-graph search


def canonical_key(T: IdealTriangulation, extra=()) -> tuple:
    """Canonical encoding up to arc relabeling (vertices and boundary fixed).

    Deterministic traversal from every (triangle, rotation) start; arcs are
    numbered in discovery order, the minimum serialization wins. Extra data
    (e.g. tag signatures) is appended verbatim.
    """
    tris = T.triangles
    F = len(tris)
    n = T.num_arcs
    partner: dict[tuple[int, int], tuple[int, int]] = {}
    slots: dict[int, list[tuple[int, int]]] = {}
    for t, tri in enumerate(tris):
        for i in range(3):
            slots.setdefault(tri.edges[i], []).append((t, i))
    for e, occ in slots.items():
        if T.is_arc(e):
            (t1, i1), (t2, i2) = occ
            partner[(t1, i1)] = (t2, i2)
            partner[(t2, i2)] = (t1, i1)

    best = None
    for t0 in range(F):
        for r0 in range(3):
            arcnum: dict[int, int] = {}
            out = []
            visited = {t0}
            queue = [(t0, r0)]
            qi = 0
            while qi < len(queue):
                t, r = queue[qi]
                qi += 1
                tri = tris[t]
                row = []
                for idx in range(3):
                    sl = (r + idx) % 3
                    e = tri.edges[sl]
                    if T.is_arc(e):
                        if e not in arcnum:
                            arcnum[e] = len(arcnum)
                        row.append((0, arcnum[e], tri.vertices[sl]))
                    else:
                        row.append((1, e, tri.vertices[sl]))
                out.append(tuple(row))
                for idx in range(3):
                    sl = (r + idx) % 3
                    e = tri.edges[sl]
                    if T.is_arc(e):
                        t2, i2 = partner[(t, sl)]
                        if t2 not in visited:
                            visited.add(t2)
                            queue.append((t2, i2))
            cand = tuple(out)
            if best is None or cand < best:
                best = cand
    return (best, tuple(extra))


def flip_graph_bfs(T0: IdealTriangulation, max_nodes: int = 1000, labeled: bool = True):
    """BFS over ordinary flips.

    labeled=True explores distinct labeled triangulations (used for flip vs
    mutation checks); labeled=False identifies arc relabelings via
    canonical_key, matching the semantics of the tagged search.

    Returns (nodes, edges, truncated): nodes are triangulations in discovery
    order, edges are index pairs.
    """
    def key(T):
        return T.normal_form() if labeled else canonical_key(T)

    nodes = [T0]
    index = {key(T0): 0}
    edges = set()
    truncated = False
    qi = 0
    while qi < len(nodes):
        T = nodes[qi]
        for k in T.arcs():
            if not is_flippable(T, k):
                continue
            T2 = flip(T, k)
            k2 = key(T2)
            j = index.get(k2)
            if j is None:
                if len(nodes) >= max_nodes:
                    truncated = True
                    continue
                j = len(nodes)
                index[k2] = j
                nodes.append(T2)
            if j != qi:
                edges.add((min(qi, j), max(qi, j)))
        qi += 1
    return nodes, sorted(edges), truncated
