"""Tagged triangulations over combinatorial maps.

A tagged triangulation is stored as its associated ordinary triangulation
(the map of plain arcs, with a self-folded triangle wherever a puncture has
signature 0) plus the per-puncture signature. At a signature-0 puncture the
fold arc's label carries the plain radius and the enclosing loop's label the
notched one; flips re-normalize to this convention, so equal tagged
triangulations have equal representations.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import trimap
from .mutation import ExchangeMatrix
from .trimap import IdealTriangulation, flip, is_flippable, signed_adjacency


class ArcNotPresent(ValueError):
    pass


PLAIN = 1
NOTCHED = -1


@dataclass(frozen=True)
class TaggedTriangulation:
    base: IdealTriangulation
    signatures: tuple[tuple[int, int], ...]  # (puncture vertex, signature) sorted

    def sig(self, v: int) -> int:
        return dict(self.signatures)[v]

    def signature(self) -> dict[int, int]:
        return dict(self.signatures)

    @property
    def num_arcs(self) -> int:
        return self.base.num_arcs

    def radius_pairs(self) -> dict[int, tuple[int, int]]:
        """signature-0 puncture -> (plain radius label, notched radius label)."""
        return {v: (fold, loop) for v, (fold, loop) in self.base.enclosed_punctures().items()}

    def tagged_ends(self) -> dict[int, list[tuple[int, int]]]:
        """puncture -> [(arc label, tag)] over all tagged arc ends at it."""
        sig = self.signature()
        out: dict[int, list[tuple[int, int]]] = {v: [] for v in sig}
        enclosed = self.base.enclosed_punctures()
        for v, (fold, loop) in enclosed.items():
            out[v] = [(fold, PLAIN), (loop, NOTCHED)]
        for tri in self.base.triangles:
            if tri.self_folded:
                continue
            for i in range(3):
                e = tri.edges[i]
                if not self.base.is_arc(e):
                    continue
                a = tri.vertices[i]
                if a in sig and a not in enclosed:
                    out[a].append((e, sig[a]))
        # every slot start was counted once; an arc end at v corresponds to
        # exactly one slot start over the arc's two slots
        return out

    def to_json(self) -> dict:
        data = self.base.to_json()
        data["signature"] = {str(v): s for v, s in self.signatures}
        return data


def tag_with(T0: IdealTriangulation, signs: dict[int, int] | None = None) -> TaggedTriangulation:
    """Tag an ordinary triangulation under the given sign choice.

    Loops cutting once-punctured monogons become notched radii; punctures
    assigned -1 get all their tags toggled. Signature-0 punctures keep the
    fold label on the plain radius whatever the sign there says.
    """
    signs = signs or {}
    enclosed = T0.enclosed_punctures()
    sig = []
    for v in T0.punctures():
        if v in enclosed:
            sig.append((v, 0))
        else:
            sig.append((v, PLAIN if signs.get(v, 1) >= 0 else NOTCHED))
    return TaggedTriangulation(T0, tuple(sorted(sig)))


def untag(T: TaggedTriangulation) -> IdealTriangulation:
    """The ordinary triangulation underlying T (its plain-arc companion)."""
    return T.base


def b_matrix(T: TaggedTriangulation) -> ExchangeMatrix:
    return signed_adjacency(T.base)


def tagged_flip(T: TaggedTriangulation, k: int) -> TaggedTriangulation:
    """Flip the tagged arc labeled k; the unique other completion wins.

    Map level: flip k itself, except that the plain radius at a signature-0
    puncture flips through the enclosing loop. Tags of the completion come
    from signs(a) = sign of the remaining tags at a (+1 where ambiguous), and
    fold/loop labels are swapped wherever signs = -1 to restore the storage
    convention.
    """
    base = T.base
    if not base.is_arc(k):
        raise ArcNotPresent(f"{k} is not an arc of this tagged triangulation")

    ends = T.tagged_ends()
    signs: dict[int, int] = {}
    for v, lst in ends.items():
        remaining = {tag for (e, tag) in lst if e != k}
        if not remaining:
            raise ArcNotPresent(f"puncture {v} would lose all its tagged ends")
        signs[v] = PLAIN if remaining == {PLAIN} else NOTCHED if remaining == {NOTCHED} else PLAIN

    fold_of = {fold: loop for fold, loop in base.fold_map().items()}
    flip_edge = fold_of.get(k, k)
    M2 = flip(base, flip_edge)
    if flip_edge != k:
        # new diagonal must carry k; the surviving old fold becomes the loop's label
        M2 = M2.relabel_arcs({flip_edge: k, k: flip_edge})

    swaps: dict[int, int] = {}
    for v, (fold, loop) in M2.enclosed_punctures().items():
        if signs[v] == NOTCHED:
            swaps[fold] = loop
            swaps[loop] = fold
    if swaps:
        M2 = M2.relabel_arcs(swaps)

    enclosed2 = M2.enclosed_punctures()
    sig2 = tuple(sorted((v, 0 if v in enclosed2 else signs[v]) for v in signs))
    return TaggedTriangulation(M2, sig2)


def canonical_key(T: TaggedTriangulation) -> tuple:
    return trimap.canonical_key(T.base, extra=T.signatures)


@dataclass(frozen=True)
class FlipGraph:
    nodes: tuple[TaggedTriangulation, ...]
    edges: tuple[tuple[int, int], ...]
    truncated: bool

    def to_json(self) -> dict:
        return {
            "vertices": [_key_string(canonical_key(T)) for T in self.nodes],
            "edges": [list(e) for e in self.edges],
            "truncated": self.truncated,
        }

    def to_dot(self) -> str:
        lines = ["graph tagged_flips {"]
        for i, T in enumerate(self.nodes):
            sig = " ".join(f"{v}:{s:+d}" for v, s in T.signatures)
            lines.append(f'  n{i} [label="{i} {sig}"];')
        for i, j in self.edges:
            lines.append(f"  n{i} -- n{j};")
        lines.append("}")
        return "\n".join(lines)


def _key_string(key) -> str:
    return repr(key)


def _thread_count() -> int:
    return max(1, int(os.environ.get("SURFCLUSTER_THREADS", "1")))


def exchange_graph_bfs(T0: TaggedTriangulation, max_nodes: int = 1000,
                       threads: int | None = None) -> FlipGraph:
    """BFS over tagged flips, deduplicating by canonical map encoding.

    The encoding quotients by arc relabeling with vertices and boundary
    segments pinned; on surfaces with infinitely many arcs this identifies
    triangulations related by mapping classes, which is what makes the
    search finite there.
    """
    if max_nodes < 1:
        raise ValueError("max_nodes must be positive")
    workers = threads if threads is not None else _thread_count()
    nodes = [T0]
    index = {canonical_key(T0): 0}
    edges = set()
    truncated = False
    frontier = [0]
    while frontier:
        moves = [(i, k) for i in frontier for k in range(nodes[i].num_arcs)]
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                flipped = list(pool.map(lambda mv: tagged_flip(nodes[mv[0]], mv[1]), moves))
        else:
            flipped = [tagged_flip(nodes[i], k) for i, k in moves]
        nxt = []
        for (i, _), T2 in zip(moves, flipped):
            key = canonical_key(T2)
            j = index.get(key)
            if j is None:
                if len(nodes) >= max_nodes:
                    truncated = True
                    continue
                j = len(nodes)
                index[key] = j
                nodes.append(T2)
                nxt.append(j)
            if j != i:
                edges.add((min(i, j), max(i, j)))
        frontier = nxt
    return FlipGraph(tuple(nodes), tuple(sorted(edges)), truncated)
