"""Bordered surfaces with marked points: validation and classification.

A surface is described by its genus, the multiset of marked-point counts on
its boundary components, and its number of punctures. Validation applies the
exclusion list for surfaces that admit no (or only one) triangulation; the
classifier reports rank, arc finiteness, growth class of the flip graph, and
the homotopy type of the tagged arc complex.
"""

from __future__ import annotations

from dataclasses import dataclass


class ExcludedSurface(ValueError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class EmptyMarking(ValueError):
    pass


class NotRealizable(ValueError):
    pass


@dataclass(frozen=True)
class MarkedSurface:
    """Validated bordered surface with marked points.

    boundary holds one entry per boundary component (marked points on it),
    sorted descending so homeomorphic surfaces compare equal.
    """

    genus: int
    boundary: tuple[int, ...]
    punctures: int

    @property
    def num_boundary(self) -> int:
        return len(self.boundary)

    @property
    def boundary_points(self) -> int:
        return sum(self.boundary)

    @property
    def rank(self) -> int:
        g, b, p, c = self.genus, self.num_boundary, self.punctures, self.boundary_points
        return 6 * g + 3 * b + 3 * p + c - 6

    def is_closed(self) -> bool:
        return not self.boundary

    def is_polygon(self) -> bool:
        return self.genus == 0 and self.num_boundary == 1 and self.punctures == 0

    def is_once_punctured_polygon(self) -> bool:
        return self.genus == 0 and self.num_boundary == 1 and self.punctures == 1

    def to_json(self) -> dict:
        return {"genus": self.genus, "boundary": list(self.boundary), "punctures": self.punctures}

    @staticmethod
    def from_json(data: dict) -> "MarkedSurface":
        return validate_surface(
            genus=data.get("genus", 0),
            boundary=data.get("boundary", []),
            punctures=data.get("punctures", 0),
        )


def validate_surface(genus: int = 0, boundary=(), punctures: int = 0) -> MarkedSurface:
    """Validate a raw descriptor, naming the violated exclusion on rejection."""
    g = int(genus)
    p = int(punctures)
    cs = tuple(int(c) for c in boundary)
    if g < 0 or p < 0 or any(c < 0 for c in cs):
        raise ValueError("genus, boundary counts and punctures must be nonnegative")
    if any(c == 0 for c in cs):
        raise EmptyMarking("every boundary component needs at least one marked point")
    c = sum(cs)
    if c + p == 0:
        raise EmptyMarking("the set of marked points is empty")
    b = len(cs)
    if g == 0 and b == 0:
        if p == 1:
            raise ExcludedSurface("once-punctured sphere")
        if p == 2:
            raise ExcludedSurface("twice-punctured sphere")
        if p == 3:
            raise ExcludedSurface("thrice-punctured sphere")
    if g == 0 and b == 1:
        if p == 0:
            if c == 1:
                raise ExcludedSurface("unpunctured monogon")
            if c == 2:
                raise ExcludedSurface("unpunctured digon")
            if c == 3:
                raise ExcludedSurface("unpunctured triangle")
        if p == 1 and c == 1:
            raise ExcludedSurface("once-punctured monogon")
    return MarkedSurface(genus=g, boundary=tuple(sorted(cs, reverse=True)), punctures=p)


@dataclass(frozen=True)
class Growth:
    """Growth class of the flip graph; params identify the named family."""

    family: str  # A | D | AffineA | AffineD | Gamma2 | Gamma3 | Exponential
    params: tuple[int, ...] = ()

    def __str__(self):
        if self.family == "Exponential":
            return "Exponential"
        return f"{self.family}({','.join(str(p) for p in self.params)})"


@dataclass(frozen=True)
class Homotopy:
    kind: str  # sphere | contractible
    dim: int | None = None

    def __str__(self):
        return f"S^{self.dim}" if self.kind == "sphere" else "contractible"


@dataclass(frozen=True)
class SurfaceClassification:
    rank: int
    finite_arcs: bool
    growth: Growth
    homotopy: Homotopy
    note: str | None = None

    def to_json(self) -> dict:
        out = {
            "rank": self.rank,
            "finite_arcs": self.finite_arcs,
            "growth": str(self.growth),
            "homotopy": str(self.homotopy),
        }
        if self.note:
            out["note"] = self.note
        return out


# Cartan labels that coincide across surface shapes; reported as a comment,
# never as the primary family.
_CARTAN_NOTES = {
    ("D", 2): "Cartan type A1 x A1",
    ("D", 3): "Cartan type A3",
    ("AffineD", 3): "Cartan type AffineA(2,2)",
}


def classify(s: MarkedSurface) -> SurfaceClassification:
    """Rank, arc finiteness, growth family and arc-complex homotopy type."""
    g, b, p = s.genus, s.num_boundary, s.punctures
    cs = s.boundary
    n = s.rank

    finite_arcs = s.is_polygon() or s.is_once_punctured_polygon()

    if g == 0 and b + p <= 3 and b >= 1:
        if b == 1 and p == 0:
            growth = Growth("A", (n,))
        elif b == 1 and p == 1:
            growth = Growth("D", (n,))
        elif b == 1 and p == 2:
            growth = Growth("AffineD", (n - 1,))
        elif b == 2 and p == 0:
            growth = Growth("AffineA", (cs[0], cs[1]))
        elif b == 2 and p == 1:
            growth = Growth("Gamma2", (cs[0], cs[1]))
        else:  # b == 3, p == 0
            growth = Growth("Gamma3", (cs[0], cs[1], cs[2]))
    else:
        growth = Growth("Exponential")

    if finite_arcs:
        homotopy = Homotopy("sphere", n - 1)
    elif s.is_closed():
        homotopy = Homotopy("sphere", p - 1)
    else:
        homotopy = Homotopy("contractible")

    note = _CARTAN_NOTES.get((growth.family, growth.params[0]) if growth.params else None)
    return SurfaceClassification(rank=n, finite_arcs=finite_arcs, growth=growth, homotopy=homotopy, note=note)


def recover_genus_punctures(n: int, r: int) -> tuple[int, int]:
    """Genus and puncture count of a closed surface from (matrix size, rank).

    The caller asserts the matrix came from a triangulation of a closed
    surface; raises NotRealizable when no such surface exists.
    """
    if r % 2 != 0:
        raise NotRealizable("skew-symmetric rank must be even")
    if (3 * r - 2 * n + 6) % 6 != 0:
        raise NotRealizable("3r - 2n + 6 is not divisible by 6")
    g = (3 * r - 2 * n + 6) // 6
    p = n - r
    if g < 0:
        raise NotRealizable("negative genus")
    if p < 1:
        raise NotRealizable("a closed marked surface needs at least one puncture")
    try:
        validate_surface(genus=g, boundary=(), punctures=p)
    except (ExcludedSurface, EmptyMarking) as exc:
        raise NotRealizable(str(exc)) from exc
    return g, p
