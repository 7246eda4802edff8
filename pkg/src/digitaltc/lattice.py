"""Digital images: finite sets of lattice points carrying an adjacency relation.

A digital image is a pair (point set, adjacency).  Points live in Z^n, the
adjacency is either one of the standard c_l relations or an explicit edge set
over point indices.  Images are immutable; derived data (edge set, neighbour
lists) is computed once at construction and all enumerations iterate in the
lexicographic point order, so witnesses are reproducible.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

Point = tuple[int, ...]


class InputError(ValueError):
    """Malformed input or a violated precondition."""


class BudgetError(RuntimeError):
    """A configured search budget or enumeration cap was exceeded."""


def as_point(coords) -> Point:
    pt = tuple(int(c) for c in coords)
    if not pt:
        raise InputError("points need at least one coordinate")
    for c, raw in zip(pt, coords):
        if c != raw:
            raise InputError(f"non-integer coordinate {raw!r}")
    return pt


def cl_adjacent(u: Point, v: Point, l: int) -> bool:
    """c_l adjacency: at most l coordinates differ by exactly 1, the rest are equal.

    Irreflexive: a point is never adjacent to itself.
    """
    n = len(u)
    if len(v) != n:
        raise InputError(f"dimension mismatch: {len(u)} vs {len(v)}")
    if not 1 <= l <= n:
        raise InputError(f"l={l} out of range for dimension {n}")
    moved = 0
    for a, b in zip(u, v):
        d = a - b
        if d == 0:
            continue
        if d not in (1, -1):
            return False
        moved += 1
    return 1 <= moved <= l


@dataclass(frozen=True)
class CL:
    """The c_l adjacency relation (c_1 = 4-adjacency and c_2 = 8-adjacency in Z^2)."""

    l: int

    def __post_init__(self):
        if self.l < 1:
            raise InputError(f"c_l needs l >= 1, got {self.l}")


@dataclass(frozen=True)
class Explicit:
    """An explicit symmetric, irreflexive edge set over point indices (i < j pairs)."""

    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        norm = set()
        for e in self.edges:
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise InputError(f"self-loop on index {i}")
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(norm))


AdjacencySpec = CL | Explicit


def _derive_edges(points: tuple[Point, ...], adj: AdjacencySpec) -> frozenset[tuple[int, int]]:
    n = len(points)
    if isinstance(adj, CL):
        dim = len(points[0])
        if adj.l > dim:
            raise InputError(f"c_{adj.l} undefined in dimension {dim}")
        out = set()
        for i in range(n):
            for j in range(i + 1, n):
                if cl_adjacent(points[i], points[j], adj.l):
                    out.add((i, j))
        return frozenset(out)
    for i, j in adj.edges:
        if not (0 <= i < n and 0 <= j < n):
            raise InputError(f"edge ({i},{j}) out of range for {n} points")
    return adj.edges


class DigitalImage:
    """An immutable finite digital image.

    Points are stored sorted lexicographically.  Equality and hashing use the
    point tuple plus the derived edge set, so two images with the same points
    are equal exactly when their adjacency graphs agree.
    """

    __slots__ = ("dim", "points", "adj", "edges", "_nbrs", "_index", "_hash")

    def __init__(self, points, adj: AdjacencySpec, _presorted: bool = False):
        pts = tuple(points) if _presorted else tuple(sorted(as_point(p) for p in points))
        if not pts:
            raise InputError("empty image")
        if len(set(pts)) != len(pts):
            raise InputError("duplicate points")
        dim = len(pts[0])
        if any(len(p) != dim for p in pts):
            raise InputError("points of mixed dimension")
        self.dim = dim
        self.points = pts
        self.adj = adj
        self.edges = _derive_edges(pts, adj)
        nbrs = [[] for _ in pts]
        for i, j in self.edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        self._nbrs = tuple(tuple(sorted(v)) for v in nbrs)
        self._index = {p: i for i, p in enumerate(pts)}
        self._hash = hash((self.points, self.edges))

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        if not isinstance(other, DigitalImage):
            return NotImplemented
        return self.points == other.points and self.edges == other.edges

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"DigitalImage({len(self.points)} points in Z^{self.dim}, {len(self.edges)} edges)"

    def index_of(self, point) -> int:
        try:
            return self._index[as_point(point)]
        except KeyError:
            raise InputError(f"point {tuple(point)} not in image") from None

    def neighbors(self, i: int) -> tuple[int, ...]:
        self._check_index(i)
        return self._nbrs[i]

    def closed_neighbors(self, i: int) -> tuple[int, ...]:
        return tuple(sorted(self._nbrs[i] + (i,)))

    def degree(self, i: int) -> int:
        return len(self.neighbors(i))

    def _check_index(self, i: int):
        if not 0 <= i < len(self.points):
            raise InputError(f"index {i} out of range for {len(self.points)} points")


def adjacent(img: DigitalImage, i: int, j: int) -> bool:
    img._check_index(i)
    img._check_index(j)
    if i == j:
        return False
    return (min(i, j), max(i, j)) in img.edges


def adjacent_or_equal(img: DigitalImage, i: int, j: int) -> bool:
    return i == j or adjacent(img, i, j)


def is_connected(img: DigitalImage) -> bool:
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in img.neighbors(u):
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen) == len(img)


def distances_from(img: DigitalImage, start: int) -> list[int]:
    """BFS distances; unreachable points get -1."""
    dist = [-1] * len(img)
    dist[start] = 0
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in img.neighbors(u):
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def diameter(img: DigitalImage) -> int:
    best = 0
    for i in range(len(img)):
        dist = distances_from(img, i)
        if min(dist) < 0:
            raise InputError("diameter undefined: image is disconnected")
        best = max(best, max(dist))
    return best


def product(a: DigitalImage, b: DigitalImage) -> DigitalImage:
    """Cartesian product with the usual normal product adjacency.

    (u1,v1) and (u2,v2) are adjacent when each factor stays equal or moves to
    an adjacent point and the two pairs are not identical.  Point order is
    a-major, which keeps the concatenated coordinates lexicographically sorted.
    """
    points = tuple(pa + pb for pa in a.points for pb in b.points)
    nb = len(b)
    edges = set()
    for ia in range(len(a)):
        for ja in a.neighbors(ia):
            for ib in range(nb):
                # one factor moves
                edges.add(tuple(sorted((ia * nb + ib, ja * nb + ib))))
                for jb in b.neighbors(ib):
                    # both factors move
                    edges.add(tuple(sorted((ia * nb + ib, ja * nb + jb))))
    for ib in range(nb):
        for jb in b.neighbors(ib):
            for ia in range(len(a)):
                edges.add(tuple(sorted((ia * nb + ib, ia * nb + jb))))
    return DigitalImage(points, Explicit(frozenset(edges)), _presorted=True)


def product_index(a: DigitalImage, b: DigitalImage, i: int, j: int) -> int:
    """Index of the pair (a.points[i], b.points[j]) inside product(a, b)."""
    return i * len(b) + j


def product_pair(a: DigitalImage, b: DigitalImage, k: int) -> tuple[int, int]:
    return divmod(k, len(b))


def induced_subimage(img: DigitalImage, subset) -> DigitalImage:
    """Restriction of the image to a nonempty index subset, with induced edges."""
    idx = sorted(set(int(i) for i in subset))
    if not idx:
        raise InputError("empty subset")
    for i in idx:
        img._check_index(i)
    pos = {old: new for new, old in enumerate(idx)}
    keep = set(idx)
    edges = frozenset(
        (pos[i], pos[j]) for i, j in img.edges if i in keep and j in keep
    )
    return DigitalImage(tuple(img.points[i] for i in idx), Explicit(edges), _presorted=True)


def refines(a: AdjacencySpec, b: AdjacencySpec, over) -> bool:
    """True when every a-adjacent pair of `over` is b-adjacent.

    Explicit specs are interpreted against the given point order, so callers
    comparing explicit edge sets must pass the matching sequence of points.
    """
    points = tuple(as_point(p) for p in over)
    ea = _derive_edges(points, a)
    eb = _derive_edges(points, b)
    return ea <= eb


def digital_interval(c: int, d: int) -> DigitalImage:
    if c > d:
        raise InputError(f"interval needs c <= d, got [{c},{d}]")
    return DigitalImage(tuple((y,) for y in range(c, d + 1)), CL(1), _presorted=True)


def digital_sphere(n: int, adj: AdjacencySpec | None = None) -> DigitalImage:
    """The points of [-1,1]^{n+1} minus the origin; the adjacency is the caller's choice."""
    if n < 0:
        raise InputError("sphere dimension must be >= 0")
    if n > 2:
        raise BudgetError("sphere dimension capped at 2")
    origin = (0,) * (n + 1)
    pts = [p for p in itertools.product((-1, 0, 1), repeat=n + 1) if p != origin]
    return DigitalImage(pts, adj if adj is not None else CL(1))
