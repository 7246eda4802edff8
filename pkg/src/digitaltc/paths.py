"""Bounded-length digital path spaces, evaluation maps and endpoint fibrations.

A path of length m in an image is a walk through the reflexive closure of the
adjacency graph: m+1 point indices with consecutive entries equal or adjacent.
Two paths of the same length are adjacent when they are distinct and stepwise
close: at every time t the two positions are equal or adjacent.  This is the
relation the section solver constrains against.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lattice import (
    BudgetError,
    DigitalImage,
    Explicit,
    InputError,
    adjacent_or_equal,
    diameter,
    distances_from,
    is_connected,
    product,
    product_index,
    product_pair,
)
from .maps import DigitalMap, is_continuous, is_surjective, preimage

DEFAULT_PATH_CAP = 4_000_000


@dataclass(frozen=True)
class DigitalPath:
    host: DigitalImage
    steps: tuple[int, ...]

    def __post_init__(self):
        steps = tuple(int(s) for s in self.steps)
        object.__setattr__(self, "steps", steps)
        if not steps:
            raise InputError("a path needs at least one step entry")
        for s in steps:
            self.host._check_index(s)
        for a, b in zip(steps, steps[1:]):
            if not adjacent_or_equal(self.host, a, b):
                raise InputError(f"indices {a},{b} are consecutive but not adjacent-or-equal")

    @property
    def length(self) -> int:
        return len(self.steps) - 1

    def start(self) -> int:
        return self.steps[0]

    def end(self) -> int:
        return self.steps[-1]


def pad(p: DigitalPath, extra: int) -> DigitalPath:
    """Extend a path by repeating its final point; endpoints are preserved."""
    if extra < 0:
        raise InputError("pad length must be >= 0")
    return DigitalPath(p.host, p.steps + (p.steps[-1],) * extra)


def concat(p: DigitalPath, q: DigitalPath) -> DigitalPath:
    """Concatenation; lengths add, q must start where p ends."""
    if p.host != q.host:
        raise InputError("concat across different host images")
    if p.end() != q.start():
        raise InputError("concat endpoints do not meet")
    return DigitalPath(p.host, p.steps + q.steps[1:])


def steps_compatible(host: DigitalImage, a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    """Stepwise closeness: equal-or-adjacent at every time (equality allowed)."""
    if len(a) != len(b):
        raise InputError("paths of different length")
    return all(adjacent_or_equal(host, x, y) for x, y in zip(a, b))


@dataclass
class PathSpace:
    """All paths of one fixed length in a host image, in lexicographic order."""

    host: DigitalImage
    m: int
    paths: tuple[tuple[int, ...], ...]
    _index: dict[tuple[int, ...], int] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if not self._index:
            self._index = {p: i for i, p in enumerate(self.paths)}

    def __len__(self):
        return len(self.paths)

    def index_of(self, steps) -> int:
        key = tuple(int(s) for s in steps)
        try:
            return self._index[key]
        except KeyError:
            raise InputError(f"path {key} not in this path space") from None

    def path(self, i: int) -> DigitalPath:
        return DigitalPath(self.host, self.paths[i])


def path_space_adjacent(ps: PathSpace, a, b) -> bool:
    """Adjacency in the path space: distinct paths that are stepwise close."""
    sa = a.steps if isinstance(a, DigitalPath) else tuple(int(s) for s in a)
    sb = b.steps if isinstance(b, DigitalPath) else tuple(int(s) for s in b)
    if len(sa) != ps.m + 1 or len(sb) != ps.m + 1:
        raise InputError("length mismatch with the path space")
    if sa == sb:
        return False
    return steps_compatible(ps.host, sa, sb)


def enumerate_paths(img: DigitalImage, m: int, cap: int = DEFAULT_PATH_CAP) -> PathSpace:
    """All length-m walks in the reflexive closure of the adjacency graph."""
    if m < 0:
        raise InputError("path length must be >= 0")
    maxdeg = max((img.degree(i) for i in range(len(img))), default=0)
    if len(img) * (maxdeg + 1) ** m > cap:
        raise BudgetError(
            f"path enumeration cap exceeded: {len(img)}*(max degree+1)^{m} > {cap}"
        )
    closed = [img.closed_neighbors(i) for i in range(len(img))]
    out: list[tuple[int, ...]] = []
    prefix = [0] * (m + 1)

    def grow(pos: int):
        if pos == m:
            out.append(tuple(prefix))
            return
        for nxt in closed[prefix[pos]]:
            prefix[pos + 1] = nxt
            grow(pos + 1)

    for start in range(len(img)):
        prefix[0] = start
        grow(0)
    return PathSpace(img, m, tuple(out))


def path_space_as_image(ps: PathSpace) -> DigitalImage:
    """The path space as a digital image: each path becomes its coordinate vector.

    Quadratic in the number of paths; intended for small hosts only.
    """
    if len(ps.paths) > 4096:
        raise BudgetError("path space too large to materialise as an image")
    pts = []
    for steps in ps.paths:
        coords: list[int] = []
        for s in steps:
            coords.extend(ps.host.points[s])
        pts.append(tuple(coords))
    order = sorted(range(len(pts)), key=lambda i: pts[i])
    pos = {old: new for new, old in enumerate(order)}
    edges = set()
    n = len(ps.paths)
    for i in range(n):
        for j in range(i + 1, n):
            if steps_compatible(ps.host, ps.paths[i], ps.paths[j]):
                edges.add(tuple(sorted((pos[i], pos[j]))))
    return DigitalImage(
        tuple(pts[i] for i in order), Explicit(frozenset(edges)), _presorted=True
    )


@dataclass
class EndpointFibration:
    """An endpoint projection from a path space onto a product base, with fibers.

    kind "pi" projects a path to (start, end) over host x host; kind "pi_g"
    projects to (start, g(end)) over host x codomain(g).  Fibers are
    materialised eagerly as sorted index arrays, which is what the section
    solver consumes.  m = 0 with kind "map" encodes plain right-inverse
    problems: the "paths" are single points and the fibers are preimages.
    """

    kind: str
    host: DigitalImage
    m: int
    base: DigitalImage
    base_pairs: tuple[tuple[int, int], ...]
    paths: tuple[tuple[int, ...], ...]
    fibers: tuple[np.ndarray, ...]
    g: DigitalMap | None = None
    all_fibers_nonempty: bool = True
    path_matrix: np.ndarray = field(repr=False, default=None)
    closed_adj: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.path_matrix is None:
            self.path_matrix = np.array(self.paths, dtype=np.int16)
        if self.closed_adj is None:
            n = len(self.host)
            cadj = np.zeros((n, n), dtype=bool)
            for i in range(n):
                cadj[i, i] = True
            for i, j in self.host.edges:
                cadj[i, j] = True
                cadj[j, i] = True
            self.closed_adj = cadj

    def fiber(self, base_index: int) -> np.ndarray:
        return self.fibers[base_index]

    def fiber_paths(self, base_index: int) -> list[tuple[int, ...]]:
        return [self.paths[i] for i in self.fibers[base_index]]


def _build_fibration(kind, host, m, base, base_pairs, ps, end_targets, g=None):
    """Group paths by (start, target class of end)."""
    lists: list[list[int]] = [[] for _ in base_pairs]
    pair_pos = {pair: k for k, pair in enumerate(base_pairs)}
    for pid, steps in enumerate(ps.paths):
        key = (steps[0], end_targets[steps[-1]])
        lists[pair_pos[key]].append(pid)
    fibers = tuple(np.array(v, dtype=np.int64) for v in lists)
    return EndpointFibration(
        kind=kind,
        host=host,
        m=m,
        base=base,
        base_pairs=base_pairs,
        paths=ps.paths,
        fibers=fibers,
        g=g,
        all_fibers_nonempty=all(len(v) for v in lists),
    )


def pi_map(img: DigitalImage, m: int, cap: int = DEFAULT_PATH_CAP) -> EndpointFibration:
    """The free endpoint projection alpha -> (alpha(0), alpha(m)) over img x img."""
    ps = enumerate_paths(img, m, cap)
    base = product(img, img)
    pairs = tuple(
        product_pair(img, img, k) for k in range(len(img) * len(img))
    )
    return _build_fibration("pi", img, m, base, pairs, ps, list(range(len(img))))


def pi_g_map(g: DigitalMap, m: int, cap: int = DEFAULT_PATH_CAP) -> EndpointFibration:
    """The endpoint projection alpha -> (alpha(0), g(alpha(m))) over domain x codomain."""
    if not is_continuous(g):
        raise InputError("the projected map must be digitally continuous")
    if not is_surjective(g):
        raise InputError("the projected map must be surjective")
    if not is_connected(g.domain) or not is_connected(g.codomain):
        raise InputError("both images must be connected")
    ps = enumerate_paths(g.domain, m, cap)
    base = product(g.domain, g.codomain)
    pairs = tuple(
        product_pair(g.domain, g.codomain, k)
        for k in range(len(g.domain) * len(g.codomain))
    )
    fib = _build_fibration("pi_g", g.domain, m, base, pairs, ps, list(g.table), g=g)
    if m >= diameter(g.domain):
        assert fib.all_fibers_nonempty
    return fib


def map_section_problem(g: DigitalMap) -> EndpointFibration:
    """Right-inverse search for g itself, encoded as a length-0 fibration.

    Lifts are single domain points, the base is the codomain and the fiber over
    z is the preimage of z; stepwise closeness degenerates to plain adjacency.
    """
    if not is_continuous(g):
        raise InputError("the map must be digitally continuous")
    if not is_surjective(g):
        raise InputError("the map must be surjective")
    paths = tuple((i,) for i in range(len(g.domain)))
    fibers = tuple(
        np.array(preimage(g, z), dtype=np.int64) for z in range(len(g.codomain))
    )
    return EndpointFibration(
        kind="map",
        host=g.domain,
        m=0,
        base=g.codomain,
        base_pairs=tuple((i, i) for i in range(len(g.codomain))),
        paths=paths,
        fibers=fibers,
        g=g,
        all_fibers_nonempty=True,
    )


def fiber_distances(img: DigitalImage) -> list[list[int]]:
    return [distances_from(img, i) for i in range(len(img))]
