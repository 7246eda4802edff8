"""Digital homotopy as reachability in the function-space graph.

Nodes are continuous maps between two fixed images; two maps are one step
apart when every point's image stays equal or moves to an adjacent point.
A homotopy in m steps is a walk of length m in this graph, which matches the
three-condition definition: every slice is continuous and every point's track
is a digital path.  Searches return replayable traces and an exhaustion flag
that tells a definitive "no" apart from a budget miss.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .lattice import (
    BudgetError,
    DigitalImage,
    InputError,
    adjacent_or_equal,
    induced_subimage,
)
from .maps import DigitalMap, compose, is_continuous, is_surjective, preimage

DEFAULT_MAP_CAP = 1_000_000


def default_max_steps(domain: DigitalImage, codomain: DigitalImage) -> int:
    return len(domain) * len(codomain)


@dataclass(frozen=True)
class HomotopyTrace:
    """A replayable homotopy certificate: the full sequence of map tables."""

    domain: DigitalImage
    codomain: DigitalImage
    tables: tuple[tuple[int, ...], ...]

    @property
    def length(self) -> int:
        return len(self.tables) - 1

    def validate(self) -> None:
        if not self.tables:
            raise InputError("empty trace")
        for t in self.tables:
            f = DigitalMap(self.domain, self.codomain, t)
            if not is_continuous(f):
                raise InputError(f"trace slice {t} is not continuous")
        for a, b in zip(self.tables, self.tables[1:]):
            for u, v in zip(a, b):
                if not adjacent_or_equal(self.codomain, u, v):
                    raise InputError("trace has a non-adjacent consecutive step")

    def start_map(self) -> DigitalMap:
        return DigitalMap(self.domain, self.codomain, self.tables[0])

    def end_map(self) -> DigitalMap:
        return DigitalMap(self.domain, self.codomain, self.tables[-1])

    def reversed(self) -> "HomotopyTrace":
        return HomotopyTrace(self.domain, self.codomain, tuple(reversed(self.tables)))


@dataclass
class SearchResult:
    """Outcome of a homotopy search.

    `exhausted` only matters when the trace is absent: True means the whole
    reachable component was explored, so the absence is a disproof.
    """

    trace: HomotopyTrace | None
    exhausted: bool

    @property
    def found(self) -> bool:
        return self.trace is not None


def homotopy_step(f: DigitalMap, g: DigitalMap) -> bool:
    """One-step relation: every point's image is equal or adjacent."""
    _check_same_spaces(f, g)
    if not (is_continuous(f) and is_continuous(g)):
        raise InputError("homotopy steps are only defined between continuous maps")
    return all(
        adjacent_or_equal(f.codomain, a, b) for a, b in zip(f.table, g.table)
    )


def _check_same_spaces(f: DigitalMap, g: DigitalMap):
    if f.domain != g.domain or f.codomain != g.codomain:
        raise InputError("maps live in different function spaces")


def _back_neighbors(domain: DigitalImage) -> list[tuple[int, ...]]:
    return [
        tuple(v for v in domain.neighbors(u) if v < u) for u in range(len(domain))
    ]


def _iter_continuous_tables(domain, codomain, point_options, back_nbrs, cap=None):
    """All continuous tables with the u-th value drawn from point_options[u].

    Lexicographic order.  point_options entries must be sorted.
    """
    n = len(domain)
    table = [0] * n
    count = 0

    def grow(u: int):
        nonlocal count
        if u == n:
            count += 1
            if cap is not None and count > cap:
                raise BudgetError(f"continuous-map enumeration exceeded cap {cap}")
            yield tuple(table)
            return
        for val in point_options[u]:
            ok = True
            for v in back_nbrs[u]:
                if not adjacent_or_equal(codomain, table[v], val):
                    ok = False
                    break
            if ok:
                table[u] = val
                yield from grow(u + 1)

    yield from grow(0)


def _neighbor_tables(domain, codomain, table, back_nbrs, restrict=None):
    options = []
    for u, val in enumerate(table):
        opts = codomain.closed_neighbors(val)
        if restrict is not None:
            opts = tuple(sorted(set(opts) & restrict[u]))
        options.append(opts)
    for t in _iter_continuous_tables(domain, codomain, options, back_nbrs):
        if t != table:
            yield t


def _bfs_maps(domain, codomain, start, targets, max_steps, restrict=None):
    """Shortest walk in the one-step graph from `start` to any table in `targets`.

    Returns (table sequence or None, exhausted).  Deterministic: FIFO layers,
    neighbours generated in lexicographic order.
    """
    back_nbrs = _back_neighbors(domain)
    if start in targets:
        return [start], True
    parent: dict[tuple[int, ...], tuple[int, ...] | None] = {start: None}
    depth = {start: 0}
    queue = deque([start])
    exhausted = True
    while queue:
        node = queue.popleft()
        d = depth[node]
        if d >= max_steps:
            exhausted = False
            continue
        for nxt in _neighbor_tables(domain, codomain, node, back_nbrs, restrict):
            if nxt in parent:
                continue
            parent[nxt] = node
            depth[nxt] = d + 1
            if nxt in targets:
                seq = [nxt]
                cur: tuple[int, ...] | None = node
                while cur is not None:
                    seq.append(cur)
                    cur = parent[cur]
                seq.reverse()
                return seq, True
            queue.append(nxt)
    return None, exhausted


def are_homotopic(f: DigitalMap, g: DigitalMap, max_steps: int | None = None) -> SearchResult:
    """Breadth-first search for a shortest homotopy between two continuous maps."""
    _check_same_spaces(f, g)
    if not (is_continuous(f) and is_continuous(g)):
        raise InputError("homotopy is only defined between continuous maps")
    if max_steps is None:
        max_steps = default_max_steps(f.domain, f.codomain)
    seq, exhausted = _bfs_maps(f.domain, f.codomain, f.table, {g.table}, max_steps)
    if seq is None:
        return SearchResult(None, exhausted)
    return SearchResult(HomotopyTrace(f.domain, f.codomain, tuple(seq)), exhausted)


def _greedy_shrink(img: DigitalImage) -> list[tuple[int, ...]] | None:
    """Deformation of the identity through image-shrinking one-step moves.

    First folds dominated points (cheap), then looks for any one-step
    continuous self-map of the current retract with a strictly smaller image.
    Returns the table sequence down to a constant, or None when stuck; the
    breadth-first fallback keeps the overall search complete.
    """
    n = len(img)
    current = tuple(range(n))
    tables = [current]
    alive = sorted(set(current))

    def closed_in(x, alive_set):
        return {y for y in img.closed_neighbors(x) if y in alive_set}

    while len(alive) > 1:
        alive_set = set(alive)
        move: dict[int, int] | None = None
        for p in alive:
            np_ = closed_in(p, alive_set)
            for q in alive:
                if q == p or not adjacent_or_equal(img, p, q):
                    continue
                if np_ <= closed_in(q, alive_set):
                    move = {p: q}
                    break
            if move:
                break
        if move is None:
            # no fold: search one-step self-maps of the retract for a collapse
            sub = sorted(alive)
            pos = {x: k for k, x in enumerate(sub)}
            sub_img = induced_subimage(img, sub)
            back = _back_neighbors(sub_img)
            options = [
                tuple(sorted(set(img.closed_neighbors(x)) & alive_set)) for x in sub
            ]
            options = [tuple(pos[y] for y in opts) for opts in options]
            for t in _iter_continuous_tables(sub_img, sub_img, options, back):
                if len(set(t)) < len(sub) and t != tuple(range(len(sub))):
                    move = {x: sub[t[pos[x]]] for x in sub}
                    break
            if move is None:
                return None
        step = {x: move.get(x, x) for x in alive}
        current = tuple(step[v] for v in current)
        tables.append(current)
        alive = sorted(set(current))
    return tables


def is_contractible(img: DigitalImage, max_steps: int | None = None) -> SearchResult:
    """A homotopy from the identity to some constant map, if one exists."""
    if max_steps is None:
        max_steps = default_max_steps(img, img)
    identity = tuple(range(len(img)))
    if len(img) == 1:
        return SearchResult(HomotopyTrace(img, img, (identity,)), True)
    greedy = _greedy_shrink(img)
    if greedy is not None:
        return SearchResult(HomotopyTrace(img, img, tuple(greedy)), False)
    constants = {(c,) * len(img) for c in range(len(img))}
    seq, exhausted = _bfs_maps(img, img, identity, constants, max_steps)
    if seq is None:
        return SearchResult(None, exhausted)
    return SearchResult(HomotopyTrace(img, img, tuple(seq)), exhausted)


def is_nullhomotopic_in(
    ambient: DigitalImage, sub, max_steps: int | None = None
) -> SearchResult:
    """Homotopy from the inclusion of a subset to a constant map into the ambient image."""
    idx = sorted(set(int(i) for i in sub))
    if not idx:
        raise InputError("empty subset")
    sub_img = induced_subimage(ambient, idx)
    if max_steps is None:
        max_steps = default_max_steps(sub_img, ambient)
    inclusion = tuple(idx)
    if len(idx) == 1:
        return SearchResult(HomotopyTrace(sub_img, ambient, (inclusion,)), True)
    constants = {(c,) * len(idx) for c in range(len(ambient))}
    seq, exhausted = _bfs_maps(sub_img, ambient, inclusion, constants, max_steps)
    if seq is None:
        return SearchResult(None, exhausted)
    return SearchResult(HomotopyTrace(sub_img, ambient, tuple(seq)), exhausted)


def enumerate_continuous_maps(domain, codomain, cap: int = DEFAULT_MAP_CAP):
    """Every continuous map between two images, lexicographically, cap-guarded."""
    back = _back_neighbors(domain)
    options = [tuple(range(len(codomain)))] * len(domain)
    return list(_iter_continuous_tables(domain, codomain, options, back, cap=cap))


def _component_labels(domain, codomain, tables):
    """Connected-component labels of the one-step graph over the given tables."""
    back = _back_neighbors(domain)
    universe = set(tables)
    label: dict[tuple[int, ...], int] = {}
    next_label = 0
    for t in tables:
        if t in label:
            continue
        label[t] = next_label
        queue = deque([t])
        while queue:
            node = queue.popleft()
            for nxt in _neighbor_tables(domain, codomain, node, back):
                if nxt in universe and nxt not in label:
                    label[nxt] = next_label
                    queue.append(nxt)
        next_label += 1
    return label


@dataclass
class EquivalenceResult:
    forward: DigitalMap | None
    backward: DigitalMap | None
    trace_back_forward: HomotopyTrace | None
    trace_forward_back: HomotopyTrace | None
    exhausted: bool

    @property
    def found(self) -> bool:
        return self.forward is not None


def are_homotopy_equivalent(
    x: DigitalImage,
    y: DigitalImage,
    max_steps: int | None = None,
    map_cap: int = DEFAULT_MAP_CAP,
) -> EquivalenceResult:
    """Exhaustive search for a homotopy equivalence between two images.

    Enumerates both function spaces, groups maps into homotopy classes and
    tests class pairs, so an absent answer with the exhausted flag set is a
    disproof.  Raises BudgetError when the map spaces exceed the cap.
    """
    if x == y:
        ident = DigitalMap.identity(x)
        triv = HomotopyTrace(x, x, (ident.table,))
        return EquivalenceResult(ident, ident, triv, triv, True)
    fwd = enumerate_continuous_maps(x, y, cap=map_cap)
    bwd = enumerate_continuous_maps(y, x, cap=map_cap)
    if not fwd or not bwd:
        return EquivalenceResult(None, None, None, None, True)
    labels_fwd = _component_labels(x, y, fwd)
    labels_bwd = _component_labels(y, x, bwd)
    reps_fwd: dict[int, tuple[int, ...]] = {}
    for t in fwd:
        reps_fwd.setdefault(labels_fwd[t], t)
    reps_bwd: dict[int, tuple[int, ...]] = {}
    for t in bwd:
        reps_bwd.setdefault(labels_bwd[t], t)
    id_x = tuple(range(len(x)))
    id_y = tuple(range(len(y)))
    self_x = enumerate_continuous_maps(x, x, cap=map_cap)
    self_y = enumerate_continuous_maps(y, y, cap=map_cap)
    labels_x = _component_labels(x, x, self_x)
    labels_y = _component_labels(y, y, self_y)
    if max_steps is None:
        max_steps = max(default_max_steps(x, x), default_max_steps(y, y))
    # homotopy classes compose, so class representatives decide every pair
    for lf in sorted(reps_fwd):
        f = DigitalMap(x, y, reps_fwd[lf])
        for lb in sorted(reps_bwd):
            h = DigitalMap(y, x, reps_bwd[lb])
            round_x = compose(f, h)
            round_y = compose(h, f)
            if labels_x[round_x.table] != labels_x[id_x]:
                continue
            if labels_y[round_y.table] != labels_y[id_y]:
                continue
            r1 = are_homotopic(round_x, DigitalMap.identity(x), max_steps)
            r2 = are_homotopic(round_y, DigitalMap.identity(y), max_steps)
            assert r1.found and r2.found
            return EquivalenceResult(f, h, r1.trace, r2.trace, True)
    return EquivalenceResult(None, None, None, None, True)


def fiber_homotopic(
    g: DigitalMap, h: DigitalMap, k: DigitalMap, max_steps: int | None = None
) -> SearchResult:
    """Homotopy between h and k through maps whose composite with g stays fixed."""
    if h.domain != k.domain or h.codomain != k.codomain:
        raise InputError("fiber homotopy needs maps with the same domain and codomain")
    if h.codomain != g.domain:
        raise InputError("the maps must land in the domain of the projection")
    for m in (g, h, k):
        if not is_continuous(m):
            raise InputError("fiber homotopy is only defined for continuous maps")
    gh = compose(h, g)
    gk = compose(k, g)
    if gh.table != gk.table:
        raise InputError("the two maps project differently, no fiber homotopy can exist")
    if max_steps is None:
        max_steps = default_max_steps(h.domain, h.codomain)
    restrict = [set(preimage(g, z)) for z in gh.table]
    seq, exhausted = _bfs_maps(
        h.domain, h.codomain, h.table, {k.table}, max_steps, restrict=restrict
    )
    if seq is None:
        return SearchResult(None, exhausted)
    return SearchResult(HomotopyTrace(h.domain, h.codomain, tuple(seq)), exhausted)


@dataclass
class FheResult:
    forward: DigitalMap | None
    backward: DigitalMap | None
    trace_round_1: HomotopyTrace | None
    trace_round_2: HomotopyTrace | None
    exhausted: bool

    @property
    def found(self) -> bool:
        return self.forward is not None


def are_fhe(
    g1: DigitalMap,
    g2: DigitalMap,
    max_steps: int | None = None,
    map_cap: int = DEFAULT_MAP_CAP,
) -> FheResult:
    """Fiber homotopy equivalence of two projections onto the same base.

    Searches fiber-preserving map pairs h (with g2 o h = g1) and k (with
    g1 o k = g2) whose round trips are fiber homotopic to the identities.
    """
    for g in (g1, g2):
        if not is_continuous(g) or not is_surjective(g):
            raise InputError("both projections must be continuous surjections")
    if g1.codomain != g2.codomain:
        raise InputError("the two projections must share one codomain image")
    back1 = _back_neighbors(g1.domain)
    back2 = _back_neighbors(g2.domain)
    options_h = [tuple(sorted(preimage(g2, z))) for z in g1.table]
    options_k = [tuple(sorted(preimage(g1, z))) for z in g2.table]
    cand_h = list(
        _iter_continuous_tables(g1.domain, g2.domain, options_h, back1, cap=map_cap)
    )
    cand_k = list(
        _iter_continuous_tables(g2.domain, g1.domain, options_k, back2, cap=map_cap)
    )
    if len(cand_h) * len(cand_k) > map_cap:
        raise BudgetError("fiber-preserving pair space exceeds the configured cap")
    exhausted = True
    for th in cand_h:
        h = DigitalMap(g1.domain, g2.domain, th)
        for tk in cand_k:
            k = DigitalMap(g2.domain, g1.domain, tk)
            r1 = fiber_homotopic(g1, compose(h, k), DigitalMap.identity(g1.domain), max_steps)
            if not r1.found:
                exhausted = exhausted and r1.exhausted
                continue
            r2 = fiber_homotopic(g2, compose(k, h), DigitalMap.identity(g2.domain), max_steps)
            if not r2.found:
                exhausted = exhausted and r2.exhausted
                continue
            return FheResult(h, k, r1.trace, r2.trace, True)
    return FheResult(None, None, None, None, exhausted)
