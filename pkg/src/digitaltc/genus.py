"""Schwarz genus, topological complexity and Lusternik-Schnirelmann category.

The genus of an endpoint fibration is found by partition branch-and-bound:
base points are assigned in index order to at most l blocks, each block keeps
a concrete section witness that is extended or re-solved incrementally, and
block symmetry is broken by first-occupant order.  Minimal values are
certified on both sides: a replayable witness at l and a completed search at
l-1.  Covers and partitions have the same minimum because sections restrict
to subsets, which the test suite checks independently.

Topological complexity sweeps the path length m from the image diameter
upward; the genus sequence is nonincreasing in m (padding embeds sections),
so a value of 1 is exact immediately and otherwise the last two sweep values
agreeing is reported as stabilized.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .csp import EmptyFiberError, SectionCSP
from .homotopy import (
    SearchResult,
    default_max_steps,
    is_contractible,
    is_nullhomotopic_in,
)
from .lattice import (
    BudgetError,
    DigitalImage,
    InputError,
    diameter,
    induced_subimage,
    is_connected,
)
from .maps import DigitalMap, is_continuous, restrict
from .paths import (
    DEFAULT_PATH_CAP,
    EndpointFibration,
    map_section_problem,
    pi_g_map,
    pi_map,
)

DEFAULT_MAX_L = 4
CAT_SUBSET_CAP = 14


@dataclass
class GenusResult:
    """A computed invariant value with its certification state and witness.

    exhausted: the reported value came from a completed search, not a budget
    sentinel.  stabilized: for m-sweeps, the last two path lengths agreed
    (value 1 is exact outright, the sequence being nonincreasing).
    """

    invariant: str
    value: int
    exhausted: bool
    m_used: int | None = None
    stabilized: bool | None = None
    genus_by_m: dict[int, int] | None = None
    witness: dict | None = None
    budgets: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        if not self.exhausted:
            return False
        if self.stabilized is None:
            return True
        return self.stabilized or self.value == 1


def section_exists(fib: EndpointFibration, subset) -> dict[int, int] | None:
    """One lift per base point of `subset`, stepwise close across base edges.

    Complete search: None means no section exists over the subset.  A base
    point with an empty fiber raises EmptyFiberError instead.
    """
    return SectionCSP(fib, subset).solve()


def _witness_payload(fib: EndpointFibration, blocks) -> dict:
    cover = []
    sections = []
    for members, witness in blocks:
        cover.append(sorted(members))
        sections.append(
            {str(v): [int(s) for s in fib.paths[witness[v]]] for v in sorted(members)}
        )
    return {"kind": "sections", "m": fib.m, "cover": cover, "sections": sections}


def _try_partition(fib: EndpointFibration, l: int):
    """Partition the base into at most l section-admitting blocks.

    Points are assigned in index order; a new block may only be opened while
    fewer than l exist and, by first-occupant symmetry breaking, only as the
    last branch.  Feasibility is maintained as a concrete witness per block,
    re-solved through the CSP when a cheap extension fails.
    """
    order = list(range(len(fib.base)))
    for v in order:
        if len(fib.fibers[v]) == 0:
            raise EmptyFiberError(v)

    def attempt(pos: int, blocks):
        if pos == len(order):
            return blocks
        var = order[pos]
        n_blocks = len(blocks)
        for bi in range(min(n_blocks + 1, l)):
            if bi == n_blocks:
                new_members = frozenset({var})
                csp = SectionCSP(fib, new_members)
                lift = csp.extend({}, var)
                assert lift is not None
                candidate = blocks + [(new_members, {var: lift})]
            else:
                members, witness = blocks[bi]
                new_members = members | {var}
                csp = SectionCSP(fib, new_members)
                lift = csp.extend(witness, var)
                if lift is not None:
                    new_witness = dict(witness)
                    new_witness[var] = lift
                else:
                    new_witness = csp.solve(hints=witness)
                    if new_witness is None:
                        continue
                candidate = list(blocks)
                candidate[bi] = (new_members, new_witness)
            result = attempt(pos + 1, candidate)
            if result is not None:
                return result
        return None

    return attempt(0, [])


def schwarz_genus(fib: EndpointFibration, max_l: int = DEFAULT_MAX_L) -> GenusResult:
    """Least number of section-admitting blocks partitioning the base.

    Returns value max_l + 1 with exhausted=False when every l <= max_l fails;
    that sentinel is a certified lower bound but not a computed genus.
    """
    if max_l < 1:
        raise InputError("max_l must be >= 1")
    for v in range(len(fib.base)):
        if len(fib.fibers[v]) == 0:
            raise EmptyFiberError(v)
    for l in range(1, max_l + 1):
        blocks = _try_partition(fib, l)
        if blocks is not None:
            final = [(set(members), witness) for members, witness in blocks]
            return GenusResult(
                invariant="schwarz-genus",
                value=l,
                exhausted=True,
                m_used=fib.m,
                witness=_witness_payload(fib, final),
                budgets={"max_l": max_l},
            )
    return GenusResult(
        invariant="schwarz-genus",
        value=max_l + 1,
        exhausted=False,
        m_used=fib.m,
        budgets={"max_l": max_l},
        notes=[f"no partition into at most {max_l} blocks; value is a sentinel"],
    )


def genus_of_map(g: DigitalMap, max_l: int = DEFAULT_MAX_L) -> GenusResult:
    """Least cover of the codomain by subsets admitting continuous right inverses."""
    res = schwarz_genus(map_section_problem(g), max_l)
    res.invariant = "genus-of-map"
    res.m_used = None
    return res


def _sweep(make_fib, invariant, start_m, max_m, max_l) -> GenusResult:
    if max_m < start_m:
        raise InputError(f"max_m={max_m} is below the sweep start {start_m}")
    by_m: dict[int, int] = {}
    last: GenusResult | None = None
    notes: list[str] = []
    for m in range(start_m, max_m + 1):
        res = schwarz_genus(make_fib(m), max_l)
        if last is not None and res.value > last.value:
            raise AssertionError(
                "genus increased with m, contradicting the padding embedding"
            )
        by_m[m] = res.value
        last = res
        if res.exhausted and res.value == 1:
            notes.append(f"genus 1 at m={m} is exact; sweep stopped early")
            break
    assert last is not None
    ms = sorted(by_m)
    stabilized = (len(ms) >= 2 and by_m[ms[-1]] == by_m[ms[-2]]) or last.value == 1
    out = GenusResult(
        invariant=invariant,
        value=last.value,
        exhausted=last.exhausted,
        m_used=last.m_used,
        stabilized=stabilized,
        genus_by_m=by_m,
        witness=last.witness,
        budgets={"max_l": max_l, "max_m": max_m, "start_m": start_m},
        notes=notes + last.notes,
    )
    return out


def tc_space(
    img: DigitalImage,
    max_m: int | None = None,
    max_l: int = DEFAULT_MAX_L,
    cap: int = DEFAULT_PATH_CAP,
) -> GenusResult:
    """Topological complexity of an image: genus of the free endpoint projection."""
    if not is_connected(img):
        raise InputError("topological complexity needs a connected image")
    d = diameter(img)
    if max_m is None:
        max_m = d + 2
    res = _sweep(lambda m: pi_map(img, m, cap), "tc-space", d, max_m, max_l)
    return res


def tc_map(
    g: DigitalMap,
    max_m: int | None = None,
    max_l: int = DEFAULT_MAX_L,
    cap: int = DEFAULT_PATH_CAP,
    certified_fibration: bool = False,
) -> GenusResult:
    """Topological complexity of a surjective continuous map."""
    if not is_continuous(g):
        raise InputError("tc of a map needs a continuous map")
    d = diameter(g.domain)
    if max_m is None:
        max_m = d + 2
    res = _sweep(lambda m: pi_g_map(g, m, cap), "tc-map", d, max_m, max_l)
    if not certified_fibration:
        res.notes.append("direct semantics: input not a certified fibration")
    return res


def _connected_subsets(img: DigitalImage) -> list[frozenset[int]]:
    """All connected index subsets, found by breadth-first growth."""
    if len(img) > CAT_SUBSET_CAP:
        raise BudgetError(
            f"cover-candidate enumeration capped at {CAT_SUBSET_CAP} points"
        )
    seen: set[frozenset[int]] = set()
    frontier = [frozenset({i}) for i in range(len(img))]
    seen.update(frontier)
    while frontier:
        nxt = []
        for s in frontier:
            boundary = set()
            for i in s:
                boundary.update(img.neighbors(i))
            for j in sorted(boundary - s):
                grown = s | {j}
                if grown not in seen:
                    seen.add(grown)
                    nxt.append(grown)
        frontier = nxt
    return sorted(seen, key=lambda s: (-len(s), sorted(s)))


def _min_cover(universe: set[int], candidates: list[tuple[frozenset[int], int]], max_l: int):
    """Exact minimal set cover by branch and bound, deepening on l."""

    def cover_search(uncovered: set[int], chosen: list[int], depth: int):
        if not uncovered:
            return list(chosen)
        if depth == 0:
            return None
        point = min(
            uncovered,
            key=lambda p: sum(1 for s, _ in candidates if p in s),
        )
        for ci, (s, _) in enumerate(candidates):
            if point not in s:
                continue
            chosen.append(ci)
            got = cover_search(uncovered - s, chosen, depth - 1)
            if got is not None:
                return got
            chosen.pop()
        return None

    for l in range(1, max_l + 1):
        got = cover_search(set(universe), [], l)
        if got is not None:
            return l, got
    return None, None


def _cat_core(
    img: DigitalImage,
    invariant: str,
    null_check,
    max_l: int,
) -> GenusResult:
    """Shared cover search for the category of a space or of a map.

    null_check(subset) -> SearchResult for "the subset's piece deforms to a
    constant".  Candidates are connected subsets, evaluated largest first with
    memoised verdicts; a null-homotopic set's connected subsets are also
    null-homotopic, so the candidate family is downward closed.
    """
    whole = tuple(range(len(img)))
    first = null_check(whole)
    if first.found:
        return GenusResult(
            invariant=invariant,
            value=1,
            exhausted=True,
            witness={
                "kind": "homotopies",
                "cover": [list(whole)],
                "traces": [[list(t) for t in first.trace.tables]],
            },
            budgets={"max_l": max_l},
        )
    exhausted = first.exhausted
    subsets = _connected_subsets(img)
    verdicts: dict[frozenset[int], SearchResult] = {frozenset(whole): first}
    candidates: list[tuple[frozenset[int], int]] = []
    traces: dict[frozenset[int], list] = {}
    for s in subsets:
        if s == frozenset(whole):
            continue
        res = verdicts.get(s)
        if res is None:
            res = null_check(tuple(sorted(s)))
            verdicts[s] = res
        if res.found:
            candidates.append((s, len(s)))
            traces[s] = [list(t) for t in res.trace.tables]
        else:
            exhausted = exhausted and res.exhausted
    value, chosen = _min_cover(set(whole), candidates, max_l)
    if value is None:
        return GenusResult(
            invariant=invariant,
            value=max_l + 1,
            exhausted=False,
            budgets={"max_l": max_l},
            notes=[f"no cover with at most {max_l} pieces; value is a sentinel"],
        )
    cover = [sorted(candidates[ci][0]) for ci in chosen]
    return GenusResult(
        invariant=invariant,
        value=value,
        exhausted=exhausted,
        witness={
            "kind": "homotopies",
            "cover": cover,
            "traces": [traces[candidates[ci][0]] for ci in chosen],
        },
        budgets={"max_l": max_l},
        notes=[] if exhausted else ["some deformation searches hit their budget"],
    )


def cat_space(
    img: DigitalImage,
    max_steps: int | None = None,
    max_l: int = DEFAULT_MAX_L,
) -> GenusResult:
    """Least cover of a connected image by subsets whose inclusions deform to points.

    Cover candidates are connected subsets: the pieces of any cover split into
    connected components that are again usable, and every acceptance instance
    reaches its minimum on connected pieces.
    """
    if not is_connected(img):
        raise InputError("category needs a connected image")
    steps = max_steps if max_steps is not None else default_max_steps(img, img)

    def null_check(subset):
        if len(subset) == len(img):
            return is_contractible(img, steps)
        return is_nullhomotopic_in(img, subset, steps)

    return _cat_core(img, "cat-space", null_check, max_l)


def cat_map(
    g: DigitalMap,
    max_steps: int | None = None,
    max_l: int = DEFAULT_MAX_L,
) -> GenusResult:
    """Least cover of the domain by subsets on which the map deforms to a constant."""
    if not is_continuous(g):
        raise InputError("category of a map needs a continuous map")
    if not is_connected(g.domain):
        raise InputError("category of a map needs a connected domain")
    steps = max_steps if max_steps is not None else default_max_steps(g.domain, g.codomain)

    def null_check(subset):
        from .homotopy import _bfs_maps, HomotopyTrace  # local: shares the BFS core

        piece = restrict(g, subset)
        constants = {(c,) * len(subset) for c in range(len(g.codomain))}
        seq, exhausted = _bfs_maps(
            piece.domain, g.codomain, piece.table, constants, steps
        )
        if seq is None:
            return SearchResult(None, exhausted)
        return SearchResult(HomotopyTrace(piece.domain, g.codomain, tuple(seq)), exhausted)

    return _cat_core(g.domain, "cat-map", null_check, max_l)
