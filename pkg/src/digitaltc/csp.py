"""Backtracking core for section-existence problems.

One variable per base point, one value per admissible lift; a binary
constraint on every base edge: the two chosen lifts must be stepwise close
(equal or adjacent at every time).  Complete search: backtracking with
forward checking, minimum-remaining-values ordering, lexicographic value
order, plus an arc-consistency pass when the domains are small enough for it
to pay off.  Lift matrices live in numpy so domain filtering is a handful of
vectorised gathers.
"""
from __future__ import annotations

import numpy as np

from .lattice import InputError

AC_DOMAIN_CAP = 1500


class EmptyFiberError(InputError):
    """A base point with an empty fiber: no section can ever exist over it."""

    def __init__(self, base_index: int):
        super().__init__(f"base point {base_index} has an empty fiber")
        self.base_index = base_index


class SectionCSP:
    """Section search over a subset of base points of an endpoint fibration."""

    def __init__(self, fib, subset):
        self.fib = fib
        self.vars = sorted(set(int(i) for i in subset))
        if not self.vars:
            raise InputError("empty base subset")
        for v in self.vars:
            fib.base._check_index(v)
            if len(fib.fibers[v]) == 0:
                raise EmptyFiberError(v)
        inside = set(self.vars)
        self.nbrs = {
            v: tuple(
                u
                for u in fib.base.neighbors(v)
                if u in inside
            )
            for v in self.vars
        }
        self.P = fib.path_matrix
        self.cadj = fib.closed_adj

    def compatible_mask(self, path_id: int, candidates: np.ndarray) -> np.ndarray:
        """Stepwise closeness of one lift against a candidate array."""
        row = self.P[path_id]
        cand = self.P[candidates]
        ok = np.ones(len(candidates), dtype=bool)
        for t in range(self.P.shape[1]):
            ok &= self.cadj[row[t], cand[:, t]]
        return ok

    def _ac3(self, domains):
        """Prune values without stepwise-close support at a neighbouring point."""
        queue = [(x, y) for x in self.vars for y in self.nbrs[x]]
        while queue:
            x, y = queue.pop()
            dx, dy = domains[x], domains[y]
            support = np.zeros(len(dx), dtype=bool)
            for pid in dy:
                support |= self.compatible_mask(int(pid), dx)
                if support.all():
                    break
            if support.all():
                continue
            domains[x] = dx[support]
            if len(domains[x]) == 0:
                return False
            queue.extend((z, x) for z in self.nbrs[x] if z != y)
        return True

    def solve(self, hints: dict[int, int] | None = None) -> dict[int, int] | None:
        """One lift per base point, or None after a complete search.

        `hints` biases the value order (hinted lift tried first); it never
        affects completeness.
        """
        domains = {v: self.fib.fibers[v] for v in self.vars}
        if max(len(d) for d in domains.values()) <= AC_DOMAIN_CAP:
            if not self._ac3(dict(domains)):
                return None
        assignment: dict[int, int] = {}

        def pick_var(doms):
            best, best_size = -1, None
            for v in self.vars:
                if v in assignment:
                    continue
                size = len(doms[v])
                if best_size is None or size < best_size:
                    best, best_size = v, size
            return best

        def search(doms):
            if len(assignment) == len(self.vars):
                return True
            var = pick_var(doms)
            values = [int(p) for p in doms[var]]
            if hints and hints.get(var) in doms[var]:
                hinted = hints[var]
                values = [hinted] + [p for p in values if p != hinted]
            for pid in values:
                assignment[var] = pid
                new_doms = doms
                ok = True
                touched = {}
                for u in self.nbrs[var]:
                    if u in assignment:
                        continue
                    mask = self.compatible_mask(pid, new_doms[u])
                    if not mask.all():
                        if new_doms is doms:
                            new_doms = dict(doms)
                        touched[u] = True
                        new_doms[u] = new_doms[u][mask]
                        if len(new_doms[u]) == 0:
                            ok = False
                            break
                if ok and search(new_doms):
                    return True
                del assignment[var]
            return False

        if search(domains):
            return dict(assignment)
        return None

    def extend(self, witness: dict[int, int], var: int) -> int | None:
        """Cheapest-first growth: a lift for `var` compatible with assigned neighbours."""
        cands = self.fib.fibers[var]
        mask = np.ones(len(cands), dtype=bool)
        for u in self.nbrs[var]:
            if u in witness:
                mask &= self.compatible_mask(witness[u], cands)
        hits = cands[mask]
        if len(hits) == 0:
            return None
        return int(hits[0])

    def verify(self, witness: dict[int, int]) -> bool:
        for v in self.vars:
            if v not in witness:
                return False
            if witness[v] not in set(int(p) for p in self.fib.fibers[v]):
                return False
        for v in self.vars:
            for u in self.nbrs[v]:
                if u < v:
                    continue
                ok = self.compatible_mask(witness[v], np.array([witness[u]]))
                if not bool(ok[0]):
                    return False
        return True
