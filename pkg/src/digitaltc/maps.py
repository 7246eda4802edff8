"""Total maps between digital images and their structural predicates."""
from __future__ import annotations

from dataclasses import dataclass

from .lattice import (
    DigitalImage,
    InputError,
    adjacent_or_equal,
    induced_subimage,
)


@dataclass(frozen=True)
class DigitalMap:
    """A total point-to-point map stored as an index table against frozen images.

    Partial tables are rejected at construction; predicates never see them.
    """

    domain: DigitalImage
    codomain: DigitalImage
    table: tuple[int, ...]

    def __post_init__(self):
        table = tuple(int(v) for v in self.table)
        object.__setattr__(self, "table", table)
        if len(table) != len(self.domain):
            raise InputError(
                f"table covers {len(table)} of {len(self.domain)} domain points"
            )
        for v in table:
            if not 0 <= v < len(self.codomain):
                raise InputError(f"table value {v} is not a codomain index")

    def __call__(self, i: int) -> int:
        return self.table[i]

    def point_image(self, point):
        return self.codomain.points[self.table[self.domain.index_of(point)]]

    @classmethod
    def identity(cls, img: DigitalImage) -> "DigitalMap":
        return cls(img, img, tuple(range(len(img))))

    @classmethod
    def constant(cls, domain: DigitalImage, codomain: DigitalImage, value: int) -> "DigitalMap":
        return cls(domain, codomain, (value,) * len(domain))

    @classmethod
    def from_point_map(cls, domain: DigitalImage, codomain: DigitalImage, fn) -> "DigitalMap":
        return cls(
            domain,
            codomain,
            tuple(codomain.index_of(fn(p)) for p in domain.points),
        )

    @classmethod
    def from_pairs(cls, domain: DigitalImage, codomain: DigitalImage, pairs) -> "DigitalMap":
        table: dict[int, int] = {}
        for i, v in pairs:
            i, v = int(i), int(v)
            if i in table and table[i] != v:
                raise InputError(f"conflicting images for domain index {i}")
            table[i] = v
        missing = [i for i in range(len(domain)) if i not in table]
        if missing:
            raise InputError(f"partial map table, missing domain indices {missing}")
        return cls(domain, codomain, tuple(table[i] for i in range(len(domain))))


def is_continuous(f: DigitalMap) -> bool:
    t = f.table
    return all(adjacent_or_equal(f.codomain, t[i], t[j]) for i, j in f.domain.edges)


def is_surjective(f: DigitalMap) -> bool:
    return len(set(f.table)) == len(f.codomain)


def compose(f: DigitalMap, g: DigitalMap) -> DigitalMap:
    """Apply f first, then g (so the result is the usual g o f)."""
    if f.codomain != g.domain:
        raise InputError("compose: codomain of the first map differs from domain of the second")
    out = DigitalMap(f.domain, g.codomain, tuple(g.table[v] for v in f.table))
    if is_continuous(f) and is_continuous(g):
        assert is_continuous(out)
    return out


def inverse(f: DigitalMap) -> DigitalMap:
    if len(f.domain) != len(f.codomain) or len(set(f.table)) != len(f.table):
        raise InputError("inverse of a non-bijective map")
    inv = [0] * len(f.codomain)
    for i, v in enumerate(f.table):
        inv[v] = i
    return DigitalMap(f.codomain, f.domain, tuple(inv))


def is_isomorphism(f: DigitalMap) -> bool:
    if len(f.domain) != len(f.codomain) or len(set(f.table)) != len(f.table):
        return False
    return is_continuous(f) and is_continuous(inverse(f))


def restrict(f: DigitalMap, subset) -> DigitalMap:
    """f on the induced subimage of a nonempty domain subset."""
    idx = sorted(set(int(i) for i in subset))
    sub = induced_subimage(f.domain, idx)
    return DigitalMap(sub, f.codomain, tuple(f.table[i] for i in idx))


def is_retraction(f: DigitalMap, subset) -> bool:
    """f retracts its domain onto the subimage named by `subset`.

    Requires continuity, codomain point set equal to the subset's point set,
    and the identity on that subset.  A retraction is automatically surjective
    onto its codomain.
    """
    idx = sorted(set(int(i) for i in subset))
    if not idx:
        raise InputError("empty retraction target")
    for i in idx:
        f.domain._check_index(i)
    sub_points = tuple(f.domain.points[i] for i in idx)
    if set(sub_points) - set(f.codomain.points):
        raise InputError("retraction target not contained in the codomain point set")
    if f.codomain.points != sub_points:
        return False
    if not is_continuous(f):
        return False
    for i in idx:
        if f.codomain.points[f.table[i]] != f.domain.points[i]:
            return False
    assert is_surjective(f)
    return True


def preimage(f: DigitalMap, value: int) -> tuple[int, ...]:
    f.codomain._check_index(value)
    return tuple(i for i, v in enumerate(f.table) if v == value)
