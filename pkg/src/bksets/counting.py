"""Representation functions and same-sum structure of a point set.

Profiles count, exactly and by brute enumeration, how often a value arises
in a prescribed combination of set elements:

* ``sigma_j``: ordered j-tuples summing to n
* ``delta``:   ordered differences a - b = n
* ``r2``:      unordered pairs {a, b}, a != b, with a + b = n
* ``f3``:      ({a, c}, b) with a - b + c = n and b outside {a, c}
* ``g1``/``g2``: the split of f3 restricted to keys c in A, by whether the
  subtracted element equals c (``g2`` counts centered 3-term progressions)
* ``f4``:      ordered pairs of disjoint 2-subsets with
  a1 + a2 - b1 - b2 = n

Keys are residues for cyclic contexts and plain integers for intervals
(where f3/f4 keys may be negative); zero counts are omitted.

The same-sum decomposition groups 2-subsets of A by their sum d.  Distinct
pairs with a common sum are automatically disjoint (cancel the shared
element), so each entry is a partial matching on A.  The ``s`` variant
keeps only sums with at least two pairs; the ``p`` variant keeps every sum
including singleton buckets.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .groups import (
    CyclicZ,
    DomainError,
    GroupCtx,
    PointSet,
    TableGroup,
    UnsupportedContextError,
)

PROFILE_KINDS = ("sigma_j", "delta", "r2", "f3", "g1", "g2", "f4")


@dataclass(frozen=True)
class RepProfile:
    kind: str
    counts: dict[int, int]

    def __getitem__(self, key: int) -> int:
        return self.counts.get(key, 0)

    def keys(self):
        return self.counts.keys()


@dataclass(frozen=True)
class ProfileStats:
    total: int
    sum_of_squares: int
    sum_f_times_fminus1: int
    max: int


def sum_square_stats(profile: RepProfile) -> ProfileStats:
    """Exact integer moments of a profile (empty profiles give all zeros)."""
    values = profile.counts.values()
    return ProfileStats(
        total=sum(values),
        sum_of_squares=sum(v * v for v in values),
        sum_f_times_fminus1=sum(v * (v - 1) for v in values),
        max=max(values, default=0),
    )


def _require_abelian(ctx: GroupCtx, points: PointSet) -> None:
    if isinstance(ctx, TableGroup):
        raise UnsupportedContextError("profiles are defined on abelian contexts")
    if points.ctx != ctx:
        raise DomainError("point set does not live in the given context")
    if not points.elements:
        raise DomainError("point set must be nonempty")


def rep_profile(ctx: GroupCtx, points: PointSet, kind: str, j: int | None = None) -> RepProfile:
    """Exact representation counts of the requested kind; zeros omitted."""
    _require_abelian(ctx, points)
    if kind not in PROFILE_KINDS:
        raise DomainError(f"unknown profile kind {kind!r}")
    modulus = ctx.modulus if isinstance(ctx, CyclicZ) else None
    values = points.elements
    counts: dict[int, int] = {}

    def bump(key: int) -> None:
        if modulus is not None:
            key %= modulus
        counts[key] = counts.get(key, 0) + 1

    if kind == "sigma_j":
        if j is None or j < 1:
            raise DomainError("sigma_j needs an arity j >= 1")
        acc = dict.fromkeys(values, 1)
        for _ in range(j - 1):
            nxt: dict[int, int] = {}
            for s, c in acc.items():
                for v in values:
                    key = s + v
                    if modulus is not None:
                        key %= modulus
                    nxt[key] = nxt.get(key, 0) + c
            acc = nxt
        counts = acc
    elif kind == "delta":
        for a in values:
            for b in values:
                bump(a - b)
    elif kind == "r2":
        for a, b in combinations(values, 2):
            bump(a + b)
    elif kind == "f3":
        for a, c in combinations(values, 2):
            for b in values:
                if b != a and b != c:
                    bump(a - b + c)
    elif kind in ("g1", "g2"):
        member = set(values)
        want_center = kind == "g2"
        for x, z in combinations(values, 2):
            for y in values:
                if y == x or y == z:
                    continue
                key = x - y + z
                if modulus is not None:
                    key %= modulus
                if key in member and (key == y) == want_center:
                    counts[key] = counts.get(key, 0) + 1
    else:  # f4
        pairs = list(combinations(values, 2))
        for a1, a2 in pairs:
            for b1, b2 in pairs:
                if b1 in (a1, a2) or b2 in (a1, a2):
                    continue
                bump(a1 + a2 - b1 - b2)

    return RepProfile(kind, counts)


def f3_mass(size: int) -> int:
    """Total mass of any f3 profile: C(|A|, 2) * (|A| - 2)."""
    return comb(size, 2) * (size - 2)


def f4_mass(size: int) -> int:
    """Total mass of any f4 profile: C(|A|, 2) * C(|A| - 2, 2)."""
    return comb(size, 2) * comb(size - 2, 2)


@dataclass(frozen=True)
class APCount:
    """3-term progression count: unordered outer pair {p, q} with center r.

    ``trivial`` covers p = q (center r = p, and in even cyclic contexts the
    coincidence 2p = 2(p + n/2) contributes the second center p + n/2);
    ``nontrivial`` counts progressions with p, q, r all distinct.
    """

    trivial: int
    nontrivial: int

    @property
    def total(self) -> int:
        return self.trivial + self.nontrivial


def count_3aps(ctx: GroupCtx, points: PointSet) -> APCount:
    """Count solutions p + q = 2r with p, q, r in A."""
    _require_abelian(ctx, points)
    values = points.elements
    member = set(values)
    trivial = 0
    nontrivial = 0
    if isinstance(ctx, CyclicZ):
        n = ctx.modulus
        half = n // 2 if n % 2 == 0 else None

        def centers(total: int):
            if n % 2 == 1:
                yield (total * pow(2, -1, n)) % n
            elif total % 2 == 0:
                yield total // 2
                yield (total // 2 + half) % n

        for i, p in enumerate(values):
            for q in values[i:]:
                for r in centers((p + q) % n):
                    if r not in member:
                        continue
                    if p == q:
                        trivial += 1
                    else:
                        nontrivial += 1
    else:
        for i, p in enumerate(values):
            for q in values[i:]:
                total = p + q
                if total % 2:
                    continue
                r = total // 2
                if r not in member:
                    continue
                if p == q:
                    trivial += 1
                else:
                    nontrivial += 1
    return APCount(trivial, nontrivial)


@dataclass(frozen=True)
class DecompEntry:
    d: int
    pairs: tuple[tuple[int, int], ...]
    support: tuple[int, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class StructureDecomp:
    variant: str
    entries: tuple[DecompEntry, ...]

    @property
    def total_entries(self) -> int:
        return len(self.entries)

    def count_with_multiplicity(self, s: int) -> int:
        return sum(1 for e in self.entries if e.multiplicity == s)

    @property
    def multiplicity_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for e in self.entries:
            out[e.multiplicity] = out.get(e.multiplicity, 0) + 1
        return out

    def pair_link_count(self) -> int:
        """Ordered pairs of distinct same-sum 2-subsets: sum s_i(s_i - 1)."""
        return sum(e.multiplicity * (e.multiplicity - 1) for e in self.entries)


def decompose_same_sum(ctx: GroupCtx, points: PointSet, variant: str) -> StructureDecomp:
    """Group the 2-subsets of A by sum.

    ``variant="s"`` keeps sums with at least two (necessarily disjoint)
    pairs; ``variant="p"`` keeps every sum in A + A with all its pairs.
    """
    _require_abelian(ctx, points)
    if variant not in ("s", "p"):
        raise DomainError(f"unknown decomposition variant {variant!r}")
    modulus = ctx.modulus if isinstance(ctx, CyclicZ) else None
    buckets: dict[int, list[tuple[int, int]]] = {}
    for a, b in combinations(points.elements, 2):
        d = a + b
        if modulus is not None:
            d %= modulus
        buckets.setdefault(d, []).append((a, b))
    minimum = 2 if variant == "s" else 1
    entries = []
    for d in sorted(buckets):
        pairs = buckets[d]
        if len(pairs) < minimum:
            continue
        support = [x for pair in pairs for x in pair]
        if len(set(support)) != len(support):
            raise AssertionError("same-sum pairs must form a partial matching")
        entries.append(DecompEntry(d, tuple(pairs), tuple(sorted(support))))
    return StructureDecomp(variant, tuple(entries))
