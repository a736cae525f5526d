"""Decision procedures for the Bk, Bk+, and Bk* properties.

A set A is bucketed by k-multiset sum (abelian contexts) or by k-letter
word product (table groups).  The three abelian flavors are decided per
bucket:

* ``b``:    every bucket holds exactly one multiset,
* ``plus``: any two multisets in a bucket share at least one element value,
* ``star``: no bucket holds two multisets that both have k distinct entries
            and disjoint supports (the 2k-distinct-elements relaxation).

The defining conditions quantify over ordered tuples, but they are closed
under permutation, so the multiset reduction is exact; ``verify_tuples``
keeps the raw ordered-tuple semantics as an independent cross-check.

Failed verdicts carry a witness: the pair taken from the lexicographically
first violating bucket (ordered by sum or product), first pair inside it,
so failures diff cleanly across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement, product
from typing import Iterable, Optional

from .groups import (
    CyclicZ,
    DomainError,
    GroupCtx,
    PointSet,
    ResourceCapError,
    TableGroup,
    UnsupportedContextError,
    is_abelian_ctx,
)

FLAVORS = ("b", "plus", "star")
WORD_FLAVORS = ("b", "plus")


@dataclass(frozen=True)
class Verdict:
    """Outcome of a property check, with a re-checkable failure witness."""

    holds: bool
    witness: Optional[tuple[tuple[int, ...], tuple[int, ...]]] = None

    def __bool__(self) -> bool:
        return self.holds


def _check_flavor(flavor: str, allowed=FLAVORS) -> None:
    if flavor not in allowed:
        raise DomainError(f"unknown flavor {flavor!r}, expected one of {allowed}")


def _check_abelian_args(ctx: GroupCtx, points: PointSet, k: int, flavor: str) -> None:
    _check_flavor(flavor)
    if not is_abelian_ctx(ctx):
        raise UnsupportedContextError("use verify_word for table groups")
    if points.ctx != ctx:
        raise DomainError("point set does not live in the given context")
    if k < 2:
        raise DomainError(f"property order must be >= 2, got {k}")
    if not points.elements:
        raise DomainError("point set must be nonempty")


def _violates(flavor: str, mask_a: int, mask_b: int, k: int) -> bool:
    """Do two same-sum multisets (as support masks) witness a failure?"""
    if flavor == "b":
        return True
    if flavor == "plus":
        return mask_a & mask_b == 0
    return (
        mask_a.bit_count() == k
        and mask_b.bit_count() == k
        and mask_a & mask_b == 0
    )


def verify(ctx: GroupCtx, points: PointSet, k: int, flavor: str) -> Verdict:
    """Decide the flavor on an abelian context, full scan, canonical witness."""
    _check_abelian_args(ctx, points, k, flavor)
    values = points.elements
    n = len(values)
    modulus = ctx.modulus if isinstance(ctx, CyclicZ) else None

    buckets: dict[int, list[tuple[tuple[int, ...], int]]] = {}
    for idx in combinations_with_replacement(range(n), k):
        total = 0
        mask = 0
        for i in idx:
            total += values[i]
            mask |= 1 << i
        if modulus is not None:
            total %= modulus
        buckets.setdefault(total, []).append((tuple(values[i] for i in idx), mask))

    for key in sorted(buckets):
        entries = buckets[key]
        if len(entries) < 2:
            continue
        if flavor == "b":
            return Verdict(False, (entries[0][0], entries[1][0]))
        for i in range(len(entries)):
            mi, xi = entries[i][1], entries[i][0]
            for j in range(i + 1, len(entries)):
                if _violates(flavor, mi, entries[j][1], k):
                    return Verdict(False, (xi, entries[j][0]))
    return Verdict(True)


def fast_holds(ctx: GroupCtx, values: tuple[int, ...], k: int, flavor: str) -> bool:
    """Early-exit version of verify on a raw ascending value tuple.

    Same decision as ``verify``; used where only the boolean matters
    (exhaustive oracles, random maximal-set generation).
    """
    n = len(values)
    modulus = ctx.modulus if isinstance(ctx, CyclicZ) else None
    if flavor == "b":
        seen: set[int] = set()
        for idx in combinations_with_replacement(range(n), k):
            total = sum(values[i] for i in idx)
            if modulus is not None:
                total %= modulus
            if total in seen:
                return False
            seen.add(total)
        return True

    star = flavor == "star"
    buckets: dict[int, list[int]] = {}
    for idx in combinations_with_replacement(range(n), k):
        total = 0
        mask = 0
        for i in idx:
            total += values[i]
            mask |= 1 << i
        if modulus is not None:
            total %= modulus
        if star and mask.bit_count() != k:
            continue
        bucket = buckets.setdefault(total, [])
        for other in bucket:
            if other & mask == 0:
                return False
        bucket.append(mask)
    return True


def verify_word(
    ctx: TableGroup,
    points: PointSet,
    k: int,
    flavor: str,
    word_cap: int = 1_000_000,
) -> Verdict:
    """Decide the non-abelian flavor by bucketing all |A|^k ordered words."""
    _check_flavor(flavor, WORD_FLAVORS)
    if not isinstance(ctx, TableGroup):
        raise UnsupportedContextError("verify_word needs a table group context")
    if points.ctx != ctx:
        raise DomainError("point set does not live in the given group")
    if k < 2:
        raise DomainError(f"property order must be >= 2, got {k}")
    if not points.elements:
        raise DomainError("point set must be nonempty")
    n = len(points)
    if n**k > word_cap:
        raise ResourceCapError(f"{n}^{k} words exceed the cap {word_cap}")

    buckets: dict[int, list[tuple[int, ...]]] = {}
    for word in product(points.elements, repeat=k):
        acc = word[0]
        for w in word[1:]:
            acc = ctx.table[acc][w]
        buckets.setdefault(acc, []).append(word)

    for key in sorted(buckets):
        words = buckets[key]
        if len(words) < 2:
            continue
        if flavor == "b":
            return Verdict(False, (words[0], words[1]))
        for i in range(len(words)):
            wi = words[i]
            for j in range(i + 1, len(words)):
                wj = words[j]
                if all(a != b for a, b in zip(wi, wj)):
                    return Verdict(False, (wi, wj))
    return Verdict(True)


def verify_tuples(ctx: GroupCtx, points: PointSet, k: int, flavor: str) -> bool:
    """Reference decision straight from the ordered-tuple definitions.

    Enumerates all |A|^k ordered tuples and tests the defining implication
    on every equal-sum pair.  Exponentially slower than ``verify``; kept as
    the independent oracle for the multiset reduction.
    """
    _check_abelian_args(ctx, points, k, flavor)
    modulus = ctx.modulus if isinstance(ctx, CyclicZ) else None
    buckets: dict[int, list[tuple[int, ...]]] = {}
    for tup in product(points.elements, repeat=k):
        total = sum(tup)
        if modulus is not None:
            total %= modulus
        buckets.setdefault(total, []).append(tup)
    for entries in buckets.values():
        for a in entries:
            sa = set(a)
            for b in entries:
                if flavor == "b":
                    if sorted(a) != sorted(b):
                        return False
                elif flavor == "plus":
                    if not sa & set(b):
                        return False
                else:
                    if len(sa) == k and len(set(b)) == k and not sa & set(b):
                        return False
    return True


class BucketState:
    """Incremental bucket table for one growing set.

    ``push`` examines only the multisets that contain the new element, so a
    depth-first search pays proportional cost per extension; a failed push
    leaves the state untouched.  The state is single-owner: share copies,
    not instances.
    """

    def __init__(self, ctx: GroupCtx, k: int, flavor: str, require_ascending: bool = True):
        _check_flavor(flavor)
        if not is_abelian_ctx(ctx):
            raise UnsupportedContextError("incremental verification is abelian-only")
        if k < 2:
            raise DomainError(f"property order must be >= 2, got {k}")
        self.ctx = ctx
        self.k = k
        self.flavor = flavor
        self.require_ascending = require_ascending
        self._modulus = ctx.modulus if isinstance(ctx, CyclicZ) else None
        self.values: list[int] = []
        self.buckets: dict[int, list[tuple[tuple[int, ...], int]]] = {}
        self._log: list[list[int]] = []

    def point_set(self) -> PointSet:
        return PointSet.of(self.ctx, self.values)

    def _new_multisets(self, x: int):
        """All k-multisets of values+[x] using x at least once."""
        k = self.k
        n = len(self.values)
        values = self.values
        new_bit = 1 << n
        for copies in range(1, k + 1):
            rest = k - copies
            base_sum = copies * x
            tail = (x,) * copies
            if rest == 0:
                yield tail, base_sum, new_bit
                continue
            for idx in combinations_with_replacement(range(n), rest):
                total = base_sum
                mask = new_bit
                for i in idx:
                    total += values[i]
                    mask |= 1 << i
                multiset = tuple(sorted(tuple(values[i] for i in idx) + tail))
                yield multiset, total, mask

    def push(self, x: int) -> Verdict:
        """Extend by x; on violation roll back and report a witness."""
        if not self.ctx.contains(x):
            raise DomainError(f"element {x} not valid in {self.ctx}")
        if x in self.values:
            raise DomainError(f"element {x} already present")
        if self.require_ascending and self.values and x <= self.values[-1]:
            raise DomainError("incremental extensions must arrive in ascending order")
        flavor = self.flavor
        k = self.k
        modulus = self._modulus
        added: list[int] = []
        for multiset, total, mask in self._new_multisets(x):
            if modulus is not None:
                total %= modulus
            bucket = self.buckets.setdefault(total, [])
            for other, other_mask in bucket:
                if _violates(flavor, mask, other_mask, k):
                    witness = (other, multiset)
                    for key in reversed(added):
                        self.buckets[key].pop()
                        if not self.buckets[key]:
                            del self.buckets[key]
                    return Verdict(False, witness)
            bucket.append((multiset, mask))
            added.append(total)
        self.values.append(x)
        self._log.append(added)
        return Verdict(True)

    def pop(self) -> int:
        """Undo the most recent successful push."""
        if not self.values:
            raise DomainError("nothing to pop")
        for key in reversed(self._log.pop()):
            self.buckets[key].pop()
            if not self.buckets[key]:
                del self.buckets[key]
        return self.values.pop()


def verify_incremental(state: BucketState, element: int) -> Verdict:
    """Spec-level incremental step: extend a passing state in search order."""
    if state.values and element <= state.values[-1]:
        raise DomainError("incremental extensions must arrive in ascending order")
    return state.push(element)
