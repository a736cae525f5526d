"""Ambient group contexts, point sets, and multiset sum primitives.

Three kinds of ambient structure are supported:

* ``CyclicZ(n)``     -- residues 0..n-1, sums reduced mod n
* ``IntegerInterval(n)`` -- integers 1..n, sums taken in Z (never reduced)
* ``TableGroup``     -- a finite (possibly non-abelian) group given by its
  multiplication table; elements are row/column indices

All values are immutable after construction, so every operation here is
pure and safe to use from parallel workers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Union

import numpy as np


class DomainError(ValueError):
    """An argument is outside the domain an operation is defined on."""


class RangeError(ValueError):
    """An affine image leaves the ambient interval."""


class UnsupportedContextError(TypeError):
    """Operation is not defined for this kind of group context."""


class ResourceCapError(RuntimeError):
    """A configured desk-scale cap would be exceeded."""


class PreconditionError(ValueError):
    """A checked precondition failed; carries a re-checkable witness."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class InternalConsistencyError(RuntimeError):
    """A certified value violated an exact bound: indicates a bug, halts."""


@dataclass(frozen=True)
class CyclicZ:
    """The cyclic group of residues modulo ``modulus``."""

    modulus: int

    kind = "cyclic"

    def __post_init__(self):
        if self.modulus < 1:
            raise DomainError(f"cyclic modulus must be >= 1, got {self.modulus}")

    def elements(self) -> range:
        return range(self.modulus)

    def contains(self, value: int) -> bool:
        return 0 <= value < self.modulus

    def reduce(self, value: int) -> int:
        return value % self.modulus


@dataclass(frozen=True)
class IntegerInterval:
    """The integer interval 1..bound; sums live in Z without wraparound."""

    bound: int

    kind = "interval"

    def __post_init__(self):
        if self.bound < 1:
            raise DomainError(f"interval bound must be >= 1, got {self.bound}")

    def elements(self) -> range:
        return range(1, self.bound + 1)

    def contains(self, value: int) -> bool:
        return 1 <= value <= self.bound


@dataclass(frozen=True)
class TableGroup:
    """A finite group presented by its full multiplication table.

    ``table[a][b]`` is the index of the product a*b.  Construction checks
    that the table is a Latin square, that ``identity`` acts as a two-sided
    identity, and that the operation is associative; the associativity
    check is the full triple test, vectorized so desk-scale orders (a few
    hundred) stay fast.
    """

    table: tuple[tuple[int, ...], ...]
    identity: int

    kind = "table"

    def __post_init__(self):
        n = len(self.table)
        if n < 1:
            raise DomainError("empty multiplication table")
        full = frozenset(range(n))
        for row in self.table:
            if len(row) != n or frozenset(row) != full:
                raise DomainError("multiplication table rows must be permutations")
        for col in zip(*self.table):
            if frozenset(col) != full:
                raise DomainError("multiplication table columns must be permutations")
        e = self.identity
        if not 0 <= e < n:
            raise DomainError(f"identity index {e} out of range")
        for a in range(n):
            if self.table[e][a] != a or self.table[a][e] != a:
                raise DomainError("identity element does not act as identity")
        t = np.asarray(self.table, dtype=np.int32)
        if not np.array_equal(t[t, :], t[:, t]):
            raise DomainError("multiplication table is not associative")

    @property
    def order(self) -> int:
        return len(self.table)

    def elements(self) -> range:
        return range(self.order)

    def contains(self, value: int) -> bool:
        return 0 <= value < self.order

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return self.table[a].index(self.identity)

    @cached_property
    def is_abelian(self) -> bool:
        return all(
            self.table[a][b] == self.table[b][a]
            for a in range(self.order)
            for b in range(self.order)
        )


GroupCtx = Union[CyclicZ, IntegerInterval, TableGroup]


def is_abelian_ctx(ctx: GroupCtx) -> bool:
    return isinstance(ctx, (CyclicZ, IntegerInterval))


def _check_elements(ctx: GroupCtx, values: Iterable[int]) -> None:
    for v in values:
        if not ctx.contains(v):
            raise DomainError(f"element {v} not valid in {ctx}")


@dataclass(frozen=True)
class PointSet:
    """A finite set of distinct elements inside a group context.

    Elements are kept strictly ascending, so equal sets compare equal and
    serialized documents are canonical.
    """

    ctx: GroupCtx
    elements: tuple[int, ...]

    def __post_init__(self):
        _check_elements(self.ctx, self.elements)
        if any(a >= b for a, b in zip(self.elements, self.elements[1:])):
            raise DomainError("point set elements must be strictly ascending")

    @classmethod
    def of(cls, ctx: GroupCtx, values: Iterable[int]) -> "PointSet":
        ordered = tuple(sorted(values))
        return cls(ctx, ordered)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __contains__(self, value: int) -> bool:
        return value in set(self.elements)


def canonical_multiset(values: Iterable[int]) -> tuple[int, ...]:
    """Sort a value sequence into the canonical multiset representative."""
    m = tuple(sorted(values))
    if not m:
        raise DomainError("multisets must be nonempty")
    return m


def sum_multiset(ctx: GroupCtx, multiset: Iterable[int]) -> int:
    """Sum of a multiset, reduced mod n for CyclicZ, exact for intervals."""
    if isinstance(ctx, TableGroup):
        raise UnsupportedContextError("multiset sums need an abelian context; use word_product")
    values = tuple(multiset)
    _check_elements(ctx, values)
    total = sum(values)
    if isinstance(ctx, CyclicZ):
        return total % ctx.modulus
    return total


def word_product(ctx: GroupCtx, word: Iterable[int]) -> int:
    """Left-to-right product of a word in a table group (order matters)."""
    if not isinstance(ctx, TableGroup):
        raise UnsupportedContextError("word products need a table group context")
    acc = ctx.identity
    table = ctx.table
    n = ctx.order
    for w in word:
        if not 0 <= w < n:
            raise DomainError(f"element {w} not valid in group of order {n}")
        acc = table[acc][w]
    return acc


def transform(points: PointSet, t: int, u: int = 1) -> PointSet:
    """Affine image {u*a + t : a in A}, re-sorted.

    For CyclicZ, u must be a unit mod n.  For intervals, u must be +1 or -1
    and the image must stay inside 1..n; anything else raises.
    """
    ctx = points.ctx
    if isinstance(ctx, CyclicZ):
        n = ctx.modulus
        if math.gcd(u % n, n) != 1:
            raise DomainError(f"{u} is not a unit mod {n}")
        return PointSet.of(ctx, ((u * a + t) % n for a in points))
    if isinstance(ctx, IntegerInterval):
        if u not in (1, -1):
            raise DomainError(f"interval dilations limited to +1/-1, got {u}")
        image = [u * a + t for a in points]
        if any(not ctx.contains(v) for v in image):
            raise RangeError(f"affine image leaves the interval 1..{ctx.bound}")
        return PointSet.of(ctx, image)
    raise UnsupportedContextError("transform is not defined for table groups")


def enumerate_k_multisets(points: PointSet, k: int) -> Iterator[tuple[int, ...]]:
    """Yield every k-multiset of the set exactly once, in canonical order.

    The total count is C(|A| + k - 1, k).
    """
    if k < 1:
        raise DomainError(f"multiset size must be >= 1, got {k}")
    return combinations_with_replacement(points.elements, k)


# ---------------------------------------------------------------------------
# serialization: canonical JSON documents with bit-exact round trips
# ---------------------------------------------------------------------------

def ctx_to_obj(ctx: GroupCtx) -> dict:
    if isinstance(ctx, CyclicZ):
        return {"kind": "cyclic", "modulus": ctx.modulus}
    if isinstance(ctx, IntegerInterval):
        return {"kind": "interval", "bound": ctx.bound}
    if isinstance(ctx, TableGroup):
        return {
            "kind": "table",
            "order": ctx.order,
            "identity": ctx.identity,
            "table": [list(row) for row in ctx.table],
        }
    raise UnsupportedContextError(f"unknown context {ctx!r}")


def ctx_from_obj(obj: dict) -> GroupCtx:
    kind = obj.get("kind")
    if kind == "cyclic":
        return CyclicZ(int(obj["modulus"]))
    if kind == "interval":
        return IntegerInterval(int(obj["bound"]))
    if kind == "table":
        table = tuple(tuple(int(x) for x in row) for row in obj["table"])
        group = TableGroup(table, int(obj["identity"]))
        if group.order != int(obj["order"]):
            raise DomainError("declared order does not match the table")
        return group
    raise DomainError(f"unknown group kind {kind!r}")


def _dump(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def point_set_document(points: PointSet) -> str:
    """Canonical one-line JSON document for a point set."""
    return _dump({"group": ctx_to_obj(points.ctx), "elements": list(points.elements)})


def point_set_from_document(text: str) -> PointSet:
    obj = json.loads(text)
    return PointSet(ctx_from_obj(obj["group"]), tuple(int(v) for v in obj["elements"]))


def table_group_document(group: TableGroup, **annotations: int) -> str:
    """Serialize a table group, with optional named element annotations."""
    obj = {"group": ctx_to_obj(group)}
    for name, idx in sorted(annotations.items()):
        if not group.contains(idx):
            raise DomainError(f"annotation {name}={idx} is not a group element")
        obj[name] = idx
    return _dump(obj)


def table_group_from_document(text: str) -> tuple[TableGroup, dict[str, int]]:
    obj = json.loads(text)
    group = ctx_from_obj(obj["group"])
    if not isinstance(group, TableGroup):
        raise DomainError("document does not describe a table group")
    notes = {k: int(v) for k, v in obj.items() if k != "group"}
    return group, notes
