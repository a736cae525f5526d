"""Exact extremal sizes of Bk-type sets by branch-and-bound search.

``extremal`` computes the maximum cardinality of a set with the requested
flavor inside [1..n] or Z_n, by depth-first extension in increasing element
order over an incremental bucket state.  Translation lets the search anchor
1 (intervals) or 0 (cyclic) without losing generality; candidate-count
pruning and a greedy initial bound keep the tree small.  Every reported
optimum re-verifies, and exhausting the tree certifies that no larger set
exists.

``extremal_oracle`` is the independent cross-check: an exhaustive scan of
subsets with a fresh full verification per subset, no incremental state, no
normalization, no pruning bound.  Small ambients are scanned literally over
all 2^n bitmasks; larger ones walk subset sizes upward and stop at the
first size where every subset fails, which exhausts the power set because
the properties are hereditary (buckets only shrink under deletion).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from itertools import combinations
from random import Random

from .groups import (
    CyclicZ,
    DomainError,
    GroupCtx,
    IntegerInterval,
    InternalConsistencyError,
    PointSet,
    ResourceCapError,
)
from .verify import BucketState, fast_holds

FAMILIES = ("interval", "cyclic")

ORACLE_N_CAP = 22
ORACLE_BITMASK_LIMIT = 12


def context_for(family: str, n: int) -> GroupCtx:
    if family == "interval":
        return IntegerInterval(n)
    if family == "cyclic":
        return CyclicZ(n)
    raise DomainError(f"unknown family {family!r}, expected one of {FAMILIES}")


@dataclass(frozen=True)
class SearchOptions:
    normalize: bool = True
    collect_optima: bool = True
    greedy_seed: bool = True
    dilation_classes: bool = False
    n_cap: int = 512
    node_cap: int | None = None
    time_cap: float | None = None


@dataclass(frozen=True)
class ExtremalRecord:
    family: str
    k: int
    flavor: str
    n: int
    value: int
    optima: tuple[PointSet, ...]
    nodes: int
    seconds: float
    certified: bool


def _greedy_size(ctx: GroupCtx, candidates: list[int], k: int, flavor: str) -> int:
    state = BucketState(ctx, k, flavor)
    for c in candidates:
        state.push(c)
    return len(state.values)


def _dilation_canonical(ctx: CyclicZ, elements: tuple[int, ...]) -> tuple[int, ...]:
    n = ctx.modulus
    best = elements
    for u in range(1, n):
        if math.gcd(u, n) != 1:
            continue
        image = tuple(sorted((u * a) % n for a in elements))
        if image < best:
            best = image
    return best


def extremal(family: str, k: int, flavor: str, n: int, options: SearchOptions | None = None) -> ExtremalRecord:
    """Exact maximum size, with the witnessing optima, by branch-and-bound."""
    opts = options or SearchOptions()
    if n > opts.n_cap:
        raise ResourceCapError(f"ambient size {n} exceeds the cap {opts.n_cap}")
    ctx = context_for(family, n)
    candidates = list(ctx.elements())
    started = time.perf_counter()

    best = _greedy_size(ctx, candidates, k, flavor) if opts.greedy_seed else 1
    best_sets: list[tuple[int, ...]] = []
    state = BucketState(ctx, k, flavor)
    nodes = 0
    budget_hit = False

    def out_of_budget() -> bool:
        if opts.node_cap is not None and nodes > opts.node_cap:
            return True
        if opts.time_cap is not None and time.perf_counter() - started > opts.time_cap:
            return True
        return False

    def extend(start: int) -> None:
        nonlocal best, best_sets, nodes, budget_hit
        if budget_hit:
            return
        nodes += 1
        if out_of_budget():
            budget_hit = True
            return
        size = len(state.values)
        if size > best:
            best = size
            best_sets = [tuple(state.values)]
        elif size == best and opts.collect_optima:
            best_sets.append(tuple(state.values))
        for idx in range(start, len(candidates)):
            remaining = len(candidates) - idx
            if size + remaining < best or (size + remaining == best and not opts.collect_optima):
                break
            if state.push(candidates[idx]).holds:
                extend(idx + 1)
                state.pop()

    if opts.normalize:
        state.push(candidates[0])
        extend(1)
    else:
        extend(0)

    optima = best_sets
    if best == 1 and opts.collect_optima and not optima:
        optima = [(candidates[0],)]
    if opts.dilation_classes and isinstance(ctx, CyclicZ):
        canon = {}
        for elems in optima:
            canon.setdefault(_dilation_canonical(ctx, elems), elems)
        optima = [canon[key] for key in sorted(canon)]
    return ExtremalRecord(
        family=family,
        k=k,
        flavor=flavor,
        n=n,
        value=best,
        optima=tuple(PointSet.of(ctx, e) for e in sorted(set(optima))),
        nodes=nodes,
        seconds=time.perf_counter() - started,
        certified=not budget_hit,
    )


def extremal_oracle(family: str, k: int, flavor: str, n: int, n_cap: int = ORACLE_N_CAP) -> int:
    """Independent exhaustive maximum over all subsets; see module notes."""
    if n > n_cap:
        raise ResourceCapError(f"oracle limited to ambient sizes <= {n_cap}")
    ctx = context_for(family, n)
    elements = tuple(ctx.elements())

    if n <= ORACLE_BITMASK_LIMIT:
        best = 0
        for mask in range(1, 1 << n):
            size = mask.bit_count()
            if size <= best:
                continue
            subset = tuple(elements[i] for i in range(n) if mask >> i & 1)
            if fast_holds(ctx, subset, k, flavor):
                best = size
        return best

    value = 1
    for size in range(2, n + 1):
        if any(fast_holds(ctx, subset, k, flavor) for subset in combinations(elements, size)):
            value = size
        else:
            break
    return value


def random_maximal_set(family: str, k: int, flavor: str, n: int, rng: Random) -> PointSet:
    """One maximal set grown by a single shuffled insertion pass.

    Rejection is monotone (a conflict with a subset persists in supersets),
    so one pass yields a set no further element extends.
    """
    ctx = context_for(family, n)
    candidates = list(ctx.elements())
    rng.shuffle(candidates)
    state = BucketState(ctx, k, flavor, require_ascending=False)
    for c in candidates:
        state.push(c)
    return state.point_set()


# ---------------------------------------------------------------------------
# finite bounds on certified values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundEntry:
    name: str
    lhs: float
    rhs: float
    asserted: bool

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs


@dataclass(frozen=True)
class BoundReport:
    record: ExtremalRecord
    entries: tuple[BoundEntry, ...]


def bound_check(record: ExtremalRecord) -> BoundReport:
    """Check a certified value against every applicable exact finite bound.

    Asserted entries are exact counting facts; a certified value violating
    one indicates a bug and halts.  Asymptotic leading-constant comparisons
    are recorded without assertion.
    """
    v, n, k = record.value, record.n, record.k
    entries: list[BoundEntry] = []
    if record.flavor == "b":
        multiset_count = math.comb(v + k - 1, k)
        cap = k * n if record.family == "interval" else n
        entries.append(BoundEntry("k-multiset sums fit the ambient", multiset_count, cap, True))
        if k == 2:
            if record.family == "interval":
                entries.append(BoundEntry("pair-sum bound sqrt(n)+n^(1/4)+1", v, n**0.5 + n**0.25 + 1, True))
            else:
                entries.append(BoundEntry("difference-count bound sqrt(n)+1", v, n**0.5 + 1, True))
    half = math.factorial(k // 2) * math.factorial((k + 1) // 2)
    scale = k * n if record.family == "interval" else n
    entries.append(BoundEntry("leading-constant comparison (half-factorial root)", v, (half * scale) ** (1 / k), False))
    if record.family == "cyclic" and k == 3 and record.flavor == "b":
        entries.append(BoundEntry("leading-constant comparison (2n)^(1/3)", v, (2 * n) ** (1 / 3), False))

    report = BoundReport(record, tuple(entries))
    if record.certified:
        for entry in report.entries:
            if entry.asserted and not entry.ok:
                raise InternalConsistencyError(
                    f"certified value {v} violates exact bound {entry.name}: {entry.lhs} > {entry.rhs}"
                )
    return report


def doubling_inequality(k: int, n: int, options: SearchOptions | None = None) -> BoundEntry:
    """Exact check that twice the cyclic Bk maximum fits the Bk+ maximum at 2n."""
    if k % 2 == 0 or k < 3:
        raise DomainError(f"the doubling inequality needs odd k >= 3, got {k}")
    opts = options or SearchOptions(collect_optima=False)
    base = extremal("cyclic", k, "b", n, opts)
    doubled = extremal("cyclic", k, "plus", 2 * n, opts)
    entry = BoundEntry(f"2*C_{k}({n}) <= C_{k}+({2 * n})", 2 * base.value, doubled.value, True)
    if not entry.ok:
        raise InternalConsistencyError(f"doubling inequality failed: {entry.lhs} > {entry.rhs}")
    return entry
