"""Empirical audits of the structural facts behind the size bounds.

Every inequality or identity proved for a verified set flavor is evaluated
here with exact integers on concrete sets.  All of them are theorems, so a
failing check on a genuinely verified input means a bug in the verifier or
the counting code; test drivers treat any failure as fatal.

The module also derives the upper-bound constant table: seed constants for
orders 2 and 3 feed a halving recursion (even order k folds to k/2, odd k
to (k-1)/2 and (k+1)/2), and the bound coefficient for each order is the
k-th root of an exact integer radicand.  Direct sharper constants override
the recursion where one is proved.  Displayed values round up to the
nearest tenth, with a guard that no value sits within 1e-6 of a boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from random import Random

from .counting import (
    count_3aps,
    decompose_same_sum,
    f3_mass,
    f4_mass,
    rep_profile,
    sum_square_stats,
)
from .groups import (
    CyclicZ,
    DomainError,
    GroupCtx,
    IntegerInterval,
    InternalConsistencyError,
    PointSet,
    PreconditionError,
    point_set_document,
)
from .verify import verify


@dataclass(frozen=True)
class AuditCheck:
    anchor: str
    name: str
    lhs: int
    rhs: int
    relation: str = "<="

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs if self.relation == "==" else self.lhs <= self.rhs


@dataclass(frozen=True)
class AuditReport:
    subject: str
    audit: str
    checks: tuple[AuditCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> tuple[AuditCheck, ...]:
        return tuple(c for c in self.checks if not c.passed)


def require_clean(report: AuditReport) -> AuditReport:
    if not report.all_passed:
        bad = ", ".join(c.anchor for c in report.failures())
        raise InternalConsistencyError(f"audit {report.audit} failed checks: {bad}")
    return report


def _require(ctx: GroupCtx, points: PointSet, k: int, flavor: str) -> None:
    verdict = verify(ctx, points, k, flavor)
    if not verdict.holds:
        raise PreconditionError(
            f"audit needs a verified B{k} {flavor} set", witness=verdict.witness
        )


def embed_cyclic_as_interval(points: PointSet) -> PointSet:
    """Shift a cyclic set of residues into 1..n; flavor properties carry over."""
    ctx = points.ctx
    if not isinstance(ctx, CyclicZ):
        raise DomainError("embedding applies to cyclic sets")
    return PointSet.of(IntegerInterval(ctx.modulus), (a + 1 for a in points))


# ---------------------------------------------------------------------------
# order-3 plus audit
# ---------------------------------------------------------------------------

def _halfshift_pattern_ok(entry_i, entry_j, n: int) -> bool:
    """Match two overlapping multiplicity-3 entries against the half-shift
    structure forced in even cyclic contexts: sums differ by n/2, supports
    differ in one element and its half-shift, one pair carries the common
    element, and the remaining pairs swap half-shifted coordinates."""
    half = n // 2
    if (entry_j.d - entry_i.d) % n != half:
        return False
    si, sj = set(entry_i.support), set(entry_j.support)
    diff_i, diff_j = sorted(si - sj), sorted(sj - si)
    if len(diff_i) != 1 or len(diff_j) != 1:
        return False
    x1 = diff_i[0]
    if (diff_j[0] - x1) % n != half:
        return False
    anchor_pair_i = [p for p in entry_i.pairs if x1 in p]
    anchor_pair_j = [p for p in entry_j.pairs if diff_j[0] in p]
    if len(anchor_pair_i) != 1 or len(anchor_pair_j) != 1:
        return False
    x = (set(anchor_pair_i[0]) - {x1}).pop()
    if set(anchor_pair_j[0]) != {x, diff_j[0]}:
        return False
    rest_i = [set(p) for p in entry_i.pairs if x1 not in p]
    first = sorted(rest_i[0])
    y, z = first
    if rest_i[1] != {(y + half) % n, (z + half) % n}:
        return False
    rest_j = [set(p) for p in entry_j.pairs if diff_j[0] not in p]
    expected = [{(y + half) % n, z}, {y, (z + half) % n}]
    return all(r in expected for r in rest_j) and rest_j[0] != rest_j[1]


def audit_b3plus(ctx: GroupCtx, points: PointSet) -> AuditReport:
    """Structural checks proved for every B3+ set.

    Context-specific groups: cyclic contexts bound the full progression
    count and the center sum by |A|^2 + 7|A|; intervals and odd cyclic
    contexts carry the sharper |A|^2/2 + 3|A| center sum and the matching
    overlap restrictions; even cyclic contexts force the half-shift bucket
    structure.
    """
    _require(ctx, points, 3, "plus")
    size = len(points)
    cyclic = isinstance(ctx, CyclicZ)
    even_cyclic = cyclic and ctx.modulus % 2 == 0
    sharp = not even_cyclic  # interval or odd cyclic

    aps = count_3aps(ctx, points)
    f3 = rep_profile(ctx, points, "f3")
    g1 = rep_profile(ctx, points, "g1")
    g2 = rep_profile(ctx, points, "g2")
    decomp = decompose_same_sum(ctx, points, "s")
    stats = sum_square_stats(f3)
    member = set(points.elements)
    center_sum = sum(c for key, c in f3.counts.items() if key in member)
    link = decomp.pair_link_count()

    checks = [
        AuditCheck("ap-nontrivial", "distinct-term progressions at most 3|A|", aps.nontrivial, 3 * size),
        AuditCheck("ap-center-split", "centered count equals distinct-term progression count",
                   sum(g2.counts.values()), aps.nontrivial, "=="),
        AuditCheck("f3-mass", "f3 total equals C(|A|,2)(|A|-2)", stats.total, f3_mass(size), "=="),
        AuditCheck("pair-link", "center split sum equals twice the same-sum link count",
                   sum(g1.counts.values()), 2 * link, "=="),
        AuditCheck("f3-collision-estimate",
                   "sum f(f-1) within |A|(2*center-sum + links) + 72|A|^2",
                   stats.sum_f_times_fminus1,
                   size * (2 * center_sum + link) + 72 * size * size),
    ]
    if cyclic:
        checks.append(AuditCheck("ap-total", "all progressions at most 3|A|", aps.total, 3 * size))
        checks.append(AuditCheck("center-sum-cyclic", "center sum at most |A|^2 + 7|A|",
                                 center_sum, size * size + 7 * size))
    if sharp:
        checks.append(AuditCheck("center-sum-sharp", "doubled center sum at most |A|^2 + 6|A|",
                                 2 * center_sum, size * size + 6 * size))

    entries = decomp.entries
    overlaps = [
        (ei, ej)
        for i, ei in enumerate(entries)
        for ej in entries[i + 1:]
        if set(ei.support) & set(ej.support)
    ]
    if even_cyclic:
        n = ctx.modulus
        worst = max((max(ei.multiplicity, ej.multiplicity) for ei, ej in overlaps), default=0)
        checks.append(AuditCheck("overlap-multiplicity", "overlapping buckets have multiplicity at most 3",
                                 worst, 3))
        bad_pattern = sum(
            1
            for ei, ej in overlaps
            if ei.multiplicity == 3 and ej.multiplicity == 3
            and not _halfshift_pattern_ok(ei, ej, n)
        )
        checks.append(AuditCheck("overlap-halfshift", "overlapping triple buckets form the half-shift pattern",
                                 bad_pattern, 0))
        heavy_touch = sum(
            1 for ei, ej in overlaps if max(ei.multiplicity, ej.multiplicity) >= 4
        )
        checks.append(AuditCheck("heavy-bucket-isolated", "multiplicity >= 4 buckets share no support",
                                 heavy_touch, 0))
        triple_membership = max(
            (
                sum(1 for e in entries if e.multiplicity == 3 and x in e.support)
                for x in points
            ),
            default=0,
        )
        checks.append(AuditCheck("triple-bucket-membership", "each element meets at most two triple buckets",
                                 triple_membership, 2))
    if sharp:
        bad_structure = 0
        for ei, ej in overlaps:
            lo, hi = sorted((ei.multiplicity, ej.multiplicity))
            if (lo, hi) == (2, 2):
                continue
            shared = len(set(ei.support) & set(ej.support))
            if (lo, hi) == (2, 3) and shared >= 3:
                continue
            bad_structure += 1
        checks.append(AuditCheck("overlap-structure", "overlaps are 2-2 or 2-3 with three shared elements",
                                 bad_structure, 0))
        pair_membership = max(
            (
                sum(1 for e in entries if e.multiplicity == 2 and x in e.support)
                for x in points
            ),
            default=0,
        )
        checks.append(AuditCheck("pair-bucket-membership", "doubled double-bucket membership at most |A|",
                                 2 * pair_membership, size))

    return AuditReport(point_set_document(points).strip(), "b3plus", tuple(checks))


# ---------------------------------------------------------------------------
# order-4 plus audit (intervals)
# ---------------------------------------------------------------------------

def audit_b4plus(ctx: GroupCtx, points: PointSet) -> AuditReport:
    if not isinstance(ctx, IntegerInterval):
        raise DomainError("the order-4 audit applies to interval sets")
    _require(ctx, points, 4, "plus")
    size = len(points)
    f4 = rep_profile(ctx, points, "f4")
    stats = sum_square_stats(f4)
    differences = {a - b for a in points for b in points}
    diff_weight = sum(c for key, c in f4.counts.items() if key in differences)
    checks = (
        AuditCheck("pair-sums-distinct", "all pair sums are distinct",
                   0 if verify(ctx, points, 2, "b").holds else 1, 0),
        AuditCheck("f4-max", "f4 peaks at most 2|A|", stats.max, 2 * size),
        AuditCheck("f4-collision", "sum f(f-1) within 2|A| * difference-supported mass",
                   stats.sum_f_times_fminus1, 2 * size * diff_weight),
        AuditCheck("f4-mass", "f4 total equals C(|A|,2)C(|A|-2,2)", stats.total, f4_mass(size), "=="),
    )
    return AuditReport(point_set_document(points).strip(), "b4plus", checks)


# ---------------------------------------------------------------------------
# star audits (intervals, orders 2 and 3)
# ---------------------------------------------------------------------------

def audit_bstar(ctx: GroupCtx, points: PointSet, k: int) -> AuditReport:
    if not isinstance(ctx, IntegerInterval):
        raise DomainError("the star audits apply to interval sets")
    if k not in (2, 3):
        raise DomainError(f"star audits cover orders 2 and 3, got {k}")
    _require(ctx, points, k, "star")
    size = len(points)
    if k == 2:
        delta = rep_profile(ctx, points, "delta")
        off_zero = {key: c for key, c in delta.counts.items() if key != 0}
        sigma2 = sum_square_stats(rep_profile(ctx, points, "sigma_j", 2))
        checks = (
            AuditCheck("difference-multiplicity", "nonzero differences repeat at most twice",
                       max(off_zero.values(), default=0), 2),
            AuditCheck("doubled-differences", "at most 8|A| differences repeat twice",
                       sum(1 for c in off_zero.values() if c == 2), 8 * size),
            AuditCheck("sum-energy", "ordered pair-sum energy within 2|A|^2 + 32|A|",
                       sigma2.sum_of_squares, 2 * size * size + 32 * size),
        )
        return AuditReport(point_set_document(points).strip(), "b2star", checks)

    r2 = rep_profile(ctx, points, "r2")
    stats = sum_square_stats(r2)
    doubled = {2 * a for a in points}
    centered = sum(c for key, c in r2.counts.items() if key in doubled)
    decomp = decompose_same_sum(ctx, points, "p")
    entries = decomp.entries
    worst_overlap = 0
    for i, ei in enumerate(entries):
        if ei.multiplicity < 3:
            continue
        si = set(ei.support)
        for ej in entries[i + 1:]:
            if ej.multiplicity >= 3 and si & set(ej.support):
                worst_overlap = max(worst_overlap, ei.multiplicity + ej.multiplicity)
    checks = (
        AuditCheck("pair-energy", "doubled pair-sum energy within 3|A|^2 + 4|A|",
                   2 * stats.sum_of_squares, 3 * size * size + 4 * size),
        AuditCheck("centered-weight", "squared centered pair weight within 4|A|^3",
                   centered * centered, 4 * size**3),
        AuditCheck("bucket-overlap-sum", "overlapping heavy buckets total multiplicity at most 7",
                   worst_overlap, 7),
    )
    return AuditReport(point_set_document(points).strip(), "b3star", checks)


def applicable_audits(points: PointSet) -> tuple[AuditReport, ...]:
    """Run every audit whose flavor precondition the set satisfies."""
    ctx = points.ctx
    reports = []
    if verify(ctx, points, 3, "plus").holds:
        reports.append(audit_b3plus(ctx, points))
    if isinstance(ctx, IntegerInterval):
        if verify(ctx, points, 4, "plus").holds:
            reports.append(audit_b4plus(ctx, points))
        if verify(ctx, points, 2, "star").holds:
            reports.append(audit_bstar(ctx, points, 2))
        if verify(ctx, points, 3, "star").holds:
            reports.append(audit_bstar(ctx, points, 3))
    return tuple(reports)


def random_audit_population(
    family: str, k: int, flavor: str, n: int, count: int, seed: int
) -> list[PointSet]:
    """Seeded sample of maximal sets for sweep audits (deterministic)."""
    from .search import random_maximal_set

    rng = Random(seed)
    return [random_maximal_set(family, k, flavor, n, rng) for _ in range(count)]


# ---------------------------------------------------------------------------
# head-versus-mean sharpening of the quadratic-mean inequality
# ---------------------------------------------------------------------------

def cs_bound(xs, t: int) -> float:
    """Lower bound for sum of squares from the mean and a head excess.

    With D the difference between the mean of the first t entries and the
    global mean, returns (sum x)^2/n + t*n*D^2/(n-t), which never exceeds
    the true sum of squares (asserted to 1e-9 relative slack).
    """
    values = [float(x) for x in xs]
    n = len(values)
    if not 1 <= t <= n - 1:
        raise DomainError(f"head length must be in 1..{n - 1}, got {t}")
    total = sum(values)
    head = sum(values[:t])
    delta = head / t - total / n
    bound = total * total / n + t * n * delta * delta / (n - t)
    actual = sum(x * x for x in values)
    assert bound <= actual + 1e-9 * max(1.0, abs(actual)), "sharpened mean bound exceeded the true energy"
    return bound


# ---------------------------------------------------------------------------
# the constants ledger
# ---------------------------------------------------------------------------

MAX_ORDER = 8

TABLE_DISPLAY = {
    ("plus", 3): 2.7, ("plus", 4): 4.1, ("plus", 5): 11.0,
    ("plus", 6): 13.1, ("plus", 7): 18.5, ("plus", 8): 22.7,
    ("star", 3): 5.5, ("star", 4): 6.8, ("star", 5): 11.2,
    ("star", 6): 15.8, ("star", 7): 21.6, ("star", 8): 22.7,
}


def ceil_to_tenth(x: float) -> float:
    """Round up to the nearest tenth, refusing ambiguous near-boundary input."""
    scaled = x * 10
    if abs(scaled - round(scaled)) < 1e-5:
        raise DomainError(f"{x} is within 1e-6 of a tenth boundary")
    return math.ceil(scaled) / 10


def ruzsa_coefficient(k: int) -> float:
    """The k^(2 - 1/k) comparison coefficient."""
    return k ** (2 - 1 / k)


@dataclass(frozen=True)
class ConstantsLedger:
    c_plus: dict[int, int]
    c_star: dict[int, int]
    radicands: dict[tuple[str, int], int]

    def coefficient(self, flavor: str, k: int) -> float:
        return self.radicands[(flavor, k)] ** (1 / k)

    def display(self, flavor: str, k: int) -> float:
        return ceil_to_tenth(self.coefficient(flavor, k))

    def rows(self):
        for k in range(3, MAX_ORDER + 1):
            yield k, self.display("star", k), self.display("plus", k)


def constants_table() -> ConstantsLedger:
    """Energy constants by halving recursion and the bound coefficient table.

    Seeds: order 2 takes constant 2 for both flavors, order 3 takes 18
    (plus) and 54 (star).  Even orders fold by k^k times the half-order
    constant; odd orders take the larger of k^(k+1) on the lower half and
    k^(k-1) on the upper half.  Coefficients are k-th roots of exact
    integer radicands: k^(k+1) c_(k/2) for even k, k^k max(k^2 c_l,
    c_(l+1)) for odd k, with the proved direct constants 18, 162, 272
    overriding at the small orders.
    """
    c: dict[str, dict[int, int]] = {"plus": {2: 2, 3: 18}, "star": {2: 2, 3: 54}}
    for flavor in ("plus", "star"):
        for k in range(4, MAX_ORDER + 1):
            if k % 2 == 0:
                c[flavor][k] = k**k * c[flavor][k // 2]
            else:
                low = (k - 1) // 2
                c[flavor][k] = max(k ** (k + 1) * c[flavor][low], k ** (k - 1) * c[flavor][low + 1])
    radicands: dict[tuple[str, int], int] = {}
    for flavor in ("plus", "star"):
        for k in range(4, MAX_ORDER + 1):
            if k % 2 == 0:
                radicands[(flavor, k)] = k ** (k + 1) * c[flavor][k // 2]
            else:
                low = (k - 1) // 2
                radicands[(flavor, k)] = k**k * max(k * k * c[flavor][low], c[flavor][low + 1])
    radicands[("plus", 3)] = 18
    radicands[("star", 3)] = 162
    radicands[("plus", 4)] = 272
    return ConstantsLedger(c["plus"], c["star"], radicands)


# ---------------------------------------------------------------------------
# asymptotic products
# ---------------------------------------------------------------------------

def pure_power_product(terms: int) -> float:
    """Partial product of (2^-i)^(2^-i); tends to 1/4 as terms grow."""
    if terms < 1:
        raise DomainError(f"need at least one term, got {terms}")
    exponent = 0.0
    for i in range(1, terms + 1):
        step = i * 2.0**-i
        if step == 0.0:
            break
        exponent += step
    return 2.0**-exponent


@dataclass(frozen=True)
class AsymptoticRatio:
    k: int
    ratio: float
    ceiling: float
    pure_product: float

    @property
    def within_ceiling(self) -> bool:
        return 1.0 <= self.ratio <= self.ceiling


def asymptotic_ratio(k: int) -> AsymptoticRatio:
    """Perturbed-to-pure product ratio over i = 1 .. floor(log2 k).

    ratio = prod (2^-i + 2/k)^(2^-i) / prod (2^-i)^(2^-i), reported next to
    the e^(1/k) ceiling it is compared against.
    """
    if k < 8:
        raise DomainError(f"asymptotic ratio is tracked for k >= 8, got {k}")
    levels = k.bit_length() - 1
    log_ratio = 0.0
    pure_exponent = 0.0
    for i in range(1, levels + 1):
        weight = 2.0**-i
        log_ratio += weight * math.log1p(2.0 ** (i + 1) / k)
        pure_exponent += i * weight
    return AsymptoticRatio(
        k=k,
        ratio=math.exp(log_ratio),
        ceiling=math.exp(1.0 / k),
        pure_product=2.0**-pure_exponent,
    )
