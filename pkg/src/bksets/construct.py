"""Explicit constructions of Bk, Bk+, and non-abelian Bk+ sets.

* ``bose_chowla``: the classical Bk-set {dlog(g + a) : a in F_q} inside
  Z_{q^k-1}, of size q, for any prime power q.
* ``plus_doubling``: turn a Bk-set in Z_n into a Bk+ set of twice the size
  in Z_{2n}; works exactly for odd k (a parity argument pins a shared
  position), so even k is rejected.
* ``build_h_group``: the 12-element group of upper-triangular 2x2 matrices
  over GF(4) with determinant 1, together with the pair {alpha, beta} that
  is B4+ but not B4.
* ``product_construction``: a non-abelian Bk set times a non-abelian Bk+
  set is a non-abelian Bk+ set in the direct product.
* ``refine_to_half``: delete one violating solution from a B(2l)+ set to
  reach a Bl+ subset (analogously for the star flavor and odd orders).
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import FieldCtx, DlogTable, find_primitive, is_prime, subfield_elements
from .groups import (
    CyclicZ,
    DomainError,
    PointSet,
    PreconditionError,
    ResourceCapError,
    TableGroup,
)
from .verify import Verdict, verify, verify_word

DEFAULT_MODULUS_CAP = 1_000_000


def bose_chowla(p: int, e: int, k: int, cap: int = DEFAULT_MODULUS_CAP) -> PointSet:
    """Bk-set of size q = p^e in Z_{q^k - 1}.

    Uses the minimal irreducible polynomial for GF(p^(e*k)) and its minimal
    primitive element g, then takes discrete logs of g + a over the order-q
    subfield, so the output is reproducible bit for bit.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if e < 1:
        raise DomainError(f"prime-power exponent must be >= 1, got {e}")
    if k < 2:
        raise DomainError(f"need k >= 2, got {k}")
    q = p**e
    n = q**k - 1
    if n > cap:
        raise ResourceCapError(f"modulus {n} exceeds the cap {cap}")
    field = FieldCtx.build(p, e * k)
    g = find_primitive(field)
    table = DlogTable.build(field, g)
    logs = [table.dlog(field.add(g, a)) for a in subfield_elements(field, q)]
    return PointSet.of(CyclicZ(n), logs)


def plus_doubling(points: PointSet, k: int) -> PointSet:
    """{a + b*n : a in A, b in {0,1}} in Z_{2n}, a Bk+ set for odd k.

    The input must really be a Bk-set: the conclusion is only guaranteed
    for genuine Bk inputs, so the precondition is verified here rather than
    trusted, and a failing input is reported with its witness.
    """
    ctx = points.ctx
    if not isinstance(ctx, CyclicZ):
        raise DomainError("doubling is defined on cyclic contexts")
    if k < 3 or k % 2 == 0:
        raise DomainError(f"doubling needs odd k >= 3, got {k}")
    base = verify(ctx, points, k, "b")
    if not base.holds:
        raise PreconditionError("input is not a Bk-set", witness=base.witness)
    n = ctx.modulus
    doubled = [a + b * n for a in points for b in (0, 1)]
    return PointSet.of(CyclicZ(2 * n), doubled)


# ---------------------------------------------------------------------------
# the order-12 matrix group over GF(4)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HGroupHandle:
    """The order-12 group with its distinguished pair alpha, beta."""

    group: TableGroup
    alpha: int
    beta: int

    def pair(self) -> PointSet:
        return PointSet.of(self.group, (self.alpha, self.beta))


def build_h_group() -> HGroupHandle:
    """Upper-triangular matrices [[x, y], [0, x^-1]] over GF(4).

    Elements are indexed by (x, y) with x in GF(4)*, y in GF(4), ordered by
    encoding; multiplication follows matrix multiplication, which in the
    (x, y) coordinates reads (x1*x2, x1*y2 + y1/x2).  alpha has y = 1 and
    beta has y = a, both with x = a (a primitive cube root of unity).
    """
    f4 = FieldCtx.build(2, 2)
    units = [x for x in f4.element_range() if x != 0]
    members = [(x, y) for x in units for y in f4.element_range()]
    index = {m: i for i, m in enumerate(members)}

    def mul(m1, m2):
        (x1, y1), (x2, y2) = m1, m2
        return (f4.mul(x1, x2), f4.add(f4.mul(x1, y2), f4.mul(y1, f4.inv(x2))))

    table = tuple(
        tuple(index[mul(m1, m2)] for m2 in members) for m1 in members
    )
    group = TableGroup(table, index[(1, 0)])
    a = f4.encode((0, 1))
    return HGroupHandle(group, alpha=index[(a, 1)], beta=index[(a, a)])


def direct_product(g: TableGroup, h: TableGroup) -> TableGroup:
    """Direct product with elements packed as i*|H| + j."""
    nh = h.order
    table = tuple(
        tuple(g.table[a][c] * nh + h.table[b][d] for c in g.elements() for d in h.elements())
        for a in g.elements()
        for b in h.elements()
    )
    return TableGroup(table, g.identity * nh + h.identity)


def product_construction(
    g: TableGroup,
    a_set: PointSet,
    h: TableGroup,
    b_set: PointSet,
    k: int,
) -> PointSet:
    """A x B inside G x H: non-abelian Bk times non-abelian Bk+ gives Bk+.

    Both preconditions are verified; a failure is reported with the witness
    pair of words.
    """
    if a_set.ctx != g or b_set.ctx != h:
        raise DomainError("point sets must live in the given groups")
    left = verify_word(g, a_set, k, "b")
    if not left.holds:
        raise PreconditionError("left factor is not a non-abelian Bk-set", witness=left.witness)
    right = verify_word(h, b_set, k, "plus")
    if not right.holds:
        raise PreconditionError("right factor is not a non-abelian Bk+ set", witness=right.witness)
    prod = direct_product(g, h)
    nh = h.order
    return PointSet.of(prod, (a * nh + b for a in a_set for b in b_set))


# ---------------------------------------------------------------------------
# halving refinement
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RefineResult:
    subset: PointSet
    k_out: int
    flavor: str
    rounds: int


def _delete_witness(points: PointSet, witness) -> PointSet:
    support = set(witness[0]) | set(witness[1])
    return PointSet.of(points.ctx, (a for a in points if a not in support))


def refine_to_half(points: PointSet, k: int, flavor: str) -> RefineResult:
    """Pass from a Bk(+/*) set to a half-order subset by one deletion.

    For k = 2l the output is a Bl subset of the same flavor missing at most
    2l elements; for k = 2l+1 it is a B(l+1) or Bl subset missing at most
    2k elements, tagged by ``k_out``.  A single deletion round must always
    suffice (two disjoint violations would concatenate into a violation of
    the original set), so the loop asserts its round counter stays <= 1 as
    a running audit of that argument.
    """
    if flavor not in ("plus", "star"):
        raise DomainError(f"refinement applies to plus/star flavors, got {flavor!r}")
    if k < 4:
        raise DomainError(f"refinement needs k >= 4, got {k}")
    ctx = points.ctx
    top = verify(ctx, points, k, flavor)
    if not top.holds:
        raise PreconditionError(f"input is not a B{k} {flavor} set", witness=top.witness)

    if k % 2 == 0:
        targets = (k // 2,)
    else:
        targets = ((k + 1) // 2, k // 2)

    current = points
    rounds = 0
    while True:
        for target in targets:
            verdict = verify(ctx, current, target, flavor)
            if verdict.holds:
                assert len(current) >= len(points) - 2 * k
                return RefineResult(current, target, flavor, rounds)
        assert rounds < 1, "one deletion round must reach the halved property"
        # delete the violating solution for the largest target
        witness = verify(ctx, current, targets[0], flavor).witness
        current = _delete_witness(current, witness)
        rounds += 1
