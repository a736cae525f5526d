"""GF(p^m) arithmetic with explicit irreducible polynomials and dlog tables.

Field elements are integers 0 .. p^m - 1, read as base-p encodings of the
coefficient vector (constant term first).  Polynomials over GF(p) are
coefficient tuples, constant term first, with a nonzero leading entry.

Everything is deterministic: irreducible polynomials and primitive elements
are chosen minimal by encoding, so repeated builds agree bit for bit.
Discrete logs are built by one full enumeration pass, which is the simplest
thing to verify at desk scale (field orders up to about a million).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .groups import DomainError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (desk-scale inputs)."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ---------------------------------------------------------------------------
# polynomials over GF(p): coefficient tuples, constant term first
# ---------------------------------------------------------------------------

def _poly_trim(coeffs: list[int]) -> tuple[int, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _poly_mod(num: list[int], den: tuple[int, ...], p: int) -> tuple[int, ...]:
    """Remainder of num modulo den over GF(p); den must be nonzero."""
    num = [c % p for c in num]
    d = len(den) - 1
    lead_inv = pow(den[-1], p - 2, p) if den[-1] != 1 else 1
    for i in range(len(num) - 1, d - 1, -1):
        c = num[i]
        if c == 0:
            continue
        q = (c * lead_inv) % p
        for j, dc in enumerate(den):
            num[i - d + j] = (num[i - d + j] - q * dc) % p
    return _poly_trim(num[:d] if d > 0 else [])


def _poly_mulmod(a: tuple[int, ...], b: tuple[int, ...], den: tuple[int, ...], p: int) -> tuple[int, ...]:
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            prod[i + j] = (prod[i + j] + ca * cb) % p
    return _poly_mod(prod, den, p)


def _poly_powmod(a: tuple[int, ...], e: int, den: tuple[int, ...], p: int) -> tuple[int, ...]:
    result: tuple[int, ...] = (1,)
    base = _poly_mod(list(a), den, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, den, p)
        base = _poly_mulmod(base, base, den, p)
        e >>= 1
    return result


def is_irreducible(p: int, poly: tuple[int, ...]) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg < 1 or poly[-1] != 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for enc in range(p**d):
            div = _decode_poly(enc, p, d) + (1,)
            if not _poly_mod(list(poly), div, p):
                return False
    return True


def _decode_poly(enc: int, p: int, length: int) -> tuple[int, ...]:
    coeffs = []
    for _ in range(length):
        coeffs.append(enc % p)
        enc //= p
    return tuple(coeffs)


def find_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Monic irreducible of degree m over GF(p) with minimal encoding.

    The encoding reads the coefficient vector, constant term first, as a
    base-p integer; the scan is exhaustive and deterministic.  Degree 1
    returns x itself (prime fields need no extension).
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if m < 1:
        raise DomainError(f"extension degree must be >= 1, got {m}")
    if m == 1:
        return (0, 1)
    for enc in range(p**m):
        cand = _decode_poly(enc, p, m) + (1,)
        if is_irreducible(p, cand):
            return cand
    raise AssertionError("no irreducible polynomial found")  # unreachable


@dataclass(frozen=True)
class FieldCtx:
    """GF(p^m) presented as GF(p)[x] modulo an irreducible polynomial."""

    p: int
    m: int
    poly: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")
        if self.m < 1:
            raise DomainError(f"extension degree must be >= 1, got {self.m}")
        if len(self.poly) != self.m + 1 or self.poly[-1] != 1:
            raise DomainError("modulus must be monic of degree m")
        if not is_irreducible(self.p, self.poly):
            raise DomainError(f"{self.poly} is reducible over GF({self.p})")

    @classmethod
    def build(cls, p: int, m: int, poly: tuple[int, ...] | None = None) -> "FieldCtx":
        return cls(p, m, find_irreducible(p, m) if poly is None else tuple(poly))

    @property
    def order(self) -> int:
        return self.p**self.m

    # -- encoding ----------------------------------------------------------

    def coeffs(self, x: int) -> tuple[int, ...]:
        if not 0 <= x < self.order:
            raise DomainError(f"{x} is not a field element encoding")
        return _decode_poly(x, self.p, self.m)

    def encode(self, coeffs) -> int:
        out = 0
        for c in reversed(tuple(coeffs)):
            out = out * self.p + c % self.p
        if not 0 <= out < self.order:
            raise DomainError("coefficient vector has the wrong length")
        return out

    # -- arithmetic on encodings -------------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        ca, cb = self.coeffs(a), self.coeffs(b)
        return self.encode((x + y) % p for x, y in zip(ca, cb))

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return self.encode((-c) % self.p for c in self.coeffs(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        prod = _poly_mulmod(self.coeffs(a), self.coeffs(b), self.poly, self.p)
        return self.encode(prod + (0,) * (self.m - len(prod)))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = _poly_powmod(self.coeffs(a), e, self.poly, self.p)
        return self.encode(result + (0,) * (self.m - len(result)))

    def inv(self, a: int) -> int:
        if a == 0:
            raise DomainError("0 has no multiplicative inverse")
        return self.pow(a, self.order - 2)

    def element_range(self) -> range:
        return range(self.order)


def multiplicative_order(ctx: FieldCtx, x: int) -> int:
    if x == 0:
        raise DomainError("0 has no multiplicative order")
    n = ctx.order - 1
    order = n
    for q in factorize(n):
        while order % q == 0 and ctx.pow(x, order // q) == 1:
            order //= q
    return order


def find_primitive(ctx: FieldCtx) -> int:
    """Smallest element by encoding that generates the multiplicative group."""
    if ctx.order < 3:
        raise DomainError("fields of order < 3 have no primitive element")
    n = ctx.order - 1
    primes = tuple(factorize(n))
    for x in range(1, ctx.order):
        if all(ctx.pow(x, n // q) != 1 for q in primes):
            return x
    raise AssertionError("no primitive element found")  # unreachable


@dataclass(frozen=True)
class DlogTable:
    """Discrete logs base a primitive element, by one full enumeration pass."""

    ctx: FieldCtx
    generator: int
    powers: tuple[int, ...]
    logs: dict[int, int]

    @classmethod
    def build(cls, ctx: FieldCtx, generator: int) -> "DlogTable":
        n = ctx.order - 1
        powers = [1]
        acc = 1
        for _ in range(n - 1):
            acc = ctx.mul(acc, generator)
            if acc == 1:
                raise DomainError(f"{generator} is not primitive")
            powers.append(acc)
        if ctx.mul(acc, generator) != 1:
            raise DomainError(f"{generator} is not primitive")
        logs = {x: e for e, x in enumerate(powers)}
        if len(logs) != n:
            raise DomainError(f"{generator} is not primitive")
        return cls(ctx, generator, tuple(powers), logs)

    def dlog(self, y: int) -> int:
        if y == 0:
            raise DomainError("0 has no discrete logarithm")
        return self.logs[y]

    def exp(self, e: int) -> int:
        return self.powers[e % (self.ctx.order - 1)]


@lru_cache(maxsize=8)
def _cached_table(ctx: FieldCtx, generator: int) -> DlogTable:
    return DlogTable.build(ctx, generator)


def dlog(ctx: FieldCtx, generator: int, y: int) -> int:
    """The unique e in 0..p^m-2 with generator^e = y."""
    return _cached_table(ctx, generator).dlog(y)


def subfield_elements(ctx: FieldCtx, q: int) -> tuple[int, ...]:
    """Elements of the order-q subfield, i.e. the fixed points of x -> x^q."""
    n = ctx.order - 1
    if q < 2 or n % (q - 1) != 0:
        raise DomainError(f"GF({ctx.p}^{ctx.m}) has no subfield of order {q}")
    table = _cached_table(ctx, find_primitive(ctx))
    stride = n // (q - 1)
    members = [0] + [table.exp(j * stride) for j in range(q - 1)]
    if any(ctx.pow(x, q) != x for x in members):
        raise DomainError(f"order-{q} subset is not fixed by x -> x^{q}")
    return tuple(sorted(members))
