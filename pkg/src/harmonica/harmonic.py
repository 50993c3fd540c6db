"""Harmonic numbers H_n = 1 + 1/2 + ... + 1/n, two ways.

The exact route keeps lowest-terms rationals and is capped (bit length of
H_n grows linearly in n). The p-adic route uses the recursion

    H_n = (1/p) * H_{n // p} + coprime_tail_sum(n)

where the tail sum runs over indices coprime to p and is exact modulo p^k.
The recursion divides by p once per level, so the working precision is
padded by the base-p digit count of n and results carry an audit of the
minimum absolute precision that survived.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import CapExceeded, PrecisionExhausted
from .padic import (
    PAdicValue,
    PrimeContext,
    Residue,
    Valuation,
    batch_inv_raw,
    padic_add,
    padic_mul,
    residue_to_padic,
    valuation_of,
    vp_int,
)

DEFAULT_ORACLE_CAP = 100_000
_BATCH = 1 << 16
_MAX_GUARD = 64


@dataclass(frozen=True)
class RationalHarmonic:
    """H_n as an exact rational in lowest terms (den > 0)."""

    n: int
    num: int
    den: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def valuation(self, p: int) -> Valuation:
        return fraction_valuation(self.fraction, p)

    def __str__(self) -> str:
        return f"H_{self.n} = {self.num}/{self.den}"


@dataclass(frozen=True)
class HarmonicResult:
    """H_n as a PAdicValue plus how it was obtained and how much precision survived."""

    n: int
    value: PAdicValue
    method: str  # "direct-sum" | "recursion"
    precision_audit: int | None  # None only for the exact zero H_0

    @property
    def valuation(self) -> Valuation:
        return valuation_of(self.value)


def _sum_reciprocals(lo: int, hi: int) -> Fraction:
    # balanced split keeps intermediate numerators near their final size
    if hi - lo < 8:
        return sum(Fraction(1, i) for i in range(lo, hi + 1))
    mid = (lo + hi) // 2
    return _sum_reciprocals(lo, mid) + _sum_reciprocals(mid + 1, hi)


def sum_fractions(terms: Sequence[Fraction]) -> Fraction:
    """Balanced exact sum; pairwise splitting keeps denominators small."""
    n = len(terms)
    if n == 0:
        return Fraction(0)
    if n <= 8:
        return sum(terms, Fraction(0))
    mid = n // 2
    return sum_fractions(terms[:mid]) + sum_fractions(terms[mid:])


def harmonic_exact(n: int, cap: int = DEFAULT_ORACLE_CAP) -> RationalHarmonic:
    """Exact H_n in lowest terms; CapExceeded above the oracle bound."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n > cap:
        raise CapExceeded(f"harmonic_exact({n}) above oracle cap {cap}")
    if n == 0:
        return RationalHarmonic(0, 0, 1)
    h = _sum_reciprocals(1, n)
    return RationalHarmonic(n, h.numerator, h.denominator)


def harmonic_fractions(limit: int) -> Iterator[tuple[int, Fraction]]:
    """Yield (n, H_n) for n = 1..limit by incremental exact accumulation."""
    h = Fraction(0)
    for n in range(1, limit + 1):
        h += Fraction(1, n)
        yield n, h


def fraction_valuation(x: Fraction, p: int) -> Valuation:
    """Exact p-adic valuation of a rational."""
    if x == 0:
        return Valuation(None, True)
    return Valuation(vp_int(x.numerator, p) - vp_int(x.denominator, p), True)


def digits_base(n: int, p: int) -> int:
    """Base-p digit count of n, i.e. ceil(log_p(n+1)); 0 for n = 0."""
    d = 0
    while n:
        n //= p
        d += 1
    return d


def recommended_precision(p: int, n: int) -> int:
    """Working precision for harmonic_padic: one digit lost per recursion
    level, plus headroom so membership tests keep >= 2 trusted digits."""
    return 2 * digits_base(n, p) + 6


def coprime_range_sum(lo: int, hi: int, ctx: PrimeContext) -> Residue:
    """Sum of inv(i) mod p^k over lo <= i <= hi with p not dividing i."""
    p, modulus = ctx.p, ctx.modulus
    total = 0
    i = max(lo, 1)
    while i <= hi:
        j = min(i + _BATCH - 1, hi)
        block = [x % modulus for x in range(i, j + 1) if x % p]
        total = (total + sum(batch_inv_raw(block, modulus, p))) % modulus
        i = j + 1
    return Residue(total, ctx)


def coprime_tail_sum(n: int, ctx: PrimeContext) -> Residue:
    """Sum of inv(i) mod p^k over 1 <= i <= n with p not dividing i."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return coprime_range_sum(1, n, ctx)


def harmonic2_prefix(r: int, p: int) -> Residue:
    """Sum of inv(i)^2 mod p for i = 1..r."""
    ctx = PrimeContext(p, 1)
    if not 0 <= r < p:
        raise ValueError(f"r must satisfy 0 <= r < p, got {r}")
    if r == 0:
        return Residue(0, ctx)
    total = 0
    for inv in batch_inv_raw(list(range(1, r + 1)), p, p):
        total += inv * inv
    return Residue(total % p, ctx)


def harmonic_padic(n: int, ctx: PrimeContext) -> HarmonicResult:
    """H_n in the given context, with exact valuation and audited precision.

    Internally pads the working precision: the target relative precision is
    ctx.k, one absolute digit is lost per recursion level, and a guard
    absorbs the valuation of H_n itself. The guard doubles on cancellation
    until the result carries ctx.k trusted digits or _MAX_GUARD is hit.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n == 0:
        return HarmonicResult(0, PAdicValue.zero(ctx), "direct-sum", None)
    chain = []
    c = n
    while c:
        chain.append(c)
        c //= ctx.p
    depth = len(chain)
    method = "direct-sum" if depth == 1 else "recursion"
    guard = 3
    while guard <= _MAX_GUARD:
        work = PrimeContext(ctx.p, ctx.k + (depth - 1) + guard)
        inv_p = PAdicValue.from_unit(work, -1, 1, work.k)  # exact 1/p
        h = PAdicValue.zero(work)
        for c in reversed(chain):
            h = padic_add(padic_mul(h, inv_p), residue_to_padic(coprime_range_sum(1, c, work)))
        if h.is_regular and h.rel_precision >= ctx.k:
            value = PAdicValue.from_unit(ctx, h.valuation, h.unit, ctx.k)
            return HarmonicResult(n, value, method, h.abs_precision)
        guard *= 2
    raise PrecisionExhausted(f"H_{n} cancelled past {_MAX_GUARD} guard digits at p={ctx.p}")


def harmonic_valuation(n: int, p: int, k: int = 2) -> Valuation:
    """Exact v_p(H_n) with at least k trusted unit digits behind it."""
    return harmonic_padic(n, PrimeContext(p, k)).valuation
