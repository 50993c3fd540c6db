"""Exact arithmetic over Z/p^k and bounded-precision p-adic values.

A ``PAdicValue`` is one of three things:

* exact zero (infinite valuation),
* a regular value ``p^v * u`` whose unit ``u`` is trusted modulo ``p^m``
  (``m`` = relative precision, ``1 <= m <= ctx.k``), or
* a flagged lower bound: the valuation is known to be ``>= bound`` but the
  unit cancelled away at the available precision.

Precision loss is explicit: a sum whose leading digits cancel is
renormalized (valuation raised, relative precision reduced), and full
cancellation produces the lower-bound form instead of a fake zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NonInvertible, PrecisionExhausted
from .primes import is_prime


def vp_int(n: int, p: int) -> int:
    """Exponent of p in a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PrimeContext:
    """A prime p >= 5 together with the relative precision k carried on units."""

    p: int
    k: int
    modulus: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.p, int) or not isinstance(self.k, int):
            raise TypeError("p and k must be integers")
        if self.p < 5 or not is_prime(self.p):
            raise ValueError(f"p must be a prime >= 5, got {self.p}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        object.__setattr__(self, "modulus", self.p**self.k)


@dataclass(frozen=True)
class Residue:
    """Canonical least nonnegative residue modulo p^k, closed under arithmetic."""

    value: int
    ctx: PrimeContext

    def __post_init__(self):
        if not 0 <= self.value < self.ctx.modulus:
            raise ValueError(f"residue {self.value} out of range for modulus {self.ctx.modulus}")

    def _other(self, other) -> int:
        if isinstance(other, Residue):
            if other.ctx != self.ctx:
                raise ValueError("mixed residue contexts")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        w = self._other(other)
        if w is NotImplemented:
            return w
        return Residue((self.value + w) % self.ctx.modulus, self.ctx)

    __radd__ = __add__

    def __sub__(self, other):
        w = self._other(other)
        if w is NotImplemented:
            return w
        return Residue((self.value - w) % self.ctx.modulus, self.ctx)

    def __mul__(self, other):
        w = self._other(other)
        if w is NotImplemented:
            return w
        return Residue(self.value * w % self.ctx.modulus, self.ctx)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value % self.ctx.modulus, self.ctx)

    def inv(self) -> "Residue":
        if self.value % self.ctx.p == 0:
            raise NonInvertible(self.value, self.ctx.modulus)
        return Residue(pow(self.value, -1, self.ctx.modulus), self.ctx)

    def __int__(self) -> int:
        return self.value


def inv_mod(a: int, ctx: PrimeContext) -> Residue:
    """Inverse of a modulo p^k; NonInvertible when p | a."""
    if a % ctx.p == 0:
        raise NonInvertible(a, ctx.modulus)
    return Residue(pow(a, -1, ctx.modulus), ctx)


def batch_inv_raw(values: list[int], modulus: int, p: int) -> list[int]:
    """Invert many residues with one modular inversion via prefix products.

    Cost profile: one pow(-1) plus 3(n-1) multiplications. Raises
    NonInvertible naming the first offending index.
    """
    for i, a in enumerate(values):
        if a % p == 0:
            raise NonInvertible(a, modulus, index=i)
    n = len(values)
    if n == 0:
        return []
    prefix = [0] * n
    acc = 1
    for i, a in enumerate(values):
        acc = acc * a % modulus
        prefix[i] = acc
    inv_acc = pow(acc, -1, modulus)
    out = [0] * n
    for i in range(n - 1, 0, -1):
        out[i] = inv_acc * prefix[i - 1] % modulus
        inv_acc = inv_acc * values[i] % modulus
    out[0] = inv_acc
    return out


def batch_inv(values: list[int], ctx: PrimeContext) -> list[Residue]:
    """Elementwise inv_mod with a single-inversion cost profile."""
    raw = batch_inv_raw([v % ctx.modulus for v in values], ctx.modulus, ctx.p)
    return [Residue(r, ctx) for r in raw]


@dataclass(frozen=True)
class Valuation:
    """Result of a valuation query: exact, a lower bound, or infinite."""

    value: int | None  # None means infinite (exact zero)
    exact: bool

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def at_least(self, t: int) -> bool:
        """True when the valuation is provably >= t at this precision."""
        return self.value is None or self.value >= t

    def is_exactly(self, t: int) -> bool:
        return self.exact and self.value == t

    def less_than(self, t: int) -> bool:
        """True when the valuation is provably < t."""
        return self.exact and self.value is not None and self.value < t

    def __str__(self) -> str:
        if self.value is None:
            return "inf"
        return str(self.value) if self.exact else f">={self.value}"


INFINITE = Valuation(None, True)


@dataclass(frozen=True)
class PAdicValue:
    """p^v * u with u trusted mod p^m, exact zero, or a flagged lower bound."""

    ctx: PrimeContext
    valuation: int | None  # None iff exact zero
    unit: int | None  # canonical residue mod p^rel_precision; None otherwise
    rel_precision: int  # 0 for the zero and lower-bound forms
    is_lower_bound: bool = False

    def __post_init__(self):
        if self.valuation is None:  # exact zero
            if self.unit is not None or self.rel_precision != 0 or self.is_lower_bound:
                raise ValueError("malformed exact zero")
        elif self.is_lower_bound:
            if self.unit is not None or self.rel_precision != 0:
                raise ValueError("lower-bound form carries no unit")
        else:
            m = self.rel_precision
            if not 1 <= m <= self.ctx.k:
                raise ValueError(f"rel_precision {m} outside [1, {self.ctx.k}]")
            if self.unit is None or not 0 < self.unit < self.ctx.p**m:
                raise ValueError("unit out of range")
            if self.unit % self.ctx.p == 0:
                raise ValueError("unit divisible by p")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ctx: PrimeContext) -> "PAdicValue":
        return cls(ctx, None, None, 0)

    @classmethod
    def from_unit(cls, ctx: PrimeContext, valuation: int, unit: int, rel_precision: int) -> "PAdicValue":
        m = min(rel_precision, ctx.k)
        return cls(ctx, valuation, unit % ctx.p**m, m)

    @classmethod
    def bounded_below(cls, ctx: PrimeContext, bound: int) -> "PAdicValue":
        return cls(ctx, bound, None, 0, is_lower_bound=True)

    @classmethod
    def from_int(cls, x: int, ctx: PrimeContext) -> "PAdicValue":
        return padic_from_ratio(x, 1, ctx)

    # -- inspection --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.valuation is None

    @property
    def is_regular(self) -> bool:
        return self.valuation is not None and not self.is_lower_bound

    @property
    def abs_precision(self) -> int | None:
        """Trusted magnitude exponent v+m; the bound itself for a lower-bound
        form; None (unlimited) for exact zero."""
        if self.valuation is None:
            return None
        if self.is_lower_bound:
            return self.valuation
        return self.valuation + self.rel_precision

    def residue_mod(self, e: int) -> int | None:
        """This value modulo p^e, or None when not determined to that depth."""
        a = self.abs_precision
        if a is not None and a < e:
            return None
        if self.valuation is None or self.is_lower_bound or self.valuation >= e:
            return 0
        if self.valuation < 0:
            return None
        p = self.ctx.p
        return self.unit % p ** (e - self.valuation) * p**self.valuation

    def agrees(self, other: "PAdicValue") -> bool:
        """Consistency at the shared absolute precision (not strict equality)."""
        if self.ctx.p != other.ctx.p:
            raise ValueError("mixed primes")
        a, b = self.abs_precision, other.abs_precision
        shared = min(x for x in (a, b) if x is not None) if (a is not None or b is not None) else None
        if shared is None:  # both exact zero
            return True
        return _shifted_residue(self, shared) == _shifted_residue(other, shared)

    def __str__(self) -> str:
        if self.is_zero:
            return "0 (exact)"
        if self.is_lower_bound:
            return f"valuation >= {self.valuation}"
        return f"p^{self.valuation} * ({self.unit} mod {self.ctx.p}^{self.rel_precision})"

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        """Schema: {"v": int | "inf", "unit": decimal-string, "prec": int};
        the unit key is absent for exact zero and for lower-bound forms
        (which add "lower_bound": true)."""
        if self.is_zero:
            return {"v": "inf", "prec": 0}
        if self.is_lower_bound:
            return {"v": self.valuation, "prec": 0, "lower_bound": True}
        return {"v": self.valuation, "unit": str(self.unit), "prec": self.rel_precision}

    @classmethod
    def from_json(cls, doc: dict, ctx: PrimeContext) -> "PAdicValue":
        v = doc["v"]
        if v == "inf":
            return cls.zero(ctx)
        if doc.get("lower_bound"):
            return cls.bounded_below(ctx, int(v))
        return cls(ctx, int(v), int(doc["unit"]), int(doc["prec"]))

    # -- operator sugar ----------------------------------------------------

    def __add__(self, other):
        return padic_add(self, other)

    def __sub__(self, other):
        return padic_sub(self, other)

    def __mul__(self, other):
        return padic_mul(self, other)

    def __neg__(self):
        return padic_neg(self)


def _shifted_residue(x: PAdicValue, e: int):
    """x modulo p^e, expressed as (num shifted by p^-s) for negative valuations.

    Returns a pair (s, r) with s >= 0 such that p^s * x === r mod p^(e+s);
    canonical across representations that agree p-adically.
    """
    if x.valuation is None:
        return (0, 0)
    s = max(0, -x.valuation)
    if x.is_lower_bound or x.valuation >= e:
        return (s, 0)
    p = x.ctx.p
    depth = e + s - (x.valuation + s)  # digits of unit that matter
    r = x.unit % p**depth * p ** (x.valuation + s)
    return (s, r)


def padic_from_ratio(num: int, den: int, ctx: PrimeContext) -> PAdicValue:
    """Exact rational num/den as a p-adic value at full relative precision."""
    if den == 0:
        raise ZeroDivisionError("denominator is zero")
    if num == 0:
        return PAdicValue.zero(ctx)
    p = ctx.p
    vn = vp_int(num, p)
    vd = vp_int(den, p)
    nu = num // p**vn
    du = den // p**vd
    unit = nu * pow(du, -1, ctx.modulus) % ctx.modulus
    return PAdicValue.from_unit(ctx, vn - vd, unit, ctx.k)


def _require_same_ctx(x: PAdicValue, y: PAdicValue) -> PrimeContext:
    if x.ctx != y.ctx:
        raise ValueError("operands from different contexts")
    return x.ctx


def padic_add(x: PAdicValue, y: PAdicValue) -> PAdicValue:
    """Sum truncated to the minimum absolute precision of the operands.

    Leading-digit cancellation renormalizes; full cancellation yields the
    flagged lower-bound form.
    """
    ctx = _require_same_ctx(x, y)
    if x.is_zero:
        return y
    if y.is_zero:
        return x
    p = ctx.p
    if x.is_lower_bound or y.is_lower_bound:
        if x.is_lower_bound and y.is_lower_bound:
            return PAdicValue.bounded_below(ctx, min(x.valuation, y.valuation))
        bnd, reg = (x, y) if x.is_lower_bound else (y, x)
        if reg.valuation >= bnd.valuation:
            return PAdicValue.bounded_below(ctx, bnd.valuation)
        a = min(bnd.valuation, reg.abs_precision)
        m = a - reg.valuation  # >= 1 since reg.valuation < bound
        return PAdicValue.from_unit(ctx, reg.valuation, reg.unit, m)
    # two regular values
    a = min(x.abs_precision, y.abs_precision)
    w = min(x.valuation, y.valuation)
    span = a - w  # > 0 always: each valuation sits below both precisions
    if span < 1:
        raise PrecisionExhausted("no trusted digits remain after alignment")
    mod_span = p**span
    s = (x.unit * p ** (x.valuation - w) + y.unit * p ** (y.valuation - w)) % mod_span
    if s == 0:
        return PAdicValue.bounded_below(ctx, a)
    t = vp_int(s, p)
    return PAdicValue.from_unit(ctx, w + t, s // p**t, span - t)


def padic_neg(x: PAdicValue) -> PAdicValue:
    if not x.is_regular:
        return x
    return PAdicValue.from_unit(x.ctx, x.valuation, -x.unit % x.ctx.p**x.rel_precision, x.rel_precision)


def padic_sub(x: PAdicValue, y: PAdicValue) -> PAdicValue:
    return padic_add(x, padic_neg(y))


def padic_mul(x: PAdicValue, y: PAdicValue) -> PAdicValue:
    """Product: valuations add, units multiply at the lesser relative precision."""
    ctx = _require_same_ctx(x, y)
    if x.is_zero or y.is_zero:
        return PAdicValue.zero(ctx)
    if x.is_lower_bound or y.is_lower_bound:
        return PAdicValue.bounded_below(ctx, x.valuation + y.valuation)
    m = min(x.rel_precision, y.rel_precision)
    unit = x.unit * y.unit % ctx.p**m
    return PAdicValue.from_unit(ctx, x.valuation + y.valuation, unit, m)


def valuation_of(x: PAdicValue) -> Valuation:
    """Exact valuation when determined, a lower bound otherwise."""
    if x.is_zero:
        return INFINITE
    if x.is_lower_bound:
        return Valuation(x.valuation, False)
    return Valuation(x.valuation, True)


def residue_to_padic(r: Residue) -> PAdicValue:
    """Interpret an integer known mod p^k as a p-adic value (abs precision k)."""
    ctx = r.ctx
    if r.value == 0:
        return PAdicValue.bounded_below(ctx, ctx.k)
    v = vp_int(r.value, ctx.p)
    return PAdicValue.from_unit(ctx, v, r.value // ctx.p**v, ctx.k - v)
