from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from harmonica import (
    CapExceeded,
    PrimeContext,
    coprime_range_sum,
    coprime_tail_sum,
    digits_base,
    fraction_valuation,
    harmonic2_prefix,
    harmonic_exact,
    harmonic_fractions,
    harmonic_padic,
    harmonic_valuation,
    padic_add,
    padic_from_ratio,
    padic_mul,
    recommended_precision,
    sum_fractions,
)
from harmonica.padic import PAdicValue, residue_to_padic


def test_harmonic_exact_small():
    assert (harmonic_exact(0).num, harmonic_exact(0).den) == (0, 1)
    assert harmonic_exact(1).fraction == 1
    assert harmonic_exact(4).fraction == Fraction(25, 12)
    assert harmonic_exact(10).fraction == Fraction(7381, 2520)
    assert str(harmonic_exact(4)) == "H_4 = 25/12"
    with pytest.raises(ValueError):
        harmonic_exact(-1)


def test_harmonic_exact_cap():
    assert harmonic_exact(100, cap=100).n == 100
    with pytest.raises(CapExceeded):
        harmonic_exact(101, cap=100)


def test_harmonic_fractions_matches_batch():
    seen = dict(harmonic_fractions(50))
    for n in (1, 7, 23, 50):
        assert seen[n] == harmonic_exact(n).fraction


def test_sum_fractions():
    terms = [Fraction(1, i) for i in range(1, 30)]
    assert sum_fractions(terms) == harmonic_exact(29).fraction
    assert sum_fractions([]) == 0


def test_fraction_valuation():
    assert fraction_valuation(Fraction(25, 12), 5).is_exactly(2)
    assert fraction_valuation(Fraction(3, 50), 5).is_exactly(-2)
    assert fraction_valuation(Fraction(0), 5).is_infinite


def test_digits_base_and_precision_hint():
    assert digits_base(0, 5) == 0
    assert digits_base(4, 5) == 1
    assert digits_base(5, 5) == 2
    assert digits_base(124, 5) == 3
    assert digits_base(125, 5) == 4
    assert recommended_precision(5, 4) == 8
    assert recommended_precision(5, 10**6) == 2 * 9 + 6


def test_coprime_tail_sum_against_oracle():
    for p in (5, 7):
        ctx = PrimeContext(p, 3)
        for n in (0, 1, p - 1, p, 2 * p + 3, 40):
            want = sum_fractions([Fraction(1, i) for i in range(1, n + 1) if i % p])
            got = coprime_tail_sum(n, ctx)
            assert got.value == want.numerator * pow(want.denominator, -1, ctx.modulus) % ctx.modulus


def test_coprime_range_sum_splits():
    ctx = PrimeContext(7, 2)
    whole = coprime_range_sum(1, 100, ctx)
    split = coprime_range_sum(1, 60, ctx) + coprime_range_sum(61, 100, ctx)
    assert whole.value == split.value
    assert coprime_range_sum(10, 5, ctx).value == 0  # empty range


def test_coprime_tail_wolstenholme_case():
    # T(p-1) = H_{p-1}, divisible by p^2 for p >= 5
    for p in (5, 7, 11, 13):
        assert coprime_tail_sum(p - 1, PrimeContext(p, 2)).value == 0


def test_harmonic2_prefix():
    assert harmonic2_prefix(0, 5).value == 0
    assert harmonic2_prefix(3, 7).value == 0
    assert harmonic2_prefix(2, 5).value == (1 + pow(2, -2, 5)) % 5
    for p in (5, 7, 11, 13, 29):
        assert harmonic2_prefix((p - 1) // 2, p).value == 0
    with pytest.raises(ValueError):
        harmonic2_prefix(5, 5)
    with pytest.raises(ValueError):
        harmonic2_prefix(-1, 5)


def test_harmonic_padic_fixed_points():
    r = harmonic_padic(4, PrimeContext(5, 3))
    assert (r.value.valuation, r.value.unit) == (2, 73)
    assert r.method == "direct-sum"
    assert r.precision_audit >= 5
    r20 = harmonic_padic(20, PrimeContext(5, 3))
    assert (r20.value.valuation, r20.value.unit) == (1, 38)
    assert r20.method == "recursion"
    z = harmonic_padic(0, PrimeContext(5, 3))
    assert z.value.is_zero and z.precision_audit is None
    with pytest.raises(ValueError):
        harmonic_padic(-3, PrimeContext(5, 3))


def test_harmonic_padic_negative_valuation():
    # H_40 has a lone 1/25 term: valuation is exactly -2 and the
    # numerator of H_40 is coprime to 5
    r = harmonic_padic(40, PrimeContext(5, 3))
    assert r.valuation.is_exactly(-2)
    oracle = harmonic_exact(40)
    assert oracle.valuation(5).is_exactly(-2)
    assert r.value.agrees(padic_from_ratio(oracle.num, oracle.den, PrimeContext(5, 3)))


def test_harmonic_valuation_shortcut():
    assert harmonic_valuation(4, 5).is_exactly(2)
    assert harmonic_valuation(20, 5).is_exactly(1)
    assert harmonic_valuation(5, 5).is_exactly(-1)
    assert harmonic_valuation(0, 5).is_infinite


def test_padic_matches_oracle_sweep():
    # every n up to 2000 at four primes; incremental oracle on one pass
    for p in (5, 7, 11, 13):
        ctx = PrimeContext(p, 2)
        floor = -(digits_base(2000, p))
        for n, h in harmonic_fractions(2000):
            got = harmonic_padic(n, ctx)
            want = fraction_valuation(h, p)
            assert got.valuation == want, f"p={p} n={n}"
            assert got.valuation.value >= floor
            assert got.precision_audit >= ctx.k + got.value.valuation


@settings(deadline=None, max_examples=60)
@given(st.integers(min_value=1, max_value=3000), st.sampled_from([5, 7, 11, 13]))
def test_recursion_identity(n, p):
    # H_n = (1/p) H_{n//p} + sum of 1/i over i <= n coprime to p
    ctx = PrimeContext(p, 4)
    work = PrimeContext(p, recommended_precision(p, n))
    lhs = harmonic_padic(n, ctx).value
    hq = harmonic_padic(n // p, work).value
    inv_p = PAdicValue.from_unit(work, -1, 1, work.k)
    rhs = padic_add(padic_mul(hq, inv_p), residue_to_padic(coprime_tail_sum(n, work)))
    assert lhs.agrees(PAdicValue.from_unit(ctx, rhs.valuation, rhs.unit, min(rhs.rel_precision, ctx.k)))


@settings(deadline=None, max_examples=40)
@given(st.integers(min_value=1, max_value=1500))
def test_valuation_floor(n):
    # v_p(H_n) >= -floor(log_p n): the lone smallest power of p dominates
    for p in (5, 11):
        v = harmonic_valuation(n, p)
        assert v.value >= -(digits_base(n, p) - 1)
