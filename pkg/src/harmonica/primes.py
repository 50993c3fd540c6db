"""Deterministic primality testing and prime-range iteration."""

from __future__ import annotations

from math import isqrt
from typing import Iterator

# Deterministic Miller-Rabin witness set, valid for all n < 3.3 * 10^24
# (covers every 64-bit integer).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality check, exact below 2^64."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n == q:
            return True
        if n % q == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_in_range(lo: int, hi: int, segment: int = 1 << 18) -> Iterator[int]:
    """Yield primes in [lo, hi] via a segmented sieve."""
    lo = max(lo, 2)
    if hi < lo:
        return
    base = _sieve(isqrt(hi))
    start = lo
    while start <= hi:
        end = min(hi, start + segment - 1)
        flags = bytearray(b"\x01") * (end - start + 1)
        for q in base:
            if q * q > end:
                break
            first = max(q * q, ((start + q - 1) // q) * q)
            if first > end:
                continue
            flags[first - start :: q] = b"\x00" * ((end - first) // q + 1)
        for i, f in enumerate(flags):
            n = start + i
            if f and n >= 2:
                yield n
        start = end + 1


def _sieve(n: int) -> list[int]:
    if n < 2:
        return []
    flags = bytearray(b"\x01") * (n + 1)
    flags[0:2] = b"\x00\x00"
    for q in range(2, isqrt(n) + 1):
        if flags[q]:
            flags[q * q :: q] = b"\x00" * ((n - q * q) // q + 1)
    return [i for i, f in enumerate(flags) if f]
