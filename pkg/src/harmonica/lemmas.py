"""Structured checks for the classical divisibility statements about H_n.

Each check recomputes its witnesses from scratch and returns a LemmaReport;
nothing is shared between checks, so every report is independently
reproducible. Exact-rational identity checks are bounded by oracle_cap;
everything else runs in modular arithmetic.

A note on the two "large index" statements: v_p(H_{p^2-p}) = 1 in the cases
computed here, while v_p(H_{2p^2-2p}) = -2 for every p >= 5 (the single
term 1/p^2 dominates all others), so p divides the first numerator and not
the second. Divisibility of the numerator is valuation >= 1; the checks
test exactly that and report the exact valuations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import IncompleteMembers
from .harmonic import (
    DEFAULT_ORACLE_CAP,
    coprime_range_sum,
    harmonic2_prefix,
    harmonic_exact,
    harmonic_valuation,
    sum_fractions,
)
from .mpsearch import MpSet
from .padic import PrimeContext
from .primes import is_prime

CLAIM_IDS = (
    "wilson",
    "qr_sum",
    "wolstenholme",
    "levine",
    "block",
    "antilemma",
    "translation",
    "multiples",
    "census",
)


@dataclass(frozen=True)
class LemmaReport:
    """Outcome of one claim check for one prime, with re-derivable witnesses."""

    claim: str
    p: int
    passed: bool
    witnesses: tuple[tuple[str, str], ...]
    notes: str = ""

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "p": self.p,
            "passed": self.passed,
            "witnesses": [[label, value] for label, value in self.witnesses],
            "notes": self.notes,
        }


@dataclass(frozen=True)
class ResidueCensus:
    """Members of M_p partitioned by residue mod p^2-p, with per-class minima."""

    p: int
    modulus: int
    classes: dict[int, tuple[int, ...]]
    min_per_class: dict[int, int]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "modulus": self.modulus,
            "classes": {str(r): list(ms) for r, ms in sorted(self.classes.items())},
            "min_per_class": {str(r): m for r, m in sorted(self.min_per_class.items())},
        }


def _require_prime(p: int) -> None:
    if p < 5 or not is_prime(p):
        raise ValueError(f"p must be a prime >= 5, got {p}")


def check_wilson(p: int) -> LemmaReport:
    """(p-1)! === -1 mod p, by incremental product."""
    _require_prime(p)
    f = 1
    for i in range(2, p):
        f = f * i % p
    passed = f == p - 1
    witnesses = ((f"({p}-1)! mod {p}", str(f)), (f"-1 mod {p}", str(p - 1)))
    return LemmaReport("wilson", p, passed, witnesses)


def check_qr_sum(p: int) -> LemmaReport:
    """Sum of i^-2 === sum of i^2 === p(p^2-1)/24 === 0 mod p, i <= (p-1)/2."""
    _require_prime(p)
    r = (p - 1) // 2
    inv_sq = harmonic2_prefix(r, p).value
    sq = r * (r + 1) * (2 * r + 1) // 6
    closed = p * (p * p - 1) // 24
    passed = inv_sq == 0 and sq % p == 0 and closed % p == 0 and sq == closed
    witnesses = (
        ("sum i^-2 mod p", str(inv_sq)),
        ("sum i^2", str(sq)),
        ("p(p^2-1)/24", str(closed)),
        ("sum i^2 mod p", str(sq % p)),
    )
    return LemmaReport("qr_sum", p, passed, witnesses)


def check_wolstenholme(p: int, oracle_cap: int = DEFAULT_ORACLE_CAP) -> LemmaReport:
    """v_p(H_{p-1}) >= 2, and the pairing identity H_{p-1} = p * sum 1/(i(p-i))
    as exact rationals when p-1 is within the oracle cap."""
    _require_prime(p)
    v = harmonic_valuation(p - 1, p, k=2)
    passed = v.at_least(2) and v.exact
    witnesses = [(f"v_{p}(H_{p - 1})", str(v))]
    notes = ""
    if p - 1 <= oracle_cap:
        lhs = harmonic_exact(p - 1, cap=oracle_cap).fraction
        rhs = p * sum_fractions([Fraction(1, i * (p - i)) for i in range(1, (p - 1) // 2 + 1)])
        identity = lhs == rhs
        passed = passed and identity
        witnesses.append(("pairing identity", "exact match" if identity else f"{lhs} != {rhs}"))
    else:
        notes = f"pairing identity skipped: p-1 > oracle cap {oracle_cap}"
    return LemmaReport("wolstenholme", p, passed, tuple(witnesses), notes)


def _block_residues(p: int, j_max: int) -> list[int]:
    """Residue mod p of each inner block sum 1/((j-1)p+1) + ... + 1/(jp-1)."""
    ctx = PrimeContext(p, 1)
    return [coprime_range_sum((j - 1) * p + 1, j * p - 1, ctx).value for j in range(1, j_max + 1)]


def check_levine(p: int) -> LemmaReport:
    """v_p(H_{p^2-p}) >= 1, with the block decomposition's two ingredients:
    every inner block sum is 0 mod p, and v_p(sum 1/(jp)) >= 1."""
    _require_prime(p)
    v = harmonic_valuation(p * p - p, p, k=2)
    blocks = _block_residues(p, p - 1)
    # sum over j of 1/(jp) is H_{p-1}/p, so its valuation drops by exactly 1
    v_jp = harmonic_valuation(p - 1, p, k=2)
    v_jp_shifted = None if v_jp.value is None else v_jp.value - 1
    passed = v.at_least(1) and all(b == 0 for b in blocks) and (v_jp_shifted is None or v_jp_shifted >= 1)
    witnesses = [(f"v_{p}(H_{p * p - p})", str(v)), (f"v_{p}(sum 1/(jp))", str(v_jp_shifted))]
    witnesses += [(f"block j={j} mod {p}", str(b)) for j, b in enumerate(blocks, start=1)]
    return LemmaReport("levine", p, passed, tuple(witnesses))


def check_block(p: int, oracle_cap: int = DEFAULT_ORACLE_CAP) -> LemmaReport:
    """The decomposition H_{p^2-p} = sum_j (1/(jp) + inner block j): exact as
    rationals within the oracle cap, and every inner block === 0 mod p."""
    _require_prime(p)
    n = p * p - p
    blocks = _block_residues(p, p - 1)
    zero_blocks = all(b == 0 for b in blocks)
    passed = zero_blocks
    witnesses = [("blocks === 0 mod p", f"{sum(1 for b in blocks if b == 0)} of {p - 1}")]
    notes = ""
    if n <= oracle_cap:
        lhs = harmonic_exact(n, cap=oracle_cap).fraction
        terms = []
        for j in range(1, p):
            terms.append(Fraction(1, j * p))
            terms.extend(Fraction(1, i) for i in range((j - 1) * p + 1, j * p))
        identity = lhs == sum_fractions(terms)
        passed = passed and identity
        witnesses.append(("decomposition identity", "exact match" if identity else "MISMATCH"))
    else:
        notes = f"decomposition identity skipped: p^2-p > oracle cap {oracle_cap}"
    return LemmaReport("block", p, passed, tuple(witnesses), notes)


def check_antilemma(p: int, oracle_cap: int = DEFAULT_ORACLE_CAP) -> LemmaReport:
    """p does not divide the numerator of H_{2p^2-2p} (valuation < 1; the
    exact valuation is -2, forced by the term 1/p^2). Witnesses follow the
    proof: v_p(H_{2p-2}) < 1 (exactly -1, from the term 1/p), the H_{2p-2}
    reindexing identity as exact rationals, and the 2p-2 block sums === 0
    mod p."""
    _require_prime(p)
    n = 2 * p * p - 2 * p
    v = harmonic_valuation(n, p, k=2)
    not_member = v.less_than(1)
    v_half = harmonic_valuation(2 * p - 2, p, k=2)
    blocks = _block_residues(p, 2 * p - 2)
    zero_blocks = all(b == 0 for b in blocks)
    witnesses = [
        (f"v_{p}(H_{n})", str(v)),
        (f"p divides numerator of H_{n}", "no" if not_member else "yes"),
        (f"v_{p}(H_{2 * p - 2})", str(v_half)),
        ("blocks === 0 mod p", f"{sum(1 for b in blocks if b == 0)} of {2 * p - 2}"),
    ]
    passed = not_member and v_half.less_than(1) and zero_blocks
    notes = "membership needs valuation >= 1; the 1/p^2 term pins v to -2"
    if 2 * p - 1 <= oracle_cap:
        lhs = harmonic_exact(2 * p - 2, cap=oracle_cap).fraction
        rhs = (
            harmonic_exact(p - 1, cap=oracle_cap).fraction
            + Fraction(1, p)
            + sum_fractions([Fraction(1, i) for i in range(p + 1, 2 * p)])
            - Fraction(1, 2 * p - 1)
        )
        identity = lhs == rhs
        passed = passed and identity
        witnesses.append(("reindexing identity", "exact match" if identity else "MISMATCH"))
    return LemmaReport("antilemma", p, passed, tuple(witnesses), notes)


def check_translation(p: int, members: MpSet, domain_cap: int) -> LemmaReport:
    """For distinct members a, b, c with a < b and c === b mod p, the index
    t = c-b+a must again have v_p(H_t) >= 1. Every such triple with t in
    [0, domain_cap] gets a verdict; t outside that window is listed as
    out-of-domain, never judged. H_0 = 0 counts as divisible."""
    _require_prime(p)
    if members.p != p:
        raise ValueError(f"member set is for p={members.p}, not p={p}")
    if not members.covers(domain_cap):
        raise IncompleteMembers(
            f"members for p={p} certified only up to {members.limit}, need {domain_cap}"
        )
    pool = [m for m in members.members if m <= domain_cap]
    witnesses = []
    counterexamples = 0
    in_domain = 0
    for b in pool:
        for a in pool:
            if a >= b:
                continue
            for c in pool:
                if c == a or c == b or (c - b) % p:
                    continue
                t = c - b + a
                label = f"(a={a}, b={b}, c={c})"
                if t < 0 or t > domain_cap:
                    witnesses.append((label, f"t={t}: out-of-domain"))
                    continue
                in_domain += 1
                v = harmonic_valuation(t, p, k=2) if t else None
                holds = v is None or v.at_least(1)
                if not holds:
                    counterexamples += 1
                vtext = "inf" if v is None else str(v)
                witnesses.append((label, f"t={t}: v={vtext} {'holds' if holds else 'COUNTEREXAMPLE'}"))
    passed = counterexamples == 0
    notes = f"{in_domain} in-domain triple(s), {len(witnesses) - in_domain} out-of-domain"
    return LemmaReport("translation", p, passed, tuple(witnesses), notes)


def multiples_scan(p: int, k_max: int) -> LemmaReport:
    """Which k <= k_max put k(p^2-p) in M_p. Witnesses list exactly those k.
    passed means the set is not all of 1..k_max, the shape the contradiction
    argument needs (k=1 in by one lemma, k=2 out by the other)."""
    _require_prime(p)
    if k_max < 2:
        raise ValueError(f"k_max must be >= 2, got {k_max}")
    base = p * p - p
    member_ks = []
    misses = []
    for k in range(1, k_max + 1):
        v = harmonic_valuation(k * base, p, k=2)
        if v.at_least(1):
            member_ks.append((k, v))
        else:
            misses.append(f"k={k}: v={v}")
    witnesses = tuple((f"k={k}", f"v_{p}(H_{k * base})={v}") for k, v in member_ks)
    passed = len(member_ks) < k_max
    return LemmaReport("multiples", p, passed, witnesses, "; ".join(misses))


def multiples_members(report: LemmaReport) -> set[int]:
    """The k-set a multiples report witnessed."""
    return {int(label.split("=", 1)[1]) for label, _ in report.witnesses}


def residue_census(p: int, members: MpSet) -> ResidueCensus:
    """Partition members by residue mod p^2-p; purely descriptive."""
    _require_prime(p)
    if members.p != p:
        raise ValueError(f"member set is for p={members.p}, not p={p}")
    if not members.members:
        raise ValueError("member set is empty")
    modulus = p * p - p
    classes: dict[int, list[int]] = {}
    for m in members.members:
        classes.setdefault(m % modulus, []).append(m)
    frozen = {r: tuple(sorted(ms)) for r, ms in classes.items()}
    return ResidueCensus(p, modulus, frozen, {r: ms[0] for r, ms in frozen.items()})
