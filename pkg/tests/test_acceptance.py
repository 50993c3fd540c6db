"""Acceptance gate: one test per criterion, each with a wall-clock budget.

Every test re-derives its facts from scratch (no cached artifacts) and
registers a single PASS/FAIL line, printed in the terminal summary.
"""

import json
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import conftest

from harmonica import (
    PrimeContext,
    SearchConfig,
    batch_inv,
    check_antilemma,
    check_block,
    check_levine,
    check_qr_sum,
    check_translation,
    check_wilson,
    check_wolstenholme,
    enumerate_tree,
    harmonic_exact,
    harmonic_fractions,
    harmonic_valuation,
    inv_mod,
    multiples_members,
    multiples_scan,
    padic_add,
    padic_from_ratio,
    padic_mul,
    padic_sub,
    primes_in_range,
    reconcile,
    residue_census,
    scan_bruteforce,
)
from harmonica.cli import main


@contextmanager
def criterion(name, budget_s):
    start = time.perf_counter()
    try:
        yield
    except Exception:
        conftest.ACCEPTANCE_LINES.append(f"FAIL {name}")
        raise
    elapsed = time.perf_counter() - start
    if elapsed < budget_s:
        conftest.ACCEPTANCE_LINES.append(f"PASS {name} ({elapsed:.1f}s, budget {budget_s}s)")
    else:
        conftest.ACCEPTANCE_LINES.append(f"FAIL {name} (over budget: {elapsed:.1f}s >= {budget_s}s)")
        raise AssertionError(f"{name}: {elapsed:.1f}s exceeded {budget_s}s budget")


def test_wolstenholme_suite():
    with criterion("wolstenholme: v_p(H_{p-1}) >= 2 for all 5 <= p <= 10^4; pairing identity on 20-prime sample", 60):
        primes = list(primes_in_range(5, 10**4))
        assert len(primes) == 1227
        for p in primes:
            v = harmonic_valuation(p - 1, p, k=2)
            assert v.exact and v.at_least(2), f"p={p}: v={v}"
        sample = primes[::61][:20]  # evenly spread across the range
        assert len(sample) == 20 and sample[-1] > 9000
        for p in sample:
            r = check_wolstenholme(p)
            assert r.passed and dict(r.witnesses)["pairing identity"] == "exact match", f"p={p}"


def test_levine_and_antilemma():
    with criterion("levine v_p(H_{p^2-p}) >= 1 and 2p^2-2p non-member (v exactly -2) for p <= 300; oracle cross-check p <= 60", 120):
        for p in primes_in_range(5, 300):
            assert check_levine(p).passed, f"p={p}"
            r = check_antilemma(p)
            assert r.passed, f"p={p}"
            d = dict(r.witnesses)
            n = 2 * p * p - 2 * p
            assert d[f"v_{p}(H_{n})"] == "-2", f"p={p}"
            assert d[f"p divides numerator of H_{n}"] == "no", f"p={p}"
        for p in primes_in_range(5, 60):
            n1, n2 = p * p - p, 2 * p * p - 2 * p
            v1 = harmonic_exact(n1).valuation(p)
            assert v1.at_least(1) and v1 == harmonic_valuation(n1, p), f"p={p}"
            h2 = harmonic_exact(n2)
            v2 = h2.valuation(p)
            assert v2.is_exactly(-2) and h2.num % p != 0, f"p={p}"
            assert v2 == harmonic_valuation(n2, p), f"p={p}"


def test_proof_step_identities():
    with criterion("reindexing + block decomposition exact rationals for p <= 100; wilson + qr sum for p <= 10^4", 60):
        for p in primes_in_range(5, 100):
            ra = check_antilemma(p)
            assert dict(ra.witnesses)["reindexing identity"] == "exact match", f"p={p}"
            rb = check_block(p)
            assert rb.passed, f"p={p}"
            assert dict(rb.witnesses)["decomposition identity"] == "exact match", f"p={p}"
        for p in primes_in_range(5, 10**4):
            assert check_wilson(p).passed, f"p={p}"
            assert check_qr_sum(p).passed, f"p={p}"


def test_enumeration_ground_truth():
    with criterion("M_5 = {4, 20, 24} complete; tree == scan(10^6) == rational oracle(10^4)", 30):
        tree = enumerate_tree(5)
        assert tree.members == (4, 20, 24)
        assert tree.status == "complete" and tree.limit is None
        scan = scan_bruteforce(5, 10**6)
        assert scan.members == (4, 20, 24)
        merged = reconcile(scan, tree)
        assert merged.members == (4, 20, 24) and merged.status == "complete"
        oracle = tuple(n for n, h in harmonic_fractions(10**4) if h.numerator % 5 == 0)
        assert oracle == (4, 20, 24)


def test_dual_path_equivalence():
    with criterion("scan(p, 10^5) == tree window for p in {7, 11, 13}; parent closure on every member", 600):
        trees = {
            7: enumerate_tree(7),
            11: enumerate_tree(11, SearchConfig(direct_cap=10**6)),
            13: enumerate_tree(13),
        }
        assert trees[7].status == "complete" and trees[13].status == "complete"
        assert trees[11].covers(10**5)
        for p, tree in trees.items():
            scan = scan_bruteforce(p, 10**5)
            assert scan.members == tree.members_below(10**5), f"p={p}"
            assert reconcile(scan, tree).p == p
            members = set(tree.members)
            for n in tree.members:
                assert n // p == 0 or n // p in members, f"p={p} n={n}"


def test_structure_probes():
    with criterion("multiples k-set {1} for p in {5, 7, 11}; census p=5 {4: [4, 24], 0: [20]}; translation p=5 one triple holds", 60):
        for p in (5, 7, 11):
            assert multiples_members(multiples_scan(p, 5)) == {1}, f"p={p}"
        m5 = enumerate_tree(5)
        census = residue_census(5, m5)
        assert census.classes == {4: (4, 24), 0: (20,)}
        assert census.min_per_class == {4: 4, 0: 20}
        assert set(census.min_per_class.values()) == {4, 20}
        tr = check_translation(5, m5, domain_cap=100)
        assert tr.passed
        in_domain = [w for w in tr.witnesses if "out-of-domain" not in w[1]]
        assert len(in_domain) == 1 and in_domain[0][1].endswith("holds")


def test_property_suites(capsys):
    with criterion("p-adic ops vs rational oracle on 10^4 random rationals; batch_inv == inv_mod; byte-identical JSON across threads", 120):
        rng = random.Random(20260815)
        ctxs = {p: PrimeContext(p, 5) for p in (5, 7, 11, 13)}

        def enc(q, c):
            return padic_from_ratio(q.numerator, q.denominator, c)

        for _ in range(10**4):
            c = ctxs[rng.choice((5, 7, 11, 13))]
            a = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
            b = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
            xa, xb = enc(a, c), enc(b, c)
            assert padic_add(xa, xb).agrees(enc(a + b, c)), f"{a} + {b} at p={c.p}"
            assert padic_sub(xa, xb).agrees(enc(a - b, c)), f"{a} - {b} at p={c.p}"
            assert padic_mul(xa, xb).agrees(enc(a * b, c)), f"{a} * {b} at p={c.p}"

        ctx = PrimeContext(7, 6)
        vals = [v for v in (rng.randint(1, 10**9) for _ in range(5000)) if v % 7]
        assert [r.value for r in batch_inv(vals, ctx)] == [inv_mod(v, ctx).value for v in vals]

        argv = ["verify", "--claims", "wilson,qr,wolstenholme", "--pmin", "5", "--pmax", "60", "--format", "json"]
        assert main(argv + ["--threads", "1"]) == 0
        single = capsys.readouterr().out
        assert main(argv + ["--threads", "4"]) == 0
        pooled = capsys.readouterr().out
        assert single == pooled
        json.loads(single)  # well-formed document
