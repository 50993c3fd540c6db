from fractions import Fraction

import pytest

from harmonica import (
    CLAIM_IDS,
    IncompleteMembers,
    MpSet,
    check_antilemma,
    check_block,
    check_levine,
    check_qr_sum,
    check_translation,
    check_wilson,
    check_wolstenholme,
    harmonic_exact,
    multiples_members,
    multiples_scan,
    primes_in_range,
    residue_census,
    sum_fractions,
)

M5 = MpSet(p=5, members=(4, 20, 24), status="complete", method="tree", limit=None, precision=10)


def _witness(report, label):
    return dict(report.witnesses)[label]


def test_claim_ids_closed():
    assert len(CLAIM_IDS) == len(set(CLAIM_IDS)) == 9
    assert "wolstenholme" in CLAIM_IDS and "antilemma" in CLAIM_IDS


def test_precondition_prime_at_least_five():
    for check in (check_wilson, check_qr_sum, check_wolstenholme, check_levine, check_antilemma):
        for bad in (2, 3, 4, 9):
            with pytest.raises(ValueError):
                check(bad)


def test_wilson():
    r = check_wilson(5)
    assert r.passed and _witness(r, "(5-1)! mod 5") == "4"
    assert check_wilson(13).passed
    assert all(check_wilson(p).passed for p in primes_in_range(5, 100))


def test_qr_sum():
    r = check_qr_sum(5)
    assert r.passed
    assert _witness(r, "sum i^2") == "5"
    assert _witness(r, "p(p^2-1)/24") == "5"
    assert _witness(r, "sum i^-2 mod p") == "0"
    assert _witness(check_qr_sum(7), "sum i^2") == "14"
    assert all(check_qr_sum(p).passed for p in primes_in_range(5, 200))


def test_wolstenholme():
    r = check_wolstenholme(5)
    assert r.passed
    assert _witness(r, "v_5(H_4)") == "2"
    assert _witness(r, "pairing identity") == "exact match"
    # the identity itself, independent of the checker
    assert harmonic_exact(4).fraction == 5 * (Fraction(1, 4) + Fraction(1, 6))
    assert check_wolstenholme(7).passed  # H_6 = 49/20


def test_wolstenholme_cap_skips_identity():
    r = check_wolstenholme(11, oracle_cap=5)
    assert r.passed  # valuation still checked
    assert "skipped" in r.notes
    assert all(label != "pairing identity" for label, _ in r.witnesses)


def test_levine():
    r = check_levine(5)
    assert r.passed
    assert _witness(r, "v_5(H_20)") == "1"
    assert _witness(r, "v_5(sum 1/(jp))") == "1"
    for j in range(1, 5):
        assert _witness(r, f"block j={j} mod 5") == "0"
    assert check_levine(7).passed and check_levine(11).passed


def test_block_value_exact():
    # inner block j=2 at p=5: 1/6 + 1/7 + 1/8 + 1/9 = 275/504, and 5^2 | 275
    block = sum_fractions([Fraction(1, i) for i in range(6, 10)])
    assert block == Fraction(275, 504)
    assert block.numerator % 25 == 0


def test_block_decomposition():
    r = check_block(5)
    assert r.passed
    assert _witness(r, "blocks === 0 mod p") == "4 of 4"
    assert _witness(r, "decomposition identity") == "exact match"
    capped = check_block(101, oracle_cap=100)
    assert "skipped" in capped.notes and capped.passed


def test_antilemma():
    r = check_antilemma(5)
    assert r.passed
    assert _witness(r, "v_5(H_40)") == "-2"
    assert _witness(r, "p divides numerator of H_40") == "no"
    assert _witness(r, "v_5(H_8)") == "-1"
    assert _witness(r, "blocks === 0 mod p") == "8 of 8"
    assert _witness(r, "reindexing identity") == "exact match"
    # the oracle agrees: numerator of H_40 is coprime to 5
    h40 = harmonic_exact(40)
    assert h40.num % 5 != 0 and h40.valuation(5).is_exactly(-2)
    assert check_antilemma(7).passed


def test_report_serialization():
    doc = check_wilson(5).to_json()
    assert doc["claim"] == "wilson" and doc["p"] == 5 and doc["passed"] is True
    assert ["(5-1)! mod 5", "4"] in doc["witnesses"]


def test_translation_known_members():
    r = check_translation(5, M5, domain_cap=100)
    assert r.passed
    d = dict(r.witnesses)
    assert d["(a=20, b=24, c=4)"] == "t=0: v=inf holds"
    # c must differ from a, so (a=4, b=24, c=4) never appears
    assert len(r.witnesses) == 1
    assert "1 in-domain" in r.notes


def test_translation_counterexample():
    # a deliberately wrong member set must be caught, not rubber-stamped
    fake = MpSet(p=5, members=(1, 6, 11), status="complete", method="tree", limit=None, precision=4)
    r = check_translation(5, fake, domain_cap=50)
    assert not r.passed
    assert any("COUNTEREXAMPLE" in v for _, v in r.witnesses)


def test_translation_requires_coverage():
    partial = MpSet(p=5, members=(4, 20, 24), status="truncated", method="scan", limit=50, precision=4)
    with pytest.raises(IncompleteMembers):
        check_translation(5, partial, domain_cap=100)
    check_translation(5, partial, domain_cap=50)  # within the certified window
    with pytest.raises(ValueError):
        check_translation(7, M5, domain_cap=10)


def test_multiples():
    r = multiples_scan(5, 5)
    assert r.passed
    assert multiples_members(r) == {1}
    assert "k=2: v=-2" in r.notes
    assert multiples_members(multiples_scan(7, 3)) == {1}
    assert multiples_members(multiples_scan(11, 2)) == {1}
    with pytest.raises(ValueError):
        multiples_scan(5, 1)


def test_census():
    c = residue_census(5, M5)
    assert c.modulus == 20
    assert c.classes == {0: (20,), 4: (4, 24)}
    assert c.min_per_class == {0: 20, 4: 4}
    doc = c.to_json()
    assert doc["classes"] == {"0": [20], "4": [4, 24]}
    assert doc["min_per_class"] == {"0": 20, "4": 4}
    # every member lands in exactly one class
    assert sorted(m for ms in c.classes.values() for m in ms) == [4, 20, 24]
    with pytest.raises(ValueError):
        residue_census(7, M5)
    empty = MpSet(p=5, members=(), status="truncated", method="scan", limit=3, precision=4)
    with pytest.raises(ValueError):
        residue_census(5, empty)


def test_all_checks_pass_through_thirty_one():
    for p in primes_in_range(5, 31):
        for check in (check_wilson, check_qr_sum, check_wolstenholme, check_levine, check_block, check_antilemma):
            assert check(p).passed, f"{check.__name__} failed at p={p}"
