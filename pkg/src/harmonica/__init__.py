"""p-adic valuations of harmonic numbers: congruence checks and M_p searches."""

from .errors import (
    CapExceeded,
    CorruptFile,
    FrontierOverflow,
    HarmonicaError,
    IncompleteMembers,
    Mismatch,
    NonInvertible,
    PrecisionExhausted,
    SchemaMismatch,
    UsageError,
)
from .harmonic import (
    DEFAULT_ORACLE_CAP,
    HarmonicResult,
    RationalHarmonic,
    coprime_range_sum,
    coprime_tail_sum,
    digits_base,
    fraction_valuation,
    harmonic2_prefix,
    harmonic_exact,
    harmonic_fractions,
    harmonic_padic,
    harmonic_valuation,
    recommended_precision,
    sum_fractions,
)
from .lemmas import (
    CLAIM_IDS,
    LemmaReport,
    ResidueCensus,
    check_antilemma,
    check_block,
    check_levine,
    check_qr_sum,
    check_translation,
    check_wilson,
    check_wolstenholme,
    multiples_members,
    multiples_scan,
    residue_census,
)
from .mpsearch import (
    MpSet,
    SearchConfig,
    SearchNode,
    TreeSearch,
    cache_path,
    enumerate_tree,
    load_checkpoint,
    load_set,
    reconcile,
    save_checkpoint,
    save_set,
    scan_bruteforce,
)
from .padic import (
    INFINITE,
    PAdicValue,
    PrimeContext,
    Residue,
    Valuation,
    batch_inv,
    inv_mod,
    padic_add,
    padic_from_ratio,
    padic_mul,
    padic_neg,
    padic_sub,
    valuation_of,
    vp_int,
)
from .primes import is_prime, primes_in_range
from .version import __version__

__all__ = [
    "CapExceeded",
    "CorruptFile",
    "FrontierOverflow",
    "HarmonicaError",
    "IncompleteMembers",
    "Mismatch",
    "NonInvertible",
    "PrecisionExhausted",
    "SchemaMismatch",
    "UsageError",
    "DEFAULT_ORACLE_CAP",
    "HarmonicResult",
    "RationalHarmonic",
    "coprime_range_sum",
    "coprime_tail_sum",
    "digits_base",
    "fraction_valuation",
    "harmonic2_prefix",
    "harmonic_exact",
    "harmonic_fractions",
    "harmonic_padic",
    "harmonic_valuation",
    "recommended_precision",
    "sum_fractions",
    "CLAIM_IDS",
    "LemmaReport",
    "ResidueCensus",
    "check_antilemma",
    "check_block",
    "check_levine",
    "check_qr_sum",
    "check_translation",
    "check_wilson",
    "check_wolstenholme",
    "multiples_members",
    "multiples_scan",
    "residue_census",
    "MpSet",
    "SearchConfig",
    "SearchNode",
    "TreeSearch",
    "cache_path",
    "enumerate_tree",
    "load_checkpoint",
    "load_set",
    "reconcile",
    "save_checkpoint",
    "save_set",
    "scan_bruteforce",
    "INFINITE",
    "PAdicValue",
    "PrimeContext",
    "Residue",
    "Valuation",
    "batch_inv",
    "inv_mod",
    "padic_add",
    "padic_from_ratio",
    "padic_mul",
    "padic_neg",
    "padic_sub",
    "valuation_of",
    "vp_int",
    "is_prime",
    "primes_in_range",
    "__version__",
]
