"""Exception hierarchy shared across the package."""

from __future__ import annotations


class HarmonicaError(Exception):
    """Base class for all package-specific errors."""


class NonInvertible(HarmonicaError):
    """An element divisible by p was passed where a unit mod p^k is required."""

    def __init__(self, value: int, modulus: int, index: int | None = None):
        self.value = value
        self.modulus = modulus
        self.index = index
        where = "" if index is None else f" at index {index}"
        super().__init__(f"{value} is not invertible modulo {modulus}{where}")


class PrecisionExhausted(HarmonicaError):
    """Cancellation left fewer than one trusted p-adic digit."""


class CapExceeded(HarmonicaError):
    """An exact-rational oracle call above its configured bound."""


class IncompleteMembers(HarmonicaError):
    """A membership set not certified complete below the requested cap."""


class Mismatch(HarmonicaError):
    """Two enumeration paths disagree; carries both member lists."""

    def __init__(self, p: int, scan_members, tree_members):
        self.p = p
        self.scan_members = list(scan_members)
        self.tree_members = list(tree_members)
        super().__init__(
            f"enumeration mismatch for p={p}: "
            f"scan={self.scan_members} tree={self.tree_members}"
        )


class SchemaMismatch(HarmonicaError):
    """A persisted file has the wrong version, prime, or precision."""


class CorruptFile(HarmonicaError):
    """A persisted file cannot be parsed against its schema."""


class FrontierOverflow(HarmonicaError):
    """The tree-search frontier grew past its configured limit."""


class UsageError(HarmonicaError):
    """Invalid CLI configuration; maps to exit code 3."""
