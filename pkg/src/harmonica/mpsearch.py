"""Two independent enumerations of M_p = {n >= 1 : v_p(H_n) >= 1}.

scan_bruteforce walks n = 1..N keeping S === p^L * H_n (mod p^k) up to
date in O(1) amortized work per step: when n = p^e * m with p coprime to m,
S gains p^(L-e) * inv(m). Membership is the exact test S === 0 mod p^(L+1).

enumerate_tree exploits parent closure: writing n = p*q + r, any member n
forces q to be a member (or 0), because H_n = (1/p) H_q + T(n) with T(n) a
p-adic integer. Children of a member q are scored by the exact rule

    p*q + r in M_p  <=>  (1/p) H_q + H_r === 0 (mod p)

which needs H_q to two trusted digits. Confirmed children up to direct_cap
are recomputed from scratch for an exact valuation; anything past the cap
is recorded as unresolved and downgrades the run status instead of being
guessed at.

Both paths produce an MpSet whose `limit` is the certified-coverage bound:
every n <= limit has been decided exactly. reconcile() cross-checks the two
paths on their shared window and merges them; disagreement is a hard error.
"""

from __future__ import annotations

import json
import os
import tempfile
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    CorruptFile,
    FrontierOverflow,
    HarmonicaError,
    Mismatch,
    PrecisionExhausted,
    SchemaMismatch,
)
from .harmonic import digits_base, harmonic_padic, recommended_precision
from .padic import PAdicValue, PrimeContext, batch_inv_raw, vp_int
from .version import __version__

STATUSES = ("complete", "truncated", "precision_limited")
METHODS = ("scan", "tree", "reconciled")


@dataclass(frozen=True)
class MpSet:
    """A certified slice of M_p.

    status "complete" is only ever produced by a tree search whose frontier
    emptied with every node exactly resolved; then limit is None. Otherwise
    limit bounds the certified range: membership below it is exact.
    """

    p: int
    members: tuple[int, ...]
    status: str
    method: str
    limit: int | None
    precision: int
    version: str = __version__
    detail: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.status != "complete" and self.limit is None:
            raise ValueError("non-complete sets must carry a limit")
        if any(m < 1 for m in self.members):
            raise ValueError("members must be >= 1")
        if list(self.members) != sorted(set(self.members)):
            raise ValueError("members must be strictly increasing")

    def covers(self, cap: int) -> bool:
        """True when membership below cap is certified exact."""
        return self.status == "complete" or (self.limit is not None and self.limit >= cap)

    def members_below(self, cap: int) -> tuple[int, ...]:
        return tuple(m for m in self.members if m <= cap)

    def to_json(self) -> dict:
        doc = {
            "p": self.p,
            "members": list(self.members),
            "status": self.status,
            "method": self.method,
            "limit": self.limit,
            "precision": self.precision,
            "version": self.version,
        }
        if self.detail:
            doc["detail"] = self.detail
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "MpSet":
        try:
            return cls(
                p=int(doc["p"]),
                members=tuple(int(m) for m in doc["members"]),
                status=doc["status"],
                method=doc["method"],
                limit=None if doc["limit"] is None else int(doc["limit"]),
                precision=int(doc["precision"]),
                version=str(doc["version"]),
                detail=str(doc.get("detail", "")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptFile(f"malformed member-set document: {exc}") from exc


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_set(path: str | Path, mp_set: MpSet) -> None:
    _atomic_write(Path(path), json.dumps(mp_set.to_json(), sort_keys=True, indent=1) + "\n")


def load_set(path: str | Path, expect_p: int | None = None) -> MpSet:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CorruptFile(f"cannot read member set from {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise CorruptFile(f"{path} does not hold a member-set object")
    loaded = MpSet.from_json(doc)
    if loaded.version != __version__:
        raise SchemaMismatch(f"{path} written by version {loaded.version}, this is {__version__}")
    if expect_p is not None and loaded.p != expect_p:
        raise SchemaMismatch(f"{path} holds p={loaded.p}, expected p={expect_p}")
    return loaded


def cache_path(cache_dir: str | Path, p: int) -> Path:
    return Path(cache_dir) / "mp" / f"p={p}.json"


def scan_bruteforce(p: int, N: int, ctx: PrimeContext | None = None) -> MpSet:
    """Exact membership for every n <= N, O(N) residue operations total."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    L = digits_base(N, p) - 1  # deepest power of p reachable below N
    if ctx is None:
        ctx = PrimeContext(p, L + 4)
    if ctx.p != p:
        raise ValueError(f"context prime {ctx.p} does not match p={p}")
    if ctx.k < L + 2:
        raise ValueError(f"k={ctx.k} cannot certify membership to N={N}; need k >= {L + 2}")
    k = ctx.k
    modulus = ctx.modulus
    member_mod = p ** (L + 1)
    shift = [p ** (L - e) for e in range(L + 1)]
    members: list[int] = []
    status = "truncated"
    detail = ""
    limit = N
    S = 0
    n = 1
    batch = 1 << 16
    while n <= N:
        hi = min(n + batch - 1, N)
        parts: list[tuple[int, int]] = []  # (n, e) per index in the block
        units: list[int] = []
        for x in range(n, hi + 1):
            e = 0
            m = x
            while m % p == 0:
                m //= p
                e += 1
            parts.append((x, e))
            units.append(m % modulus)
        invs = batch_inv_raw(units, modulus, p)
        for (x, e), inv in zip(parts, invs):
            S = (S + shift[e] * inv) % modulus
            if S % member_mod == 0:
                if S == 0:  # valuation ran past k: escalate for the exact value
                    try:
                        harmonic_padic(x, PrimeContext(p, recommended_precision(p, x)))
                    except PrecisionExhausted:
                        status = "precision_limited"
                        detail = f"n={x}: member but valuation unresolved"
                        limit = min(limit, x - 1)
                        continue
                members.append(x)
        n = hi + 1
    return MpSet(p, tuple(members), status, "scan", limit, k, detail=detail)


@dataclass(frozen=True)
class SearchConfig:
    max_depth: int = 24
    direct_cap: int = 10**9
    precision: int | None = None  # None: recommended_precision per node
    frontier_limit: int = 100_000

    def __post_init__(self):
        if self.max_depth < 1 or self.frontier_limit < 1 or self.direct_cap < 1:
            raise ValueError("search bounds must be positive")
        if self.precision is not None and self.precision < 2:
            raise ValueError("tree search needs at least two digits of precision")


@dataclass(frozen=True)
class SearchNode:
    q: int
    value: PAdicValue
    depth: int

    def to_json(self) -> dict:
        return {"q": str(self.q), "depth": self.depth, **self.value.to_json()}

    @classmethod
    def from_json(cls, doc: dict, p: int) -> "SearchNode":
        ctx = PrimeContext(p, max(int(doc["prec"]), 1))
        value = PAdicValue.from_json(doc, ctx)
        return cls(int(doc["q"]), value, int(doc["depth"]))


class TreeSearch:
    """Breadth-first exploration of the base-p member tree.

    The frontier stays sorted by q: nodes at depth d live in
    [p^(d-1), p^d), and children of increasing parents are generated in
    increasing order, so FIFO processing is q-ordered, checkpoints are
    reproducible, and the members list is built already sorted.
    """

    def __init__(self, p: int, config: SearchConfig | None = None):
        self.config = config or SearchConfig()
        self.p = PrimeContext(p, 2).p  # validates primality and p >= 5
        if self.config.direct_cap < p * p:
            raise ValueError(f"direct_cap must be >= p^2 = {p * p}")
        self._hr = self._residue_table()
        root = SearchNode(0, PAdicValue.zero(PrimeContext(p, 2)), 0)
        self.frontier: deque[SearchNode] = deque([root])
        self.members: list[int] = []
        self.unresolved: list[int] = []
        self.depth_truncated = False
        self.max_precision_used = 2
        self.nodes_expanded = 0
        self.detail_notes: list[str] = []

    def _residue_table(self) -> list[int]:
        """H_r mod p for r = 0..p-1 (no index below p is divisible by p)."""
        p = self.p
        table = [0] * p
        acc = 0
        for r, inv in enumerate(batch_inv_raw(list(range(1, p)), p, p), start=1):
            acc = (acc + inv) % p
            table[r] = acc
        return table

    def _score_base(self, value: PAdicValue) -> int:
        """Residue mod p of (1/p) * H_q for a node value with exact valuation."""
        if value.is_zero:
            return 0
        if value.valuation >= 2:
            return 0
        return value.unit % self.p

    def _node_precision(self, n: int) -> int:
        k = self.config.precision or recommended_precision(self.p, n)
        return max(k, 2)

    def _expand(self, node: SearchNode) -> None:
        p = self.p
        if node.depth >= self.config.max_depth:
            self.depth_truncated = True
            return
        base = self._score_base(node.value)
        for r in range(p):
            n = p * node.q + r
            if n == 0 or (base + self._hr[r]) % p:
                continue
            if n > self.config.direct_cap:
                self.unresolved.append(n)
                continue
            k = self._node_precision(n)
            try:
                result = harmonic_padic(n, PrimeContext(p, k))
            except PrecisionExhausted:
                self.unresolved.append(n)
                self.detail_notes.append(f"n={n}: recompute exhausted precision k={k}")
                continue
            if not (result.valuation.exact and result.valuation.at_least(1)):
                raise HarmonicaError(
                    f"child rule confirmed n={n} but recompute found v={result.valuation}"
                )
            self.max_precision_used = max(self.max_precision_used, k)
            self.members.append(n)
            self.frontier.append(SearchNode(n, result.value, node.depth + 1))
            if len(self.frontier) > self.config.frontier_limit:
                raise FrontierOverflow(
                    f"frontier exceeded {self.config.frontier_limit} nodes at p={p}"
                )

    def run(self, max_nodes: int | None = None) -> bool:
        """Expand until done (True) or max_nodes expansions elapsed (False)."""
        taken = 0
        while self.frontier:
            if max_nodes is not None and taken >= max_nodes:
                return False
            self._expand(self.frontier.popleft())
            self.nodes_expanded += 1
            taken += 1
        return True

    def result(self) -> MpSet:
        if self.frontier:
            raise ValueError("search still has frontier nodes; call run() to completion")
        bounds = []
        if self.unresolved:
            bounds.append(min(self.unresolved) - 1)
        if self.depth_truncated:
            bounds.append(self.p**self.config.max_depth - 1)
        if self.unresolved:
            status = "precision_limited"
        elif self.depth_truncated:
            status = "truncated"
        else:
            status = "complete"
        detail_parts = []
        if self.unresolved:
            detail_parts.append(f"unresolved past direct_cap: {sorted(self.unresolved)}")
        detail_parts.extend(self.detail_notes)
        return MpSet(
            self.p,
            tuple(self.members),
            status,
            "tree",
            min(bounds) if bounds else None,
            self.max_precision_used,
            detail="; ".join(detail_parts),
        )

    def to_checkpoint(self) -> dict:
        """Frontier plus enough progress state to resume bit-for-bit.

        The members/unresolved/truncated keys extend the base schema: the
        frontier alone cannot reproduce nodes confirmed before the pause.
        """
        return {
            "p": self.p,
            "k": self.config.precision or 0,
            "frontier": [node.to_json() for node in self.frontier],
            "members": self.members,
            "unresolved": self.unresolved,
            "truncated": self.depth_truncated,
            "version": __version__,
        }

    @classmethod
    def from_checkpoint(cls, doc: dict, config: SearchConfig | None = None) -> "TreeSearch":
        config = config or SearchConfig()
        try:
            version = doc["version"]
            p = int(doc["p"])
            k = int(doc["k"])
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptFile(f"malformed checkpoint: {exc}") from exc
        if version != __version__:
            raise SchemaMismatch(f"checkpoint from version {version}, this is {__version__}")
        if k != (config.precision or 0):
            raise SchemaMismatch(f"checkpoint precision {k} != configured {config.precision or 0}")
        search = cls(p, config)
        try:
            search.frontier = deque(SearchNode.from_json(n, p) for n in doc["frontier"])
            search.members = [int(m) for m in doc["members"]]
            search.unresolved = [int(u) for u in doc["unresolved"]]
            search.depth_truncated = bool(doc["truncated"])
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptFile(f"malformed checkpoint: {exc}") from exc
        for m in search.members:
            search.max_precision_used = max(search.max_precision_used, search._node_precision(m))
        return search


def save_checkpoint(path: str | Path, search: TreeSearch) -> None:
    _atomic_write(Path(path), json.dumps(search.to_checkpoint(), sort_keys=True) + "\n")


def load_checkpoint(path: str | Path, config: SearchConfig | None = None) -> TreeSearch:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CorruptFile(f"cannot read checkpoint from {path}: {exc}") from exc
    return TreeSearch.from_checkpoint(doc, config)


def enumerate_tree(p: int, config: SearchConfig | None = None) -> MpSet:
    search = TreeSearch(p, config)
    search.run()
    return search.result()


def reconcile(scan: MpSet, tree: MpSet) -> MpSet:
    """Cross-check the two paths on their shared certified window and merge."""
    if scan.p != tree.p:
        raise ValueError(f"mismatched primes: {scan.p} vs {tree.p}")
    if scan.method != "scan" or tree.method != "tree":
        raise ValueError(f"reconcile wants (scan, tree), got ({scan.method}, {tree.method})")
    window = scan.limit if tree.covers(scan.limit) else tree.limit
    if scan.members_below(window) != tree.members_below(window):
        raise Mismatch(scan.p, scan.members_below(window), tree.members_below(window))
    merged = tuple(sorted(set(scan.members) | set(tree.members)))
    if tree.status == "complete":
        status, limit = "complete", None
    else:
        status, limit = "truncated", max(scan.limit, tree.limit)
    detail = "; ".join(x for x in (scan.detail, tree.detail) if x)
    return MpSet(
        scan.p,
        merged,
        status,
        "reconciled",
        limit,
        max(scan.precision, tree.precision),
        detail=detail,
    )
