"""Markets, choice functions and the preference axioms.

Worker sets are plain ``int`` bitmasks: bit ``i`` is set when worker ``i``
belongs to the set. Firms and workers are addressed by their index in
declaration order; names are only used for display.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded, LadViolation, MarketError, SubstitutabilityViolation

MAX_WORKERS = 24
DEFAULT_BUDGET = 10**8
# above this many workers the dense choice table gets too large
_TABLE_LIMIT = 20


def members(mask: int) -> tuple[int, ...]:
    """Indices of the workers in ``mask``, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def set_key(mask: int) -> tuple[int, ...]:
    """Sort key giving the canonical (lexicographic) order on worker sets."""
    return members(mask)


def submasks(mask: int) -> Iterator[int]:
    """Every subset of ``mask``, including ``mask`` itself and 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def responsive_ranking(order: Sequence[int], quota: int) -> tuple[int, ...]:
    """Subset ranking induced by a strict worker order and a quota.

    Subsets of at most ``quota`` acceptable workers are ranked by the sorted
    sequence of their workers' ranks, compared lexicographically with a
    missing slot counting as worse than any worker. The induced choice
    picks the best ``quota`` available workers.
    """
    if quota < 1:
        raise MarketError("responsive quota must be at least 1")
    pad = len(order)
    keyed = []
    for size in range(1, min(quota, len(order)) + 1):
        for ranks in itertools.combinations(range(len(order)), size):
            key = ranks + (pad,) * (quota - size)
            keyed.append((key, mask_of(order[r] for r in ranks)))
    keyed.sort()
    return tuple(mask for _, mask in keyed)


@dataclass(frozen=True)
class Verdict:
    """Outcome of an exhaustive check; ``witness`` is set when it fails."""

    holds: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class Market:
    """A many-to-one matching market with strict preferences.

    ``worker_prefs[w]`` lists acceptable firm indices, best first.
    ``firm_prefs[f]`` lists acceptable worker sets (bitmasks), best first;
    the empty set is the implicit floor and every unlisted set ranks below it.
    """

    firms: tuple[str, ...]
    workers: tuple[str, ...]
    worker_prefs: tuple[tuple[int, ...], ...]
    firm_prefs: tuple[tuple[int, ...], ...]
    budget: int = field(default=DEFAULT_BUDGET, compare=False)
    _tables: dict = field(default_factory=dict, init=False, repr=False, compare=False)
    _axioms: dict = field(default_factory=dict, init=False, repr=False, compare=False)
    _lock: threading.Lock = field(
        default_factory=threading.Lock, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        nf, nw = len(self.firms), len(self.workers)
        if nf == 0:
            raise MarketError("no firms declared")
        if nw == 0:
            raise MarketError("no workers declared")
        if nw > MAX_WORKERS:
            raise MarketError(f"at most {MAX_WORKERS} workers are supported, got {nw}")
        names = self.firms + self.workers
        if len(set(names)) != len(names):
            raise MarketError("agent names must be unique across both sides")
        if len(self.worker_prefs) != nw or len(self.firm_prefs) != nf:
            raise MarketError("exactly one preference record per agent is required")
        full = (1 << nw) - 1
        for w, ranking in enumerate(self.worker_prefs):
            if len(set(ranking)) != len(ranking):
                raise MarketError(f"duplicate firm in the ranking of {self.workers[w]}")
            if any(not 0 <= f < nf for f in ranking):
                raise MarketError(f"unknown firm in the ranking of {self.workers[w]}")
        for f, ranking in enumerate(self.firm_prefs):
            if len(set(ranking)) != len(ranking):
                raise MarketError(f"duplicate subset in the ranking of {self.firms[f]}")
            for s in ranking:
                if s == 0:
                    raise MarketError(f"the empty set may not be listed by {self.firms[f]}")
                if s & ~full:
                    raise MarketError(f"unknown worker in the ranking of {self.firms[f]}")
        rank = []
        for ranking in self.worker_prefs:
            rank.append({f: i for i, f in enumerate(ranking)})
        object.__setattr__(self, "_worker_rank", tuple(rank))

    @property
    def n_firms(self) -> int:
        return len(self.firms)

    @property
    def n_workers(self) -> int:
        return len(self.workers)

    @property
    def full_set(self) -> int:
        return (1 << len(self.workers)) - 1

    def firm_index(self, name: str) -> int:
        return self.firms.index(name)

    def worker_index(self, name: str) -> int:
        return self.workers.index(name)

    def with_budget(self, budget: int) -> "Market":
        return Market(self.firms, self.workers, self.worker_prefs, self.firm_prefs, budget)

    def check_budget(self, what: str, needed: int) -> None:
        if needed > self.budget:
            raise BudgetExceeded(what, needed, self.budget)

    # worker side

    def worker_rank(self, w: int, f: int | None) -> int:
        """Position of ``f`` in ``w``'s ranking; lower is better.

        Being unmatched (``None``) sits right after the acceptable firms and
        unacceptable firms sit below that.
        """
        ranks = self._worker_rank[w]
        floor = len(self.worker_prefs[w])
        if f is None:
            return floor
        return ranks.get(f, floor + 1)

    def worker_prefers(self, w: int, f: int, g: int | None) -> bool:
        """True when worker ``w`` strictly prefers firm ``f`` to ``g``."""
        return self.worker_rank(w, f) < self.worker_rank(w, g)

    def acceptable_to_worker(self, w: int, f: int) -> bool:
        return f in self._worker_rank[w]

    # firm side

    def choice_table(self, f: int) -> list[int]:
        """Dense table mapping every worker set to ``Ch_f`` of it."""
        table = self._tables.get(f)
        if table is None:
            if self.n_workers > _TABLE_LIMIT:
                raise MarketError("choice table too large for this market")
            table = self._build_table(f)
            with self._lock:
                table = self._tables.setdefault(f, table)
        return table

    def _build_table(self, f: int) -> list[int]:
        n = self.n_workers
        ranking = self.firm_prefs[f]
        floor = len(ranking)
        best = np.full(1 << n, floor, dtype=np.int64)
        for i, s in enumerate(ranking):
            best[s] = i
        # best[S] = min over listed subsets of S, by dynamic programming on bits
        for b in range(n):
            view = best.reshape(-1, 2, 1 << b)
            np.minimum(view[:, 1, :], view[:, 0, :], out=view[:, 1, :])
        lookup = np.array(ranking + (0,), dtype=np.int64)
        return lookup[best].tolist()

    def choice_array(self, f: int) -> np.ndarray:
        key = ("array", f)
        arr = self._tables.get(key)
        if arr is None:
            arr = np.array(self.choice_table(f), dtype=np.int64)
            with self._lock:
                arr = self._tables.setdefault(key, arr)
        return arr

    def choice(self, f: int, s: int) -> int:
        """Firm ``f``'s most preferred subset of ``s``."""
        if self.n_workers <= _TABLE_LIMIT:
            return self.choice_table(f)[s]
        for t in self.firm_prefs[f]:
            if t & ~s == 0:
                return t
        return 0

    # axioms

    def require_substitutable(self) -> None:
        for f in range(self.n_firms):
            verdict = self.axiom_status(f, "substitutable")
            if not verdict:
                raise SubstitutabilityViolation(self.firms[f], self.describe_witness(verdict.witness))

    def require_lad(self) -> None:
        self.require_substitutable()
        for f in range(self.n_firms):
            verdict = self.axiom_status(f, "lad")
            if not verdict:
                raise LadViolation(self.firms[f], self.describe_witness(verdict.witness))

    def axiom_status(self, f: int, axiom: str) -> Verdict:
        """Cached axiom verdict; each entry is written once."""
        key = (f, axiom)
        verdict = self._axioms.get(key)
        if verdict is None:
            check = {"substitutable": is_substitutable, "lad": satisfies_lad}[axiom]
            verdict = check(self, f)
            with self._lock:
                verdict = self._axioms.setdefault(key, verdict)
        return verdict

    def is_lad_market(self) -> bool:
        return all(self.axiom_status(f, "lad") for f in range(self.n_firms))

    # display

    def format_set(self, mask: int) -> str:
        return "{" + ",".join(self.workers[i] for i in members(mask)) + "}"

    def describe_witness(self, witness: tuple | None) -> str:
        if witness is None:
            return "none"
        if len(witness) == 3:
            w, s, t = witness
            return f"({self.workers[w]}, S={self.format_set(s)}, S'={self.format_set(t)})"
        return "(" + ", ".join(self.format_set(s) for s in witness) + ")"


def canonical_subsets(n: int) -> list[int]:
    return sorted(range(1 << n), key=set_key)


def is_substitutable(market: Market, f: int) -> Verdict:
    """Exhaustive substitutability check for firm ``f``.

    A failure witness ``(w, S, S2)`` has ``w`` chosen from ``S`` but not from
    ``S2``, with ``w`` in ``S2`` and ``S2`` a subset of ``S``. The smallest
    such triple in canonical order is returned.
    """
    n = market.n_workers
    market.check_budget("substitutability sweep", n * 3**n)
    ch = market.choice_table(f)
    # dropping one worker at a time is enough to decide the property
    failing = False
    for s in range(1 << n):
        chosen = ch[s]
        for x in members(s):
            if chosen & ~ch[s & ~(1 << x)] & ~(1 << x):
                failing = True
                break
        if failing:
            break
    if not failing:
        return Verdict(True)
    order = canonical_subsets(n)
    for w in range(n):
        bit = 1 << w
        for s in order:
            if not ch[s] & bit:
                continue
            bad = [t | bit for t in submasks(s & ~bit) if not ch[t | bit] & bit]
            if bad:
                return Verdict(False, (w, s, min(bad, key=set_key)))
    raise AssertionError("single-removal sweep and triple sweep disagree")


def satisfies_lad(market: Market, f: int) -> Verdict:
    """Exhaustive law-of-aggregate-demand check; witness is ``(S_small, S_large)``."""
    n = market.n_workers
    market.check_budget("aggregate demand sweep", 3**n)
    ch = market.choice_table(f)
    size = [c.bit_count() for c in ch]
    failing = any(
        size[s] > size[s | (1 << x)] for s in range(1 << n) for x in range(n) if not s >> x & 1
    )
    if not failing:
        return Verdict(True)
    full = market.full_set
    for small in canonical_subsets(n):
        rest = full & ~small
        bad = [small | extra for extra in submasks(rest) if size[small | extra] < size[small]]
        if bad:
            return Verdict(False, (small, min(bad, key=set_key)))
    raise AssertionError("single-addition sweep and pair sweep disagree")


def check_choice_consistency(market: Market, f: int) -> Verdict:
    """Check ``Ch(S | S2) == Ch(Ch(S) | S2)`` for every pair of worker sets."""
    n = market.n_workers
    market.check_budget("choice consistency sweep", 4**n)
    ch = np.array(market.choice_table(f), dtype=np.int64)
    everything = np.arange(1 << n, dtype=np.int64)
    order = canonical_subsets(n)
    rank = np.empty(1 << n, dtype=np.int64)
    rank[order] = np.arange(1 << n)
    for s in order:
        lhs = ch[s | everything]
        rhs = ch[ch[s] | everything]
        bad = np.nonzero(lhs != rhs)[0]
        if bad.size:
            other = int(bad[np.argmin(rank[bad])])
            return Verdict(False, (s, other))
    return Verdict(True)
