"""Matchings and the per-matching stability predicates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

from .errors import MarketError, OverlapError, ParseError
from .market import Market, members


class BlockingPair(NamedTuple):
    firm: int
    worker: int


@dataclass(frozen=True, order=True)
class Matching:
    """A many-to-one matching.

    ``firm_side[f]`` is the bitmask of workers hired by firm ``f``;
    ``worker_side[w]`` is the firm employing ``w`` or ``None``. Equality,
    hashing and the canonical order only look at ``firm_side``.
    """

    firm_side: tuple[int, ...]
    worker_side: tuple[int | None, ...] = field(compare=False)

    def employer(self, w: int) -> int | None:
        return self.worker_side[w]

    def hired(self) -> int:
        """Total number of workers employed."""
        return sum(s.bit_count() for s in self.firm_side)


def make_matching(market: Market, firm_side: Sequence[int] | Mapping[int, int]) -> Matching:
    """Build a matching from the firm side, deriving the worker side."""
    if isinstance(firm_side, Mapping):
        sides = [firm_side.get(f, 0) for f in range(market.n_firms)]
    else:
        sides = list(firm_side)
    if len(sides) != market.n_firms:
        raise MarketError(f"expected {market.n_firms} firm assignments, got {len(sides)}")
    worker_side: list[int | None] = [None] * market.n_workers
    for f, s in enumerate(sides):
        if s & ~market.full_set:
            raise MarketError(f"assignment of {market.firms[f]} mentions an unknown worker")
        for w in members(s):
            if worker_side[w] is not None:
                raise OverlapError(market.workers[w])
            worker_side[w] = f
    return Matching(tuple(sides), tuple(worker_side))


def empty_matching(market: Market) -> Matching:
    return Matching((0,) * market.n_firms, (None,) * market.n_workers)


def is_individually_rational(market: Market, mu: Matching) -> bool:
    for w, f in enumerate(mu.worker_side):
        if f is not None and not market.acceptable_to_worker(w, f):
            return False
    return all(market.choice(f, s) == s for f, s in enumerate(mu.firm_side))


def blocking_pairs(market: Market, mu: Matching) -> list[BlockingPair]:
    """Firm-worker pairs blocking ``mu``, ordered by (firm, worker)."""
    out = []
    for f, s in enumerate(mu.firm_side):
        for w in range(market.n_workers):
            bit = 1 << w
            if s & bit:
                continue
            if not market.worker_prefers(w, f, mu.worker_side[w]):
                continue
            if market.choice(f, s | bit) & bit:
                out.append(BlockingPair(f, w))
    return out


def is_stable(market: Market, mu: Matching) -> bool:
    return is_individually_rational(market, mu) and not blocking_pairs(market, mu)


def is_worker_quasi_stable(market: Market, mu: Matching) -> bool:
    if not is_individually_rational(market, mu):
        return False
    return all(mu.worker_side[p.worker] is None for p in blocking_pairs(market, mu))


# notation


def format_set_compact(market: Market, mask: int) -> str:
    if not mask:
        return "-"
    return "".join(market.workers[w] for w in members(mask))


def format_matching(market: Market, mu: Matching) -> str:
    """Tuple notation, e.g. ``(w1w2,-)``."""
    return "(" + ",".join(format_set_compact(market, s) for s in mu.firm_side) + ")"


def format_pair(market: Market, pair: BlockingPair) -> str:
    return f"({market.firms[pair.firm]},{market.workers[pair.worker]})"


def _split_names(market: Market, chunk: str) -> list[int]:
    """Split a run of concatenated worker names, rejecting ambiguous runs."""
    names = market.workers
    # ways[i] = list of segmentations of chunk[i:], capped at two
    ways: list[list[list[int]]] = [[] for _ in range(len(chunk) + 1)]
    ways[len(chunk)] = [[]]
    for i in range(len(chunk) - 1, -1, -1):
        for w, name in enumerate(names):
            if chunk.startswith(name, i):
                for rest in ways[i + len(name)]:
                    ways[i].append([w] + rest)
                    if len(ways[i]) > 1:
                        break
            if len(ways[i]) > 1:
                break
    if not ways[0]:
        raise ParseError(f"cannot read {chunk!r} as worker names")
    if len(ways[0]) > 1:
        raise ParseError(f"worker names in {chunk!r} are ambiguous; separate them with spaces")
    return ways[0][0]


def parse_matching(market: Market, text: str) -> Matching:
    """Read tuple notation such as ``(w3,w2w4)``; ``-`` or ``∅`` is the empty set."""
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise ParseError(f"matching {text!r} must be enclosed in parentheses")
    parts = body[1:-1].split(",")
    if len(parts) != market.n_firms:
        raise ParseError(f"matching {text!r} has {len(parts)} components, expected {market.n_firms}")
    sides = []
    for part in parts:
        part = part.strip().replace("{", " ").replace("}", " ")
        mask = 0
        if part not in ("-", "∅", ""):
            for chunk in part.split():
                for w in _split_names(market, chunk):
                    if mask >> w & 1:
                        raise ParseError(f"worker {market.workers[w]} listed twice in {text!r}")
                    mask |= 1 << w
        sides.append(mask)
    return make_matching(market, sides)
