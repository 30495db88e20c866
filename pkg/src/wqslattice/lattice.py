"""Blair's order, the join of worker-quasi-stable matchings and the lattice itself."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import MarketError, NoUniqueBound, NotInLattice, NotWorkerQuasiStable
from .market import Market
from .matchings import (
    Matching,
    empty_matching,
    format_matching,
    is_worker_quasi_stable,
    make_matching,
)


class BlairComparison(enum.Enum):
    EQUAL = "equal"
    FIRST_DOMINATES = "first-dominates"
    SECOND_DOMINATES = "second-dominates"
    INCOMPARABLE = "incomparable"


def blair_geq(market: Market, mu: Matching, nu: Matching) -> bool:
    """True when ``mu`` weakly Blair-dominates ``nu``: each firm keeps ``mu(f)``
    when offered ``mu(f) | nu(f)``."""
    return all(
        market.choice(f, a | b) == a for f, (a, b) in enumerate(zip(mu.firm_side, nu.firm_side))
    )


def blair_compare(market: Market, mu: Matching, nu: Matching) -> BlairComparison:
    market.require_substitutable()
    if mu == nu:
        return BlairComparison.EQUAL
    if blair_geq(market, mu, nu):
        return BlairComparison.FIRST_DOMINATES
    if blair_geq(market, nu, mu):
        return BlairComparison.SECOND_DOMINATES
    return BlairComparison.INCOMPARABLE


def join(market: Market, mu: Matching, nu: Matching) -> Matching:
    """Least upper bound of two worker-quasi-stable matchings.

    Each firm takes its choice from the union of what it holds in either
    matching; each worker goes along with the firm that picks her.
    """
    market.require_substitutable()
    for m in (mu, nu):
        if not is_worker_quasi_stable(market, m):
            raise NotWorkerQuasiStable(format_matching(market, m))
    return _raw_join(market, mu, nu)


def _raw_join(market: Market, mu: Matching, nu: Matching) -> Matching:
    sides = [market.choice(f, a | b) for f, (a, b) in enumerate(zip(mu.firm_side, nu.firm_side))]
    try:
        return make_matching(market, sides)
    except MarketError as exc:
        raise AssertionError(f"join assigned a worker twice: {exc}") from exc


@dataclass(frozen=True, eq=False)
class WqsLattice:
    """The worker-quasi-stable set ordered by Blair's order.

    ``geq[i, j]`` is True when ``elements[i]`` weakly dominates
    ``elements[j]``; ``covers`` holds ``(lower, upper)`` index pairs.
    """

    market: Market
    elements: tuple[Matching, ...]
    geq: np.ndarray = field(repr=False)
    covers: tuple[tuple[int, int], ...]
    bottom: int
    top: int
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self._index.update({m: i for i, m in enumerate(self.elements)})

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, mu: Matching) -> bool:
        return mu in self._index

    def index(self, mu: Matching) -> int:
        try:
            return self._index[mu]
        except KeyError:
            raise NotInLattice(format_matching(self.market, mu)) from None

    def maximal(self) -> list[int]:
        """Indices with no strict upper bound in the lattice."""
        strict = self.geq & ~np.eye(len(self), dtype=bool)
        return [int(i) for i in np.nonzero(~strict.any(axis=0))[0]]


def blair_matrix(market: Market, elements: Iterable[Matching]) -> np.ndarray:
    """``out[i, j]`` is True when element ``i`` weakly dominates element ``j``."""
    elements = list(elements)
    out = np.ones((len(elements), len(elements)), dtype=bool)
    for f in range(market.n_firms):
        sides = np.array([m.firm_side[f] for m in elements], dtype=np.int64)
        chosen = market.choice_array(f)[sides[:, None] | sides[None, :]]
        out &= chosen == sides[:, None]
    return out


def cover_pairs(geq: np.ndarray) -> list[tuple[int, int]]:
    """Covering relation of a partial order given as a reflexive matrix."""
    n = len(geq)
    strict = (geq & ~np.eye(n, dtype=bool)).astype(np.int64)
    two_step = (strict @ strict) > 0
    upper, lower = np.nonzero(strict.astype(bool) & ~two_step)
    return sorted(zip(lower.tolist(), upper.tolist()))


def ir_candidates(market: Market, f: int) -> list[int]:
    """Worker sets ``f`` could hold in an individually rational matching."""
    out = [0]
    for s in market.firm_prefs[f]:
        if market.choice(f, s) != s:
            continue
        if all(market.acceptable_to_worker(w, f) for w in range(market.n_workers) if s >> w & 1):
            out.append(s)
    return out


def individually_rational_matchings(market: Market) -> list[Matching]:
    market.check_budget("matching enumeration", (market.n_firms + 1) ** market.n_workers)
    options = [ir_candidates(market, f) for f in range(market.n_firms)]
    found = []

    def extend(f: int, used: int, sides: list[int]) -> None:
        if f == market.n_firms:
            found.append(make_matching(market, sides))
            return
        for s in options[f]:
            if s & used == 0:
                sides.append(s)
                extend(f + 1, used | s, sides)
                sides.pop()

    extend(0, 0, [])
    return found


def enumerate_wqs(market: Market) -> WqsLattice:
    """Enumerate every worker-quasi-stable matching and order them."""
    market.require_substitutable()
    elements = sorted(m for m in individually_rational_matchings(market) if is_worker_quasi_stable(market, m))
    geq = blair_matrix(market, elements)
    n = len(elements)
    strict = geq & ~np.eye(n, dtype=bool)
    if (strict & strict.T).any():
        raise AssertionError("Blair order is not antisymmetric on the enumerated set")
    bottom = elements.index(empty_matching(market))
    tops = [i for i in range(n) if geq[i].all()]
    if len(tops) != 1 or not geq[:, bottom].all():
        raise NoUniqueBound("worker-quasi-stable set lacks a unique top or bottom")
    return WqsLattice(market, tuple(elements), geq, tuple(cover_pairs(geq)), bottom, tops[0])


def meet(lat: WqsLattice, mu: Matching, nu: Matching) -> Matching:
    """Greatest lower bound, found by searching the common lower bounds."""
    i, j = lat.index(mu), lat.index(nu)
    return lat.elements[meet_index(lat, i, j)]


def meet_index(lat: WqsLattice, i: int, j: int) -> int:
    lower = np.nonzero(lat.geq[i] & lat.geq[j])[0]
    best = [int(k) for k in lower if lat.geq[k, lower].all()]
    if len(best) != 1:
        raise NoUniqueBound("common lower bounds have no unique maximum")
    return best[0]


def join_table(lat: WqsLattice) -> np.ndarray:
    """``out[i, j]`` is the index of the join of elements ``i`` and ``j``."""
    market = lat.market
    n = len(lat)
    out = np.empty((n, n), dtype=np.int64)
    for i, j in itertools.combinations_with_replacement(range(n), 2):
        k = lat.index(_raw_join(market, lat.elements[i], lat.elements[j]))
        out[i, j] = out[j, i] = k
    return out


def export_hasse(lat: WqsLattice, highlight: Iterable[Matching] = ()) -> str:
    """DOT rendering of the covering relation, drawn bottom to top."""
    marked = set(highlight)
    lines = ["digraph wqs {", "  rankdir=BT;", "  node [shape=box];"]
    for i, mu in enumerate(lat.elements):
        style = ", penwidth=2" if mu in marked else ""
        lines.append(f'  m{i} [label="{format_matching(lat.market, mu)}"{style}];')
    for lower, upper in lat.covers:
        lines.append(f"  m{lower} -> m{upper};")
    lines.append("}")
    return "\n".join(lines) + "\n"
