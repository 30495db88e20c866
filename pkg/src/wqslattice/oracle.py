"""Brute-force reference implementations and random market generation.

Everything here is written straight from the definitions on top of plain
sets of names and deliberately shares no predicate code with the main
modules, so agreement between the two is meaningful.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Literal

from .errors import GenerationExhausted, MarketError, NoUniqueBound
from .market import Market, responsive_ranking
from .matchings import Matching

Assignment = dict  # firm name -> frozenset of worker names


class _View:
    """Name-based copy of a market's preference data."""

    def __init__(self, market: Market):
        self.firms = list(market.firms)
        self.workers = list(market.workers)
        self.worker_list = {
            market.workers[w]: [market.firms[f] for f in ranking]
            for w, ranking in enumerate(market.worker_prefs)
        }
        self.firm_list = {
            market.firms[f]: [
                frozenset(market.workers[w] for w in range(len(market.workers)) if s >> w & 1)
                for s in ranking
            ]
            for f, ranking in enumerate(market.firm_prefs)
        }

    def choose(self, firm: str, available: frozenset) -> frozenset:
        for option in self.firm_list[firm]:
            if option <= available:
                return option
        return frozenset()

    def likes(self, worker: str, firm: str, current: str | None) -> bool:
        """Does ``worker`` strictly prefer ``firm`` to ``current``?"""
        ranking = self.worker_list[worker]
        if firm not in ranking:
            return False
        if current is None or current not in ranking:
            return True
        return ranking.index(firm) < ranking.index(current)

    def employer(self, assignment: Assignment, worker: str) -> str | None:
        for firm, staff in assignment.items():
            if worker in staff:
                return firm
        return None

    def rational(self, assignment: Assignment) -> bool:
        for firm, staff in assignment.items():
            if self.choose(firm, staff) != staff:
                return False
            for worker in staff:
                if firm not in self.worker_list[worker]:
                    return False
        return True

    def blocks(self, assignment: Assignment) -> list[tuple[str, str]]:
        out = []
        for firm in self.firms:
            staff = assignment[firm]
            for worker in self.workers:
                if worker in staff:
                    continue
                wants = worker in self.choose(firm, staff | {worker})
                if wants and self.likes(worker, firm, self.employer(assignment, worker)):
                    out.append((firm, worker))
        return out

    def wqs(self, assignment: Assignment) -> bool:
        return self.rational(assignment) and all(
            self.employer(assignment, w) is None for _, w in self.blocks(assignment)
        )

    def stable(self, assignment: Assignment) -> bool:
        return self.rational(assignment) and not self.blocks(assignment)

    def dominates(self, a: Assignment, b: Assignment) -> bool:
        return all(self.choose(f, a[f] | b[f]) == a[f] for f in self.firms)

    def to_assignment(self, mu: Matching) -> Assignment:
        return {
            f: frozenset(w for j, w in enumerate(self.workers) if mu.firm_side[i] >> j & 1)
            for i, f in enumerate(self.firms)
        }

    def to_matching(self, assignment: Assignment) -> Matching:
        sides = []
        employer: list[int | None] = [None] * len(self.workers)
        for i, f in enumerate(self.firms):
            mask = 0
            for w in assignment[f]:
                j = self.workers.index(w)
                if employer[j] is not None:
                    raise MarketError(f"oracle built an invalid matching at {w}")
                employer[j] = i
                mask |= 1 << j
            sides.append(mask)
        return Matching(tuple(sides), tuple(employer))


def enumerate_all_matchings(market: Market) -> Iterator[Matching]:
    """Every function from workers to firms-or-unmatched, in canonical order."""
    nf, nw = market.n_firms, market.n_workers
    market.check_budget("matching enumeration", (nf + 1) ** nw)
    found = []
    for choice in itertools.product(range(-1, nf), repeat=nw):
        sides = [0] * nf
        for w, f in enumerate(choice):
            if f >= 0:
                sides[f] |= 1 << w
        found.append(Matching(tuple(sides), tuple(None if f < 0 else f for f in choice)))
    found.sort()
    yield from found


def oracle_wqs(market: Market) -> list[Matching]:
    view = _View(market)
    return [mu for mu in enumerate_all_matchings(market) if view.wqs(view.to_assignment(mu))]


def oracle_stable(market: Market) -> list[Matching]:
    view = _View(market)
    return [mu for mu in enumerate_all_matchings(market) if view.stable(view.to_assignment(mu))]


def oracle_geq(market: Market, mu: Matching, nu: Matching) -> bool:
    view = _View(market)
    return view.dominates(view.to_assignment(mu), view.to_assignment(nu))


def oracle_join(market: Market, wqs: list[Matching], mu: Matching, nu: Matching) -> Matching:
    """Least common upper bound inside ``wqs``, found by exhaustive search."""
    view = _View(market)
    pool = [view.to_assignment(x) for x in wqs]
    a, b = view.to_assignment(mu), view.to_assignment(nu)
    upper = [x for x in pool if view.dominates(x, a) and view.dominates(x, b)]
    least = [x for x in upper if all(view.dominates(y, x) for y in upper)]
    if len(least) != 1:
        raise NoUniqueBound(f"{len(least)} least upper bounds found")
    return view.to_matching(least[0])


def oracle_step(market: Market, mu: Matching) -> Matching:
    """One round of best-blocking-firm proposals followed by firm re-choice."""
    view = _View(market)
    a = view.to_assignment(mu)
    offers: dict[str, set] = {f: set() for f in view.firms}
    for worker in view.workers:
        partners = [f for f, w in view.blocks(a) if w == worker]
        if partners:
            ranking = view.worker_list[worker]
            offers[min(partners, key=ranking.index)].add(worker)
    return view.to_matching({f: view.choose(f, a[f] | offers[f]) for f in view.firms})


def oracle_fixed_point(market: Market, mu: Matching, limit: int = 10_000) -> Matching:
    for _ in range(limit):
        nxt = oracle_step(market, mu)
        if nxt == mu:
            return mu
        mu = nxt
    raise MarketError("oracle iteration did not settle")


# generation


@dataclass(frozen=True)
class GeneratorConfig:
    firm_count: int
    worker_count: int
    quota_range: tuple[int, int] = (1, 2)
    seed: int = 0
    mode: Literal["responsive", "free"] = "responsive"
    max_attempts: int = 10_000

    def __post_init__(self) -> None:
        lo, hi = self.quota_range
        if self.firm_count < 1 or self.worker_count < 1:
            raise MarketError("a generated market needs at least one firm and one worker")
        if lo < 1 or hi < lo:
            raise MarketError(f"bad quota range {self.quota_range}")
        if self.mode not in ("responsive", "free"):
            raise MarketError(f"unknown generator mode {self.mode!r}")


def _substitutable(ranking: list[int], n: int) -> bool:
    def choose(s: int) -> int:
        for t in ranking:
            if t & ~s == 0:
                return t
        return 0

    for s in range(1 << n):
        chosen = choose(s)
        for x in range(n):
            if s >> x & 1 and chosen & ~choose(s & ~(1 << x)) & ~(1 << x):
                return False
    return True


def _ranking(rng: random.Random, n: int) -> list[int]:
    """Random strict order over ``range(n)``, cut short one time in four."""
    order = rng.sample(range(n), n)
    if rng.random() < 0.25:
        order = order[: rng.randint(1, n)]
    return order


def generate_market(cfg: GeneratorConfig) -> Market:
    """Deterministic random market for the given configuration."""
    rng = random.Random(cfg.seed)
    nf, nw = cfg.firm_count, cfg.worker_count
    firms = tuple(f"f{i + 1}" for i in range(nf))
    workers = tuple(f"w{i + 1}" for i in range(nw))
    worker_prefs = tuple(tuple(_ranking(rng, nf)) for _ in range(nw))
    firm_prefs = []
    attempts = 0
    for _ in range(nf):
        if cfg.mode == "responsive":
            order = _ranking(rng, nw)
            firm_prefs.append(responsive_ranking(order, rng.randint(*cfg.quota_range)))
            continue
        while True:
            attempts += 1
            if attempts > cfg.max_attempts:
                raise GenerationExhausted(f"no substitutable ranking in {cfg.max_attempts} draws")
            k = rng.randint(1, min((1 << nw) - 1, 2 * nw))
            ranking = rng.sample(range(1, 1 << nw), k)
            if _substitutable(ranking, nw):
                firm_prefs.append(tuple(ranking))
                break
    return Market(firms, workers, worker_prefs, tuple(firm_prefs))
