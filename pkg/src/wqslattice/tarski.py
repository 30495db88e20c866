"""The re-stabilization operator and the results that hinge on it.

One application of the operator lets every worker who can block propose to
her favourite blocking firm; each firm then chooses from its current staff
plus the proposals it received.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotWorkerQuasiStable, NoUnanimousOptimum, RoundCapExceeded
from .lattice import WqsLattice, blair_geq, join
from .market import Market, Verdict
from .matchings import (
    BlockingPair,
    Matching,
    blocking_pairs,
    format_matching,
    format_pair,
    format_set_compact,
    is_stable,
    is_worker_quasi_stable,
    make_matching,
)


@dataclass(frozen=True)
class ProposalRound:
    star_pairs: tuple[BlockingPair, ...]
    proposals: tuple[int, ...]
    before: Matching
    after: Matching


@dataclass(frozen=True)
class StabilizationTrace:
    start: Matching
    rounds: tuple[ProposalRound, ...]
    fixed_point: Matching


def _require_wqs(market: Market, mu: Matching) -> None:
    if not is_worker_quasi_stable(market, mu):
        raise NotWorkerQuasiStable(format_matching(market, mu))


def star_blocking_pairs(market: Market, mu: Matching) -> list[BlockingPair]:
    """For each blocking worker, the pair with her most preferred blocking firm."""
    _require_wqs(market, mu)
    best: dict[int, int] = {}
    for f, w in blocking_pairs(market, mu):
        if w not in best:
            best[w] = f
            continue
        here, there = market.worker_rank(w, f), market.worker_rank(w, best[w])
        assert here != there, "worker preferences must be strict"
        if here < there:
            best[w] = f
    return sorted(BlockingPair(f, w) for w, f in best.items())


def apply_T(market: Market, mu: Matching) -> ProposalRound:
    market.require_substitutable()
    star = star_blocking_pairs(market, mu)
    proposals = [0] * market.n_firms
    for f, w in star:
        proposals[f] |= 1 << w
    after = make_matching(
        market, [market.choice(f, s | proposals[f]) for f, s in enumerate(mu.firm_side)]
    )
    return ProposalRound(tuple(star), tuple(proposals), mu, after)


def default_round_cap(market: Market, lattice: WqsLattice | None = None) -> int:
    if lattice is not None:
        return len(lattice)
    return (market.n_firms + 1) ** market.n_workers


def stabilize(
    market: Market,
    mu: Matching,
    max_rounds: int | None = None,
    lattice: WqsLattice | None = None,
) -> StabilizationTrace:
    """Iterate the operator from ``mu`` until nothing changes."""
    cap = default_round_cap(market, lattice) if max_rounds is None else max_rounds
    rounds = []
    current = mu
    while True:
        step = apply_T(market, current)
        if step.after == current:
            break
        if len(rounds) >= cap:
            raise RoundCapExceeded(
                f"no fixed point after {cap} rounds from {format_matching(market, mu)}"
            )
        rounds.append(step)
        current = step.after
    return StabilizationTrace(mu, tuple(rounds), current)


def t_table(lat: WqsLattice) -> np.ndarray:
    """Index of the operator's image for every lattice element."""
    market = lat.market
    return np.array([lat.index(apply_T(market, mu).after) for mu in lat.elements], dtype=np.int64)


def check_isotone(market: Market, lat: WqsLattice) -> Verdict:
    t = t_table(lat)
    ok = lat.geq[np.ix_(t, t)] | ~lat.geq
    bad = np.argwhere(~ok)
    if len(bad):
        i, j = bad[0]
        return Verdict(False, (lat.elements[i], lat.elements[j]))
    return Verdict(True)


def fixed_points(market: Market, lat: WqsLattice) -> list[Matching]:
    return [mu for mu in lat.elements if apply_T(market, mu).after == mu]


def stable_elements(market: Market, lat: WqsLattice) -> list[Matching]:
    return [mu for mu in lat.elements if is_stable(market, mu)]


def worker_optimal_stable(market: Market, lat: WqsLattice) -> Matching:
    """The stable matching every worker weakly prefers to every other stable one."""
    market.require_substitutable()
    stables = stable_elements(market, lat)
    for cand in stables:
        if all(
            market.worker_rank(w, cand.employer(w)) <= market.worker_rank(w, other.employer(w))
            for other in stables
            for w in range(market.n_workers)
        ):
            return cand
    raise NoUnanimousOptimum("no stable matching is weakly best for every worker")


def check_join_with_stable(market: Market, lat: WqsLattice) -> Verdict:
    market.require_lad()
    stables = stable_elements(market, lat)
    for mu in lat.elements:
        for nu in stables:
            if not is_stable(market, join(market, mu, nu)):
                return Verdict(False, (mu, nu))
    return Verdict(True)


def check_fixed_point_formula(market: Market, lat: WqsLattice) -> Verdict:
    market.require_lad()
    best = worker_optimal_stable(market, lat)
    for mu in lat.elements:
        if stabilize(market, mu, lattice=lat).fixed_point != join(market, mu, best):
            return Verdict(False, (mu,))
    return Verdict(True)


def check_corollaries(market: Market, lat: WqsLattice) -> Verdict:
    """Hire-count bound, domination of the worker-optimal matching implies
    stability, and equal per-firm hires across stable matchings."""
    market.require_lad()
    stables = stable_elements(market, lat)
    best = worker_optimal_stable(market, lat)
    for mu in lat.elements:
        for nu in stables:
            if mu.hired() > nu.hired():
                return Verdict(False, ("hire-bound", mu, nu))
        if blair_geq(market, mu, best) and not is_stable(market, mu):
            return Verdict(False, ("dominates-worker-optimal", mu))
    for nu in stables:
        counts = [s.bit_count() for s in nu.firm_side]
        if counts != [s.bit_count() for s in best.firm_side]:
            return Verdict(False, ("rural-hospital", nu, best))
    return Verdict(True)


# trace rendering


def format_trace(market: Market, trace: StabilizationTrace) -> str:
    lines = [f"start: {format_matching(market, trace.start)}"]
    for k, step in enumerate(trace.rounds, start=1):
        lines.append(f"round {k}:")
        lines.append("  star: " + " ".join(format_pair(market, p) for p in step.star_pairs))
        offers = [
            f"{market.firms[f]}<-{format_set_compact(market, s)}"
            for f, s in enumerate(step.proposals)
            if s
        ]
        lines.append("  proposals: " + " ".join(offers))
        lines.append(f"  T -> {format_matching(market, step.after)}")
    lines.append(f"fixed point: {format_matching(market, trace.fixed_point)}")
    lines.append(f"rounds: {len(trace.rounds)}")
    return "\n".join(lines) + "\n"


def trace_to_json(market: Market, trace: StabilizationTrace) -> dict:
    return {
        "start": format_matching(market, trace.start),
        "rounds": [
            {
                "star": [[market.firms[f], market.workers[w]] for f, w in step.star_pairs],
                "proposals": {
                    market.firms[f]: format_set_compact(market, s)
                    for f, s in enumerate(step.proposals)
                },
                "before": format_matching(market, step.before),
                "after": format_matching(market, step.after),
            }
            for step in trace.rounds
        ],
        "fixed_point": format_matching(market, trace.fixed_point),
    }
